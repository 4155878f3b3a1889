// SPDX-License-Identifier: MIT
//! 0/1 matrices with node-labelled rows and columns, stored as packed bit
//! rows. Sums and products of such matrices only ever feed the indicator
//! `In[·]`, so all arithmetic here is boolean; `IntMatrix` keeps the plain
//! nonnegative-integer route alongside as the reference the bit route is
//! tested against.

use std::fmt;

use crate::graph::NodeId;

/// Domain errors of the matrix calculus.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MatrixError {
    NegativeEntry { row: usize, col: usize },
    ShapeMismatch,
    NotSquare,
    UnknownIndex(NodeId),
}

impl fmt::Display for MatrixError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixError::NegativeEntry { row, col } => {
                write!(f, "negative entry at ({row}, {col})")
            }
            MatrixError::ShapeMismatch => write!(f, "matrix shapes do not match"),
            MatrixError::NotSquare => write!(f, "operation requires a square matrix"),
            MatrixError::UnknownIndex(i) => write!(f, "index {i} not present in matrix"),
        }
    }
}

impl std::error::Error for MatrixError {}

/// Binary matrix over ordered row and column node lists.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BinaryMatrix {
    rows: Vec<NodeId>,
    cols: Vec<NodeId>,
    words: usize,
    bits: Vec<u64>,
}

impl BinaryMatrix {
    pub fn zeros(rows: Vec<NodeId>, cols: Vec<NodeId>) -> BinaryMatrix {
        let words = cols.len().div_ceil(64).max(1);
        let bits = vec![0; rows.len() * words];
        BinaryMatrix {
            rows,
            cols,
            words,
            bits,
        }
    }

    /// Square unit-diagonal matrix over `nodes`.
    pub fn identity(nodes: Vec<NodeId>) -> BinaryMatrix {
        let mut m = BinaryMatrix::zeros(nodes.clone(), nodes);
        for i in 0..m.rows.len() {
            m.set(i, i, true);
        }
        m
    }

    pub fn row_labels(&self) -> &[NodeId] {
        &self.rows
    }

    pub fn col_labels(&self) -> &[NodeId] {
        &self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows.len(), self.cols.len())
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        let w = r * self.words + c / 64;
        if value {
            self.bits[w] |= 1 << (c % 64);
        } else {
            self.bits[w] &= !(1 << (c % 64));
        }
    }

    fn row_position(&self, i: NodeId) -> Result<usize, MatrixError> {
        self.rows
            .iter()
            .position(|&x| x == i)
            .ok_or(MatrixError::UnknownIndex(i))
    }

    fn col_position(&self, i: NodeId) -> Result<usize, MatrixError> {
        self.cols
            .iter()
            .position(|&x| x == i)
            .ok_or(MatrixError::UnknownIndex(i))
    }

    /// Entry addressed by node indices rather than positions.
    pub fn get_at(&self, i: NodeId, k: NodeId) -> Result<bool, MatrixError> {
        Ok(self.get(self.row_position(i)?, self.col_position(k)?))
    }

    /// Entry-wise OR; shapes and labelings must match.
    pub fn or(&self, other: &BinaryMatrix) -> Result<BinaryMatrix, MatrixError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MatrixError::ShapeMismatch);
        }
        let mut out = self.clone();
        for (w, o) in out.bits.iter_mut().zip(other.bits.iter()) {
            *w |= o;
        }
        Ok(out)
    }

    /// Boolean matrix product: `In[self · other]` over nonnegative entries.
    pub fn mul(&self, other: &BinaryMatrix) -> Result<BinaryMatrix, MatrixError> {
        if self.cols.len() != other.rows.len() {
            return Err(MatrixError::ShapeMismatch);
        }
        let mut out = BinaryMatrix::zeros(self.rows.clone(), other.cols.clone());
        for r in 0..self.rows.len() {
            let dst = r * out.words;
            for mid in 0..self.cols.len() {
                if self.get(r, mid) {
                    let src = mid * other.words;
                    for w in 0..other.words {
                        out.bits[dst + w] |= other.bits[src + w];
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> BinaryMatrix {
        let mut out = BinaryMatrix::zeros(self.cols.clone(), self.rows.clone());
        for r in 0..self.rows.len() {
            for c in 0..self.cols.len() {
                if self.get(r, c) {
                    out.set(c, r, true);
                }
            }
        }
        out
    }

    /// Submatrix with the given row and column node lists, in the given order.
    pub fn submatrix(&self, rows: &[NodeId], cols: &[NodeId]) -> Result<BinaryMatrix, MatrixError> {
        let rpos: Vec<usize> = rows
            .iter()
            .map(|&i| self.row_position(i))
            .collect::<Result<_, _>>()?;
        let cpos: Vec<usize> = cols
            .iter()
            .map(|&i| self.col_position(i))
            .collect::<Result<_, _>>()?;
        let mut out = BinaryMatrix::zeros(rows.to_vec(), cols.to_vec());
        for (r, &rp) in rpos.iter().enumerate() {
            for (c, &cp) in cpos.iter().enumerate() {
                if self.get(rp, cp) {
                    out.set(r, c, true);
                }
            }
        }
        Ok(out)
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for r in 0..self.rows.len() {
            for c in 0..r {
                if self.get(r, c) != self.get(c, r) {
                    return false;
                }
            }
        }
        true
    }

    pub fn has_unit_diagonal(&self) -> bool {
        self.rows == self.cols && (0..self.rows.len()).all(|i| self.get(i, i))
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Entry-wise `<=`.
    pub fn dominated_by(&self, other: &BinaryMatrix) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self
                .bits
                .iter()
                .zip(other.bits.iter())
                .all(|(a, b)| a & !b == 0)
    }

    /// Integer copy of the matrix, for the reference arithmetic route.
    pub fn to_int(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows.clone(), self.cols.clone());
        for r in 0..self.rows.len() {
            for c in 0..self.cols.len() {
                if self.get(r, c) {
                    m.set(r, c, 1);
                }
            }
        }
        m
    }

    /// Text grid with row and column labels, rendered through `name`.
    pub fn labeled_grid(&self, name: impl Fn(NodeId) -> String) -> String {
        let col_names: Vec<String> = self.cols.iter().map(|&c| name(c)).collect();
        let row_names: Vec<String> = self.rows.iter().map(|&r| name(r)).collect();
        let left = row_names.iter().map(|s| s.len()).max().unwrap_or(0);
        let mut out = String::new();
        out.push_str(&" ".repeat(left));
        for c in &col_names {
            out.push(' ');
            out.push_str(c);
        }
        out.push('\n');
        for (r, rn) in row_names.iter().enumerate() {
            out.push_str(&format!("{rn:>left$}"));
            for (c, cn) in col_names.iter().enumerate() {
                let cell = if self.get(r, c) { "1" } else { "0" };
                out.push_str(&format!(" {cell:>width$}", width = cn.len()));
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows.len() {
            for c in 0..self.cols.len() {
                write!(f, "{}", if self.get(r, c) { 1 } else { 0 })?;
                if c + 1 < self.cols.len() {
                    write!(f, " ")?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Plain integer matrix, the reference route for products and sums.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: Vec<NodeId>,
    cols: Vec<NodeId>,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: Vec<NodeId>, cols: Vec<NodeId>) -> IntMatrix {
        let data = vec![0; rows.len() * cols.len()];
        IntMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<NodeId>, cols: Vec<NodeId>, entries: &[&[i64]]) -> IntMatrix {
        let mut m = IntMatrix::zeros(rows, cols);
        for (r, row) in entries.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, v);
            }
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols.len() + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        let w = r * self.cols.len() + c;
        self.data[w] = v;
    }

    pub fn add(&self, other: &IntMatrix) -> Result<IntMatrix, MatrixError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MatrixError::ShapeMismatch);
        }
        let mut out = self.clone();
        for (w, o) in out.data.iter_mut().zip(other.data.iter()) {
            *w += o;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, MatrixError> {
        if self.cols.len() != other.rows.len() {
            return Err(MatrixError::ShapeMismatch);
        }
        let mut out = IntMatrix::zeros(self.rows.clone(), other.cols.clone());
        for r in 0..self.rows.len() {
            for mid in 0..self.cols.len() {
                let v = self.get(r, mid);
                if v != 0 {
                    for c in 0..other.cols.len() {
                        out.set(r, c, out.get(r, c) + v * other.get(mid, c));
                    }
                }
            }
        }
        Ok(out)
    }
}

/// `In[·]`: entry-wise indicator of a nonnegative matrix. A negative entry is
/// a domain error.
pub fn indicator(m: &IntMatrix) -> Result<BinaryMatrix, MatrixError> {
    let mut out = BinaryMatrix::zeros(m.rows.clone(), m.cols.clone());
    for r in 0..m.rows.len() {
        for c in 0..m.cols.len() {
            let v = m.get(r, c);
            if v < 0 {
                return Err(MatrixError::NegativeEntry { row: r, col: c });
            }
            if v > 0 {
                out.set(r, c, true);
            }
        }
    }
    Ok(out)
}

/// Partial closure `zer_a`: for each node of `a` in turn, close every V whose
/// inner node it is, by `F_bb <- In[F_bb + F_bi F_ib]`. Entries only switch
/// from 0 to 1; the result does not depend on the order of `a`.
///
/// Requires a square matrix with matching row/column labels, unit diagonal,
/// and `a` within its label set.
pub fn zer(f: &BinaryMatrix, a: &[NodeId]) -> BinaryMatrix {
    assert_eq!(f.rows, f.cols, "zer needs a square, label-aligned matrix");
    debug_assert!(f.has_unit_diagonal(), "zer needs a unit diagonal");
    let mut m = f.clone();
    let n = m.rows.len();
    for &node in a {
        let i = m
            .row_position(node)
            .unwrap_or_else(|_| panic!("zer: index {node} not in matrix"));
        // Row r gains row i wherever F(r, i) = 1. Row and column i are
        // untouched: (r, i) is already 1 and the diagonal keeps it so.
        let src = i * m.words;
        for r in 0..n {
            if r != i && m.get(r, i) {
                let dst = r * m.words;
                for w in 0..m.words {
                    let v = m.bits[src + w];
                    m.bits[dst + w] |= v;
                }
            }
        }
    }
    m
}

/// Reference implementation of `zer` on the integer route: one explicit
/// single-node step of `In[F_bb + F_bi F_ib]` per element of `a`.
pub fn zer_reference(f: &BinaryMatrix, a: &[NodeId]) -> BinaryMatrix {
    let mut m = f.clone();
    let n = m.rows.len();
    for &node in a {
        let i = m.row_position(node).expect("zer: index not in matrix");
        let mut next = m.to_int();
        for r in 0..n {
            for c in 0..n {
                if r != i && c != i {
                    let v = next.get(r, c) + i64::from(m.get(r, i)) * i64::from(m.get(i, c));
                    next.set(r, c, v);
                }
            }
        }
        m = indicator(&next).expect("nonnegative by construction");
    }
    m
}
