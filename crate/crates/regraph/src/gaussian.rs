// SPDX-License-Identifier: MIT
//! Numeric verification against linear Gaussian systems generated over a
//! graph.
//!
//! A system is `H Y = η` with `cov(η) = W` block-diagonal: unit diagonal and
//! one nonzero per arrow in the response rows of `H`, the marginal
//! concentration of the context variables in its context block, conditional
//! covariance blocks (dashed edges) in `W`. The implied joint covariance is
//! `Σ = H⁻¹ W H⁻ᵀ`, conditional independence is a vanishing partial
//! covariance, and the graph's verdicts are checked against that numerically.

use std::collections::BTreeSet;
use std::fmt;

use crate::graph::{ComponentKind, EdgeKind, NodeId, RegressionGraph};
use crate::induced::{self, Verdict};
use crate::linalg::{Matrix, SingularMatrix};
use crate::rng::SplitMix64;

/// Default magnitude range for sampled arrow coefficients. Kept well away
/// from zero so implied dependences do not sit near accidental cancellation.
pub const DEFAULT_MAGNITUDE_RANGE: (f64, f64) = (0.3, 1.0);

/// Default absolute tolerance for "numerically zero" partial covariances, on
/// the standardized (correlation) scale.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Parameter matrices of a linear system generated over a graph.
#[derive(Clone, Debug)]
pub struct GaussianSystem {
    /// Equation matrix: unit diagonal on response rows, arrow coefficients
    /// in the response rows, context concentration in the context block.
    pub h: Matrix,
    /// Noise covariance: block-diagonal, dashed-edge blocks on responses,
    /// equal to the context block of `h` on the context side.
    pub w: Matrix,
}

/// Symmetric positive-definite covariance matrix.
#[derive(Clone, Debug)]
pub struct CovarianceMatrix(Matrix);

/// Constructing a covariance matrix from something not positive definite.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NotPositiveDefinite;

impl fmt::Display for NotPositiveDefinite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "matrix is not symmetric positive definite")
    }
}

impl std::error::Error for NotPositiveDefinite {}

impl CovarianceMatrix {
    pub fn new(m: Matrix) -> Result<CovarianceMatrix, NotPositiveDefinite> {
        let n = m.rows();
        if m.cols() != n {
            return Err(NotPositiveDefinite);
        }
        for i in 0..n {
            for j in 0..i {
                if (m.get(i, j) - m.get(j, i)).abs() > 1e-9 * (1.0 + m.get(i, i).abs()) {
                    return Err(NotPositiveDefinite);
                }
            }
        }
        if m.cholesky().is_none() {
            return Err(NotPositiveDefinite);
        }
        Ok(CovarianceMatrix(m))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    /// Standardized copy: unit variances, entries are correlations.
    pub fn correlation(&self) -> CovarianceMatrix {
        let n = self.dim();
        let mut out = self.0.clone();
        let scale: Vec<f64> = (0..n).map(|i| self.0.get(i, i).sqrt()).collect();
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, self.0.get(i, j) / (scale[i] * scale[j]));
            }
        }
        CovarianceMatrix(out)
    }
}

/// Draw a system whose parameter supports match the graph exactly.
///
/// Arrow coefficients have magnitude in `range` with random sign. Undirected
/// blocks (dashed within a response component, full lines in the context
/// block) get unit diagonals and off-diagonal magnitudes at most `0.3`
/// divided by the block's maximum degree, keeping every block strictly
/// diagonally dominant and so positive definite. Deterministic per seed.
pub fn sample_system(g: &RegressionGraph, seed: u64, range: (f64, f64)) -> GaussianSystem {
    let (lo, hi) = range;
    assert!(0.0 < lo && lo <= hi);
    let n = g.node_count();
    let mut rng = SplitMix64::new(seed);
    let mut h = Matrix::identity(n);
    let mut w = Matrix::identity(n);

    for (head, tail, kind) in g.edges() {
        if kind == EdgeKind::Arrow {
            h.set(head.0, tail.0, rng.next_sign() * rng.next_range(lo, hi));
        }
    }

    for j in 0..g.component_count() {
        let members = g.component_nodes(j);
        if members.len() < 2 {
            continue;
        }
        let undirected_kind = match g.component_kind(j) {
            ComponentKind::Response => EdgeKind::Dashed,
            ComponentKind::Context => EdgeKind::FullLine,
        };
        let degree = |i: NodeId| -> usize {
            match undirected_kind {
                EdgeKind::Dashed => g.dashed_neighbors(i).count(),
                _ => g.full_neighbors(i).count(),
            }
        };
        let max_degree = members.iter().map(|&i| degree(i)).max().unwrap_or(1).max(1);
        let scale = 0.3 / max_degree as f64;
        for &i in &members {
            for &k in &members {
                if i < k && g.edge_kind(i, k) == Some(undirected_kind) {
                    let v = rng.next_sign() * rng.next_range(scale / 3.0, scale);
                    w.set(i.0, k.0, v);
                    w.set(k.0, i.0, v);
                    if undirected_kind == EdgeKind::FullLine {
                        h.set(i.0, k.0, v);
                        h.set(k.0, i.0, v);
                    }
                }
            }
        }
    }
    GaussianSystem { h, w }
}

/// `Σ = H⁻¹ W H⁻ᵀ`, the joint covariance the system implies.
pub fn joint_covariance(sys: &GaussianSystem) -> Result<CovarianceMatrix, SingularMatrix> {
    let hw = sys.h.solve(&sys.w)?; // H⁻¹ W
    let sigma = sys.h.solve(&hw.transpose())?.transpose(); // (H⁻¹ (H⁻¹W)ᵀ)ᵀ
                                                           // symmetrize away solver round-off
    let n = sigma.rows();
    let mut out = sigma.clone();
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, 0.5 * (sigma.get(i, j) + sigma.get(j, i)));
        }
    }
    CovarianceMatrix::new(out).map_err(|_| SingularMatrix)
}

/// `Σ_ik − Σ_ic Σ_cc⁻¹ Σ_ck`; plain `Σ_ik` when `c` is empty.
pub fn partial_covariance(
    cov: &CovarianceMatrix,
    i: NodeId,
    k: NodeId,
    cond: &BTreeSet<NodeId>,
) -> f64 {
    let m = cov.matrix();
    if cond.is_empty() {
        return m.get(i.0, k.0);
    }
    let c: Vec<usize> = cond.iter().map(|x| x.0).collect();
    let s_cc = m.submatrix(&c, &c);
    let s_ck = m.submatrix(&c, &[k.0]);
    let x = s_cc.solve(&s_ck).expect("conditioning block is PD");
    let s_ic = m.submatrix(&[i.0], &c);
    m.get(i.0, k.0) - s_ic.mul(&x).get(0, 0)
}

/// Outcome of checking one `(i, k | c)` triple across all draws.
#[derive(Clone, Debug)]
pub struct TripleOutcome {
    pub i: NodeId,
    pub k: NodeId,
    pub cond: Vec<NodeId>,
    pub implied: Verdict,
    /// Largest |partial covariance| seen over the draws.
    pub max_abs: f64,
    /// Number of draws with |partial covariance| above tolerance.
    pub exceed_count: usize,
    pub ok: bool,
}

/// Numeric check of every singleton pair against every conditioning set.
#[derive(Clone, Debug)]
pub struct OracleReport {
    pub draws: usize,
    pub tol: f64,
    pub triples: Vec<TripleOutcome>,
    /// Largest |partial covariance| seen on any implied independence.
    pub max_abs_independent: f64,
}

impl OracleReport {
    pub fn violations(&self) -> impl Iterator<Item = &TripleOutcome> {
        self.triples.iter().filter(|t| !t.ok)
    }

    pub fn ok(&self) -> bool {
        self.triples.iter().all(|t| t.ok)
    }
}

/// For every `(i, k, c)` with `i, k` single nodes: an implied independence
/// must give |partial covariance| ≤ `tol` in every draw; an implied
/// dependence must exceed `tol` in at least `draws − 1` of them (one draw of
/// slack against parametric flukes). Partial covariances are taken on the
/// correlation scale. Draw `d` uses the sub-seed `seed ^ d`.
pub fn oracle_check(
    g: &RegressionGraph,
    draws: usize,
    tol: f64,
    seed: u64,
) -> Result<OracleReport, SingularMatrix> {
    let nodes: Vec<NodeId> = g.nodes().collect();
    let mut triples: Vec<(NodeId, NodeId, BTreeSet<NodeId>, Verdict)> = Vec::new();
    for (p, &i) in nodes.iter().enumerate() {
        for &k in &nodes[p + 1..] {
            let rest: Vec<NodeId> = nodes
                .iter()
                .copied()
                .filter(|&x| x != i && x != k)
                .collect();
            for mask in 0..(1usize << rest.len()) {
                let cond: BTreeSet<NodeId> = rest
                    .iter()
                    .enumerate()
                    .filter(|(p, _)| mask >> p & 1 == 1)
                    .map(|(_, &x)| x)
                    .collect();
                let alpha: BTreeSet<_> = [i].into_iter().collect();
                let beta: BTreeSet<_> = [k].into_iter().collect();
                let verdict = induced::implies(g, &alpha, &beta, &cond)
                    .expect("disjoint by construction")
                    .verdict;
                triples.push((i, k, cond, verdict));
            }
        }
    }

    let mut max_abs = vec![0.0f64; triples.len()];
    let mut exceed = vec![0usize; triples.len()];
    for d in 0..draws {
        let sys = sample_system(g, seed ^ d as u64, DEFAULT_MAGNITUDE_RANGE);
        let corr = joint_covariance(&sys)?.correlation();
        for (t, (i, k, cond, _)) in triples.iter().enumerate() {
            let pc = partial_covariance(&corr, *i, *k, cond).abs();
            if pc > max_abs[t] {
                max_abs[t] = pc;
            }
            if pc > tol {
                exceed[t] += 1;
            }
        }
    }

    let mut outcomes = Vec::with_capacity(triples.len());
    let mut max_abs_independent = 0.0f64;
    for (t, (i, k, cond, implied)) in triples.into_iter().enumerate() {
        let ok = match implied {
            Verdict::Independent => {
                max_abs_independent = max_abs_independent.max(max_abs[t]);
                exceed[t] == 0
            }
            Verdict::Dependent => exceed[t] + 1 >= draws,
        };
        outcomes.push(TripleOutcome {
            i,
            k,
            cond: cond.into_iter().collect(),
            implied,
            max_abs: max_abs[t],
            exceed_count: exceed[t],
            ok,
        });
    }
    Ok(OracleReport {
        draws,
        tol,
        triples: outcomes,
        max_abs_independent,
    })
}

/// One zero-pattern containment failure: a numeric value above tolerance at
/// a position the induced edge matrices declare structurally zero.
#[derive(Clone, Debug)]
pub struct ContainmentViolation {
    pub which: &'static str,
    pub row: NodeId,
    pub col: NodeId,
    pub value: f64,
}

/// Check, for every split `N = (a, b)`, that the numeric regression
/// coefficients `Σ_ab Σ_bb⁻¹`, conditional covariance `Σ_aa|b`, and marginal
/// `b`-concentration are supported within the induced edge matrices of the
/// split.
pub fn zero_pattern_check(
    g: &RegressionGraph,
    sys: &GaussianSystem,
    tol: f64,
) -> Result<Vec<ContainmentViolation>, SingularMatrix> {
    let corr = joint_covariance(sys)?.correlation();
    let m = corr.matrix();
    let nodes: Vec<NodeId> = g.nodes().collect();
    let mut violations = Vec::new();
    for mask in 0..(1usize << nodes.len()) {
        let a_set: BTreeSet<NodeId> = nodes
            .iter()
            .enumerate()
            .filter(|(p, _)| mask >> p & 1 == 1)
            .map(|(_, &x)| x)
            .collect();
        let a: Vec<usize> = a_set.iter().map(|x| x.0).collect();
        let b: Vec<usize> = nodes
            .iter()
            .filter(|x| !a_set.contains(x))
            .map(|x| x.0)
            .collect();
        let triple = induced::induced_split(g, &a_set);

        let s_aa = m.submatrix(&a, &a);
        let s_ab = m.submatrix(&a, &b);
        let s_bb = m.submatrix(&b, &b);

        let (coeff, cond_cov) = if b.is_empty() {
            (Matrix::zeros(a.len(), 0), s_aa.clone())
        } else {
            let x = s_bb.solve(&s_ab.transpose())?; // Σ_bb⁻¹ Σ_ba
            let coeff = x.transpose();
            let cond_cov = s_aa.sub(&s_ab.mul(&x));
            (coeff, cond_cov)
        };
        let conc_b = if b.is_empty() {
            Matrix::zeros(0, 0)
        } else {
            s_bb.inverse()?
        };

        let mut check = |name: &'static str,
                         numeric: &Matrix,
                         support: &crate::bitmatrix::BinaryMatrix,
                         rows: &[usize],
                         cols: &[usize]| {
            for (r, &ri) in rows.iter().enumerate() {
                for (c, &ci) in cols.iter().enumerate() {
                    if !support.get(r, c) && numeric.get(r, c).abs() > tol {
                        violations.push(ContainmentViolation {
                            which: name,
                            row: NodeId(ri),
                            col: NodeId(ci),
                            value: numeric.get(r, c),
                        });
                    }
                }
            }
        };
        check("regression coefficients", &coeff, &triple.p_ab, &a, &b);
        check("conditional covariance", &cond_cov, &triple.s_aa_b, &a, &a);
        check("marginal concentration", &conc_b, &triple.s_bb_a, &b, &b);
    }
    Ok(violations)
}

/// Errors in the parameters of the orthogonal-cross-covariance family.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FamilyParamError {
    OmegaTooSmall,
    KappaTooSmall,
    NotOrthogonal,
    ZeroEntryInRotation,
    BadShape,
}

impl fmt::Display for FamilyParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyParamError::OmegaTooSmall => write!(f, "omega must exceed 1"),
            FamilyParamError::KappaTooSmall => write!(f, "kappa must exceed omega + 1"),
            FamilyParamError::NotOrthogonal => write!(f, "cross block must be orthogonal"),
            FamilyParamError::ZeroEntryInRotation => {
                write!(f, "cross block must have all entries nonzero")
            }
            FamilyParamError::BadShape => write!(f, "cross block must be dim × dim"),
        }
    }
}

impl std::error::Error for FamilyParamError {}

/// Givens rotation in the `(i, j)` plane.
pub fn givens_rotation(dim: usize, i: usize, j: usize, theta: f64) -> Matrix {
    let mut m = Matrix::identity(dim);
    m.set(i, i, theta.cos());
    m.set(j, j, theta.cos());
    m.set(i, j, -theta.sin());
    m.set(j, i, theta.sin());
    m
}

/// An orthogonal matrix with every entry bounded away from zero, built by
/// composing plane rotations. Covers the small dimensions used here.
pub fn dense_rotation(dim: usize) -> Matrix {
    match dim {
        1 => Matrix::from_rows(&[&[1.0]]),
        2 => givens_rotation(2, 0, 1, std::f64::consts::FRAC_PI_4),
        _ => {
            // Adjacent planes first, then widening gaps: this composition
            // order keeps all entries away from zero for the small dims used.
            let mut m = Matrix::identity(dim);
            for gap in 1..dim {
                for i in 0..dim - gap {
                    m = m.mul(&givens_rotation(dim, i, i + gap, 0.7));
                }
            }
            m
        }
    }
}

/// Covariance of two equal-dimension blocks: variances `kappa` on the first,
/// `omega` on the second, orthogonal cross block `r`. Each block is internally
/// independent, marginally and given the other block, yet every cross pair is
/// dependent — so independence of two halves of the second block never
/// transfers to the first.
pub fn set_transitivity_family(
    dim: usize,
    kappa: f64,
    omega: f64,
    r: &Matrix,
) -> Result<CovarianceMatrix, FamilyParamError> {
    if omega <= 1.0 {
        return Err(FamilyParamError::OmegaTooSmall);
    }
    if kappa <= omega + 1.0 {
        return Err(FamilyParamError::KappaTooSmall);
    }
    if r.rows() != dim || r.cols() != dim {
        return Err(FamilyParamError::BadShape);
    }
    let rtr = r.transpose().mul(r);
    for i in 0..dim {
        for j in 0..dim {
            let want = if i == j { 1.0 } else { 0.0 };
            if (rtr.get(i, j) - want).abs() > 1e-10 {
                return Err(FamilyParamError::NotOrthogonal);
            }
            if r.get(i, j).abs() < 1e-12 {
                return Err(FamilyParamError::ZeroEntryInRotation);
            }
        }
    }
    let n = 2 * dim;
    let mut m = Matrix::zeros(n, n);
    for i in 0..dim {
        m.set(i, i, kappa);
        m.set(dim + i, dim + i, omega);
        for j in 0..dim {
            m.set(i, dim + j, r.get(i, j));
            m.set(dim + j, i, r.get(i, j));
        }
    }
    CovarianceMatrix::new(m).map_err(|_| FamilyParamError::KappaTooSmall)
}

/// The checked instance: split the second block `v` into `a` (first node)
/// and `b` (the rest), condition on the first block `u`.
#[derive(Clone, Debug)]
pub struct SetTransitivityCheck {
    /// max |cov(a, b)|: first premise, `a ⊥ b`.
    pub a_b_marginal_max: f64,
    /// max |cov(a, b | u)|: second premise, `a ⊥ b | u`.
    pub a_b_given_u_max: f64,
    /// max |cov(a, u)|: would need to vanish for `a ⊥ u`.
    pub a_u_max: f64,
    /// max |cov(b, u)|: would need to vanish for `b ⊥ u`.
    pub b_u_max: f64,
}

impl SetTransitivityCheck {
    /// Premises hold at `zero_tol`, both conclusions fail at `nonzero_tol`.
    pub fn violated(&self, zero_tol: f64, nonzero_tol: f64) -> bool {
        self.a_b_marginal_max <= zero_tol
            && self.a_b_given_u_max <= zero_tol
            && self.a_u_max > nonzero_tol
            && self.b_u_max > nonzero_tol
    }
}

/// Evaluate the set-transitivity instance on a covariance over `u`
/// (indices `0..u_size`) and `v` (the rest, at least two nodes).
pub fn set_transitivity_violation(cov: &CovarianceMatrix, u_size: usize) -> SetTransitivityCheck {
    let n = cov.dim();
    assert!(u_size + 2 <= n, "second block needs at least two nodes");
    let u: BTreeSet<NodeId> = (0..u_size).map(NodeId).collect();
    let a = NodeId(u_size);
    let b: Vec<NodeId> = (u_size + 1..n).map(NodeId).collect();
    let m = cov.matrix();

    let mut check = SetTransitivityCheck {
        a_b_marginal_max: 0.0,
        a_b_given_u_max: 0.0,
        a_u_max: 0.0,
        b_u_max: 0.0,
    };
    for &k in &b {
        check.a_b_marginal_max = check.a_b_marginal_max.max(m.get(a.0, k.0).abs());
        check.a_b_given_u_max = check
            .a_b_given_u_max
            .max(partial_covariance(cov, a, k, &u).abs());
    }
    for &c in &u {
        check.a_u_max = check.a_u_max.max(m.get(a.0, c.0).abs());
        for &k in &b {
            check.b_u_max = check.b_u_max.max(m.get(k.0, c.0).abs());
        }
    }
    check
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{collider, dag_chain};
    use crate::graph::{ComponentKind::*, EdgeKind::*};

    fn set(g: &RegressionGraph, labels: &[&str]) -> BTreeSet<NodeId> {
        labels.iter().map(|l| g.node(l).unwrap()).collect()
    }

    #[test]
    fn sampled_chain_has_forced_structure() {
        let g = dag_chain();
        let sys = sample_system(&g, 42, DEFAULT_MAGNITUDE_RANGE);
        let mut nonzero_offdiag = 0;
        for i in 0..3 {
            for k in 0..3 {
                if i != k && sys.h.get(i, k) != 0.0 {
                    nonzero_offdiag += 1;
                    let a = sys.h.get(i, k).abs();
                    assert!((0.3..=1.0).contains(&a));
                }
                if i != k {
                    assert_eq!(sys.w.get(i, k), 0.0);
                }
            }
        }
        assert_eq!(nonzero_offdiag, 2);
    }

    #[test]
    fn sampled_dashed_pair_is_dominant() {
        let g =
            RegressionGraph::build_from(&[(Response, &["1", "2"])], &[("1", "2", Dashed)]).unwrap();
        for seed in 0..20 {
            let sys = sample_system(&g, seed, DEFAULT_MAGNITUDE_RANGE);
            let w = sys.w.get(0, 1);
            assert!(w != 0.0 && w.abs() <= 0.3);
            assert_eq!(sys.w.get(0, 1), sys.w.get(1, 0));
            assert_eq!(sys.w.get(0, 0), 1.0);
        }
    }

    #[test]
    fn joint_covariance_of_identity_system() {
        let sys = GaussianSystem {
            h: Matrix::identity(3),
            w: Matrix::identity(3),
        };
        let cov = joint_covariance(&sys).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((cov.matrix().get(i, j) - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn chain_covariance_closed_form() {
        // H carries -p1, -p2 on the chain; then cov(Y1, Y3) = p1 * p2.
        let (p1, p2) = (0.6, -0.8);
        let h = Matrix::from_rows(&[&[1.0, -p1, 0.0], &[0.0, 1.0, -p2], &[0.0, 0.0, 1.0]]);
        let sys = GaussianSystem {
            h,
            w: Matrix::identity(3),
        };
        let cov = joint_covariance(&sys).unwrap();
        assert!((cov.matrix().get(0, 2) - p1 * p2).abs() < 1e-12);
    }

    #[test]
    fn complete_dag_recovers_regression_coefficients() {
        // Y1 = alpha Y2 + delta Y3 + noise, Y2 = gamma Y3 + noise: regressing
        // Y1 on (Y2, Y3) through the implied covariance returns (alpha, delta).
        let (alpha, delta, gamma) = (0.7, -0.4, 0.5);
        let h = Matrix::from_rows(&[
            &[1.0, -alpha, -delta],
            &[0.0, 1.0, -gamma],
            &[0.0, 0.0, 1.0],
        ]);
        let sys = GaussianSystem {
            h,
            w: Matrix::identity(3),
        };
        let cov = joint_covariance(&sys).unwrap();
        let m = cov.matrix();
        let s_bb = m.submatrix(&[1, 2], &[1, 2]);
        let s_ab = m.submatrix(&[0], &[1, 2]);
        let coeff = s_bb.solve(&s_ab.transpose()).unwrap();
        assert!((coeff.get(0, 0) - alpha).abs() < 1e-12);
        assert!((coeff.get(1, 0) - delta).abs() < 1e-12);
    }

    #[test]
    fn marginal_concentration_identity() {
        // Standardized pair after marginalizing a third variable: the
        // off-diagonal concentration is -rho / (1 - rho^2).
        let rho = 0.35;
        let m = Matrix::from_rows(&[&[1.0, rho], &[rho, 1.0]]);
        let conc = m.inverse().unwrap();
        assert!((conc.get(0, 1) - (-rho / (1.0 - rho * rho))).abs() < 1e-12);
    }

    #[test]
    fn partial_covariance_cases() {
        let id = CovarianceMatrix::new(Matrix::identity(4)).unwrap();
        let c: BTreeSet<NodeId> = [NodeId(2)].into_iter().collect();
        assert_eq!(partial_covariance(&id, NodeId(0), NodeId(1), &c), 0.0);

        let g = dag_chain();
        let sys = sample_system(&g, 7, DEFAULT_MAGNITUDE_RANGE);
        let cov = joint_covariance(&sys).unwrap();
        let pc = partial_covariance(
            &cov,
            g.node("1").unwrap(),
            g.node("3").unwrap(),
            &set(&g, &["2"]),
        );
        assert!(pc.abs() < 1e-12);
    }

    #[test]
    fn partial_covariance_is_symmetric() {
        let g = crate::enumerate::random_graph(5, &mut SplitMix64::new(3));
        let sys = sample_system(&g, 11, DEFAULT_MAGNITUDE_RANGE);
        let cov = joint_covariance(&sys).unwrap();
        let c = set(&g, &["1"]);
        let (i, k) = (g.node("2").unwrap(), g.node("3").unwrap());
        let a = partial_covariance(&cov, i, k, &c);
        let b = partial_covariance(&cov, k, i, &c);
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn sampled_systems_are_positive_definite() {
        let mut rng = SplitMix64::new(19);
        for _ in 0..100 {
            let g = crate::enumerate::random_graph(1 + rng.next_usize(6), &mut rng);
            let sys = sample_system(&g, rng.next_u64(), DEFAULT_MAGNITUDE_RANGE);
            joint_covariance(&sys).expect("sampled covariance must be PD");
        }
    }

    #[test]
    fn oracle_accepts_chain_and_collider() {
        for g in [dag_chain(), collider()] {
            let report = oracle_check(&g, 10, DEFAULT_TOLERANCE, 5).unwrap();
            assert!(report.ok(), "violations: {:?}", report.violations().count());
        }
    }

    #[test]
    fn oracle_on_single_node_is_vacuous() {
        let g = RegressionGraph::build_from(&[(Response, &["x"])], &[]).unwrap();
        let report = oracle_check(&g, 5, DEFAULT_TOLERANCE, 1).unwrap();
        assert!(report.triples.is_empty());
        assert!(report.ok());
    }

    #[test]
    fn collider_oracle_detail() {
        let g = collider();
        let report = oracle_check(&g, 10, DEFAULT_TOLERANCE, 9).unwrap();
        let find = |cond_len: usize| {
            report
                .triples
                .iter()
                .find(|t| {
                    t.i == g.node("1").unwrap()
                        && t.k == g.node("3").unwrap()
                        && t.cond.len() == cond_len
                })
                .unwrap()
        };
        let marginal = find(0);
        assert_eq!(marginal.implied, Verdict::Independent);
        assert!(marginal.max_abs <= DEFAULT_TOLERANCE);
        let conditioned = find(1);
        assert_eq!(conditioned.implied, Verdict::Dependent);
        assert!(conditioned.exceed_count >= 9);
    }

    #[test]
    fn containment_on_random_graphs() {
        let mut rng = SplitMix64::new(23);
        for _ in 0..20 {
            let g = crate::enumerate::random_graph(4, &mut rng);
            let sys = sample_system(&g, rng.next_u64(), DEFAULT_MAGNITUDE_RANGE);
            let violations = zero_pattern_check(&g, &sys, 1e-9).unwrap();
            assert!(
                violations.is_empty(),
                "graph {:?}: {:?}",
                crate::parse::serialize_graph(&g),
                violations
            );
        }
    }

    #[test]
    fn family_dim2_closed_form() {
        let r = dense_rotation(2);
        let cov = set_transitivity_family(2, 4.0, 2.0, &r).unwrap();
        let m = cov.matrix();
        // cross covariances are ±1/sqrt(2)
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        for i in 0..2 {
            for j in 0..2 {
                assert!((m.get(i, 2 + j).abs() - inv_sqrt2).abs() < 1e-12);
            }
        }
        // conditional covariance of the first block given the second:
        // (kappa - 1/omega) I = 3.5 I
        let u: BTreeSet<NodeId> = [NodeId(2), NodeId(3)].into_iter().collect();
        let d = partial_covariance(&cov, NodeId(0), NodeId(0), &u);
        assert!((d - 3.5).abs() < 1e-12);
        let off = partial_covariance(&cov, NodeId(0), NodeId(1), &u);
        assert!(off.abs() < 1e-12);
    }

    #[test]
    fn family_violates_set_transitivity() {
        for dim in [2usize, 3] {
            let r = dense_rotation(dim);
            let cov = set_transitivity_family(dim, 4.0, 2.0, &r).unwrap();
            let check = set_transitivity_violation(&cov, dim);
            assert!(check.violated(1e-12, 0.1), "{check:?}");
        }
    }

    #[test]
    fn family_rejects_bad_parameters() {
        let r = dense_rotation(2);
        assert!(matches!(
            set_transitivity_family(2, 4.0, 0.9, &r),
            Err(FamilyParamError::OmegaTooSmall)
        ));
        assert!(matches!(
            set_transitivity_family(2, 2.5, 2.0, &r),
            Err(FamilyParamError::KappaTooSmall)
        ));
        let id = Matrix::identity(2); // orthogonal but has zero entries
        assert!(matches!(
            set_transitivity_family(2, 4.0, 2.0, &id),
            Err(FamilyParamError::ZeroEntryInRotation)
        ));
        let skew = Matrix::from_rows(&[&[1.0, 0.5], &[0.5, 1.0]]);
        assert!(matches!(
            set_transitivity_family(2, 4.0, 2.0, &skew),
            Err(FamilyParamError::NotOrthogonal)
        ));
    }

    #[test]
    fn dense_rotations_have_no_small_entries() {
        for dim in [2usize, 3] {
            let r = dense_rotation(dim);
            let rtr = r.transpose().mul(&r);
            for i in 0..dim {
                for j in 0..dim {
                    assert!(r.get(i, j).abs() > 0.1);
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((rtr.get(i, j) - want).abs() < 1e-12);
                }
            }
        }
    }
}
