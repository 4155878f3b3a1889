// SPDX-License-Identifier: MIT
//! Joint probability tables over finitely many leveled variables, brute-force
//! conditional-independence checks, and checkers for the standard
//! independence properties together with three small families that break the
//! non-universal ones.

use std::fmt;

use crate::rng::SplitMix64;

/// Tolerance for the cross-multiplied independence check; all quantities
/// live in `[0, 1]`.
pub const CI_TOLERANCE: f64 = 1e-10;

/// Named variable with its number of levels.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Variable {
    pub name: String,
    pub levels: usize,
}

/// Problems constructing a table.
#[derive(Clone, PartialEq, Debug)]
pub enum TableError {
    NoVariables,
    ZeroLevels(String),
    WrongCellCount { expected: usize, got: usize },
    NegativeProbability(usize),
    SumNotOne(f64),
    BadSyntax(String),
}

impl fmt::Display for TableError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableError::NoVariables => write!(f, "table needs at least one variable"),
            TableError::ZeroLevels(name) => write!(f, "variable '{name}' has zero levels"),
            TableError::WrongCellCount { expected, got } => {
                write!(f, "expected {expected} cells, got {got}")
            }
            TableError::NegativeProbability(at) => write!(f, "negative probability at cell {at}"),
            TableError::SumNotOne(s) => write!(f, "probabilities sum to {s}, not 1"),
            TableError::BadSyntax(why) => write!(f, "bad table text: {why}"),
        }
    }
}

impl std::error::Error for TableError {}

/// A joint probability table, probabilities row-major with the last variable
/// varying fastest.
#[derive(Clone, Debug)]
pub struct JointTable {
    vars: Vec<Variable>,
    probs: Vec<f64>,
}

impl JointTable {
    pub fn new(vars: Vec<Variable>, probs: Vec<f64>) -> Result<JointTable, TableError> {
        if vars.is_empty() {
            return Err(TableError::NoVariables);
        }
        for v in &vars {
            if v.levels == 0 {
                return Err(TableError::ZeroLevels(v.name.clone()));
            }
        }
        let cells: usize = vars.iter().map(|v| v.levels).product();
        if probs.len() != cells {
            return Err(TableError::WrongCellCount {
                expected: cells,
                got: probs.len(),
            });
        }
        if let Some(at) = probs.iter().position(|&p| p < 0.0) {
            return Err(TableError::NegativeProbability(at));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(TableError::SumNotOne(sum));
        }
        Ok(JointTable { vars, probs })
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn cell_count(&self) -> usize {
        self.probs.len()
    }

    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.vars.len()];
        for i in (0..self.vars.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.vars[i + 1].levels;
        }
        strides
    }

    /// Probability of a full level assignment (0-based levels).
    pub fn prob(&self, levels: &[usize]) -> f64 {
        assert_eq!(levels.len(), self.vars.len());
        let strides = self.strides();
        let mut at = 0;
        for (i, &l) in levels.iter().enumerate() {
            assert!(l < self.vars[i].levels);
            at += l * strides[i];
        }
        self.probs[at]
    }

    /// Marginal over a subset of variables, row-major in the given order
    /// (first kept variable most significant).
    fn marginal(&self, keep: &[usize]) -> Vec<f64> {
        let sizes: Vec<usize> = keep.iter().map(|&v| self.vars[v].levels).collect();
        let cells: usize = sizes.iter().product::<usize>().max(1);
        let mut probs = vec![0.0; cells];
        let mut full = vec![0usize; self.vars.len()];
        for (at, &p) in self.probs.iter().enumerate() {
            // decode `at` into the full assignment
            let mut rest = at;
            for i in (0..self.vars.len()).rev() {
                full[i] = rest % self.vars[i].levels;
                rest /= self.vars[i].levels;
            }
            let mut idx = 0;
            for (pos, &v) in keep.iter().enumerate() {
                idx = idx * sizes[pos] + full[v];
            }
            probs[idx] += p;
        }
        probs
    }

    /// Cross-multiplied conditional-independence test at `CI_TOLERANCE`:
    /// `P(a, b, c) · P(c) = P(a, c) · P(b, c)` for every cell. Conditioning
    /// slices of probability zero impose no constraint.
    pub fn check_ci(&self, a: &[usize], b: &[usize], c: &[usize]) -> bool {
        debug_assert!(disjoint(a, b) && disjoint(a, c) && disjoint(b, c));
        let abc: Vec<usize> = a.iter().chain(b).chain(c).copied().collect();
        let ac: Vec<usize> = a.iter().chain(c).copied().collect();
        let bc: Vec<usize> = b.iter().chain(c).copied().collect();
        let m_abc = self.marginal(&abc);
        let m_ac = self.marginal(&ac);
        let m_bc = self.marginal(&bc);
        let m_c = self.marginal(c);

        let a_cells: usize = a.iter().map(|&v| self.vars[v].levels).product();
        let b_cells: usize = b.iter().map(|&v| self.vars[v].levels).product();
        let c_cells: usize = c
            .iter()
            .map(|&v| self.vars[v].levels)
            .product::<usize>()
            .max(1);
        for ia in 0..a_cells {
            for ib in 0..b_cells {
                for ic in 0..c_cells {
                    let p_abc = m_abc[(ia * b_cells + ib) * c_cells + ic];
                    let p_ac = m_ac[ia * c_cells + ic];
                    let p_bc = m_bc[ib * c_cells + ic];
                    let p_c = if c.is_empty() { 1.0 } else { m_c[ic] };
                    if (p_abc * p_c - p_ac * p_bc).abs() > CI_TOLERANCE {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Same table with variables reordered by `perm` (new position `p` holds
    /// old variable `perm[p]`).
    pub fn permuted(&self, perm: &[usize]) -> JointTable {
        assert_eq!(perm.len(), self.vars.len());
        let vars: Vec<Variable> = perm.iter().map(|&v| self.vars[v].clone()).collect();
        let sizes: Vec<usize> = vars.iter().map(|v| v.levels).collect();
        let mut probs = vec![0.0; self.probs.len()];
        let mut full = vec![0usize; self.vars.len()];
        for (at, &p) in self.probs.iter().enumerate() {
            let mut rest = at;
            for i in (0..self.vars.len()).rev() {
                full[i] = rest % self.vars[i].levels;
                rest /= self.vars[i].levels;
            }
            let mut idx = 0;
            for (pos, &v) in perm.iter().enumerate() {
                idx = idx * sizes[pos] + full[v];
            }
            probs[idx] += p;
        }
        JointTable { vars, probs }
    }

    /// Labeled text form: one header line with variable names and level
    /// counts, then the probabilities row-major, one line per slice of the
    /// last variable. Round-trips through [`JointTable::from_text`].
    pub fn to_text(&self) -> String {
        let header: Vec<String> = self
            .vars
            .iter()
            .map(|v| format!("{}:{}", v.name, v.levels))
            .collect();
        let mut out = format!("variables: {}\n", header.join(" "));
        let last = self.vars.last().map(|v| v.levels).unwrap_or(1);
        for chunk in self.probs.chunks(last) {
            let cells: Vec<String> = chunk.iter().map(|p| format!("{p:.17e}")).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parse the text form produced by [`JointTable::to_text`]. `#` starts a
    /// comment; probabilities may be split across lines arbitrarily.
    pub fn from_text(text: &str) -> Result<JointTable, TableError> {
        let mut vars: Option<Vec<Variable>> = None;
        let mut probs = Vec::new();
        for raw in text.lines() {
            let line = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("variables:") {
                if vars.is_some() {
                    return Err(TableError::BadSyntax("repeated variables line".into()));
                }
                let mut parsed = Vec::new();
                for word in rest.split_whitespace() {
                    let (name, levels) = word.split_once(':').ok_or_else(|| {
                        TableError::BadSyntax(format!("expected name:levels, got '{word}'"))
                    })?;
                    let levels: usize = levels.parse().map_err(|_| {
                        TableError::BadSyntax(format!("bad level count in '{word}'"))
                    })?;
                    parsed.push(Variable {
                        name: name.to_string(),
                        levels,
                    });
                }
                vars = Some(parsed);
            } else {
                for word in line.split_whitespace() {
                    let p: f64 = word
                        .parse()
                        .map_err(|_| TableError::BadSyntax(format!("bad probability '{word}'")))?;
                    probs.push(p);
                }
            }
        }
        let vars = vars.ok_or_else(|| TableError::BadSyntax("missing variables line".into()))?;
        JointTable::new(vars, probs)
    }
}

fn disjoint(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| !b.contains(x))
}

/// Bad parameters for the three table families.
#[derive(Clone, PartialEq, Debug)]
pub enum FamilyError {
    AlphaNotAboveOne(f64),
    PairConstraints { alpha: f64, beta: f64 },
    AlphaOutOfHalf(f64),
}

impl fmt::Display for FamilyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyError::AlphaNotAboveOne(a) => write!(f, "alpha = {a} must exceed 1"),
            FamilyError::PairConstraints { alpha, beta } => write!(
                f,
                "need 0 < alpha ≠ beta < 1 and 2·alpha + beta < 1, got alpha = {alpha}, beta = {beta}"
            ),
            FamilyError::AlphaOutOfHalf(a) => {
                write!(f, "alpha = {a} must satisfy 0 < 2·alpha < 1")
            }
        }
    }
}

impl std::error::Error for FamilyError {}

fn abc_table(levels_c: usize, cells: &[f64], normalizer: f64) -> JointTable {
    let vars = vec![
        Variable {
            name: "A".into(),
            levels: 2,
        },
        Variable {
            name: "B".into(),
            levels: 2,
        },
        Variable {
            name: "C".into(),
            levels: levels_c,
        },
    ];
    // `cells` is laid out per slice k as [ (1,1), (1,2), (2,1), (2,2) ].
    let mut probs = vec![0.0; 4 * levels_c];
    for k in 0..levels_c {
        for i in 0..2 {
            for j in 0..2 {
                probs[(i * 2 + j) * levels_c + k] = cells[k * 4 + i * 2 + j] / normalizer;
            }
        }
    }
    let sum: f64 = probs.iter().sum();
    for p in probs.iter_mut() {
        *p /= sum; // wash out float error in the analytic normalizer
    }
    JointTable::new(vars, probs).expect("family cells are a distribution")
}

/// `2 × 2 × 3` family breaking singleton transitivity: every slice of `C` has
/// odds ratio 1 and the `A, B` margin is uniform, yet both `A` and `B`
/// depend on `C`. Requires `alpha > 1`.
pub fn table1_family(alpha: f64) -> Result<JointTable, FamilyError> {
    if alpha.is_nan() || alpha <= 1.0 {
        return Err(FamilyError::AlphaNotAboveOne(alpha));
    }
    let a2 = alpha * alpha;
    // one row per level of C, each row [ (1,1), (1,2), (2,1), (2,2) ]
    #[rustfmt::skip]
    let cells = [
        a2, alpha, alpha, 1.0,
        alpha, 1.0, a2, alpha,
        1.0, a2, 1.0, a2,
    ];
    Ok(abc_table(3, &cells, 4.0 * (1.0 + alpha + a2)))
}

/// `2 × 2 × 3` family breaking the intersection property: `B` carries the
/// same information as `C`'s split into `{1,2}` versus `{3}`. Requires
/// `0 < alpha ≠ beta < 1` and `2·alpha + beta < 1`.
pub fn table2_family(alpha: f64, beta: f64) -> Result<JointTable, FamilyError> {
    let ok = 0.0 < alpha
        && alpha < 1.0
        && 0.0 < beta
        && beta < 1.0
        && alpha != beta
        && 2.0 * alpha + beta < 1.0;
    if !ok {
        return Err(FamilyError::PairConstraints { alpha, beta });
    }
    #[rustfmt::skip]
    let cells = [
        alpha, 0.0, 1.0 - alpha, 0.0,
        alpha, 0.0, 1.0 - alpha, 0.0,
        0.0, beta, 0.0, 1.0 - beta,
    ];
    Ok(abc_table(3, &cells, 3.0))
}

/// `2 × 2 × 2` family breaking the composition property: `A` and `B` are each
/// independent of `C`, but the pair is not — the `A, B` odds ratio moves with
/// the level of `C`. Requires `0 < 2·alpha < 1`.
pub fn table3_family(alpha: f64) -> Result<JointTable, FamilyError> {
    if !(alpha > 0.0 && 2.0 * alpha < 1.0) {
        return Err(FamilyError::AlphaOutOfHalf(alpha));
    }
    let (hi, lo) = (1.0 + 2.0 * alpha, 1.0 - 2.0 * alpha);
    #[rustfmt::skip]
    let cells = [
        hi, lo, lo, hi,
        1.0, 1.0, 1.0, 1.0,
    ];
    Ok(abc_table(2, &cells, 8.0))
}

/// The checked independence properties.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PropertyId {
    Symmetry,
    Contraction,
    Decomposition,
    WeakUnion,
    Composition,
    Intersection,
    SetTransitivity,
    SingletonTransitivity,
}

impl PropertyId {
    pub const ALL: [PropertyId; 8] = [
        PropertyId::Symmetry,
        PropertyId::Contraction,
        PropertyId::Decomposition,
        PropertyId::WeakUnion,
        PropertyId::Composition,
        PropertyId::Intersection,
        PropertyId::SetTransitivity,
        PropertyId::SingletonTransitivity,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            PropertyId::Symmetry => "symmetry",
            PropertyId::Contraction => "contraction",
            PropertyId::Decomposition => "decomposition",
            PropertyId::WeakUnion => "weak union",
            PropertyId::Composition => "composition",
            PropertyId::Intersection => "intersection",
            PropertyId::SetTransitivity => "set transitivity",
            PropertyId::SingletonTransitivity => "singleton transitivity",
        }
    }
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// A violated instance: the role sets (by variable name) and a rendering of
/// the failed implication.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Counterexample {
    pub property: &'static str,
    pub roles: Vec<(&'static str, Vec<String>)>,
    pub statement: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated at ", self.property)?;
        for (i, (role, vars)) in self.roles.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{} = {{{}}}", role, vars.join(", "))?;
        }
        write!(f, ": {}", self.statement)
    }
}

/// Result of checking one property over every instance on a table.
#[derive(Clone, PartialEq, Debug)]
pub enum PropertyCheck {
    Holds,
    Violated(Counterexample),
}

impl PropertyCheck {
    pub fn holds(&self) -> bool {
        matches!(self, PropertyCheck::Holds)
    }
}

const ENUMERATION_CAP: usize = 6;

/// Check a property over every admissible role assignment of the table's
/// variables (at most six of them), returning the first violated instance.
pub fn check_property(table: &JointTable, property: PropertyId) -> PropertyCheck {
    assert!(
        table.vars.len() <= ENUMERATION_CAP,
        "property enumeration is capped at {ENUMERATION_CAP} variables"
    );
    match property {
        PropertyId::SingletonTransitivity => singleton_transitivity(table),
        _ => set_schema(table, property),
    }
}

fn names(table: &JointTable, vars: &[usize]) -> Vec<String> {
    vars.iter().map(|&v| table.vars[v].name.clone()).collect()
}

fn render(table: &JointTable, lhs: &[usize], rhs: &[usize], cond: &[usize], holds: bool) -> String {
    let side = |vs: &[usize]| names(table, vs).join(",");
    let given = if cond.is_empty() {
        String::new()
    } else {
        format!(" | {}", side(cond))
    };
    format!(
        "{} {} {}{}",
        side(lhs),
        if holds { "⊥" } else { "⋔" },
        side(rhs),
        given
    )
}

/// Enumerate disjoint role assignments for the set-valued schemas. Roles per
/// variable: a, b, c, d, unused; `a`, `b`, `c` nonempty, `d` possibly empty.
fn set_schema(table: &JointTable, property: PropertyId) -> PropertyCheck {
    let k = table.vars.len();
    let mut assignment = vec![0usize; k]; // 0:a 1:b 2:c 3:d 4:unused
    loop {
        let mut sets: [Vec<usize>; 4] = Default::default();
        for (v, &role) in assignment.iter().enumerate() {
            if role < 4 {
                sets[role].push(v);
            }
        }
        let [a, b, c, d] = &sets;
        let admissible = match property {
            // symmetry ranges over pairs with any conditioning set
            PropertyId::Symmetry => !a.is_empty() && !b.is_empty() && c.is_empty(),
            _ => !a.is_empty() && !b.is_empty() && !c.is_empty(),
        };
        if admissible {
            if let Some(cx) = check_instance(table, property, a, b, c, d) {
                return PropertyCheck::Violated(cx);
            }
        }
        // next assignment, most significant variable first
        let mut v = k;
        loop {
            if v == 0 {
                return PropertyCheck::Holds;
            }
            v -= 1;
            assignment[v] += 1;
            if assignment[v] < 5 {
                break;
            }
            assignment[v] = 0;
        }
    }
}

fn check_instance(
    table: &JointTable,
    property: PropertyId,
    a: &[usize],
    b: &[usize],
    c: &[usize],
    d: &[usize],
) -> Option<Counterexample> {
    let ci = |x: &[usize], y: &[usize], z: &[usize]| table.check_ci(x, y, z);
    let cat = |x: &[usize], y: &[usize]| {
        let mut out = x.to_vec();
        out.extend_from_slice(y);
        out
    };
    let roles = |used: &[(&'static str, &[usize])]| {
        used.iter()
            .map(|(r, vs)| (*r, names(table, vs)))
            .collect::<Vec<_>>()
    };
    match property {
        PropertyId::Symmetry => {
            let fwd = ci(a, b, d);
            let bwd = ci(b, a, d);
            (fwd != bwd).then(|| Counterexample {
                property: property.name(),
                roles: roles(&[("a", a), ("b", b), ("d", d)]),
                statement: format!(
                    "{} but {}",
                    render(table, a, b, d, fwd),
                    render(table, b, a, d, bwd)
                ),
            })
        }
        PropertyId::Contraction => {
            let cd = cat(c, d);
            (ci(a, b, &cd) && ci(b, c, d) && !ci(b, &cat(a, c), d)).then(|| Counterexample {
                property: property.name(),
                roles: roles(&[("a", a), ("b", b), ("c", c), ("d", d)]),
                statement: render(table, b, &cat(a, c), d, false),
            })
        }
        PropertyId::Decomposition => {
            let bc = cat(b, c);
            (ci(a, &bc, d) && (!ci(a, b, d) || !ci(a, c, d))).then(|| Counterexample {
                property: property.name(),
                roles: roles(&[("a", a), ("b", b), ("c", c), ("d", d)]),
                statement: if !ci(a, b, d) {
                    render(table, a, b, d, false)
                } else {
                    render(table, a, c, d, false)
                },
            })
        }
        PropertyId::WeakUnion => {
            let bc = cat(b, c);
            let cd = cat(c, d);
            let bd = cat(b, d);
            (ci(a, &bc, d) && (!ci(a, b, &cd) || !ci(a, c, &bd))).then(|| Counterexample {
                property: property.name(),
                roles: roles(&[("a", a), ("b", b), ("c", c), ("d", d)]),
                statement: if !ci(a, b, &cd) {
                    render(table, a, b, &cd, false)
                } else {
                    render(table, a, c, &bd, false)
                },
            })
        }
        PropertyId::Composition => {
            let bc = cat(b, c);
            (ci(a, b, d) && ci(a, c, d) && !ci(a, &bc, d)).then(|| Counterexample {
                property: property.name(),
                roles: roles(&[("a", a), ("b", b), ("c", c), ("d", d)]),
                statement: render(table, a, &bc, d, false),
            })
        }
        PropertyId::Intersection => {
            let cd = cat(c, d);
            let bd = cat(b, d);
            let bc = cat(b, c);
            (ci(a, b, &cd) && ci(a, c, &bd) && !ci(a, &bc, d)).then(|| Counterexample {
                property: property.name(),
                roles: roles(&[("a", a), ("b", b), ("c", c), ("d", d)]),
                statement: render(table, a, &bc, d, false),
            })
        }
        PropertyId::SetTransitivity => {
            let cd = cat(c, d);
            (ci(a, b, d) && ci(a, b, &cd) && !ci(a, c, d) && !ci(b, c, d)).then(|| Counterexample {
                property: property.name(),
                roles: roles(&[("a", a), ("b", b), ("c", c), ("d", d)]),
                statement: format!(
                    "{} and {}",
                    render(table, a, c, d, false),
                    render(table, b, c, d, false)
                ),
            })
        }
        PropertyId::SingletonTransitivity => unreachable!("handled separately"),
    }
}

/// Singleton schema: `i`, `k`, `h` single variables, `d` over the rest.
fn singleton_transitivity(table: &JointTable) -> PropertyCheck {
    let k_vars = table.vars.len();
    for i in 0..k_vars {
        for k in i + 1..k_vars {
            for h in 0..k_vars {
                if h == i || h == k {
                    continue;
                }
                let rest: Vec<usize> = (0..k_vars)
                    .filter(|&v| v != i && v != k && v != h)
                    .collect();
                for mask in 0..(1usize << rest.len()) {
                    let d: Vec<usize> = rest
                        .iter()
                        .enumerate()
                        .filter(|(p, _)| mask >> p & 1 == 1)
                        .map(|(_, &v)| v)
                        .collect();
                    let hd = {
                        let mut out = vec![h];
                        out.extend_from_slice(&d);
                        out
                    };
                    if table.check_ci(&[i], &[k], &d)
                        && table.check_ci(&[i], &[k], &hd)
                        && !table.check_ci(&[i], &[h], &d)
                        && !table.check_ci(&[k], &[h], &d)
                    {
                        return PropertyCheck::Violated(Counterexample {
                            property: PropertyId::SingletonTransitivity.name(),
                            roles: vec![
                                ("i", names(table, &[i])),
                                ("k", names(table, &[k])),
                                ("h", names(table, &[h])),
                                ("d", names(table, &d)),
                            ],
                            statement: format!(
                                "{} and {}",
                                render(table, &[i], &[h], &d, false),
                                render(table, &[k], &[h], &d, false)
                            ),
                        });
                    }
                }
            }
        }
    }
    PropertyCheck::Holds
}

/// Random positive table for property tests: iid uniforms, normalized.
pub fn random_table(levels: &[usize], rng: &mut SplitMix64) -> JointTable {
    let vars: Vec<Variable> = levels
        .iter()
        .enumerate()
        .map(|(i, &l)| Variable {
            name: format!("X{}", i + 1),
            levels: l,
        })
        .collect();
    let cells: usize = levels.iter().product();
    let mut probs: Vec<f64> = (0..cells).map(|_| 0.05 + rng.next_f64()).collect();
    let sum: f64 = probs.iter().sum();
    for p in probs.iter_mut() {
        *p /= sum;
    }
    JointTable::new(vars, probs).expect("normalized positive cells")
}
