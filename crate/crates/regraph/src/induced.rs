// SPDX-License-Identifier: MIT
//! The edge-matrix engine: edge matrices of a graph, induced edge matrices
//! for a split, and the edge criterion for implied independences and
//! dependences.
//!
//! A graph is carried by two binary matrices: `H` over all nodes (unit
//! diagonal, arrows in the response rows, full lines in the context block)
//! and `W_uu` over the response nodes (unit diagonal, dashed lines). A linear
//! system generated over the graph has equation matrix with the support of
//! `H` and noise covariance with the support of `W_uu` on responses and of
//! `H_vv` on the context block.
//!
//! For a split `N = (a, b)`, eliminating the `a`-equations is partial closure
//! `K = zer_a(H)`; the reduced `b`-side noise becomes `η_b − K_ba η_a`. The
//! induced matrices below are the supports of the regression of `Y_a` on
//! `Y_b`, the conditional covariance of `Y_a`, and the marginal concentration
//! of `Y_b`, computed entirely on the 0/1 level. Two supports vanish exactly
//! rather than generically — the reduced noise decouples across the
//! response/context border because the context block of the noise covariance
//! equals `H_vv` — and are zeroed explicitly.

use std::collections::BTreeSet;
use std::fmt;

use crate::bitmatrix::{zer, BinaryMatrix};
use crate::graph::{ComponentKind, EdgeKind, NodeId, RegressionGraph};
use crate::paths::{QueryError, QueryPartition};

/// `H` over all nodes and `W_uu` over the response nodes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EdgeMatrixPair {
    pub h: BinaryMatrix,
    pub w_uu: BinaryMatrix,
}

/// The edge matrices of a graph.
///
/// `H` has a 1 at `(i, k)` exactly for `i <- k`, `i — k`, or `i = k`; it is
/// upper block-triangular in component order. `W_uu` has a 1 at `(i, k)`
/// exactly for `i -- k` or `i = k`; it is symmetric.
pub fn edge_matrices(g: &RegressionGraph) -> EdgeMatrixPair {
    let nodes: Vec<NodeId> = g.nodes().collect();
    let mut h = BinaryMatrix::identity(nodes);
    for (head, tail, kind) in g.edges() {
        match kind {
            EdgeKind::Arrow => h.set(head.0, tail.0, true),
            EdgeKind::FullLine => {
                h.set(head.0, tail.0, true);
                h.set(tail.0, head.0, true);
            }
            EdgeKind::Dashed => {}
        }
    }
    let u = g.response_nodes();
    let mut w_uu = BinaryMatrix::identity(u.clone());
    for (a, b, kind) in g.edges() {
        if kind == EdgeKind::Dashed {
            let pa = u.iter().position(|&x| x == a).expect("dashed in u");
            let pb = u.iter().position(|&x| x == b).expect("dashed in u");
            w_uu.set(pa, pb, true);
            w_uu.set(pb, pa, true);
        }
    }
    EdgeMatrixPair { h, w_uu }
}

/// Support of the noise covariance over all nodes: `W_uu` on the response
/// block, `H_vv` on the context block, zero across.
fn noise_pattern(g: &RegressionGraph, pair: &EdgeMatrixPair) -> BinaryMatrix {
    let nodes: Vec<NodeId> = g.nodes().collect();
    let mut w = BinaryMatrix::identity(nodes);
    let u = g.response_nodes();
    for (p, &i) in u.iter().enumerate() {
        for (q, &k) in u.iter().enumerate() {
            if pair.w_uu.get(p, q) {
                w.set(i.0, k.0, true);
            }
        }
    }
    for (head, tail, kind) in g.edges() {
        if kind == EdgeKind::FullLine {
            w.set(head.0, tail.0, true);
            w.set(tail.0, head.0, true);
        }
    }
    w
}

/// The three induced edge matrices of a split: arrows from `b` into `a`,
/// dashed lines within `a` given `b`, full lines of the `b`-concentration
/// with `a` marginalized. Square members are symmetric with unit diagonal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InducedTriple {
    /// `a × b`: induced bipartite graph of arrows pointing from `b` to `a`.
    pub p_ab: BinaryMatrix,
    /// `a × a`: induced covariance graph of `Y_a` given `Y_b`.
    pub s_aa_b: BinaryMatrix,
    /// `b × b`: induced concentration graph of the marginal of `Y_b`.
    pub s_bb_a: BinaryMatrix,
}

/// Induced edge matrices for an arbitrary split `N = (a, b)`; `b` is the
/// complement of `a`. Both halves may be empty.
pub fn induced_split(g: &RegressionGraph, a: &BTreeSet<NodeId>) -> InducedTriple {
    let pair = edge_matrices(g);
    let w_full = noise_pattern(g, &pair);
    let a_list: Vec<NodeId> = g.nodes().filter(|x| a.contains(x)).collect();
    let b_list: Vec<NodeId> = g.nodes().filter(|x| !a.contains(x)).collect();
    let b_v: Vec<bool> = b_list.iter().map(|&x| g.is_context(x)).collect();

    let k = zer(&pair.h, &a_list);
    let k_aa = k.submatrix(&a_list, &a_list).unwrap();
    let k_ab = k.submatrix(&a_list, &b_list).unwrap();
    let k_ba = k.submatrix(&b_list, &a_list).unwrap();
    let k_bb = k.submatrix(&b_list, &b_list).unwrap();
    let w_aa = w_full.submatrix(&a_list, &a_list).unwrap();
    let w_ab = w_full.submatrix(&a_list, &b_list).unwrap();
    let w_ba = w_full.submatrix(&b_list, &a_list).unwrap();
    let w_bb = w_full.submatrix(&b_list, &b_list).unwrap();
    let k_ba_t = k_ba.transpose();

    // Support of cov(η_a, η_b − K_ba η_a). Its context columns vanish
    // exactly: there W and H agree, so the two terms cancel.
    let mut cross = w_ab.or(&w_aa.mul(&k_ba_t).unwrap()).unwrap();
    for (c, &is_v) in b_v.iter().enumerate() {
        if is_v {
            for r in 0..a_list.len() {
                cross.set(r, c, false);
            }
        }
    }

    // Support of cov(η_b − K_ba η_a): unit diagonal, symmetric. The
    // response/context cross blocks vanish exactly, same cancellation.
    let mut residual = w_bb
        .or(&k_ba.mul(&w_ab).unwrap())
        .unwrap()
        .or(&w_ba.mul(&k_ba_t).unwrap())
        .unwrap()
        .or(&k_ba.mul(&w_aa).unwrap().mul(&k_ba_t).unwrap())
        .unwrap();
    for (r, &rv) in b_v.iter().enumerate() {
        for (c, &cv) in b_v.iter().enumerate() {
            if rv != cv {
                residual.set(r, c, false);
            }
        }
    }

    // Support of the inverse: closure over all of b. The blocks stay
    // decoupled, so this is the closure of each diagonal block.
    let residual_conc = zer(&residual, &b_list);

    let q_ab = cross.mul(&residual_conc).unwrap();
    let q_aa = w_aa.or(&q_ab.mul(&cross.transpose()).unwrap()).unwrap();

    let p_ab = k_ab
        .or(&k_aa.mul(&q_ab).unwrap().mul(&k_bb).unwrap())
        .unwrap();
    let s_aa_b = k_aa.mul(&q_aa).unwrap().mul(&k_aa.transpose()).unwrap();

    // Concentration of the marginal of Y_b, assembled block-wise. On the
    // context block the reduced noise covariance *is* the context block of
    // K, so sandwiching it between K_bbᵀ and K_bb collapses: the context
    // part is K itself plus what the response rows contribute, with no
    // closure fill-in. Sandwiching the full matrices would overshoot there.
    let b_u_list: Vec<NodeId> = b_list
        .iter()
        .copied()
        .filter(|&x| !g.is_context(x))
        .collect();
    let b_v_list: Vec<NodeId> = b_list
        .iter()
        .copied()
        .filter(|&x| g.is_context(x))
        .collect();
    let k_buu = k.submatrix(&b_u_list, &b_u_list).unwrap();
    let k_buv = k.submatrix(&b_u_list, &b_v_list).unwrap();
    let k_bvv = k.submatrix(&b_v_list, &b_v_list).unwrap();
    let omega_u_conc = residual_conc.submatrix(&b_u_list, &b_u_list).unwrap();
    let s_uu = k_buu
        .transpose()
        .mul(&omega_u_conc)
        .unwrap()
        .mul(&k_buu)
        .unwrap();
    let s_uv = k_buu
        .transpose()
        .mul(&omega_u_conc)
        .unwrap()
        .mul(&k_buv)
        .unwrap();
    let s_vv = k_bvv
        .or(&k_buv
            .transpose()
            .mul(&omega_u_conc)
            .unwrap()
            .mul(&k_buv)
            .unwrap())
        .unwrap();
    let mut s_bb_a = BinaryMatrix::zeros(b_list.to_vec(), b_list.to_vec());
    let pos_of = |x: NodeId| b_list.iter().position(|&y| y == x).unwrap();
    let mut place = |rows: &[NodeId], cols: &[NodeId], m: &BinaryMatrix, mirror: bool| {
        for (r, &i) in rows.iter().enumerate() {
            for (c, &j) in cols.iter().enumerate() {
                if m.get(r, c) {
                    s_bb_a.set(pos_of(i), pos_of(j), true);
                    if mirror {
                        s_bb_a.set(pos_of(j), pos_of(i), true);
                    }
                }
            }
        }
    };
    place(&b_u_list, &b_u_list, &s_uu, false);
    place(&b_u_list, &b_v_list, &s_uv, true);
    place(&b_v_list, &b_v_list, &s_vv, false);

    InducedTriple {
        p_ab,
        s_aa_b,
        s_bb_a,
    }
}

/// Induced edge matrices for a query `(alpha, beta, c)`: the split takes
/// `a = alpha ∪ m` and `b = beta ∪ c`, with `m` the marginalized remainder.
pub fn induced_matrices(
    g: &RegressionGraph,
    alpha: &BTreeSet<NodeId>,
    beta: &BTreeSet<NodeId>,
    cond: &BTreeSet<NodeId>,
) -> Result<InducedTriple, QueryError> {
    let q = QueryPartition::new(g, alpha, beta, cond)?;
    let a: BTreeSet<NodeId> = q.alpha.union(&q.marg).copied().collect();
    Ok(induced_split(g, &a))
}

/// Outcome of an independence query.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    Independent,
    /// Dependence holds under the dependence-base reading of the graph:
    /// edge-minimal generating process, no path cancellations.
    Dependent,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Independent => write!(f, "Independent"),
            Verdict::Dependent => write!(f, "Dependent"),
        }
    }
}

/// Verdict of an `(alpha, beta, c)` query with the matrix entries that
/// witness a dependence.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QueryVerdict {
    pub verdict: Verdict,
    /// Nonzero entries of the `alpha × beta` block of the induced arrow
    /// matrix, as `(alpha node, beta node)` pairs.
    pub witnesses: Vec<(NodeId, NodeId)>,
}

/// Edge criterion: the graph implies `alpha ⊥ beta | c` exactly when the
/// `alpha × beta` block of the induced arrow matrix is zero, and implies
/// `alpha ⋔ beta | c` for a dependence base otherwise.
pub fn implies(
    g: &RegressionGraph,
    alpha: &BTreeSet<NodeId>,
    beta: &BTreeSet<NodeId>,
    cond: &BTreeSet<NodeId>,
) -> Result<QueryVerdict, QueryError> {
    let triple = induced_matrices(g, alpha, beta, cond)?;
    let alpha_list: Vec<NodeId> = alpha.iter().copied().collect();
    let beta_list: Vec<NodeId> = beta.iter().copied().collect();
    let block = triple.p_ab.submatrix(&alpha_list, &beta_list).unwrap();
    let mut witnesses = Vec::new();
    for (r, &i) in alpha_list.iter().enumerate() {
        for (c, &k) in beta_list.iter().enumerate() {
            if block.get(r, c) {
                witnesses.push((i, k));
            }
        }
    }
    let verdict = if witnesses.is_empty() {
        Verdict::Independent
    } else {
        Verdict::Dependent
    };
    Ok(QueryVerdict { verdict, witnesses })
}

/// Subgraph induced on `alpha ∪ beta`: arrows from `beta` into `alpha` where
/// the induced arrow block is 1, dashed lines within `alpha` from the induced
/// covariance graph, full lines within `beta` from the induced concentration
/// graph. Captures what the graph implies for `alpha` regressed on `beta`
/// given `c`.
pub fn induced_subgraph_query(
    g: &RegressionGraph,
    alpha: &BTreeSet<NodeId>,
    beta: &BTreeSet<NodeId>,
    cond: &BTreeSet<NodeId>,
) -> Result<RegressionGraph, QueryError> {
    let triple = induced_matrices(g, alpha, beta, cond)?;
    let alpha_list: Vec<NodeId> = alpha.iter().copied().collect();
    let beta_list: Vec<NodeId> = beta.iter().copied().collect();
    let arrows = triple.p_ab.submatrix(&alpha_list, &beta_list).unwrap();
    let dashed = triple.s_aa_b.submatrix(&alpha_list, &alpha_list).unwrap();
    let full = triple.s_bb_a.submatrix(&beta_list, &beta_list).unwrap();

    let mut edges: Vec<(String, String, EdgeKind)> = Vec::new();
    let mut undirected: Vec<Vec<(usize, usize)>> = vec![Vec::new(), Vec::new()];
    for (r, &i) in alpha_list.iter().enumerate() {
        for (c, &k) in beta_list.iter().enumerate() {
            if arrows.get(r, c) {
                edges.push((g.label(i).into(), g.label(k).into(), EdgeKind::Arrow));
            }
        }
    }
    for r in 0..alpha_list.len() {
        for c in r + 1..alpha_list.len() {
            if dashed.get(r, c) {
                undirected[0].push((r, c));
                edges.push((
                    g.label(alpha_list[r]).into(),
                    g.label(alpha_list[c]).into(),
                    EdgeKind::Dashed,
                ));
            }
        }
    }
    for r in 0..beta_list.len() {
        for c in r + 1..beta_list.len() {
            if full.get(r, c) {
                undirected[1].push((r, c));
                edges.push((
                    g.label(beta_list[r]).into(),
                    g.label(beta_list[c]).into(),
                    EdgeKind::FullLine,
                ));
            }
        }
    }

    // Components of the induced graph are the undirected-connected blocks:
    // alpha blocks become response components, beta blocks context ones.
    let comps_of = |members: &[NodeId], links: &[(usize, usize)]| -> Vec<Vec<String>> {
        let mut group: Vec<usize> = (0..members.len()).collect();
        fn find(group: &mut Vec<usize>, x: usize) -> usize {
            if group[x] != x {
                let root = find(group, group[x]);
                group[x] = root;
            }
            group[x]
        }
        for &(x, y) in links {
            let (rx, ry) = (find(&mut group, x), find(&mut group, y));
            if rx != ry {
                group[rx] = ry;
            }
        }
        let mut blocks: Vec<Vec<String>> = Vec::new();
        let mut root_block: Vec<Option<usize>> = vec![None; members.len()];
        for (x, &node) in members.iter().enumerate() {
            let r = find(&mut group, x);
            let slot = match root_block[r] {
                Some(s) => s,
                None => {
                    blocks.push(Vec::new());
                    root_block[r] = Some(blocks.len() - 1);
                    blocks.len() - 1
                }
            };
            blocks[slot].push(g.label(node).to_string());
        }
        blocks
    };

    let mut components: Vec<(ComponentKind, Vec<String>)> = Vec::new();
    for block in comps_of(&alpha_list, &undirected[0]) {
        components.push((ComponentKind::Response, block));
    }
    for block in comps_of(&beta_list, &undirected[1]) {
        components.push((ComponentKind::Context, block));
    }

    Ok(
        RegressionGraph::build(&components, &edges)
            .expect("induced subgraph is structurally valid"),
    )
}
