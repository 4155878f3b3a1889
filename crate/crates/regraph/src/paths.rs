// SPDX-License-Identifier: MIT
//! Path-level separation: a path is active given a conditioning set `c` when
//! every inner collision node lies in `c` or anterior to it and every inner
//! transmitting node is unconditioned. The graph implies `alpha ⊥ beta | c`
//! exactly when no active path runs between the two sets.
//!
//! Everything here enumerates simple paths directly. That is deliberately
//! literal — it serves as the reference the edge-matrix engine is checked
//! against — and is fine at the intended graph sizes (up to ~20 nodes).

use std::collections::BTreeSet;
use std::fmt;

use crate::graph::{NodeId, RegressionGraph, VClass};

/// A simple path: endpoints plus distinct inner nodes, consecutive nodes
/// coupled in the graph.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Path {
    pub nodes: Vec<NodeId>,
}

impl Path {
    /// Checks the path against a graph: at least two nodes, all distinct,
    /// consecutive nodes coupled.
    pub fn new(g: &RegressionGraph, nodes: Vec<NodeId>) -> Result<Path, QueryError> {
        if nodes.len() < 2 {
            return Err(QueryError::BadPath("fewer than two nodes".into()));
        }
        let distinct: BTreeSet<_> = nodes.iter().collect();
        if distinct.len() != nodes.len() {
            return Err(QueryError::BadPath("repeated node".into()));
        }
        for w in nodes.windows(2) {
            if !g.coupled(w[0], w[1]) {
                return Err(QueryError::BadPath(format!(
                    "'{}' and '{}' are uncoupled",
                    g.label(w[0]),
                    g.label(w[1])
                )));
            }
        }
        Ok(Path { nodes })
    }
}

/// An active path together with the classification of each inner node.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ActivePath {
    pub nodes: Vec<NodeId>,
    pub inner: Vec<(NodeId, VClass)>,
}

/// The four blocks of a query: `alpha`, `beta`, the conditioning set and the
/// marginalized remainder, partitioning the node set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QueryPartition {
    pub alpha: BTreeSet<NodeId>,
    pub beta: BTreeSet<NodeId>,
    pub cond: BTreeSet<NodeId>,
    pub marg: BTreeSet<NodeId>,
}

impl QueryPartition {
    /// Build a partition, rejecting overlapping or empty query sets.
    pub fn new(
        g: &RegressionGraph,
        alpha: &BTreeSet<NodeId>,
        beta: &BTreeSet<NodeId>,
        cond: &BTreeSet<NodeId>,
    ) -> Result<QueryPartition, QueryError> {
        if alpha.is_empty() || beta.is_empty() {
            return Err(QueryError::EmptyQuerySet);
        }
        for x in alpha {
            if beta.contains(x) || cond.contains(x) {
                return Err(QueryError::Overlap(g.label(*x).to_string()));
            }
        }
        for x in beta {
            if cond.contains(x) {
                return Err(QueryError::Overlap(g.label(*x).to_string()));
            }
        }
        let marg = g
            .nodes()
            .filter(|x| !alpha.contains(x) && !beta.contains(x) && !cond.contains(x))
            .collect();
        Ok(QueryPartition {
            alpha: alpha.clone(),
            beta: beta.clone(),
            cond: cond.clone(),
            marg,
        })
    }
}

/// Bad arguments to a separation query.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum QueryError {
    EmptyQuerySet,
    Overlap(String),
    BadPath(String),
}

impl fmt::Display for QueryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QueryError::EmptyQuerySet => write!(f, "alpha and beta must be nonempty"),
            QueryError::Overlap(l) => write!(f, "node '{l}' appears in two query sets"),
            QueryError::BadPath(why) => write!(f, "invalid path: {why}"),
        }
    }
}

impl std::error::Error for QueryError {}

/// Is the path active given `c`? An edge (no inner nodes) always is; otherwise
/// every inner collision node must lie in `c ∪ ant_c` and every inner
/// transmitting node must lie outside `c`.
pub fn is_active(g: &RegressionGraph, path: &Path, cond: &BTreeSet<NodeId>) -> bool {
    let opened = opened_set(g, cond);
    path_inner(g, &path.nodes)
        .into_iter()
        .all(|(node, class)| inner_ok(node, class, cond, &opened))
}

/// `c ∪ ant_c`: the nodes whose conditioning opens a collision node.
fn opened_set(g: &RegressionGraph, cond: &BTreeSet<NodeId>) -> BTreeSet<NodeId> {
    let mut opened = g.anterior_set(cond);
    opened.extend(cond.iter().copied());
    opened
}

fn inner_ok(
    node: NodeId,
    class: VClass,
    cond: &BTreeSet<NodeId>,
    opened: &BTreeSet<NodeId>,
) -> bool {
    match class {
        VClass::Collision => opened.contains(&node),
        VClass::Transmitting => !cond.contains(&node),
    }
}

/// Classify each inner node of a node sequence by the marks of its two edges.
fn path_inner(g: &RegressionGraph, nodes: &[NodeId]) -> Vec<(NodeId, VClass)> {
    let mut out = Vec::new();
    for t in 1..nodes.len().saturating_sub(1) {
        let o = nodes[t];
        let left = g.mark_at(o, nodes[t - 1]).expect("consecutive coupling");
        let right = g.mark_at(o, nodes[t + 1]).expect("consecutive coupling");
        out.push((o, VClass::from_marks(left, right)));
    }
    out
}

/// Does the graph imply `alpha ⊥ beta | cond`? True when no active path,
/// including single edges, runs between the sets.
pub fn implies_independence(
    g: &RegressionGraph,
    alpha: &BTreeSet<NodeId>,
    beta: &BTreeSet<NodeId>,
    cond: &BTreeSet<NodeId>,
) -> Result<bool, QueryError> {
    let q = QueryPartition::new(g, alpha, beta, cond)?;
    // A coupled pair across the query sets is never separated.
    for &i in &q.alpha {
        for &k in &q.beta {
            if g.coupled(i, k) {
                return Ok(false);
            }
        }
    }
    Ok(search(g, &q, true).is_empty())
}

/// All simple active paths with at least one inner node between `alpha` and
/// `beta` given `cond` — the edge-inducing paths of the query. Inner nodes are
/// drawn from outside `alpha ∪ beta`; each path carries its inner-node
/// classifications. Sorted by length, then lexicographically.
pub fn find_active_paths(
    g: &RegressionGraph,
    alpha: &BTreeSet<NodeId>,
    beta: &BTreeSet<NodeId>,
    cond: &BTreeSet<NodeId>,
) -> Result<Vec<ActivePath>, QueryError> {
    let q = QueryPartition::new(g, alpha, beta, cond)?;
    let mut found = search(g, &q, false);
    found.sort_by(|a, b| (a.nodes.len(), &a.nodes).cmp(&(b.nodes.len(), &b.nodes)));
    Ok(found)
}

/// DFS over simple paths from `alpha` into `beta`, inner nodes outside both.
/// With `stop_at_first` the result holds at most one witness.
fn search(g: &RegressionGraph, q: &QueryPartition, stop_at_first: bool) -> Vec<ActivePath> {
    let opened = opened_set(g, &q.cond);
    let mut found = Vec::new();
    let mut on_path = vec![false; g.node_count()];
    let mut nodes = Vec::new();

    fn dfs(
        g: &RegressionGraph,
        q: &QueryPartition,
        opened: &BTreeSet<NodeId>,
        on_path: &mut Vec<bool>,
        nodes: &mut Vec<NodeId>,
        found: &mut Vec<ActivePath>,
        stop_at_first: bool,
    ) {
        if stop_at_first && !found.is_empty() {
            return;
        }
        let x = *nodes.last().unwrap();
        for y in g.neighbors(x) {
            if on_path[y.0] || q.alpha.contains(&y) {
                continue;
            }
            // Extending past x makes x inner; its classification must allow it.
            if nodes.len() >= 2 {
                let o = x;
                let prev = nodes[nodes.len() - 2];
                let class =
                    VClass::from_marks(g.mark_at(o, prev).unwrap(), g.mark_at(o, y).unwrap());
                if !inner_ok(o, class, &q.cond, opened) {
                    continue;
                }
            }
            if q.beta.contains(&y) {
                if nodes.len() >= 2 {
                    let mut full = nodes.clone();
                    full.push(y);
                    let inner = path_inner(g, &full);
                    found.push(ActivePath { nodes: full, inner });
                    if stop_at_first {
                        return;
                    }
                }
                continue;
            }
            on_path[y.0] = true;
            nodes.push(y);
            dfs(g, q, opened, on_path, nodes, found, stop_at_first);
            nodes.pop();
            on_path[y.0] = false;
        }
    }

    let mut starts: Vec<NodeId> = q.alpha.iter().copied().collect();
    starts.sort_unstable();
    for s in starts {
        if stop_at_first && !found.is_empty() {
            break;
        }
        on_path[s.0] = true;
        nodes.push(s);
        dfs(
            g,
            q,
            &opened,
            &mut on_path,
            &mut nodes,
            &mut found,
            stop_at_first,
        );
        nodes.pop();
        on_path[s.0] = false;
    }
    found
}
