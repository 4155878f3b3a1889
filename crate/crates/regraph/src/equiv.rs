// SPDX-License-Identifier: MIT
//! Markov equivalence of regression graphs: two graphs over the same labels
//! define the same independence structure exactly when their skeletons and
//! their sets of collision V-configurations coincide.

use std::collections::BTreeSet;
use std::fmt;

use crate::graph::{RegressionGraph, VClass};

/// A collision V keyed by labels: ordered endpoint pair plus inner node.
pub type CollisionV = (String, String, String);

/// All collision Vs of a graph, endpoints ordered lexicographically.
pub fn collision_vs(g: &RegressionGraph) -> BTreeSet<CollisionV> {
    g.all_vs()
        .into_iter()
        .filter(|v| v.class == VClass::Collision)
        .map(|v| {
            let a = g.label(v.endpoints.0).to_string();
            let b = g.label(v.endpoints.1).to_string();
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            (a, b, g.label(v.inner).to_string())
        })
        .collect()
}

fn skeleton_labels(g: &RegressionGraph) -> BTreeSet<(String, String)> {
    g.skeleton()
        .into_iter()
        .map(|(i, k)| {
            let a = g.label(i).to_string();
            let b = g.label(k).to_string();
            if a <= b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect()
}

/// Comparison of two graphs over mismatched node label sets.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NodeSetMismatch {
    pub only_first: Vec<String>,
    pub only_second: Vec<String>,
}

impl fmt::Display for NodeSetMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "node sets differ (only first: {:?}, only second: {:?})",
            self.only_first, self.only_second
        )
    }
}

impl std::error::Error for NodeSetMismatch {}

fn check_same_nodes(g1: &RegressionGraph, g2: &RegressionGraph) -> Result<(), NodeSetMismatch> {
    let l1: BTreeSet<String> = g1.nodes().map(|i| g1.label(i).to_string()).collect();
    let l2: BTreeSet<String> = g2.nodes().map(|i| g2.label(i).to_string()).collect();
    if l1 == l2 {
        Ok(())
    } else {
        Err(NodeSetMismatch {
            only_first: l1.difference(&l2).cloned().collect(),
            only_second: l2.difference(&l1).cloned().collect(),
        })
    }
}

/// Same skeleton and same collision Vs.
pub fn markov_equivalent(
    g1: &RegressionGraph,
    g2: &RegressionGraph,
) -> Result<bool, NodeSetMismatch> {
    check_same_nodes(g1, g2)?;
    Ok(skeleton_labels(g1) == skeleton_labels(g2) && collision_vs(g1) == collision_vs(g2))
}

/// What distinguishes two graphs, for reporting.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct EquivalenceDiff {
    pub skeleton_only_first: Vec<(String, String)>,
    pub skeleton_only_second: Vec<(String, String)>,
    pub collision_only_first: Vec<CollisionV>,
    pub collision_only_second: Vec<CollisionV>,
}

impl EquivalenceDiff {
    pub fn is_empty(&self) -> bool {
        self.skeleton_only_first.is_empty()
            && self.skeleton_only_second.is_empty()
            && self.collision_only_first.is_empty()
            && self.collision_only_second.is_empty()
    }
}

/// Skeleton and collision-V differences between two graphs.
pub fn equivalence_diff(
    g1: &RegressionGraph,
    g2: &RegressionGraph,
) -> Result<EquivalenceDiff, NodeSetMismatch> {
    check_same_nodes(g1, g2)?;
    let (s1, s2) = (skeleton_labels(g1), skeleton_labels(g2));
    let (v1, v2) = (collision_vs(g1), collision_vs(g2));
    Ok(EquivalenceDiff {
        skeleton_only_first: s1.difference(&s2).cloned().collect(),
        skeleton_only_second: s2.difference(&s1).cloned().collect(),
        collision_only_first: v1.difference(&v2).cloned().collect(),
        collision_only_second: v2.difference(&v1).cloned().collect(),
    })
}
