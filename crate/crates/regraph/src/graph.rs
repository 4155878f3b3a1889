// SPDX-License-Identifier: MIT
//! Regression graphs: ordered connected components holding three kinds of
//! edges, plus the structural queries everything else builds on.
//!
//! Nodes live in components `g_1 < g_2 < ... < g_J`; response components come
//! first, context components last. Arrows point from a later component into a
//! response node of an earlier one, dashed lines couple nodes within one
//! response component, full lines couple nodes within one context component.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

/// Dense node index into a graph. Labels are resolved once at build time.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Whether a component holds joint responses or joint context variables.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ComponentKind {
    Response,
    Context,
}

/// The three edge kinds of a regression graph.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum EdgeKind {
    /// `i <- k`: directed dependence of a response on a regressor.
    Arrow,
    /// `i -- k`: undirected dependence within a joint response.
    Dashed,
    /// `i — k`: undirected dependence within a joint context.
    FullLine,
}

/// The mark an edge leaves at one of its endpoints.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mark {
    /// Arrowhead points at this node.
    Head,
    /// Arrow leaves this node.
    Tail,
    /// Dashed-line end.
    Dash,
    /// Full-line end.
    Line,
}

/// Classification of a three-node, two-edge configuration by its inner node.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VClass {
    /// Inner node carries two arrowheads/dashed ends; conditioning on it
    /// (or on a node anterior to the conditioning set) opens the path.
    Collision,
    /// Inner node carries a tail or full-line end; marginalizing over it
    /// keeps the path open, conditioning on it blocks the path.
    Transmitting,
}

impl VClass {
    /// Classify an inner node from the marks its two edges leave on it.
    pub fn from_marks(left: Mark, right: Mark) -> VClass {
        let colliding = |m: Mark| matches!(m, Mark::Head | Mark::Dash);
        if colliding(left) && colliding(right) {
            VClass::Collision
        } else {
            VClass::Transmitting
        }
    }
}

impl fmt::Display for VClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VClass::Collision => write!(f, "collision"),
            VClass::Transmitting => write!(f, "transmitting"),
        }
    }
}

/// A V-configuration: endpoints `(i, k)` and inner node `o`, classified.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VConfig {
    pub endpoints: (NodeId, NodeId),
    pub inner: NodeId,
    pub class: VClass,
}

/// A structural defect found while validating a graph description.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GraphDefect {
    NoNodes,
    EmptyComponent { component: usize },
    DuplicateLabel { label: String },
    BadLabel { label: String },
    UnknownNode { label: String },
    SelfLoop { label: String },
    DuplicateEdge { a: String, b: String },
    ResponseAfterContext { component: usize },
    DashedAcrossComponents { a: String, b: String },
    DashedInContext { a: String, b: String },
    FullAcrossComponents { a: String, b: String },
    FullInResponse { a: String, b: String },
    ArrowIntoPast { head: String, tail: String },
    ArrowWithinComponent { head: String, tail: String },
    ArrowIntoContext { head: String, tail: String },
    ComponentNotConnected { component: usize },
}

impl fmt::Display for GraphDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use GraphDefect::*;
        match self {
            NoNodes => write!(f, "graph has no nodes"),
            EmptyComponent { component } => write!(f, "component {component} is empty"),
            DuplicateLabel { label } => write!(f, "duplicate node label '{label}'"),
            BadLabel { label } => write!(
                f,
                "label '{label}' is not a token of letters, digits and '_'"
            ),
            UnknownNode { label } => write!(f, "unknown node '{label}'"),
            SelfLoop { label } => write!(f, "self loop at '{label}'"),
            DuplicateEdge { a, b } => write!(f, "duplicate edge between '{a}' and '{b}'"),
            ResponseAfterContext { component } => write!(
                f,
                "response component {component} declared after a context component"
            ),
            DashedAcrossComponents { a, b } => {
                write!(f, "dashed edge '{a}' -- '{b}' joins different components")
            }
            DashedInContext { a, b } => {
                write!(f, "dashed edge '{a}' -- '{b}' inside a context component")
            }
            FullAcrossComponents { a, b } => {
                write!(f, "full line '{a}' — '{b}' joins different components")
            }
            FullInResponse { a, b } => {
                write!(f, "full line '{a}' — '{b}' inside a response component")
            }
            ArrowIntoPast { head, tail } => {
                write!(f, "arrow '{head}' <- '{tail}' points into the past")
            }
            ArrowWithinComponent { head, tail } => write!(
                f,
                "arrow '{head}' <- '{tail}' stays within a single component"
            ),
            ArrowIntoContext { head, tail } => {
                write!(f, "arrow '{head}' <- '{tail}' points at a context node")
            }
            ComponentNotConnected { component } => write!(
                f,
                "component {component} is not connected by its undirected edges"
            ),
        }
    }
}

impl std::error::Error for GraphDefect {}

/// Error for structural queries with bad arguments (not a V, unknown node, ...).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GraphError {
    NotAV { reason: String },
    UnknownNode { label: String },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::NotAV { reason } => write!(f, "not a V-configuration: {reason}"),
            GraphError::UnknownNode { label } => write!(f, "unknown node '{label}'"),
        }
    }
}

impl std::error::Error for GraphError {}

fn valid_label(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A validated regression graph. Immutable after construction; all queries
/// are read-only.
#[derive(Clone, Debug)]
pub struct RegressionGraph {
    labels: Vec<String>,
    by_label: HashMap<String, usize>,
    comp_of: Vec<usize>,
    comp_kind: Vec<ComponentKind>,
    comp_nodes: Vec<Vec<usize>>,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
    dashed: Vec<Vec<usize>>,
    full: Vec<Vec<usize>>,
    edges: Vec<(usize, usize, EdgeKind)>,
}

impl RegressionGraph {
    /// Validate and build a graph from declared components and edges.
    ///
    /// `components` lists `g_1 .. g_J` in order with their kinds; edges use
    /// labels, with an arrow `(i, k)` read as `i <- k`. Either the graph is
    /// structurally sound or every defect found is returned.
    pub fn build(
        components: &[(ComponentKind, Vec<String>)],
        edges: &[(String, String, EdgeKind)],
    ) -> Result<RegressionGraph, Vec<GraphDefect>> {
        let mut defects = Vec::new();

        let mut labels = Vec::new();
        let mut by_label = HashMap::new();
        let mut comp_of = Vec::new();
        let mut comp_kind = Vec::new();
        let mut comp_nodes: Vec<Vec<usize>> = Vec::new();
        let mut seen_context = false;

        for (j, (kind, members)) in components.iter().enumerate() {
            if members.is_empty() {
                defects.push(GraphDefect::EmptyComponent { component: j + 1 });
            }
            match kind {
                ComponentKind::Context => seen_context = true,
                ComponentKind::Response if seen_context => {
                    defects.push(GraphDefect::ResponseAfterContext { component: j + 1 });
                }
                ComponentKind::Response => {}
            }
            comp_kind.push(*kind);
            let mut nodes = Vec::new();
            for label in members {
                if !valid_label(label) {
                    defects.push(GraphDefect::BadLabel {
                        label: label.clone(),
                    });
                    continue;
                }
                if by_label.contains_key(label) {
                    defects.push(GraphDefect::DuplicateLabel {
                        label: label.clone(),
                    });
                    continue;
                }
                let id = labels.len();
                by_label.insert(label.clone(), id);
                labels.push(label.clone());
                comp_of.push(j);
                nodes.push(id);
            }
            comp_nodes.push(nodes);
        }
        if labels.is_empty() && defects.is_empty() {
            defects.push(GraphDefect::NoNodes);
        }

        let n = labels.len();
        let mut parents = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        let mut dashed = vec![Vec::new(); n];
        let mut full = vec![Vec::new(); n];
        let mut edge_list = Vec::new();
        let mut coupled: BTreeSet<(usize, usize)> = BTreeSet::new();

        for (a, b, kind) in edges {
            let (ia, ib) = match (by_label.get(a), by_label.get(b)) {
                (Some(&ia), Some(&ib)) => (ia, ib),
                (ia, ib) => {
                    if ia.is_none() {
                        defects.push(GraphDefect::UnknownNode { label: a.clone() });
                    }
                    if ib.is_none() {
                        defects.push(GraphDefect::UnknownNode { label: b.clone() });
                    }
                    continue;
                }
            };
            if ia == ib {
                defects.push(GraphDefect::SelfLoop { label: a.clone() });
                continue;
            }
            let pair = (ia.min(ib), ia.max(ib));
            if !coupled.insert(pair) {
                defects.push(GraphDefect::DuplicateEdge {
                    a: a.clone(),
                    b: b.clone(),
                });
                continue;
            }
            let same_comp = comp_of[ia] == comp_of[ib];
            match kind {
                EdgeKind::Dashed => {
                    if !same_comp {
                        defects.push(GraphDefect::DashedAcrossComponents {
                            a: a.clone(),
                            b: b.clone(),
                        });
                    } else if comp_kind[comp_of[ia]] == ComponentKind::Context {
                        defects.push(GraphDefect::DashedInContext {
                            a: a.clone(),
                            b: b.clone(),
                        });
                    } else {
                        dashed[ia].push(ib);
                        dashed[ib].push(ia);
                        edge_list.push((pair.0, pair.1, EdgeKind::Dashed));
                    }
                }
                EdgeKind::FullLine => {
                    if !same_comp {
                        defects.push(GraphDefect::FullAcrossComponents {
                            a: a.clone(),
                            b: b.clone(),
                        });
                    } else if comp_kind[comp_of[ia]] == ComponentKind::Response {
                        defects.push(GraphDefect::FullInResponse {
                            a: a.clone(),
                            b: b.clone(),
                        });
                    } else {
                        full[ia].push(ib);
                        full[ib].push(ia);
                        edge_list.push((pair.0, pair.1, EdgeKind::FullLine));
                    }
                }
                EdgeKind::Arrow => {
                    // (a, b) is head <- tail.
                    if comp_kind[comp_of[ia]] == ComponentKind::Context {
                        defects.push(GraphDefect::ArrowIntoContext {
                            head: a.clone(),
                            tail: b.clone(),
                        });
                    } else if same_comp {
                        defects.push(GraphDefect::ArrowWithinComponent {
                            head: a.clone(),
                            tail: b.clone(),
                        });
                    } else if comp_of[ia] > comp_of[ib] {
                        defects.push(GraphDefect::ArrowIntoPast {
                            head: a.clone(),
                            tail: b.clone(),
                        });
                    } else {
                        parents[ia].push(ib);
                        children[ib].push(ia);
                        edge_list.push((ia, ib, EdgeKind::Arrow));
                    }
                }
            }
        }

        // Each declared component must be one connected block of the
        // undirected (dashed + full) sub-skeleton.
        for (j, nodes) in comp_nodes.iter().enumerate() {
            if nodes.len() < 2 {
                continue;
            }
            let mut seen: BTreeSet<usize> = BTreeSet::new();
            let mut stack = vec![nodes[0]];
            while let Some(x) = stack.pop() {
                if !seen.insert(x) {
                    continue;
                }
                for &y in dashed[x].iter().chain(full[x].iter()) {
                    if !seen.contains(&y) {
                        stack.push(y);
                    }
                }
            }
            if seen.len() != nodes.len() {
                defects.push(GraphDefect::ComponentNotConnected { component: j + 1 });
            }
        }

        if !defects.is_empty() {
            return Err(defects);
        }

        for adj in parents
            .iter_mut()
            .chain(children.iter_mut())
            .chain(dashed.iter_mut())
            .chain(full.iter_mut())
        {
            adj.sort_unstable();
        }
        edge_list.sort_unstable();

        Ok(RegressionGraph {
            labels,
            by_label,
            comp_of,
            comp_kind,
            comp_nodes,
            parents,
            children,
            dashed,
            full,
            edges: edge_list,
        })
    }

    /// Convenience builder for literals in tests and fixtures.
    pub fn build_from(
        components: &[(ComponentKind, &[&str])],
        edges: &[(&str, &str, EdgeKind)],
    ) -> Result<RegressionGraph, Vec<GraphDefect>> {
        let comps: Vec<(ComponentKind, Vec<String>)> = components
            .iter()
            .map(|(k, ls)| (*k, ls.iter().map(|s| s.to_string()).collect()))
            .collect();
        let es: Vec<(String, String, EdgeKind)> = edges
            .iter()
            .map(|(a, b, k)| (a.to_string(), b.to_string(), *k))
            .collect();
        RegressionGraph::build(&comps, &es)
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.labels.len()).map(NodeId)
    }

    pub fn label(&self, i: NodeId) -> &str {
        &self.labels[i.0]
    }

    pub fn node(&self, label: &str) -> Option<NodeId> {
        self.by_label.get(label).copied().map(NodeId)
    }

    pub fn node_or_err(&self, label: &str) -> Result<NodeId, GraphError> {
        self.node(label).ok_or_else(|| GraphError::UnknownNode {
            label: label.to_string(),
        })
    }

    pub fn component_count(&self) -> usize {
        self.comp_nodes.len()
    }

    pub fn component_of(&self, i: NodeId) -> usize {
        self.comp_of[i.0]
    }

    pub fn component_kind(&self, j: usize) -> ComponentKind {
        self.comp_kind[j]
    }

    pub fn component_nodes(&self, j: usize) -> Vec<NodeId> {
        self.comp_nodes[j].iter().map(|&x| NodeId(x)).collect()
    }

    pub fn is_context(&self, i: NodeId) -> bool {
        self.comp_kind[self.comp_of[i.0]] == ComponentKind::Context
    }

    /// Response nodes (the set `u`), in node order.
    pub fn response_nodes(&self) -> Vec<NodeId> {
        self.nodes().filter(|&i| !self.is_context(i)).collect()
    }

    /// Context nodes (the set `v`), in node order.
    pub fn context_nodes(&self) -> Vec<NodeId> {
        self.nodes().filter(|&i| self.is_context(i)).collect()
    }

    pub fn parents(&self, i: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.parents[i.0].iter().map(|&x| NodeId(x))
    }

    pub fn children(&self, i: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.children[i.0].iter().map(|&x| NodeId(x))
    }

    pub fn dashed_neighbors(&self, i: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.dashed[i.0].iter().map(|&x| NodeId(x))
    }

    pub fn full_neighbors(&self, i: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.full[i.0].iter().map(|&x| NodeId(x))
    }

    /// All nodes coupled to `i`, in ascending order.
    pub fn neighbors(&self, i: NodeId) -> Vec<NodeId> {
        let mut out: Vec<usize> = self.parents[i.0]
            .iter()
            .chain(self.children[i.0].iter())
            .chain(self.dashed[i.0].iter())
            .chain(self.full[i.0].iter())
            .copied()
            .collect();
        out.sort_unstable();
        out.into_iter().map(NodeId).collect()
    }

    /// Edge list with arrows as `(head, tail)` and undirected pairs ordered.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, EdgeKind)> + '_ {
        self.edges
            .iter()
            .map(|&(a, b, k)| (NodeId(a), NodeId(b), k))
    }

    /// The mark the `x`-`y` edge leaves at `x`, if the pair is coupled.
    pub fn mark_at(&self, x: NodeId, y: NodeId) -> Option<Mark> {
        if self.parents[x.0].binary_search(&y.0).is_ok() {
            return Some(Mark::Head); // x <- y
        }
        if self.children[x.0].binary_search(&y.0).is_ok() {
            return Some(Mark::Tail); // y <- x
        }
        if self.dashed[x.0].binary_search(&y.0).is_ok() {
            return Some(Mark::Dash);
        }
        if self.full[x.0].binary_search(&y.0).is_ok() {
            return Some(Mark::Line);
        }
        None
    }

    pub fn coupled(&self, x: NodeId, y: NodeId) -> bool {
        self.mark_at(x, y).is_some()
    }

    /// Edge kind of the pair, if coupled.
    pub fn edge_kind(&self, x: NodeId, y: NodeId) -> Option<EdgeKind> {
        match self.mark_at(x, y)? {
            Mark::Head | Mark::Tail => Some(EdgeKind::Arrow),
            Mark::Dash => Some(EdgeKind::Dashed),
            Mark::Line => Some(EdgeKind::FullLine),
        }
    }

    /// Connected components of the undirected (dashed + full) sub-skeleton,
    /// in declared order. Equal to the declared components on a valid graph.
    pub fn connected_components(&self) -> Vec<BTreeSet<NodeId>> {
        self.comp_nodes
            .iter()
            .map(|nodes| nodes.iter().map(|&x| NodeId(x)).collect())
            .collect()
    }

    /// The anterior set of `c`: nodes outside `c` that reach into `c` along
    /// ancestor paths, context-line paths, or an ancestor path continued by
    /// context lines. BFS over reversed arrows and full lines.
    pub fn anterior_set(&self, c: &BTreeSet<NodeId>) -> BTreeSet<NodeId> {
        let mut seen = vec![false; self.node_count()];
        let mut queue: Vec<usize> = c.iter().map(|&i| i.0).collect();
        for &i in &queue {
            seen[i] = true;
        }
        while let Some(x) = queue.pop() {
            for &y in self.parents[x].iter().chain(self.full[x].iter()) {
                if !seen[y] {
                    seen[y] = true;
                    queue.push(y);
                }
            }
        }
        (0..self.node_count())
            .filter(|&i| seen[i] && !c.contains(&NodeId(i)))
            .map(NodeId)
            .collect()
    }

    /// Classify the V with endpoints `i, k` and inner node `o`.
    ///
    /// The subgraph induced by `{i, o, k}` must have exactly the two edges
    /// meeting `o`.
    pub fn classify_v(&self, i: NodeId, o: NodeId, k: NodeId) -> Result<VClass, GraphError> {
        if i == o || k == o || i == k {
            return Err(GraphError::NotAV {
                reason: "nodes are not distinct".to_string(),
            });
        }
        let left = self.mark_at(o, i).ok_or_else(|| GraphError::NotAV {
            reason: format!("'{}' and '{}' are uncoupled", self.label(i), self.label(o)),
        })?;
        let right = self.mark_at(o, k).ok_or_else(|| GraphError::NotAV {
            reason: format!("'{}' and '{}' are uncoupled", self.label(o), self.label(k)),
        })?;
        if self.coupled(i, k) {
            return Err(GraphError::NotAV {
                reason: format!(
                    "endpoints '{}' and '{}' are coupled",
                    self.label(i),
                    self.label(k)
                ),
            });
        }
        Ok(VClass::from_marks(left, right))
    }

    /// All V-configurations of the graph, endpoints ordered, ascending.
    pub fn all_vs(&self) -> Vec<VConfig> {
        let mut out = Vec::new();
        for o in self.nodes() {
            let nbrs = self.neighbors(o);
            for (p, &i) in nbrs.iter().enumerate() {
                for &k in &nbrs[p + 1..] {
                    if !self.coupled(i, k) {
                        let class = VClass::from_marks(
                            self.mark_at(o, i).unwrap(),
                            self.mark_at(o, k).unwrap(),
                        );
                        out.push(VConfig {
                            endpoints: (i, k),
                            inner: o,
                            class,
                        });
                    }
                }
            }
        }
        out.sort_by_key(|v| (v.endpoints, v.inner));
        out
    }

    /// Skeleton: every coupled pair, type erased, pairs ordered ascending.
    pub fn skeleton(&self) -> BTreeSet<(NodeId, NodeId)> {
        self.edges
            .iter()
            .map(|&(a, b, _)| (NodeId(a.min(b)), NodeId(a.max(b))))
            .collect()
    }
}
