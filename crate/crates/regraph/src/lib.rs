// SPDX-License-Identifier: MIT
//! Regression graphs and their implied independences and dependences.
//!
//! The crate answers `alpha ⊥ beta | c` queries on graphs with three edge
//! kinds (arrows, dashed lines within joint responses, full lines within
//! context variables) by two independent routes — active-path search and the
//! binary edge-matrix calculus with partial closure — decides Markov
//! equivalence, and verifies everything against numeric oracles: linear
//! Gaussian systems generated over the graph and small discrete probability
//! tables.
//!
//! ```
//! use std::collections::BTreeSet;
//! use regraph::{parse_graph, paths, induced, Verdict};
//!
//! let g = parse_graph(
//!     "component 1 response: 1\n\
//!      component 2 response: 2\n\
//!      component 3 response: 3\n\
//!      arrow 1 2\n\
//!      arrow 2 3\n",
//! )
//! .unwrap();
//! let one: BTreeSet<_> = [g.node("1").unwrap()].into_iter().collect();
//! let three: BTreeSet<_> = [g.node("3").unwrap()].into_iter().collect();
//! let two: BTreeSet<_> = [g.node("2").unwrap()].into_iter().collect();
//!
//! // conditioning on the inner node of the chain separates the endpoints
//! assert!(paths::implies_independence(&g, &one, &three, &two).unwrap());
//! let verdict = induced::implies(&g, &one, &three, &two).unwrap();
//! assert_eq!(verdict.verdict, Verdict::Independent);
//!
//! // marginally the chain transmits
//! let empty = BTreeSet::new();
//! assert!(!paths::implies_independence(&g, &one, &three, &empty).unwrap());
//! ```

pub mod bitmatrix;
pub mod discrete;
pub mod enumerate;
pub mod equiv;
pub mod fixtures;
pub mod gaussian;
pub mod graph;
pub mod induced;
pub mod linalg;
pub mod parse;
pub mod paths;
pub mod rng;

pub use graph::{
    ComponentKind, EdgeKind, GraphDefect, GraphError, Mark, NodeId, RegressionGraph, VClass,
    VConfig,
};
pub use induced::{QueryVerdict, Verdict};
pub use parse::{parse_graph, serialize_graph, ParseError, ParseErrors};
pub use paths::{ActivePath, Path, QueryError, QueryPartition};
