// SPDX-License-Identifier: MIT
//! Small named graphs used across tests, benches and the examples in the
//! documentation.

use crate::graph::{ComponentKind::*, EdgeKind::*, RegressionGraph};

/// `1 <- 2 <- 3`: three singleton response components.
pub fn dag_chain() -> RegressionGraph {
    RegressionGraph::build_from(
        &[(Response, &["1"]), (Response, &["2"]), (Response, &["3"])],
        &[("1", "2", Arrow), ("2", "3", Arrow)],
    )
    .unwrap()
}

/// `1 -- 2 -- 3`: one joint-response component.
pub fn covariance_chain() -> RegressionGraph {
    RegressionGraph::build_from(
        &[(Response, &["1", "2", "3"])],
        &[("1", "2", Dashed), ("2", "3", Dashed)],
    )
    .unwrap()
}

/// `1 — 2 — 3`: one context component.
pub fn concentration_chain() -> RegressionGraph {
    RegressionGraph::build_from(
        &[(Context, &["1", "2", "3"])],
        &[("1", "2", FullLine), ("2", "3", FullLine)],
    )
    .unwrap()
}

/// `1 -> 2 <- 3`: a collider, node 2 in the earliest component.
pub fn collider() -> RegressionGraph {
    RegressionGraph::build_from(
        &[(Response, &["2"]), (Response, &["1"]), (Response, &["3"])],
        &[("2", "1", Arrow), ("2", "3", Arrow)],
    )
    .unwrap()
}

/// Five-variable treatment/outcome generating process: outcome `Y`, recent
/// treatment `T_r`, intermediate outcome `A`, past treatment `T_p`, health
/// status `U`. `T_p` is fully randomized (uncoupled with `U`), `T_r` is
/// randomized given `A` (uncoupled with `U` and `T_p`), and `U` is expected
/// to be unobserved in a follow-up study.
pub fn treatment_followup() -> RegressionGraph {
    RegressionGraph::build_from(
        &[
            (Response, &["Y"]),
            (Response, &["T_r"]),
            (Response, &["A"]),
            (Response, &["T_p"]),
            (Response, &["U"]),
        ],
        &[
            ("Y", "T_r", Arrow),
            ("Y", "U", Arrow),
            ("Y", "T_p", Arrow),
            ("T_r", "A", Arrow),
            ("A", "T_p", Arrow),
            ("A", "U", Arrow),
        ],
    )
    .unwrap()
}
