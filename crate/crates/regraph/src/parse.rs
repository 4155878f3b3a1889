// SPDX-License-Identifier: MIT
//! Line-based graph file format.
//!
//! ```text
//! # chain 1 <- 2 <- 3
//! component 1 response: 1
//! component 2 response: 2
//! component 3 response: 3
//! arrow 1 2
//! arrow 2 3
//! ```
//!
//! `component <j> <response|context>: <label> ...` declares `g_j` (j ascending
//! from 1, no gaps), `arrow <i> <k>` reads `i <- k`, `dashed` and `full` are
//! undirected. `#` starts a comment; blank lines are ignored.

use std::fmt;

use crate::graph::{ComponentKind, EdgeKind, GraphDefect, RegressionGraph};

/// One problem found in a graph file, tied to a 1-based line number when the
/// offending line is known.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParseError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {}: {}", l, self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

/// All problems found in a graph file.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParseErrors(pub Vec<ParseError>);

impl fmt::Display for ParseErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseErrors {}

struct Decl {
    components: Vec<(ComponentKind, Vec<String>)>,
    component_lines: Vec<usize>,
    edges: Vec<(String, String, EdgeKind)>,
    edge_lines: Vec<usize>,
}

fn syntax(decl: &mut Decl, errors: &mut Vec<ParseError>, text: &str) {
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let mut err = |message: String| {
            errors.push(ParseError {
                line: Some(lineno),
                message,
            })
        };
        let words: Vec<&str> = line.split_whitespace().collect();
        match words[0] {
            "component" => {
                // component <j> <response|context>: <label> ...
                if words.len() < 4 {
                    err("expected 'component <j> <response|context>: <label> ...'".into());
                    continue;
                }
                let j: usize = match words[1].parse() {
                    Ok(j) => j,
                    Err(_) => {
                        err(format!("component index '{}' is not a number", words[1]));
                        continue;
                    }
                };
                if j != decl.components.len() + 1 {
                    err(format!(
                        "component index {} out of order (expected {})",
                        j,
                        decl.components.len() + 1
                    ));
                    continue;
                }
                let kind_word = words[2].trim_end_matches(':');
                let kind = match kind_word {
                    "response" => ComponentKind::Response,
                    "context" => ComponentKind::Context,
                    other => {
                        err(format!(
                            "component kind '{other}' is neither 'response' nor 'context'"
                        ));
                        continue;
                    }
                };
                if !words[2].ends_with(':') && words[3] != ":" {
                    err("missing ':' after component kind".into());
                    continue;
                }
                let first_label = if words[2].ends_with(':') { 3 } else { 4 };
                let labels: Vec<String> =
                    words[first_label..].iter().map(|s| s.to_string()).collect();
                decl.components.push((kind, labels));
                decl.component_lines.push(lineno);
            }
            kind @ ("arrow" | "dashed" | "full") => {
                if words.len() != 3 {
                    err(format!("expected '{kind} <i> <k>'"));
                    continue;
                }
                let ek = match kind {
                    "arrow" => EdgeKind::Arrow,
                    "dashed" => EdgeKind::Dashed,
                    _ => EdgeKind::FullLine,
                };
                decl.edges
                    .push((words[1].to_string(), words[2].to_string(), ek));
                decl.edge_lines.push(lineno);
            }
            other => err(format!("unknown directive '{other}'")),
        }
    }
}

fn defect_line(decl: &Decl, defect: &GraphDefect) -> Option<usize> {
    use GraphDefect::*;
    let component_line = |j: usize| decl.component_lines.get(j - 1).copied();
    let label_line = |label: &str| {
        decl.components
            .iter()
            .position(|(_, ls)| ls.iter().any(|l| l == label))
            .and_then(|p| decl.component_lines.get(p).copied())
    };
    let edge_line = |a: &str, b: &str| {
        decl.edges
            .iter()
            .position(|(x, y, _)| (x == a && y == b) || (x == b && y == a))
            .and_then(|p| decl.edge_lines.get(p).copied())
    };
    match defect {
        NoNodes => None,
        EmptyComponent { component }
        | ResponseAfterContext { component }
        | ComponentNotConnected { component } => component_line(*component),
        DuplicateLabel { label } | BadLabel { label } => label_line(label),
        UnknownNode { label } | SelfLoop { label } => decl
            .edges
            .iter()
            .position(|(x, y, _)| x == label || y == label)
            .and_then(|p| decl.edge_lines.get(p).copied()),
        DuplicateEdge { a, b }
        | DashedAcrossComponents { a, b }
        | DashedInContext { a, b }
        | FullAcrossComponents { a, b }
        | FullInResponse { a, b } => edge_line(a, b),
        ArrowIntoPast { head, tail }
        | ArrowWithinComponent { head, tail }
        | ArrowIntoContext { head, tail } => edge_line(head, tail),
    }
}

/// Parse a graph file into a validated graph, or report every problem found
/// with its line number.
pub fn parse_graph(text: &str) -> Result<RegressionGraph, ParseErrors> {
    let mut errors = Vec::new();
    let mut decl = Decl {
        components: Vec::new(),
        component_lines: Vec::new(),
        edges: Vec::new(),
        edge_lines: Vec::new(),
    };
    syntax(&mut decl, &mut errors, text);
    if errors.is_empty() && decl.components.is_empty() {
        errors.push(ParseError {
            line: None,
            message: "no components declared".into(),
        });
    }
    if !errors.is_empty() {
        return Err(ParseErrors(errors));
    }
    match RegressionGraph::build(&decl.components, &decl.edges) {
        Ok(g) => Ok(g),
        Err(defects) => {
            let errors = defects
                .iter()
                .map(|d| ParseError {
                    line: defect_line(&decl, d),
                    message: d.to_string(),
                })
                .collect();
            Err(ParseErrors(errors))
        }
    }
}

/// Serialize a graph in the file format, deterministically: components in
/// declared order, then edge lines sorted lexicographically.
pub fn serialize_graph(g: &RegressionGraph) -> String {
    let mut out = String::new();
    for j in 0..g.component_count() {
        let kind = match g.component_kind(j) {
            ComponentKind::Response => "response",
            ComponentKind::Context => "context",
        };
        let labels: Vec<&str> = g.component_nodes(j).iter().map(|&i| g.label(i)).collect();
        out.push_str(&format!(
            "component {} {}: {}\n",
            j + 1,
            kind,
            labels.join(" ")
        ));
    }
    let mut lines: Vec<String> = g
        .edges()
        .map(|(a, b, kind)| match kind {
            EdgeKind::Arrow => format!("arrow {} {}", g.label(a), g.label(b)),
            EdgeKind::Dashed => {
                let (x, y) = ordered(g.label(a), g.label(b));
                format!("dashed {x} {y}")
            }
            EdgeKind::FullLine => {
                let (x, y) = ordered(g.label(a), g.label(b));
                format!("full {x} {y}")
            }
        })
        .collect();
    lines.sort_unstable();
    for l in lines {
        out.push_str(&l);
        out.push('\n');
    }
    out
}

fn ordered<'a>(a: &'a str, b: &'a str) -> (&'a str, &'a str) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}
