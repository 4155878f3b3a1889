// SPDX-License-Identifier: MIT
//! Command-line front end: validate graph files, run independence queries
//! through either engine, list active paths, transform graphs, compare for
//! Markov equivalence, run the numeric oracle, and materialize the table
//! families.
//!
//! Exit codes: 0 success, 1 "not equivalent" or violations found, 2 usage
//! errors, 3 graph-file validation errors.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Arg, ArgAction, ArgMatches, Command};

use regraph::discrete::{
    check_property, table1_family, table2_family, table3_family, JointTable, PropertyCheck,
    PropertyId,
};
use regraph::gaussian;
use regraph::graph::{ComponentKind, EdgeKind, NodeId, RegressionGraph};
use regraph::induced;
use regraph::parse::{parse_graph, serialize_graph};
use regraph::paths::{self, ActivePath};
use regraph::Verdict;

const USAGE_ERROR: u8 = 2;
const VALIDATION_ERROR: u8 = 3;
const DIFFERENCE_FOUND: u8 = 1;

fn cli() -> Command {
    let file = Arg::new("file").required(true).help("graph file");
    let labels = |name: &'static str, help: &'static str, required: bool| {
        Arg::new(name)
            .long(name)
            .required(required)
            .help(help)
            .value_name("labels")
    };
    let json = Arg::new("json")
        .long("json")
        .action(ArgAction::SetTrue)
        .help("structured output with stable field names");
    Command::new("regraph")
        .about("Regression graphs: implied independences, graph transforms, numeric oracles")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .subcommand(
            Command::new("validate")
                .about("Parse and validate a graph file")
                .arg(file.clone()),
        )
        .subcommand(
            Command::new("query")
                .about("Decide whether the graph implies a _||_ b | c")
                .arg(file.clone())
                .arg(labels("a", "first query set, comma separated", true))
                .arg(labels("b", "second query set, comma separated", true))
                .arg(labels("c", "conditioning set, comma separated", false))
                .arg(
                    Arg::new("engine")
                        .long("engine")
                        .value_parser(["paths", "matrix", "both"])
                        .default_value("both")
                        .help("which decision procedure to run"),
                )
                .arg(json.clone()),
        )
        .subcommand(
            Command::new("paths")
                .about("List the edge-inducing active paths of a query")
                .arg(file.clone())
                .arg(labels("a", "first query set", true))
                .arg(labels("b", "second query set", true))
                .arg(labels("c", "conditioning set", false))
                .arg(json.clone()),
        )
        .subcommand(
            Command::new("transform")
                .about("Print the induced subgraph on alpha ∪ beta for a query")
                .arg(file.clone())
                .arg(labels("alpha", "response side of the induced graph", true))
                .arg(labels("beta", "regressor side of the induced graph", true))
                .arg(labels("c", "conditioning set", false))
                .arg(json.clone()),
        )
        .subcommand(
            Command::new("equiv")
                .about("Markov equivalence of two graphs (exit 1 when they differ)")
                .arg(Arg::new("first").required(true).help("first graph file"))
                .arg(Arg::new("second").required(true).help("second graph file"))
                .arg(json.clone()),
        )
        .subcommand(
            Command::new("oracle")
                .about("Check every singleton query against sampled Gaussian systems")
                .arg(file.clone())
                .arg(
                    Arg::new("draws")
                        .long("draws")
                        .value_parser(clap::value_parser!(usize))
                        .default_value("10"),
                )
                .arg(
                    Arg::new("tol")
                        .long("tol")
                        .value_parser(clap::value_parser!(f64))
                        .default_value("1e-9"),
                )
                .arg(
                    Arg::new("seed")
                        .long("seed")
                        .value_parser(clap::value_parser!(u64))
                        .default_value("0"),
                )
                .arg(json.clone()),
        )
        .subcommand(
            Command::new("tables")
                .about("Materialize and property-check one of the three table families")
                .arg(
                    Arg::new("family")
                        .long("family")
                        .required(true)
                        .value_parser(["1", "2", "3"]),
                )
                .arg(
                    Arg::new("alpha")
                        .long("alpha")
                        .required(true)
                        .value_parser(clap::value_parser!(f64)),
                )
                .arg(
                    Arg::new("beta")
                        .long("beta")
                        .value_parser(clap::value_parser!(f64))
                        .help("required for family 2"),
                )
                .arg(json.clone()),
        )
        .subcommand(
            Command::new("dot")
                .about("Emit the graph in DOT format")
                .arg(file.clone()),
        )
}

fn main() -> ExitCode {
    let matches = cli().get_matches();
    let code = match matches.subcommand() {
        Some(("validate", m)) => cmd_validate(m),
        Some(("query", m)) => cmd_query(m),
        Some(("paths", m)) => cmd_paths(m),
        Some(("transform", m)) => cmd_transform(m),
        Some(("equiv", m)) => cmd_equiv(m),
        Some(("oracle", m)) => cmd_oracle(m),
        Some(("tables", m)) => cmd_tables(m),
        Some(("dot", m)) => cmd_dot(m),
        _ => unreachable!("subcommand required"),
    };
    ExitCode::from(code)
}

fn load_graph(path: &str) -> Result<RegressionGraph, u8> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read '{path}': {e}");
            return Err(USAGE_ERROR);
        }
    };
    match parse_graph(&text) {
        Ok(g) => Ok(g),
        Err(errors) => {
            eprintln!("'{path}' is not a valid graph file:");
            for e in &errors.0 {
                eprintln!("  {e}");
            }
            Err(VALIDATION_ERROR)
        }
    }
}

fn split_labels(raw: Option<&String>) -> Vec<String> {
    raw.map(|s| {
        s.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.to_string())
            .collect()
    })
    .unwrap_or_default()
}

fn resolve_set(g: &RegressionGraph, labels: &[String]) -> Result<BTreeSet<NodeId>, u8> {
    let mut out = BTreeSet::new();
    for l in labels {
        match g.node(l) {
            Some(i) => {
                out.insert(i);
            }
            None => {
                eprintln!("unknown node '{l}'");
                return Err(USAGE_ERROR);
            }
        }
    }
    Ok(out)
}

fn label_list(g: &RegressionGraph, set: &BTreeSet<NodeId>) -> Vec<String> {
    set.iter().map(|&i| g.label(i).to_string()).collect()
}

// ---- tiny JSON helpers -------------------------------------------------

fn jstr(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn jarr<I: IntoIterator<Item = String>>(items: I) -> String {
    format!("[{}]", items.into_iter().collect::<Vec<_>>().join(","))
}

fn jstrs(items: &[String]) -> String {
    jarr(items.iter().map(|s| jstr(s)))
}

// ---- subcommands -------------------------------------------------------

fn cmd_validate(m: &ArgMatches) -> u8 {
    let path = m.get_one::<String>("file").unwrap();
    match load_graph(path) {
        Ok(g) => {
            println!(
                "valid: {} nodes, {} edges, {} components",
                g.node_count(),
                g.edges().count(),
                g.component_count()
            );
            0
        }
        Err(code) => code,
    }
}

struct Query {
    alpha: BTreeSet<NodeId>,
    beta: BTreeSet<NodeId>,
    cond: BTreeSet<NodeId>,
}

fn read_query(
    g: &RegressionGraph,
    m: &ArgMatches,
    a_name: &str,
    b_name: &str,
) -> Result<Query, u8> {
    let alpha = resolve_set(g, &split_labels(m.get_one::<String>(a_name)))?;
    let beta = resolve_set(g, &split_labels(m.get_one::<String>(b_name)))?;
    let cond = resolve_set(g, &split_labels(m.get_one::<String>("c")))?;
    Ok(Query { alpha, beta, cond })
}

fn path_text(g: &RegressionGraph, p: &ActivePath) -> String {
    let nodes: Vec<&str> = p.nodes.iter().map(|&i| g.label(i)).collect();
    let inner: Vec<String> = p
        .inner
        .iter()
        .map(|(i, class)| format!("{}: {}", g.label(*i), class))
        .collect();
    if inner.is_empty() {
        nodes.join(" ")
    } else {
        format!("{}  [{}]", nodes.join(" "), inner.join(", "))
    }
}

fn path_json(g: &RegressionGraph, p: &ActivePath) -> String {
    let nodes = jarr(p.nodes.iter().map(|&i| jstr(g.label(i))));
    let inner = jarr(p.inner.iter().map(|(i, class)| {
        format!(
            "{{\"node\":{},\"class\":{}}}",
            jstr(g.label(*i)),
            jstr(&class.to_string())
        )
    }));
    format!("{{\"nodes\":{nodes},\"inner\":{inner}}}")
}

fn cmd_query(m: &ArgMatches) -> u8 {
    let g = match load_graph(m.get_one::<String>("file").unwrap()) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let q = match read_query(&g, m, "a", "b") {
        Ok(q) => q,
        Err(code) => return code,
    };
    let engine = m.get_one::<String>("engine").unwrap().as_str();
    let json = m.get_flag("json");

    let matrix = if engine != "paths" {
        match induced::implies(&g, &q.alpha, &q.beta, &q.cond) {
            Ok(v) => Some(v),
            Err(e) => {
                eprintln!("{e}");
                return USAGE_ERROR;
            }
        }
    } else {
        None
    };
    let path_route = if engine != "matrix" {
        let independent = match paths::implies_independence(&g, &q.alpha, &q.beta, &q.cond) {
            Ok(v) => v,
            Err(e) => {
                eprintln!("{e}");
                return USAGE_ERROR;
            }
        };
        let witnesses = if independent {
            Vec::new()
        } else {
            paths::find_active_paths(&g, &q.alpha, &q.beta, &q.cond).unwrap()
        };
        Some((independent, witnesses))
    } else {
        None
    };

    if let (Some(mv), Some((pi, _))) = (&matrix, &path_route) {
        if (mv.verdict == Verdict::Independent) != *pi {
            eprintln!(
                "engine disagreement: matrix says {:?}, paths say independent = {pi}",
                mv.verdict
            );
            return DIFFERENCE_FOUND;
        }
    }

    let verdict = match (&matrix, &path_route) {
        (Some(v), _) => v.verdict,
        (None, Some((true, _))) => Verdict::Independent,
        (None, Some((false, _))) => Verdict::Dependent,
        (None, None) => unreachable!(),
    };

    if json {
        let mut fields = vec![
            format!("\"a\":{}", jstrs(&label_list(&g, &q.alpha))),
            format!("\"b\":{}", jstrs(&label_list(&g, &q.beta))),
            format!("\"c\":{}", jstrs(&label_list(&g, &q.cond))),
            format!("\"engine\":{}", jstr(engine)),
            format!("\"verdict\":{}", jstr(&verdict.to_string())),
        ];
        if let Some(mv) = &matrix {
            fields.push(format!(
                "\"matrix_witnesses\":{}",
                jarr(
                    mv.witnesses
                        .iter()
                        .map(|(i, k)| { format!("[{},{}]", jstr(g.label(*i)), jstr(g.label(*k))) })
                )
            ));
        }
        if let Some((_, witnesses)) = &path_route {
            fields.push(format!(
                "\"active_paths\":{}",
                jarr(witnesses.iter().map(|p| path_json(&g, p)))
            ));
        }
        println!("{{{}}}", fields.join(","));
    } else {
        match verdict {
            Verdict::Independent => println!("Independent"),
            Verdict::Dependent => println!("Dependent"),
        }
        if verdict == Verdict::Dependent {
            println!("(dependence holds under the dependence-base reading of the graph)");
            if let Some(mv) = &matrix {
                for (i, k) in &mv.witnesses {
                    println!("induced arrow: {} <- {}", g.label(*i), g.label(*k));
                }
            }
            if let Some((_, witnesses)) = &path_route {
                for p in witnesses {
                    println!("active path: {}", path_text(&g, p));
                }
                if witnesses.is_empty() {
                    println!("active path: (direct edge)");
                }
            }
        }
    }
    0
}

fn cmd_paths(m: &ArgMatches) -> u8 {
    let g = match load_graph(m.get_one::<String>("file").unwrap()) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let q = match read_query(&g, m, "a", "b") {
        Ok(q) => q,
        Err(code) => return code,
    };
    let found = match paths::find_active_paths(&g, &q.alpha, &q.beta, &q.cond) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("{e}");
            return USAGE_ERROR;
        }
    };
    if m.get_flag("json") {
        println!(
            "{{\"active_paths\":{}}}",
            jarr(found.iter().map(|p| path_json(&g, p)))
        );
    } else if found.is_empty() {
        println!("no active paths");
    } else {
        for p in &found {
            println!("{}", path_text(&g, p));
        }
    }
    0
}

fn cmd_transform(m: &ArgMatches) -> u8 {
    let g = match load_graph(m.get_one::<String>("file").unwrap()) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let q = match read_query(&g, m, "alpha", "beta") {
        Ok(q) => q,
        Err(code) => return code,
    };
    match induced::induced_subgraph_query(&g, &q.alpha, &q.beta, &q.cond) {
        Ok(h) => {
            let text = serialize_graph(&h);
            if m.get_flag("json") {
                println!("{{\"graph\":{}}}", jstr(&text));
            } else {
                print!("{text}");
            }
            0
        }
        Err(e) => {
            eprintln!("{e}");
            USAGE_ERROR
        }
    }
}

fn cmd_equiv(m: &ArgMatches) -> u8 {
    let g1 = match load_graph(m.get_one::<String>("first").unwrap()) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let g2 = match load_graph(m.get_one::<String>("second").unwrap()) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let diff = match regraph::equiv::equivalence_diff(&g1, &g2) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("{e}");
            return USAGE_ERROR;
        }
    };
    let equivalent = diff.is_empty();
    if m.get_flag("json") {
        let pair_arr = |items: &[(String, String)]| {
            jarr(
                items
                    .iter()
                    .map(|(a, b)| format!("[{},{}]", jstr(a), jstr(b))),
            )
        };
        let v_arr = |items: &[(String, String, String)]| {
            jarr(
                items
                    .iter()
                    .map(|(a, b, o)| format!("[{},{},{}]", jstr(a), jstr(b), jstr(o))),
            )
        };
        println!(
            "{{\"equivalent\":{},\"skeleton_only_first\":{},\"skeleton_only_second\":{},\"collision_only_first\":{},\"collision_only_second\":{}}}",
            equivalent,
            pair_arr(&diff.skeleton_only_first),
            pair_arr(&diff.skeleton_only_second),
            v_arr(&diff.collision_only_first),
            v_arr(&diff.collision_only_second),
        );
    } else if equivalent {
        println!("equivalent");
    } else {
        println!("not equivalent");
        for (a, b) in &diff.skeleton_only_first {
            println!("skeleton edge only in first: {a}-{b}");
        }
        for (a, b) in &diff.skeleton_only_second {
            println!("skeleton edge only in second: {a}-{b}");
        }
        for (a, b, o) in &diff.collision_only_first {
            println!("collision V only in first: ({a}, {b}; inner {o})");
        }
        for (a, b, o) in &diff.collision_only_second {
            println!("collision V only in second: ({a}, {b}; inner {o})");
        }
    }
    if equivalent {
        0
    } else {
        DIFFERENCE_FOUND
    }
}

fn cmd_oracle(m: &ArgMatches) -> u8 {
    let g = match load_graph(m.get_one::<String>("file").unwrap()) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let draws = *m.get_one::<usize>("draws").unwrap();
    let tol = *m.get_one::<f64>("tol").unwrap();
    let seed = *m.get_one::<u64>("seed").unwrap();
    if draws == 0 || tol.is_nan() || tol <= 0.0 {
        eprintln!("need draws > 0 and tol > 0");
        return USAGE_ERROR;
    }
    let report = match gaussian::oracle_check(&g, draws, tol, seed) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("numeric failure: {e}");
            return DIFFERENCE_FOUND;
        }
    };
    let cond_text = |cond: &[NodeId]| {
        let ls: Vec<&str> = cond.iter().map(|&x| g.label(x)).collect();
        ls.join(",")
    };
    if m.get_flag("json") {
        let triples = jarr(report.triples.iter().map(|t| {
            format!(
                "{{\"i\":{},\"k\":{},\"c\":{},\"implied\":{},\"max_abs\":{:e},\"exceed\":{},\"ok\":{}}}",
                jstr(g.label(t.i)),
                jstr(g.label(t.k)),
                jstrs(
                    &t.cond
                        .iter()
                        .map(|&x| g.label(x).to_string())
                        .collect::<Vec<_>>()
                ),
                jstr(&t.implied.to_string()),
                t.max_abs,
                t.exceed_count,
                t.ok
            )
        }));
        println!(
            "{{\"draws\":{},\"tol\":{:e},\"ok\":{},\"max_abs_independent\":{:e},\"triples\":{}}}",
            report.draws,
            report.tol,
            report.ok(),
            report.max_abs_independent,
            triples
        );
    } else {
        println!(
            "oracle: {} triples, {} draws, tol {:.1e}",
            report.triples.len(),
            report.draws,
            report.tol
        );
        for t in &report.triples {
            let given = if t.cond.is_empty() {
                String::new()
            } else {
                format!(" | {}", cond_text(&t.cond))
            };
            let detail = match t.implied {
                Verdict::Independent => format!("max |pc| = {:.2e}", t.max_abs),
                Verdict::Dependent => {
                    format!("exceeds tol in {}/{} draws", t.exceed_count, report.draws)
                }
            };
            println!(
                "{} vs {}{}: {} — {}{}",
                g.label(t.i),
                g.label(t.k),
                given,
                t.implied,
                detail,
                if t.ok { "" } else { "  VIOLATION" }
            );
        }
        println!(
            "max |partial covariance| on implied independences: {:.2e}",
            report.max_abs_independent
        );
        println!(
            "{}",
            if report.ok() {
                "OK"
            } else {
                "violations found"
            }
        );
    }
    if report.ok() {
        0
    } else {
        DIFFERENCE_FOUND
    }
}

fn table_grid(t: &JointTable) -> String {
    let vars = t.variables();
    let mut out = String::new();
    let c_levels = vars[2].levels;
    let _ = writeln!(
        out,
        "{} × {} × {} table over A, B, C (columns are levels of C)",
        vars[0].levels, vars[1].levels, c_levels
    );
    for i in 0..vars[0].levels {
        for j in 0..vars[1].levels {
            let cells: Vec<String> = (0..c_levels)
                .map(|k| format!("{:.6}", t.prob(&[i, j, k])))
                .collect();
            let _ = writeln!(out, "A={} B={}: {}", i + 1, j + 1, cells.join("  "));
        }
    }
    out
}

type FamilyReport = (JointTable, PropertyId, Vec<(&'static str, bool)>);

fn cmd_tables(m: &ArgMatches) -> u8 {
    let family: u32 = m.get_one::<String>("family").unwrap().parse().unwrap();
    let alpha = *m.get_one::<f64>("alpha").unwrap();
    let beta = m.get_one::<f64>("beta").copied();
    let json = m.get_flag("json");

    let built: Result<FamilyReport, String> = match family {
        1 => table1_family(alpha).map_err(|e| e.to_string()).map(|t| {
            let facts = vec![
                ("A _||_ B | C", t.check_ci(&[0], &[1], &[2])),
                ("A _||_ B", t.check_ci(&[0], &[1], &[])),
                ("A dependent on C", !t.check_ci(&[0], &[2], &[])),
                ("B dependent on C", !t.check_ci(&[1], &[2], &[])),
            ];
            (t, PropertyId::SingletonTransitivity, facts)
        }),
        2 => {
            let beta = match beta {
                Some(b) => b,
                None => {
                    eprintln!("family 2 needs --beta");
                    return USAGE_ERROR;
                }
            };
            table2_family(alpha, beta)
                .map_err(|e| e.to_string())
                .map(|t| {
                    let facts = vec![
                        ("A _||_ B | C", t.check_ci(&[0], &[1], &[2])),
                        ("A _||_ C | B", t.check_ci(&[0], &[2], &[1])),
                        ("A dependent on (B,C)", !t.check_ci(&[0], &[1, 2], &[])),
                        ("A dependent on B", !t.check_ci(&[0], &[1], &[])),
                        ("A dependent on C", !t.check_ci(&[0], &[2], &[])),
                    ];
                    (t, PropertyId::Intersection, facts)
                })
        }
        3 => table3_family(alpha).map_err(|e| e.to_string()).map(|t| {
            let facts = vec![
                ("A _||_ C", t.check_ci(&[0], &[2], &[])),
                ("B _||_ C", t.check_ci(&[1], &[2], &[])),
                ("(A,B) dependent on C", !t.check_ci(&[0, 1], &[2], &[])),
            ];
            (t, PropertyId::Composition, facts)
        }),
        _ => unreachable!("validated by clap"),
    };

    let (table, property, facts) = match built {
        Ok(x) => x,
        Err(e) => {
            eprintln!("{e}");
            return USAGE_ERROR;
        }
    };
    let check = check_property(&table, property);
    let violated = matches!(&check, PropertyCheck::Violated(_));
    let behaves = violated && facts.iter().all(|(_, ok)| *ok);

    if json {
        let facts_json =
            jarr(facts.iter().map(|(name, ok)| {
                format!("{{\"statement\":{},\"confirmed\":{}}}", jstr(name), ok)
            }));
        let cx = match &check {
            PropertyCheck::Violated(cx) => jstr(&cx.to_string()),
            PropertyCheck::Holds => "null".to_string(),
        };
        println!(
            "{{\"family\":{family},\"alpha\":{alpha},\"beta\":{},\"property\":{},\"counterexample\":{cx},\"facts\":{facts_json},\"behaves_as_documented\":{behaves}}}",
            beta.map(|b| b.to_string()).unwrap_or_else(|| "null".into()),
            jstr(property.name()),
        );
    } else {
        println!(
            "family {family}: alpha = {alpha}{}",
            beta.map(|b| format!(", beta = {b}")).unwrap_or_default()
        );
        print!("{}", table_grid(&table));
        for (name, ok) in &facts {
            println!("{}: {}", name, if *ok { "confirmed" } else { "FAILED" });
        }
        match &check {
            PropertyCheck::Violated(cx) => println!("{cx}"),
            PropertyCheck::Holds => println!("{} unexpectedly holds", property.name()),
        }
    }
    if behaves {
        0
    } else {
        DIFFERENCE_FOUND
    }
}

fn cmd_dot(m: &ArgMatches) -> u8 {
    let g = match load_graph(m.get_one::<String>("file").unwrap()) {
        Ok(g) => g,
        Err(code) => return code,
    };
    println!("digraph regression_graph {{");
    println!("  rankdir=RL;");
    for j in 0..g.component_count() {
        let kind = match g.component_kind(j) {
            ComponentKind::Response => "response",
            ComponentKind::Context => "context",
        };
        println!("  subgraph cluster_g{} {{", j + 1);
        println!("    label=\"g{} ({kind})\";", j + 1);
        for i in g.component_nodes(j) {
            println!("    \"{}\";", g.label(i));
        }
        println!("  }}");
    }
    for (a, b, kind) in g.edges() {
        match kind {
            EdgeKind::Arrow => {
                // a <- b: drawn from the regressor to the response
                println!("  \"{}\" -> \"{}\";", g.label(b), g.label(a));
            }
            EdgeKind::Dashed => println!(
                "  \"{}\" -> \"{}\" [dir=none, style=dashed];",
                g.label(a),
                g.label(b)
            ),
            EdgeKind::FullLine => {
                println!("  \"{}\" -> \"{}\" [dir=none];", g.label(a), g.label(b))
            }
        }
    }
    println!("}}");
    0
}
