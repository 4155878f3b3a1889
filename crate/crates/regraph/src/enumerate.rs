// SPDX-License-Identifier: MIT
//! Exhaustive and random generation of small regression graphs, for
//! property testing and for grinding the two query engines against each
//! other.
//!
//! A graph is generated from an ordered partition of the nodes into
//! components, a response/context tagging (context components last), one
//! connected undirected-edge set per non-singleton component, and an
//! arbitrary set of arrows from later components into earlier response
//! nodes.

use crate::graph::{ComponentKind, EdgeKind, RegressionGraph};
use crate::rng::SplitMix64;

fn labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

/// All ordered partitions of `0..n` into nonempty blocks. Order matters:
/// the same blocks in a different order make a different component layout.
fn ordered_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(rest: &[usize], acc: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if rest.is_empty() {
            out.push(acc.clone());
            return;
        }
        // Any nonempty subset of `rest` can be the next block.
        for mask in 1..(1usize << rest.len()) {
            let mut block = Vec::new();
            let mut remaining = Vec::new();
            for (p, &x) in rest.iter().enumerate() {
                if mask >> p & 1 == 1 {
                    block.push(x);
                } else {
                    remaining.push(x);
                }
            }
            acc.push(block);
            go(&remaining, acc, out);
            acc.pop();
        }
    }
    let nodes: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    go(&nodes, &mut Vec::new(), &mut out);
    out
}

/// All edge subsets over `size` nodes whose undirected graph is connected,
/// each as a list of within-block index pairs.
fn connected_edge_sets(size: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..size)
        .flat_map(|i| (i + 1..size).map(move |k| (i, k)))
        .collect();
    let mut out = Vec::new();
    'subset: for mask in 0..(1usize << pairs.len()) {
        let chosen: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(p, _)| mask >> p & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        if size > 1 {
            let mut seen = vec![false; size];
            let mut stack = vec![0];
            seen[0] = true;
            while let Some(x) = stack.pop() {
                for &(i, k) in &chosen {
                    let other = if i == x {
                        k
                    } else if k == x {
                        i
                    } else {
                        continue;
                    };
                    if !seen[other] {
                        seen[other] = true;
                        stack.push(other);
                    }
                }
            }
            if seen.iter().any(|s| !s) {
                continue 'subset;
            }
        }
        out.push(chosen);
    }
    out
}

struct Shape {
    blocks: Vec<Vec<usize>>,
    kinds: Vec<ComponentKind>,
}

impl Shape {
    /// Arrow slots: `(head, tail)` with the head a response node in an
    /// earlier component than the tail.
    fn arrow_slots(&self) -> Vec<(usize, usize)> {
        let mut slots = Vec::new();
        for (j, block) in self.blocks.iter().enumerate() {
            if self.kinds[j] != ComponentKind::Response {
                continue;
            }
            for &head in block {
                for later in &self.blocks[j + 1..] {
                    for &tail in later {
                        slots.push((head, tail));
                    }
                }
            }
        }
        slots
    }

    fn build(
        &self,
        names: &[String],
        undirected: &[Vec<(usize, usize)>],
        arrows: &[(usize, usize)],
    ) -> RegressionGraph {
        let components: Vec<(ComponentKind, Vec<String>)> = self
            .blocks
            .iter()
            .zip(self.kinds.iter())
            .map(|(block, &kind)| (kind, block.iter().map(|&x| names[x].clone()).collect()))
            .collect();
        let mut edges: Vec<(String, String, EdgeKind)> = Vec::new();
        for (j, within) in undirected.iter().enumerate() {
            let kind = match self.kinds[j] {
                ComponentKind::Response => EdgeKind::Dashed,
                ComponentKind::Context => EdgeKind::FullLine,
            };
            for &(p, q) in within {
                let a = self.blocks[j][p];
                let b = self.blocks[j][q];
                edges.push((names[a].clone(), names[b].clone(), kind));
            }
        }
        for &(head, tail) in arrows {
            edges.push((names[head].clone(), names[tail].clone(), EdgeKind::Arrow));
        }
        RegressionGraph::build(&components, &edges).expect("generated graph is valid")
    }
}

/// Every regression graph on `n` labelled nodes: all ordered component
/// partitions, all context-suffix taggings, all connected undirected edge
/// sets per component, all arrow sets. Contains structural duplicates where
/// component orderings are interchangeable; that is harmless for testing.
pub fn all_graphs(n: usize) -> Vec<RegressionGraph> {
    assert!((1..=5).contains(&n), "exhaustive enumeration is for tiny n");
    let names = labels(n);
    let per_size: Vec<Vec<Vec<(usize, usize)>>> = (0..=n).map(connected_edge_sets).collect();
    let mut out = Vec::new();
    for blocks in ordered_partitions(n) {
        let j_count = blocks.len();
        // Context components occupy a suffix; `split` of them are response.
        for split in 0..=j_count {
            let kinds: Vec<ComponentKind> = (0..j_count)
                .map(|j| {
                    if j < split {
                        ComponentKind::Response
                    } else {
                        ComponentKind::Context
                    }
                })
                .collect();
            let shape = Shape {
                blocks: blocks.clone(),
                kinds,
            };
            let slots = shape.arrow_slots();
            let undirected_choices: Vec<&Vec<Vec<(usize, usize)>>> =
                blocks.iter().map(|b| &per_size[b.len()]).collect();
            // Cartesian product over per-component undirected edge sets.
            let mut idx = vec![0usize; j_count];
            loop {
                let undirected: Vec<Vec<(usize, usize)>> = idx
                    .iter()
                    .enumerate()
                    .map(|(j, &p)| undirected_choices[j][p].clone())
                    .collect();
                for arrow_mask in 0..(1usize << slots.len()) {
                    let arrows: Vec<(usize, usize)> = slots
                        .iter()
                        .enumerate()
                        .filter(|(p, _)| arrow_mask >> p & 1 == 1)
                        .map(|(_, &s)| s)
                        .collect();
                    out.push(shape.build(&names, &undirected, &arrows));
                }
                // advance the mixed-radix counter
                let mut j = 0;
                loop {
                    if j == j_count {
                        break;
                    }
                    idx[j] += 1;
                    if idx[j] < undirected_choices[j].len() {
                        break;
                    }
                    idx[j] = 0;
                    j += 1;
                }
                if j == j_count {
                    break;
                }
            }
        }
    }
    out
}

/// One random regression graph on `n` labelled nodes.
pub fn random_graph(n: usize, rng: &mut SplitMix64) -> RegressionGraph {
    assert!(n >= 1);
    let names = labels(n);
    // random ordered partition
    let mut order: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut order);
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut at = 0;
    while at < n {
        let take = 1 + rng.next_usize((n - at).min(3));
        blocks.push(order[at..at + take].to_vec());
        at += take;
    }
    let split = rng.next_usize(blocks.len() + 1);
    let kinds: Vec<ComponentKind> = (0..blocks.len())
        .map(|j| {
            if j < split {
                ComponentKind::Response
            } else {
                ComponentKind::Context
            }
        })
        .collect();
    let shape = Shape { blocks, kinds };

    // connected undirected set per component, by rejection
    let mut undirected = Vec::new();
    for block in &shape.blocks {
        let size = block.len();
        let pairs: Vec<(usize, usize)> = (0..size)
            .flat_map(|i| (i + 1..size).map(move |k| (i, k)))
            .collect();
        let chosen = loop {
            let candidate: Vec<(usize, usize)> = pairs
                .iter()
                .filter(|_| rng.next_f64() < 0.6)
                .copied()
                .collect();
            if size == 1 || connected(size, &candidate) {
                break candidate;
            }
        };
        undirected.push(chosen);
    }

    let density = rng.next_range(0.2, 0.8);
    let arrows: Vec<(usize, usize)> = shape
        .arrow_slots()
        .into_iter()
        .filter(|_| rng.next_f64() < density)
        .collect();
    shape.build(&names, &undirected, &arrows)
}

fn connected(size: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; size];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &(i, k) in edges {
            let other = if i == x {
                k
            } else if k == x {
                i
            } else {
                continue;
            };
            if !seen[other] {
                seen[other] = true;
                stack.push(other);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_are_sane() {
        assert_eq!(all_graphs(1).len(), 2); // one node, response or context
                                            // Both orders of {1}{2} with all taggings and arrow choices (2·5),
                                            // plus the joint pair {1,2} as response or context.
        assert_eq!(all_graphs(2).len(), 12);
        let three = all_graphs(3);
        assert!(three.len() > 100);
        assert!(three.iter().all(|g| g.node_count() == 3));
    }

    #[test]
    fn enumerated_graphs_are_valid_and_distinctly_shaped() {
        let graphs = all_graphs(3);
        for g in &graphs {
            // revalidate through the public builder path
            let text = crate::parse::serialize_graph(g);
            crate::parse::parse_graph(&text).expect("enumerated graph reparses");
        }
    }

    #[test]
    fn random_graphs_are_valid() {
        let mut rng = SplitMix64::new(99);
        for _ in 0..300 {
            let n = 1 + rng.next_usize(7);
            let g = random_graph(n, &mut rng);
            assert_eq!(g.node_count(), n);
            let text = crate::parse::serialize_graph(&g);
            crate::parse::parse_graph(&text).expect("random graph reparses");
        }
    }
}
