// SPDX-License-Identifier: MIT
//! Benchmarks of the hot operations: partial closure, the two query engines,
//! and the numeric oracle's covariance step.

use std::collections::BTreeSet;

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use regraph::bitmatrix::{zer, BinaryMatrix};
use regraph::enumerate::random_graph;
use regraph::gaussian::{joint_covariance, sample_system, DEFAULT_MAGNITUDE_RANGE};
use regraph::graph::NodeId;
use regraph::rng::SplitMix64;
use regraph::{induced, paths};

fn random_unit_diag(n: usize, rng: &mut SplitMix64) -> BinaryMatrix {
    let nodes: Vec<NodeId> = (0..n).map(NodeId).collect();
    let mut m = BinaryMatrix::identity(nodes);
    for r in 0..n {
        for c in 0..n {
            if r != c && rng.next_f64() < 0.15 {
                m.set(r, c, true);
            }
        }
    }
    m
}

fn bench_zer(c: &mut Criterion) {
    let mut rng = SplitMix64::new(1);
    let m64 = random_unit_diag(64, &mut rng);
    let a64: Vec<NodeId> = (0..64).filter(|_| rng.next_bool()).map(NodeId).collect();
    c.bench_function("zer_64x64_half", |b| {
        b.iter(|| black_box(zer(black_box(&m64), black_box(&a64))))
    });

    let m256 = random_unit_diag(256, &mut rng);
    let a256: Vec<NodeId> = (0..256).filter(|_| rng.next_bool()).map(NodeId).collect();
    c.bench_function("zer_256x256_half", |b| {
        b.iter(|| black_box(zer(black_box(&m256), black_box(&a256))))
    });
}

fn bench_queries(c: &mut Criterion) {
    let mut rng = SplitMix64::new(2);
    let g = random_graph(12, &mut rng);
    let alpha: BTreeSet<NodeId> = [NodeId(0)].into_iter().collect();
    let beta: BTreeSet<NodeId> = [NodeId(1)].into_iter().collect();
    let cond: BTreeSet<NodeId> = [NodeId(2), NodeId(3), NodeId(4)].into_iter().collect();

    c.bench_function("query_matrix_12_nodes", |b| {
        b.iter(|| {
            black_box(
                induced::implies(black_box(&g), &alpha, &beta, &cond)
                    .unwrap()
                    .verdict,
            )
        })
    });
    c.bench_function("query_paths_12_nodes", |b| {
        b.iter(|| {
            black_box(paths::implies_independence(black_box(&g), &alpha, &beta, &cond).unwrap())
        })
    });
}

fn bench_covariance(c: &mut Criterion) {
    let mut rng = SplitMix64::new(3);
    let g = random_graph(16, &mut rng);
    let sys = sample_system(&g, 7, DEFAULT_MAGNITUDE_RANGE);
    c.bench_function("joint_covariance_16_nodes", |b| {
        b.iter(|| black_box(joint_covariance(black_box(&sys)).unwrap()))
    });
}

criterion_group!(benches, bench_zer, bench_queries, bench_covariance);
criterion_main!(benches);
