// SPDX-License-Identifier: MIT
//! Benchmark-only crate; see `benches/`.
