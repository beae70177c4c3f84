//! Shared fixtures for the benchmarks.

use dstcover::generate::{gen_dst, gen_lc_planted, gen_sc, LcShape};
use dstcover::instances::{DstInstance, LabelCoverInstance, Labeling, SetCoverInstance};
use dstcover::reductions::PipelineConfig;

pub const SEED: u64 = 0x5eed;

pub fn set_cover(universe: usize, sets: usize) -> SetCoverInstance {
    gen_sc(SEED, universe, sets, 9).expect("valid shape")
}

/// Rooted digraph on `n` vertices with `2n` extra arcs.
pub fn steiner(n: usize, terminals: usize) -> DstInstance {
    gen_dst(SEED, n, 2 * n, terminals, 9).expect("valid shape")
}

/// Planted game with `|A| = 4`, `|B| = 2`, B-degree 4.
pub fn planted_game() -> (LabelCoverInstance, Labeling) {
    let shape = LcShape { a_count: 4, b_count: 2, sigma_a: 2, sigma_b: 2, b_degree: 4 };
    gen_lc_planted(SEED, shape).expect("valid shape")
}

pub fn pipeline_config(u: u64) -> PipelineConfig {
    PipelineConfig { u_override: Some(u), v_count: Some(2), ..PipelineConfig::default() }
}
