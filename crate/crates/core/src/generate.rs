//! Seeded random instance generators. Every generator is a pure function of
//! its parameters and seed.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::instances::{Arc, DstInstance, LabelCoverInstance, Labeling, SetCoverInstance, WeightedSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenerateError {
    #[error("bad parameters: {0}")]
    BadParameters(String),
}

fn bad(msg: impl Into<String>) -> GenerateError {
    GenerateError::BadParameters(msg.into())
}

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Neighbor lists for `right` vertices, each with `degree` distinct
/// neighbors among `left`, with left degrees differing by at most one.
///
/// Every right vertex takes the `degree` least-loaded left vertices, ties
/// broken by a fresh shuffle.
pub(crate) fn regular_bipartite(
    left: usize,
    right: usize,
    degree: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Vec<usize>>, GenerateError> {
    if degree > left {
        return Err(bad(format!("degree {degree} exceeds the {left} available neighbors")));
    }
    let mut load = vec![0usize; left];
    let mut order: Vec<usize> = (0..left).collect();
    Ok((0..right)
        .map(|_| {
            order.shuffle(rng);
            order.sort_by_key(|&v| load[v]);
            let mut pick = order[..degree].to_vec();
            pick.iter().for_each(|&v| load[v] += 1);
            pick.sort_unstable();
            pick
        })
        .collect())
}

/// Coverable random set system: `sets` sets over `universe` elements, each
/// element placed in a set with probability `1/2`, stragglers added to a
/// random set; integer costs in `1..=max_cost`.
pub fn gen_sc(seed: u64, universe: usize, sets: usize, max_cost: i64) -> Result<SetCoverInstance, GenerateError> {
    if sets == 0 && universe > 0 {
        return Err(bad("a non-empty universe needs at least one set"));
    }
    if max_cost < 1 {
        return Err(bad("max_cost must be at least 1"));
    }
    let mut rng = rng(seed);
    let mut members = vec![Vec::new(); sets];
    for e in 0..universe {
        let mut placed = false;
        for m in members.iter_mut() {
            if rng.gen_bool(0.5) {
                m.push(e);
                placed = true;
            }
        }
        if !placed {
            members[rng.gen_range(0..sets)].push(e);
        }
    }
    let sets = members
        .into_iter()
        .map(|members| WeightedSet { cost: rng.gen_range(1..=max_cost), members })
        .collect();
    SetCoverInstance::new(universe, sets, 1).map_err(|r| bad(r.to_string()))
}

/// Random digraph on `n` vertices rooted at `0`: a random spanning
/// arborescence guarantees reachability, then `extra_arcs` further random
/// arcs; `terminals` distinct non-root terminals; costs in `1..=max_cost`.
pub fn gen_dst(
    seed: u64,
    n: usize,
    extra_arcs: usize,
    terminals: usize,
    max_cost: i64,
) -> Result<DstInstance, GenerateError> {
    if n < 2 || terminals == 0 || terminals >= n {
        return Err(bad("need n ≥ 2 and 1 ≤ terminals < n"));
    }
    if max_cost < 1 {
        return Err(bad("max_cost must be at least 1"));
    }
    let mut rng = rng(seed);
    let mut order: Vec<usize> = (1..n).collect();
    order.shuffle(&mut rng);
    let mut arcs = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        let k = rng.gen_range(0..=i);
        let parent = if k == 0 { 0 } else { order[k - 1] };
        arcs.push(Arc::new(parent, v, rng.gen_range(1..=max_cost)));
    }
    let possible = n * (n - 1);
    let target = (arcs.len() + extra_arcs).min(possible);
    while arcs.len() < target {
        let (t, h) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if t != h && !arcs.iter().any(|a| a.tail == t && a.head == h) {
            arcs.push(Arc::new(t, h, rng.gen_range(1..=max_cost)));
        }
    }
    let mut terms = order.clone();
    terms.shuffle(&mut rng);
    terms.truncate(terminals);
    DstInstance::new(n, arcs, 0, terms, 1).map_err(|r| bad(r.to_string()))
}

/// Shape of a random bi-regular projection game.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LcShape {
    pub a_count: usize,
    pub b_count: usize,
    pub sigma_a: usize,
    pub sigma_b: usize,
    pub b_degree: usize,
}

impl LcShape {
    fn check(&self) -> Result<(), GenerateError> {
        if self.a_count == 0 || self.b_count == 0 || self.sigma_a == 0 || self.sigma_b == 0 {
            return Err(bad("every count and alphabet must be positive"));
        }
        if self.b_degree == 0 || self.b_degree > self.a_count {
            return Err(bad("B-degree must lie in 1..=|A|"));
        }
        if (self.b_count * self.b_degree) % self.a_count != 0 {
            return Err(bad("|B|·B-degree must be divisible by |A| for bi-regularity"));
        }
        Ok(())
    }
}

fn lc_edges(shape: &LcShape, rng: &mut ChaCha8Rng) -> Result<Vec<(usize, usize)>, GenerateError> {
    let nbrs = regular_bipartite(shape.a_count, shape.b_count, shape.b_degree, rng)?;
    Ok(nbrs.iter().enumerate().flat_map(|(b, list)| list.iter().map(move |&a| (a, b))).collect())
}

/// Bi-regular random game with uniformly random projections.
pub fn gen_lc(seed: u64, shape: LcShape) -> Result<LabelCoverInstance, GenerateError> {
    shape.check()?;
    let mut rng = rng(seed);
    let edges = lc_edges(&shape, &mut rng)?
        .into_iter()
        .map(|(a, b)| (a, b, (0..shape.sigma_a).map(|_| rng.gen_range(0..shape.sigma_b)).collect()))
        .collect();
    LabelCoverInstance::new(shape.a_count, shape.b_count, shape.sigma_a, shape.sigma_b, edges)
        .map_err(|r| bad(r.to_string()))
}

/// Bi-regular random game with a planted labeling that covers every edge:
/// each projection sends the planted A-label to the planted B-label and
/// every other symbol anywhere.
pub fn gen_lc_planted(seed: u64, shape: LcShape) -> Result<(LabelCoverInstance, Labeling), GenerateError> {
    shape.check()?;
    let mut rng = rng(seed);
    let phi_a: Vec<usize> = (0..shape.a_count).map(|_| rng.gen_range(0..shape.sigma_a)).collect();
    let phi_b: Vec<usize> = (0..shape.b_count).map(|_| rng.gen_range(0..shape.sigma_b)).collect();
    let edges = lc_edges(&shape, &mut rng)?
        .into_iter()
        .map(|(a, b)| {
            let proj = (0..shape.sigma_a)
                .map(|s| if s == phi_a[a] { phi_b[b] } else { rng.gen_range(0..shape.sigma_b) })
                .collect();
            (a, b, proj)
        })
        .collect();
    let lc = LabelCoverInstance::new(shape.a_count, shape.b_count, shape.sigma_a, shape.sigma_b, edges)
        .map_err(|r| bad(r.to_string()))?;
    Ok((lc, Labeling { phi_a, phi_b }))
}
