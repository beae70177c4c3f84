use rand::seq::SliceRandom;
use rand::Rng;

use crate::generate::{regular_bipartite, rng};
use crate::instances::LabelCoverInstance;

use super::schedule::is_prime_power;
use super::ReductionError;

/// Bipartite `H = (U, V, E)` with `|U| = q` and every `v ∈ V` adjacent to
/// `D` distinct vertices of `U`.
#[derive(Debug, Clone, PartialEq)]
pub struct DisperserGraph {
    pub q: usize,
    pub d: usize,
    pub eps: f64,
    pub seed: u64,
    /// Sorted `U`-neighbors of every `v`.
    pub neighbors: Vec<Vec<usize>>,
}

impl DisperserGraph {
    pub fn v_count(&self) -> usize {
        self.neighbors.len()
    }

    /// Degree of every `u ∈ U`.
    pub fn u_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.q];
        for list in &self.neighbors {
            for &u in list {
                deg[u] += 1;
            }
        }
        deg
    }

    /// Number of `v` with two neighbors in the same part of `parts`
    /// (a part id per `u`).
    pub fn collisions(&self, parts: &[usize]) -> usize {
        self.neighbors
            .iter()
            .filter(|list| {
                list.iter().enumerate().any(|(i, &u)| list[i + 1..].iter().any(|&w| parts[u] == parts[w]))
            })
            .count()
    }
}

/// Seeded random disperser: `v_count` (default
/// `q²`) right vertices, each with `D` distinct neighbors, left degrees as
/// equal as possible.
pub fn build_disperser(
    q: usize,
    d: usize,
    eps: f64,
    seed: u64,
    v_count: Option<usize>,
) -> Result<DisperserGraph, ReductionError> {
    if !is_prime_power(d) {
        return Err(ReductionError::BadParameters(format!("D = {d} is not a prime power")));
    }
    let mut k = d;
    while k < q {
        k = k.saturating_mul(d);
    }
    if k != q {
        return Err(ReductionError::BadParameters(format!("q = {q} is not a power of D = {d}")));
    }
    let v = v_count.unwrap_or(q * q);
    let neighbors = regular_bipartite(q, v, d, &mut rng(seed))?;
    Ok(DisperserGraph { q, d, eps, seed, neighbors })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DisperserCheck {
    /// All partitions with parts of size at most `⌊ε q⌋` were checked;
    /// otherwise a random sample was (spot-checked).
    pub exhaustive: bool,
    pub partitions_checked: usize,
    pub part_cap: usize,
    /// Most right vertices with a collision under any checked partition.
    pub worst: usize,
    pub v_count: usize,
    /// `ε D²`.
    pub bound: f64,
    /// A partition attaining `worst` (part id per `u`).
    pub witness: Option<Vec<usize>>,
}

impl DisperserCheck {
    pub fn passed(&self) -> bool {
        self.v_count == 0 || self.worst as f64 <= self.bound * self.v_count as f64
    }
}

/// Largest `q` whose partitions are enumerated exhaustively.
pub const EXHAUSTIVE_DISPERSER_Q: usize = 6;

fn for_each_partition(q: usize, cap: usize, visit: &mut impl FnMut(&[usize])) {
    fn rec(i: usize, parts: &mut Vec<usize>, sizes: &mut Vec<usize>, cap: usize, visit: &mut impl FnMut(&[usize])) {
        if i == parts.len() {
            visit(parts);
            return;
        }
        for p in 0..=sizes.len() {
            if p == sizes.len() {
                sizes.push(0);
            }
            if sizes[p] < cap {
                sizes[p] += 1;
                parts[i] = p;
                rec(i + 1, parts, sizes, cap, visit);
                sizes[p] -= 1;
            }
            if sizes[p] == 0 {
                sizes.pop();
            }
        }
    }
    rec(0, &mut vec![0; q], &mut Vec::new(), cap, visit);
}

/// Checks the disperser property: for every partition of `U` into parts of
/// size at most `ε|U|`, at most an `εD²` fraction of `V` has two neighbors
/// in one part. Exhaustive for `q ≤ 6`, sampled otherwise.
pub fn verify_disperser(h: &DisperserGraph, samples: usize, seed: u64) -> DisperserCheck {
    let cap = (h.eps * h.q as f64).floor().max(0.0) as usize;
    let bound = h.eps * (h.d * h.d) as f64;
    let mut check = DisperserCheck {
        exhaustive: h.q <= EXHAUSTIVE_DISPERSER_Q,
        partitions_checked: 0,
        part_cap: cap,
        worst: 0,
        v_count: h.v_count(),
        bound,
        witness: None,
    };
    if cap == 0 {
        return check;
    }
    let record = |parts: &[usize], check: &mut DisperserCheck| {
        check.partitions_checked += 1;
        let c = h.collisions(parts);
        if check.witness.is_none() || c > check.worst {
            check.worst = c;
            check.witness = Some(parts.to_vec());
        }
    };
    if check.exhaustive {
        for_each_partition(h.q, cap, &mut |p| record(p, &mut check));
    } else {
        let mut r = rng(seed);
        let mut order: Vec<usize> = (0..h.q).collect();
        for _ in 0..samples {
            order.shuffle(&mut r);
            let mut parts = vec![0; h.q];
            let (mut start, mut id) = (0, 0);
            while start < h.q {
                let len = r.gen_range(1..=cap.min(h.q - start));
                for &u in &order[start..start + len] {
                    parts[u] = id;
                }
                start += len;
                id += 1;
            }
            record(&parts, &mut check);
        }
    }
    check
}

/// Rewires the B side through `h`: B-vertex `⟨b, v⟩` (id `b·|V| + v`) is
/// adjacent to the A-vertex behind the `u`-th edge into `b` for every
/// neighbor `u` of `v`, and inherits that edge's projection.
pub fn agreement_reduction(lc: &LabelCoverInstance, h: &DisperserGraph) -> Result<LabelCoverInstance, ReductionError> {
    let report = lc.validate();
    if !report.is_pass() {
        return Err(ReductionError::Invalid(report));
    }
    let (_, q) = lc.biregular_degrees().ok_or(ReductionError::NotBiregular)?;
    if q != h.q {
        return Err(ReductionError::DegreeMismatch { expected: h.q, actual: q });
    }
    let vn = h.v_count();
    let mut edges = Vec::with_capacity(lc.b_count() * vn * h.d);
    for b in 0..lc.b_count() {
        let into_b = lc.incoming(b);
        for (v, nbrs) in h.neighbors.iter().enumerate() {
            for &u in nbrs {
                let e = &lc.edges()[into_b[u]];
                edges.push((e.a, b * vn + v, e.projection.clone()));
            }
        }
    }
    LabelCoverInstance::new(lc.a_count(), lc.b_count() * vn, lc.sigma_a(), lc.sigma_b(), edges)
        .map_err(ReductionError::Invalid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{gen_lc_planted, LcShape};

    #[test]
    fn regular_and_deterministic() {
        let h = build_disperser(4, 2, 0.5, 9, None).unwrap();
        assert_eq!(h.v_count(), 16);
        assert!(h.neighbors.iter().all(|l| l.len() == 2 && l[0] != l[1]));
        assert_eq!(h.u_degrees(), vec![8; 4]);
        assert_eq!(h, build_disperser(4, 2, 0.5, 9, None).unwrap());
    }

    #[test]
    fn rejects_q_not_power_of_d() {
        assert!(build_disperser(6, 2, 0.5, 0, None).is_err());
        assert!(build_disperser(4, 6, 0.5, 0, None).is_err());
    }

    #[test]
    fn exhaustive_partition_count() {
        // set partitions of 4 points with blocks of size ≤ 2: 1 + 6 + 3 = 10
        let mut n = 0;
        for_each_partition(4, 2, &mut |_| n += 1);
        assert_eq!(n, 10);
        let mut all = 0;
        for_each_partition(5, 5, &mut |_| all += 1);
        assert_eq!(all, 52);
    }

    #[test]
    fn spot_check_small_disperser() {
        let h = build_disperser(4, 2, 0.5, 3, None).unwrap();
        let c = verify_disperser(&h, 0, 0);
        assert!(c.exhaustive);
        assert_eq!(c.partitions_checked, 10);
        assert_eq!(c.bound, 2.0);
        assert!(c.passed());
    }

    #[test]
    fn reduction_shape_and_completeness() {
        let shape = LcShape { a_count: 4, b_count: 2, sigma_a: 3, sigma_b: 2, b_degree: 4 };
        let (lc, l) = gen_lc_planted(1, shape).unwrap();
        let h = build_disperser(4, 2, 0.5, 5, Some(6)).unwrap();
        let out = agreement_reduction(&lc, &h).unwrap();
        assert_eq!(out.b_count(), 2 * 6);
        assert_eq!(out.sigma_a(), 3);
        assert_eq!(out.sigma_b(), 2);
        assert!((0..out.b_count()).all(|b| out.incoming(b).len() == 2));
        let lifted = crate::instances::Labeling {
            phi_a: l.phi_a.clone(),
            phi_b: (0..out.b_count()).map(|b| l.phi_b[b / 6]).collect(),
        };
        assert_eq!(lifted.covered_edges(&out), out.edges().len());
    }

    #[test]
    fn degree_mismatch() {
        let shape = LcShape { a_count: 2, b_count: 2, sigma_a: 2, sigma_b: 2, b_degree: 2 };
        let (lc, _) = gen_lc_planted(1, shape).unwrap();
        let h = build_disperser(4, 2, 0.5, 5, None).unwrap();
        assert_eq!(agreement_reduction(&lc, &h), Err(ReductionError::DegreeMismatch { expected: 4, actual: 2 }));
    }
}
