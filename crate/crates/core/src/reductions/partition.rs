use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::generate::rng;

use super::ReductionError;

/// Universe `[0, u)` with `m` partitions into `D` parts each. Partition `i`
/// is stored as the part id of every point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionSystem {
    pub u: usize,
    pub d: usize,
    pub seed: u64,
    pub partitions: Vec<Vec<usize>>,
}

impl PartitionSystem {
    pub fn m(&self) -> usize {
        self.partitions.len()
    }

    /// Sorted points of part `j` of partition `i`.
    pub fn part(&self, i: usize, j: usize) -> Vec<usize> {
        (0..self.u).filter(|&x| self.partitions[i][x] == j).collect()
    }

    /// Every partition assigns every point to one of `D` parts.
    pub fn is_well_formed(&self) -> bool {
        self.d >= 1 && self.partitions.iter().all(|p| p.len() == self.u && p.iter().all(|&j| j < self.d))
    }
}

/// `m` independent random partitions of `[0, u)` into `D` parts whose sizes
/// differ by at most one.
pub fn build_partition_system(u: usize, m: usize, d: usize, seed: u64) -> Result<PartitionSystem, ReductionError> {
    if d < 2 || u < d || m == 0 {
        return Err(ReductionError::BadParameters("need u ≥ D ≥ 2 and m ≥ 1".into()));
    }
    let mut r = rng(seed);
    let partitions = (0..m)
        .map(|_| {
            let mut order: Vec<usize> = (0..u).collect();
            order.shuffle(&mut r);
            let mut parts = vec![0; u];
            for (k, &x) in order.iter().enumerate() {
                parts[x] = k % d;
            }
            parts
        })
        .collect();
    Ok(PartitionSystem { u, d, seed, partitions })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionCheck {
    pub ell: usize,
    pub examined: u128,
    /// `(partition, part)` pairs from distinct partitions covering the
    /// universe, when such a cover of at most `ℓ` parts exists.
    pub witness: Option<Vec<(usize, usize)>>,
}

impl PartitionCheck {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

fn search_space(m: usize, d: usize, ell: usize) -> u128 {
    let mut total = 0u128;
    let mut choose = 1u128;
    let mut dpow = 1u128;
    for j in 0..=ell.min(m) {
        total = total.saturating_add(choose.saturating_mul(dpow));
        choose = choose.saturating_mul((m - j) as u128) / (j as u128 + 1);
        dpow = dpow.saturating_mul(d as u128);
    }
    total
}

/// Looks for a cover of the universe by at most `ℓ` parts taken from
/// pairwise distinct partitions; the system passes when none exists.
pub fn verify_partition_system(ps: &PartitionSystem, ell: usize, budget: u128) -> Result<PartitionCheck, ReductionError> {
    if !ps.is_well_formed() {
        return Err(ReductionError::BadParameters("malformed partition system".into()));
    }
    let space = search_space(ps.m(), ps.d, ell);
    if space > budget {
        return Err(ReductionError::BudgetExceeded { what: "partition cover search", actual: space, budget });
    }
    let parts: Vec<Vec<FixedBitSet>> = (0..ps.m())
        .map(|i| {
            (0..ps.d)
                .map(|j| {
                    let mut s = FixedBitSet::with_capacity(ps.u);
                    ps.part(i, j).into_iter().for_each(|x| s.insert(x));
                    s
                })
                .collect()
        })
        .collect();
    struct Search<'a> {
        parts: &'a [Vec<FixedBitSet>],
        u: usize,
        limit: usize,
        examined: u128,
        chosen: Vec<(usize, usize)>,
    }
    impl Search<'_> {
        fn run(&mut self, i: usize, covered: &FixedBitSet) -> bool {
            self.examined += 1;
            if covered.count_ones(..) == self.u {
                return true;
            }
            if i == self.parts.len() || self.chosen.len() == self.limit {
                return false;
            }
            for (j, part) in self.parts[i].iter().enumerate() {
                let mut next = covered.clone();
                next.union_with(part);
                self.chosen.push((i, j));
                if self.run(i + 1, &next) {
                    return true;
                }
                self.chosen.pop();
            }
            self.run(i + 1, covered)
        }
    }
    let mut s = Search { parts: &parts, u: ps.u, limit: ell.min(ps.m()), examined: 0, chosen: Vec::new() };
    let found = s.run(0, &FixedBitSet::with_capacity(ps.u));
    Ok(PartitionCheck { ell, examined: s.examined, witness: found.then_some(s.chosen) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_split() {
        let ps = build_partition_system(4, 3, 2, 1).unwrap();
        for i in 0..3 {
            assert_eq!(ps.part(i, 0).len(), 2);
            assert_eq!(ps.part(i, 1).len(), 2);
        }
        assert!(ps.is_well_formed());
        assert_eq!(ps, build_partition_system(4, 3, 2, 1).unwrap());
    }

    #[test]
    fn single_partition_never_covers_with_one_part() {
        let ps = build_partition_system(8, 1, 2, 4).unwrap();
        for ell in 1..5 {
            assert!(verify_partition_system(&ps, ell, 1 << 20).unwrap().passed());
        }
    }

    #[test]
    fn whole_universe_part_is_caught() {
        let ps = PartitionSystem { u: 4, d: 2, seed: 0, partitions: vec![vec![0, 1, 0, 1], vec![1, 1, 1, 1]] };
        let c = verify_partition_system(&ps, 1, 1000).unwrap();
        assert_eq!(c.witness, Some(vec![(1, 1)]));
    }

    #[test]
    fn complementary_halves_are_caught() {
        // part 0 of partition 0 and part 1 of partition 1 cover {0..4}
        let ps = PartitionSystem { u: 4, d: 2, seed: 0, partitions: vec![vec![0, 0, 1, 1], vec![0, 0, 1, 1]] };
        let c = verify_partition_system(&ps, 2, 1000).unwrap();
        let w = c.witness.unwrap();
        let mut covered: Vec<usize> = w.iter().flat_map(|&(i, j)| ps.part(i, j)).collect();
        covered.sort_unstable();
        covered.dedup();
        assert_eq!(covered, vec![0, 1, 2, 3]);
        assert!(verify_partition_system(&ps, 1, 1000).unwrap().passed());
    }

    #[test]
    fn budget_enforced() {
        let ps = build_partition_system(16, 4, 2, 0).unwrap();
        assert_eq!(search_space(4, 2, 3), 1 + 8 + 24 + 32);
        assert!(verify_partition_system(&ps, 3, 10).is_err());
    }
}
