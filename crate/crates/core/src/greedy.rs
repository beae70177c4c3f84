//! Density-rule greedy algorithms for weighted Set Cover and Submodular
//! Cover, plus the `1 + ln d` ratio certificate.

use std::cmp::Ordering;

use fixedbitset::FixedBitSet;
use num_rational::Ratio;
use thiserror::Error;

use crate::instances::{CoverSolution, SetCoverInstance};
use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GreedyError {
    #[error("element {0} is in no set")]
    UncoverableInstance(usize),
    #[error("f(S) = {current} < f(U) = {target} but no element has positive marginal gain")]
    StalledOracle { current: Rational, target: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyStep {
    pub set: usize,
    /// Cost per newly covered element at the time of the pick.
    pub density: Rational,
    pub newly_covered: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyTrace {
    pub steps: Vec<GreedyStep>,
    pub cost: Rational,
    /// `1 + ln d_max`, rounded up.
    pub ratio_bound: Rational,
}

/// Decimal digits kept when rounding `1 + ln d` up to a rational.
pub const BOUND_DIGITS: u32 = 12;

/// `1 + ln d_max`, rounded up at [`BOUND_DIGITS`] decimal places.
pub fn chvatal_bound(d_max: u64) -> Rational {
    let d_max = d_max.max(1);
    let den = 10i64.pow(BOUND_DIGITS);
    let value = 1.0 + (d_max as f64).ln();
    Ratio::new((value * den as f64).ceil() as i64, den)
}

/// `cost_a / count_a < cost_b / count_b`, by cross-multiplication.
pub(crate) fn density_cmp(cost_a: i64, count_a: usize, cost_b: i64, count_b: usize) -> Ordering {
    (cost_a as i128 * count_b as i128).cmp(&(cost_b as i128 * count_a as i128))
}

/// Weighted greedy: zero-cost sets first (in index order, when they cover
/// something new), then repeatedly the set minimizing cost per newly covered
/// element, ties to the lowest index.
pub fn greedy_set_cover(sc: &SetCoverInstance) -> Result<(CoverSolution, GreedyTrace), GreedyError> {
    let n = sc.universe_size();
    let mut coverable = FixedBitSet::with_capacity(n);
    let members: Vec<FixedBitSet> = sc
        .sets()
        .iter()
        .map(|s| {
            let mut bits = FixedBitSet::with_capacity(n);
            s.members.iter().for_each(|&e| bits.insert(e));
            coverable.union_with(&bits);
            bits
        })
        .collect();
    if let Some(e) = (0..n).find(|&e| !coverable.contains(e)) {
        return Err(GreedyError::UncoverableInstance(e));
    }

    let mut covered = FixedBitSet::with_capacity(n);
    let mut steps = Vec::new();
    let mut chosen = Vec::new();
    let mut total = 0i64;
    let mut take = |i: usize, covered: &mut FixedBitSet, steps: &mut Vec<GreedyStep>| {
        let newly: Vec<usize> = members[i].difference(covered).collect();
        let cost = sc.sets()[i].cost;
        steps.push(GreedyStep {
            set: i,
            density: Ratio::new(cost, sc.cost_scale() * newly.len() as i64),
            newly_covered: newly,
        });
        covered.union_with(&members[i]);
        chosen.push(i);
        total += cost;
    };

    for (i, set) in sc.sets().iter().enumerate() {
        if set.cost == 0 && members[i].difference(&covered).next().is_some() {
            take(i, &mut covered, &mut steps);
        }
    }
    while covered.count_ones(..) < n {
        let mut best: Option<(usize, usize)> = None;
        for (i, bits) in members.iter().enumerate() {
            let fresh = bits.difference(&covered).count();
            if fresh == 0 {
                continue;
            }
            let better = match best {
                None => true,
                Some((j, fj)) => {
                    density_cmp(sc.sets()[i].cost, fresh, sc.sets()[j].cost, fj) == Ordering::Less
                }
            };
            if better {
                best = Some((i, fresh));
            }
        }
        let (i, _) = best.expect("coverability was checked");
        take(i, &mut covered, &mut steps);
    }

    let trace = GreedyTrace {
        steps,
        cost: sc.cost_value(total),
        ratio_bound: chvatal_bound(sc.max_set_size() as u64),
    };
    Ok((CoverSolution { sets: chosen, cost: total }, trace))
}

/// A non-decreasing submodular set function over `0..ground_size()`.
///
/// Monotonicity and submodularity are the caller's promise; see
/// [`check_submodular`] for an exhaustive audit on small ground sets.
pub trait SubmodularFunction {
    fn ground_size(&self) -> usize;
    /// `f(S)` for a sorted, duplicate-free subset.
    fn value(&self, subset: &[usize]) -> Rational;
}

/// Adapter turning a closure into a [`SubmodularFunction`].
pub struct FnSubmodular<F> {
    ground_size: usize,
    f: F,
}

impl<F: Fn(&[usize]) -> Rational> FnSubmodular<F> {
    pub fn new(ground_size: usize, f: F) -> Self {
        FnSubmodular { ground_size, f }
    }
}

impl<F: Fn(&[usize]) -> Rational> SubmodularFunction for FnSubmodular<F> {
    fn ground_size(&self) -> usize {
        self.ground_size
    }
    fn value(&self, subset: &[usize]) -> Rational {
        (self.f)(subset)
    }
}

/// Coverage function `f(S) = |∪_{i∈S} set_i|` of a set-cover instance.
pub struct Coverage<'a> {
    pub sc: &'a SetCoverInstance,
}

impl SubmodularFunction for Coverage<'_> {
    fn ground_size(&self) -> usize {
        self.sc.set_count()
    }
    fn value(&self, subset: &[usize]) -> Rational {
        let mut bits = FixedBitSet::with_capacity(self.sc.universe_size());
        for &i in subset {
            self.sc.sets()[i].members.iter().for_each(|&e| bits.insert(e));
        }
        Ratio::from_integer(bits.count_ones(..) as i64)
    }
}

/// Function plus per-element costs.
pub struct SubmodularOracle<F> {
    pub function: F,
    pub costs: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubmodularStep {
    pub element: usize,
    pub gain: Rational,
    pub density: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubmodularCover {
    /// Chosen elements in selection order.
    pub chosen: Vec<usize>,
    pub steps: Vec<SubmodularStep>,
    pub cost: Rational,
}

/// Greedy for Submodular Cover: repeatedly add the element minimizing
/// `c(x) / (f(S+x) - f(S))` among elements with positive gain (ties to the
/// lowest id) until `f(S) = f(U)`.
pub fn greedy_submodular_cover<F: SubmodularFunction>(
    oracle: &SubmodularOracle<F>,
) -> Result<SubmodularCover, GreedyError> {
    let f = &oracle.function;
    let n = f.ground_size();
    let everything: Vec<usize> = (0..n).collect();
    let target = f.value(&everything);
    let mut chosen: Vec<usize> = Vec::new();
    let mut in_set = vec![false; n];
    let mut current = f.value(&[]);
    let mut steps = Vec::new();
    let mut cost = Rational::from_integer(0);
    while current < target {
        let mut best: Option<(usize, Rational, Rational)> = None;
        let mut sorted = chosen.clone();
        sorted.sort_unstable();
        for x in (0..n).filter(|&x| !in_set[x]) {
            let pos = sorted.binary_search(&x).unwrap_err();
            sorted.insert(pos, x);
            let gain = f.value(&sorted) - current;
            sorted.remove(pos);
            if gain <= Rational::from_integer(0) {
                continue;
            }
            let density = oracle.costs[x] / gain;
            if best.as_ref().is_none_or(|(_, _, d)| density < *d) {
                best = Some((x, gain, density));
            }
        }
        let Some((x, gain, density)) = best else {
            return Err(GreedyError::StalledOracle { current, target });
        };
        in_set[x] = true;
        chosen.push(x);
        current += gain;
        cost += oracle.costs[x];
        steps.push(SubmodularStep { element: x, gain, density });
    }
    Ok(SubmodularCover { chosen, steps, cost })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubmodularViolation {
    /// `f(S) > f(S + x)`.
    NotMonotone { subset: Vec<usize>, element: usize },
    /// `f(S+x) - f(S) < f(T+x) - f(T)` for `S ⊆ T`, `x ∉ T`.
    NotSubmodular { smaller: Vec<usize>, larger: Vec<usize>, element: usize },
}

/// Exhaustive audit of monotonicity and diminishing returns over every
/// pair `S ⊆ T` and `x ∉ T`. Exponential: meant for ground sets of size ≤ 10.
pub fn check_submodular<F: SubmodularFunction>(f: &F) -> Result<(), SubmodularViolation> {
    let n = f.ground_size();
    assert!(n <= 16, "exhaustive submodularity audit is limited to 16 elements");
    let full = 1u32 << n;
    let decode = |mask: u32| -> Vec<usize> { (0..n).filter(|&i| mask >> i & 1 == 1).collect() };
    let values: Vec<Rational> = (0..full).map(|m| f.value(&decode(m))).collect();
    for t in 0..full {
        for x in (0..n).filter(|&x| t >> x & 1 == 0) {
            let gain_t = values[(t | 1 << x) as usize] - values[t as usize];
            if gain_t < Rational::from_integer(0) {
                return Err(SubmodularViolation::NotMonotone { subset: decode(t), element: x });
            }
            // every S ⊆ T
            let mut s = t;
            loop {
                let gain_s = values[(s | 1 << x) as usize] - values[s as usize];
                if gain_s < gain_t {
                    return Err(SubmodularViolation::NotSubmodular {
                        smaller: decode(s),
                        larger: decode(t),
                        element: x,
                    });
                }
                if s == 0 {
                    break;
                }
                s = (s - 1) & t;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> SetCoverInstance {
        SetCoverInstance::with_rational_costs(
            4,
            vec![
                (Rational::from_integer(1), vec![0, 1]),
                (Rational::from_integer(1), vec![2, 3]),
                (Rational::new(5, 2), vec![0, 1, 2, 3]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn abc_picks_a_then_b() {
        let (sol, trace) = greedy_set_cover(&abc()).unwrap();
        assert_eq!(sol.sets, vec![0, 1]);
        assert_eq!(trace.cost, Rational::from_integer(2));
        assert_eq!(trace.steps[0].density, Rational::new(1, 2));
        assert_eq!(trace.steps[1].newly_covered, vec![2, 3]);
        sol.verify(&abc()).unwrap();
    }

    #[test]
    fn single_set_is_taken() {
        let sc = SetCoverInstance::with_integer_costs(3, vec![(7, vec![0, 1, 2])]).unwrap();
        let (sol, trace) = greedy_set_cover(&sc).unwrap();
        assert_eq!(sol.sets, vec![0]);
        assert_eq!(trace.cost, Rational::from_integer(7));
    }

    #[test]
    fn zero_cost_sets_go_first() {
        let sc = SetCoverInstance::with_integer_costs(
            3,
            vec![(1, vec![0, 1, 2]), (0, vec![2]), (0, vec![2])],
        )
        .unwrap();
        let (sol, trace) = greedy_set_cover(&sc).unwrap();
        assert_eq!(sol.sets, vec![1, 0]);
        assert_eq!(trace.steps[0].density, Rational::from_integer(0));
        assert_eq!(trace.steps[1].newly_covered, vec![0, 1]);
    }

    #[test]
    fn uncoverable_is_an_error() {
        let sc = SetCoverInstance::from_parts_unchecked(
            2,
            vec![crate::instances::WeightedSet { cost: 1, members: vec![0] }],
            1,
        );
        assert_eq!(greedy_set_cover(&sc).unwrap_err(), GreedyError::UncoverableInstance(1));
    }

    #[test]
    fn bound_values() {
        assert_eq!(chvatal_bound(1), Rational::from_integer(1));
        let four = chvatal_bound(4);
        assert!((crate::rational::to_f64(&four) - 2.386294361120).abs() < 1e-11);
        assert!(four >= Ratio::new(2_386_294_361_119, 1_000_000_000_000));
        // e^2 ≈ 7.389 → nearest integer 7; 1 + ln 7 ≈ 2.9459
        let e2 = chvatal_bound(7);
        assert!((crate::rational::to_f64(&e2) - 3.0).abs() < 0.06);
    }

    #[test]
    fn capped_cardinality_takes_two() {
        // f(S) = min(|S|, 2) over three unit-cost elements
        let f = FnSubmodular::new(3, |s: &[usize]| Rational::from_integer(s.len().min(2) as i64));
        check_submodular(&f).unwrap();
        let oracle = SubmodularOracle { function: f, costs: vec![Rational::from_integer(1); 3] };
        let cover = greedy_submodular_cover(&oracle).unwrap();
        assert_eq!(cover.chosen, vec![0, 1]);
        assert_eq!(cover.cost, Rational::from_integer(2));
    }

    #[test]
    fn modular_picks_by_cost_per_gain() {
        let weights = [3i64, 1, 2];
        let costs = vec![Rational::from_integer(3), Rational::from_integer(2), Rational::from_integer(1)];
        let f = FnSubmodular::new(3, move |s: &[usize]| {
            Rational::from_integer(s.iter().map(|&i| weights[i]).sum())
        });
        let oracle = SubmodularOracle { function: f, costs };
        let cover = greedy_submodular_cover(&oracle).unwrap();
        // densities: 3/3 = 1, 2/1 = 2, 1/2 = 0.5
        assert_eq!(cover.chosen, vec![2, 0, 1]);
    }

    #[test]
    fn stalled_oracle_detected() {
        // f(U) = 2 but every single addition to ∅ gains nothing
        let f = FnSubmodular::new(2, |s: &[usize]| Rational::from_integer((s.len() == 2) as i64 * 2));
        assert!(check_submodular(&f).is_err());
        let oracle = SubmodularOracle { function: f, costs: vec![Rational::from_integer(1); 2] };
        assert!(matches!(greedy_submodular_cover(&oracle), Err(GreedyError::StalledOracle { .. })));
    }

    #[test]
    fn coverage_matches_set_cover() {
        let sc = abc();
        let costs = sc.sets().iter().map(|s| sc.cost_value(s.cost)).collect();
        let cover = greedy_submodular_cover(&SubmodularOracle { function: Coverage { sc: &sc }, costs })
            .unwrap();
        let (sol, _) = greedy_set_cover(&sc).unwrap();
        assert_eq!(cover.chosen, sol.sets);
    }
}
