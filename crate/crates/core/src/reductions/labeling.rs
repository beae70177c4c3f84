use std::cmp::Reverse;

use rand::Rng;
use rayon::prelude::*;

use crate::generate::rng;
use crate::instances::{LabelCoverInstance, Labeling, ListLabeling};
use crate::rational::Rational;

use super::ReductionError;

/// Default cap on the number of assignments an exhaustive search visits.
pub const DEFAULT_ASSIGNMENT_BUDGET: u128 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelingMethod {
    /// Every labeling of both sides.
    Exhaustive,
    /// Every A-side labeling, each B-vertex taking its most popular projection.
    ASideMajority,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BestLabeling {
    pub labeling: Labeling,
    pub covered: usize,
    pub edges: usize,
    pub method: LabelingMethod,
}

impl BestLabeling {
    /// Covered fraction; `1` for an edgeless instance.
    pub fn fraction(&self) -> Rational {
        if self.edges == 0 {
            Rational::from_integer(1)
        } else {
            Rational::new(self.covered as i64, self.edges as i64)
        }
    }
}

fn power(base: usize, exp: usize) -> u128 {
    (0..exp).fold(1u128, |acc, _| acc.saturating_mul(base as u128))
}

fn decode(mut idx: u128, radix: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut() {
        *slot = (idx % radix as u128) as usize;
        idx /= radix as u128;
    }
    out
}

fn majority_b(lc: &LabelCoverInstance, phi_a: &[usize]) -> (Vec<usize>, usize) {
    let mut covered = 0;
    let mut phi_b = vec![0; lc.b_count()];
    let mut votes = vec![0usize; lc.sigma_b()];
    for (b, label) in phi_b.iter_mut().enumerate() {
        votes.iter_mut().for_each(|v| *v = 0);
        for &e in lc.incoming(b) {
            let edge = &lc.edges()[e];
            votes[edge.projection[phi_a[edge.a]]] += 1;
        }
        let (best, count) = votes
            .iter()
            .enumerate()
            .max_by_key(|&(s, &c)| (c, Reverse(s)))
            .map_or((0, 0), |(s, &c)| (s, c));
        *label = best;
        covered += count;
    }
    (phi_b, covered)
}

/// A labeling covering as many edges as possible, found exhaustively over
/// both sides when that fits the budget, and otherwise over the A side with
/// each B-vertex given its majority projection (also exact). Ties go to the
/// first labeling in enumeration order.
pub fn best_labeling(lc: &LabelCoverInstance, budget: u128) -> Result<BestLabeling, ReductionError> {
    let (na, nb, sa, sb) = (lc.a_count(), lc.b_count(), lc.sigma_a(), lc.sigma_b());
    let a_side = power(sa, na);
    let full = a_side.saturating_mul(power(sb, nb));
    let edges = lc.edges().len();
    if full <= budget {
        let (covered, Reverse(idx)) = (0..full)
            .into_par_iter()
            .map(|i| {
                let phi_a = decode(i % a_side, sa, na);
                let phi_b = decode(i / a_side, sb, nb);
                (Labeling { phi_a, phi_b }.covered_edges(lc), Reverse(i))
            })
            .max()
            .expect("at least one labeling");
        let labeling = Labeling { phi_a: decode(idx % a_side, sa, na), phi_b: decode(idx / a_side, sb, nb) };
        return Ok(BestLabeling { labeling, covered, edges, method: LabelingMethod::Exhaustive });
    }
    if a_side > budget {
        return Err(ReductionError::BudgetExceeded { what: "A-side labelings", actual: a_side, budget });
    }
    let (covered, Reverse(idx)) = (0..a_side)
        .into_par_iter()
        .map(|i| (majority_b(lc, &decode(i, sa, na)).1, Reverse(i)))
        .max()
        .expect("at least one labeling");
    let phi_a = decode(idx, sa, na);
    let (phi_b, _) = majority_b(lc, &phi_a);
    Ok(BestLabeling { labeling: Labeling { phi_a, phi_b }, covered, edges, method: LabelingMethod::ASideMajority })
}

/// Number of B-vertices on which the A-side lists do not totally disagree:
/// some two distinct neighbors hold labels with the same projection.
pub fn non_disagreeing(lc: &LabelCoverInstance, lists: &[Vec<usize>]) -> usize {
    // owner[σ] = (b, a) of the first neighbor of b projecting onto σ
    let mut owner: Vec<Option<(usize, usize)>> = vec![None; lc.sigma_b()];
    let mut count = 0;
    for b in 0..lc.b_count() {
        let agree = lc.incoming(b).iter().any(|&e| {
            let edge = &lc.edges()[e];
            lists[edge.a].iter().any(|&s| {
                let p = edge.projection[s];
                match owner[p] {
                    Some((ob, oa)) if ob == b && oa != edge.a => true,
                    Some((ob, _)) if ob == b => false,
                    _ => {
                        owner[p] = Some((b, edge.a));
                        false
                    }
                }
            })
        });
        count += usize::from(agree);
    }
    count
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SoundnessMode {
    /// Every list assignment, up to `budget` of them.
    Exhaustive { budget: u128 },
    /// `samples` uniformly random list assignments (a lower bound on the
    /// worst case).
    Sampled { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SoundnessMeasurement {
    pub list_size: usize,
    pub non_disagreeing: usize,
    pub b_count: usize,
    /// An assignment attaining `non_disagreeing`.
    pub witness: ListLabeling,
    pub examined: u128,
    pub exhaustive: bool,
}

impl SoundnessMeasurement {
    /// Fraction of B-vertices not in total disagreement.
    pub fn fraction(&self) -> Rational {
        if self.b_count == 0 {
            Rational::from_integer(0)
        } else {
            Rational::new(self.non_disagreeing as i64, self.b_count as i64)
        }
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(pos) = (0..k).rev().find(|&i| idx[i] != i + n - k) else { break };
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}

/// Worst case, over assignments of `min(ℓ, |Σ_A|)` labels to every
/// A-vertex, of the number of B-vertices not in total disagreement. With
/// `ℓ = 1` this is the plain agreement soundness error.
pub fn measure_agreement_soundness(
    lc: &LabelCoverInstance,
    ell: usize,
    mode: SoundnessMode,
) -> Result<SoundnessMeasurement, ReductionError> {
    if ell == 0 {
        return Err(ReductionError::BadParameters("list bound must be at least 1".into()));
    }
    let k = ell.min(lc.sigma_a());
    let choices = combinations(lc.sigma_a(), k);
    let na = lc.a_count();
    let lists_of = |digits: &[usize]| -> Vec<Vec<usize>> { digits.iter().map(|&c| choices[c].clone()).collect() };
    let (best, idx_lists, examined, exhaustive) = match mode {
        SoundnessMode::Exhaustive { budget } => {
            let total = power(choices.len(), na);
            if total > budget {
                return Err(ReductionError::BudgetExceeded { what: "list assignments", actual: total, budget });
            }
            let (best, Reverse(idx)) = (0..total)
                .into_par_iter()
                .map(|i| (non_disagreeing(lc, &lists_of(&decode(i, choices.len(), na))), Reverse(i)))
                .max()
                .expect("at least one assignment");
            (best, lists_of(&decode(idx, choices.len(), na)), total, true)
        }
        SoundnessMode::Sampled { samples, seed } => {
            let mut r = rng(seed);
            let mut best = (0, lists_of(&vec![0; na]));
            best.0 = non_disagreeing(lc, &best.1);
            for _ in 0..samples {
                let digits: Vec<usize> = (0..na).map(|_| r.gen_range(0..choices.len())).collect();
                let lists = lists_of(&digits);
                let c = non_disagreeing(lc, &lists);
                if c > best.0 {
                    best = (c, lists);
                }
            }
            (best.0, best.1, samples as u128 + 1, false)
        }
    };
    Ok(SoundnessMeasurement {
        list_size: k,
        non_disagreeing: best,
        b_count: lc.b_count(),
        witness: ListLabeling { lists: idx_lists, bound: ell },
        examined,
        exhaustive,
    })
}
