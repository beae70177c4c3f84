use rayon::prelude::*;

use crate::exact::{dreyfus_wagner_with, prune_to_arborescence, ExactError, DEFAULT_MASK_WIDTH};
use crate::greedy::chvatal_bound;
use crate::instances::{leafify, unleafify_solution, ArborescenceSolution, DstInstance};
use crate::rational::{ceil_pow, format_rational, Rational};

use super::bounded::{CoverPiece, SubsetTreeOracle};
use super::DstError;

/// Default cap on the number of candidate cores one run may enumerate.
pub const DEFAULT_CANDIDATE_BUDGET: usize = 5_000_000;

/// How many vertices a candidate core may hold, the root included.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoreCap {
    /// `⌈N/φ⌉`, the largest core extraction can return.
    Tight,
    /// `⌈2N/φ⌉`, a wider search.
    Doubled,
    Fixed(usize),
}

impl CoreCap {
    pub fn resolve(self, terminals: usize, phi: usize) -> usize {
        match self {
            CoreCap::Tight => terminals.div_ceil(phi),
            CoreCap::Doubled => (2 * terminals).div_ceil(phi),
            CoreCap::Fixed(k) => k,
        }
        .max(1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DstApproxOptions {
    pub gamma: Rational,
    pub core_cap: CoreCap,
    /// Overrides the φ derived from γ.
    pub phi: Option<usize>,
    pub candidate_budget: usize,
}

impl DstApproxOptions {
    pub fn new(gamma: Rational) -> Self {
        DstApproxOptions { gamma, core_cap: CoreCap::Tight, phi: None, candidate_budget: DEFAULT_CANDIDATE_BUDGET }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DstApproxOutcome {
    /// The returned tree, in the ids of the input instance.
    pub solution: ArborescenceSolution,
    pub phi: usize,
    pub core_cap: usize,
    pub candidates: usize,
    /// Winning core, root included.
    pub core: Vec<usize>,
    /// Greedy pieces of the winning core, in leafified ids.
    pub pieces: Vec<CoverPiece>,
    /// `1 + ln φ`, rounded up.
    pub ratio_bound: Rational,
}

/// `φ = max(1, ⌈N^(1−γ)⌉)`, computed exactly.
pub fn phi_for(terminals: usize, gamma: Rational) -> Result<usize, DstError> {
    let half = Rational::new(1, 2);
    let one = Rational::from_integer(1);
    if gamma < half || gamma >= one {
        return Err(DstError::BadGamma(format_rational(&gamma)));
    }
    Ok(ceil_pow(terminals as u64, one - gamma) as usize)
}

fn binomial_sum(n: usize, k: usize) -> usize {
    let mut total = 0usize;
    let mut c = 1usize;
    for i in 0..=k.min(n) {
        total = total.saturating_add(c);
        c = c.saturating_mul(n - i) / (i + 1);
    }
    total
}

/// Every subset of `pool` with at most `k` members, by size then
/// lexicographically.
fn subsets_up_to(pool: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for size in 1..=k.min(pool.len()) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            out.push(idx.iter().map(|&i| pool[i]).collect());
            let Some(pos) = (0..size).rev().find(|&i| idx[i] != i + pool.len() - size) else {
                break;
            };
            idx[pos] += 1;
            for j in pos + 1..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    out
}

/// Vertices worth guessing: reachable from the root, with an out-arc, and
/// able to reach a terminal.
fn candidate_pool(oracle: &SubsetTreeOracle<'_>) -> Vec<usize> {
    let d = oracle.instance();
    let dist = oracle.distances();
    let root = d.root();
    (0..d.vertex_count())
        .filter(|&v| {
            v != root
                && d.out_degree(v) > 0
                && dist.get(root, v).is_some()
                && d.terminals().iter().any(|&t| dist.get(v, t).is_some())
        })
        .collect()
}

/// `T(r, S)` plus the pieces, with duplicate and superfluous arcs shed.
pub fn assemble(
    oracle: &SubsetTreeOracle<'_>,
    core: &[usize],
    pieces: &[CoverPiece],
) -> Result<ArborescenceSolution, DstError> {
    let d = oracle.instance();
    let root = d.root();
    let others: Vec<usize> = core.iter().copied().filter(|&s| s != root).collect();
    if let Some(&s) = others.iter().find(|&&s| oracle.distances().get(root, s).is_none()) {
        return Err(DstError::UnreachableCoreVertex(s));
    }
    let mut arcs = if others.is_empty() {
        Vec::new()
    } else {
        dreyfus_wagner_with(d, oracle.distances(), root, &others)?.arcs
    };
    let mut required = Vec::new();
    for p in pieces {
        if p.root != root && !others.contains(&p.root) {
            return Err(DstError::UnreachableCoreVertex(p.root));
        }
        arcs.extend(p.tree.arcs.iter().copied());
        required.extend(p.terminals.iter().copied());
    }
    prune_to_arborescence(root, arcs, &required).ok_or(DstError::NoCoverableTerminal)
}

fn run_core(
    oracle: &SubsetTreeOracle<'_>,
    core: &[usize],
) -> Result<(Vec<CoverPiece>, ArborescenceSolution), DstError> {
    let view = oracle.view(core, oracle.all_terminals());
    if view.coverable() != oracle.all_terminals() {
        return Err(DstError::NoCoverableTerminal);
    }
    let shape = view.clone();
    let pieces: Vec<CoverPiece> = view.greedy_picks()?.iter().map(|p| shape.piece(p)).collect();
    let tree = assemble(oracle, core, &pieces)?;
    Ok((pieces, tree))
}

/// Guesses every small core `S ∋ r`, covers the terminals greedily with
/// φ-bounded subtrees rooted in `S`, and keeps the cheapest assembled tree.
/// Candidates are evaluated in parallel; ties go to the earliest candidate
/// in enumeration order.
pub fn dst_approx(d: &DstInstance, options: &DstApproxOptions) -> Result<DstApproxOutcome, DstError> {
    let report = d.validate();
    if !report.is_pass() {
        return Err(DstError::Invalid(report));
    }
    let n_terms = d.terminals().len();
    if n_terms == 0 {
        return Err(DstError::NoTerminals);
    }
    if n_terms > DEFAULT_MASK_WIDTH {
        return Err(ExactError::BudgetExceeded {
            what: "terminal count",
            actual: n_terms,
            budget: DEFAULT_MASK_WIDTH,
        }
        .into());
    }
    let phi = match options.phi {
        Some(0) => return Err(DstError::BadPhi),
        Some(phi) => phi,
        None => phi_for(n_terms, options.gamma)?,
    };
    let cap = options.core_cap.resolve(n_terms, phi);
    let leafy = leafify(d);
    let oracle = SubsetTreeOracle::new(&leafy, phi)?;
    let pool = candidate_pool(&oracle);
    let count = binomial_sum(pool.len(), cap - 1);
    if count > options.candidate_budget {
        return Err(ExactError::BudgetExceeded {
            what: "candidate cores",
            actual: count,
            budget: options.candidate_budget,
        }
        .into());
    }
    let root = leafy.root();
    let cores: Vec<Vec<usize>> = subsets_up_to(&pool, cap - 1)
        .into_iter()
        .map(|mut s| {
            s.push(root);
            s.sort_unstable();
            s
        })
        .collect();
    let winner = cores
        .par_iter()
        .enumerate()
        .filter_map(|(i, core)| run_core(&oracle, core).ok().map(|(_, t)| (t.cost, i)))
        .min()
        .ok_or(DstError::NoCoverableTerminal)?;
    let core = cores[winner.1].clone();
    let (pieces, tree) = run_core(&oracle, &core)?;
    Ok(DstApproxOutcome {
        solution: unleafify_solution(d, &tree),
        phi,
        core_cap: cap,
        candidates: cores.len(),
        core,
        pieces,
        ratio_bound: chvatal_bound(phi as u64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    #[test]
    fn phi_rounds_up() {
        assert_eq!(phi_for(16, g(1, 2)).unwrap(), 4);
        assert_eq!(phi_for(17, g(1, 2)).unwrap(), 5);
        assert_eq!(phi_for(6, g(1, 2)).unwrap(), 3);
        assert_eq!(phi_for(1, g(1, 2)).unwrap(), 1);
        assert_eq!(phi_for(8, g(2, 3)).unwrap(), 2);
        assert_eq!(phi_for(9, g(2, 3)).unwrap(), 3);
        assert!(phi_for(4, g(1, 3)).is_err());
        assert!(phi_for(4, g(1, 1)).is_err());
    }

    #[test]
    fn subsets_in_order() {
        let s = subsets_up_to(&[3, 5, 7], 2);
        assert_eq!(s, vec![vec![], vec![3], vec![5], vec![7], vec![3, 5], vec![3, 7], vec![5, 7]]);
        assert_eq!(binomial_sum(3, 2), 7);
        assert_eq!(binomial_sum(29, 3), 4090);
    }

    #[test]
    fn caps() {
        assert_eq!(CoreCap::Tight.resolve(16, 4), 4);
        assert_eq!(CoreCap::Doubled.resolve(16, 4), 8);
        assert_eq!(CoreCap::Tight.resolve(3, 4), 1);
        assert_eq!(CoreCap::Fixed(0).resolve(3, 4), 1);
    }

    #[test]
    fn path_instance_is_exact() {
        let d = DstInstance::with_integer_costs(4, &[(0, 1, 1), (1, 2, 2), (2, 3, 3), (0, 3, 9)], 0, &[3]).unwrap();
        let out = dst_approx(&d, &DstApproxOptions::new(g(1, 2))).unwrap();
        assert_eq!(out.solution.cost, 6);
        assert_eq!(out.phi, 1);
        out.solution.verify(&d, d.terminals()).unwrap();
    }

    #[test]
    fn assembly_sheds_shared_arcs() {
        // two pieces share r -> a
        let d = DstInstance::with_integer_costs(4, &[(0, 1, 3), (1, 2, 1), (1, 3, 1)], 0, &[2, 3]).unwrap();
        let oracle = SubsetTreeOracle::new(&d, 1).unwrap();
        let view = oracle.view(&[0], oracle.all_terminals());
        let pieces: Vec<CoverPiece> = view.clone().greedy_picks().unwrap().iter().map(|p| view.piece(p)).collect();
        let sum: i64 = pieces.iter().map(|p| p.cost).sum();
        let t = assemble(&oracle, &[0], &pieces).unwrap();
        assert_eq!(sum, 8);
        assert_eq!(t.cost, 5);
        t.verify(&d, d.terminals()).unwrap();
    }

    #[test]
    fn non_leaf_terminals_map_back() {
        let d = DstInstance::with_integer_costs(3, &[(0, 1, 1), (1, 2, 1)], 0, &[1, 2]).unwrap();
        let out = dst_approx(&d, &DstApproxOptions::new(g(1, 2))).unwrap();
        assert_eq!(out.solution.cost, 2);
        out.solution.verify(&d, d.terminals()).unwrap();
    }
}
