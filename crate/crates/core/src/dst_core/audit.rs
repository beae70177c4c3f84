use crate::exact::{dreyfus_wagner_with, ExactError, INF};
use crate::instances::{leafify, leafify_solution, ArborescenceSolution, DstInstance};

use super::bounded::SubsetTreeOracle;
use super::phi_core::{closed_core, find_phi_core, WitnessViolation};
use super::DstError;

/// Widest terminal set the exhaustive bounded-cover optimum is computed for.
pub const AUDIT_TERMINAL_BUDGET: usize = 16;

/// Both sides of `c(T_opt) = c(T(r, C)) + OPT_SC(C_{C,X}^φ)` for one core.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreIdentity {
    pub core: Vec<usize>,
    pub root_tree_cost: i64,
    pub cover_cost: i64,
    pub opt_cost: i64,
    pub witness: Option<WitnessViolation>,
}

impl CoreIdentity {
    pub fn holds(&self) -> bool {
        self.root_tree_cost + self.cover_cost == self.opt_cost
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionReport {
    pub phi: usize,
    pub terminal_count: usize,
    /// Core from the extraction procedure, with its size bound checked.
    pub extracted: CoreIdentity,
    pub size_bound: Option<WitnessViolation>,
    /// The extracted core closed under branch points of its root paths.
    pub closed: CoreIdentity,
}

impl DecompositionReport {
    /// The identity on the closed core, with valid witnesses for both cores.
    pub fn holds(&self) -> bool {
        self.closed.holds() && self.closed.witness.is_none() && self.extracted.witness.is_none()
    }
}

/// Exact optimum of the bounded cover instance: a partition DP over
/// terminal masks, each block priced at its cheapest root in `core`.
fn bounded_cover_optimum(oracle: &SubsetTreeOracle<'_>, core: &[usize]) -> i64 {
    let view = oracle.view(core, oracle.all_terminals());
    let masks = oracle.table().masks();
    let full = oracle.all_terminals() as usize;
    let mut opt = vec![INF; full + 1];
    opt[0] = 0;
    for mask in 1..=full {
        let low = (mask & mask.wrapping_neg()) as u32;
        let mut best = INF;
        for &y in masks {
            if y & low == 0 || y as usize & !mask != 0 {
                continue;
            }
            let Some((c, _)) = view.price(y) else { continue };
            let rest = opt[mask ^ y as usize];
            if rest < INF {
                best = best.min(c + rest);
            }
        }
        opt[mask] = best;
    }
    opt[full]
}

fn identity(
    oracle: &SubsetTreeOracle<'_>,
    core: &[usize],
    opt_cost: i64,
    witness: Option<WitnessViolation>,
) -> Result<CoreIdentity, DstError> {
    let d = oracle.instance();
    let others: Vec<usize> = core.iter().copied().filter(|&v| v != d.root()).collect();
    let root_tree_cost = if others.is_empty() {
        0
    } else {
        match dreyfus_wagner_with(d, oracle.distances(), d.root(), &others) {
            Ok(t) => t.cost,
            Err(ExactError::UnreachableTerminal(v)) => return Err(DstError::UnreachableCoreVertex(v)),
            Err(e) => return Err(e.into()),
        }
    };
    let mut with_root = core.to_vec();
    with_root.push(d.root());
    with_root.sort_unstable();
    with_root.dedup();
    Ok(CoreIdentity {
        core: core.to_vec(),
        root_tree_cost,
        cover_cost: bounded_cover_optimum(oracle, &with_root),
        opt_cost,
        witness,
    })
}

fn prepare(d: &DstInstance, t_opt: &ArborescenceSolution) -> Result<(DstInstance, ArborescenceSolution), DstError> {
    let n = d.terminals().len();
    if n == 0 {
        return Err(DstError::NoTerminals);
    }
    if n > AUDIT_TERMINAL_BUDGET {
        return Err(ExactError::BudgetExceeded {
            what: "terminal count",
            actual: n,
            budget: AUDIT_TERMINAL_BUDGET,
        }
        .into());
    }
    let leafy = leafify(d);
    let lifted = leafify_solution(d, &leafy, t_opt);
    Ok((leafy, lifted))
}

/// Extracts a φ-core from an optimal tree and compares `c(T_opt)` with
/// `c(T(r, C)) + OPT_SC` for the extracted core and for its closure.
pub fn decomposition_audit(
    d: &DstInstance,
    t_opt: &ArborescenceSolution,
    phi: usize,
) -> Result<DecompositionReport, DstError> {
    let (leafy, lifted) = prepare(d, t_opt)?;
    let oracle = SubsetTreeOracle::new(&leafy, phi)?;
    let core = find_phi_core(&leafy, &lifted, phi)?;
    let closed = closed_core(&leafy, &lifted, &core)?;
    let terminal_count = leafy.terminals().len();
    let extracted = identity(&oracle, &core.core, t_opt.cost, core.validate_witness(&leafy, &lifted).err())?;
    let closed_id = identity(&oracle, &closed.core, t_opt.cost, closed.validate_witness(&leafy, &lifted).err())?;
    Ok(DecompositionReport {
        phi,
        terminal_count,
        extracted,
        size_bound: core.check_size(terminal_count).err(),
        closed: closed_id,
    })
}

/// The identity for a caller-chosen core (root added if missing).
pub fn core_identity(
    d: &DstInstance,
    t_opt: &ArborescenceSolution,
    core: &[usize],
    phi: usize,
) -> Result<CoreIdentity, DstError> {
    let (leafy, _) = prepare(d, t_opt)?;
    let oracle = SubsetTreeOracle::new(&leafy, phi)?;
    let mut core = core.to_vec();
    core.push(d.root());
    core.sort_unstable();
    core.dedup();
    identity(&oracle, &core, t_opt.cost, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::brute_force_dst;

    #[test]
    fn path_reduces_to_cover_cost() {
        let d = DstInstance::with_integer_costs(3, &[(0, 1, 2), (1, 2, 3)], 0, &[2]).unwrap();
        let t = brute_force_dst(&d).unwrap();
        let r = decomposition_audit(&d, &t, 1).unwrap();
        assert_eq!(r.extracted.core, vec![0]);
        assert_eq!(r.extracted.root_tree_cost, 0);
        assert_eq!(r.extracted.cover_cost, 5);
        assert!(r.holds());
    }

    #[test]
    fn extracted_core_can_overcount() {
        // r -a(1)-> a, a -> t1 (0), a -b(5)-> b, b -> t2, t3, t4 (0); φ = 2
        let d = DstInstance::with_integer_costs(
            7,
            &[(0, 1, 1), (1, 2, 0), (1, 3, 5), (3, 4, 0), (3, 5, 0), (3, 6, 0)],
            0,
            &[2, 4, 5, 6],
        )
        .unwrap();
        let t = brute_force_dst(&d).unwrap();
        assert_eq!(t.cost, 6);
        let r = decomposition_audit(&d, &t, 2).unwrap();
        assert_eq!(r.extracted.core, vec![0, 3]);
        assert_eq!(r.extracted.root_tree_cost, 6);
        assert_eq!(r.extracted.cover_cost, 1);
        assert!(!r.extracted.holds());
        assert_eq!(r.closed.core, vec![0, 1, 3]);
        assert!(r.closed.holds());
        assert!(r.holds());
    }
}
