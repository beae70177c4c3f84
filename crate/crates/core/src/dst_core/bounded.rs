use std::cmp::Ordering;

use crate::exact::{all_pairs_distances, Distances, SteinerDpTable, INF};
use crate::greedy::density_cmp;
use crate::instances::{ArborescenceSolution, DstInstance};
use crate::rational::{scaled, Rational};

use super::DstError;

/// Shared subset-tree costs for one instance: all-pairs distances plus a
/// Dreyfus–Wagner table over every terminal subset of size at most φ, for
/// every vertex as a root. Built once and queried by every candidate core.
#[derive(Debug, Clone)]
pub struct SubsetTreeOracle<'a> {
    d: &'a DstInstance,
    dist: Distances,
    table: SteinerDpTable,
    phi: usize,
}

impl<'a> SubsetTreeOracle<'a> {
    pub fn new(d: &'a DstInstance, phi: usize) -> Result<Self, DstError> {
        let dist = all_pairs_distances(d);
        Self::with_distances(d, dist, phi)
    }

    pub fn with_distances(d: &'a DstInstance, dist: Distances, phi: usize) -> Result<Self, DstError> {
        if phi == 0 {
            return Err(DstError::BadPhi);
        }
        let table = SteinerDpTable::build(d, &dist, d.terminals(), phi)?;
        Ok(SubsetTreeOracle { d, dist, table, phi })
    }

    pub fn instance(&self) -> &'a DstInstance {
        self.d
    }

    pub fn distances(&self) -> &Distances {
        &self.dist
    }

    pub fn table(&self) -> &SteinerDpTable {
        &self.table
    }

    pub fn phi(&self) -> usize {
        self.phi
    }

    /// Mask over the instance's terminal list with every terminal set.
    pub fn all_terminals(&self) -> u32 {
        ((1u64 << self.d.terminals().len()) - 1) as u32
    }

    /// `c(T(s, Y))` for a mask of at most φ terminals.
    pub fn subset_cost(&self, root: usize, mask: u32) -> Option<i64> {
        let c = self.table.cost(root, mask);
        (c < INF).then_some(c)
    }

    pub fn subset_tree(&self, root: usize, mask: u32) -> Option<ArborescenceSolution> {
        self.table.tree(self.d, &self.dist, root, mask)
    }

    /// The bounded set-cover instance induced by `roots` over the
    /// uncovered terminals `uncovered`.
    pub fn view(&self, roots: &[usize], uncovered: u32) -> BoundedCoverView<'_, 'a> {
        let mut roots = roots.to_vec();
        roots.sort_unstable();
        roots.dedup();
        let n = self.d.vertex_count();
        // best[row] = cheapest root of S for that subset, lowest id on ties
        let best = (0..self.table.masks().len())
            .map(|row| {
                roots
                    .iter()
                    .filter(|&&s| s < n)
                    .map(|&s| (self.table.row_cost(row, s), s))
                    .min()
                    .unwrap_or((INF, usize::MAX))
            })
            .collect();
        BoundedCoverView { oracle: self, roots, uncovered, best }
    }
}

/// `C_{S,U}^φ`: every `Y ⊆ U` with `|Y| ≤ φ` spanned from some root in `S`,
/// priced at `min_{s∈S} c(T(s, Y))`. Represented through the oracle's table,
/// never materialized.
#[derive(Debug, Clone)]
pub struct BoundedCoverView<'o, 'a> {
    oracle: &'o SubsetTreeOracle<'a>,
    roots: Vec<usize>,
    uncovered: u32,
    best: Vec<(i64, usize)>,
}

/// A chosen subset with its cheapest root and cost (tree built on demand).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DensityPick {
    pub mask: u32,
    pub root: usize,
    pub cost: i64,
}

impl DensityPick {
    pub fn size(&self) -> usize {
        self.mask.count_ones() as usize
    }

    /// `cost / |Y|` in instance units.
    pub fn density(&self, cost_scale: i64) -> Rational {
        scaled(self.cost, cost_scale) / Rational::from_integer(self.size() as i64)
    }

    /// Density, then larger `Y`, then smaller mask, then lower root.
    fn better_than(&self, other: &DensityPick) -> bool {
        density_cmp(self.cost, self.size(), other.cost, other.size())
            .then_with(|| other.size().cmp(&self.size()))
            .then_with(|| self.mask.cmp(&other.mask))
            .then_with(|| self.root.cmp(&other.root))
            == Ordering::Less
    }
}

/// One greedy pick with its reconstructed tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverPiece {
    pub terminals: Vec<usize>,
    pub root: usize,
    pub cost: i64,
    pub tree: ArborescenceSolution,
}

impl<'o, 'a> BoundedCoverView<'o, 'a> {
    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn uncovered(&self) -> u32 {
        self.uncovered
    }

    pub fn uncovered_terminals(&self) -> Vec<usize> {
        self.oracle.table.vertices_of(self.uncovered)
    }

    pub fn oracle(&self) -> &'o SubsetTreeOracle<'a> {
        self.oracle
    }

    /// `min_{s∈S} c(T(s, Y))` for a subset of at most φ terminals.
    pub fn price(&self, mask: u32) -> Option<(i64, usize)> {
        let row = self.oracle.table.masks().binary_search_by_key(
            &(mask.count_ones(), mask),
            |m| (m.count_ones(), *m),
        );
        let (c, s) = self.best[row.ok()?];
        (c < INF).then_some((c, s))
    }

    /// Every terminal some root of the view can reach.
    pub fn coverable(&self) -> u32 {
        let masks = self.oracle.table.masks();
        let k = self.oracle.d.terminals().len();
        (0..k)
            .filter(|&i| {
                let row = 1 + i;
                debug_assert_eq!(masks[row], 1 << i);
                self.best[row].0 < INF
            })
            .fold(0u32, |m, i| m | 1 << i)
    }

    pub(crate) fn pick(&self) -> Option<DensityPick> {
        let masks = self.oracle.table.masks();
        let mut best: Option<DensityPick> = None;
        for (row, &mask) in masks.iter().enumerate().skip(1) {
            if mask & !self.uncovered != 0 {
                continue;
            }
            let (cost, root) = self.best[row];
            if cost >= INF {
                continue;
            }
            let cand = DensityPick { mask, root, cost };
            if best.as_ref().is_none_or(|b| cand.better_than(b)) {
                best = Some(cand);
            }
        }
        best
    }

    pub(crate) fn remove(&mut self, mask: u32) {
        self.uncovered &= !mask;
    }

    /// Greedy picks without trees; `None` when some terminal is uncoverable.
    pub(crate) fn greedy_picks(mut self) -> Result<Vec<DensityPick>, DstError> {
        let mut picks = Vec::new();
        while self.uncovered != 0 {
            let p = self.pick().ok_or(DstError::NoCoverableTerminal)?;
            self.remove(p.mask);
            picks.push(p);
        }
        Ok(picks)
    }

    pub(crate) fn piece(&self, p: &DensityPick) -> CoverPiece {
        let tree = self.oracle.subset_tree(p.root, p.mask).expect("priced subsets have trees");
        CoverPiece {
            terminals: self.oracle.table.vertices_of(p.mask),
            root: p.root,
            cost: p.cost,
            tree,
        }
    }
}

/// Minimum-density member of the view, searched over every terminal subset
/// of at most φ uncovered terminals and every root in `S`.
pub fn min_density_set(view: &BoundedCoverView<'_, '_>) -> Result<(DensityPick, CoverPiece), DstError> {
    let p = view.pick().ok_or(DstError::NoCoverableTerminal)?;
    Ok((p, view.piece(&p)))
}

/// Repeated minimum-density picks until nothing is uncovered; the chosen
/// subsets partition the view's uncovered terminals.
pub fn greedy_bounded_cover(view: BoundedCoverView<'_, '_>) -> Result<Vec<CoverPiece>, DstError> {
    let shape = view.clone();
    let picks = view.greedy_picks()?;
    Ok(picks.iter().map(|p| shape.piece(p)).collect())
}
