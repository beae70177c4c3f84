//! Exact solvers: shortest paths, the directed Dreyfus–Wagner subset DP, and
//! the brute-force Set Cover / Steiner oracles the approximation is audited
//! against.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::instances::{Arc, ArborescenceSolution, CoverSolution, DstInstance, SetCoverInstance};

/// Sentinel for "unreachable" in every cost table.
pub const INF: i64 = i64::MAX / 4;

/// Default widest terminal subset the DP indexes with a bitmask.
pub const DEFAULT_MASK_WIDTH: usize = 20;
/// Hard limit on the terminal count of a [`SteinerDpTable`] (dense mask index).
pub const MAX_TABLE_WIDTH: usize = 24;
/// Default cap on the number of sets for [`brute_force_set_cover`].
pub const DEFAULT_SET_BUDGET: usize = 24;
/// Default cap on the number of arcs for [`brute_force_dst`].
pub const DEFAULT_ARC_BUDGET: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("terminal {0} is unreachable from the root")]
    UnreachableTerminal(usize),
    #[error("no candidate root reaches every requested terminal")]
    NoFeasibleRoot,
    #[error("element {0} is in no set")]
    UncoverableInstance(usize),
    #[error("{what} = {actual} exceeds the exhaustive budget of {budget}")]
    BudgetExceeded { what: &'static str, actual: usize, budget: usize },
}

fn add(a: i64, b: i64) -> i64 {
    if a >= INF || b >= INF {
        INF
    } else {
        a + b
    }
}

/// All-pairs shortest directed path costs with predecessor links.
#[derive(Debug, Clone)]
pub struct Distances {
    n: usize,
    dist: Vec<i64>,
    pred: Vec<usize>,
}

impl Distances {
    /// `None` when `to` is unreachable from `from`.
    pub fn get(&self, from: usize, to: usize) -> Option<i64> {
        let d = self.dist[from * self.n + to];
        (d < INF).then_some(d)
    }

    pub(crate) fn raw(&self, from: usize, to: usize) -> i64 {
        self.dist[from * self.n + to]
    }

    /// Arcs of one shortest path `from → to`, in path order.
    pub fn path(&self, d: &DstInstance, from: usize, to: usize) -> Option<Vec<Arc>> {
        self.get(from, to)?;
        let mut arcs = Vec::new();
        let mut v = to;
        while v != from {
            let p = self.pred[from * self.n + v];
            arcs.push(Arc::new(p, v, d.arc_cost(p, v).expect("predecessor arc exists")));
            v = p;
        }
        arcs.reverse();
        Some(arcs)
    }
}

/// One Dijkstra per source; arc costs are non-negative by instance invariant.
pub fn all_pairs_distances(d: &DstInstance) -> Distances {
    let n = d.vertex_count();
    let mut dist = vec![INF; n * n];
    let mut pred = vec![usize::MAX; n * n];
    for s in 0..n {
        let row = &mut dist[s * n..(s + 1) * n];
        let prow = &mut pred[s * n..(s + 1) * n];
        row[s] = 0;
        let mut heap = BinaryHeap::from([Reverse((0i64, s))]);
        while let Some(Reverse((du, u))) = heap.pop() {
            if du > row[u] {
                continue;
            }
            for a in d.out_arcs(u) {
                let nd = du + a.cost;
                if nd < row[a.head] {
                    row[a.head] = nd;
                    prow[a.head] = u;
                    heap.push(Reverse((nd, a.head)));
                }
            }
        }
    }
    Distances { n, dist, pred }
}

/// Directed Dreyfus–Wagner table over the subsets of `terminals` of size at
/// most `max_size`, for every vertex as a root.
///
/// `cost(v, S)` is the cheapest arborescence rooted at `v` spanning `S`.
/// Recurrences, for `|S| ≥ 2`:
/// * merge: `M(w, S) = min over S1 ⊂ S of cost(w, S1) + cost(w, S \ S1)`
/// * extend: `cost(v, S) = min over w of dist(v, w) + M(w, S)`
///
/// with `M(w, {t}) = 0` iff `w = t`.
#[derive(Debug, Clone)]
pub struct SteinerDpTable {
    terminals: Vec<usize>,
    max_size: usize,
    n: usize,
    /// Dense mask → compact row index (`u32::MAX` for masks above `max_size`).
    index: Vec<u32>,
    masks: Vec<u32>,
    cost: Vec<i64>,
    merged: Vec<i64>,
    /// Where the path from `v` ends before the subtree branches.
    extend_to: Vec<u32>,
    /// Split chosen at the branching vertex.
    split: Vec<u32>,
}

impl SteinerDpTable {
    pub fn build(
        d: &DstInstance,
        dist: &Distances,
        terminals: &[usize],
        max_size: usize,
    ) -> Result<Self, ExactError> {
        let k = terminals.len();
        if k > MAX_TABLE_WIDTH {
            return Err(ExactError::BudgetExceeded {
                what: "terminal subset width",
                actual: k,
                budget: MAX_TABLE_WIDTH,
            });
        }
        let max_size = max_size.min(k);
        let n = d.vertex_count();
        let mut masks: Vec<u32> =
            (0u32..(1u32 << k)).filter(|m| m.count_ones() as usize <= max_size).collect();
        masks.sort_by_key(|m| (m.count_ones(), *m));
        let mut index = vec![u32::MAX; 1 << k];
        for (i, &m) in masks.iter().enumerate() {
            index[m as usize] = i as u32;
        }
        let rows = masks.len();
        let mut t = SteinerDpTable {
            terminals: terminals.to_vec(),
            max_size,
            n,
            index,
            masks,
            cost: vec![INF; rows * n],
            merged: vec![INF; rows * n],
            extend_to: vec![u32::MAX; rows * n],
            split: vec![0; rows * n],
        };
        for v in 0..n {
            t.cost[v] = 0;
            t.merged[v] = 0;
            t.extend_to[v] = v as u32;
        }
        for row in 1..rows {
            let mask = t.masks[row];
            if mask.count_ones() == 1 {
                let term = terminals[mask.trailing_zeros() as usize];
                t.merged[row * n + term] = 0;
            } else {
                let low = mask & mask.wrapping_neg();
                let rest = mask ^ low;
                // S1 ranges over subsets containing the lowest bit, S1 ≠ S.
                for w in 0..n {
                    let mut best = INF;
                    let mut best_split = 0u32;
                    let mut sub = rest;
                    loop {
                        let s1 = sub | low;
                        if s1 != mask {
                            let r1 = t.index[s1 as usize] as usize;
                            let r2 = t.index[(mask ^ s1) as usize] as usize;
                            let c = add(t.cost[r1 * n + w], t.cost[r2 * n + w]);
                            if c < best {
                                best = c;
                                best_split = s1;
                            }
                        }
                        if sub == 0 {
                            break;
                        }
                        sub = (sub - 1) & rest;
                    }
                    t.merged[row * n + w] = best;
                    t.split[row * n + w] = best_split;
                }
            }
            for v in 0..n {
                let mut best = INF;
                let mut arg = u32::MAX;
                for w in 0..n {
                    let c = add(dist.raw(v, w), t.merged[row * n + w]);
                    if c < best {
                        best = c;
                        arg = w as u32;
                    }
                }
                t.cost[row * n + v] = best;
                t.extend_to[row * n + v] = arg;
            }
        }
        Ok(t)
    }

    pub fn terminals(&self) -> &[usize] {
        &self.terminals
    }

    pub fn max_size(&self) -> usize {
        self.max_size
    }

    /// Masks with at most `max_size` bits, by popcount then value.
    pub fn masks(&self) -> &[u32] {
        &self.masks
    }

    pub fn mask_of(&self, vertices: &[usize]) -> Option<u32> {
        vertices.iter().try_fold(0u32, |m, v| {
            self.terminals.iter().position(|t| t == v).map(|i| m | 1 << i)
        })
    }

    pub fn vertices_of(&self, mask: u32) -> Vec<usize> {
        (0..self.terminals.len()).filter(|&i| mask >> i & 1 == 1).map(|i| self.terminals[i]).collect()
    }

    /// Raw cost (`INF` when infeasible or when `mask` is wider than `max_size`).
    pub fn cost(&self, root: usize, mask: u32) -> i64 {
        match self.index.get(mask as usize) {
            Some(&r) if r != u32::MAX => self.cost[r as usize * self.n + root],
            _ => INF,
        }
    }

    pub(crate) fn row_cost(&self, row: usize, root: usize) -> i64 {
        self.cost[row * self.n + root]
    }

    /// Arcs of the DP witness tree (before de-duplication).
    fn collect(&self, d: &DstInstance, dist: &Distances, root: usize, mask: u32, out: &mut Vec<Arc>) {
        let row = self.index[mask as usize] as usize;
        let w = self.extend_to[row * self.n + root] as usize;
        out.extend(dist.path(d, root, w).expect("finite DP entry has a path"));
        if mask.count_ones() >= 2 {
            let s1 = self.split[row * self.n + w];
            self.collect(d, dist, w, s1, out);
            self.collect(d, dist, w, mask ^ s1, out);
        }
    }

    /// Reconstructs an arborescence realizing `cost(root, mask)`.
    pub fn tree(
        &self,
        d: &DstInstance,
        dist: &Distances,
        root: usize,
        mask: u32,
    ) -> Option<ArborescenceSolution> {
        let c = self.cost(root, mask);
        if c >= INF {
            return None;
        }
        let mut arcs = Vec::new();
        if mask != 0 {
            self.collect(d, dist, root, mask, &mut arcs);
        }
        let required = self.vertices_of(mask);
        Some(prune_to_arborescence(root, arcs, &required).expect("witness spans its terminals"))
    }
}

/// Reduces an arc set that reaches every `required` vertex from `root` to an
/// arborescence: a shortest-path tree from `root` inside the arc set, with
/// non-required leaves peeled off. The result never costs more than the
/// (de-duplicated) input.
pub fn prune_to_arborescence(
    root: usize,
    mut arcs: Vec<Arc>,
    required: &[usize],
) -> Option<ArborescenceSolution> {
    arcs.sort_unstable();
    arcs.dedup();
    let mut out: HashMap<usize, Vec<Arc>> = HashMap::new();
    for a in &arcs {
        out.entry(a.tail).or_default().push(*a);
    }
    let mut best: HashMap<usize, i64> = HashMap::from([(root, 0)]);
    let mut parent: HashMap<usize, Arc> = HashMap::new();
    let mut heap = BinaryHeap::from([Reverse((0i64, root))]);
    while let Some(Reverse((du, u))) = heap.pop() {
        if du > best[&u] {
            continue;
        }
        for a in out.get(&u).into_iter().flatten() {
            let nd = du + a.cost;
            if best.get(&a.head).is_none_or(|&old| nd < old) {
                best.insert(a.head, nd);
                parent.insert(a.head, *a);
                heap.push(Reverse((nd, a.head)));
            }
        }
    }
    if required.iter().any(|v| !best.contains_key(v)) {
        return None;
    }
    let keep: BTreeSet<usize> = required.iter().copied().collect();
    let mut children: HashMap<usize, usize> = HashMap::new();
    for a in parent.values() {
        *children.entry(a.tail).or_default() += 1;
    }
    let mut leaves: Vec<usize> = parent
        .keys()
        .copied()
        .filter(|v| !children.contains_key(v) && !keep.contains(v))
        .collect();
    while let Some(v) = leaves.pop() {
        let a = parent.remove(&v).expect("leaf has a parent");
        let c = children.get_mut(&a.tail).expect("parent has children");
        *c -= 1;
        if *c == 0 {
            children.remove(&a.tail);
            if a.tail != root && !keep.contains(&a.tail) {
                leaves.push(a.tail);
            }
        }
    }
    Some(ArborescenceSolution::from_arcs(root, parent.into_values().collect()))
}

/// Minimum-cost arborescence rooted at `root` spanning `terminals`.
pub fn dreyfus_wagner_directed(
    d: &DstInstance,
    root: usize,
    terminals: &[usize],
) -> Result<ArborescenceSolution, ExactError> {
    let dist = all_pairs_distances(d);
    dreyfus_wagner_with(d, &dist, root, terminals)
}

/// [`dreyfus_wagner_directed`] with precomputed distances.
pub fn dreyfus_wagner_with(
    d: &DstInstance,
    dist: &Distances,
    root: usize,
    terminals: &[usize],
) -> Result<ArborescenceSolution, ExactError> {
    let terminals: Vec<usize> = terminals.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    if let Some(&t) = terminals.iter().find(|&&t| dist.get(root, t).is_none()) {
        return Err(ExactError::UnreachableTerminal(t));
    }
    if terminals.len() > DEFAULT_MASK_WIDTH {
        return Err(ExactError::BudgetExceeded {
            what: "terminal count",
            actual: terminals.len(),
            budget: DEFAULT_MASK_WIDTH,
        });
    }
    let table = SteinerDpTable::build(d, dist, &terminals, terminals.len())?;
    let full = (1u32 << terminals.len()) - 1;
    Ok(table.tree(d, dist, root, full).expect("all terminals reachable"))
}

/// `T(S, F)`: the cheapest tree spanning `F` rooted at some vertex of
/// `roots`; ties go to the lowest vertex id.
pub fn min_cost_tree_from_set(
    d: &DstInstance,
    roots: &[usize],
    terminals: &[usize],
) -> Result<(usize, ArborescenceSolution), ExactError> {
    let dist = all_pairs_distances(d);
    let terminals: Vec<usize> = terminals.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    if terminals.len() > DEFAULT_MASK_WIDTH {
        return Err(ExactError::BudgetExceeded {
            what: "terminal count",
            actual: terminals.len(),
            budget: DEFAULT_MASK_WIDTH,
        });
    }
    let table = SteinerDpTable::build(d, &dist, &terminals, terminals.len())?;
    let full = (1u32 << terminals.len()) - 1;
    let mut roots = roots.to_vec();
    roots.sort_unstable();
    roots.dedup();
    let best = roots
        .iter()
        .copied()
        .filter(|&s| table.cost(s, full) < INF)
        .min_by_key(|&s| (table.cost(s, full), s))
        .ok_or(ExactError::NoFeasibleRoot)?;
    Ok((best, table.tree(d, &dist, best, full).expect("finite")))
}

/// Exact minimum-cost cover: branch on the sets containing the lowest
/// uncovered element, pruning on cost.
pub fn brute_force_set_cover(sc: &SetCoverInstance) -> Result<CoverSolution, ExactError> {
    brute_force_set_cover_with_budget(sc, DEFAULT_SET_BUDGET)
}

pub fn brute_force_set_cover_with_budget(
    sc: &SetCoverInstance,
    max_sets: usize,
) -> Result<CoverSolution, ExactError> {
    if sc.set_count() > max_sets {
        return Err(ExactError::BudgetExceeded {
            what: "set count",
            actual: sc.set_count(),
            budget: max_sets,
        });
    }
    let n = sc.universe_size();
    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); n];
    let members: Vec<FixedBitSet> = sc
        .sets()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let mut bits = FixedBitSet::with_capacity(n);
            for &e in &s.members {
                bits.insert(e);
                containing[e].push(i);
            }
            bits
        })
        .collect();
    if let Some(e) = containing.iter().position(Vec::is_empty) {
        return Err(ExactError::UncoverableInstance(e));
    }

    struct Search<'a> {
        sc: &'a SetCoverInstance,
        members: &'a [FixedBitSet],
        containing: &'a [Vec<usize>],
        best_cost: i64,
        best: Vec<usize>,
        chosen: Vec<usize>,
    }
    impl Search<'_> {
        fn go(&mut self, covered: &FixedBitSet, cost: i64) {
            if cost >= self.best_cost {
                return;
            }
            let Some(e) = covered.zeroes().next() else {
                self.best_cost = cost;
                self.best = self.chosen.clone();
                return;
            };
            for k in 0..self.containing[e].len() {
                let i = self.containing[e][k];
                let mut next = covered.clone();
                next.union_with(&self.members[i]);
                self.chosen.push(i);
                self.go(&next, cost + self.sc.sets()[i].cost);
                self.chosen.pop();
            }
        }
    }
    let mut search = Search {
        sc,
        members: &members,
        containing: &containing,
        best_cost: INF,
        best: Vec::new(),
        chosen: Vec::new(),
    };
    search.go(&FixedBitSet::with_capacity(n), 0);
    let mut sets = search.best;
    sets.sort_unstable();
    Ok(CoverSolution { sets, cost: search.best_cost })
}

/// Exact Steiner arborescence by arc-subset enumeration.
///
/// Only subsets giving every vertex at most one in-arc are generated (each
/// vertex picks one of its in-arcs or none), then filtered by reachability
/// from the root; partial costs prune the search.
pub fn brute_force_dst(d: &DstInstance) -> Result<ArborescenceSolution, ExactError> {
    brute_force_dst_with_budget(d, DEFAULT_ARC_BUDGET)
}

pub fn brute_force_dst_with_budget(
    d: &DstInstance,
    max_arcs: usize,
) -> Result<ArborescenceSolution, ExactError> {
    if d.arcs().len() > max_arcs {
        return Err(ExactError::BudgetExceeded {
            what: "arc count",
            actual: d.arcs().len(),
            budget: max_arcs,
        });
    }
    let reach = d.reachable_from(d.root());
    if let Some(&t) = d.terminals().iter().find(|&&t| !reach[t]) {
        return Err(ExactError::UnreachableTerminal(t));
    }
    let n = d.vertex_count();
    // BFS order from the root so that tails tend to be decided before heads.
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    seen[d.root()] = true;
    let mut queue = std::collections::VecDeque::from([d.root()]);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for a in d.out_arcs(v) {
            if !seen[a.head] {
                seen[a.head] = true;
                queue.push_back(a.head);
            }
        }
    }
    let order: Vec<usize> = order.into_iter().filter(|&v| v != d.root()).collect();
    // Vertices the root cannot reach count as decided and absent.
    let mut position = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }

    struct Search<'a> {
        d: &'a DstInstance,
        order: &'a [usize],
        position: &'a [usize],
        choice: Vec<Option<Arc>>,
        best_cost: i64,
        best: Option<Vec<Arc>>,
    }
    impl Search<'_> {
        fn absent(&self, v: usize, decided: usize) -> bool {
            v != self.d.root() && self.position[v] < decided && self.choice[v].is_none()
        }
        fn valid(&self) -> bool {
            // every chosen vertex must hang off the root (no cycles)
            for &v in self.order {
                if self.choice[v].is_none() {
                    continue;
                }
                let mut x = v;
                let mut steps = 0;
                while x != self.d.root() {
                    match self.choice[x] {
                        Some(a) if steps <= self.order.len() => {
                            x = a.tail;
                            steps += 1;
                        }
                        _ => return false,
                    }
                }
            }
            true
        }
        fn go(&mut self, k: usize, cost: i64) {
            if cost >= self.best_cost {
                return;
            }
            if k == self.order.len() {
                if self.valid() {
                    self.best_cost = cost;
                    self.best = Some(self.order.iter().filter_map(|&v| self.choice[v]).collect());
                }
                return;
            }
            let v = self.order[k];
            let arcs: Vec<Arc> = self.d.in_arcs(v).copied().collect();
            for a in arcs {
                if self.absent(a.tail, k) {
                    continue;
                }
                self.choice[v] = Some(a);
                self.go(k + 1, cost + a.cost);
                self.choice[v] = None;
            }
            if !self.d.is_terminal(v) {
                // v stays outside the tree; any already-chosen arc out of v dies
                let orphaned = self.order[..k].iter().any(|&w| self.choice[w].is_some_and(|a| a.tail == v));
                if !orphaned {
                    self.go(k + 1, cost);
                }
            }
        }
    }
    let mut search = Search {
        d,
        order: &order,
        position: &position,
        choice: vec![None; n],
        best_cost: INF,
        best: None,
    };
    search.go(0, 0);
    let arcs = search.best.expect("terminals reachable, so some tree exists");
    let tree = prune_to_arborescence(d.root(), arcs, d.terminals()).expect("valid tree");
    debug_assert_eq!(tree.cost, search.best_cost);
    Ok(tree)
}
