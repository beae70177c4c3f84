use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::instances::{Arc, ArborescenceSolution, DstInstance};

use super::DstError;

/// One subtree of a core decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorePiece {
    pub root: usize,
    pub arcs: Vec<Arc>,
    pub terminals: Vec<usize>,
}

/// A φ-core `C` of a tree together with its witness: edge-disjoint subtrees
/// rooted in `C`, each with at most φ terminals, covering every terminal of
/// the tree exactly once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiCore {
    pub core: Vec<usize>,
    pub phi: usize,
    pub pieces: Vec<CorePiece>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessViolation {
    RootOutsideCore { piece: usize },
    TooManyTerminals { piece: usize, count: usize },
    TerminalCoveredTwice { terminal: usize },
    TerminalMissing { terminal: usize },
    SharedArc { tail: usize, head: usize },
    NotASubtree { piece: usize },
    CoreTooLarge { size: usize, bound: usize },
}

struct Rooted {
    root: usize,
    children: BTreeMap<usize, Vec<usize>>,
    parent_arc: HashMap<usize, Arc>,
    terminal: BTreeSet<usize>,
}

impl Rooted {
    fn new(d: &DstInstance, tree: &ArborescenceSolution) -> Result<Self, DstError> {
        let mut children: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut parent_arc = HashMap::new();
        for a in &tree.arcs {
            children.entry(a.tail).or_default().push(a.head);
            parent_arc.insert(a.head, *a);
        }
        for list in children.values_mut() {
            list.sort_unstable();
        }
        let terminal: BTreeSet<usize> =
            d.terminals().iter().copied().filter(|&t| tree.contains_vertex(t)).collect();
        if let Some(&t) = terminal.iter().find(|t| children.contains_key(t)) {
            return Err(DstError::NonLeafTerminal(t));
        }
        Ok(Rooted { root: tree.root, children, parent_arc, terminal })
    }

    fn kids(&self, v: usize) -> &[usize] {
        self.children.get(&v).map_or(&[], Vec::as_slice)
    }

    /// Terminal counts of every subtree, skipping removed vertices.
    fn counts(&self, removed: &BTreeSet<usize>) -> HashMap<usize, usize> {
        let mut counts = HashMap::new();
        self.count_into(self.root, removed, &mut counts);
        counts
    }

    fn count_into(&self, v: usize, removed: &BTreeSet<usize>, out: &mut HashMap<usize, usize>) -> usize {
        let mut c = usize::from(self.terminal.contains(&v));
        for &w in self.kids(v) {
            if !removed.contains(&w) {
                c += self.count_into(w, removed, out);
            }
        }
        out.insert(v, c);
        c
    }

    fn subtree(&self, v: usize, removed: &BTreeSet<usize>, arcs: &mut Vec<Arc>, terms: &mut Vec<usize>) {
        if self.terminal.contains(&v) {
            terms.push(v);
        }
        for &w in self.kids(v) {
            if !removed.contains(&w) {
                arcs.push(self.parent_arc[&w]);
                self.subtree(w, removed, arcs, terms);
            }
        }
    }

    fn piece(&self, v: usize, child: usize, removed: &BTreeSet<usize>) -> CorePiece {
        let mut arcs = vec![self.parent_arc[&child]];
        let mut terminals = Vec::new();
        self.subtree(child, removed, &mut arcs, &mut terminals);
        arcs.sort_unstable();
        terminals.sort_unstable();
        CorePiece { root: v, arcs, terminals }
    }

    fn depths(&self) -> HashMap<usize, usize> {
        let mut depth = HashMap::from([(self.root, 0)]);
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            for &w in self.kids(v) {
                depth.insert(w, depth[&v] + 1);
                stack.push(w);
            }
        }
        depth
    }
}

/// Extracts a φ-core of size at most `⌈ℓ(T)/φ⌉` following the inductive
/// construction: repeatedly take a deepest vertex `v` whose subtree holds
/// more than φ terminals while each child subtree holds at most φ, emit the
/// pieces `T_vw`, carve `T_v` off, and finish with the root once at most φ
/// terminals remain. Terminals must be leaves of `tree`.
pub fn find_phi_core(
    d: &DstInstance,
    tree: &ArborescenceSolution,
    phi: usize,
) -> Result<PhiCore, DstError> {
    if phi == 0 {
        return Err(DstError::BadPhi);
    }
    let t = Rooted::new(d, tree)?;
    if t.terminal.is_empty() {
        return Err(DstError::NoTerminals);
    }
    let depth = t.depths();
    let mut removed = BTreeSet::new();
    let mut core = BTreeSet::new();
    let mut pieces = Vec::new();
    loop {
        let counts = t.counts(&removed);
        if counts[&t.root] <= phi {
            core.insert(t.root);
            if counts[&t.root] > 0 {
                let mut arcs = Vec::new();
                let mut terminals = Vec::new();
                t.subtree(t.root, &removed, &mut arcs, &mut terminals);
                arcs.sort_unstable();
                terminals.sort_unstable();
                pieces.push(CorePiece { root: t.root, arcs, terminals });
            }
            break;
        }
        let v = counts
            .iter()
            .filter(|&(&v, &c)| {
                c > phi
                    && t.kids(v).iter().filter(|w| !removed.contains(w)).all(|w| counts[w] <= phi)
            })
            .map(|(&v, _)| v)
            .max_by_key(|v| (depth[v], std::cmp::Reverse(*v)))
            .expect("a heavy subtree has a heaviest-deepest vertex");
        core.insert(v);
        for &w in t.kids(v) {
            if !removed.contains(&w) && counts[&w] > 0 {
                pieces.push(t.piece(v, w, &removed));
            }
        }
        let mut stack: Vec<usize> = t.kids(v).iter().copied().filter(|w| !removed.contains(w)).collect();
        while let Some(x) = stack.pop() {
            removed.insert(x);
            stack.extend(t.kids(x).iter().copied().filter(|w| !removed.contains(w)));
        }
    }
    Ok(PhiCore { core: core.into_iter().collect(), phi, pieces })
}

/// Enlarges a core so its pieces are arc-disjoint from the union of the
/// root-to-core paths: every vertex on those paths where a terminal-carrying
/// branch leaves joins the core, and the pieces become exactly those
/// branches. Each branch contains no core vertex, so it lies inside one
/// original piece and still holds at most φ terminals.
pub fn closed_core(
    d: &DstInstance,
    tree: &ArborescenceSolution,
    core: &PhiCore,
) -> Result<PhiCore, DstError> {
    let t = Rooted::new(d, tree)?;
    let mut spine: BTreeSet<usize> = BTreeSet::from([t.root]);
    for &c in &core.core {
        let mut v = c;
        while spine.insert(v) {
            v = t.parent_arc[&v].tail;
        }
    }
    let none = BTreeSet::new();
    let counts = t.counts(&none);
    let mut closed: BTreeSet<usize> = core.core.iter().copied().collect();
    closed.insert(t.root);
    let mut pieces = Vec::new();
    for &x in &spine {
        for &w in t.kids(x) {
            if !spine.contains(&w) && counts[&w] > 0 {
                closed.insert(x);
                pieces.push(t.piece(x, w, &none));
            }
        }
    }
    // a terminal on the spine can only be a core vertex that is also a leaf
    for &v in &spine {
        if t.terminal.contains(&v) {
            pieces.push(CorePiece { root: v, arcs: Vec::new(), terminals: vec![v] });
        }
    }
    Ok(PhiCore { core: closed.into_iter().collect(), phi: core.phi, pieces })
}

impl PhiCore {
    /// Checks the witness against the host tree: roots in the core, at most
    /// φ terminals per piece, every terminal exactly once, pieces pairwise
    /// arc-disjoint and each a connected subtree of `tree` hanging from its
    /// root.
    pub fn validate_witness(
        &self,
        d: &DstInstance,
        tree: &ArborescenceSolution,
    ) -> Result<(), WitnessViolation> {
        let tree_arcs: BTreeSet<Arc> = tree.arcs.iter().copied().collect();
        let terminals: BTreeSet<usize> =
            d.terminals().iter().copied().filter(|&t| tree.contains_vertex(t)).collect();
        let mut seen_terms = BTreeSet::new();
        let mut seen_arcs = BTreeSet::new();
        for (i, p) in self.pieces.iter().enumerate() {
            if self.core.binary_search(&p.root).is_err() {
                return Err(WitnessViolation::RootOutsideCore { piece: i });
            }
            if p.terminals.len() > self.phi {
                return Err(WitnessViolation::TooManyTerminals { piece: i, count: p.terminals.len() });
            }
            let mut reached = BTreeSet::from([p.root]);
            let mut pending: Vec<Arc> = p.arcs.clone();
            while !pending.is_empty() {
                let before = pending.len();
                pending.retain(|a| {
                    if reached.contains(&a.tail) && !reached.contains(&a.head) {
                        reached.insert(a.head);
                        false
                    } else {
                        true
                    }
                });
                if pending.len() == before {
                    return Err(WitnessViolation::NotASubtree { piece: i });
                }
            }
            for a in &p.arcs {
                if !tree_arcs.contains(a) {
                    return Err(WitnessViolation::NotASubtree { piece: i });
                }
                if !seen_arcs.insert(*a) {
                    return Err(WitnessViolation::SharedArc { tail: a.tail, head: a.head });
                }
            }
            for &term in &p.terminals {
                if !reached.contains(&term) || !terminals.contains(&term) {
                    return Err(WitnessViolation::NotASubtree { piece: i });
                }
                if !seen_terms.insert(term) {
                    return Err(WitnessViolation::TerminalCoveredTwice { terminal: term });
                }
            }
            // terminals reached by the piece but not listed would be double-counted elsewhere
            if let Some(&term) = reached.iter().find(|v| terminals.contains(v) && !p.terminals.contains(v)) {
                return Err(WitnessViolation::TerminalCoveredTwice { terminal: term });
            }
        }
        if let Some(&term) = terminals.iter().find(|t| !seen_terms.contains(t)) {
            return Err(WitnessViolation::TerminalMissing { terminal: term });
        }
        Ok(())
    }

    /// `|C| ≤ ⌈ℓ/φ⌉` for `ℓ` terminals.
    pub fn check_size(&self, terminal_count: usize) -> Result<(), WitnessViolation> {
        let bound = terminal_count.div_ceil(self.phi);
        if self.core.len() > bound {
            return Err(WitnessViolation::CoreTooLarge { size: self.core.len(), bound });
        }
        Ok(())
    }
}
