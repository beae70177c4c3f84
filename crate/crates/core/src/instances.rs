//! Data model for the three problem families: weighted Set Cover, Directed
//! Steiner Tree and bipartite projection games (Label Cover).
//!
//! Every instance can be built unchecked (parsers and mutation tests need
//! that) and validated afterwards; the checked constructors run the same
//! validator and hand back its report on failure. Instances are immutable
//! once built.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{common_scale, scaled, Rational};

/// One invariant violation found by `validate`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// The cost denominator must be positive.
    NonPositiveScale,
    /// Element is contained in no set.
    UncoverableElement { element: usize },
    /// Set member id is outside `[0, N)`.
    MemberOutOfRange { set: usize, element: usize },
    /// Set member list is not strictly increasing.
    UnsortedMembers { set: usize },
    NegativeSetCost { set: usize },
    VertexOutOfRange { vertex: usize },
    SelfLoop { vertex: usize },
    ParallelArcs { tail: usize, head: usize },
    NegativeArcCost { tail: usize, head: usize },
    /// Terminal list is not strictly increasing.
    UnsortedTerminals,
    UnreachableTerminal { terminal: usize },
    EdgeEndpointOutOfRange { edge: usize },
    DuplicateEdge { a: usize, b: usize },
    ProjectionLength { edge: usize, len: usize },
    ProjectionOutOfRange { edge: usize, symbol: usize },
    /// The incoming-edge indices at `b` are not a permutation of `0..deg(b)`.
    IncomingIndex { b: usize },
    /// Declared bi-regular degrees disagree with the graph.
    DegreeMismatch { side: Side, vertex: usize, degree: usize, declared: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl Violation {
    /// Short name of the violated invariant.
    pub fn invariant(&self) -> &'static str {
        match self {
            Violation::NonPositiveScale => "cost-scale",
            Violation::UncoverableElement { .. } => "coverability",
            Violation::MemberOutOfRange { .. } => "member-range",
            Violation::UnsortedMembers { .. } => "member-order",
            Violation::NegativeSetCost { .. } | Violation::NegativeArcCost { .. } => {
                "non-negative-cost"
            }
            Violation::VertexOutOfRange { .. } => "vertex-range",
            Violation::SelfLoop { .. } => "no-self-loops",
            Violation::ParallelArcs { .. } => "simple-arcs",
            Violation::UnsortedTerminals => "terminal-order",
            Violation::UnreachableTerminal { .. } => "reachability",
            Violation::EdgeEndpointOutOfRange { .. } => "edge-range",
            Violation::DuplicateEdge { .. } => "simple-edges",
            Violation::ProjectionLength { .. } => "projection-total",
            Violation::ProjectionOutOfRange { .. } => "projection-range",
            Violation::IncomingIndex { .. } => "incoming-index",
            Violation::DegreeMismatch { .. } => "bi-regularity",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {:?}", self.invariant(), self)
    }
}

/// Outcome of `validate`: pass, or every invariant that failed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_pass(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.violations.iter().map(Violation::invariant).collect()
    }

    pub fn contains(&self, invariant: &str) -> bool {
        self.violations.iter().any(|v| v.invariant() == invariant)
    }

    fn into_result<T>(self, value: T) -> Result<T, ValidationReport> {
        if self.is_pass() {
            Ok(value)
        } else {
            Err(self)
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_pass() {
            return write!(f, "pass");
        }
        write!(f, "fail:")?;
        for v in &self.violations {
            write!(f, " [{v}]")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationReport {}

// ---------------------------------------------------------------------------
// Set Cover
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightedSet {
    /// Numerator over the instance's `cost_scale`.
    pub cost: i64,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetCoverInstance {
    universe_size: usize,
    sets: Vec<WeightedSet>,
    cost_scale: i64,
}

impl SetCoverInstance {
    pub fn new(
        universe_size: usize,
        sets: Vec<WeightedSet>,
        cost_scale: i64,
    ) -> Result<Self, ValidationReport> {
        let sc = Self::from_parts_unchecked(universe_size, sets, cost_scale);
        sc.validate().into_result(sc)
    }

    pub fn from_parts_unchecked(universe_size: usize, sets: Vec<WeightedSet>, cost_scale: i64) -> Self {
        SetCoverInstance { universe_size, sets, cost_scale }
    }

    /// Integer-cost convenience constructor; member lists are sorted first.
    pub fn with_integer_costs(
        universe_size: usize,
        sets: Vec<(i64, Vec<usize>)>,
    ) -> Result<Self, ValidationReport> {
        let sets = sets
            .into_iter()
            .map(|(cost, mut members)| {
                members.sort_unstable();
                WeightedSet { cost, members }
            })
            .collect();
        Self::new(universe_size, sets, 1)
    }

    /// Rational-cost constructor; costs are rescaled to their common denominator.
    pub fn with_rational_costs(
        universe_size: usize,
        sets: Vec<(Rational, Vec<usize>)>,
    ) -> Result<Self, ValidationReport> {
        let costs: Vec<Rational> = sets.iter().map(|(c, _)| *c).collect();
        let (nums, scale) = common_scale(&costs).ok_or(ValidationReport {
            violations: vec![Violation::NonPositiveScale],
        })?;
        let sets = sets
            .into_iter()
            .zip(nums)
            .map(|((_, mut members), cost)| {
                members.sort_unstable();
                WeightedSet { cost, members }
            })
            .collect();
        Self::new(universe_size, sets, scale)
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn sets(&self) -> &[WeightedSet] {
        &self.sets
    }

    pub fn set_count(&self) -> usize {
        self.sets.len()
    }

    pub fn cost_scale(&self) -> i64 {
        self.cost_scale
    }

    pub fn cost_value(&self, raw: i64) -> Rational {
        scaled(raw, self.cost_scale)
    }

    /// Largest set cardinality (`d_max` in the greedy ratio certificate).
    pub fn max_set_size(&self) -> usize {
        self.sets.iter().map(|s| s.members.len()).max().unwrap_or(0)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if self.cost_scale <= 0 {
            violations.push(Violation::NonPositiveScale);
        }
        let mut covered = vec![false; self.universe_size];
        for (i, set) in self.sets.iter().enumerate() {
            if set.cost < 0 {
                violations.push(Violation::NegativeSetCost { set: i });
            }
            if set.members.windows(2).any(|w| w[0] >= w[1]) {
                violations.push(Violation::UnsortedMembers { set: i });
            }
            for &e in &set.members {
                match covered.get_mut(e) {
                    Some(slot) => *slot = true,
                    None => violations.push(Violation::MemberOutOfRange { set: i, element: e }),
                }
            }
        }
        for (element, ok) in covered.iter().enumerate() {
            if !ok {
                violations.push(Violation::UncoverableElement { element });
            }
        }
        ValidationReport { violations }
    }
}

/// A chosen family of sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSolution {
    /// Chosen set indices, in selection order.
    pub sets: Vec<usize>,
    /// Numerator over the instance's `cost_scale`.
    pub cost: i64,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolutionError {
    #[error("set index {0} out of range")]
    SetOutOfRange(usize),
    #[error("element {0} is not covered")]
    Uncovered(usize),
    #[error("reported cost {reported} differs from summed cost {actual}")]
    CostMismatch { reported: i64, actual: i64 },
    #[error("arc ({0}, {1}) is not in the instance")]
    UnknownArc(usize, usize),
    #[error("vertex {0} has in-degree above one")]
    InDegree(usize),
    #[error("the root {0} has an incoming arc")]
    RootHasParent(usize),
    #[error("vertex {0} is not reachable from the root inside the solution")]
    Detached(usize),
    #[error("terminal {0} is not spanned")]
    MissingTerminal(usize),
}

impl CoverSolution {
    pub fn verify(&self, sc: &SetCoverInstance) -> Result<(), SolutionError> {
        let mut covered = vec![false; sc.universe_size()];
        let mut actual = 0i64;
        for &i in &self.sets {
            let set = sc.sets().get(i).ok_or(SolutionError::SetOutOfRange(i))?;
            actual += set.cost;
            for &e in &set.members {
                covered[e] = true;
            }
        }
        if let Some(e) = covered.iter().position(|c| !c) {
            return Err(SolutionError::Uncovered(e));
        }
        if actual != self.cost {
            return Err(SolutionError::CostMismatch { reported: self.cost, actual });
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Directed Steiner Tree
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
    /// Numerator over the instance's `cost_scale`.
    pub cost: i64,
}

impl Arc {
    pub fn new(tail: usize, head: usize, cost: i64) -> Self {
        Arc { tail, head, cost }
    }
}

#[derive(Debug, Clone)]
pub struct DstInstance {
    vertex_count: usize,
    arcs: Vec<Arc>,
    root: usize,
    terminals: Vec<usize>,
    cost_scale: i64,
    out_arcs: Vec<Vec<usize>>,
    in_arcs: Vec<Vec<usize>>,
    lookup: HashMap<(usize, usize), usize>,
}

impl PartialEq for DstInstance {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count == other.vertex_count
            && self.arcs == other.arcs
            && self.root == other.root
            && self.terminals == other.terminals
            && self.cost_scale == other.cost_scale
    }
}

impl Eq for DstInstance {}

impl DstInstance {
    /// Normalizing constructor: parallel arcs collapse to the cheapest,
    /// arcs are sorted by `(tail, head)`, terminals are sorted and deduplicated.
    /// Self-loops are kept so that validation reports them.
    pub fn new(
        vertex_count: usize,
        arcs: Vec<Arc>,
        root: usize,
        terminals: Vec<usize>,
        cost_scale: i64,
    ) -> Result<Self, ValidationReport> {
        let mut cheapest: HashMap<(usize, usize), i64> = HashMap::new();
        for a in arcs {
            cheapest
                .entry((a.tail, a.head))
                .and_modify(|c| *c = (*c).min(a.cost))
                .or_insert(a.cost);
        }
        let mut arcs: Vec<Arc> = cheapest.into_iter().map(|((t, h), c)| Arc::new(t, h, c)).collect();
        arcs.sort_unstable();
        let terminals: Vec<usize> = terminals.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let d = Self::from_parts_unchecked(vertex_count, arcs, root, terminals, cost_scale);
        d.validate().into_result(d)
    }

    /// Builds exactly what it is given; `validate` reports what is wrong with it.
    pub fn from_parts_unchecked(
        vertex_count: usize,
        arcs: Vec<Arc>,
        root: usize,
        terminals: Vec<usize>,
        cost_scale: i64,
    ) -> Self {
        let mut out_arcs = vec![Vec::new(); vertex_count];
        let mut in_arcs = vec![Vec::new(); vertex_count];
        let mut lookup: HashMap<(usize, usize), usize> = HashMap::new();
        for (i, a) in arcs.iter().enumerate() {
            if a.tail < vertex_count && a.head < vertex_count {
                out_arcs[a.tail].push(i);
                in_arcs[a.head].push(i);
            }
            match lookup.get(&(a.tail, a.head)) {
                Some(&j) if arcs[j].cost <= a.cost => {}
                _ => {
                    lookup.insert((a.tail, a.head), i);
                }
            }
        }
        DstInstance { vertex_count, arcs, root, terminals, cost_scale, out_arcs, in_arcs, lookup }
    }

    /// Integer-cost convenience constructor.
    pub fn with_integer_costs(
        vertex_count: usize,
        arcs: &[(usize, usize, i64)],
        root: usize,
        terminals: &[usize],
    ) -> Result<Self, ValidationReport> {
        let arcs = arcs.iter().map(|&(t, h, c)| Arc::new(t, h, c)).collect();
        Self::new(vertex_count, arcs, root, terminals.to_vec(), 1)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn terminals(&self) -> &[usize] {
        &self.terminals
    }

    pub fn cost_scale(&self) -> i64 {
        self.cost_scale
    }

    pub fn cost_value(&self, raw: i64) -> Rational {
        scaled(raw, self.cost_scale)
    }

    pub fn out_arcs(&self, v: usize) -> impl Iterator<Item = &Arc> + '_ {
        self.out_arcs[v].iter().map(move |&i| &self.arcs[i])
    }

    pub fn in_arcs(&self, v: usize) -> impl Iterator<Item = &Arc> + '_ {
        self.in_arcs[v].iter().map(move |&i| &self.arcs[i])
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_arcs[v].len()
    }

    /// Cost of arc `(tail, head)` (the cheapest one, if parallel copies exist).
    pub fn arc_cost(&self, tail: usize, head: usize) -> Option<i64> {
        self.lookup.get(&(tail, head)).map(|&i| self.arcs[i].cost)
    }

    pub fn is_terminal(&self, v: usize) -> bool {
        self.terminals.binary_search(&v).is_ok()
    }

    /// Every terminal has out-degree zero.
    pub fn is_leafified(&self) -> bool {
        self.terminals.iter().all(|&t| self.out_degree(t) == 0)
    }

    /// `R(v)`: membership vector of vertices reachable from `v` (including `v`).
    pub fn reachable_from(&self, v: usize) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count];
        let mut queue = VecDeque::from([v]);
        seen[v] = true;
        while let Some(x) = queue.pop_front() {
            for a in self.out_arcs(x) {
                if !seen[a.head] {
                    seen[a.head] = true;
                    queue.push_back(a.head);
                }
            }
        }
        seen
    }

    pub fn validate(&self) -> ValidationReport {
        let n = self.vertex_count;
        let mut violations = Vec::new();
        if self.cost_scale <= 0 {
            violations.push(Violation::NonPositiveScale);
        }
        let mut structurally_sound = true;
        if self.root >= n {
            violations.push(Violation::VertexOutOfRange { vertex: self.root });
            structurally_sound = false;
        }
        let mut seen_pairs: HashMap<(usize, usize), usize> = HashMap::new();
        for a in &self.arcs {
            for v in [a.tail, a.head] {
                if v >= n {
                    violations.push(Violation::VertexOutOfRange { vertex: v });
                    structurally_sound = false;
                }
            }
            if a.tail == a.head {
                violations.push(Violation::SelfLoop { vertex: a.tail });
            }
            if a.cost < 0 {
                violations.push(Violation::NegativeArcCost { tail: a.tail, head: a.head });
            }
            let count = seen_pairs.entry((a.tail, a.head)).or_insert(0);
            *count += 1;
            if *count == 2 {
                violations.push(Violation::ParallelArcs { tail: a.tail, head: a.head });
            }
        }
        if self.terminals.windows(2).any(|w| w[0] >= w[1]) {
            violations.push(Violation::UnsortedTerminals);
        }
        for &t in &self.terminals {
            if t >= n {
                violations.push(Violation::VertexOutOfRange { vertex: t });
                structurally_sound = false;
            }
        }
        if structurally_sound {
            let reach = self.reachable_from(self.root);
            for &t in &self.terminals {
                if !reach[t] {
                    violations.push(Violation::UnreachableTerminal { terminal: t });
                }
            }
        }
        ValidationReport { violations }
    }
}

/// An arborescence: a set of arcs in which every vertex has at most one
/// parent and everything hangs off `root`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArborescenceSolution {
    pub root: usize,
    /// Sorted by `(tail, head)`.
    pub arcs: Vec<Arc>,
    /// Numerator over the instance's `cost_scale`.
    pub cost: i64,
}

impl ArborescenceSolution {
    pub fn from_arcs(root: usize, mut arcs: Vec<Arc>) -> Self {
        arcs.sort_unstable();
        arcs.dedup();
        let cost = arcs.iter().map(|a| a.cost).sum();
        ArborescenceSolution { root, arcs, cost }
    }

    pub fn empty(root: usize) -> Self {
        ArborescenceSolution { root, arcs: Vec::new(), cost: 0 }
    }

    /// Vertices spanned by the tree, root first, others ascending.
    pub fn vertices(&self) -> Vec<usize> {
        let mut vs: BTreeSet<usize> = self.arcs.iter().map(|a| a.head).collect();
        vs.remove(&self.root);
        std::iter::once(self.root).chain(vs).collect()
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        v == self.root || self.arcs.iter().any(|a| a.head == v)
    }

    /// Checks the arborescence invariants against `d` and that every vertex
    /// of `required` is spanned.
    pub fn verify(&self, d: &DstInstance, required: &[usize]) -> Result<(), SolutionError> {
        let mut parent: HashMap<usize, usize> = HashMap::new();
        let mut actual = 0i64;
        for a in &self.arcs {
            match d.arc_cost(a.tail, a.head) {
                Some(c) if c == a.cost => {}
                _ => return Err(SolutionError::UnknownArc(a.tail, a.head)),
            }
            if a.head == self.root {
                return Err(SolutionError::RootHasParent(self.root));
            }
            if parent.insert(a.head, a.tail).is_some() {
                return Err(SolutionError::InDegree(a.head));
            }
            actual += a.cost;
        }
        // Walking parents from each vertex must end at the root within |arcs| steps.
        for a in &self.arcs {
            let mut v = a.head;
            let mut steps = 0;
            while v != self.root {
                match parent.get(&v) {
                    Some(&p) if steps <= self.arcs.len() => {
                        v = p;
                        steps += 1;
                    }
                    _ => return Err(SolutionError::Detached(a.head)),
                }
            }
        }
        for &t in required {
            if t != self.root && !parent.contains_key(&t) {
                return Err(SolutionError::MissingTerminal(t));
            }
        }
        if actual != self.cost {
            return Err(SolutionError::CostMismatch { reported: self.cost, actual });
        }
        Ok(())
    }
}

/// Moves the terminal role of every non-leaf terminal `t` onto a fresh leaf
/// `t'` attached by a zero-cost arc `(t, t')`. New vertices are numbered
/// from `vertex_count` upward in terminal order. Leaves the optimum unchanged.
pub fn leafify(d: &DstInstance) -> DstInstance {
    if d.is_leafified() {
        return d.clone();
    }
    let mut n = d.vertex_count();
    let mut arcs = d.arcs().to_vec();
    let mut terminals = Vec::with_capacity(d.terminals().len());
    for &t in d.terminals() {
        if d.out_degree(t) > 0 {
            arcs.push(Arc::new(t, n, 0));
            terminals.push(n);
            n += 1;
        } else {
            terminals.push(t);
        }
    }
    arcs.sort_unstable();
    terminals.sort_unstable();
    DstInstance::from_parts_unchecked(n, arcs, d.root(), terminals, d.cost_scale())
}

/// Maps a solution of `leafify(original)` back onto `original` by dropping
/// the zero-cost arcs into the added leaves.
pub fn unleafify_solution(original: &DstInstance, solution: &ArborescenceSolution) -> ArborescenceSolution {
    let n = original.vertex_count();
    let arcs = solution.arcs.iter().copied().filter(|a| a.head < n).collect();
    ArborescenceSolution::from_arcs(solution.root, arcs)
}

/// Lifts a solution of `original` to `leafify(original)` by adding the
/// zero-cost leaf arcs below the terminals it spans.
pub fn leafify_solution(
    original: &DstInstance,
    leafified: &DstInstance,
    solution: &ArborescenceSolution,
) -> ArborescenceSolution {
    let n = original.vertex_count();
    let mut arcs = solution.arcs.clone();
    for a in leafified.arcs().iter().filter(|a| a.head >= n) {
        if solution.contains_vertex(a.tail) {
            arcs.push(*a);
        }
    }
    ArborescenceSolution::from_arcs(solution.root, arcs)
}

/// Vertex numbering of [`set_cover_as_dst`]: root `0`, set `i` at `1 + i`,
/// element `e` at `1 + M + e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SetCoverLayout {
    pub set_count: usize,
    pub universe_size: usize,
}

impl SetCoverLayout {
    pub fn root(&self) -> usize {
        0
    }
    pub fn set_node(&self, set: usize) -> usize {
        1 + set
    }
    pub fn element_node(&self, element: usize) -> usize {
        1 + self.set_count + element
    }
    pub fn set_of_node(&self, v: usize) -> Option<usize> {
        (1..=self.set_count).contains(&v).then(|| v - 1)
    }
}

/// Three-level encoding: root → set node at the set's cost, set node →
/// element node at cost zero; the element nodes are the terminals.
pub fn set_cover_as_dst(sc: &SetCoverInstance) -> (DstInstance, SetCoverLayout) {
    let layout = SetCoverLayout { set_count: sc.set_count(), universe_size: sc.universe_size() };
    let mut arcs = Vec::new();
    for (i, set) in sc.sets().iter().enumerate() {
        arcs.push(Arc::new(layout.root(), layout.set_node(i), set.cost));
        for &e in &set.members {
            arcs.push(Arc::new(layout.set_node(i), layout.element_node(e), 0));
        }
    }
    arcs.sort_unstable();
    let terminals = (0..sc.universe_size()).map(|e| layout.element_node(e)).collect();
    let n = 1 + sc.set_count() + sc.universe_size();
    (
        DstInstance::from_parts_unchecked(n, arcs, layout.root(), terminals, sc.cost_scale()),
        layout,
    )
}

// ---------------------------------------------------------------------------
// Label Cover
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LcEdge {
    pub a: usize,
    pub b: usize,
    /// Position of this edge among the edges entering `b` (0-based).
    pub index: usize,
    /// Total map `Σ_A → Σ_B`.
    pub projection: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelCoverInstance {
    a_count: usize,
    b_count: usize,
    sigma_a: usize,
    sigma_b: usize,
    edges: Vec<LcEdge>,
    declared_degrees: Option<(usize, usize)>,
    b_incoming: Vec<Vec<usize>>,
    a_outgoing: Vec<Vec<usize>>,
}

impl LabelCoverInstance {
    /// Builds an instance from `(a, b, projection)` triples. Incoming-edge
    /// indices are assigned per `b` in increasing `a` order, and bi-regular
    /// degrees are recorded when the graph has them.
    pub fn new(
        a_count: usize,
        b_count: usize,
        sigma_a: usize,
        sigma_b: usize,
        edges: Vec<(usize, usize, Vec<usize>)>,
    ) -> Result<Self, ValidationReport> {
        let mut edges: Vec<LcEdge> = edges
            .into_iter()
            .map(|(a, b, projection)| LcEdge { a, b, index: 0, projection })
            .collect();
        edges.sort_by_key(|e| (e.b, e.a));
        let mut current = None;
        let mut next = 0;
        for e in &mut edges {
            if current != Some(e.b) {
                current = Some(e.b);
                next = 0;
            }
            e.index = next;
            next += 1;
        }
        edges.sort_by_key(|e| (e.a, e.b));
        let mut lc = Self::from_parts_unchecked(a_count, b_count, sigma_a, sigma_b, edges, None);
        lc.declared_degrees = lc.biregular_degrees();
        lc.validate().into_result(lc)
    }

    pub fn from_parts_unchecked(
        a_count: usize,
        b_count: usize,
        sigma_a: usize,
        sigma_b: usize,
        edges: Vec<LcEdge>,
        declared_degrees: Option<(usize, usize)>,
    ) -> Self {
        let mut b_incoming = vec![Vec::new(); b_count];
        let mut a_outgoing = vec![Vec::new(); a_count];
        for (i, e) in edges.iter().enumerate() {
            if e.b < b_count && e.a < a_count {
                b_incoming[e.b].push(i);
                a_outgoing[e.a].push(i);
            }
        }
        for list in &mut b_incoming {
            list.sort_by_key(|&i| (edges[i].index, edges[i].a));
        }
        LabelCoverInstance {
            a_count,
            b_count,
            sigma_a,
            sigma_b,
            edges,
            declared_degrees,
            b_incoming,
            a_outgoing,
        }
    }

    pub fn a_count(&self) -> usize {
        self.a_count
    }
    pub fn b_count(&self) -> usize {
        self.b_count
    }
    pub fn sigma_a(&self) -> usize {
        self.sigma_a
    }
    pub fn sigma_b(&self) -> usize {
        self.sigma_b
    }
    pub fn edges(&self) -> &[LcEdge] {
        &self.edges
    }
    pub fn declared_degrees(&self) -> Option<(usize, usize)> {
        self.declared_degrees
    }

    /// `n_G = |A| + |B| + |E|`.
    pub fn size(&self) -> usize {
        self.a_count + self.b_count + self.edges.len()
    }

    /// Edge ids entering `b`, ordered by incoming index.
    pub fn incoming(&self, b: usize) -> &[usize] {
        &self.b_incoming[b]
    }

    pub fn outgoing(&self, a: usize) -> &[usize] {
        &self.a_outgoing[a]
    }

    /// `(A-degree, B-degree)` when all vertices on each side share a degree.
    pub fn biregular_degrees(&self) -> Option<(usize, usize)> {
        let da = self.a_outgoing.first().map_or(0, Vec::len);
        let db = self.b_incoming.first().map_or(0, Vec::len);
        let regular = self.a_outgoing.iter().all(|l| l.len() == da)
            && self.b_incoming.iter().all(|l| l.len() == db);
        regular.then_some((da, db))
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let mut pairs = BTreeSet::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.a >= self.a_count || e.b >= self.b_count {
                violations.push(Violation::EdgeEndpointOutOfRange { edge: i });
            } else if !pairs.insert((e.a, e.b)) {
                violations.push(Violation::DuplicateEdge { a: e.a, b: e.b });
            }
            if e.projection.len() != self.sigma_a {
                violations.push(Violation::ProjectionLength { edge: i, len: e.projection.len() });
            }
            if let Some(&symbol) = e.projection.iter().find(|&&s| s >= self.sigma_b) {
                violations.push(Violation::ProjectionOutOfRange { edge: i, symbol });
            }
        }
        for (b, list) in self.b_incoming.iter().enumerate() {
            let mut idx: Vec<usize> = list.iter().map(|&i| self.edges[i].index).collect();
            idx.sort_unstable();
            if idx.iter().enumerate().any(|(k, &i)| k != i) {
                violations.push(Violation::IncomingIndex { b });
            }
        }
        if let Some((da, db)) = self.declared_degrees {
            for (a, list) in self.a_outgoing.iter().enumerate() {
                if list.len() != da {
                    violations.push(Violation::DegreeMismatch {
                        side: Side::A,
                        vertex: a,
                        degree: list.len(),
                        declared: da,
                    });
                }
            }
            for (b, list) in self.b_incoming.iter().enumerate() {
                if list.len() != db {
                    violations.push(Violation::DegreeMismatch {
                        side: Side::B,
                        vertex: b,
                        degree: list.len(),
                        declared: db,
                    });
                }
            }
        }
        ValidationReport { violations }
    }
}

/// A single label per vertex on each side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Labeling {
    pub phi_a: Vec<usize>,
    pub phi_b: Vec<usize>,
}

impl Labeling {
    pub fn is_valid_for(&self, lc: &LabelCoverInstance) -> bool {
        self.phi_a.len() == lc.a_count()
            && self.phi_b.len() == lc.b_count()
            && self.phi_a.iter().all(|&s| s < lc.sigma_a())
            && self.phi_b.iter().all(|&s| s < lc.sigma_b())
    }

    pub fn covered_edges(&self, lc: &LabelCoverInstance) -> usize {
        lc.edges()
            .iter()
            .filter(|e| e.projection[self.phi_a[e.a]] == self.phi_b[e.b])
            .count()
    }
}

/// A list of at most `bound` distinct labels per A-vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListLabeling {
    pub lists: Vec<Vec<usize>>,
    pub bound: usize,
}

impl ListLabeling {
    pub fn is_valid_for(&self, lc: &LabelCoverInstance) -> bool {
        self.lists.len() == lc.a_count()
            && self.lists.iter().all(|l| {
                !l.is_empty()
                    && l.len() <= self.bound
                    && l.iter().all(|&s| s < lc.sigma_a())
                    && l.iter().collect::<BTreeSet<_>>().len() == l.len()
            })
    }
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
    fn uncoverable_element_is_reported() {
        let sc = SetCoverInstance::from_parts_unchecked(
            4,
            vec![WeightedSet { cost: 1, members: vec![0, 1, 2] }],
            1,
        );
        let report = sc.validate();
        assert_eq!(report.violations, vec![Violation::UncoverableElement { element: 3 }]);
        assert_eq!(report.names(), vec!["coverability"]);
    }

    #[test]
    fn rational_costs_share_a_scale() {
        let sc = abc();
        assert_eq!(sc.cost_scale(), 2);
        assert_eq!(sc.sets()[2].cost, 5);
        assert_eq!(sc.cost_value(4), Rational::from_integer(2));
    }

    #[test]
    fn unreachable_terminal_is_reported() {
        let d = DstInstance::from_parts_unchecked(3, vec![Arc::new(0, 1, 1)], 0, vec![1, 2], 1);
        let report = d.validate();
        assert!(report.contains("reachability"));
        assert_eq!(report.violations, vec![Violation::UnreachableTerminal { terminal: 2 }]);
    }

    #[test]
    fn new_collapses_parallel_arcs() {
        let d = DstInstance::with_integer_costs(2, &[(0, 1, 5), (0, 1, 2)], 0, &[1]).unwrap();
        assert_eq!(d.arcs(), &[Arc::new(0, 1, 2)]);
        let raw = DstInstance::from_parts_unchecked(
            2,
            vec![Arc::new(0, 1, 5), Arc::new(0, 1, 2)],
            0,
            vec![1],
            1,
        );
        assert!(raw.validate().contains("simple-arcs"));
        assert_eq!(raw.arc_cost(0, 1), Some(2));
    }

    #[test]
    fn self_loop_rejected() {
        let err = DstInstance::with_integer_costs(2, &[(0, 1, 1), (1, 1, 1)], 0, &[1]).unwrap_err();
        assert_eq!(err.names(), vec!["no-self-loops"]);
    }

    #[test]
    fn leafify_moves_terminal_role() {
        // terminal 1 has two children
        let d = DstInstance::with_integer_costs(4, &[(0, 1, 1), (1, 2, 1), (1, 3, 1)], 0, &[1, 3])
            .unwrap();
        let l = leafify(&d);
        assert_eq!(l.vertex_count(), 5);
        assert_eq!(l.terminals(), &[3, 4]);
        assert_eq!(l.arc_cost(1, 4), Some(0));
        assert!(l.is_leafified());
        assert!(l.validate().is_pass());
        assert_eq!(leafify(&l), l);
    }

    #[test]
    fn leafify_identity_when_already_leaves() {
        let d = DstInstance::with_integer_costs(3, &[(0, 1, 1), (0, 2, 1)], 0, &[1, 2]).unwrap();
        assert_eq!(leafify(&d), d);
    }

    #[test]
    fn single_set_encoding_has_four_vertices() {
        let sc = SetCoverInstance::with_integer_costs(2, vec![(3, vec![0, 1])]).unwrap();
        let (d, layout) = set_cover_as_dst(&sc);
        assert_eq!(d.vertex_count(), 4);
        assert_eq!(d.terminals(), &[2, 3]);
        assert_eq!(d.arc_cost(0, layout.set_node(0)), Some(3));
        assert!(d.validate().is_pass());
    }

    #[test]
    fn encoding_vertex_count_is_one_plus_m_plus_n() {
        let sc = abc();
        let (d, _) = set_cover_as_dst(&sc);
        assert_eq!(d.vertex_count(), 1 + 3 + 4);
        assert_eq!(d.cost_scale(), 2);
    }

    #[test]
    fn solution_verification() {
        let d = DstInstance::with_integer_costs(3, &[(0, 1, 1), (1, 2, 1), (2, 1, 1)], 0, &[2])
            .unwrap();
        let good = ArborescenceSolution::from_arcs(0, vec![Arc::new(0, 1, 1), Arc::new(1, 2, 1)]);
        assert!(good.verify(&d, d.terminals()).is_ok());
        let cyclic = ArborescenceSolution::from_arcs(0, vec![Arc::new(1, 2, 1), Arc::new(2, 1, 1)]);
        assert!(cyclic.verify(&d, d.terminals()).is_err());
        let missing = ArborescenceSolution::from_arcs(0, vec![Arc::new(0, 1, 1)]);
        assert_eq!(missing.verify(&d, d.terminals()), Err(SolutionError::MissingTerminal(2)));
    }

    #[test]
    fn well_formed_biregular_lc_passes() {
        let lc = LabelCoverInstance::new(
            2,
            2,
            2,
            2,
            vec![
                (0, 0, vec![0, 1]),
                (0, 1, vec![1, 0]),
                (1, 0, vec![0, 0]),
                (1, 1, vec![1, 1]),
            ],
        )
        .unwrap();
        assert_eq!(lc.biregular_degrees(), Some((2, 2)));
        assert_eq!(lc.declared_degrees(), Some((2, 2)));
        assert!(lc.validate().is_pass());
        let idx: Vec<usize> = lc.incoming(1).iter().map(|&i| lc.edges()[i].a).collect();
        assert_eq!(idx, vec![0, 1]);
    }

    #[test]
    fn lc_projection_errors() {
        let edges = vec![LcEdge { a: 0, b: 0, index: 0, projection: vec![0, 5] }];
        let lc = LabelCoverInstance::from_parts_unchecked(1, 1, 2, 2, edges, None);
        assert_eq!(lc.validate().names(), vec!["projection-range"]);
        let edges = vec![LcEdge { a: 0, b: 0, index: 0, projection: vec![0] }];
        let lc = LabelCoverInstance::from_parts_unchecked(1, 1, 2, 2, edges, None);
        assert_eq!(lc.validate().names(), vec!["projection-total"]);
    }
}
