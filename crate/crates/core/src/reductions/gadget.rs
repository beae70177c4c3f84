use crate::instances::{CoverSolution, LabelCoverInstance, Labeling, SetCoverInstance, WeightedSet};

use super::partition::PartitionSystem;
use super::ReductionError;

/// Id scheme of the gadget: element `(b, x)` is `b·u + x`, set `S_{a,σ}` is
/// `a·|Σ_A| + σ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GadgetLayout {
    pub a_count: usize,
    pub b_count: usize,
    pub sigma_a: usize,
    pub u: usize,
}

impl GadgetLayout {
    pub fn element(&self, b: usize, x: usize) -> usize {
        b * self.u + x
    }
    pub fn set(&self, a: usize, sigma: usize) -> usize {
        a * self.sigma_a + sigma
    }
    pub fn set_label(&self, set: usize) -> (usize, usize) {
        (set / self.sigma_a, set % self.sigma_a)
    }
}

/// Elements `B × U`; one unit-cost set `S_{a,σ}` per A-vertex and label,
/// the union over edges `e = (a, b)` of `{b} × P_{π_e(σ)}[i]` where `e` is
/// the `i`-th edge into `b`. Built unchecked: a B-vertex whose copies
/// nobody can cover is a property of the input, not an error.
pub fn lc_to_set_cover(
    lc: &LabelCoverInstance,
    ps: &PartitionSystem,
) -> Result<(SetCoverInstance, GadgetLayout), ReductionError> {
    if ps.m() != lc.sigma_b() {
        return Err(ReductionError::ParameterMismatch(format!(
            "{} partitions for {} B-labels",
            ps.m(),
            lc.sigma_b()
        )));
    }
    if let Some(b) = (0..lc.b_count()).find(|&b| lc.incoming(b).len() != ps.d) {
        return Err(ReductionError::ParameterMismatch(format!(
            "B-vertex {b} has degree {} but the partitions have {} parts",
            lc.incoming(b).len(),
            ps.d
        )));
    }
    let layout = GadgetLayout { a_count: lc.a_count(), b_count: lc.b_count(), sigma_a: lc.sigma_a(), u: ps.u };
    let parts: Vec<Vec<Vec<usize>>> =
        (0..ps.m()).map(|i| (0..ps.d).map(|j| ps.part(i, j)).collect()).collect();
    let mut sets = Vec::with_capacity(lc.a_count() * lc.sigma_a());
    for a in 0..lc.a_count() {
        for sigma in 0..lc.sigma_a() {
            let mut members: Vec<usize> = lc
                .outgoing(a)
                .iter()
                .flat_map(|&e| {
                    let edge = &lc.edges()[e];
                    parts[edge.projection[sigma]][edge.index].iter().map(move |&x| layout.element(edge.b, x))
                })
                .collect();
            members.sort_unstable();
            members.dedup();
            sets.push(WeightedSet { cost: 1, members });
        }
    }
    Ok((SetCoverInstance::from_parts_unchecked(lc.b_count() * ps.u, sets, 1), layout))
}

/// `{S_{a, φ_A(a)}}`: the cover a labeling covering every edge induces.
pub fn planted_cover(layout: &GadgetLayout, labeling: &Labeling) -> CoverSolution {
    let sets: Vec<usize> = labeling.phi_a.iter().enumerate().map(|(a, &s)| layout.set(a, s)).collect();
    CoverSolution { cost: sets.len() as i64, sets }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{gen_lc_planted, LcShape};
    use crate::reductions::partition::build_partition_system;

    #[test]
    fn sizes_follow_the_formulas() {
        let shape = LcShape { a_count: 2, b_count: 2, sigma_a: 3, sigma_b: 2, b_degree: 2 };
        let (lc, _) = gen_lc_planted(3, shape).unwrap();
        let ps = build_partition_system(8, 2, 2, 1).unwrap();
        let (sc, layout) = lc_to_set_cover(&lc, &ps).unwrap();
        assert_eq!(sc.universe_size(), 16);
        assert_eq!(sc.set_count(), 6);
        assert_eq!(layout.set_label(layout.set(1, 2)), (1, 2));
    }

    #[test]
    fn planted_labeling_gives_a_cover() {
        let shape = LcShape { a_count: 3, b_count: 3, sigma_a: 3, sigma_b: 2, b_degree: 2 };
        let (lc, l) = gen_lc_planted(8, shape).unwrap();
        let ps = build_partition_system(6, 2, 2, 4).unwrap();
        let (sc, layout) = lc_to_set_cover(&lc, &ps).unwrap();
        let cover = planted_cover(&layout, &l);
        cover.verify(&sc).unwrap();
        assert_eq!(cover.cost, 3);
    }

    #[test]
    fn mismatches_are_rejected() {
        let shape = LcShape { a_count: 2, b_count: 2, sigma_a: 3, sigma_b: 2, b_degree: 2 };
        let (lc, _) = gen_lc_planted(3, shape).unwrap();
        let wrong_m = build_partition_system(8, 3, 2, 1).unwrap();
        assert!(matches!(lc_to_set_cover(&lc, &wrong_m), Err(ReductionError::ParameterMismatch(_))));
        let wrong_d = build_partition_system(9, 2, 3, 1).unwrap();
        assert!(matches!(lc_to_set_cover(&lc, &wrong_d), Err(ReductionError::ParameterMismatch(_))));
    }
}
