use proptest::prelude::*;

use dstcover::dst_core::{closed_core, core_identity, dst_approx, find_phi_core, CoreCap, DstApproxOptions};
use dstcover::exact::{brute_force_dst, brute_force_set_cover, dreyfus_wagner_directed};
use dstcover::formats::{emit_dst, emit_lc, emit_sc, parse_dst, parse_lc, parse_sc};
use dstcover::generate::{gen_dst, gen_lc, gen_lc_planted, gen_sc, LcShape};
use dstcover::greedy::{chvatal_bound, greedy_set_cover};
use dstcover::instances::{leafify, leafify_solution, set_cover_as_dst, unleafify_solution};
use dstcover::rational::Rational;
use dstcover::reductions::{best_labeling, measure_agreement_soundness, SoundnessMode, DEFAULT_ASSIGNMENT_BUDGET};

fn small_dst() -> impl Strategy<Value = dstcover::DstInstance> {
    (any::<u64>(), 2usize..=9).prop_flat_map(|(seed, n)| {
        (Just(seed), Just(n), 1..n, 0..=(20 - (n - 1)))
            .prop_map(|(seed, n, t, extra)| gen_dst(seed, n, extra, t.min(5), 9).unwrap())
    })
}

fn small_lc() -> impl Strategy<Value = dstcover::LabelCoverInstance> {
    (any::<u64>(), 1usize..=3, 1usize..=3, 1usize..=3, 1usize..=3, 1usize..=3)
        .prop_filter_map("bi-regular shape", |(seed, a, b, sa, sb, deg)| {
            let shape = LcShape { a_count: a, b_count: b, sigma_a: sa, sigma_b: sb, b_degree: deg };
            gen_lc(seed, shape).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn greedy_within_chvatal_bound(seed: u64, n in 1usize..=12, m in 1usize..=10) {
        let sc = gen_sc(seed, n, m, 9).unwrap();
        let (cover, trace) = greedy_set_cover(&sc).unwrap();
        cover.verify(&sc).unwrap();
        let opt = brute_force_set_cover(&sc).unwrap();
        prop_assert!(Rational::from_integer(cover.cost) <= chvatal_bound(sc.max_set_size() as u64) * Rational::from_integer(opt.cost));
        prop_assert_eq!(trace.cost, sc.cost_value(cover.cost));
    }

    #[test]
    fn dreyfus_wagner_matches_brute_force(d in small_dst()) {
        let dw = dreyfus_wagner_directed(&d, d.root(), d.terminals()).unwrap();
        dw.verify(&d, d.terminals()).unwrap();
        prop_assert_eq!(dw.cost, brute_force_dst(&d).unwrap().cost);
    }

    #[test]
    fn leafify_is_idempotent_and_keeps_the_optimum(d in small_dst()) {
        let leafy = leafify(&d);
        prop_assert!(leafy.is_leafified());
        prop_assert_eq!(leafify(&leafy), leafy.clone());
        let opt = brute_force_dst(&d).unwrap();
        let lifted = leafify_solution(&d, &leafy, &opt);
        lifted.verify(&leafy, leafy.terminals()).unwrap();
        prop_assert_eq!(lifted.cost, opt.cost);
        prop_assert_eq!(unleafify_solution(&d, &lifted), opt);
    }

    #[test]
    fn phi_core_witness_is_valid(d in small_dst(), phi in 1usize..=3) {
        let leafy = leafify(&d);
        let tree = leafify_solution(&d, &leafy, &brute_force_dst(&d).unwrap());
        let core = find_phi_core(&leafy, &tree, phi).unwrap();
        prop_assert!(core.validate_witness(&leafy, &tree).is_ok());
        prop_assert!(core.check_size(leafy.terminals().len()).is_ok());
        let closed = closed_core(&leafy, &tree, &core).unwrap();
        prop_assert!(closed.validate_witness(&leafy, &tree).is_ok());
        prop_assert!(core.core.iter().all(|v| closed.core.contains(v)));
    }

    #[test]
    fn closed_core_identity_is_exact(d in small_dst(), phi in 1usize..=3) {
        let opt = brute_force_dst(&d).unwrap();
        let leafy = leafify(&d);
        let tree = leafify_solution(&d, &leafy, &opt);
        let closed = closed_core(&leafy, &tree, &find_phi_core(&leafy, &tree, phi).unwrap()).unwrap();
        let id = core_identity(&d, &opt, &closed.core, phi).unwrap();
        prop_assert!(id.holds(), "{:?}", id);
    }

    #[test]
    fn dst_approx_is_valid_and_within_bound(d in small_dst()) {
        let out = dst_approx(&d, &DstApproxOptions::new(Rational::new(1, 2))).unwrap();
        out.solution.verify(&d, d.terminals()).unwrap();
        let opt = brute_force_dst(&d).unwrap();
        prop_assert!(Rational::from_integer(out.solution.cost) <= out.ratio_bound * Rational::from_integer(opt.cost));
        prop_assert!(out.solution.cost >= opt.cost);
    }

    #[test]
    fn larger_core_cap_never_costs_more(d in small_dst(), phi in 1usize..=3) {
        let run = |cap| {
            let opts = DstApproxOptions { core_cap: CoreCap::Fixed(cap), phi: Some(phi), ..DstApproxOptions::new(Rational::new(1, 2)) };
            dst_approx(&d, &opts).unwrap().solution.cost
        };
        let costs: Vec<i64> = (1..=3).map(run).collect();
        prop_assert!(costs.windows(2).all(|w| w[1] <= w[0]), "{:?}", costs);
    }

    #[test]
    fn set_cover_encoding_keeps_size_and_optimum(seed: u64, n in 1usize..=8, m in 1usize..=5) {
        let sc = gen_sc(seed, n, m, 9).unwrap();
        let (d, layout) = set_cover_as_dst(&sc);
        prop_assert_eq!(d.vertex_count(), 1 + m + n);
        prop_assert_eq!(layout.root(), d.root());
        let via_dst = dstcover::exact::brute_force_dst_with_budget(&d, 64).unwrap();
        prop_assert_eq!(via_dst.cost, brute_force_set_cover(&sc).unwrap().cost);
    }

    #[test]
    fn set_cover_format_round_trips(seed: u64, n in 0usize..=12, m in 1usize..=8) {
        let sc = gen_sc(seed, n, m, 9).unwrap();
        let text = emit_sc(&sc);
        let back = parse_sc(&text).unwrap();
        prop_assert_eq!(&back, &sc);
        prop_assert_eq!(emit_sc(&back), text);
    }

    #[test]
    fn dst_format_round_trips(d in small_dst()) {
        let text = emit_dst(&d);
        let back = parse_dst(&text).unwrap();
        prop_assert_eq!(&back, &d);
        prop_assert_eq!(emit_dst(&back), text);
    }

    #[test]
    fn lc_format_round_trips(lc in small_lc()) {
        let text = emit_lc(&lc);
        let back = parse_lc(&text).unwrap();
        prop_assert_eq!(&back, &lc);
        prop_assert_eq!(emit_lc(&back), text);
    }

    #[test]
    fn list_agreement_at_most_ell_squared_times_agreement(lc in small_lc()) {
        let mode = SoundnessMode::Exhaustive { budget: 1 << 20 };
        let one = measure_agreement_soundness(&lc, 1, mode).unwrap();
        let two = measure_agreement_soundness(&lc, 2, mode).unwrap();
        prop_assert!(two.non_disagreeing <= 4 * one.non_disagreeing);
        prop_assert!(one.non_disagreeing <= two.non_disagreeing || lc.sigma_a() == 1);
    }

    #[test]
    fn planted_games_are_fully_satisfiable(seed: u64, a in 1usize..=3, sa in 1usize..=3, sb in 1usize..=3) {
        let shape = LcShape { a_count: a, b_count: a, sigma_a: sa, sigma_b: sb, b_degree: 1 };
        let (lc, planted) = gen_lc_planted(seed, shape).unwrap();
        prop_assert_eq!(planted.covered_edges(&lc), lc.edges().len());
        prop_assert_eq!(best_labeling(&lc, DEFAULT_ASSIGNMENT_BUDGET).unwrap().fraction(), Rational::from_integer(1));
    }

    #[test]
    fn generators_are_deterministic(seed: u64) {
        prop_assert_eq!(gen_sc(seed, 8, 5, 9).unwrap(), gen_sc(seed, 8, 5, 9).unwrap());
        prop_assert_eq!(gen_dst(seed, 8, 5, 3, 9).unwrap(), gen_dst(seed, 8, 5, 3, 9).unwrap());
        let shape = LcShape { a_count: 2, b_count: 2, sigma_a: 2, sigma_b: 2, b_degree: 2 };
        prop_assert_eq!(gen_lc(seed, shape).unwrap(), gen_lc(seed, shape).unwrap());
    }
}
