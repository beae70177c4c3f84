//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero when
//! any criterion fails.

use std::time::{Duration, Instant};

use dstcover::dst_core::{decomposition_audit, dst_approx, DstApproxOptions};
use dstcover::exact::{
    brute_force_dst, brute_force_dst_with_budget, brute_force_set_cover, dreyfus_wagner_directed,
};
use dstcover::generate::{gen_dst, gen_lc, gen_lc_planted, gen_sc, LcShape};
use dstcover::greedy::{chvatal_bound, greedy_set_cover};
use dstcover::instances::set_cover_as_dst;
use dstcover::rational::{to_f64, Rational};
use dstcover::reductions::{
    build_partition_system, measure_agreement_soundness, run_pipeline, verify_partition_system, PartitionSystem,
    PipelineConfig, SoundnessMode,
};

/// Arc budget for the brute-force DST oracle on encoded set-cover instances
/// (`M + Σ|S_i| ≤ 6 + 60`).
const ENCODED_ARC_BUDGET: usize = 80;
/// Assignment budget for the exhaustive list-agreement measurements.
const LIST_BUDGET: u128 = 1 << 22;

struct Outcome {
    passed: bool,
    detail: String,
}

fn run(id: u32, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = f();
    let elapsed = start.elapsed();
    let in_time = elapsed <= limit;
    let passed = outcome.passed && in_time;
    let timing = if in_time {
        format!("{:.2}s of {}s", elapsed.as_secs_f64(), limit.as_secs())
    } else {
        format!("{:.2}s exceeds {}s", elapsed.as_secs_f64(), limit.as_secs())
    };
    println!("{} [{id:>2}] {name}: {} ({timing})", if passed { "PASS" } else { "FAIL" }, outcome.detail);
    passed
}

fn pick(seed: u64, salt: u64, lo: usize, hi: usize) -> usize {
    let x = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(salt.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    let x = (x ^ (x >> 31)).wrapping_mul(0x94D0_49BB_1331_11EB);
    lo + (x ^ (x >> 29)) as usize % (hi - lo + 1)
}

fn greedy_ratio() -> Outcome {
    let mut violations = 0;
    let mut worst = 0.0f64;
    for seed in 0..200u64 {
        let sc = gen_sc(seed, pick(seed, 1, 1, 16), pick(seed, 2, 1, 12), 9).expect("generator");
        let (greedy, _) = greedy_set_cover(&sc).expect("coverable");
        let opt = brute_force_set_cover(&sc).expect("within budget");
        let bound = chvatal_bound(sc.max_set_size() as u64);
        if Rational::from_integer(greedy.cost) > bound * Rational::from_integer(opt.cost) {
            violations += 1;
        }
        worst = worst.max(greedy.cost as f64 / opt.cost as f64);
    }
    Outcome { passed: violations == 0, detail: format!("200 instances, {violations} violations, worst ratio {worst:.3}") }
}

fn dp_equivalence() -> Outcome {
    let mut mismatches = 0;
    for seed in 0..100u64 {
        let n = pick(seed, 1, 2, 8);
        let terminals = pick(seed, 2, 1, 4.min(n - 1));
        let extra = pick(seed, 3, 0, 20 - (n - 1));
        let d = gen_dst(seed, n, extra, terminals, 9).expect("generator");
        let dw = dreyfus_wagner_directed(&d, d.root(), d.terminals()).expect("reachable");
        let bf = brute_force_dst(&d).expect("within budget");
        dw.verify(&d, d.terminals()).expect("valid tree");
        if dw.cost != bf.cost {
            mismatches += 1;
        }
    }
    Outcome { passed: mismatches == 0, detail: format!("100 instances, {mismatches} cost mismatches") }
}

fn main_ratio() -> Outcome {
    let mut violations = Vec::new();
    let mut worst = 0.0f64;
    for seed in 0..50u64 {
        let n = pick(seed, 1, 3, 12);
        let terminals = pick(seed, 2, 1, 6.min(n - 1));
        let extra = pick(seed, 3, 0, 20 - (n - 1));
        let d = gen_dst(1000 + seed, n, extra, terminals, 9).expect("generator");
        let out = dst_approx(&d, &DstApproxOptions::new(Rational::new(1, 2))).expect("approximation");
        let opt = brute_force_dst(&d).expect("within budget");
        let phi = (terminals as f64).sqrt().ceil() as usize;
        let bound = chvatal_bound(phi as u64);
        let valid = out.solution.verify(&d, d.terminals()).is_ok();
        if !valid || out.phi != phi || Rational::from_integer(out.solution.cost) > bound * Rational::from_integer(opt.cost) {
            violations.push(seed);
        }
        if opt.cost > 0 {
            worst = worst.max(out.solution.cost as f64 / opt.cost as f64);
        }
    }
    Outcome {
        passed: violations.is_empty(),
        detail: format!("50 instances, violations at seeds {violations:?}, worst ratio {worst:.3}"),
    }
}

fn decomposition_identity() -> Outcome {
    let (mut held, mut extracted_held, mut witness_errors) = (0, 0, 0);
    for seed in 0..25u64 {
        let n = pick(seed, 1, 3, 10);
        let terminals = pick(seed, 2, 1, 5.min(n - 1));
        let extra = pick(seed, 3, 0, 20 - (n - 1));
        let d = gen_dst(2000 + seed, n, extra, terminals, 9).expect("generator");
        let t_opt = brute_force_dst(&d).expect("within budget");
        let report = decomposition_audit(&d, &t_opt, 2).expect("audit");
        held += usize::from(report.holds());
        extracted_held += usize::from(report.extracted.holds());
        witness_errors += usize::from(report.extracted.witness.is_some() || report.size_bound.is_some());
    }
    Outcome {
        passed: held == 25,
        detail: format!(
            "closed core: identity exact on {held}/25; extracted core: {extracted_held}/25, {witness_errors} witness errors"
        ),
    }
}

fn encoding_fidelity() -> Outcome {
    let mut mismatches = 0;
    for seed in 0..100u64 {
        let sc = gen_sc(3000 + seed, pick(seed, 1, 1, 10), pick(seed, 2, 1, 6), 9).expect("generator");
        let (d, _) = set_cover_as_dst(&sc);
        let via_dst = brute_force_dst_with_budget(&d, ENCODED_ARC_BUDGET).expect("within budget");
        let direct = brute_force_set_cover(&sc).expect("within budget");
        if via_dst.cost != direct.cost || d.cost_scale() != sc.cost_scale() {
            mismatches += 1;
        }
    }
    Outcome { passed: mismatches == 0, detail: format!("100 instances, {mismatches} mismatches") }
}

/// Planted games at `δ = 1/4` (`D = 4`) and `δ = 1/3` (`D = 3`).
fn planted_case(seed: u64) -> (LcShape, Rational, PipelineConfig) {
    let (shape, delta) = if seed % 2 == 0 {
        (LcShape { a_count: 4, b_count: pick(seed, 1, 1, 2), sigma_a: pick(seed, 2, 2, 3), sigma_b: 2, b_degree: 4 }, Rational::new(1, 4))
    } else {
        (LcShape { a_count: 3, b_count: pick(seed, 1, 1, 3), sigma_a: pick(seed, 2, 2, 3), sigma_b: pick(seed, 3, 2, 3), b_degree: 3 }, Rational::new(1, 3))
    };
    let config = PipelineConfig {
        u_override: Some(pick(seed, 4, 4, 32) as u64),
        v_count: Some(pick(seed, 5, 2, 3)),
        ..PipelineConfig::default()
    };
    (shape, delta, config)
}

fn reduction_completeness() -> Outcome {
    let mut failures = Vec::new();
    for seed in 0..20u64 {
        let (shape, delta, config) = planted_case(seed);
        let (lc, planted) = gen_lc_planted(4000 + seed, shape).expect("generator");
        let out = run_pipeline(&lc, Rational::new(1, 2), delta, seed, &config, Some(&planted)).expect("pipeline");
        let a_prime = out.g_prime.a_count() as i64;
        let ok = out.params.u <= 32
            && out.audit.completeness.is_some()
            && out.audit.planted_cover.as_ref().is_some_and(|c| c.cost == a_prime && c.verify(&out.sc).is_ok())
            && out.audit.optimum.as_ref().is_some_and(|opt| opt.cost <= a_prime);
        if !ok {
            failures.push(seed);
        }
    }
    Outcome { passed: failures.is_empty(), detail: format!("20 planted games, failures at seeds {failures:?}") }
}

fn soundness_contrapositive() -> Outcome {
    let (mut audited, mut uncoverable, mut fired, mut counterexamples) = (0, 0, 0, Vec::new());
    for seed in 0..20u64 {
        // δ = 1/5: α = 2/5, D = 5, so 1 − 2α > 0 and the threshold is positive
        let shape = LcShape { a_count: 5, b_count: 1, sigma_a: pick(seed, 1, 2, 4), sigma_b: pick(seed, 2, 2, 3), b_degree: 5 };
        let lc = gen_lc(5000 + seed, shape).expect("generator");
        let v_count = pick(seed, 3, 2, 4);
        let u = pick(seed, 4, 5, 24 / v_count) as u64;
        let config = PipelineConfig {
            u_override: Some(u),
            v_count: Some(v_count),
            assignment_budget: LIST_BUDGET,
            ..PipelineConfig::default()
        };
        let out = run_pipeline(&lc, Rational::new(1, 2), Rational::new(1, 5), seed, &config, None).expect("pipeline");
        if out.audit.element_count > 24 || out.audit.set_count > 20 {
            continue;
        }
        let Some(sound) = &out.audit.soundness else { continue };
        // an element in no set leaves no cover at all, so the antecedent fails
        let min_cover = match &out.audit.optimum {
            Some(opt) => opt.cost as f64,
            None if out.sc.validate().contains("coverability") => f64::INFINITY,
            None => continue,
        };
        if !sound.exhaustive {
            continue;
        }
        audited += 1;
        uncoverable += usize::from(min_cover.is_infinite());
        if min_cover <= out.audit.soundness_threshold {
            fired += 1;
            if sound.fraction() <= out.params.alpha {
                counterexamples.push(seed);
            }
        }
    }
    Outcome {
        passed: counterexamples.is_empty() && audited == 20,
        detail: format!(
            "{audited}/20 outputs audited ({uncoverable} uncoverable), antecedent held on {fired}, counterexamples at seeds {counterexamples:?}"
        ),
    }
}

fn list_agreement_inequality() -> Outcome {
    let mut violations = Vec::new();
    let mut done = 0;
    let mut seed = 0u64;
    while done < 50 {
        seed += 1;
        let a = pick(seed, 1, 1, 3);
        let b = pick(seed, 2, 1, 3);
        let degree = pick(seed, 3, 1, a);
        if (b * degree) % a != 0 {
            continue;
        }
        let shape = LcShape { a_count: a, b_count: b, sigma_a: pick(seed, 4, 1, 3), sigma_b: pick(seed, 5, 1, 3), b_degree: degree };
        let lc = gen_lc(6000 + seed, shape).expect("generator");
        let one = measure_agreement_soundness(&lc, 1, SoundnessMode::Exhaustive { budget: LIST_BUDGET }).expect("budget");
        let two = measure_agreement_soundness(&lc, 2, SoundnessMode::Exhaustive { budget: LIST_BUDGET }).expect("budget");
        if two.non_disagreeing > 4 * one.non_disagreeing {
            violations.push(seed);
        }
        done += 1;
    }
    Outcome { passed: violations.is_empty(), detail: format!("50 games, violations at seeds {violations:?}") }
}

/// Independent check: every choice of "no part or part j" per partition.
fn has_small_cover(ps: &PartitionSystem, ell: usize) -> bool {
    let choices = (ps.d + 1).pow(ps.m() as u32);
    (0..choices).any(|mut code| {
        let mut covered = vec![false; ps.u];
        let mut used = 0;
        for i in 0..ps.m() {
            let c = code % (ps.d + 1);
            code /= ps.d + 1;
            if c > 0 {
                used += 1;
                for x in 0..ps.u {
                    covered[x] |= ps.partitions[i][x] == c - 1;
                }
            }
        }
        used <= ell && covered.iter().all(|&c| c)
    })
}

fn witness_is_correct(ps: &PartitionSystem, ell: usize, witness: &[(usize, usize)]) -> bool {
    let mut partitions: Vec<usize> = witness.iter().map(|&(i, _)| i).collect();
    partitions.sort_unstable();
    partitions.dedup();
    partitions.len() == witness.len()
        && witness.len() <= ell
        && (0..ps.u).all(|x| witness.iter().any(|&(i, j)| ps.partitions[i][x] == j))
}

fn partition_verifier() -> Outcome {
    let (u, d, m, ell) = (16, 2, 4, 3);
    let mut disagreements = Vec::new();
    let mut rejected = 0;
    for seed in 0..30u64 {
        let ps = build_partition_system(u, m, d, 7000 + seed).expect("parameters");
        let check = verify_partition_system(&ps, ell, 1 << 20).expect("budget");
        let independent = has_small_cover(&ps, ell);
        let witness_ok = check.witness.as_ref().is_none_or(|w| witness_is_correct(&ps, ell, w));
        if check.passed() == independent || !witness_ok {
            disagreements.push(seed);
        }
        rejected += usize::from(!check.passed());
    }
    // partitions 0 and 1 split at 8; the left half of one and the right
    // half of the other cover the universe
    let halves: Vec<usize> = (0..u).map(|x| usize::from(x >= 8)).collect();
    let alternating: Vec<usize> = (0..u).map(|x| x % 2).collect();
    let crafted = PartitionSystem {
        u,
        d,
        seed: 0,
        partitions: vec![halves.clone(), halves, alternating.clone(), alternating],
    };
    let check = verify_partition_system(&crafted, ell, 1 << 20).expect("budget");
    let crafted_ok = !check.passed()
        && has_small_cover(&crafted, ell)
        && check.witness.as_ref().is_some_and(|w| witness_is_correct(&crafted, ell, w));
    Outcome {
        passed: disagreements.is_empty() && crafted_ok,
        detail: format!(
            "30 random systems ({rejected} rejected), disagreements at seeds {disagreements:?}; crafted system {} with witness {:?}",
            if crafted_ok { "rejected" } else { "NOT rejected" },
            check.witness
        ),
    }
}

fn scaling_smoke() -> Outcome {
    let d = gen_dst(8000, 30, 60, 16, 9).expect("generator");
    let start = Instant::now();
    let out = dst_approx(&d, &DstApproxOptions::new(Rational::new(1, 2)));
    let elapsed = start.elapsed().as_secs_f64();
    match out {
        Ok(out) => Outcome {
            passed: out.solution.verify(&d, d.terminals()).is_ok(),
            detail: format!(
                "N = 16, n = 30, φ = {}, core cap {}, {} candidates, cost {} in {elapsed:.2}s (bound 1 + ln φ = {:.4})",
                out.phi,
                out.core_cap,
                out.candidates,
                out.solution.cost,
                to_f64(&out.ratio_bound)
            ),
        },
        Err(e) => Outcome { passed: false, detail: format!("failed: {e}") },
    }
}

fn main() {
    let secs = Duration::from_secs;
    let results = [
        run(1, "greedy ratio ≤ 1 + ln d_max", secs(10), greedy_ratio),
        run(2, "Dreyfus–Wagner equals brute force", secs(30), dp_equivalence),
        run(3, "dst_approx(γ = 1/2) within 1 + ln φ of OPT", secs(300), main_ratio),
        run(4, "decomposition identity at φ = 2", secs(120), decomposition_identity),
        run(5, "set cover as DST keeps OPT", secs(60), encoding_fidelity),
        run(6, "reduction completeness", secs(120), reduction_completeness),
        run(7, "soundness contrapositive", secs(300), soundness_contrapositive),
        run(8, "list agreement ≤ ℓ² · agreement (ℓ = 2)", secs(60), list_agreement_inequality),
        run(9, "partition-system verifier", secs(60), partition_verifier),
        run(10, "scaling smoke test", secs(60), scaling_smoke),
    ];
    let failed = results.iter().filter(|&&p| !p).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
