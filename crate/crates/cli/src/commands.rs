use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::{json, Value};

use dstcover::dst_core::{decomposition_audit, dst_approx, CoreCap, CoreIdentity, DstApproxOptions};
use dstcover::exact::{brute_force_dst_with_budget, brute_force_set_cover_with_budget, dreyfus_wagner_directed};
use dstcover::formats::{emit_dst, emit_json, emit_lc, emit_sc, parse_dst, parse_json, parse_lc, parse_sc};
use dstcover::generate::{gen_dst, gen_lc, gen_lc_planted, gen_sc, LcShape};
use dstcover::greedy::{chvatal_bound, greedy_set_cover};
use dstcover::instances::{ArborescenceSolution, DstInstance, Labeling, SetCoverInstance};
use dstcover::rational::{format_rational, Rational};
use dstcover::reductions::{run_pipeline, verify_partition_system, PartitionSystem, PipelineConfig};

use crate::error::CliError;
use crate::report::{digest, Provenance, RunReport};

pub struct Input {
    pub text: String,
    pub digest: String,
}

pub fn read_input(path: &Path) -> Result<Input, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let digest = digest(&bytes);
    let text = String::from_utf8(bytes).map_err(|_| CliError::Validation(format!("{} is not UTF-8", path.display())))?;
    Ok(Input { text, digest })
}

fn load_sc(path: &Path, report: &mut RunReport) -> Result<SetCoverInstance, CliError> {
    let input = read_input(path)?;
    report.instance_digest = Some(input.digest);
    let sc = parse_sc(&input.text)?;
    let v = sc.validate();
    if !v.is_pass() {
        return Err(v.into());
    }
    report.input("N", sc.universe_size()).input("M", sc.set_count());
    Ok(sc)
}

fn load_dst(path: &Path, report: &mut RunReport) -> Result<DstInstance, CliError> {
    let input = read_input(path)?;
    report.instance_digest = Some(input.digest);
    let d = parse_dst(&input.text)?;
    let v = d.validate();
    if !v.is_pass() {
        return Err(v.into());
    }
    report.input("n", d.vertex_count()).input("arcs", d.arcs().len()).input("terminals", d.terminals().len());
    Ok(d)
}

fn rational(value: Rational) -> Value {
    Value::String(format_rational(&value))
}

fn tree_fields(report: &mut RunReport, d: &DstInstance, tree: &ArborescenceSolution, provenance: Provenance) {
    let arcs: Vec<Value> = tree.arcs.iter().map(|a| json!([a.tail, a.head])).collect();
    report.field("cost", rational(d.cost_value(tree.cost)), provenance).field("arcs", arcs, provenance);
}

/// `cost ≤ bound · opt`, exactly.
fn within(cost: i64, bound: Rational, opt: i64) -> bool {
    Rational::from_integer(cost) <= bound * Rational::from_integer(opt)
}

fn ratio(cost: i64, opt: i64) -> Value {
    if opt == 0 {
        Value::String(if cost == 0 { "1".into() } else { "inf".into() })
    } else {
        rational(Rational::new(cost, opt))
    }
}

pub fn greedy(path: &Path, oracle: bool, set_budget: usize) -> Result<RunReport, CliError> {
    let mut r = RunReport::new("greedy");
    r.param("oracle", oracle).param("set_budget", set_budget);
    let sc = load_sc(path, &mut r)?;
    let (cover, trace) = greedy_set_cover(&sc)?;
    let bound = chvatal_bound(sc.max_set_size() as u64);
    r.computed("cost", rational(sc.cost_value(cover.cost)))
        .computed("sets", json!(cover.sets))
        .computed("steps", trace.steps.len())
        .computed("ratio_bound", rational(bound));
    if oracle {
        let opt = brute_force_set_cover_with_budget(&sc, set_budget)?;
        let ok = within(cover.cost, bound, opt.cost);
        r.oracle("opt", rational(sc.cost_value(opt.cost)))
            .oracle("ratio", ratio(cover.cost, opt.cost))
            .oracle("within_bound", ok);
        if !ok {
            r.fail();
        }
    }
    Ok(r)
}

pub fn exact_sc(path: &Path, set_budget: usize) -> Result<RunReport, CliError> {
    let mut r = RunReport::new("exact-sc");
    r.param("set_budget", set_budget);
    let sc = load_sc(path, &mut r)?;
    let opt = brute_force_set_cover_with_budget(&sc, set_budget)?;
    r.oracle("cost", rational(sc.cost_value(opt.cost))).oracle("sets", json!(opt.sets));
    Ok(r)
}

pub struct ApproxArgs {
    pub gamma: Rational,
    pub core_cap: CoreCap,
    pub phi: Option<usize>,
    pub candidate_budget: usize,
    pub oracle: bool,
    pub arc_budget: usize,
}

fn cap_name(cap: CoreCap) -> String {
    match cap {
        CoreCap::Tight => "tight".into(),
        CoreCap::Doubled => "doubled".into(),
        CoreCap::Fixed(k) => k.to_string(),
    }
}

pub fn dst_approx_cmd(path: &Path, a: &ApproxArgs) -> Result<RunReport, CliError> {
    let mut r = RunReport::new("dst-approx");
    r.param("gamma", format_rational(&a.gamma))
        .param("core_cap", cap_name(a.core_cap))
        .param("phi", a.phi.map_or("derived".into(), |p| p.to_string()))
        .param("candidate_budget", a.candidate_budget)
        .param("oracle", a.oracle)
        .param("arc_budget", a.arc_budget);
    let d = load_dst(path, &mut r)?;
    let opts = DstApproxOptions { gamma: a.gamma, core_cap: a.core_cap, phi: a.phi, candidate_budget: a.candidate_budget };
    let out = dst_approx(&d, &opts)?;
    out.solution
        .verify(&d, d.terminals())
        .map_err(|e| CliError::Validation(format!("returned tree is invalid: {e}")))?;
    r.computed("phi", out.phi)
        .computed("core_cap", out.core_cap)
        .computed("candidates", out.candidates)
        .computed("core", json!(out.core))
        .computed("pieces", out.pieces.len());
    tree_fields(&mut r, &d, &out.solution, Provenance::Computed);
    r.computed("ratio_bound", rational(out.ratio_bound));
    if a.oracle {
        let opt = brute_force_dst_with_budget(&d, a.arc_budget)?;
        let ok = within(out.solution.cost, out.ratio_bound, opt.cost);
        r.oracle("opt", rational(d.cost_value(opt.cost)))
            .oracle("ratio", ratio(out.solution.cost, opt.cost))
            .oracle("within_bound", ok);
        if !ok {
            r.fail();
        }
    }
    Ok(r)
}

pub fn dst_exact(path: &Path, arc_budget: usize) -> Result<RunReport, CliError> {
    let mut r = RunReport::new("dst-exact");
    r.param("arc_budget", arc_budget);
    let d = load_dst(path, &mut r)?;
    let opt = brute_force_dst_with_budget(&d, arc_budget)?;
    tree_fields(&mut r, &d, &opt, Provenance::Oracle);
    Ok(r)
}

pub fn dw(path: &Path, root: Option<usize>, terminals: Option<Vec<usize>>) -> Result<RunReport, CliError> {
    let mut r = RunReport::new("dw");
    let d = load_dst(path, &mut r)?;
    let root = root.unwrap_or(d.root());
    let terminals = terminals.unwrap_or_else(|| d.terminals().to_vec());
    if let Some(&v) = terminals.iter().chain([&root]).find(|&&v| v >= d.vertex_count()) {
        return Err(CliError::Validation(format!("vertex {v} is outside the instance")));
    }
    r.param("root", root).param("terminals", format!("{terminals:?}"));
    let tree = dreyfus_wagner_directed(&d, root, &terminals)?;
    tree_fields(&mut r, &d, &tree, Provenance::Oracle);
    Ok(r)
}

pub struct ReduceArgs {
    pub gamma: Rational,
    pub delta: Rational,
    pub seed: u64,
    pub planted: Option<PathBuf>,
    pub config: PipelineConfig,
    pub out: Option<PathBuf>,
}

pub fn reduce(path: &Path, a: &ReduceArgs) -> Result<RunReport, CliError> {
    let mut r = RunReport::new("reduce");
    r.seed = Some(a.seed);
    r.param("gamma", format_rational(&a.gamma))
        .param("delta", format_rational(&a.delta))
        .param("u", a.config.u_override.map_or("scheduled".into(), |u| u.to_string()))
        .param("v_count", a.config.v_count.map_or("q^2".into(), |v| v.to_string()))
        .param("disperser_samples", a.config.disperser_samples)
        .param("max_elements", a.config.max_elements)
        .param("set_budget", a.config.set_budget)
        .param("assignment_budget", a.config.assignment_budget)
        .param("soundness_samples", a.config.soundness_samples)
        .param("partition_budget", a.config.partition_budget);
    let input = read_input(path)?;
    r.instance_digest = Some(input.digest);
    let lc = parse_lc(&input.text)?;
    let planted: Option<Labeling> = match &a.planted {
        Some(p) => {
            r.param("planted", p.display());
            Some(parse_json(&read_input(p)?.text)?)
        }
        None => None,
    };
    let out = run_pipeline(&lc, a.gamma, a.delta, a.seed, &a.config, planted.as_ref())?;
    let p = &out.params;
    let audit = &out.audit;
    r.computed("D", p.d)
        .computed("alpha", rational(p.alpha))
        .computed("gamma_prime", rational(p.gamma_prime))
        .computed("q", p.q.unwrap_or(0))
        .computed("u", p.u)
        .computed("ell", p.ell)
        .computed("eps", audit.eps)
        .computed("A'", out.g_prime.a_count())
        .computed("B'", out.g_prime.b_count())
        .computed("N", audit.element_count)
        .computed("M", audit.set_count)
        .computed("gap", audit.gap)
        .computed("target_gap", audit.target_gap)
        .computed("identity_error", audit.identity_error)
        .computed("u_requirement", audit.u_requirement)
        .computed("u_requirement_met", audit.u_requirement_met)
        .computed("alpha_above_2_over_D", audit.alpha_strictly_above_2_over_d)
        .computed("soundness_threshold", audit.soundness_threshold);
    if let Some(text) = &audit.completeness {
        r.computed("completeness", text.as_str());
    } else if planted.is_some() {
        r.computed("completeness", "no cover of size |A'| found");
        r.fail();
    }
    if let Some(opt) = &audit.optimum {
        r.oracle("opt", opt.cost).oracle("opt_sets", json!(opt.sets));
    }
    if let Some(s) = &audit.soundness {
        let tag = if s.exhaustive { "exhaustive" } else { "sampled" };
        r.computed("list_size", s.list_size)
            .computed("non_disagreeing", format!("{}/{} ({tag})", s.non_disagreeing, s.b_count));
    }
    let dc = &audit.disperser;
    r.computed(
        "disperser",
        format!(
            "{} partitions ({}), worst {}/{} vs bound {:.3e}: {}",
            dc.partitions_checked,
            if dc.exhaustive { "exhaustive" } else { "sampled" },
            dc.worst,
            dc.v_count,
            dc.bound,
            if dc.passed() { "pass" } else { "fail" }
        ),
    );
    if let Some(pc) = &audit.partition {
        let verdict = match &pc.witness {
            None => "no cover: pass".to_string(),
            Some(w) => format!("cover {w:?}"),
        };
        r.computed("partition_system", format!("ℓ = {}, {} nodes, {verdict}", pc.ell, pc.examined));
    }
    for note in &audit.notes {
        r.computed("note", note.as_str());
    }
    if let Some(o) = &a.out {
        fs::write(o, emit_sc(&out.sc))?;
        r.param("out", o.display());
    }
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum VerifyKind {
    Sc,
    Dst,
    Lc,
    PartitionSystem,
    Labeling,
}

pub fn verify(kind: VerifyKind, path: &Path, ell: Option<usize>, lc_path: Option<&Path>, budget: u128) -> Result<RunReport, CliError> {
    let mut r = RunReport::new(&format!("verify {}", clap::ValueEnum::to_possible_value(&kind).expect("named").get_name()));
    let input = read_input(path)?;
    r.instance_digest = Some(input.digest);
    let report = match kind {
        VerifyKind::Sc => parse_sc(&input.text)?.validate(),
        VerifyKind::Dst => parse_dst(&input.text)?.validate(),
        VerifyKind::Lc => parse_lc(&input.text)?.validate(),
        VerifyKind::PartitionSystem => {
            let ell = ell.ok_or_else(|| CliError::Validation("verify partition-system needs --ell".into()))?;
            r.param("ell", ell).param("budget", budget);
            let ps: PartitionSystem = parse_json(&input.text)?;
            let check = verify_partition_system(&ps, ell, budget)?;
            r.input("u", ps.u).input("D", ps.d).input("m", ps.m()).computed("nodes_examined", check.examined.to_string());
            match &check.witness {
                None => {
                    r.computed("verdict", "no cover by at most ℓ parts from distinct partitions");
                }
                Some(w) => {
                    r.computed("verdict", "violated").computed("witness", json!(w));
                    r.fail();
                }
            }
            return Ok(r);
        }
        VerifyKind::Labeling => {
            let lc_path = lc_path.ok_or_else(|| CliError::Validation("verify labeling needs --lc".into()))?;
            let lc_input = read_input(lc_path)?;
            r.param("lc", lc_path.display()).param("lc_digest", &lc_input.digest);
            let lc = parse_lc(&lc_input.text)?;
            let l: Labeling = parse_json(&input.text)?;
            if !l.is_valid_for(&lc) {
                r.computed("verdict", "labeling does not fit the instance");
                r.fail();
                return Ok(r);
            }
            let covered = l.covered_edges(&lc);
            r.computed("covered_edges", covered).input("edges", lc.edges().len());
            r.computed("verdict", if covered == lc.edges().len() { "covers every edge" } else { "partial" });
            return Ok(r);
        }
    };
    if report.is_pass() {
        r.computed("verdict", "pass");
    } else {
        r.computed("verdict", report.to_string()).computed("violations", json!(report.names()));
        r.fail();
    }
    Ok(r)
}

fn identity_value(id: &CoreIdentity) -> Value {
    json!({
        "core": id.core,
        "root_tree_cost": id.root_tree_cost,
        "cover_cost": id.cover_cost,
        "opt_cost": id.opt_cost,
        "holds": id.holds(),
        "witness_error": id.witness.as_ref().map(|w| format!("{w:?}")),
    })
}

pub fn audit_decomposition(path: &Path, phi: usize, arc_budget: usize) -> Result<RunReport, CliError> {
    let mut r = RunReport::new("audit-decomposition");
    r.param("phi", phi).param("arc_budget", arc_budget);
    let d = load_dst(path, &mut r)?;
    let t_opt = brute_force_dst_with_budget(&d, arc_budget)?;
    let report = decomposition_audit(&d, &t_opt, phi)?;
    r.oracle("opt", t_opt.cost)
        .computed("extracted", identity_value(&report.extracted))
        .computed("size_bound", report.size_bound.as_ref().map_or("ok".into(), |w| format!("{w:?}")))
        .computed("closed", identity_value(&report.closed))
        .computed("holds", report.holds());
    if !report.holds() {
        r.fail();
    }
    Ok(r)
}

/// Times the solvers on a fixed generated suite.
pub fn bench(seed: u64, repeat: usize) -> Result<RunReport, CliError> {
    let mut r = RunReport::new("bench");
    r.seed = Some(seed);
    r.param("repeat", repeat);
    let mut time = |name: &str, f: &mut dyn FnMut() -> Result<i64, CliError>| -> Result<(), CliError> {
        let mut best = f64::INFINITY;
        let mut cost = 0;
        for _ in 0..repeat.max(1) {
            let start = Instant::now();
            cost = f()?;
            best = best.min(start.elapsed().as_secs_f64() * 1e3);
        }
        r.computed(&format!("{name}.cost"), cost).computed(&format!("{name}.best_ms"), (best * 1e3).round() / 1e3);
        Ok(())
    };
    let sc = gen_sc(seed, 64, 32, 9)?;
    time("greedy(N=64,M=32)", &mut || Ok(greedy_set_cover(&sc)?.0.cost))?;
    let small = gen_sc(seed, 16, 16, 9)?;
    time("exact-sc(N=16,M=16)", &mut || Ok(brute_force_set_cover_with_budget(&small, 24)?.cost))?;
    for terminals in [6usize, 10, 14] {
        let d = gen_dst(seed, 40, 80, terminals, 9)?;
        time(&format!("dw(n=40,N={terminals})"), &mut || Ok(dreyfus_wagner_directed(&d, d.root(), d.terminals())?.cost))?;
    }
    for terminals in [8usize, 12, 16] {
        let d = gen_dst(seed, 30, 60, terminals, 9)?;
        let opts = DstApproxOptions::new(Rational::new(1, 2));
        time(&format!("dst-approx(n=30,N={terminals})"), &mut || Ok(dst_approx(&d, &opts)?.solution.cost))?;
    }
    let shape = LcShape { a_count: 4, b_count: 2, sigma_a: 2, sigma_b: 2, b_degree: 4 };
    let (lc, planted) = gen_lc_planted(seed, shape)?;
    let config = PipelineConfig { u_override: Some(16), v_count: Some(2), ..PipelineConfig::default() };
    time("reduce(|A|=4,u=16)", &mut || {
        let out = run_pipeline(&lc, Rational::new(1, 2), Rational::new(1, 4), seed, &config, Some(&planted))?;
        Ok(out.audit.optimum.map_or(-1, |o| o.cost))
    })?;
    Ok(r)
}

pub enum Generated {
    Sc { seed: u64, universe: usize, sets: usize, max_cost: i64 },
    Dst { seed: u64, n: usize, extra_arcs: usize, terminals: usize, max_cost: i64 },
    Lc { seed: u64, shape: LcShape, planted: bool },
}

/// Returns the instance text and, for planted games, the labeling JSON.
pub fn generate(g: &Generated) -> Result<(String, Option<String>), CliError> {
    Ok(match g {
        Generated::Sc { seed, universe, sets, max_cost } => (emit_sc(&gen_sc(*seed, *universe, *sets, *max_cost)?), None),
        Generated::Dst { seed, n, extra_arcs, terminals, max_cost } => {
            (emit_dst(&gen_dst(*seed, *n, *extra_arcs, *terminals, *max_cost)?), None)
        }
        Generated::Lc { seed, shape, planted: false } => (emit_lc(&gen_lc(*seed, *shape)?), None),
        Generated::Lc { seed, shape, planted: true } => {
            let (lc, l) = gen_lc_planted(*seed, *shape)?;
            (emit_lc(&lc), Some(emit_json(&l)))
        }
    })
}
