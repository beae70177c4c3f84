use crate::exact::{brute_force_set_cover_with_budget, ExactError, DEFAULT_SET_BUDGET};
use crate::instances::{CoverSolution, LabelCoverInstance, Labeling, SetCoverInstance};
use crate::rational::Rational;

use super::disperser::{agreement_reduction, build_disperser, verify_disperser, DisperserCheck, DisperserGraph};
use super::gadget::{lc_to_set_cover, planted_cover, GadgetLayout};
use super::labeling::{measure_agreement_soundness, SoundnessMeasurement, SoundnessMode, DEFAULT_ASSIGNMENT_BUDGET};
use super::partition::{build_partition_system, verify_partition_system, PartitionCheck, PartitionSystem};
use super::schedule::{schedule_params, ReductionParams};
use super::ReductionError;

/// Knobs of a pipeline run. Every exhaustive stage has a budget; a stage
/// over budget is skipped and noted in the audit.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    /// Replaces the scheduled `u`.
    pub u_override: Option<u64>,
    /// Right side of the disperser; `q²` by default.
    pub v_count: Option<usize>,
    /// Random partitions tried when the disperser is too large to check
    /// exhaustively.
    pub disperser_samples: usize,
    /// Largest `N = |B'| · u` the gadget may produce.
    pub max_elements: usize,
    /// Largest `M` on which the optimum cover is computed.
    pub set_budget: usize,
    /// List assignments the soundness measurement may enumerate.
    pub assignment_budget: u128,
    /// Random list assignments drawn when enumeration is over budget.
    pub soundness_samples: usize,
    /// Nodes the partition-system search may visit.
    pub partition_budget: u128,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            u_override: None,
            v_count: None,
            disperser_samples: 200,
            max_elements: 1 << 20,
            set_budget: DEFAULT_SET_BUDGET,
            assignment_budget: DEFAULT_ASSIGNMENT_BUDGET,
            soundness_samples: 2000,
            partition_budget: 1 << 24,
        }
    }
}

/// Everything measured on one run.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineAudit {
    pub element_count: usize,
    pub set_count: usize,
    /// `(1 − δ) ln u`.
    pub gap: f64,
    /// `(1 − γ) ln N`.
    pub target_gap: f64,
    pub eps: f64,
    pub identity_error: f64,
    pub u_requirement: f64,
    pub u_requirement_met: bool,
    pub alpha_strictly_above_2_over_d: bool,
    /// The planted labeling lifted to the rewired game.
    pub lifted_labeling: Option<Labeling>,
    /// Cover induced by the lifted labeling, when it validates.
    pub planted_cover: Option<CoverSolution>,
    pub completeness: Option<String>,
    /// Minimum cover, when `M` fits the set budget.
    pub optimum: Option<CoverSolution>,
    /// `|A'| (1 − 2α) ln u`.
    pub soundness_threshold: f64,
    /// Agreement soundness of the rewired game at list size `ℓ`.
    pub soundness: Option<SoundnessMeasurement>,
    pub disperser: DisperserCheck,
    pub partition: Option<PartitionCheck>,
    /// Stages skipped and why.
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutput {
    pub sc: SetCoverInstance,
    pub layout: GadgetLayout,
    pub params: ReductionParams,
    pub g_prime: LabelCoverInstance,
    pub disperser: DisperserGraph,
    pub partition_system: PartitionSystem,
    pub audit: PipelineAudit,
}

fn derive_seed(seed: u64, stage: u64) -> u64 {
    seed ^ stage.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Runs the reduction on a bi-regular game: disperser rewiring, schedule,
/// partition system, gadget; then audits the result. With a planted
/// labeling covering every edge the audit checks the completeness cover.
pub fn run_pipeline(
    lc: &LabelCoverInstance,
    gamma: Rational,
    delta: Rational,
    seed: u64,
    config: &PipelineConfig,
    planted: Option<&Labeling>,
) -> Result<PipelineOutput, ReductionError> {
    let report = lc.validate();
    if !report.is_pass() {
        return Err(ReductionError::Invalid(report));
    }
    let (_, q) = lc.biregular_degrees().ok_or(ReductionError::NotBiregular)?;
    let v_count = config.v_count.unwrap_or(q * q);
    if v_count == 0 {
        return Err(ReductionError::BadParameters("the disperser needs |V| ≥ 1".into()));
    }
    let n1 = lc.b_count() * v_count;
    let mut params = schedule_params(lc.size(), gamma, delta, n1)?;
    if let Some(u) = config.u_override {
        params = params.with_u(u, true);
    }
    params.q = Some(q);
    let mut power = params.d;
    while power < q {
        power = power.saturating_mul(params.d);
    }
    if power != q {
        return Err(ReductionError::BadParameters(format!(
            "B-degree {q} is not a power of D = {}; regenerate the game with B-degree a power of D",
            params.d
        )));
    }
    let u = usize::try_from(params.u).unwrap_or(usize::MAX);
    let elements = (n1 as u128).saturating_mul(u as u128);
    if elements > config.max_elements as u128 {
        return Err(ReductionError::BudgetExceeded {
            what: "element count",
            actual: elements,
            budget: config.max_elements as u128,
        });
    }
    if u < params.d {
        return Err(ReductionError::BadParameters(format!("u = {u} is below D = {}", params.d)));
    }

    let disperser = build_disperser(q, params.d, params.eps, derive_seed(seed, 1), Some(v_count))?;
    let g_prime = agreement_reduction(lc, &disperser)?;
    let partition_system = build_partition_system(u, lc.sigma_b(), params.d, derive_seed(seed, 2))?;
    let (sc, layout) = lc_to_set_cover(&g_prime, &partition_system)?;

    let mut notes = Vec::new();
    let disperser_check = verify_disperser(&disperser, config.disperser_samples, derive_seed(seed, 3));
    if disperser_check.part_cap == 0 {
        notes.push("disperser: ⌊ε q⌋ = 0, no partition is constrained".into());
    }

    let lifted_labeling = planted.map(|l| Labeling {
        phi_a: l.phi_a.clone(),
        phi_b: (0..g_prime.b_count()).map(|b| l.phi_b[b / v_count]).collect(),
    });
    let planted_cover = lifted_labeling.as_ref().and_then(|l| {
        if !l.is_valid_for(&g_prime) || l.covered_edges(&g_prime) != g_prime.edges().len() {
            notes.push("completeness: the planted labeling does not cover every edge".into());
            return None;
        }
        let cover = planted_cover(&layout, l);
        match cover.verify(&sc) {
            Ok(()) => Some(cover),
            Err(e) => {
                notes.push(format!("completeness: planted cover rejected ({e})"));
                None
            }
        }
    });
    let completeness = planted_cover.as_ref().map(|c| format!("cover of size |A'| found (|A'| = {})", c.sets.len()));

    let optimum = match brute_force_set_cover_with_budget(&sc, config.set_budget) {
        Ok(c) => Some(c),
        Err(ExactError::BudgetExceeded { actual, budget, .. }) => {
            notes.push(format!("optimum: M = {actual} exceeds the set budget {budget}"));
            None
        }
        Err(e) => {
            notes.push(format!("optimum: {e}"));
            None
        }
    };

    let exhaustive = SoundnessMode::Exhaustive { budget: config.assignment_budget };
    let soundness = match measure_agreement_soundness(&g_prime, params.ell, exhaustive) {
        Ok(m) => Some(m),
        Err(ReductionError::BudgetExceeded { .. }) => {
            notes.push("soundness: list assignments over budget, sampled instead".into());
            let sampled = SoundnessMode::Sampled { samples: config.soundness_samples, seed: derive_seed(seed, 4) };
            Some(measure_agreement_soundness(&g_prime, params.ell, sampled)?)
        }
        Err(e) => return Err(e),
    };

    let partition = match verify_partition_system(&partition_system, params.ell, config.partition_budget) {
        Ok(c) => Some(c),
        Err(ReductionError::BudgetExceeded { actual, budget, .. }) => {
            notes.push(format!("partition system: search space {actual} exceeds {budget}"));
            None
        }
        Err(e) => return Err(e),
    };

    let u_requirement = params.u_requirement(lc.sigma_b());
    let audit = PipelineAudit {
        element_count: sc.universe_size(),
        set_count: sc.set_count(),
        gap: params.gap(),
        target_gap: params.target_gap(),
        eps: params.eps,
        identity_error: params.identity_error(),
        u_requirement,
        u_requirement_met: params.u as f64 >= u_requirement,
        alpha_strictly_above_2_over_d: params.alpha_strictly_above_2_over_d(),
        lifted_labeling,
        planted_cover,
        completeness,
        optimum,
        soundness_threshold: params.soundness_threshold(g_prime.a_count()),
        soundness,
        disperser: disperser_check,
        partition,
        notes,
    };
    Ok(PipelineOutput { sc, layout, params, g_prime, disperser, partition_system, audit })
}
