mod commands;
mod error;
mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use dstcover::dst_core::{CoreCap, DEFAULT_CANDIDATE_BUDGET};
use dstcover::exact::{DEFAULT_ARC_BUDGET, DEFAULT_SET_BUDGET};
use dstcover::generate::LcShape;
use dstcover::rational::{parse_rational, Rational};
use dstcover::reductions::{PipelineConfig, DEFAULT_ASSIGNMENT_BUDGET};

use commands::{ApproxArgs, Generated, ReduceArgs, VerifyKind};
use error::CliError;
use report::{RunReport, Status};

/// Set Cover and Directed Steiner Tree workbench: solvers, exact oracles,
/// the Label Cover → Set Cover reduction and instance generators.
#[derive(Parser, Debug)]
#[command(name = "dstcover", version)]
struct Cli {
    /// Emit the run report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for the parallel stages (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct SeedArg {
    #[arg(long, env = "DSTCOVER_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct OutArg {
    /// Write here instead of standard output.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Greedy weighted set cover.
    Greedy {
        file: PathBuf,
        /// Compare against the exact optimum.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = DEFAULT_SET_BUDGET)]
        set_budget: usize,
    },
    /// Exact set cover by branch and bound.
    ExactSc {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SET_BUDGET)]
        set_budget: usize,
    },
    /// φ-core approximation for Directed Steiner Tree.
    DstApprox {
        file: PathBuf,
        /// γ in [1/2, 1); φ = ⌈N^(1−γ)⌉.
        #[arg(long, value_parser = rational_arg)]
        gamma: Rational,
        /// `tight` (⌈N/φ⌉), `doubled` (⌈2N/φ⌉) or a fixed size.
        #[arg(long, default_value = "tight", value_parser = core_cap_arg)]
        core_cap: CoreCap,
        /// Overrides the φ derived from γ.
        #[arg(long)]
        phi: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_CANDIDATE_BUDGET)]
        candidate_budget: usize,
        /// Compare against the exact optimum.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = DEFAULT_ARC_BUDGET)]
        arc_budget: usize,
    },
    /// Exact Directed Steiner Tree by exhaustive search.
    DstExact {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ARC_BUDGET)]
        arc_budget: usize,
    },
    /// Exact Directed Steiner Tree by the Dreyfus–Wagner dynamic program.
    Dw {
        file: PathBuf,
        /// Defaults to the instance root.
        #[arg(long)]
        root: Option<usize>,
        /// Comma-separated; defaults to the instance terminals.
        #[arg(long, value_delimiter = ',')]
        terminals: Option<Vec<usize>>,
    },
    /// Label Cover → Set Cover reduction with audit.
    Reduce {
        /// Label Cover instance (JSON).
        file: PathBuf,
        #[arg(long, value_parser = rational_arg)]
        gamma: Rational,
        #[arg(long, value_parser = rational_arg)]
        delta: Rational,
        #[command(flatten)]
        seed: SeedArg,
        /// Planted labeling (JSON) for the completeness check.
        #[arg(long)]
        planted: Option<PathBuf>,
        /// Replaces the scheduled universe size.
        #[arg(long)]
        u: Option<u64>,
        /// Right side of the disperser (default q²).
        #[arg(long)]
        v_count: Option<usize>,
        #[arg(long, default_value_t = 200)]
        disperser_samples: usize,
        #[arg(long, default_value_t = 1 << 20)]
        max_elements: usize,
        #[arg(long, default_value_t = DEFAULT_SET_BUDGET)]
        set_budget: usize,
        #[arg(long, default_value_t = DEFAULT_ASSIGNMENT_BUDGET)]
        assignment_budget: u128,
        #[arg(long, default_value_t = 2000)]
        soundness_samples: usize,
        #[arg(long, default_value_t = 1 << 24)]
        partition_budget: u128,
        /// Write the set-cover instance here.
        #[command(flatten)]
        out: OutArg,
    },
    /// Validate an instance or check a combinatorial object.
    Verify {
        kind: VerifyKind,
        file: PathBuf,
        /// List bound for partition systems.
        #[arg(long)]
        ell: Option<usize>,
        /// Label Cover instance a labeling refers to.
        #[arg(long)]
        lc: Option<PathBuf>,
        #[arg(long, default_value_t = 1 << 24)]
        budget: u128,
    },
    /// Check c(T_opt) = c(T(r, C)) + OPT_SC on an exact optimum.
    AuditDecomposition {
        file: PathBuf,
        #[arg(long)]
        phi: usize,
        #[arg(long, default_value_t = DEFAULT_ARC_BUDGET)]
        arc_budget: usize,
    },
    /// Time the solvers on a fixed generated suite.
    Bench {
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long, default_value_t = 3)]
        repeat: usize,
    },
    /// Random coverable set-cover instance.
    GenSc {
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long)]
        universe: usize,
        #[arg(long)]
        sets: usize,
        #[arg(long, default_value_t = 9)]
        max_cost: i64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Random rooted digraph with reachable terminals.
    GenDst {
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        extra_arcs: usize,
        #[arg(long)]
        terminals: usize,
        #[arg(long, default_value_t = 9)]
        max_cost: i64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Random bi-regular Label Cover instance.
    GenLc {
        #[command(flatten)]
        seed: SeedArg,
        #[command(flatten)]
        shape: ShapeArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Random bi-regular Label Cover instance with a labeling covering every edge.
    GenLcPlanted {
        #[command(flatten)]
        seed: SeedArg,
        #[command(flatten)]
        shape: ShapeArgs,
        #[command(flatten)]
        out: OutArg,
        /// Where to write the planted labeling (JSON).
        #[arg(long)]
        labeling_out: PathBuf,
    },
}

#[derive(Args, Debug)]
struct ShapeArgs {
    #[arg(long)]
    a_count: usize,
    #[arg(long)]
    b_count: usize,
    #[arg(long)]
    sigma_a: usize,
    #[arg(long)]
    sigma_b: usize,
    #[arg(long)]
    b_degree: usize,
}

impl ShapeArgs {
    fn shape(&self) -> LcShape {
        LcShape {
            a_count: self.a_count,
            b_count: self.b_count,
            sigma_a: self.sigma_a,
            sigma_b: self.sigma_b,
            b_degree: self.b_degree,
        }
    }
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn core_cap_arg(s: &str) -> Result<CoreCap, String> {
    match s {
        "tight" => Ok(CoreCap::Tight),
        "doubled" => Ok(CoreCap::Doubled),
        k => k.parse().map(CoreCap::Fixed).map_err(|_| format!("`{k}` is not tight, doubled or a size")),
    }
}

fn write_or_print(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn generate(g: Generated, out: &Option<PathBuf>, labeling_out: Option<&PathBuf>) -> Result<Option<RunReport>, CliError> {
    let (text, labeling) = commands::generate(&g)?;
    write_or_print(out, &text)?;
    if let (Some(path), Some(l)) = (labeling_out, labeling) {
        fs::write(path, l).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(None)
}

fn dispatch(command: Command) -> Result<Option<RunReport>, CliError> {
    Ok(Some(match command {
        Command::Greedy { file, oracle, set_budget } => commands::greedy(&file, oracle, set_budget)?,
        Command::ExactSc { file, set_budget } => commands::exact_sc(&file, set_budget)?,
        Command::DstApprox { file, gamma, core_cap, phi, candidate_budget, oracle, arc_budget } => {
            let args = ApproxArgs { gamma, core_cap, phi, candidate_budget, oracle, arc_budget };
            commands::dst_approx_cmd(&file, &args)?
        }
        Command::DstExact { file, arc_budget } => commands::dst_exact(&file, arc_budget)?,
        Command::Dw { file, root, terminals } => commands::dw(&file, root, terminals)?,
        Command::Reduce {
            file,
            gamma,
            delta,
            seed,
            planted,
            u,
            v_count,
            disperser_samples,
            max_elements,
            set_budget,
            assignment_budget,
            soundness_samples,
            partition_budget,
            out,
        } => {
            let config = PipelineConfig {
                u_override: u,
                v_count,
                disperser_samples,
                max_elements,
                set_budget,
                assignment_budget,
                soundness_samples,
                partition_budget,
            };
            let args = ReduceArgs { gamma, delta, seed: seed.seed, planted, config, out: out.out };
            commands::reduce(&file, &args)?
        }
        Command::Verify { kind, file, ell, lc, budget } => commands::verify(kind, &file, ell, lc.as_deref(), budget)?,
        Command::AuditDecomposition { file, phi, arc_budget } => commands::audit_decomposition(&file, phi, arc_budget)?,
        Command::Bench { seed, repeat } => commands::bench(seed.seed, repeat)?,
        Command::GenSc { seed, universe, sets, max_cost, out } => {
            return generate(Generated::Sc { seed: seed.seed, universe, sets, max_cost }, &out.out, None);
        }
        Command::GenDst { seed, n, extra_arcs, terminals, max_cost, out } => {
            return generate(Generated::Dst { seed: seed.seed, n, extra_arcs, terminals, max_cost }, &out.out, None);
        }
        Command::GenLc { seed, shape, out } => {
            let g = Generated::Lc { seed: seed.seed, shape: shape.shape(), planted: false };
            return generate(g, &out.out, None);
        }
        Command::GenLcPlanted { seed, shape, out, labeling_out } => {
            let g = Generated::Lc { seed: seed.seed, shape: shape.shape(), planted: true };
            return generate(g, &out.out, Some(&labeling_out));
        }
    }))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let start = Instant::now();
    match dispatch(cli.command) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(mut report)) => {
            report.set_wall_time(start.elapsed());
            if cli.json {
                println!("{}", report.to_json());
            } else {
                println!("{report}");
            }
            match report.status {
                Status::Ok => ExitCode::SUCCESS,
                Status::ValidationFailure => ExitCode::from(2),
            }
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
