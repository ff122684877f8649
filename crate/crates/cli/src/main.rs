use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use igprm::config::{self, ExperimentConfig};
use igprm::harness::{self, SuiteReport};
use igprm::{Error, Mode};

/// Belief-space roadmap planning experiments.
#[derive(Parser)]
#[command(name = "igprm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Planner seed, or the study base seed for `converge`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (overrides the config).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for studies.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// standard | lossless
    #[arg(long, global = true)]
    mode: Option<Mode>,
}

#[derive(Subcommand)]
enum Command {
    /// Build a roadmap, search it and write result, roadmap and manifest files.
    Plan {
        config: PathBuf,
        /// Number of sampled beliefs (overrides the config).
        #[arg(long)]
        n: Option<usize>,
    },
    /// Run the convergence study described by the config's [study] section.
    Converge { config: PathBuf },
    /// Print the obstacle-free move-and-sense cost.
    Baseline { config: PathBuf },
    /// Statistical checks of the covariance sampler.
    SampleTest {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
    /// Closed-form volume constants for a trace band.
    Volumes {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        lo: f64,
        #[arg(long)]
        hi: f64,
    },
    /// Run every statistical and oracle suite.
    Selfcheck {
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
}

const EXIT_NO_PATH: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

fn load(path: &Path, common: &Common) -> igprm::Result<ExperimentConfig> {
    let mut cfg = config::load_config(path).map_err(|e| match e {
        Error::Io(io) => Error::Config { field: path.display().to_string(), message: io.to_string() },
        other => other,
    })?;
    if let Some(mode) = common.mode {
        cfg.planner.mode = mode;
    }
    Ok(cfg)
}

/// Argument problems in the config-free subcommands count as invalid configuration.
fn bad_arguments(e: Error) -> Error {
    match e {
        Error::InvalidArgument(message) => Error::Config { field: "arguments".into(), message },
        other => other,
    }
}

fn print_reports(reports: &[SuiteReport]) -> ExitCode {
    for r in reports {
        println!("{r}");
    }
    if reports.iter().all(|r| r.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_NO_PATH)
    }
}

fn run(cli: Cli) -> igprm::Result<ExitCode> {
    let common = &cli.common;
    match cli.command {
        Command::Plan { config, n } => {
            let mut cfg = load(&config, common)?;
            if let Some(seed) = common.seed {
                cfg.planner.seed = seed;
            }
            if let Some(n) = n {
                cfg.planner.n = n;
            }
            let out = harness::output_dir(&cfg, common.out.as_deref());
            let outcome = harness::run_plan(&cfg, Some(&out))?;
            match &outcome.plan {
                Some(p) => {
                    println!(
                        "cost {:.6} (baseline {:.6}) over {} nodes; roadmap {} nodes, {} edges; written to {}",
                        p.cost,
                        outcome.baseline.cost,
                        p.chain.len(),
                        p.stats.nodes,
                        p.stats.edges,
                        out.display()
                    );
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    eprintln!("no path found (roadmap {} nodes, {} edges)", outcome.roadmap.nodes().len(), outcome.roadmap.edge_count());
                    Ok(ExitCode::from(EXIT_NO_PATH))
                }
            }
        }
        Command::Converge { config } => {
            let mut cfg = load(&config, common)?;
            if let (Some(seed), Some(study)) = (common.seed, cfg.study.as_mut()) {
                study.base_seed = seed;
            }
            let out = harness::output_dir(&cfg, common.out.as_deref());
            let study = harness::run_convergence(&cfg, Some(&out), common.jobs)?;
            println!("n,mean_cost,std_cost,min_cost,max_cost,fail_rate");
            for s in &study.summary {
                println!("{},{:.6},{:.6},{:.6},{:.6},{:.2}", s.n, s.mean_cost, s.std_cost, s.min_cost, s.max_cost, s.fail_rate);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Baseline { config } => {
            let cfg = load(&config, common)?;
            let r = igprm::baseline::move_and_sense_cost(&cfg.init, &cfg.goal, &cfg.noise)?;
            println!("{}", serde_json::to_string_pretty(&r).expect("baseline serializes"));
            Ok(ExitCode::SUCCESS)
        }
        Command::SampleTest { d, samples } => {
            let reports = harness::run_sample_test(d, samples, common.seed.unwrap_or(1)).map_err(bad_arguments)?;
            Ok(print_reports(&reports))
        }
        Command::Volumes { d, lo, hi } => {
            let r = harness::volume_report(d, lo, hi).map_err(bad_arguments)?;
            println!("{}", serde_json::to_string_pretty(&r).expect("report serializes"));
            Ok(ExitCode::SUCCESS)
        }
        Command::Selfcheck { samples } => {
            let mut opts = harness::SelfcheckOptions { samples, ..Default::default() };
            if let Some(seed) = common.seed {
                opts.seed = seed;
            }
            Ok(print_reports(&harness::run_selfcheck(&opts)?))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e @ Error::Config { .. }) => {
            eprintln!("invalid config: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Error::InitInCollision) => {
            eprintln!("invalid config: the initial belief is in collision");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Error::NoPath) => {
            eprintln!("no path found");
            ExitCode::from(EXIT_NO_PATH)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}
