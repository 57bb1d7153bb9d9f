use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use maximin::cascade::Regime;
use maximin::meta::DEFAULT_ENSEMBLE_SIZE;
use maximin::{AlgorithmId, Domain};

use crate::commands::{self, Status};
use crate::config::{Overrides, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_PARTIAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "maximin", version, about = "Maximin influence maximization toolkit")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Shared settings; each flag overrides its environment variable, which
/// overrides the config file.
#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// JSON run configuration
    #[arg(long, global = true, env = "MAXIMIN_CONFIG")]
    pub config: Option<PathBuf>,
    /// JSON array of {name, path, domain}
    #[arg(long, global = true, env = "MAXIMIN_MANIFEST")]
    pub manifest: Option<PathBuf>,
    /// Spreadability regimes, comma separated (low, medium, high)
    #[arg(long, global = true, env = "MAXIMIN_REGIME", value_delimiter = ',')]
    pub regime: Option<Vec<Regime>>,
    /// Monte Carlo rounds for evaluation and ProbEst-based seeders
    #[arg(long, global = true, env = "MAXIMIN_ROUNDS")]
    pub rounds: Option<usize>,
    /// Monte Carlo rounds per calibration grid point
    #[arg(long, global = true, env = "MAXIMIN_CALIBRATION_ROUNDS")]
    pub calibration_rounds: Option<usize>,
    /// Independent evaluation runs per cell
    #[arg(long, global = true, env = "MAXIMIN_RUNS")]
    pub runs: Option<usize>,
    /// Seed budget per run
    #[arg(long, global = true, env = "MAXIMIN_KMAX")]
    pub kmax: Option<usize>,
    /// Global random seed
    #[arg(long, global = true, env = "MAXIMIN_SEED")]
    pub seed: Option<u64>,
    /// Output directory
    #[arg(long, global = true, env = "MAXIMIN_OUT")]
    pub out: Option<PathBuf>,
    /// Worker threads (0 = all cores)
    #[arg(long, global = true, env = "MAXIMIN_WORKERS")]
    pub workers: Option<usize>,
    /// Repetitions per timing measurement
    #[arg(long, global = true, env = "MAXIMIN_TIMING_REPS")]
    pub timing_reps: Option<usize>,
    /// Algorithms to benchmark, comma separated
    #[arg(long, global = true, env = "MAXIMIN_ALGORITHMS", value_delimiter = ',')]
    pub algorithms: Option<Vec<AlgorithmId>>,
    /// Time algorithms on one pinned core
    #[arg(long, global = true, env = "MAXIMIN_SINGLE_CORE_TIMING")]
    pub single_core_timing: bool,
    /// Keep every component instead of only the largest
    #[arg(long, global = true, env = "MAXIMIN_NO_LCC")]
    pub no_lcc: bool,
    /// Evaluation R = 10000, T = 3, calibration R = 1000
    #[arg(long, global = true, env = "MAXIMIN_LARGE_NETWORK_PRESET")]
    pub large_network_preset: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Calibrate alpha per network and regime
    Calibrate,
    /// Evaluate and time every algorithm on every network
    Bench,
    /// Categorize algorithms against Myopic
    Report,
    /// Ensemble selection and the meta-learner
    Meta {
        #[command(subcommand)]
        action: MetaAction,
    },
    /// Print one seed sequence as JSON
    Seed(SeedArgs),
    /// Compute structural features
    Features(FeaturesArgs),
}

#[derive(Debug, Subcommand)]
pub enum MetaAction {
    /// Choose an ensemble from bench results
    Select {
        /// Use the published ensemble for each regime
        #[arg(long)]
        preset: bool,
        #[arg(long, default_value_t = DEFAULT_ENSEMBLE_SIZE)]
        size: usize,
    },
    /// Train a classifier per regime
    Train {
        #[arg(long)]
        preset: bool,
    },
    /// Predict the algorithm for one network
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        network: PathBuf,
        #[arg(long, default_value = "unknown")]
        domain: Domain,
    },
    /// Compare selections with Myopic
    Report {
        /// Select the best ensemble member from bench results instead of the model
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        preset: bool,
    },
}

#[derive(Debug, Args)]
pub struct SeedArgs {
    /// Edge list
    #[arg(long)]
    pub network: PathBuf,
    #[arg(long)]
    pub algorithm: AlgorithmId,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub k: usize,
    /// Initial seed label; random from --seed when omitted
    #[arg(long)]
    pub init: Option<String>,
    /// Exact enumeration instead of Monte Carlo (tiny graphs)
    #[arg(long)]
    pub exact: bool,
}

#[derive(Debug, Args)]
pub struct FeaturesArgs {
    /// Single edge list; the manifest is used otherwise
    #[arg(long)]
    pub network: Option<PathBuf>,
    #[arg(long, default_value = "unknown")]
    pub domain: Domain,
}

impl GlobalArgs {
    fn config(&self) -> anyhow::Result<RunConfig> {
        RunConfig::resolve(
            self.config.as_deref(),
            Overrides {
                manifest: self.manifest.clone(),
                regimes: self.regime.clone(),
                rounds: self.rounds,
                calibration_rounds: self.calibration_rounds,
                runs: self.runs,
                k_max: self.kmax,
                seed: self.seed,
                out: self.out.clone(),
                workers: self.workers,
                timing_reps: self.timing_reps,
                algorithms: self.algorithms.clone(),
                single_core_timing: self.single_core_timing,
                no_lcc: self.no_lcc,
                large_network_preset: self.large_network_preset,
            },
        )
    }
}

fn print_json(v: &impl serde::Serialize) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn dispatch(cfg: &RunConfig, command: Command) -> anyhow::Result<Status> {
    match command {
        Command::Calibrate => {
            let o = commands::calibrate::cmd_calibrate(cfg)?;
            eprintln!("calibrated {} rows; cache hits: {}, curves simulated: {}", o.rows.len(), o.cache_hits, o.simulated);
            Ok(o.status)
        }
        Command::Bench => {
            let o = commands::bench::cmd_bench(cfg)?;
            eprintln!("bench: {} cells computed, {} resumed", o.computed_cells, o.resumed_cells);
            Ok(o.status)
        }
        Command::Report => {
            let o = commands::report::cmd_report(cfg)?;
            eprintln!("report: {} aggregate rows, {} networks", o.aggregate.len(), o.best.len());
            Ok(Status::Complete)
        }
        Command::Meta { action } => match action {
            MetaAction::Select { preset, size } => {
                print_json(&commands::meta::cmd_meta_select(cfg, preset, size)?)?;
                Ok(Status::Complete)
            }
            MetaAction::Train { preset } => {
                let models = commands::meta::cmd_meta_train(cfg, preset)?;
                let summary: Vec<_> = models
                    .iter()
                    .map(|m| {
                        serde_json::json!({
                            "regime": m.ensemble.regime,
                            "train": m.manifest.train.len(),
                            "test": m.manifest.test.len(),
                            "train_accuracy": m.manifest.train_accuracy,
                            "test_accuracy": m.manifest.test_accuracy,
                            "constant": m.constant,
                        })
                    })
                    .collect();
                print_json(&summary)?;
                Ok(Status::Complete)
            }
            MetaAction::Predict { model, network, domain } => {
                let alg = commands::meta::cmd_meta_predict(&model, &network, domain, cfg.lcc)?;
                print_json(&serde_json::json!({ "network": network.display().to_string(), "algorithm": alg }))?;
                Ok(Status::Complete)
            }
            MetaAction::Report { oracle, preset } => {
                for r in commands::meta::cmd_meta_report(cfg, oracle, preset)? {
                    print_json(&serde_json::json!({
                        "networks": r.rows.len(),
                        "mean_perf_diff_pct": r.mean_perf_diff_pct,
                        "std_perf_diff_pct": r.std_perf_diff_pct,
                        "mean_speedup": r.mean_speedup,
                        "std_speedup": r.std_speedup,
                        "beats_myopic": r.beats_myopic,
                        "excluded_zero_baseline": r.excluded_zero_baseline,
                    }))?;
                }
                Ok(Status::Complete)
            }
        },
        Command::Seed(a) => {
            let req = commands::seed::SeedRequest {
                network: &a.network,
                algorithm: a.algorithm,
                alpha: a.alpha,
                k: a.k,
                init: a.init,
                rng_seed: cfg.seed,
                rounds: cfg.evaluation_rounds,
                exact: a.exact,
                lcc: cfg.lcc,
            };
            print_json(&commands::seed::cmd_seed(&req)?)?;
            Ok(Status::Complete)
        }
        Command::Features(a) => match a.network {
            Some(path) => {
                let g = maximin::graph::load_edge_list(&path, cfg.lcc)?;
                print_json(&maximin::graph::compute_features(&g, a.domain))?;
                Ok(Status::Complete)
            }
            None => Ok(commands::features::cmd_features(cfg)?.1),
        },
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let cfg = match cli.global.config() {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e:#}");
            return EXIT_USAGE;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cfg.workers).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_DATA;
        }
    };
    match pool.install(|| dispatch(&cfg, cli.command)) {
        Ok(Status::Complete) => EXIT_OK,
        Ok(Status::Partial(msg)) => {
            eprintln!("warning: {msg}");
            EXIT_PARTIAL
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_DATA
        }
    }
}
