use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use maximin::cascade::Regime;
use maximin::AlgorithmId;
use serde::{Deserialize, Serialize};

/// Settings shared by every subcommand. Values come from, in increasing
/// precedence: built-in defaults, the JSON config file, the large-network
/// preset, `MAXIMIN_*` environment variables, and command-line flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub manifest: Option<PathBuf>,
    pub regimes: Vec<Regime>,
    pub calibration_rounds: usize,
    pub evaluation_rounds: usize,
    pub runs: usize,
    pub k_max: usize,
    pub seed: u64,
    pub out: PathBuf,
    /// 0 uses every available core.
    pub workers: usize,
    pub single_core_timing: bool,
    pub timing_reps: usize,
    pub lcc: bool,
    pub large_network_preset: bool,
    pub algorithms: Vec<AlgorithmId>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            manifest: None,
            regimes: vec![Regime::Medium],
            calibration_rounds: 1000,
            evaluation_rounds: 1000,
            runs: 20,
            k_max: 10,
            seed: 0,
            out: PathBuf::from("out"),
            workers: 0,
            single_core_timing: false,
            timing_reps: 10,
            lcc: true,
            large_network_preset: false,
            algorithms: AlgorithmId::ALL.to_vec(),
        }
    }
}

/// Per-invocation overrides; `None` leaves the lower layer untouched.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub manifest: Option<PathBuf>,
    pub regimes: Option<Vec<Regime>>,
    pub rounds: Option<usize>,
    pub calibration_rounds: Option<usize>,
    pub runs: Option<usize>,
    pub k_max: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub timing_reps: Option<usize>,
    pub algorithms: Option<Vec<AlgorithmId>>,
    pub single_core_timing: bool,
    pub no_lcc: bool,
    pub large_network_preset: bool,
}

impl RunConfig {
    pub fn from_file(path: &Path) -> anyhow::Result<RunConfig> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Evaluation R = 10000, T = 3, calibration R = 1000.
    pub fn apply_large_network_preset(&mut self) {
        self.evaluation_rounds = 10_000;
        self.runs = 3;
        self.calibration_rounds = 1000;
        self.large_network_preset = true;
    }

    pub fn resolve(file: Option<&Path>, o: Overrides) -> anyhow::Result<RunConfig> {
        let mut cfg = match file {
            Some(p) => RunConfig::from_file(p)?,
            None => RunConfig::default(),
        };
        if cfg.large_network_preset || o.large_network_preset {
            cfg.apply_large_network_preset();
        }
        if let Some(v) = o.manifest {
            cfg.manifest = Some(v);
        }
        if let Some(v) = o.regimes {
            cfg.regimes = v;
        }
        if let Some(v) = o.rounds {
            cfg.evaluation_rounds = v;
        }
        if let Some(v) = o.calibration_rounds {
            cfg.calibration_rounds = v;
        }
        if let Some(v) = o.runs {
            cfg.runs = v;
        }
        if let Some(v) = o.k_max {
            cfg.k_max = v;
        }
        if let Some(v) = o.seed {
            cfg.seed = v;
        }
        if let Some(v) = o.out {
            cfg.out = v;
        }
        if let Some(v) = o.workers {
            cfg.workers = v;
        }
        if let Some(v) = o.timing_reps {
            cfg.timing_reps = v;
        }
        if let Some(v) = o.algorithms {
            cfg.algorithms = v;
        }
        cfg.single_core_timing |= o.single_core_timing;
        if o.no_lcc {
            cfg.lcc = false;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        for (name, v) in [
            ("calibration_rounds", self.calibration_rounds),
            ("evaluation_rounds", self.evaluation_rounds),
            ("runs", self.runs),
            ("timing_reps", self.timing_reps),
        ] {
            if v == 0 {
                bail!("{name} must be at least 1");
            }
        }
        if self.k_max < 2 {
            bail!("k_max must be at least 2 to fit a slope");
        }
        if self.regimes.is_empty() {
            bail!("at least one spreadability regime is required");
        }
        if self.algorithms.is_empty() {
            bail!("at least one algorithm is required");
        }
        Ok(())
    }

    pub fn manifest_path(&self) -> anyhow::Result<&Path> {
        self.manifest.as_deref().context("no manifest given (use --manifest or set it in the config file)")
    }

    pub fn out_file(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }
}
