use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::graph::{Graph, NodeId};
use crate::seeders::SeedStrategy;

/// Wall-clock samples for one algorithm on one network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingRecord {
    pub algorithm: String,
    pub network: String,
    pub k: usize,
    pub samples_ms: Vec<f64>,
    pub mean_ms: f64,
    pub std_ms: f64,
    pub single_core: bool,
}

impl TimingRecord {
    fn from_samples(algorithm: String, network: String, k: usize, samples_ms: Vec<f64>, single_core: bool) -> Self {
        let n = samples_ms.len() as f64;
        let mean_ms = samples_ms.iter().sum::<f64>() / n;
        let std_ms = if samples_ms.len() > 1 {
            (samples_ms.iter().map(|s| (s - mean_ms).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        TimingRecord { algorithm, network, k, samples_ms, mean_ms, std_ms, single_core }
    }
}

#[cfg(target_os = "linux")]
fn pin_current_thread() -> bool {
    // SAFETY: cpu_set_t is plain data, and the calls only touch the calling thread.
    unsafe {
        let cpu = libc::sched_getcpu();
        if cpu < 0 {
            return false;
        }
        let mut set: libc::cpu_set_t = std::mem::zeroed();
        libc::CPU_SET(cpu as usize, &mut set);
        libc::sched_setaffinity(0, std::mem::size_of::<libc::cpu_set_t>(), &set) == 0
    }
}

#[cfg(not(target_os = "linux"))]
fn pin_current_thread() -> bool {
    false
}

/// Runs `f` on a dedicated one-thread pool, so any data-parallel work inside
/// executes serially. With `pin` the worker is bound to the CPU it starts on.
pub fn run_single_core<R: Send>(pin: bool, f: impl FnOnce() -> R + Send) -> Result<R, EvalError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(|e| EvalError::ThreadPool(e.to_string()))?;
    Ok(pool.install(|| {
        if pin && !pin_current_thread() {
            log::warn!("could not pin timing thread to a CPU");
        }
        f()
    }))
}

/// Times `reps` full selections of `k` seeds from `init`.
pub fn benchmark_runtime(
    g: &Graph,
    strategy: &dyn SeedStrategy,
    init: NodeId,
    k: usize,
    reps: usize,
    rng_seed: u64,
    single_core: bool,
) -> Result<TimingRecord, EvalError> {
    if reps == 0 {
        return Err(EvalError::NoRuns);
    }
    let sample = || -> Result<Vec<f64>, EvalError> {
        (0..reps)
            .map(|rep| {
                let start = Instant::now();
                strategy.select(g, init, k, rng_seed.wrapping_add(rep as u64))?;
                Ok((start.elapsed().as_secs_f64() * 1e3).max(1e-6))
            })
            .collect()
    };
    let samples = if single_core { run_single_core(true, sample)?? } else { sample()? };
    Ok(TimingRecord::from_samples(strategy.name(), g.name().unwrap_or("").to_string(), k, samples, single_core))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate;
    use crate::seeders::{Algorithm, AlgorithmId, SeederParams};

    #[test]
    fn single_core_pool_has_one_thread() {
        assert_eq!(run_single_core(false, rayon::current_num_threads).unwrap(), 1);
    }

    #[test]
    fn records_positive_samples() {
        let g = generate::cycle(50);
        let alg = Algorithm::new(AlgorithmId::MinDegreeHc, SeederParams::new(0.5));
        let rec = benchmark_runtime(&g, &alg, 0, 5, 3, 0, true).unwrap();
        assert_eq!(rec.samples_ms.len(), 3);
        assert!(rec.samples_ms.iter().all(|&s| s > 0.0));
        assert!(rec.single_core);
        assert_eq!(rec.algorithm, "min_degree_hc");
    }
}
