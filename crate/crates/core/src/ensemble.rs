//! Monte Carlo ensembles: many seeds of one scenario, and side-by-side
//! comparison of scenarios over a common seed set.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{run, RunOutput};
use crate::scenario::ScenarioConfig;
use crate::stats::Summary;

/// Aggregate of independent runs of one scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EnsembleResult {
    pub scenario_name: String,
    pub replications: usize,
    pub mean_total_dead: f64,
    /// Sample standard deviation (n - 1 denominator); 0 for a single run.
    pub std_total_dead: f64,
    pub mean_total_immune: f64,
    pub mean_simulation_period: f64,
    pub seeds: Vec<u64>,
    pub per_seed_summaries: Vec<Summary>,
}

impl EnsembleResult {
    pub fn from_summaries(scenario_name: impl Into<String>, seeds: Vec<u64>, summaries: Vec<Summary>) -> Self {
        assert_eq!(seeds.len(), summaries.len());
        let dead: Vec<f64> = summaries.iter().map(|s| s.total_dead as f64).collect();
        let immune: Vec<f64> = summaries.iter().map(|s| s.total_immune as f64).collect();
        let period: Vec<f64> = summaries.iter().map(|s| s.simulation_period as f64).collect();
        Self {
            scenario_name: scenario_name.into(),
            replications: summaries.len(),
            mean_total_dead: mean(&dead),
            std_total_dead: sample_std(&dead),
            mean_total_immune: mean(&immune),
            mean_simulation_period: mean(&period),
            seeds,
            per_seed_summaries: summaries,
        }
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    (ss / (xs.len() - 1) as f64).sqrt()
}

/// Seeds `0..n`.
pub fn default_seeds(n: usize) -> Vec<u64> {
    (0..n as u64).collect()
}

/// Runs `config` once per seed on up to `jobs` threads.
///
/// `on_run` sees each finished run (on the worker thread) and may fail it.
/// Results come back in seed order regardless of scheduling.
pub fn run_replications<F>(
    config: &ScenarioConfig,
    seeds: &[u64],
    jobs: usize,
    on_run: F,
) -> Vec<Result<Summary, String>>
where
    F: Fn(u64, &RunOutput) -> Result<(), String> + Sync,
{
    let config = Arc::new(config.clone());
    let work = || {
        seeds
            .par_iter()
            .map(|&seed| {
                let output = run(Arc::clone(&config), seed);
                on_run(seed, &output).map(|()| output.summary)
            })
            .collect()
    };
    match rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build() {
        Ok(pool) => pool.install(work),
        Err(e) => {
            log::info!("falling back to the global thread pool: {e}");
            work()
        }
    }
}

/// Runs a whole ensemble, keeping only summaries.
pub fn run_ensemble(name: &str, config: &ScenarioConfig, seeds: &[u64], jobs: usize) -> EnsembleResult {
    let summaries = run_replications(config, seeds, jobs, |_, _| Ok(()))
        .into_iter()
        .map(|r| r.expect("no per-run hook to fail"))
        .collect();
    EnsembleResult::from_summaries(name, seeds.to_vec(), summaries)
}

/// Ensembles over a shared seed set, sorted by ascending mean deaths (ties
/// keep input order).
pub fn compare(scenarios: &[(String, ScenarioConfig)], seeds: &[u64], jobs: usize) -> Vec<EnsembleResult> {
    let mut results: Vec<EnsembleResult> = scenarios
        .iter()
        .map(|(name, config)| run_ensemble(name, config, seeds, jobs))
        .collect();
    results.sort_by(|a, b| a.mean_total_dead.total_cmp(&b.mean_total_dead));
    results
}

pub const COMPARISON_HEADER: &str =
    "scenario,meanTotalDead,stdTotalDead,meanTotalImmune,meanSimulationPeriod";

/// Renders a comparison as CSV, one row per scenario in the given order.
pub fn comparison_csv(results: &[EnsembleResult]) -> String {
    let mut out = String::from(COMPARISON_HEADER);
    out.push('\n');
    for r in results {
        out.push_str(&format!(
            "{},{:.4},{:.4},{:.4},{:.4}\n",
            r.scenario_name,
            r.mean_total_dead,
            r.std_total_dead,
            r.mean_total_immune,
            r.mean_simulation_period
        ));
    }
    out
}
