//! Parallel realizations, deterministic merge and run outputs.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use fixpointrl_core::hamiltonians::{HamiltonianModel, ModelKind};
use fixpointrl_core::metrics::{AggregateResult, Aggregator, RealizationResult, PLATEAU_FRACTION};
use rayon::prelude::*;
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::output::{self, EnergyRow};
use crate::{emit_plots, post_select_report, ExperimentError, Result};

/// A run fails as a whole when more than this fraction of its realizations
/// failed.
pub const MAX_FAILURE_FRACTION: f64 = 0.1;

/// End-of-run outputs of one realization.
#[derive(Debug, Clone, PartialEq)]
pub struct FinalStates {
    pub realization: usize,
    pub energies: Vec<f64>,
    pub sigmas: Vec<f64>,
    pub fidelities: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl From<&RealizationResult> for FinalStates {
    fn from(r: &RealizationResult) -> Self {
        Self {
            realization: r.realization_index,
            energies: r.final_energies.clone(),
            sigmas: r.final_sigmas.clone(),
            fidelities: r.final_fidelities.clone(),
            iterations: r.iterations_to_converge,
            converged: r.converged,
        }
    }
}

/// Merged result of all realizations of one configuration.
#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    /// Means over the successful realizations; `None` if every one failed.
    pub aggregate: Option<AggregateResult>,
    /// Successful realizations in index order.
    pub finals: Vec<FinalStates>,
    /// `(realization, error message)` in index order.
    pub failures: Vec<(usize, String)>,
    /// The model shared by all realizations, or that of realization 0 when
    /// each realization draws its own.
    pub model: HamiltonianModel,
    pub requested: usize,
    pub workers: usize,
    pub elapsed: Duration,
}

impl ExperimentOutcome {
    pub fn failed_too_often(&self) -> bool {
        self.failures.len() as f64 > MAX_FAILURE_FRACTION * self.requested as f64
    }

    pub fn energy_rows(&self) -> Vec<EnergyRow> {
        self.finals
            .iter()
            .flat_map(|f| {
                f.energies.iter().zip(&f.sigmas).enumerate().map(move |(j, (&energy, &sigma))| EnergyRow {
                    realization: f.realization,
                    state: j,
                    energy,
                    sigma,
                })
            })
            .collect()
    }
}

/// What [`run_experiment`] reports back.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub out: PathBuf,
    pub realizations: usize,
    pub failed: usize,
    pub f_min: f64,
    pub f_max: f64,
    pub elapsed: Duration,
}

/// Worker count used when none is given.
pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Runs every realization of `config` on `workers` threads and merges the
/// results in realization order.
pub fn simulate(config: &ExperimentConfig, workers: usize) -> Result<ExperimentOutcome> {
    config.validate()?;
    let shared = config.build_model(0)?;
    let per_realization = config.model == ModelKind::Random;
    simulate_model(config, workers, shared, per_realization)
}

/// Runs `config`'s realizations on `model`, or on a fresh model per
/// realization when `per_realization` is set.
pub(crate) fn simulate_model(
    config: &ExperimentConfig,
    workers: usize,
    model: HamiltonianModel,
    per_realization: bool,
) -> Result<ExperimentOutcome> {
    let start = Instant::now();
    let workers = workers.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| ExperimentError::Config(format!("cannot start {workers} workers: {e}")))?;

    let one = |i: usize| -> fixpointrl_core::Result<RealizationResult> {
        let agent = config.agent_config(i);
        if per_realization && i > 0 {
            let own = config.build_model(i).map_err(|e| match e {
                ExperimentError::Core(c) => c,
                other => fixpointrl_core::Error::Precondition(other.to_string()),
            })?;
            RealizationResult::simulate(i, &own, &agent)
        } else {
            RealizationResult::simulate(i, &model, &agent)
        }
    };

    // Trajectories are large, so they are folded into the aggregate chunk by
    // chunk. The fold runs in index order whatever the chunk size.
    let chunk = (4 * workers).max(8);
    let mut agg = Aggregator::new(model.dim());
    let mut finals = Vec::with_capacity(config.realizations);
    let mut failures = Vec::new();
    let indices: Vec<usize> = (0..config.realizations).collect();
    for block in indices.chunks(chunk) {
        let results: Vec<_> = pool.install(|| block.par_iter().map(|&i| (i, one(i))).collect());
        for (i, r) in results {
            match r {
                Ok(r) => {
                    agg.push(&r)?;
                    finals.push(FinalStates::from(&r));
                }
                Err(e) => failures.push((i, e.to_string())),
            }
        }
    }
    let aggregate = if finals.is_empty() { None } else { Some(agg.finish()?) };
    Ok(ExperimentOutcome {
        aggregate,
        finals,
        failures,
        model,
        requested: config.realizations,
        workers,
        elapsed: start.elapsed(),
    })
}

/// Runs `config` and writes its outputs to `config.out`.
///
/// Sector-suite configurations are delegated to [`crate::run_sector_suite`].
pub fn run_experiment(config: &ExperimentConfig, workers: usize) -> Result<RunSummary> {
    if config.sector_suite {
        return crate::run_sector_suite(config, workers);
    }
    let outcome = simulate(config, workers)?;
    write_outputs(&config.out, config, &outcome)?;
    finish_run(config, &outcome)
}

/// Turns a run with too many failed realizations into an error, then applies
/// post-selection and plotting when configured.
pub(crate) fn finish_run(config: &ExperimentConfig, outcome: &ExperimentOutcome) -> Result<RunSummary> {
    if outcome.failed_too_often() {
        return Err(ExperimentError::TooManyFailures { failed: outcome.failures.len(), total: outcome.requested });
    }
    let agg = outcome.aggregate.as_ref().expect("a run that did not fail has an aggregate");
    finish_run_parts(config, outcome.requested, outcome.failures.len(), agg.f_min, agg.f_max, outcome.elapsed)
}

pub(crate) fn finish_run_parts(
    config: &ExperimentConfig,
    realizations: usize,
    failed: usize,
    f_min: f64,
    f_max: f64,
    elapsed: Duration,
) -> Result<RunSummary> {
    post_process(config)?;
    Ok(RunSummary { out: config.out.clone(), realizations, failed, f_min, f_max, elapsed })
}

pub(crate) fn post_process(config: &ExperimentConfig) -> Result<()> {
    if let Some(th) = config.sigma_th {
        post_select_report(&config.out, th)?;
    }
    if config.plots {
        emit_plots(&config.out)?;
    }
    Ok(())
}

/// Writes the CSV tables, `metadata.json` and `config.txt` of one run.
pub fn write_outputs(dir: &Path, config: &ExperimentConfig, outcome: &ExperimentOutcome) -> Result<()> {
    output::create_dir(dir)?;
    if let Some(agg) = &outcome.aggregate {
        output::write_fidelity(&dir.join(output::FIDELITY_CSV), &agg.mean_fidelity)?;
        output::write_exploration(&dir.join(output::EXPLORATION_CSV), &agg.mean_w_max)?;
    }
    output::write_energies(&dir.join(output::ENERGIES_CSV), &outcome.energy_rows())?;
    output::write_spectrum(&dir.join(output::SPECTRUM_CSV), &output::spectrum_rows(outcome.model.spectrum()))?;
    output::write_text(&dir.join(output::CONFIG_TXT), &config.to_text())?;
    let meta = metadata(config, outcome);
    output::write_text(&dir.join(output::METADATA_JSON), &(serde_json::to_string_pretty(&meta).unwrap() + "\n"))
}

pub(crate) fn metadata(config: &ExperimentConfig, outcome: &ExperimentOutcome) -> serde_json::Value {
    let cfg: serde_json::Map<String, serde_json::Value> =
        config.entries().into_iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    let converged = outcome.finals.iter().filter(|f| f.converged).count();
    let mean_iterations = if outcome.finals.is_empty() {
        serde_json::Value::Null
    } else {
        json!(outcome.finals.iter().map(|f| f.iterations as f64).sum::<f64>() / outcome.finals.len() as f64)
    };
    let plateau = outcome.aggregate.as_ref().map(|a| {
        json!({
            "fraction": PLATEAU_FRACTION,
            "window": a.plateau_window,
            "iterations": a.mean_w_max.len(),
            "f_max": a.f_max,
            "f_min": a.f_min,
            "per_state": a.plateau,
        })
    });
    let m = &outcome.model;
    let sector = m.sector().map(|s| {
        json!({
            "weight": s.hamming_weight,
            "basis_indices": s.basis_indices,
            "parent_e_min": s.parent_e_min,
            "parent_e_max": s.parent_e_max,
        })
    });
    json!({
        "format": output::METADATA_FORMAT,
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "config": cfg,
        "resolved": {
            "p": config.punishment_rate(),
            "k_max": config.resolved_k_max(),
            "k0": config.resolved_k0(),
        },
        "seeding": "ChaCha20 keyed by seed; realization i uses stream 2i for the agent and 2i+1 for its random model",
        "workers": outcome.workers,
        "wall_clock_seconds": outcome.elapsed.as_secs_f64(),
        "realizations": {
            "requested": outcome.requested,
            "succeeded": outcome.finals.len(),
            "converged": converged,
            "mean_iterations": mean_iterations,
            "failed": outcome.failures.iter().map(|(i, e)| json!({"index": i, "error": e})).collect::<Vec<_>>(),
        },
        "plateau": plateau,
        "model": {
            "kind": m.kind().to_string(),
            "dim": m.dim(),
            "e_min": m.e_min(),
            "e_max": m.e_max(),
            "spectrum_source": if config.model == ModelKind::Random { "realization 0" } else { "shared model" },
            "sector": sector,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentConfig {
        ExperimentConfig { realizations: 6, k_max: Some(300), ..ExperimentConfig::default() }
    }

    #[test]
    fn merge_is_independent_of_worker_count() {
        let cfg = small();
        let a = simulate(&cfg, 1).unwrap();
        let b = simulate(&cfg, 3).unwrap();
        assert_eq!(a.aggregate, b.aggregate);
        assert_eq!(a.finals, b.finals);
        assert_eq!(a.finals.iter().map(|f| f.realization).collect::<Vec<_>>(), (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn invalid_config_is_rejected_before_running() {
        let cfg = ExperimentConfig { realizations: 0, ..small() };
        assert!(matches!(simulate(&cfg, 1), Err(ExperimentError::Config(_))));
    }

    #[test]
    fn failure_threshold() {
        let mut o = simulate(&ExperimentConfig { realizations: 10, ..small() }, 1).unwrap();
        o.failures.push((10, "boom".into()));
        assert!(!o.failed_too_often());
        o.failures.push((11, "boom".into()));
        assert!(o.failed_too_often());
    }

    #[test]
    fn outputs_and_metadata() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = ExperimentConfig { out: dir.path().to_path_buf(), ..small() };
        let summary = run_experiment(&cfg, 1).unwrap();
        assert_eq!(summary.failed, 0);
        for f in [output::FIDELITY_CSV, output::EXPLORATION_CSV, output::ENERGIES_CSV, output::SPECTRUM_CSV] {
            assert!(dir.path().join(f).is_file(), "{f}");
        }
        let meta = output::read_metadata(&dir.path().join(output::METADATA_JSON)).unwrap();
        assert_eq!(meta["format"], output::METADATA_FORMAT);
        assert_eq!(meta["config"]["realizations"], "6");
        assert_eq!(meta["resolved"]["k0"], 180);
        let echoed = std::fs::read_to_string(dir.path().join(output::CONFIG_TXT)).unwrap();
        assert_eq!(ExperimentConfig::parse(&echoed).unwrap(), cfg);
        assert_eq!(output::read_energies(&dir.path().join(output::ENERGIES_CSV)).unwrap().len(), 6 * 4);
    }
}
