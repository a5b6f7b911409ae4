//! Independent runs in every Hamming-weight sector, merged onto the full
//! register.
//!
//! Each sector is learned with its own rescaled Hamiltonian. The merged tables
//! map energies and fluctuations back onto the rescaled scale of the full
//! Hamiltonian and label states by their full-register basis index, so they
//! are directly comparable with a full-space run.

use std::time::{Duration, Instant};

use fixpointrl_core::hamiltonians::{binomial, sector_restrict, HamiltonianModel};
use fixpointrl_core::metrics::plateau_means;
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::output::{self, EnergyRow};
use crate::runner::{finish_run_parts, metadata, simulate_model, write_outputs, ExperimentOutcome, RunSummary};
use crate::{ExperimentError, Result};

/// One sector of a suite. One-dimensional sectors are exact and carry no
/// learning run.
#[derive(Debug, Clone)]
pub struct SectorRun {
    pub weight: usize,
    pub model: HamiltonianModel,
    pub outcome: Option<ExperimentOutcome>,
}

impl SectorRun {
    pub fn dim(&self) -> usize {
        self.model.dim()
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub full_model: HamiltonianModel,
    pub sectors: Vec<SectorRun>,
    /// Merged final states in full-space units, ordered by
    /// `(realization, state_index)`.
    pub energies: Vec<EnergyRow>,
    /// The same rows tagged by weight, ordered by `(weight, realization)`.
    pub tagged: Vec<(usize, EnergyRow)>,
    /// Mean fidelity per full-register state; exact states hold 1 and
    /// sectors that stopped early hold their last value.
    pub mean_fidelity: Vec<Vec<f64>>,
    /// Per-iteration maximum of the sector means of `w^{(M)}`.
    pub mean_w_max: Vec<f64>,
    pub requested: usize,
    pub elapsed: Duration,
}

impl SuiteOutcome {
    pub fn failures(&self) -> usize {
        self.sectors.iter().filter_map(|s| s.outcome.as_ref()).map(|o| o.failures.len()).sum()
    }

    pub fn sector_dims(&self) -> Vec<usize> {
        self.sectors.iter().map(SectorRun::dim).collect()
    }
}

/// Runs every sector of `config`'s model.
pub fn simulate_sector_suite(config: &ExperimentConfig, workers: usize) -> Result<SuiteOutcome> {
    let start = Instant::now();
    let config = ExperimentConfig { sector_suite: true, sector: None, ..config.clone() };
    config.validate()?;
    let full = config.build_model(0)?;
    let n = config.qubits;

    let mut sectors = Vec::with_capacity(n + 1);
    for weight in 0..=n {
        let model = sector_restrict(&full, weight)?;
        debug_assert_eq!(model.dim(), binomial(n, weight));
        let outcome = if model.dim() == 1 {
            None
        } else {
            let sub = sector_config(&config, weight);
            Some(simulate_model(&sub, workers, model.clone(), false)?)
        };
        sectors.push(SectorRun { weight, model, outcome });
    }

    let mut tagged = Vec::new();
    for s in &sectors {
        let map = s.model.sector().expect("restricted models carry their sector map");
        let parent_width = map.parent_e_max - map.parent_e_min;
        let to_full = |e: f64| map.to_parent_rescaled(s.model.raw_energy(e));
        match &s.outcome {
            None => {
                for r in 0..config.realizations {
                    let energy = to_full(0.0);
                    tagged.push((s.weight, EnergyRow { realization: r, state: map.basis_indices[0], energy, sigma: 0.0 }));
                }
            }
            Some(o) => {
                let sigma_scale = s.model.energy_scale() / parent_width;
                for f in &o.finals {
                    for (j, (&e, &sigma)) in f.energies.iter().zip(&f.sigmas).enumerate() {
                        tagged.push((
                            s.weight,
                            EnergyRow {
                                realization: f.realization,
                                state: map.basis_indices[j],
                                energy: to_full(e),
                                sigma: sigma * sigma_scale,
                            },
                        ));
                    }
                }
            }
        }
    }
    let mut energies: Vec<EnergyRow> = tagged.iter().map(|&(_, r)| r).collect();
    energies.sort_by_key(|r| (r.realization, r.state));

    let aggregates: Vec<_> = sectors.iter().filter_map(|s| s.outcome.as_ref()?.aggregate.as_ref().map(|a| (s, a))).collect();
    let len = aggregates.iter().map(|(_, a)| a.mean_w_max.len()).max().unwrap_or(1);
    let mut mean_fidelity = vec![vec![1.0; full.dim()]; len];
    let mut mean_w_max = vec![0.0f64; len];
    for (s, a) in &aggregates {
        let basis = &s.model.sector().unwrap().basis_indices;
        let last = a.mean_w_max.len() - 1;
        for k in 0..len {
            let src = k.min(last);
            for (j, &g) in basis.iter().enumerate() {
                mean_fidelity[k][g] = a.mean_fidelity[src][j];
            }
            mean_w_max[k] = mean_w_max[k].max(a.mean_w_max[src]);
        }
    }

    Ok(SuiteOutcome {
        full_model: full,
        sectors,
        energies,
        tagged,
        mean_fidelity,
        mean_w_max,
        requested: config.realizations,
        elapsed: start.elapsed(),
    })
}

/// Runs the sector suite and writes the merged tables to `config.out`, with
/// one `weight-<w>` subdirectory per learned sector.
pub fn run_sector_suite(config: &ExperimentConfig, workers: usize) -> Result<RunSummary> {
    let suite = simulate_sector_suite(config, workers)?;
    let dir = &config.out;
    output::create_dir(dir)?;
    let mut sector_meta = Vec::new();
    let mut too_many = None;
    for s in &suite.sectors {
        let entry = match &s.outcome {
            Some(o) => {
                let sub = sector_config(config, s.weight);
                write_outputs(&sub.out, &sub, o)?;
                if o.failed_too_often() {
                    too_many.get_or_insert((o.failures.len(), o.requested));
                }
                let meta = metadata(&sub, o);
                json!({
                    "weight": s.weight,
                    "dim": s.dim(),
                    "dir": format!("weight-{}", s.weight),
                    "plateau": meta["plateau"],
                    "realizations": meta["realizations"],
                })
            }
            None => json!({ "weight": s.weight, "dim": 1, "exact": true }),
        };
        sector_meta.push(entry);
    }

    output::write_fidelity(&dir.join(output::FIDELITY_CSV), &suite.mean_fidelity)?;
    output::write_exploration(&dir.join(output::EXPLORATION_CSV), &suite.mean_w_max)?;
    output::write_energies(&dir.join(output::ENERGIES_CSV), &suite.energies)?;
    output::write_sector_energies(&dir.join(output::SECTOR_ENERGIES_CSV), &suite.tagged)?;
    output::write_spectrum(&dir.join(output::SPECTRUM_CSV), &output::spectrum_rows(suite.full_model.spectrum()))?;
    output::write_text(&dir.join(output::CONFIG_TXT), &config.to_text())?;

    let (plateau, window) = plateau_means(&suite.mean_fidelity);
    let f_max = plateau.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let f_min = plateau.iter().copied().fold(f64::INFINITY, f64::min);
    let cfg: serde_json::Map<String, serde_json::Value> =
        config.entries().into_iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    let meta = json!({
        "format": output::METADATA_FORMAT,
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "config": cfg,
        "resolved": { "p": config.punishment_rate(), "k_max": config.resolved_k_max(), "k0": config.resolved_k0() },
        "seeding": "ChaCha20 keyed by seed; realization i uses stream 2i in every sector",
        "workers": workers.max(1),
        "wall_clock_seconds": suite.elapsed.as_secs_f64(),
        "units": "energies and sigmas rescaled by the extreme eigenvalues of the full Hamiltonian",
        "plateau": { "window": window, "f_max": f_max, "f_min": f_min, "per_state": plateau },
        "model": {
            "kind": suite.full_model.kind().to_string(),
            "dim": suite.full_model.dim(),
            "e_min": suite.full_model.e_min(),
            "e_max": suite.full_model.e_max(),
        },
        "sectors": sector_meta,
    });
    output::write_text(&dir.join(output::METADATA_JSON), &(serde_json::to_string_pretty(&meta).unwrap() + "\n"))?;

    if let Some((failed, total)) = too_many {
        return Err(ExperimentError::TooManyFailures { failed, total });
    }
    finish_run_parts(config, suite.requested, suite.failures(), f_min, f_max, suite.elapsed)
}

fn sector_config(config: &ExperimentConfig, weight: usize) -> ExperimentConfig {
    ExperimentConfig {
        sector: Some(weight),
        sector_suite: false,
        sigma_th: None,
        plots: false,
        out: config.out.join(format!("weight-{weight}")),
        ..config.clone()
    }
}
