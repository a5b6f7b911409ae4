//! Fluctuation-threshold post-selection of a completed run.

use std::path::Path;

use fixpointrl_core::metrics::{mean_with_std_error, nearest_distance};

use crate::output::{self, EnergyRow};
use crate::{ExperimentError, Result};

/// Thresholds of the distance sweep; the requested threshold is added when it
/// is not among them.
pub const SIGMA_SWEEP: [f64; 5] = [0.005, 0.01, 0.02, 0.05, 0.1];

/// Mean nearest-eigenvalue distance of the states kept at one threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub sigma_th: f64,
    /// Mean and standard error; `None` when nothing is selected.
    pub distance: Option<(f64, f64)>,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PostSelectReport {
    pub sigma_th: f64,
    pub total: usize,
    pub selected: Vec<EnergyRow>,
    /// Distance statistics over every final state and over the selection.
    /// `None` when the run has no shared spectrum (random models).
    pub all_distance: Option<(f64, f64)>,
    pub selected_distance: Option<(f64, f64)>,
    pub sweep: Vec<SweepRow>,
}

/// Reads `energies.csv` and `spectrum.csv` from `dir`, writes `selected.csv`
/// and, when the run used one fixed model, `distance_sweep.csv`.
pub fn post_select_report(dir: &Path, sigma_th: f64) -> Result<PostSelectReport> {
    if !(sigma_th > 0.0 && sigma_th.is_finite()) {
        return Err(ExperimentError::Config(format!("sigma threshold must be > 0, got {sigma_th}")));
    }
    let energies_path = dir.join(output::ENERGIES_CSV);
    let rows = output::read_energies(&energies_path)?;
    if rows.is_empty() {
        return Err(ExperimentError::NoData(format!("{} has no rows", energies_path.display())));
    }
    let mut spectrum: Vec<f64> = output::read_spectrum(&dir.join(output::SPECTRUM_CSV))?.iter().map(|r| r.energy).collect();
    spectrum.sort_by(f64::total_cmp);
    let shared_model = !per_realization_models(dir)?;

    let mut selected: Vec<EnergyRow> = rows.iter().copied().filter(|r| r.sigma <= sigma_th).collect();
    selected.sort_by_key(|r| (r.realization, r.state));
    output::write_energies(&dir.join(output::SELECTED_CSV), &selected)?;

    let distances = |th: f64| -> Vec<f64> {
        rows.iter().filter(|r| r.sigma <= th).map(|r| nearest_distance(r.energy, &spectrum)).collect()
    };
    let mut report = PostSelectReport {
        sigma_th,
        total: rows.len(),
        selected,
        all_distance: None,
        selected_distance: None,
        sweep: Vec::new(),
    };
    if !shared_model || spectrum.is_empty() {
        return Ok(report);
    }
    report.all_distance = mean_with_std_error(&distances(f64::INFINITY));
    report.selected_distance = mean_with_std_error(&distances(sigma_th));

    let mut thresholds = SIGMA_SWEEP.to_vec();
    if !thresholds.contains(&sigma_th) {
        thresholds.push(sigma_th);
        thresholds.sort_by(f64::total_cmp);
    }
    report.sweep = thresholds
        .into_iter()
        .map(|th| {
            let d = distances(th);
            SweepRow { sigma_th: th, distance: mean_with_std_error(&d), count: d.len() }
        })
        .collect();
    let table: Vec<_> = report.sweep.iter().map(|r| (r.sigma_th, r.distance, r.count)).collect();
    output::write_distance_sweep(&dir.join(output::DISTANCE_SWEEP_CSV), &table)?;
    Ok(report)
}

/// Whether every realization of the run in `dir` drew its own model. Runs
/// without metadata are assumed to share one.
fn per_realization_models(dir: &Path) -> Result<bool> {
    let path = dir.join(output::METADATA_JSON);
    if !path.exists() {
        return Ok(false);
    }
    let meta = output::read_metadata(&path)?;
    Ok(meta["model"]["spectrum_source"] == "realization 0")
}
