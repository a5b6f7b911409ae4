use super::RealizationResult;
use crate::quantum::Spectrum;
use crate::{Error, Result};

/// One post-selected final state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Selected {
    pub realization: usize,
    pub state: usize,
    pub energy: f64,
    pub sigma: f64,
}

/// Keeps the final states whose energy fluctuation is at most `sigma_th`,
/// ordered by `(realization, state)`.
pub fn post_select(results: &[RealizationResult], sigma_th: f64) -> Result<Vec<Selected>> {
    if !(sigma_th > 0.0) {
        return Err(Error::Parameter(format!("sigma threshold must be > 0, got {sigma_th}")));
    }
    let mut out: Vec<Selected> = results
        .iter()
        .flat_map(|r| {
            r.final_sigmas
                .iter()
                .zip(&r.final_energies)
                .enumerate()
                .filter(|(_, (&s, _))| s <= sigma_th)
                .map(move |(j, (&sigma, &energy))| Selected { realization: r.realization_index, state: j, energy, sigma })
        })
        .collect();
    out.sort_by_key(|s| (s.realization, s.state));
    Ok(out)
}

/// `min_α |energy - E_α|`.
pub fn nearest_eigenvalue_distance(energy: f64, spec: &Spectrum) -> f64 {
    nearest_distance(energy, spec.energies())
}

/// `min_α |energy - E_α|` over an ascending slice of eigenvalues.
pub fn nearest_distance(energy: f64, sorted: &[f64]) -> f64 {
    let i = sorted.partition_point(|&e| e < energy);
    let mut best = f64::INFINITY;
    if i < sorted.len() {
        best = best.min((sorted[i] - energy).abs());
    }
    if i > 0 {
        best = best.min((energy - sorted[i - 1]).abs());
    }
    best
}

/// Sample mean and its standard error (`s / √n`, zero for a single value).
/// `None` for an empty sample.
pub fn mean_with_std_error(values: &[f64]) -> Option<(f64, f64)> {
    let n = values.len();
    if n == 0 {
        return None;
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return Some((mean, 0.0));
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    Some((mean, (var / n as f64).sqrt()))
}
