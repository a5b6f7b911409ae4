use rand::Rng;

use super::StateVector;
use crate::{tolerance, Error, Result};

/// Single-shot projective measurement in the computational basis.
///
/// Consumes exactly one uniform draw from `rng`.
pub fn measure_computational<R: Rng + ?Sized>(state: &StateVector, rng: &mut R) -> Result<usize> {
    let probs = state.probabilities();
    let total: f64 = probs.iter().sum();
    if !((total - 1.0).abs() <= tolerance::NORM) {
        return Err(Error::Precondition(format!("state is not normalized: total probability {total}")));
    }
    Ok(sample_outcome(&probs, rng.random::<f64>()))
}

/// Inverse-CDF sampling of an outcome from unnormalized weights with a
/// uniform draw `u ∈ [0, 1)`. Outcomes of zero weight are never returned.
pub fn sample_outcome(weights: &[f64], u: f64) -> usize {
    let total: f64 = weights.iter().sum();
    let target = u * total;
    let mut acc = 0.0;
    let mut last_nonzero = 0;
    for (m, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            acc += w;
            last_nonzero = m;
            if target < acc {
                return m;
            }
        }
    }
    last_nonzero
}
