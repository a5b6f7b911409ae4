use nalgebra::DVector;

use super::{Complex64, ComplexMatrix, ONE, ZERO};
use crate::{tolerance, Error, Result};

/// Normalized pure state of a `d`-level system.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector(DVector<Complex64>);

impl StateVector {
    /// Wraps `amplitudes`, rejecting vectors whose squared norm is not one.
    pub fn new(amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Precondition("state must have dimension >= 1".into()));
        }
        let norm_sq = amplitudes.norm_squared();
        if !((norm_sq - 1.0).abs() <= tolerance::NORM) {
            return Err(Error::Precondition(format!(
                "state is not normalized: sum |amplitude|^2 = {norm_sq}"
            )));
        }
        Ok(Self(amplitudes))
    }

    /// Normalizes `amplitudes` to unit length.
    pub fn normalized(mut amplitudes: DVector<Complex64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::Precondition("cannot normalize a zero or non-finite vector".into()));
        }
        amplitudes.unscale_mut(norm);
        Ok(Self(amplitudes))
    }

    /// Computational basis state `|j⟩`.
    pub fn basis(dim: usize, j: usize) -> Result<Self> {
        if j >= dim {
            return Err(Error::Index(format!("basis index {j} out of range for dimension {dim}")));
        }
        let mut v = DVector::from_element(dim, ZERO);
        v[j] = ONE;
        Ok(Self(v))
    }

    /// Column `j` of a unitary, e.g. `D|j⟩`.
    pub fn column_of(u: &ComplexMatrix, j: usize) -> Result<Self> {
        if j >= u.ncols() {
            return Err(Error::Index(format!("column {j} out of range for {} columns", u.ncols())));
        }
        Self::new(u.column(j).into_owned())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.0
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.0.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn into_inner(self) -> DVector<Complex64> {
        self.0
    }
}
