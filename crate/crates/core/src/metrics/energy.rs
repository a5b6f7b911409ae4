use crate::quantum::ComplexMatrix;
use crate::{tolerance, Error, Result};

/// `(⟨j|D† H D|j⟩, ⟨j|D† H² D|j⟩)`.
pub fn energy_moments(d: &ComplexMatrix, h: &ComplexMatrix, j: usize) -> Result<(f64, f64)> {
    if d.shape() != h.shape() || d.nrows() != d.ncols() {
        return Err(Error::DimensionMismatch { expected: h.nrows(), actual: d.nrows() });
    }
    if j >= d.ncols() {
        return Err(Error::Index(format!("state index {j} out of range for dimension {}", d.ncols())));
    }
    let x = d.column(j);
    let hx = h * x;
    let mean = x.dotc(&hx);
    if mean.im.abs() > 1e-10 {
        return Err(Error::Numerical(format!("energy expectation has imaginary part {:e}", mean.im)));
    }
    Ok((mean.re, hx.norm_squared()))
}

/// `⟨H⟩_j = ⟨j|D† H D|j⟩`.
pub fn energy_expectation(d: &ComplexMatrix, h: &ComplexMatrix, j: usize) -> Result<f64> {
    Ok(energy_moments(d, h, j)?.0)
}

/// `σ_j = sqrt(⟨H²⟩_j - ⟨H⟩_j²)`; zero exactly on eigenstates.
pub fn energy_fluctuation(d: &ComplexMatrix, h: &ComplexMatrix, j: usize) -> Result<f64> {
    let (mean, second) = energy_moments(d, h, j)?;
    let variance = second - mean * mean;
    if variance < -tolerance::VARIANCE_CLAMP {
        return Err(Error::Numerical(format!("negative energy variance {variance:e}")));
    }
    Ok(variance.max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonians::build_random_seeded;
    use crate::quantum::{two_level_rotation, Complex64};
    use nalgebra::DVector;

    #[test]
    fn identity_reads_the_diagonal() {
        let h = ComplexMatrix::from_diagonal(&DVector::from_vec(vec![
            Complex64::new(0.2, 0.0),
            Complex64::new(0.7, 0.0),
        ]));
        let id = ComplexMatrix::identity(2, 2);
        assert_eq!(energy_expectation(&id, &h, 1).unwrap(), 0.7);
        assert_eq!(energy_fluctuation(&id, &h, 1).unwrap(), 0.0);
    }

    #[test]
    fn eigenbasis_gives_eigenvalues_and_no_fluctuation() {
        let model = build_random_seeded(6, 4, 1).unwrap();
        let v = model.spectrum().vectors();
        for j in 0..6 {
            let e = energy_expectation(v, model.rescaled(), j).unwrap();
            assert!((e - model.spectrum().energies()[j]).abs() < 1e-12);
            assert!(energy_fluctuation(v, model.rescaled(), j).unwrap() < 1e-7);
        }
    }

    #[test]
    fn fair_two_level_superposition() {
        let h = ComplexMatrix::from_diagonal(&DVector::from_vec(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ]));
        // Hadamard-like rotation: e^{-iπY/4}|0⟩ = (|0⟩+|1⟩)/√2.
        let d = two_level_rotation(2, 0, 1, 0.0, std::f64::consts::FRAC_PI_2, 0.0).unwrap();
        assert!((energy_expectation(&d, &h, 0).unwrap() - 0.5).abs() < 1e-15);
        assert!((energy_fluctuation(&d, &h, 0).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_mismatched_shapes() {
        let h = ComplexMatrix::identity(3, 3);
        let d = ComplexMatrix::identity(2, 2);
        assert!(energy_expectation(&d, &h, 0).is_err());
    }
}
