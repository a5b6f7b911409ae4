use nalgebra::DMatrix;

use super::{Complex64, ComplexMatrix, Spectrum, StateVector};
use crate::{Error, Result};

/// `U(τ) = V diag(e^{-iτE_α}) V†` for a dimensionless time `τ`.
pub fn evolve_unitary(spec: &Spectrum, tau: f64) -> Result<ComplexMatrix> {
    if !tau.is_finite() {
        return Err(Error::Precondition(format!("tau must be finite, got {tau}")));
    }
    let d = spec.dim();
    if tau == 0.0 {
        return Ok(ComplexMatrix::identity(d, d));
    }
    let v = spec.vectors();
    let phases: Vec<Complex64> = spec.energies().iter().map(|&e| Complex64::cis(-tau * e)).collect();
    let scaled = DMatrix::from_fn(d, d, |i, a| v[(i, a)] * phases[a]);
    Ok(scaled * v.adjoint())
}

/// Survival probability from the eigenbasis expansion `c_α = ⟨Φ_α|Ψ⟩`:
///
/// `P = 1 - 4 Σ_{α<β} |c_α|² |c_β|² sin²((E_α - E_β) τ / 2)`.
pub fn survival_probability(spec: &Spectrum, psi: &StateVector, tau: f64) -> Result<f64> {
    check_dims(spec, psi, tau)?;
    let weights: Vec<f64> = (spec.vectors().adjoint() * psi.amplitudes())
        .iter()
        .map(|c| c.norm_sqr())
        .collect();
    let e = spec.energies();
    let mut loss = 0.0;
    for a in 0..weights.len() {
        for b in (a + 1)..weights.len() {
            let s = ((e[a] - e[b]) * tau / 2.0).sin();
            loss += weights[a] * weights[b] * s * s;
        }
    }
    Ok(1.0 - 4.0 * loss)
}

/// Survival probability computed directly as `|⟨Ψ|U(τ)|Ψ⟩|²`.
pub fn survival_probability_direct(spec: &Spectrum, psi: &StateVector, tau: f64) -> Result<f64> {
    check_dims(spec, psi, tau)?;
    let u = evolve_unitary(spec, tau)?;
    let amp = psi.amplitudes().dotc(&(u * psi.amplitudes()));
    Ok(amp.norm_sqr())
}

fn check_dims(spec: &Spectrum, psi: &StateVector, tau: f64) -> Result<()> {
    if spec.dim() != psi.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), actual: psi.dim() });
    }
    if !tau.is_finite() {
        return Err(Error::Precondition(format!("tau must be finite, got {tau}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{eig_hermitian, max_abs_diff, unitarity_residual, ONE, ZERO};
    use nalgebra::DVector;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn diag(values: &[f64]) -> ComplexMatrix {
        let v: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        ComplexMatrix::from_diagonal(&DVector::from_vec(v))
    }

    #[test]
    fn zero_time_is_identity() {
        let spec = eig_hermitian(&diag(&[0.3, 0.1, 0.9])).unwrap();
        assert_eq!(evolve_unitary(&spec, 0.0).unwrap(), ComplexMatrix::identity(3, 3));
    }

    #[test]
    fn diagonal_exponential() {
        let spec = eig_hermitian(&diag(&[0.0, 1.0])).unwrap();
        let u = evolve_unitary(&spec, PI).unwrap();
        let expected = diag(&[1.0, -1.0]);
        assert!(max_abs_diff(&u, &expected) < 1e-15);
    }

    #[test]
    fn rejects_non_finite_tau() {
        let spec = eig_hermitian(&diag(&[0.0, 1.0])).unwrap();
        assert!(evolve_unitary(&spec, f64::NAN).is_err());
    }

    #[test]
    fn pauli_x_half_period() {
        let x = ComplexMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
        let spec = eig_hermitian(&x).unwrap();
        let u = evolve_unitary(&spec, PI / 2.0).unwrap();
        // e^{-iπX/2} = -iX
        let expected = x.map(|z| z * Complex64::new(0.0, -1.0));
        assert!(max_abs_diff(&u, &expected) < 1e-14);
        assert!(unitarity_residual(&u) < 1e-14);
    }

    #[test]
    fn eigenstate_survives() {
        let spec = eig_hermitian(&diag(&[0.0, 0.4, 1.0])).unwrap();
        let psi = spec.eigenvector(1);
        for tau in [0.0, 0.7, 13.0, 600.0] {
            assert!((survival_probability(&spec, &psi, tau).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn resonant_superposition_is_spurious_fixed_point() {
        // ω = 1, so ωτ = 2π leaves the superposition invariant and ωτ = π
        // sends it to the orthogonal superposition.
        let spec = eig_hermitian(&diag(&[0.0, 1.0])).unwrap();
        let amp = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let psi = StateVector::new(DVector::from_vec(vec![amp, amp])).unwrap();
        let p = survival_probability(&spec, &psi, 2.0 * PI).unwrap();
        assert!((p - 1.0).abs() < 1e-14);
        let p = survival_probability(&spec, &psi, PI).unwrap();
        assert!(p.abs() < 1e-14);
        assert!((survival_probability_direct(&spec, &psi, PI).unwrap() - p).abs() < 1e-14);
    }
}
