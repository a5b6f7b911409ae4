use crate::quantum::{ComplexMatrix, Spectrum};
use crate::{Error, Result};

fn check(d: &ComplexMatrix, spec: &Spectrum, j: usize) -> Result<()> {
    if d.nrows() != spec.dim() || d.ncols() != spec.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), actual: d.nrows() });
    }
    if j >= d.ncols() {
        return Err(Error::Index(format!("state index {j} out of range for dimension {}", d.ncols())));
    }
    Ok(())
}

/// Maximum square-root fidelity `max_α |⟨Φ_α|D|j⟩|`.
pub fn fidelity(d: &ComplexMatrix, spec: &Spectrum, j: usize) -> Result<f64> {
    check(d, spec, j)?;
    let col = d.column(j);
    Ok((0..spec.dim())
        .map(|a| spec.vectors().column(a).dotc(&col).norm())
        .fold(0.0, f64::max))
}

/// [`fidelity`] for every basis state `j`.
pub fn fidelities(d: &ComplexMatrix, spec: &Spectrum) -> Result<Vec<f64>> {
    if d.nrows() != spec.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), actual: d.nrows() });
    }
    let overlaps = spec.vectors().ad_mul(d);
    Ok((0..d.ncols())
        .map(|j| overlaps.column(j).iter().map(|z| z.norm()).fold(0.0, f64::max))
        .collect())
}

/// Largest norm of the projection of `D|j⟩` onto any eigenspace, with
/// eigenvalues closer than `degeneracy_tol` merged into one eigenspace.
///
/// Unlike [`fidelity`] this does not depend on which basis the eigensolver
/// picked inside a degenerate eigenspace.
pub fn subspace_fidelity(d: &ComplexMatrix, spec: &Spectrum, j: usize, degeneracy_tol: f64) -> Result<f64> {
    check(d, spec, j)?;
    if !(degeneracy_tol > 0.0) {
        return Err(Error::Parameter(format!("degeneracy tolerance must be > 0, got {degeneracy_tol}")));
    }
    let col = d.column(j);
    let weights: Vec<f64> = (0..spec.dim())
        .map(|a| spec.vectors().column(a).dotc(&col).norm_sqr())
        .collect();
    Ok(spec
        .degeneracy_clusters(degeneracy_tol)
        .iter()
        .map(|c| c.iter().map(|&a| weights[a]).sum::<f64>().sqrt())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonians::build_random_seeded;
    use crate::quantum::{eig_hermitian, two_level_rotation, Complex64};
    use nalgebra::DVector;

    fn diag(values: &[f64]) -> ComplexMatrix {
        let v: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        ComplexMatrix::from_diagonal(&DVector::from_vec(v))
    }

    #[test]
    fn identity_on_computational_eigenbasis() {
        let spec = eig_hermitian(&diag(&[0.0, 0.3, 0.6, 1.0])).unwrap();
        let id = ComplexMatrix::identity(4, 4);
        for j in 0..4 {
            assert_eq!(fidelity(&id, &spec, j).unwrap(), 1.0);
        }
    }

    #[test]
    fn exact_eigenbasis_transform() {
        let model = build_random_seeded(4, 2, 1).unwrap();
        let v = model.spectrum().vectors().clone();
        for f in fidelities(&v, model.spectrum()).unwrap() {
            assert!((f - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_pair_has_full_subspace_fidelity() {
        let spec = eig_hermitian(&diag(&[0.0, 0.5, 0.5, 1.0])).unwrap();
        let d = two_level_rotation(4, 1, 2, 0.7, 0.2, -0.4).unwrap();
        let f = fidelity(&d, &spec, 1).unwrap();
        let sf = subspace_fidelity(&d, &spec, 1, 1e-8).unwrap();
        assert!(f < 0.99);
        assert!((sf - 1.0).abs() < 1e-12);
    }

    #[test]
    fn subspace_equals_plain_when_nondegenerate() {
        let model = build_random_seeded(4, 8, 1).unwrap();
        let d = two_level_rotation(4, 0, 3, 0.7, 0.2, -0.4).unwrap();
        for j in 0..4 {
            let f = fidelity(&d, model.spectrum(), j).unwrap();
            let sf = subspace_fidelity(&d, model.spectrum(), j, 1e-8).unwrap();
            assert!((f - sf).abs() < 1e-12);
        }
    }

    #[test]
    fn errors() {
        let spec = eig_hermitian(&diag(&[0.0, 1.0])).unwrap();
        let id = ComplexMatrix::identity(3, 3);
        assert!(fidelity(&id, &spec, 0).is_err());
        let id = ComplexMatrix::identity(2, 2);
        assert!(fidelity(&id, &spec, 2).is_err());
        assert!(subspace_fidelity(&id, &spec, 0, 0.0).is_err());
    }
}
