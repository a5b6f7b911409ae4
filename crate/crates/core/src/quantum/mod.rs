//! Dense complex linear algebra and quantum primitives.

mod eig;
mod evolution;
mod measure;
mod rotation;
mod state;

pub use eig::{eig_hermitian, Spectrum};
pub use evolution::{evolve_unitary, survival_probability, survival_probability_direct};
pub use measure::{measure_computational, sample_outcome};
pub use rotation::{two_level_rotation, RotationBlock};
pub use state::StateVector;

use nalgebra::DMatrix;
pub use num_complex::Complex64;

/// Dense complex square matrix. Unitaries, Hamiltonians and eigenbases all
/// use this carrier.
pub type ComplexMatrix = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Largest elementwise modulus of `H - H†`.
pub fn hermiticity_residual(h: &ComplexMatrix) -> f64 {
    let n = h.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((h[(i, j)] - h[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Largest elementwise modulus of `U†U - I`.
pub fn unitarity_residual(u: &ComplexMatrix) -> f64 {
    let gram = u.adjoint() * u;
    let mut worst = 0.0f64;
    for j in 0..gram.ncols() {
        for i in 0..gram.nrows() {
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((gram[(i, j)] - target).norm());
        }
    }
    worst
}

/// Largest elementwise modulus of `A - B`.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub(crate) fn require_square(m: &ComplexMatrix, what: &str) -> crate::Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(crate::Error::Precondition(format!(
            "{what} must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.nrows() == 0 {
        return Err(crate::Error::Precondition(format!("{what} must have dimension >= 1")));
    }
    Ok(m.nrows())
}

pub(crate) fn require_hermitian(h: &ComplexMatrix) -> crate::Result<usize> {
    let d = require_square(h, "hermitian matrix")?;
    let res = hermiticity_residual(h);
    if !(res < crate::tolerance::HERMITIAN) {
        return Err(crate::Error::Precondition(format!(
            "matrix is not hermitian: max|H - H†| = {res:e}"
        )));
    }
    Ok(d)
}
