//! Numerical tolerances used across the crate.

/// Maximum elementwise |H - H†| for a matrix to be treated as Hermitian.
pub const HERMITIAN: f64 = 1e-12;

/// Maximum elementwise |U†U - I| for a matrix to be treated as unitary.
pub const UNITARY: f64 = 1e-10;

/// Maximum deviation of a state's squared norm from one.
pub const NORM: f64 = 1e-10;

/// Required accuracy of eigenpairs, `|H v - E v|` elementwise.
pub const EIGEN_RESIDUAL: f64 = 1e-8;

/// Smallest spectral width for which rescaling to [0, 1] is defined.
pub const SPECTRAL_WIDTH: f64 = 1e-12;

/// Largest matrix element allowed between sectors of different Hamming weight.
pub const SECTOR_COUPLING: f64 = 1e-12;

/// Drift of the learned unitary above which it is re-orthonormalized. Drift is
/// checked every [`ORTHO_CHECK_INTERVAL`] iterations; this is kept one order
/// below [`UNITARY`] so that the invariant holds between checks.
pub const REORTHONORMALIZE: f64 = 1e-11;

/// Iterations between unitarity checks of the learned transformation.
pub const ORTHO_CHECK_INTERVAL: usize = 16;

/// Negative variance radicands down to this value are clamped to zero.
pub const VARIANCE_CLAMP: f64 = 1e-10;

/// Eigenvalues closer than this are grouped into one degenerate cluster.
pub const DEGENERACY: f64 = 1e-8;
