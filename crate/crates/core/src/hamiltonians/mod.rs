//! Hamiltonian families, spectral rescaling and Hamming-weight sectors.
//!
//! All models are assembled densely. Qubit `q` of an `N`-qubit register is
//! bit `N - 1 - q` of the basis index (qubit 0 is the most significant bit),
//! which is the Kronecker order `op_0 ⊗ op_1 ⊗ … ⊗ op_{N-1}`.

mod builders;
mod format;
mod sector;

pub use builders::{build_pairing, build_random, build_random_seeded, build_tfim, pauli_product, Pauli};
pub use format::{parse_model_text, write_model_text, FORMAT_HEADER};
pub use sector::{binomial, sector_basis, sector_restrict, SectorMap};

use std::fmt;
use std::str::FromStr;

use crate::quantum::{eig_hermitian, require_hermitian, Complex64, ComplexMatrix, Spectrum};
use crate::{tolerance, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Random,
    Tfim,
    Pairing,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Random => "random",
            ModelKind::Tfim => "tfim",
            ModelKind::Pairing => "pairing",
        })
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(ModelKind::Random),
            "tfim" => Ok(ModelKind::Tfim),
            "pairing" => Ok(ModelKind::Pairing),
            other => Err(Error::Parameter(format!("unknown model kind `{other}`"))),
        }
    }
}

/// Construction parameters. Energies are in units of `h` (TFIM) or `Δε`
/// (pairing).
#[derive(Debug, Clone, PartialEq)]
pub enum ModelParams {
    Random { dim: usize, seed: Option<u64>, stream: Option<u64> },
    Tfim { qubits: usize, j_over_h: f64, k_over_h: f64 },
    Pairing { levels: usize, g_over_de: f64 },
}

impl ModelParams {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelParams::Random { .. } => ModelKind::Random,
            ModelParams::Tfim { .. } => ModelKind::Tfim,
            ModelParams::Pairing { .. } => ModelKind::Pairing,
        }
    }

    /// Number of qubits, when the model lives on a qubit register.
    pub fn qubits(&self) -> Option<usize> {
        match *self {
            ModelParams::Tfim { qubits, .. } => Some(qubits),
            ModelParams::Pairing { levels, .. } => Some(levels),
            ModelParams::Random { dim, .. } => {
                dim.is_power_of_two().then(|| dim.trailing_zeros() as usize)
            }
        }
    }
}

/// A Hamiltonian together with its `[0, 1]`-rescaled form and the exact
/// spectrum of the rescaled matrix.
#[derive(Debug, Clone)]
pub struct HamiltonianModel {
    params: ModelParams,
    raw: ComplexMatrix,
    rescaled: ComplexMatrix,
    spectrum: Spectrum,
    e_min: f64,
    e_max: f64,
    sector: Option<SectorMap>,
}

impl HamiltonianModel {
    /// Rescales and diagonalizes `raw`.
    pub fn from_raw(params: ModelParams, raw: ComplexMatrix) -> Result<Self> {
        let raw_spec = eig_hermitian(&raw)?;
        let (e_min, e_max) = (raw_spec.min_energy(), raw_spec.max_energy());
        let width = e_max - e_min;
        if width < tolerance::SPECTRAL_WIDTH {
            return Err(Error::DegenerateSpectrum(width));
        }
        Ok(Self {
            params,
            rescaled: rescale_with(&raw, e_min, e_max),
            spectrum: raw_spec.affine(e_min, width),
            raw,
            e_min,
            e_max,
            sector: None,
        })
    }

    /// A one-dimensional model: its single state is exact, no rescaling.
    pub(crate) fn trivial(params: ModelParams, raw: ComplexMatrix, sector: Option<SectorMap>) -> Self {
        let e = raw[(0, 0)].re;
        Self {
            params,
            raw,
            rescaled: ComplexMatrix::from_element(1, 1, Complex64::new(0.0, 0.0)),
            spectrum: Spectrum::from_parts(vec![0.0], ComplexMatrix::identity(1, 1)).unwrap(),
            e_min: e,
            e_max: e,
            sector,
        }
    }

    pub fn kind(&self) -> ModelKind {
        self.params.kind()
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.raw.nrows()
    }

    pub fn raw(&self) -> &ComplexMatrix {
        &self.raw
    }

    /// `H̃ = (H - E_min) / (E_max - E_min)`.
    pub fn rescaled(&self) -> &ComplexMatrix {
        &self.rescaled
    }

    /// Exact spectrum of [`Self::rescaled`].
    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn e_min(&self) -> f64 {
        self.e_min
    }

    pub fn e_max(&self) -> f64 {
        self.e_max
    }

    pub fn sector(&self) -> Option<&SectorMap> {
        self.sector.as_ref()
    }

    /// Maps a rescaled energy back to raw units.
    pub fn raw_energy(&self, rescaled: f64) -> f64 {
        self.e_min + rescaled * (self.e_max - self.e_min)
    }

    /// Factor converting rescaled energy differences back to raw units.
    pub fn energy_scale(&self) -> f64 {
        self.e_max - self.e_min
    }

    pub(crate) fn with_sector(mut self, sector: SectorMap) -> Self {
        self.sector = Some(sector);
        self
    }
}

/// `H̃ = (H - E_min I) / (E_max - E_min)` with the extreme eigenvalues of `h`.
pub fn rescale(h: &ComplexMatrix) -> Result<(ComplexMatrix, f64, f64)> {
    require_hermitian(h)?;
    let spec = eig_hermitian(h)?;
    let (e_min, e_max) = (spec.min_energy(), spec.max_energy());
    if e_max - e_min < tolerance::SPECTRAL_WIDTH {
        return Err(Error::DegenerateSpectrum(e_max - e_min));
    }
    Ok((rescale_with(h, e_min, e_max), e_min, e_max))
}

fn rescale_with(h: &ComplexMatrix, e_min: f64, e_max: f64) -> ComplexMatrix {
    let width = e_max - e_min;
    let mut out = h.clone();
    for i in 0..out.nrows() {
        out[(i, i)] -= Complex64::new(e_min, 0.0);
    }
    out.unscale_mut(width);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::max_abs_diff;
    use nalgebra::DVector;

    fn diag(values: &[f64]) -> ComplexMatrix {
        let v: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        ComplexMatrix::from_diagonal(&DVector::from_vec(v))
    }

    #[test]
    fn rescale_diagonal() {
        let (h, lo, hi) = rescale(&diag(&[-3.0, 1.0, 5.0])).unwrap();
        assert_eq!((lo, hi), (-3.0, 5.0));
        assert!(max_abs_diff(&h, &diag(&[0.0, 0.5, 1.0])) < 1e-15);
    }

    #[test]
    fn rescale_is_idempotent_on_unit_interval() {
        let h0 = diag(&[0.0, 0.25, 1.0]);
        let (h, _, _) = rescale(&h0).unwrap();
        assert!(max_abs_diff(&h, &h0) < 1e-12);
    }

    #[test]
    fn rescale_is_scale_invariant() {
        let h0 = build_tfim(3, 1.0, 0.5).unwrap().raw().clone();
        let (a, _, _) = rescale(&h0).unwrap();
        let (b, _, _) = rescale(&h0.scale(7.5)).unwrap();
        assert!(max_abs_diff(&a, &b) < 1e-12);
    }

    #[test]
    fn rescale_rejects_flat_spectrum() {
        assert!(matches!(rescale(&diag(&[2.0, 2.0])), Err(Error::DegenerateSpectrum(_))));
    }

    #[test]
    fn kind_round_trips_through_text() {
        for k in [ModelKind::Random, ModelKind::Tfim, ModelKind::Pairing] {
            assert_eq!(k.to_string().parse::<ModelKind>().unwrap(), k);
        }
        assert!("ising".parse::<ModelKind>().is_err());
    }
}
