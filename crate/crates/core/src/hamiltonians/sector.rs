use nalgebra::DMatrix;

use super::HamiltonianModel;
use crate::{tolerance, Error, Result};

/// Computational-basis states of a fixed Hamming weight.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorMap {
    pub qubits: usize,
    pub hamming_weight: usize,
    /// Ascending full-space indices of the sector's basis states.
    pub basis_indices: Vec<usize>,
    /// Extreme raw eigenvalues of the full (unrestricted) Hamiltonian.
    pub parent_e_min: f64,
    pub parent_e_max: f64,
}

impl SectorMap {
    pub fn dim(&self) -> usize {
        self.basis_indices.len()
    }

    /// Maps a raw energy onto the rescaled scale of the full Hamiltonian.
    pub fn to_parent_rescaled(&self, raw: f64) -> f64 {
        (raw - self.parent_e_min) / (self.parent_e_max - self.parent_e_min)
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Ascending indices in `0..2^n` with exactly `weight` set bits.
pub fn sector_basis(n: usize, weight: usize) -> Vec<usize> {
    (0..1usize << n).filter(|i| i.count_ones() as usize == weight).collect()
}

/// Restricts a weight-conserving model to one Hamming-weight sector and
/// rescales the block within the sector.
///
/// A one-dimensional sector is returned without rescaling: its single basis
/// state is exact and its rescaled energy is 0.
pub fn sector_restrict(model: &HamiltonianModel, weight: usize) -> Result<HamiltonianModel> {
    if model.sector().is_some() {
        return Err(Error::Parameter("model is already sector-restricted".into()));
    }
    let n = model.params().qubits().ok_or_else(|| {
        Error::Parameter(format!("dimension {} is not a qubit register", model.dim()))
    })?;
    if weight > n {
        return Err(Error::Parameter(format!("weight {weight} out of range 0..={n}")));
    }
    let basis = sector_basis(n, weight);
    let raw = model.raw();
    for &a in &basis {
        for b in 0..raw.ncols() {
            if b.count_ones() as usize != weight && raw[(a, b)].norm() > tolerance::SECTOR_COUPLING {
                return Err(Error::SymmetryViolation(format!(
                    "H[{a},{b}] = {} couples Hamming weight {weight} to weight {}",
                    raw[(a, b)],
                    b.count_ones()
                )));
            }
        }
    }
    let block = DMatrix::from_fn(basis.len(), basis.len(), |i, j| raw[(basis[i], basis[j])]);
    let map = SectorMap {
        qubits: n,
        hamming_weight: weight,
        basis_indices: basis,
        parent_e_min: model.e_min(),
        parent_e_max: model.e_max(),
    };
    if map.dim() == 1 {
        return Ok(HamiltonianModel::trivial(model.params().clone(), block, Some(map)));
    }
    Ok(HamiltonianModel::from_raw(model.params().clone(), block)?.with_sector(map))
}
