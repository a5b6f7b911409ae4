use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{HamiltonianModel, ModelParams};
use crate::quantum::{Complex64, ComplexMatrix, ONE, ZERO};
use crate::{rng, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn matrix(self) -> ComplexMatrix {
        let i = Complex64::i();
        let entries = match self {
            Pauli::I => [ONE, ZERO, ZERO, ONE],
            Pauli::X => [ZERO, ONE, ONE, ZERO],
            Pauli::Y => [ZERO, -i, i, ZERO],
            Pauli::Z => [ONE, ZERO, ZERO, -ONE],
        };
        ComplexMatrix::from_row_slice(2, 2, &entries)
    }
}

/// Tensor product over `n` qubits with the given single-qubit factors and the
/// identity elsewhere, in the order `op_0 ⊗ op_1 ⊗ … ⊗ op_{n-1}`.
pub fn pauli_product(n: usize, factors: &[(usize, Pauli)]) -> ComplexMatrix {
    let mut ops = vec![Pauli::I; n];
    for &(q, p) in factors {
        ops[q] = p;
    }
    ops.iter()
        .fold(ComplexMatrix::identity(1, 1), |acc, p| acc.kronecker(&p.matrix()))
}

fn require_qubits(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Parameter(format!("need at least 2 qubits, got {n}")));
    }
    if n > 12 {
        return Err(Error::Parameter(format!("{n} qubits is beyond dense simulation range")));
    }
    Ok(())
}

/// `H = (A + A†)/2` with independent standard complex Gaussian entries
/// (`E|A_ij|² = 1`), drawn row-major, real part first.
pub fn build_random<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<HamiltonianModel> {
    build_random_with(d, rng, None, None)
}

/// [`build_random`] on the deterministic stream `(seed, stream)`.
pub fn build_random_seeded(d: usize, seed: u64, stream: u64) -> Result<HamiltonianModel> {
    build_random_with(d, &mut rng::stream(seed, stream), Some(seed), Some(stream))
}

fn build_random_with<R: Rng + ?Sized>(
    d: usize,
    rng: &mut R,
    seed: Option<u64>,
    stream: Option<u64>,
) -> Result<HamiltonianModel> {
    if d < 2 {
        return Err(Error::Parameter(format!("random Hamiltonian needs d >= 2, got {d}")));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut entries = Vec::with_capacity(d * d);
    for _ in 0..d * d {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        entries.push(Complex64::new(re * s, im * s));
    }
    let a = DMatrix::from_row_slice(d, d, &entries);
    let h = (&a + a.adjoint()).unscale(2.0);
    HamiltonianModel::from_raw(ModelParams::Random { dim: d, seed, stream }, h)
}

/// Open-chain transverse-field Ising model with an `X_j Z_{j+1}` term, in
/// units of the transverse field `h = 1`:
///
/// `H = -J Σ_{j<N-1} Z_j Z_{j+1} - Σ_j X_j - K Σ_{j<N-1} X_j Z_{j+1}`.
pub fn build_tfim(n: usize, j_over_h: f64, k_over_h: f64) -> Result<HamiltonianModel> {
    require_qubits(n)?;
    HamiltonianModel::from_raw(
        ModelParams::Tfim { qubits: n, j_over_h, k_over_h },
        tfim_matrix(n, j_over_h, 1.0, k_over_h),
    )
}

pub(crate) fn tfim_matrix(n: usize, j: f64, h: f64, k: f64) -> ComplexMatrix {
    let d = 1 << n;
    let mut m = ComplexMatrix::zeros(d, d);
    for q in 0..n - 1 {
        m -= pauli_product(n, &[(q, Pauli::Z), (q + 1, Pauli::Z)]).scale(j);
        m -= pauli_product(n, &[(q, Pauli::X), (q + 1, Pauli::Z)]).scale(k);
    }
    for q in 0..n {
        m -= pauli_product(n, &[(q, Pauli::X)]).scale(h);
    }
    m
}

/// Seniority-zero pairing Hamiltonian with equidistant levels `ε_j = j`, in
/// units of the level spacing:
///
/// `H = Σ_j (ε_j - g/2)(I - Z_j) - (g/2) Σ_{j>k} (X_j X_k + Y_j Y_k)`.
///
/// The result conserves Hamming weight; this is checked on construction.
pub fn build_pairing(n: usize, g_over_de: f64) -> Result<HamiltonianModel> {
    require_qubits(n)?;
    let d = 1 << n;
    let mut m = ComplexMatrix::zeros(d, d);
    let id = ComplexMatrix::identity(d, d);
    for q in 0..n {
        let eps = q as f64;
        m += (&id - pauli_product(n, &[(q, Pauli::Z)])).scale(eps - g_over_de / 2.0);
    }
    for q in 1..n {
        for p in 0..q {
            let xx = pauli_product(n, &[(q, Pauli::X), (p, Pauli::X)]);
            let yy = pauli_product(n, &[(q, Pauli::Y), (p, Pauli::Y)]);
            m -= (xx + yy).scale(g_over_de / 2.0);
        }
    }
    for a in 0..d {
        for b in 0..d {
            if a.count_ones() != b.count_ones() && m[(a, b)].norm() >= 1e-14 {
                return Err(Error::SymmetryViolation(format!(
                    "pairing matrix couples {a} and {b} of different Hamming weight"
                )));
            }
        }
    }
    HamiltonianModel::from_raw(ModelParams::Pairing { levels: n, g_over_de }, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{eig_hermitian, hermiticity_residual};

    fn real_diag(m: &ComplexMatrix) -> Vec<f64> {
        (0..m.nrows()).map(|i| m[(i, i)].re).collect()
    }

    #[test]
    fn pure_ising_coupling_is_diagonal() {
        let m = tfim_matrix(2, 1.0, 0.0, 0.0);
        assert_eq!(real_diag(&m), vec![-1.0, 1.0, 1.0, -1.0]);
        assert!(m.iter().enumerate().all(|(k, z)| k % 5 == 0 || *z == ZERO));
    }

    #[test]
    fn pure_field_spectrum() {
        let spec = eig_hermitian(&tfim_matrix(2, 0.0, 1.0, 0.0)).unwrap();
        let expected = [-2.0, 0.0, 0.0, 2.0];
        for (e, x) in spec.energies().iter().zip(expected) {
            assert!((e - x).abs() < 1e-12);
        }
    }

    #[test]
    fn qubit_zero_is_most_significant() {
        // Z on qubit 0 flips sign on indices with the top bit set.
        let z0 = pauli_product(3, &[(0, Pauli::Z)]);
        assert_eq!(real_diag(&z0), vec![1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -1.0]);
    }

    #[test]
    fn random_is_deterministic_and_hermitian() {
        let a = build_random_seeded(4, 9, 1).unwrap();
        let b = build_random_seeded(4, 9, 1).unwrap();
        assert_eq!(a.raw(), b.raw());
        assert!(hermiticity_residual(a.raw()) < 1e-14);
        let c = build_random_seeded(4, 9, 3).unwrap();
        assert_ne!(a.raw(), c.raw());
    }

    #[test]
    fn random_rescaled_endpoints() {
        let m = build_random_seeded(8, 1, 1).unwrap();
        let e = m.spectrum().energies();
        assert!(e[0].abs() < 1e-10);
        assert!((e[7] - 1.0).abs() < 1e-10);
        let direct = eig_hermitian(m.rescaled()).unwrap();
        assert!(direct.min_energy().abs() < 1e-10);
        assert!((direct.max_energy() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn too_small_inputs() {
        assert!(matches!(build_random_seeded(1, 0, 0), Err(Error::Parameter(_))));
        assert!(matches!(build_tfim(1, 1.0, 0.5), Err(Error::Parameter(_))));
        assert!(matches!(build_pairing(1, 1.0), Err(Error::Parameter(_))));
    }

    #[test]
    fn pairing_vacuum_is_exact_zero_energy_eigenstate() {
        for n in 2..=5 {
            let m = build_pairing(n, 1.0).unwrap();
            let h = m.raw();
            assert_eq!(h[(0, 0)], ZERO);
            assert!((1..h.nrows()).all(|k| h[(k, 0)] == ZERO && h[(0, k)] == ZERO));
        }
    }

    #[test]
    fn pairing_two_levels_spectrum() {
        let m = build_pairing(2, 1.0).unwrap();
        let h = m.raw();
        // Weight-one block in basis (01, 10).
        assert_eq!(h[(1, 1)].re, 1.0);
        assert_eq!(h[(2, 2)].re, -1.0);
        assert_eq!(h[(1, 2)].re, -1.0);
        let spec = eig_hermitian(h).unwrap();
        let s2 = std::f64::consts::SQRT_2;
        for (e, x) in spec.energies().iter().zip([-s2, 0.0, 0.0, s2]) {
            assert!((e - x).abs() < 1e-12, "{e} vs {x}");
        }
    }

    #[test]
    fn pairing_is_block_diagonal_in_weight() {
        for n in 2..=6 {
            let m = build_pairing(n, 1.0).unwrap();
            let h = m.raw();
            for a in 0..h.nrows() {
                for b in 0..h.ncols() {
                    if a.count_ones() != b.count_ones() {
                        assert!(h[(a, b)].norm() < 1e-14);
                    }
                }
            }
        }
    }
}
