use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::{require_hermitian, Complex64, ComplexMatrix, StateVector, ZERO};
use crate::{tolerance, Error, Result};

/// Eigenvalues in ascending order with column-matched orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    energies: Vec<f64>,
    vectors: ComplexMatrix,
}

impl Spectrum {
    /// Builds a spectrum from already-computed eigenpairs, sorting them by energy.
    pub fn from_parts(energies: Vec<f64>, vectors: ComplexMatrix) -> Result<Self> {
        let d = energies.len();
        if vectors.nrows() != d || vectors.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, actual: vectors.ncols() });
        }
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| energies[a].total_cmp(&energies[b]));
        let sorted = order.iter().map(|&i| energies[i]).collect();
        let cols: Vec<_> = order.iter().map(|&i| vectors.column(i)).collect();
        Ok(Self { energies: sorted, vectors: DMatrix::from_columns(&cols) })
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Eigenvectors as the columns of a unitary matrix.
    pub fn vectors(&self) -> &ComplexMatrix {
        &self.vectors
    }

    pub fn eigenvector(&self, alpha: usize) -> StateVector {
        StateVector::normalized(self.vectors.column(alpha).into_owned())
            .expect("eigenvectors are normalized")
    }

    pub fn min_energy(&self) -> f64 {
        self.energies[0]
    }

    pub fn max_energy(&self) -> f64 {
        self.energies[self.energies.len() - 1]
    }

    /// Applies the affine map `E -> (E - shift) / scale` to every energy.
    pub(crate) fn affine(&self, shift: f64, scale: f64) -> Self {
        Self {
            energies: self.energies.iter().map(|e| (e - shift) / scale).collect(),
            vectors: self.vectors.clone(),
        }
    }

    /// `Σ_α E_α |Φ_α⟩⟨Φ_α|`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let scaled = DMatrix::from_fn(self.dim(), self.dim(), |i, a| {
            self.vectors[(i, a)] * self.energies[a]
        });
        scaled * self.vectors.adjoint()
    }

    /// Groups indices of energies closer than `tol` (chained) into clusters.
    pub fn degeneracy_clusters(&self, tol: f64) -> Vec<Vec<usize>> {
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for (a, &e) in self.energies.iter().enumerate() {
            match clusters.last_mut() {
                Some(c) if e - self.energies[*c.last().unwrap()] <= tol => c.push(a),
                _ => clusters.push(vec![a]),
            }
        }
        clusters
    }

    /// Cluster label of every eigenvalue, numbered from zero in ascending order.
    pub fn cluster_labels(&self, tol: f64) -> Vec<usize> {
        let mut labels = vec![0; self.dim()];
        for (c, members) in self.degeneracy_clusters(tol).iter().enumerate() {
            for &a in members {
                labels[a] = c;
            }
        }
        labels
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The matrix is first split into the connected components of its nonzero
/// pattern and each block is diagonalized on its own, so eigenvectors never
/// mix exactly decoupled subspaces. A basis state with no couplings comes back
/// as exactly that basis vector.
pub fn eig_hermitian(h: &ComplexMatrix) -> Result<Spectrum> {
    let d = require_hermitian(h)?;

    let mut energies = Vec::with_capacity(d);
    let mut vectors = DMatrix::from_element(d, d, ZERO);
    let mut col = 0;
    for block in coupled_blocks(h) {
        let n = block.len();
        if n == 1 {
            energies.push(h[(block[0], block[0])].re);
            vectors[(block[0], col)] = Complex64::new(1.0, 0.0);
            col += 1;
            continue;
        }
        let sub = DMatrix::from_fn(n, n, |i, j| h[(block[i], block[j])]);
        let eig = SymmetricEigen::try_new(sub, f64::EPSILON, 0)
            .ok_or_else(|| Error::Numerical("eigensolver did not converge".into()))?;
        for a in 0..n {
            energies.push(eig.eigenvalues[a]);
            let v: DVector<Complex64> = eig.eigenvectors.column(a).into_owned();
            for (i, &row) in block.iter().enumerate() {
                vectors[(row, col)] = v[i];
            }
            col += 1;
        }
    }

    let spec = Spectrum::from_parts(energies, vectors)?;
    debug_assert!(
        crate::quantum::max_abs_diff(&spec.reconstruct(), h) < tolerance::EIGEN_RESIDUAL * (1.0 + max_modulus(h)),
        "eigendecomposition reconstruction failed"
    );
    Ok(spec)
}

fn max_modulus(h: &ComplexMatrix) -> f64 {
    h.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Connected components of the graph with an edge wherever `h[(i, j)] != 0`,
/// each returned as an ascending index list, ordered by smallest member.
fn coupled_blocks(h: &ComplexMatrix) -> Vec<Vec<usize>> {
    let d = h.nrows();
    let mut parent: Vec<usize> = (0..d).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..d {
        for j in (i + 1)..d {
            if h[(i, j)] != ZERO {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; d];
    for i in 0..d {
        let root = find(&mut parent, i);
        if slot[root] == usize::MAX {
            slot[root] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[slot[root]].push(i);
    }
    blocks
}
