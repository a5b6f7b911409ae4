use super::{Complex64, ComplexMatrix, ONE, ZERO};
use crate::{Error, Result};

/// The 2×2 block of a two-level rotation,
/// `e^{-iβY/2} e^{-iγZ/2} e^{-iαX/2}`, in the ordered basis `(|j⟩, |l⟩)`.
///
/// Stored row-major as `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationBlock([Complex64; 4]);

impl RotationBlock {
    pub const IDENTITY: Self = Self([ONE, ZERO, ZERO, ONE]);

    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        if alpha == 0.0 && beta == 0.0 && gamma == 0.0 {
            return Self::IDENTITY;
        }
        let (sa, ca) = (alpha / 2.0).sin_cos();
        let (sb, cb) = (beta / 2.0).sin_cos();
        let i = Complex64::i();
        let rx = [Complex64::new(ca, 0.0), -i * sa, -i * sa, Complex64::new(ca, 0.0)];
        let rz = [Complex64::cis(-gamma / 2.0), ZERO, ZERO, Complex64::cis(gamma / 2.0)];
        let ry = [
            Complex64::new(cb, 0.0),
            Complex64::new(-sb, 0.0),
            Complex64::new(sb, 0.0),
            Complex64::new(cb, 0.0),
        ];
        Self(mul2(&mul2(&ry, &rz), &rx))
    }

    pub fn entries(&self) -> [Complex64; 4] {
        self.0
    }

    /// `D <- D R` where `R` acts on columns `j` and `l` of `D`.
    pub fn apply_right(&self, d: &mut ComplexMatrix, j: usize, l: usize) {
        let [a, b, c, e] = self.0;
        for m in 0..d.nrows() {
            let x = d[(m, j)];
            let y = d[(m, l)];
            d[(m, j)] = x * a + y * c;
            d[(m, l)] = x * b + y * e;
        }
    }
}

fn mul2(p: &[Complex64; 4], q: &[Complex64; 4]) -> [Complex64; 4] {
    [
        p[0] * q[0] + p[1] * q[2],
        p[0] * q[1] + p[1] * q[3],
        p[2] * q[0] + p[3] * q[2],
        p[2] * q[1] + p[3] * q[3],
    ]
}

/// The `d`-dimensional unitary that applies [`RotationBlock::new`] on the
/// subspace spanned by `|j⟩, |l⟩` and acts as the identity elsewhere.
pub fn two_level_rotation(
    d: usize,
    j: usize,
    l: usize,
    alpha: f64,
    beta: f64,
    gamma: f64,
) -> Result<ComplexMatrix> {
    if !(j < l && l < d) {
        return Err(Error::Index(format!("rotation requires 0 <= j < l < d, got j={j}, l={l}, d={d}")));
    }
    if !(alpha.is_finite() && beta.is_finite() && gamma.is_finite()) {
        return Err(Error::Precondition("rotation angles must be finite".into()));
    }
    let mut r = ComplexMatrix::identity(d, d);
    RotationBlock::new(alpha, beta, gamma).apply_right(&mut r, j, l);
    Ok(r)
}
