//! Independent helpers for the integration tests: random matrices drawn
//! straight from a seeded generator and a Taylor-series matrix exponential.

#![allow(dead_code)]

use fixpointrl_core::quantum::{Complex64, ComplexMatrix};
use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn gaussian_matrix(d: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ComplexMatrix::from_fn(d, d, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        Complex64::new(re, im)
    })
}

pub fn random_hermitian(d: usize, seed: u64) -> ComplexMatrix {
    let a = gaussian_matrix(d, seed);
    (&a + a.adjoint()).unscale(2.0)
}

/// Unitary Q factor of a complex Gaussian matrix.
pub fn random_unitary(d: usize, seed: u64) -> ComplexMatrix {
    gaussian_matrix(d, seed).qr().q()
}

pub fn random_state(d: usize, seed: u64) -> DVector<Complex64> {
    let v = gaussian_matrix(d, seed).column(0).into_owned();
    let n = v.norm();
    v.unscale(n)
}

/// `exp(a)` by scaling and squaring of a truncated Taylor series.
pub fn expm(a: &ComplexMatrix) -> ComplexMatrix {
    let d = a.nrows();
    let norm = a.iter().map(|z| z.norm()).sum::<f64>();
    let mut squarings = 0;
    let mut scale = 1.0;
    while norm * scale > 0.25 {
        scale /= 2.0;
        squarings += 1;
    }
    let x = a * Complex64::new(scale, 0.0);
    let mut term = ComplexMatrix::identity(d, d);
    let mut sum = term.clone();
    for n in 1..=24 {
        term = &term * &x * Complex64::new(1.0 / n as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

pub fn max_abs(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
