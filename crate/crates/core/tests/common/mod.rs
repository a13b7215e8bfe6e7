#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::Rng;

use squeezeflow::bogoliubov::{compose, BogoliubovN, ZMatrix};
use squeezeflow::linalg::{operator_norm, CMat};

pub fn random_matrix<R: Rng>(n: usize, rng: &mut R) -> CMat {
    DMatrix::from_fn(n, n, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// Unitary from the QR factorization of a random matrix.
pub fn random_unitary<R: Rng>(n: usize, rng: &mut R) -> CMat {
    let qr = random_matrix(n, rng).qr();
    let q = qr.q();
    let r = qr.r();
    let mut u = q.clone();
    for j in 0..n {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            u[(i, j)] = q[(i, j)] * ph;
        }
    }
    u
}

/// Symmetric matrix with operator norm drawn uniformly from `[0, max_norm)`.
pub fn random_symmetric_contraction<R: Rng>(n: usize, max_norm: f64, rng: &mut R) -> ZMatrix {
    let a = random_matrix(n, rng);
    let s = (&a + a.transpose()) * C64::new(0.5, 0.0);
    let norm = operator_norm(&s);
    let target = rng.gen_range(0.0..max_norm);
    ZMatrix::new(s * C64::new(target / norm, 0.0)).unwrap()
}

/// A generic element `gauge(W₁) · φ(Z) · gauge(W₂)`.
pub fn random_bogoliubov<R: Rng>(n: usize, max_tanh: f64, rng: &mut R) -> BogoliubovN {
    let z = random_symmetric_contraction(n, max_tanh, rng);
    let w1 = BogoliubovN::gauge(random_unitary(n, rng)).unwrap();
    let w2 = BogoliubovN::gauge(random_unitary(n, rng)).unwrap();
    compose(&w1, &compose(&z.to_bogoliubov(), &w2).unwrap()).unwrap()
}

pub fn random_occupations<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(0.0..3.0)).collect()
}
