//! Small dense complex linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<C64>;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Largest entry modulus.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    max_abs(&(a - b))
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()) * c(0.5, 0.0)
}

/// Eigen-decomposition of the Hermitian part of `m`, eigenvalues ascending.
pub fn hermitian_eigen(m: &CMat) -> (DVector<f64>, CMat) {
    let eig = SymmetricEigen::new(hermitian_part(m));
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = CMat::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

/// `f(m)` for Hermitian `m` through its spectral decomposition.
pub fn hermitian_fn(m: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (values, q) = hermitian_eigen(m);
    let d = CMat::from_diagonal(&values.map(|x| c(f(x), 0.0)));
    &q * d * q.adjoint()
}

/// Positive square root of a Hermitian positive semidefinite matrix.
pub fn hermitian_sqrt(m: &CMat) -> CMat {
    hermitian_fn(m, |x| x.max(0.0).sqrt())
}

pub fn inverse(m: &CMat) -> Result<CMat> {
    m.clone()
        .try_inverse()
        .ok_or_else(|| Error::Evaluation("singular matrix".into()))
}

/// Largest singular value.
pub fn operator_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().max()
}

/// Block matrix `[[a, b], [c, d]]` of equal square blocks.
pub fn blocks(a: &CMat, b: &CMat, cc: &CMat, d: &CMat) -> CMat {
    let n = a.nrows();
    let mut m = CMat::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(a);
    m.view_mut((0, n), (n, n)).copy_from(b);
    m.view_mut((n, 0), (n, n)).copy_from(cc);
    m.view_mut((n, n), (n, n)).copy_from(d);
    m
}

/// The four `n×n` blocks of a `2n×2n` matrix.
pub fn split(m: &CMat) -> (CMat, CMat, CMat, CMat) {
    let n = m.nrows() / 2;
    (
        m.view((0, 0), (n, n)).into_owned(),
        m.view((0, n), (n, n)).into_owned(),
        m.view((n, 0), (n, n)).into_owned(),
        m.view((n, n), (n, n)).into_owned(),
    )
}

pub fn is_square(m: &CMat) -> bool {
    m.nrows() == m.ncols()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_squares_back() {
        let m = CMat::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.5, 0.5), c(0.5, -0.5), c(1.0, 0.0)]);
        let s = hermitian_sqrt(&m);
        assert!(max_abs_diff(&(&s * &s), &m) < 1e-14);
        assert!(max_abs_diff(&s, &s.adjoint()) < 1e-15);
    }

    #[test]
    fn eigenvalues_ascending() {
        let m = CMat::from_diagonal(&DVector::from_vec(vec![c(3.0, 0.0), c(-1.0, 0.0), c(2.0, 0.0)]));
        let (v, _) = hermitian_eigen(&m);
        assert_eq!(v.as_slice(), &[-1.0, 2.0, 3.0]);
    }

    #[test]
    fn block_roundtrip() {
        let a = CMat::from_element(2, 2, c(1.0, 0.0));
        let b = CMat::from_element(2, 2, c(0.0, 1.0));
        let m = blocks(&a, &b, &b, &a);
        let (a2, b2, c2, d2) = split(&m);
        assert_eq!((a2, b2.clone(), c2, d2), (a.clone(), b.clone(), b, a));
    }
}
