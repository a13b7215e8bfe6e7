//! Hermitian structure `h = g − iω` on the manifold of symmetric strict
//! contractions `Z`, its Kähler potential, and the single-mode disk model.

use num_complex::Complex64 as C64;

use crate::bogoliubov::{ZMatrix, SYMMETRY_TOL};
use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_eigen, inverse, is_square, max_abs, max_abs_diff, CMat};

/// Base point and two holomorphic tangent directions.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentPair {
    pub z: ZMatrix,
    pub t1: CMat,
    pub t2: CMat,
}

impl TangentPair {
    pub fn new(z: ZMatrix, t1: CMat, t2: CMat) -> Result<Self> {
        for t in [&t1, &t2] {
            if !is_square(t) || t.nrows() != z.dim() {
                return Err(Error::DimensionMismatch(format!(
                    "tangent is {:?}, base point is {n}×{n}",
                    t.shape(),
                    n = z.dim()
                )));
            }
            let asymmetry = max_abs_diff(t, &t.transpose());
            if !(asymmetry <= SYMMETRY_TOL) {
                return Err(Error::NotSymmetric { asymmetry });
            }
        }
        Ok(TangentPair { z, t1, t2 })
    }
}

/// Coefficients of `g = g_coeff |dz|²` and `ω = omega_coeff (i/2) dz∧dz̄`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskTensors {
    pub g_coeff: f64,
    pub omega_coeff: f64,
}

/// `h(T1, T2) = tr((1 − ZZ*)⁻¹ T1 (1 − Z*Z)⁻¹ T2*)`.
pub fn hermitian_form(tp: &TangentPair) -> Result<C64> {
    let z = tp.z.z();
    let n = tp.z.dim();
    let id = CMat::identity(n, n);
    let left = inverse(&(&id - z * z.adjoint()))?;
    let right = inverse(&(&id - z.adjoint() * z))?;
    Ok((left * &tp.t1 * right * tp.t2.adjoint()).trace())
}

/// The same form as `tr((U*T1Ū)(U*T2Ū)*)` with `U` the canonical
/// representative of `Z`, optionally multiplied on the right by `gauge`.
pub fn hermitian_form_via_u(tp: &TangentPair, gauge: Option<&CMat>) -> Result<C64> {
    let mut u = tp.z.to_bogoliubov().u().clone();
    if let Some(w) = gauge {
        if w.shape() != u.shape() {
            return Err(Error::DimensionMismatch(format!("gauge is {:?}", w.shape())));
        }
        u = u * w;
    }
    let ub = u.conjugate();
    let a = u.adjoint() * &tp.t1 * &ub;
    let b = u.adjoint() * &tp.t2 * &ub;
    Ok((a * b.adjoint()).trace())
}

/// Metric `g = Re h` and 2-form `ω = −Im h` evaluated on the pair.
pub fn metric_and_form(tp: &TangentPair) -> Result<(f64, f64)> {
    let h = hermitian_form(tp)?;
    Ok((h.re, -h.im))
}

fn check_disk(z: C64) -> Result<f64> {
    let m2 = z.norm_sqr();
    if !(m2 < 1.0) {
        return Err(Error::NotContraction { norm: m2.sqrt() });
    }
    Ok(m2)
}

/// Single-mode tensors, both coefficients `(1 − |z|²)^{-2}`.
pub fn disk_tensors(z: C64) -> Result<DiskTensors> {
    let m2 = check_disk(z)?;
    let coeff = (1.0 - m2).powi(-2);
    Ok(DiskTensors { g_coeff: coeff, omega_coeff: coeff })
}

/// `K = −tr log(1 − ZZ*)`.
pub fn kahler_potential(z: &ZMatrix) -> Result<f64> {
    kahler_potential_raw(z.z())
}

fn kahler_potential_raw(z: &CMat) -> Result<f64> {
    let n = z.nrows();
    let defect = CMat::identity(n, n) - z * z.adjoint();
    let (eigs, _) = hermitian_eigen(&defect);
    if !(eigs.min() > 0.0) {
        return Err(Error::NotContraction { norm: (1.0 - eigs.min()).max(0.0).sqrt() });
    }
    Ok(-eigs.iter().map(|l| l.ln()).sum::<f64>())
}

/// Step `1e-4` shrunk by the distance of `Z` to the boundary, per unit
/// tangent size.
pub fn default_step(tp: &TangentPair) -> f64 {
    let margin = 1.0 - tp.z.z().clone().singular_values().max();
    let scale = max_abs(&tp.t1).max(max_abs(&tp.t2)).max(f64::MIN_POSITIVE);
    1e-4 * margin.min(1.0) / scale.max(1.0)
}

/// `∂_s ∂_t̄ K(Z + sT1 + tT2)` at `s = t = 0` by 4-point central stencils
/// for each real mixed partial.
pub fn mixed_wirtinger(tp: &TangentPair, step: f64) -> Result<C64> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Domain(format!("step must be positive, got {step}")));
    }
    let z = tp.z.z();
    let f = |s: C64, t: C64| -> Result<f64> {
        kahler_potential_raw(&(z + &tp.t1 * s + &tp.t2 * t))
    };
    let h = step;
    // ∂²f/∂a∂b for directions a (in s) and b (in t)
    let mixed = |da: C64, db: C64| -> Result<f64> {
        let pp = f(da * h, db * h)?;
        let pm = f(da * h, -db * h)?;
        let mp = f(-da * h, db * h)?;
        let mm = f(-da * h, -db * h)?;
        Ok((pp - pm - mp + mm) / (4.0 * h * h))
    };
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let f_xu = mixed(one, one)?;
    let f_yv = mixed(i, i)?;
    let f_xv = mixed(one, i)?;
    let f_yu = mixed(i, one)?;
    Ok(0.25 * c(f_xu + f_yv, f_xv - f_yu))
}

/// `|∂∂̄K − h|` along the pair: the Kähler potential generates the form.
pub fn fd_check(tp: &TangentPair, step: f64) -> Result<f64> {
    let fd = mixed_wirtinger(tp, step)?;
    Ok((fd - hermitian_form(tp)?).norm())
}

/// Gauss curvature `−(2/g) ∂∂̄ log g` of the disk metric, evaluated from the
/// closed-form derivative `∂∂̄ log g = 2(1 − |z|²)^{-2}`.
pub fn gaussian_curvature_disk(z: C64) -> Result<f64> {
    let g = disk_tensors(z)?.g_coeff;
    let m2 = check_disk(z)?;
    let ddbar_log_g = 2.0 / (1.0 - m2).powi(2);
    Ok(-2.0 / g * ddbar_log_g)
}

/// Curvature from a 5-point Laplacian of `log g`, `K = −Δ log g / (2g)`.
pub fn gaussian_curvature_disk_fd(z: C64, step: f64) -> Result<f64> {
    let log_g = |w: C64| -> Result<f64> { Ok(disk_tensors(w)?.g_coeff.ln()) };
    let h = step;
    let lap = (log_g(z + h)? + log_g(z - h)? + log_g(z + c(0.0, h))? + log_g(z - c(0.0, h))?
        - 4.0 * log_g(z)?)
        / (h * h);
    Ok(-lap / (2.0 * disk_tensors(z)?.g_coeff))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(x: C64) -> CMat {
        CMat::from_element(1, 1, x)
    }

    fn pair_1(z: C64) -> TangentPair {
        let zm = ZMatrix::new(scalar(z)).unwrap();
        TangentPair::new(zm, scalar(c(1.0, 0.0)), scalar(c(1.0, 0.0))).unwrap()
    }

    #[test]
    fn flat_at_origin() {
        let h = hermitian_form(&pair_1(c(0.0, 0.0))).unwrap();
        assert!((h - 1.0).norm() < 1e-15);
    }

    #[test]
    fn disk_value() {
        let h = hermitian_form(&pair_1(c(0.5, 0.0))).unwrap();
        assert!((h - 16.0 / 9.0).norm() < 1e-14);
        let t = disk_tensors(c(0.5, 0.0)).unwrap();
        assert!((t.g_coeff - 16.0 / 9.0).abs() < 1e-15);
        assert_eq!(t.g_coeff, t.omega_coeff);
        assert_eq!(disk_tensors(c(0.0, 0.0)).unwrap(), DiskTensors { g_coeff: 1.0, omega_coeff: 1.0 });
        assert!(disk_tensors(c(0.6, 0.8)).is_err());
    }

    #[test]
    fn potential_values() {
        assert_eq!(kahler_potential(&ZMatrix::zero(2)).unwrap(), 0.0);
        let r: f64 = 0.8;
        let z = ZMatrix::new(scalar(c(r.tanh(), 0.0))).unwrap();
        assert!((kahler_potential(&z).unwrap() - 2.0 * r.cosh().ln()).abs() < 1e-14);
    }

    #[test]
    fn fd_on_single_mode() {
        let tp = pair_1(c(0.3, 0.2));
        assert!(fd_check(&tp, 1e-4).unwrap() <= 1e-6);
        let fd = mixed_wirtinger(&tp, 1e-4).unwrap();
        let want = (1.0 - 0.13f64).powi(-2);
        assert!((fd - want).norm() <= 1e-6);
    }

    #[test]
    fn fd_leaving_manifold_fails() {
        let tp = pair_1(c(0.95, 0.0));
        assert!(fd_check(&tp, 0.1).is_err());
        assert!(fd_check(&tp, 0.0).is_err());
    }

    #[test]
    fn curvature_constant() {
        assert_eq!(gaussian_curvature_disk(c(0.0, 0.0)).unwrap(), -4.0);
        assert!((gaussian_curvature_disk(c(0.0, 0.7)).unwrap() + 4.0).abs() < 1e-12);
        assert!(gaussian_curvature_disk(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn asymmetric_tangent_rejected() {
        let t = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(
            TangentPair::new(ZMatrix::zero(2), t.clone(), t),
            Err(Error::NotSymmetric { .. })
        ));
    }
}
