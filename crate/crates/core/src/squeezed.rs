//! Single-mode squeezed vacuum `(a + e^{iθ} tanh r · a*) ψ = 0`: occupation
//! numbers, fidelity, position wavefunction, and a truncated Fock-space oracle.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::flow::SqueezeParam;

/// Excitation-number distribution `p_n`, `n = 0..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupationSpectrum {
    pub probs: Vec<f64>,
    /// `1 − Σ p_n` over the retained entries (never negative).
    pub tail_bound: f64,
}

impl OccupationSpectrum {
    pub fn mean(&self) -> f64 {
        self.probs.iter().enumerate().map(|(n, p)| n as f64 * p).sum()
    }
}

/// `q_k² = (2k−1)!!/(2k)!!` for `k = 0..=k_max`.
pub fn q_squared(k_max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(k_max + 1);
    let mut q2 = 1.0;
    out.push(q2);
    for k in 1..=k_max {
        q2 *= (2 * k - 1) as f64 / (2 * k) as f64;
        out.push(q2);
    }
    out
}

/// `p_{2k} = tanh^{2k} r · q_k² / cosh r`, `p_{2k+1} = 0`.
pub fn occupation_probs(tau: &SqueezeParam, n_max: usize) -> OccupationSpectrum {
    let t2 = tau.r.tanh().powi(2);
    let q2 = q_squared(n_max / 2);
    let mut probs = vec![0.0; n_max + 1];
    let mut pow = 1.0 / tau.r.cosh();
    for (k, q) in q2.iter().enumerate() {
        probs[2 * k] = pow * q;
        pow *= t2;
    }
    let total: f64 = probs.iter().sum();
    OccupationSpectrum { probs, tail_bound: (1.0 - total).max(0.0) }
}

/// Probability `p_0 = 1/cosh r` of finding the vacuum.
pub fn fidelity(tau: &SqueezeParam) -> f64 {
    1.0 / tau.r.cosh()
}

/// `θ ↦ θ + 2β`: the parameter after a phase-space rotation by `β`.
pub fn rotate(tau: &SqueezeParam, beta: f64) -> SqueezeParam {
    SqueezeParam::new(tau.r, tau.theta + 2.0 * beta)
}

/// Complex width `κ = ω(1+z)/(1−z)`, `ψ ∝ e^{−κx²/2}`, with `z = e^{iθ} tanh r`.
pub fn width_parameter(tau: &SqueezeParam, omega: f64) -> Result<C64> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::Domain(format!("omega must be positive, got {omega}")));
    }
    let z = tau.disk();
    let den = 1.0 - z;
    if den.norm() == 0.0 {
        return Err(Error::NonNormalizable("lambda = mu".into()));
    }
    let kappa = omega * (1.0 + z) / den;
    if !(kappa.re > 0.0 && kappa.re.is_finite() && kappa.im.is_finite()) {
        return Err(Error::NonNormalizable(format!("width parameter {kappa} has no positive real part")));
    }
    Ok(kappa)
}

/// L²-normalized position wavefunction `(Re κ/π)^{1/4} e^{−κx²/2}`.
pub fn wavefunction(tau: &SqueezeParam, omega: f64, x: f64) -> Result<C64> {
    let kappa = width_parameter(tau, omega)?;
    Ok((kappa.re / PI).powf(0.25) * (-0.5 * kappa * x * x).exp())
}

/// Truncated Fock-space vector `Σ_n c_n |n⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    pub amplitudes: Vec<C64>,
}

impl FockVector {
    pub fn vacuum(dim: usize) -> Self {
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[0] = C64::new(1.0, 0.0);
        FockVector { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect()
    }

    /// `⟨self, other⟩` over the common indices.
    pub fn overlap(&self, other: &FockVector) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Closed-form expansion `cosh^{-1/2} r Σ_k e^{ikθ} (−tanh r)^k q_k |2k⟩`,
/// truncated to `dim` entries.
pub fn squeezed_vacuum_series(tau: &SqueezeParam, dim: usize) -> FockVector {
    let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
    let q2 = q_squared(dim / 2);
    let step = C64::from_polar(-tau.r.tanh(), tau.theta);
    let mut pow = C64::new(1.0 / tau.r.cosh().sqrt(), 0.0);
    for (k, q) in q2.iter().enumerate() {
        if 2 * k >= dim {
            break;
        }
        amplitudes[2 * k] = pow * q.sqrt();
        pow *= step;
    }
    FockVector { amplitudes }
}

/// `y ↦ G y` for `G = ½(τ̄ a² − τ a*²)` on the truncated space.
fn apply_generator(tau: C64, y: &[C64], out: &mut [C64]) {
    let d = y.len();
    for (n, o) in out.iter_mut().enumerate() {
        let mut acc = C64::new(0.0, 0.0);
        // a²|n+2⟩ = √((n+2)(n+1)) |n⟩
        if n + 2 < d {
            acc += tau.conj() * (((n + 2) * (n + 1)) as f64).sqrt() * y[n + 2];
        }
        // a*²|n−2⟩ = √(n(n−1)) |n⟩
        if n >= 2 {
            acc -= tau * ((n * (n - 1)) as f64).sqrt() * y[n - 2];
        }
        *o = 0.5 * acc;
    }
}

/// `exp(½(τ̄a² − τa*²))|0⟩` in a `dim`-dimensional truncation, by Taylor
/// sub-steps of norm at most one. Fails if more than `1e-8` of the weight
/// sits in the top eighth of the basis.
pub fn fock_oracle(tau: &SqueezeParam, dim: usize) -> Result<FockVector> {
    if dim < 16 {
        return Err(Error::Domain(format!("Fock dimension must be >= 16, got {dim}")));
    }
    let t = tau.tau();
    // ‖a²‖ ≤ d on the truncated space
    let g_norm = t.norm() * dim as f64;
    let steps = g_norm.ceil().max(1.0) as usize;
    let h = 1.0 / steps as f64;
    let mut y = FockVector::vacuum(dim).amplitudes;
    let mut term = vec![C64::new(0.0, 0.0); dim];
    let mut next = vec![C64::new(0.0, 0.0); dim];
    for _ in 0..steps {
        term.copy_from_slice(&y);
        let mut acc = y.clone();
        for k in 1..200 {
            apply_generator(t, &term, &mut next);
            let scale = h / k as f64;
            let mut size = 0.0f64;
            for (tm, nx) in term.iter_mut().zip(&next) {
                *tm = nx * scale;
                size = size.max(tm.norm());
            }
            for (a, tm) in acc.iter_mut().zip(&term) {
                *a += tm;
            }
            if size < 1e-18 {
                break;
            }
        }
        y = acc;
    }
    let tail: f64 = y[dim - dim / 8..].iter().map(|c| c.norm_sqr()).sum();
    if tail > 1e-8 {
        return Err(Error::DimensionTooSmall { dim, tail });
    }
    Ok(FockVector { amplitudes: y })
}
