//! Closed-form solutions of `ẍ + (t² + δ²) x = 0` (the rescaled oscillator
//! with `α = 1`) in terms of Kummer's function, and their large-time data.

pub mod dd;
pub mod gamma;
pub mod hyp;

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
pub use gamma::{gamma_complex, recip_gamma};
pub use hyp::{hyp_m, hyp_m_asymptotic, hyp_m_series, hyp_m_with_switch, Z_SWITCH};

fn check_args(t: f64, delta_sq: f64) -> Result<()> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Domain(format!("t must be finite and >= 0, got {t}")));
    }
    if !(delta_sq.is_finite() && delta_sq >= 0.0) {
        return Err(Error::Domain(format!("delta_sq must be finite and >= 0, got {delta_sq}")));
    }
    Ok(())
}

/// Even solution `x₊ = e^{-it²/2} M((1+iδ²)/4, 1/2, it²)` with
/// `x₊(0) = 1`, `ẋ₊(0) = 0`. Returns `(x₊, ẋ₊)`.
pub fn even_solution(t: f64, delta_sq: f64) -> Result<(f64, f64)> {
    check_args(t, delta_sq)?;
    let a = C64::new(0.25, 0.25 * delta_sq);
    let b = 0.5;
    let z = C64::new(0.0, t * t);
    let phase = C64::from_polar(1.0, -0.5 * t * t);
    let m = hyp_m(a, b.into(), z)?;
    let dm = a / b * hyp_m(a + 1.0, (b + 1.0).into(), z)?;
    let i = C64::i();
    let x = phase * m;
    let xdot = phase * (-i * t * m + 2.0 * i * t * dm);
    Ok((x.re, xdot.re))
}

/// Odd solution `x₋ = t e^{-it²/2} M((3+iδ²)/4, 3/2, it²)` with
/// `x₋(0) = 0`, `ẋ₋(0) = 1`. Returns `(x₋, ẋ₋)`.
pub fn odd_solution(t: f64, delta_sq: f64) -> Result<(f64, f64)> {
    check_args(t, delta_sq)?;
    let a = C64::new(0.75, 0.25 * delta_sq);
    let b = 1.5;
    let t2 = t * t;
    let z = C64::new(0.0, t2);
    let phase = C64::from_polar(1.0, -0.5 * t2);
    let m = hyp_m(a, b.into(), z)?;
    let dm = a / b * hyp_m(a + 1.0, (b + 1.0).into(), z)?;
    let i = C64::i();
    let x = phase * t * m;
    let xdot = phase * (m * (1.0 - i * t2) + 2.0 * i * t2 * dm);
    Ok((x.re, xdot.re))
}

/// Large-time data of the even/odd pair:
/// `x±(t) ≈ A± t^{-1/2} (γ± e^{iθ±(t)} + c.c.)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticData {
    pub delta_sq: f64,
    pub gamma_plus: C64,
    pub gamma_minus: C64,
    /// Real amplitudes fixed by the unit initial data at `t = 0`.
    pub amp_plus: f64,
    pub amp_minus: f64,
}

impl AsymptoticData {
    pub fn new(delta_sq: f64) -> Result<Self> {
        check_args(0.0, delta_sq)?;
        let gamma_plus = recip_gamma(C64::new(0.25, 0.25 * delta_sq));
        let gamma_minus = recip_gamma(C64::new(0.75, 0.25 * delta_sq));
        let decay = (-PI * delta_sq / 8.0).exp();
        Ok(AsymptoticData {
            delta_sq,
            gamma_plus,
            gamma_minus,
            amp_plus: PI.sqrt() * decay,
            amp_minus: 0.5 * PI.sqrt() * decay,
        })
    }

    pub fn theta_plus(&self, t: f64) -> f64 {
        0.5 * t * t + 0.5 * self.delta_sq * t.ln() - PI / 8.0
    }

    pub fn theta_minus(&self, t: f64) -> f64 {
        0.5 * t * t + 0.5 * self.delta_sq * t.ln() - 3.0 * PI / 8.0
    }

    /// Common derivative `θ±'(t) = t + δ²/(2t)`.
    pub fn theta_prime(&self, t: f64) -> f64 {
        t + 0.5 * self.delta_sq / t
    }

    /// Leading-order `(x₊, x₋)` at large `t`.
    pub fn leading_order(&self, t: f64) -> (f64, f64) {
        let s = t.powf(-0.5);
        let xp = self.amp_plus * s * 2.0 * (self.gamma_plus * C64::from_polar(1.0, self.theta_plus(t))).re;
        let xm = self.amp_minus * s * 2.0 * (self.gamma_minus * C64::from_polar(1.0, self.theta_minus(t))).re;
        (xp, xm)
    }
}

/// Limiting squeeze of the symmetric propagator over `[-t, t]` as `t → ∞`:
/// `tanh r = (1 + e^{πδ²})^{-1/2}` and the `t`-independent part
/// `-π/2 - arg(γ₊γ₋)` of the phase.
pub fn asymptotic_squeeze(delta_sq: f64) -> (f64, f64) {
    let delta_sq = delta_sq.max(0.0);
    let e = (-PI * delta_sq).exp();
    let tanh_r = (-0.5 * PI * delta_sq).exp() / (1.0 + e).sqrt();
    let gp = recip_gamma(C64::new(0.25, 0.25 * delta_sq));
    let gm = recip_gamma(C64::new(0.75, 0.25 * delta_sq));
    (tanh_r, -PI / 2.0 - gp.arg() - gm.arg())
}
