//! Kummer's confluent hypergeometric function `M(a, b, z)`.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::dd::{CDd, Dd};
use super::gamma::recip_gamma;
use crate::error::{Error, Result};

/// Default `|z|` above which the large-argument expansion replaces the series.
pub const Z_SWITCH: f64 = 30.0;

const SERIES_TERM_CAP: usize = 10_000;
const ASYMPTOTIC_TERM_CAP: usize = 500;

fn nonpositive_integer(z: C64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// `M(a, b, z)` with the default switch radius.
pub fn hyp_m(a: C64, b: C64, z: C64) -> Result<C64> {
    hyp_m_with_switch(a, b, z, Z_SWITCH)
}

pub fn hyp_m_with_switch(a: C64, b: C64, z: C64, z_switch: f64) -> Result<C64> {
    if nonpositive_integer(b) {
        return Err(Error::Domain(format!("M(a, b, z) undefined for b = {b}")));
    }
    if !(a.re.is_finite() && a.im.is_finite() && z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain("M(a, b, z) with non-finite argument".into()));
    }
    if z.norm() <= z_switch {
        hyp_m_series(a, b, z)
    } else {
        hyp_m_asymptotic(a, b, z)
    }
}

/// Taylor series summed in double-double arithmetic.
pub fn hyp_m_series(a: C64, b: C64, z: C64) -> Result<C64> {
    let a = CDd::from(a);
    let b = CDd::from(b);
    let zd = CDd::from(z);
    let one = CDd::from(C64::new(1.0, 0.0));
    let mut term = one;
    let mut sum = one;
    let zn = z.norm();
    for n in 0..SERIES_TERM_CAP {
        let nn = CDd::from(C64::new(n as f64, 0.0));
        let ratio = (a + nn) * zd / ((b + nn) * CDd::new(Dd::new(n as f64 + 1.0), Dd::ZERO));
        term = term * ratio;
        sum = sum + term;
        let tn = term.norm();
        if tn == 0.0 {
            return Ok(sum.to_c64());
        }
        if (n as f64) > zn && tn <= 1e-20 * sum.norm().max(f64::MIN_POSITIVE) {
            return Ok(sum.to_c64());
        }
        if !tn.is_finite() {
            break;
        }
    }
    Err(Error::Evaluation(format!(
        "series for M({a:?}, {b:?}, {z}) did not converge within {SERIES_TERM_CAP} terms"
    )))
}

/// Sum of `Σ (p)_n (q)_n / n! · w^n`, truncated at its smallest term.
fn asymptotic_sum(p: C64, q: C64, w: C64) -> C64 {
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    let mut last = f64::INFINITY;
    for n in 0..ASYMPTOTIC_TERM_CAP {
        let nf = n as f64;
        let next = term * (p + nf) * (q + nf) * w / (nf + 1.0);
        let m = next.norm();
        if m == 0.0 {
            break;
        }
        if m >= last {
            break;
        }
        sum += next;
        term = next;
        last = m;
        if m <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

/// Large-`|z|` expansion
/// `M/Γ(b) = e^{±iπa} z^{-a}/Γ(b-a) Σ (a)_n(1+a-b)_n/n! (-z)^{-n}
///          + e^z z^{a-b}/Γ(a) Σ (b-a)_n(1-a)_n/n! z^{-n}`,
/// upper sign for `arg z > -π/2`.
pub fn hyp_m_asymptotic(a: C64, b: C64, z: C64) -> Result<C64> {
    if z.norm() == 0.0 {
        return Err(Error::Domain("asymptotic M at z = 0".into()));
    }
    let i = C64::i();
    let sign = if z.arg() > -PI / 2.0 { 1.0 } else { -1.0 };
    let lnz = z.ln();
    let recip_gamma_b = recip_gamma(b);
    if recip_gamma_b == C64::new(0.0, 0.0) {
        return Err(Error::Domain(format!("M(a, b, z) undefined for b = {b}")));
    }
    let first = (sign * i * PI * a - a * lnz).exp()
        * recip_gamma(b - a)
        * asymptotic_sum(a, 1.0 + a - b, -1.0 / z);
    let second = (z + (a - b) * lnz).exp() * recip_gamma(a) * asymptotic_sum(b - a, 1.0 - a, 1.0 / z);
    let m = (first + second) / recip_gamma_b;
    if m.re.is_finite() && m.im.is_finite() {
        Ok(m)
    } else {
        Err(Error::Evaluation(format!("asymptotic M overflowed at z = {z}")))
    }
}
