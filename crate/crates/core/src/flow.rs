//! Classical flow of the driven oscillator `x'' + (α²t² + g²) x = 0` and the
//! single-mode Bogoliubov propagator it induces.
//!
//! The quantum evolution of a quadratic Hamiltonian is fixed by its classical
//! linear flow. We integrate the even/odd fundamental solutions on `[0, T]`,
//! extend them to negative times by parity, and assemble the propagator
//! `(a, ā)(t1) ↦ (a, ā)(t2)` from the complex mode functions
//! `a±(t) = (ω x±(t) + i ẋ±(t)) / √(2ω)`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::ode::Integrator;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Default floor for the instantaneous reference frequency in
/// [`instantaneous_trajectory`].
pub const DEFAULT_OMEGA_FLOOR: f64 = 1e-6;

/// Disk coordinates are clamped to this modulus on output.
pub const DISK_CLAMP: f64 = 1.0 - 1e-12;

/// Frequency profile `ω_t² = α²t² + g²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyProfile {
    alpha: f64,
    g: f64,
}

impl FrequencyProfile {
    pub fn new(alpha: f64, g: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
        }
        if !(g >= 0.0 && g.is_finite()) {
            return Err(Error::Domain(format!("g must be non-negative, got {g}")));
        }
        Ok(FrequencyProfile { alpha, g })
    }

    /// Gapless profile `ω_t = α|t|`.
    pub fn gapless(alpha: f64) -> Result<Self> {
        Self::new(alpha, 0.0)
    }

    /// Profile with `α = 1` and gap `g = δ`, i.e. `δ² = g²/α = delta_sq`.
    pub fn from_delta_sq(delta_sq: f64) -> Result<Self> {
        if !(delta_sq >= 0.0) {
            return Err(Error::Domain(format!("delta_sq must be non-negative, got {delta_sq}")));
        }
        Self::new(1.0, delta_sq.sqrt())
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    /// Scale-invariant gap parameter `δ² = g²/α`.
    pub fn delta_sq(&self) -> f64 {
        self.g * self.g / self.alpha
    }

    pub fn omega_sq(&self, t: f64) -> f64 {
        let at = self.alpha * t;
        at * at + self.g * self.g
    }

    pub fn omega(&self, t: f64) -> f64 {
        (self.alpha * t).hypot(self.g)
    }
}

/// Wronskian-normalized even/odd solutions and their derivatives at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalPair {
    pub t: f64,
    pub x_plus: f64,
    pub xdot_plus: f64,
    pub x_minus: f64,
    pub xdot_minus: f64,
}

impl FundamentalPair {
    /// Initial data at `t = 0`.
    pub fn origin() -> Self {
        FundamentalPair {
            t: 0.0,
            x_plus: 1.0,
            xdot_plus: 0.0,
            x_minus: 0.0,
            xdot_minus: 1.0,
        }
    }

    pub fn wronskian(&self) -> f64 {
        self.x_plus * self.xdot_minus - self.xdot_plus * self.x_minus
    }

    /// The pair at `-t`, using `x₊` even and `x₋` odd.
    pub fn reflected(&self) -> Self {
        FundamentalPair {
            t: -self.t,
            x_plus: self.x_plus,
            xdot_plus: -self.xdot_plus,
            x_minus: -self.x_minus,
            xdot_minus: self.xdot_minus,
        }
    }

    /// Complex mode functions `(a₊, a₋)` for reference frequency `omega`.
    pub fn mode_functions(&self, omega: f64) -> (C64, C64) {
        let s = (2.0 * omega).sqrt();
        (
            C64::new(omega * self.x_plus, self.xdot_plus) / s,
            C64::new(omega * self.x_minus, self.xdot_minus) / s,
        )
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("tolerance must be positive, got {tol}")))
    }
}

/// Integrate the fundamental pair from `0` to `t >= 0`.
pub fn integrate_fundamental(
    profile: &FrequencyProfile,
    t: f64,
    tol: f64,
) -> Result<FundamentalPair> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("integration end time must be >= 0, got {t}")));
    }
    Ok(integrate_fundamental_at(profile, &[t], tol)?[0])
}

/// Fundamental pairs at arbitrary (signed, unsorted) times, computed from a
/// single forward integration on `[0, max |t|]`.
pub fn integrate_fundamental_at(
    profile: &FrequencyProfile,
    times: &[f64],
    tol: f64,
) -> Result<Vec<FundamentalPair>> {
    check_tol(tol)?;
    if let Some(bad) = times.iter().find(|t| !t.is_finite()) {
        return Err(Error::Domain(format!("non-finite time {bad}")));
    }
    let mut order: Vec<usize> = (0..times.len()).collect();
    order.sort_by(|&i, &j| times[i].abs().total_cmp(&times[j].abs()));
    let abs_sorted: Vec<f64> = order.iter().map(|&i| times[i].abs()).collect();

    let a2 = profile.alpha * profile.alpha;
    let g2 = profile.g * profile.g;
    // state: (x₊, ẋ₊, x₋, ẋ₋)
    let rhs = |t: f64, y: &[f64; 4]| {
        let w2 = a2 * t * t + g2;
        [y[1], -w2 * y[0], y[3], -w2 * y[2]]
    };
    let (states, _) = Integrator::new(tol).integrate(rhs, 0.0, [1.0, 0.0, 0.0, 1.0], &abs_sorted)?;

    let mut out = vec![FundamentalPair::origin(); times.len()];
    for (&idx, y) in order.iter().zip(states) {
        let pair = FundamentalPair {
            t: times[idx].abs(),
            x_plus: y[0],
            xdot_plus: y[1],
            x_minus: y[2],
            xdot_minus: y[3],
        };
        out[idx] = if times[idx] < 0.0 { pair.reflected() } else { pair };
    }
    Ok(out)
}

/// Single-mode Bogoliubov matrix `[[U, V̄], [V, Ū]]` acting on `(a, ā)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su11 {
    pub u: C64,
    pub v: C64,
}

impl Su11 {
    pub fn new(u: C64, v: C64) -> Self {
        Su11 { u, v }
    }

    pub fn identity() -> Self {
        Su11::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0))
    }

    /// Phase-space rotation `diag(e^{iβ}, e^{-iβ})`.
    pub fn rotation(beta: f64) -> Self {
        Su11::new(C64::from_polar(1.0, beta), C64::new(0.0, 0.0))
    }

    /// Pure squeeze `[[cosh r, e^{iθ} sinh r], [e^{-iθ} sinh r, cosh r]]`.
    pub fn squeeze(tau: &SqueezeParam) -> Self {
        Su11::new(
            C64::new(tau.r.cosh(), 0.0),
            C64::from_polar(tau.r.sinh(), -tau.theta),
        )
    }

    /// `|U|² − |V|² − 1`, zero for an exact SU(1,1) element.
    pub fn symplectic_defect(&self) -> f64 {
        self.u.norm_sqr() - self.v.norm_sqr() - 1.0
    }

    pub fn matrix(&self) -> [[C64; 2]; 2] {
        [[self.u, self.v.conj()], [self.v, self.u.conj()]]
    }

    /// Matrix product `self · first`: apply `first`, then `self`.
    pub fn after(&self, first: &Su11) -> Su11 {
        Su11::new(
            self.u * first.u + self.v.conj() * first.v,
            self.v * first.u + self.u.conj() * first.v,
        )
    }

    pub fn inverse(&self) -> Su11 {
        Su11::new(self.u.conj(), -self.v)
    }

    /// Decomposition `φ = φ_τ φ_β` into a pure squeeze and a rotation.
    pub fn decompose(&self) -> (SqueezeParam, f64) {
        let beta = self.u.arg();
        let r = self.u.norm().max(1.0).acosh();
        let theta = if self.v.norm() == 0.0 {
            0.0
        } else {
            self.v.conj().arg() + beta
        };
        (SqueezeParam::new(r, theta), beta)
    }

    /// Largest entrywise deviation from another element.
    pub fn max_abs_diff(&self, other: &Su11) -> f64 {
        (self.u - other.u).norm().max((self.v - other.v).norm())
    }
}

/// Squeezing parameter `τ = r e^{iθ}`, with disk coordinate `z = e^{iθ} tanh r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParam {
    pub r: f64,
    pub theta: f64,
}

impl SqueezeParam {
    /// A squeezing parameter with `θ` reduced to `[0, 2π)`. Negative `r`
    /// is folded into the phase.
    pub fn new(r: f64, theta: f64) -> Self {
        if r < 0.0 {
            SqueezeParam { r: -r, theta: wrap_phase(theta + PI) }
        } else {
            SqueezeParam { r, theta: wrap_phase(theta) }
        }
    }

    pub fn vacuum() -> Self {
        SqueezeParam { r: 0.0, theta: 0.0 }
    }

    pub fn from_tau(tau: C64) -> Self {
        SqueezeParam::new(tau.norm(), if tau.norm() == 0.0 { 0.0 } else { tau.arg() })
    }

    /// Parameter with disk coordinate `z`, requiring `|z| < 1`.
    pub fn from_disk(z: C64) -> Result<Self> {
        let m = z.norm();
        if !(m < 1.0) {
            return Err(Error::Domain(format!("disk coordinate must satisfy |z| < 1, got {m}")));
        }
        Ok(SqueezeParam::new(m.atanh(), if m == 0.0 { 0.0 } else { z.arg() }))
    }

    pub fn tanh_r(&self) -> f64 {
        self.r.tanh()
    }

    pub fn disk(&self) -> C64 {
        C64::from_polar(self.r.tanh(), self.theta)
    }

    pub fn tau(&self) -> C64 {
        C64::from_polar(self.r, self.theta)
    }
}

/// Reduce an angle to `[0, 2π)`.
pub fn wrap_phase(theta: f64) -> f64 {
    let w = theta.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Distance between two angles on the circle, in `[0, π]`.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Propagator assembled from fundamental pairs at the two endpoints, with
/// reference frequencies `omega1` at `t1` and `omega2` at `t2`.
pub fn propagator_from_pairs(
    start: &FundamentalPair,
    omega1: f64,
    end: &FundamentalPair,
    omega2: f64,
) -> Su11 {
    let (a1p, a1m) = start.mode_functions(omega1);
    let (a2p, a2m) = end.mode_functions(omega2);
    let u = I * a2p * a1m.conj() - I * a2m * a1p.conj();
    let v_bar = -I * a2p * a1m + I * a2m * a1p;
    Su11::new(u, v_bar.conj())
}

fn check_omega(omega: f64, which: &str) -> Result<()> {
    if omega > 0.0 && omega.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("reference frequency {which} must be positive, got {omega}")))
    }
}

/// Exact propagator `(a, ā)(t1) ↦ (a, ā)(t2)` for `t1 <= t2`.
pub fn propagator(
    profile: &FrequencyProfile,
    t1: f64,
    t2: f64,
    omega1: f64,
    omega2: f64,
    tol: f64,
) -> Result<Su11> {
    if !(t1 <= t2) {
        return Err(Error::Domain(format!("propagator needs t1 <= t2, got [{t1}, {t2}]")));
    }
    check_omega(omega1, "omega1")?;
    check_omega(omega2, "omega2")?;
    let pairs = integrate_fundamental_at(profile, &[t1, t2], tol)?;
    Ok(propagator_from_pairs(&pairs[0], omega1, &pairs[1], omega2))
}

/// Propagator with the instantaneous frequencies `ω_{t1}`, `ω_{t2}` as
/// endpoint references.
pub fn propagator_instantaneous(
    profile: &FrequencyProfile,
    t1: f64,
    t2: f64,
    tol: f64,
) -> Result<Su11> {
    propagator(profile, t1, t2, profile.omega(t1), profile.omega(t2), tol)
}

/// Propagator over `[-t, t]` with a common reference frequency, using the
/// parity-reduced formulas `U = -2i a₊a₋`, `V̄ = 2i Re(ā₊ a₋)`.
pub fn symmetric_propagator(
    profile: &FrequencyProfile,
    t: f64,
    omega: f64,
    tol: f64,
) -> Result<Su11> {
    check_omega(omega, "omega")?;
    let pair = integrate_fundamental(profile, t.abs(), tol)?;
    Ok(symmetric_from_pair(&pair, omega))
}

pub fn symmetric_from_pair(pair: &FundamentalPair, omega: f64) -> Su11 {
    let (ap, am) = pair.mode_functions(omega);
    let u = -2.0 * I * ap * am;
    let v_bar = 2.0 * I * (ap.conj() * am).re;
    Su11::new(u, v_bar.conj())
}

/// Squeezing of the evolved vacuum: `e^{iθ} tanh r = -V̄ / Ū`.
pub fn squeeze_of_vacuum(phi: &Su11) -> Result<SqueezeParam> {
    if !(phi.v.norm() < phi.u.norm()) {
        return Err(Error::InvalidBogoliubov(format!(
            "|V| = {} must be smaller than |U| = {}",
            phi.v.norm(),
            phi.u.norm()
        )));
    }
    SqueezeParam::from_disk(vacuum_disk_coordinate(phi))
}

/// `-V̄ / Ū` without validation.
pub fn vacuum_disk_coordinate(phi: &Su11) -> C64 {
    -phi.v.conj() / phi.u.conj()
}

/// Time dilation `t = α^{-1/2} t'` mapping an `α = 1` run to rate `α`.
pub fn rescale_alpha(t_prime: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
    }
    Ok(t_prime / alpha.sqrt())
}

/// One sample of the squeezing trajectory relative to the instantaneous
/// ground state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub t: f64,
    /// Disk coordinate `e^{iθ} tanh r`.
    pub z: C64,
    /// `e^{iαt²} z`, the coordinate with the adiabatic rotation removed.
    pub w: C64,
}

impl TrajectoryPoint {
    pub fn tanh_r(&self) -> f64 {
        self.z.norm()
    }
}

/// Squeezing of the state prepared in the instantaneous ground state at
/// `t_grid[0]`, measured at each grid time against the instantaneous ground
/// state there.
pub fn instantaneous_trajectory(
    profile: &FrequencyProfile,
    t_grid: &[f64],
    tol: f64,
) -> Result<Vec<TrajectoryPoint>> {
    instantaneous_trajectory_with_floor(profile, t_grid, tol, DEFAULT_OMEGA_FLOOR)
}

pub fn instantaneous_trajectory_with_floor(
    profile: &FrequencyProfile,
    t_grid: &[f64],
    tol: f64,
    omega_floor: f64,
) -> Result<Vec<TrajectoryPoint>> {
    if t_grid.is_empty() {
        return Ok(Vec::new());
    }
    if t_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Domain("trajectory grid must be sorted ascending".into()));
    }
    check_omega(omega_floor, "floor")?;
    let pairs = integrate_fundamental_at(profile, t_grid, tol)?;
    let reference = |t: f64| profile.omega(t).max(omega_floor);
    let start = &pairs[0];
    let omega_start = reference(start.t);

    Ok(pairs
        .iter()
        .map(|pair| {
            let phi = propagator_from_pairs(start, omega_start, pair, reference(pair.t));
            let mut z = vacuum_disk_coordinate(&phi);
            let m = z.norm();
            if m > DISK_CLAMP {
                z *= DISK_CLAMP / m;
            }
            let t = pair.t;
            let w = C64::from_polar(1.0, profile.alpha * t * t) * z;
            TrajectoryPoint { t, z, w }
        })
        .collect())
}
