//! N-mode Bogoliubov transformations `φ = [[U, V̄], [V, Ū]]`, quasi-free
//! states `ω_P` with two-point operator `P`, and the symmetric contraction
//! `Z` labelling squeezed states.

use std::fmt;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::flow::{SqueezeParam, Su11};
use crate::linalg::{
    blocks, c, hermitian_eigen, hermitian_fn, hermitian_sqrt, inverse, is_square, max_abs,
    max_abs_diff, operator_norm, split, CMat,
};

/// A relation that failed to hold, with its max-norm residual.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub relation: &'static str,
    pub residual: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (residual {:e})", self.relation, self.residual)
    }
}

fn check(out: &mut Vec<Violation>, relation: &'static str, residual: f64, tol: f64) {
    if !(residual <= tol) {
        out.push(Violation { relation, residual });
    }
}

/// Default absolute tolerance for the structural checks done on entry.
pub const VALIDATION_TOL: f64 = 1e-9;

fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// `S = diag(1, -1)` on `C^N ⊕ C^N`.
pub fn s_matrix(n: usize) -> CMat {
    let mut s = identity(2 * n);
    for i in n..2 * n {
        s[(i, i)] = c(-1.0, 0.0);
    }
    s
}

/// `J M J` for a complex-linear `M`, where `J(f ⊕ g) = ḡ ⊕ f̄`.
pub fn j_conjugate(m: &CMat) -> CMat {
    let (a, b, cc, d) = split(m);
    blocks(&d.conjugate(), &cc.conjugate(), &b.conjugate(), &a.conjugate())
}

/// `J ξ` for a vector `ξ = f ⊕ g`.
pub fn j_apply(xi: &DVector<C64>) -> DVector<C64> {
    let n = xi.len() / 2;
    let mut out = DVector::zeros(2 * n);
    for i in 0..n {
        out[i] = xi[n + i].conj();
        out[n + i] = xi[i].conj();
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct BogoliubovN {
    u: CMat,
    v: CMat,
}

impl BogoliubovN {
    pub fn new(u: CMat, v: CMat) -> Result<Self> {
        if !is_square(&u) || u.shape() != v.shape() {
            return Err(Error::DimensionMismatch(format!(
                "U is {:?}, V is {:?}; both must be N×N",
                u.shape(),
                v.shape()
            )));
        }
        Ok(BogoliubovN { u, v })
    }

    pub fn identity(n: usize) -> Self {
        BogoliubovN { u: identity(n), v: CMat::zeros(n, n) }
    }

    /// Gauge transformation `(W, 0)` for a unitary `W`.
    pub fn gauge(w: CMat) -> Result<Self> {
        let n = w.nrows();
        BogoliubovN::new(w, CMat::zeros(n, n))
    }

    pub fn from_su11(phi: &Su11) -> Self {
        BogoliubovN {
            u: CMat::from_element(1, 1, phi.u),
            v: CMat::from_element(1, 1, phi.v),
        }
    }

    /// Single-mode squeeze `φ_τ`.
    pub fn phi_tau(tau: &SqueezeParam) -> Self {
        BogoliubovN::from_su11(&Su11::squeeze(tau))
    }

    pub fn dim(&self) -> usize {
        self.u.nrows()
    }

    pub fn u(&self) -> &CMat {
        &self.u
    }

    pub fn v(&self) -> &CMat {
        &self.v
    }

    pub fn matrix(&self) -> CMat {
        blocks(&self.u, &self.v.conjugate(), &self.v, &self.u.conjugate())
    }

    /// `φ* = [[U*, V*], [Vᵗ, Uᵗ]]`.
    pub fn adjoint_matrix(&self) -> CMat {
        self.matrix().adjoint()
    }

    /// Reads `(U, V)` off the left block column of a `2N×2N` matrix; the
    /// right column is implied by `J`-invariance.
    pub fn from_matrix(m: &CMat) -> Result<Self> {
        if !is_square(m) || m.nrows() % 2 != 0 {
            return Err(Error::DimensionMismatch(format!("{:?} is not 2N×2N", m.shape())));
        }
        let (u, _, v, _) = split(m);
        BogoliubovN::new(u, v)
    }

    /// Empty iff `φSφ* = S` and `φ*Sφ = S` hold within `tol` (max-norm).
    /// `Jφ* = φ*J` holds by construction of the block form.
    pub fn validate(&self, tol: f64) -> Vec<Violation> {
        let n = self.dim();
        let s = s_matrix(n);
        let phi = self.matrix();
        let mut out = Vec::new();
        check(&mut out, "phi S phi* = S", max_abs_diff(&(&phi * &s * phi.adjoint()), &s), tol);
        check(&mut out, "phi* S phi = S", max_abs_diff(&(phi.adjoint() * &s * &phi), &s), tol);
        let u = &self.u;
        let v = &self.v;
        check(
            &mut out,
            "U*U - V*V = 1",
            max_abs_diff(&(u.adjoint() * u - v.adjoint() * v), &identity(n)),
            tol,
        );
        check(
            &mut out,
            "U* conj(V) = V* conj(U)",
            max_abs_diff(&(u.adjoint() * v.conjugate()), &(v.adjoint() * u.conjugate())),
            tol,
        );
        if u.iter().chain(v.iter()).any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            out.push(Violation { relation: "finite entries", residual: f64::INFINITY });
        }
        out
    }

    pub fn is_valid(&self, tol: f64) -> bool {
        self.validate(tol).is_empty()
    }

    /// Validation at [`VALIDATION_TOL`] scaled by `max(1, ‖U‖²)`, the size of
    /// the products entering the relations.
    pub fn require_valid(&self) -> Result<()> {
        let scale = max_abs(&self.u).powi(2).max(1.0);
        let v = self.validate(VALIDATION_TOL * scale);
        if v.is_empty() {
            Ok(())
        } else {
            let msg: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            Err(Error::InvalidBogoliubov(msg.join("; ")))
        }
    }

    /// Inverse `Sφ*S`, i.e. `(U*, -Vᵗ)`.
    pub fn inverse(&self) -> Self {
        BogoliubovN { u: self.u.adjoint(), v: -self.v.transpose() }
    }

    /// State map `P ↦ (φ*)⁻¹ P φ* = SφS P φ*`.
    pub fn act_on_state(&self, state: &QuasiFreeState) -> Result<QuasiFreeState> {
        if state.dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "transformation has N = {}, state has N = {}",
                self.dim(),
                state.dim()
            )));
        }
        self.require_valid()?;
        let violations = state.validate(VALIDATION_TOL * max_abs(&state.p).max(1.0));
        if !violations.is_empty() {
            let msg: Vec<String> = violations.iter().map(|x| x.to_string()).collect();
            return Err(Error::InvalidState(msg.join("; ")));
        }
        let s = s_matrix(self.dim());
        let phi = self.matrix();
        let p = &s * &phi * &s * &state.p * phi.adjoint();
        Ok(QuasiFreeState { p })
    }

    /// `Z = -(U*)⁻¹ V*`.
    pub fn z_matrix(&self) -> Result<ZMatrix> {
        let uinv = inverse(&self.u.adjoint())
            .map_err(|_| Error::InvalidBogoliubov("U is singular".into()))?;
        let z = -(uinv * self.v.adjoint());
        // symmetric only up to rounding; symmetrize the representative
        let z = (&z + z.transpose()) * c(0.5, 0.0);
        ZMatrix::new(z)
    }
}

/// Matrix product `φ₂φ₁`.
pub fn compose(phi2: &BogoliubovN, phi1: &BogoliubovN) -> Result<BogoliubovN> {
    if phi2.dim() != phi1.dim() {
        return Err(Error::DimensionMismatch(format!(
            "cannot compose N = {} with N = {}",
            phi2.dim(),
            phi1.dim()
        )));
    }
    let u = &phi2.u * &phi1.u + phi2.v.conjugate() * &phi1.v;
    let v = &phi2.v * &phi1.u + phi2.u.conjugate() * &phi1.v;
    BogoliubovN::new(u, v)
}

/// Quasi-free state with `ω_P(A(ξ)A*(ζ)) = ⟨ξ, SPζ⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiFreeState {
    p: CMat,
}

impl QuasiFreeState {
    pub fn new(p: CMat) -> Result<Self> {
        if !is_square(&p) || p.nrows() % 2 != 0 || p.nrows() == 0 {
            return Err(Error::DimensionMismatch(format!("P is {:?}, must be 2N×2N", p.shape())));
        }
        Ok(QuasiFreeState { p })
    }

    /// Fock vacuum, `P = diag(1, 0)`.
    pub fn vacuum(n: usize) -> Self {
        gauge_state(&vec![0.0; n]).expect("zero occupations are valid")
    }

    pub fn dim(&self) -> usize {
        self.p.nrows() / 2
    }

    pub fn p(&self) -> &CMat {
        &self.p
    }

    /// Two-point function `⟨ξ, SPζ⟩`.
    pub fn two_point(&self, xi: &DVector<C64>, zeta: &DVector<C64>) -> C64 {
        let s = s_matrix(self.dim());
        xi.dotc(&(s * &self.p * zeta))
    }

    /// Empty iff `P*S = SP`, `SP ≥ 0` and `P + JPJ = 1` within `tol`.
    pub fn validate(&self, tol: f64) -> Vec<Violation> {
        let n = self.dim();
        let s = s_matrix(n);
        let sp = &s * &self.p;
        let mut out = Vec::new();
        check(&mut out, "P* S = S P", max_abs_diff(&(self.p.adjoint() * &s), &sp), tol);
        let min_eig = hermitian_eigen(&sp).0.min();
        check(&mut out, "S P >= 0", (-min_eig).max(0.0), tol);
        check(
            &mut out,
            "P + J P J = 1",
            max_abs_diff(&(&self.p + j_conjugate(&self.p)), &identity(2 * n)),
            tol,
        );
        out
    }

    pub fn is_valid(&self, tol: f64) -> bool {
        self.validate(tol).is_empty()
    }

    /// `‖P² − P‖ ≤ tol` (max-norm): the state is a squeezed (pure) state.
    pub fn is_pure(&self, tol: f64) -> bool {
        max_abs_diff(&(&self.p * &self.p), &self.p) <= tol
    }

    /// Brings the state to gauge-invariant form: returns `φ` and ascending
    /// `ρ` with `φ* P (φ*)⁻¹ = P_ρ`, equivalently `P = act_on_state(φ, P_ρ)`.
    pub fn diagonalize(&self, tol: f64) -> Result<(BogoliubovN, Vec<f64>)> {
        let violations = self.validate(tol);
        if !violations.is_empty() {
            let msg: Vec<String> = violations.iter().map(|x| x.to_string()).collect();
            return Err(Error::InvalidState(msg.join("; ")));
        }
        let n = self.dim();
        let s = s_matrix(n);
        let p_tilde = &self.p - identity(2 * n) * c(0.5, 0.0);
        let h = &s * &p_tilde;
        let (h_eigs, _) = hermitian_eigen(&h);
        if !(h_eigs.min() > tol) {
            return Err(Error::InvalidState(format!(
                "S(P - 1/2) is not positive definite (smallest eigenvalue {:e})",
                h_eigs.min()
            )));
        }
        let h_sqrt = hermitian_sqrt(&h);
        let m = &h_sqrt * &s * &h_sqrt;
        let (lambda, chi) = hermitian_eigen(&m);
        // M is congruent to S: exactly N positive eigenvalues, at the top
        let mut vs: Vec<DVector<C64>> = Vec::with_capacity(n);
        let mut rho = Vec::with_capacity(n);
        for k in n..2 * n {
            let l = lambda[k];
            if !(l > 0.0) {
                return Err(Error::InvalidState(format!("eigenvalue {l:e} where a positive one is expected")));
            }
            let v = &s * &h_sqrt * chi.column(k) / c(l.sqrt(), 0.0);
            vs.push(v);
            rho.push(l - 0.5);
        }
        s_gram_schmidt(&mut vs, &s)?;
        let mut x = CMat::zeros(n, n);
        let mut y = CMat::zeros(n, n);
        for (i, v) in vs.iter().enumerate() {
            x.set_column(i, &v.rows(0, n));
            y.set_column(i, &v.rows(n, n));
        }
        // φ* B = 1 for B = [v | Jv]; S-orthonormality gives φ = S B S
        let phi = BogoliubovN::new(x, -y)?;
        let rho = rho
            .into_iter()
            .map(|r| if r < 0.0 && r > -tol { 0.0 } else { r })
            .collect::<Vec<_>>();
        if let Some(bad) = rho.iter().find(|r| **r < 0.0) {
            return Err(Error::InvalidState(format!("negative occupation {bad:e}")));
        }
        Ok((phi, rho))
    }
}

/// Gram-Schmidt for the indefinite form `⟨·, S ·⟩`, positive on the span.
fn s_gram_schmidt(vs: &mut [DVector<C64>], s: &CMat) -> Result<()> {
    for i in 0..vs.len() {
        for j in 0..i {
            let proj = vs[j].dotc(&(s * &vs[i]));
            let vj = vs[j].clone();
            vs[i] -= vj * proj;
        }
        let norm = vs[i].dotc(&(s * &vs[i])).re;
        if !(norm > 0.0) {
            return Err(Error::InvalidState("S-form not positive on eigenspace".into()));
        }
        vs[i] /= c(norm.sqrt(), 0.0);
    }
    Ok(())
}

/// Gauge-invariant state `P_ρ = [[1+ρ, 0], [0, -ρ]]` for diagonal `ρ ≥ 0`.
pub fn gauge_state(rho_diag: &[f64]) -> Result<QuasiFreeState> {
    if rho_diag.is_empty() {
        return Err(Error::DimensionMismatch("at least one mode is required".into()));
    }
    if let Some(bad) = rho_diag.iter().find(|r| !(r.is_finite() && **r >= 0.0)) {
        return Err(Error::InvalidState(format!("occupations must be >= 0, got {bad}")));
    }
    let n = rho_diag.len();
    let mut p = CMat::zeros(2 * n, 2 * n);
    for (i, r) in rho_diag.iter().enumerate() {
        p[(i, i)] = c(1.0 + r, 0.0);
        p[(n + i, n + i)] = c(-r, 0.0);
    }
    Ok(QuasiFreeState { p })
}

/// Symmetric strict contraction `Z`, a point of the squeezed-state manifold.
#[derive(Debug, Clone, PartialEq)]
pub struct ZMatrix {
    z: CMat,
}

/// Default tolerance on `‖Z − Zᵗ‖` (max-norm) when constructing a `ZMatrix`.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Takagi factors with `Z = Wᵗ diag(d) W`, `d` descending.
#[derive(Debug, Clone, PartialEq)]
pub struct Takagi {
    pub w: CMat,
    pub d: Vec<f64>,
}

impl ZMatrix {
    pub fn new(z: CMat) -> Result<Self> {
        if !is_square(&z) || z.nrows() == 0 {
            return Err(Error::DimensionMismatch(format!("Z is {:?}, must be N×N", z.shape())));
        }
        let asymmetry = max_abs_diff(&z, &z.transpose());
        if !(asymmetry <= SYMMETRY_TOL) {
            return Err(Error::NotSymmetric { asymmetry });
        }
        let norm = operator_norm(&z);
        if !(norm < 1.0) {
            return Err(Error::NotContraction { norm });
        }
        Ok(ZMatrix { z })
    }

    pub fn zero(n: usize) -> Self {
        ZMatrix { z: CMat::zeros(n, n) }
    }

    pub fn dim(&self) -> usize {
        self.z.nrows()
    }

    pub fn z(&self) -> &CMat {
        &self.z
    }

    /// `1 − ZZ*`.
    pub fn defect(&self) -> CMat {
        identity(self.dim()) - &self.z * self.z.adjoint()
    }

    /// Smallest eigenvalue of `1 − ZZ*`; values below `1e-10` mean the
    /// point is close to the boundary and inverses lose accuracy.
    pub fn conditioning(&self) -> f64 {
        hermitian_eigen(&self.defect()).0.min()
    }

    /// Canonical representative `U = (1 − ZZ*)^{-1/2}`, `V = −Z̄U`.
    pub fn to_bogoliubov(&self) -> BogoliubovN {
        let u = hermitian_fn(&self.defect(), |x| 1.0 / x.sqrt());
        let v = -(self.z.conjugate() * &u);
        BogoliubovN { u, v }
    }

    /// Takagi factorization from the real symmetric embedding
    /// `[[Re Z, Im Z], [Im Z, −Re Z]]`, whose eigenvector `(x; y)` for
    /// eigenvalue `σ > 0` gives `u = x + iy` with `Z ū = σu`.
    pub fn takagi(&self) -> Takagi {
        let n = self.dim();
        let a = self.z.map(|z| z.re);
        let b = self.z.map(|z| z.im);
        let mut m = DMatrix::<f64>::zeros(2 * n, 2 * n);
        m.view_mut((0, 0), (n, n)).copy_from(&a);
        m.view_mut((0, n), (n, n)).copy_from(&b);
        m.view_mut((n, 0), (n, n)).copy_from(&b);
        m.view_mut((n, n), (n, n)).copy_from(&(-&a));
        let eig = SymmetricEigen::new(m);
        let mut order: Vec<usize> = (0..2 * n).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
        let mut cols: Vec<DVector<C64>> = Vec::with_capacity(n);
        let mut d = Vec::with_capacity(n);
        for &k in &order {
            if cols.len() == n {
                break;
            }
            let col = eig.eigenvectors.column(k);
            let mut u = DVector::from_iterator(n, (0..n).map(|i| c(col[i], col[n + i])));
            // the zero eigenspace holds both u and iu; keep a complex-independent set
            for q in &cols {
                let proj = q.dotc(&u);
                u -= q * proj;
            }
            let norm = u.norm();
            if norm < 0.5 {
                continue;
            }
            cols.push(u / c(norm, 0.0));
            d.push(eig.eigenvalues[k].max(0.0));
        }
        let mut q = CMat::zeros(n, n);
        for (i, col) in cols.iter().enumerate() {
            q.set_column(i, col);
        }
        Takagi { w: q.transpose(), d }
    }

    /// `det(1 − ZZ*)^{-1/2}`, the squared norm of the unnormalized squeezed vector.
    pub fn norm_constant(&self) -> f64 {
        let det = self.defect().determinant().re;
        det.powf(-0.5)
    }

    /// Square root of [`ZMatrix::norm_constant`].
    pub fn norm_constant_sqrt(&self) -> f64 {
        self.norm_constant().sqrt()
    }

    /// `Π(1 − dᵢ²)^{-1/2}` from the Takagi values.
    pub fn norm_constant_product(&self) -> f64 {
        self.takagi().d.iter().map(|d| (1.0 - d * d).powf(-0.5)).product()
    }
}

impl Takagi {
    pub fn reconstruct(&self) -> CMat {
        let dm = CMat::from_diagonal(&DVector::from_iterator(
            self.d.len(),
            self.d.iter().map(|x| c(*x, 0.0)),
        ));
        self.w.transpose() * dm * &self.w
    }
}

/// Occupation law `p_k = (1 − q) q^k`, `q = ρ/(1+ρ)`, for `k = 0..=n_max`.
pub fn thermal_occupations(rho: f64, n_max: usize) -> Vec<f64> {
    let rho = rho.max(0.0);
    let q = rho / (1.0 + rho);
    let mut out = Vec::with_capacity(n_max + 1);
    let mut p = 1.0 / (1.0 + rho);
    for _ in 0..=n_max {
        out.push(p);
        p *= q;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(vals: &[f64]) -> CMat {
        CMat::from_diagonal(&DVector::from_iterator(vals.len(), vals.iter().map(|x| c(*x, 0.0))))
    }

    #[test]
    fn identity_is_valid() {
        assert!(BogoliubovN::identity(3).is_valid(1e-14));
    }

    #[test]
    fn single_mode_squeeze_is_valid() {
        for (r, th) in [(0.3, 0.0), (1.2, 2.0), (2.5, -1.0)] {
            let phi = BogoliubovN::phi_tau(&SqueezeParam::new(r, th));
            assert!(phi.is_valid(1e-12), "{r} {th}: {:?}", phi.validate(1e-12));
        }
    }

    #[test]
    fn u_equals_v_is_rejected() {
        let phi = BogoliubovN::new(identity(2), identity(2)).unwrap();
        let v = phi.validate(1e-10);
        assert!(v.iter().any(|x| x.relation == "U*U - V*V = 1"));
    }

    #[test]
    fn dimension_mismatch() {
        assert!(BogoliubovN::new(identity(2), identity(3)).is_err());
        let a = BogoliubovN::identity(2);
        let b = BogoliubovN::identity(3);
        assert!(compose(&a, &b).is_err());
        assert!(a.act_on_state(&QuasiFreeState::vacuum(3)).is_err());
    }

    #[test]
    fn act_on_state_checks_inputs() {
        let bad = BogoliubovN::new(identity(1), identity(1)).unwrap();
        assert!(matches!(
            bad.act_on_state(&QuasiFreeState::vacuum(1)),
            Err(Error::InvalidBogoliubov(_))
        ));
        let p = QuasiFreeState::new(diag(&[0.2, 0.0])).unwrap();
        assert!(matches!(BogoliubovN::identity(1).act_on_state(&p), Err(Error::InvalidState(_))));
    }

    #[test]
    fn inverse_of_identity() {
        assert_eq!(BogoliubovN::identity(2).inverse(), BogoliubovN::identity(2));
    }

    #[test]
    fn inverse_multiplies_to_identity() {
        let phi = BogoliubovN::phi_tau(&SqueezeParam::new(0.9, 0.4));
        let prod = phi.matrix() * phi.inverse().matrix();
        assert!(max_abs_diff(&prod, &identity(2)) < 1e-12);
        let prod = compose(&phi.inverse(), &phi).unwrap();
        assert!(max_abs_diff(prod.u(), &identity(1)) < 1e-12);
        assert!(max_abs(prod.v()) < 1e-12);
    }

    #[test]
    fn gauge_states() {
        let vac = gauge_state(&[0.0]).unwrap();
        assert!(vac.is_pure(1e-14));
        assert!(vac.is_valid(1e-14));
        let mixed = gauge_state(&[1.0]).unwrap();
        assert!(mixed.is_valid(1e-14));
        assert!(!mixed.is_pure(1e-6));
        assert!(!gauge_state(&[0.5]).unwrap().is_pure(1e-6));
        assert!(gauge_state(&[-0.1]).is_err());
    }

    #[test]
    fn diagonalize_gauge_state() {
        let (phi, rho) = gauge_state(&[1.7, 0.3]).unwrap().diagonalize(1e-12).unwrap();
        assert!((rho[0] - 0.3).abs() < 1e-12 && (rho[1] - 1.7).abs() < 1e-12);
        assert!(max_abs(phi.v()) < 1e-12);
        let u = phi.u();
        assert!(max_abs_diff(&(u.adjoint() * u), &identity(2)) < 1e-12);
    }

    #[test]
    fn squeezed_vacuum_is_pure() {
        let phi = BogoliubovN::phi_tau(&SqueezeParam::new(0.8, 1.1));
        let p = phi.act_on_state(&QuasiFreeState::vacuum(1)).unwrap();
        assert!(p.is_valid(1e-12));
        assert!(p.is_pure(1e-12));
        let (_, rho) = p.diagonalize(1e-10).unwrap();
        assert!(rho[0].abs() < 1e-10);
    }

    #[test]
    fn invalid_state_rejected() {
        let p = QuasiFreeState::new(diag(&[0.2, 0.0])).unwrap();
        assert!(!p.is_valid(1e-10));
        assert!(matches!(p.diagonalize(1e-10), Err(Error::InvalidState(_))));
    }

    #[test]
    fn single_mode_z() {
        let tau = SqueezeParam::new(0.7, 2.3);
        let z = BogoliubovN::phi_tau(&tau).z_matrix().unwrap();
        assert!((z.z()[(0, 0)] + tau.disk()).norm() < 1e-14);
        assert_eq!(BogoliubovN::identity(2).z_matrix().unwrap(), ZMatrix::zero(2));
    }

    #[test]
    fn z_rejects_bad_input() {
        let asym = CMat::from_row_slice(2, 2, &[c(0.1, 0.0), c(0.2, 0.0), c(0.0, 0.0), c(0.1, 0.0)]);
        assert!(matches!(ZMatrix::new(asym), Err(Error::NotSymmetric { .. })));
        assert!(matches!(ZMatrix::new(diag(&[1.0, 0.2])), Err(Error::NotContraction { .. })));
    }

    #[test]
    fn takagi_of_diagonal() {
        let z = ZMatrix::new(diag(&[0.2, 0.5])).unwrap();
        let t = z.takagi();
        assert!((t.d[0] - 0.5).abs() < 1e-15 && (t.d[1] - 0.2).abs() < 1e-15);
        assert!(max_abs_diff(&t.reconstruct(), z.z()) < 1e-14);
        let t0 = ZMatrix::zero(3).takagi();
        assert_eq!(t0.d, vec![0.0; 3]);
        assert!(max_abs_diff(&(t0.w.adjoint() * &t0.w), &identity(3)) < 1e-14);
    }

    #[test]
    fn takagi_partly_degenerate_kernel() {
        // rank one: Z = s·uuᵗ
        let u = DVector::from_vec(vec![c(0.6, 0.0), c(0.0, 0.8), c(0.0, 0.0)]);
        let z = &u * u.transpose() * c(0.4, 0.0);
        let z = ZMatrix::new(z).unwrap();
        let t = z.takagi();
        assert!((t.d[0] - 0.4).abs() < 1e-14);
        assert!(t.d[1].abs() < 1e-14 && t.d[2].abs() < 1e-14);
        assert!(max_abs_diff(&t.reconstruct(), z.z()) < 1e-13);
        assert!(max_abs_diff(&(t.w.adjoint() * &t.w), &identity(3)) < 1e-13);
    }

    #[test]
    fn norm_constant_single_mode() {
        assert_eq!(ZMatrix::zero(2).norm_constant(), 1.0);
        let r: f64 = 0.9;
        let z = ZMatrix::new(CMat::from_element(1, 1, c(r.tanh(), 0.0))).unwrap();
        assert!((z.norm_constant() - r.cosh()).abs() < 1e-14);
    }

    #[test]
    fn thermal_law() {
        assert_eq!(thermal_occupations(0.0, 3), vec![1.0, 0.0, 0.0, 0.0]);
        let p = thermal_occupations(1.0, 5);
        for (k, pk) in p.iter().enumerate() {
            assert!((pk - 0.5f64.powi(k as i32 + 1)).abs() < 1e-16);
        }
        let p = thermal_occupations(0.7, 200);
        let mean: f64 = p.iter().enumerate().map(|(k, pk)| k as f64 * pk).sum();
        assert!((mean - 0.7).abs() < 1e-10);
    }
}
