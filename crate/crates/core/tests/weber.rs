use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64 as C64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use squeezeflow::flow::{circular_distance, integrate_fundamental_at, FrequencyProfile};
use squeezeflow::weber::{
    asymptotic_squeeze, even_solution, gamma_complex, hyp_m, hyp_m_asymptotic, hyp_m_series,
    odd_solution, AsymptoticData,
};

/// Γ(z) from the Stirling series at `z + 20`, shifted back by the recurrence.
fn stirling_gamma(z: C64) -> C64 {
    // B_{2k} / (2k (2k-1))
    const COEF: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360360.0,
        1.0 / 156.0,
        -3617.0 / 122400.0,
    ];
    let shift = 20;
    let w = z + shift as f64;
    let mut lg = (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln();
    let mut wp = w;
    for c in COEF {
        lg += c / wp;
        wp *= w * w;
    }
    let mut prod = C64::new(1.0, 0.0);
    for k in 0..shift {
        prod *= z + k as f64;
    }
    lg.exp() / prod
}

#[test]
fn gamma_matches_stirling_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let z = C64::new(rng.gen_range(0.05..10.0), rng.gen_range(-10.0..10.0));
        let g = gamma_complex(z).unwrap();
        let s = stirling_gamma(z);
        assert!((g - s).norm() <= 1e-12 * s.norm(), "z={z}: {g} vs {s}");
    }
    let z = C64::new(0.25, 0.25);
    let g = gamma_complex(z).unwrap();
    assert!((g - stirling_gamma(z)).norm() <= 1e-12 * g.norm());
}

#[test]
fn gamma_reflection_on_random_strip() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let z = C64::new(rng.gen_range(0.001..0.999), rng.gen_range(-5.0..5.0));
        let lhs = gamma_complex(z).unwrap() * gamma_complex(1.0 - z).unwrap() * (PI * z).sin() / PI;
        assert!((lhs - 1.0).norm() <= 1e-12, "z={z}: residual {}", (lhs - 1.0).norm());
    }
}

#[test]
fn gamma_product_identity() {
    for d in [0.0, 0.5, 1.0, 2.0, 4.0] {
        let data = AsymptoticData::new(d).unwrap();
        let lhs = data.gamma_plus * data.gamma_minus.conj();
        let rhs = (PI * C64::new(1.0, d) / 4.0).sin() / PI;
        assert!((lhs - rhs).norm() <= 1e-12, "d={d}: {lhs} vs {rhs}");
    }
}

/// Exact rational partial sum of M(1/4, 1/2, 4i) with 200 terms.
fn exact_series_m() -> C64 {
    let mut re = BigRational::zero();
    let mut im = BigRational::zero();
    let mut coef = BigRational::from_integer(BigInt::from(1)); // (1/4)_n / (1/2)_n · 4^n / n!
    for n in 0..200u32 {
        match n % 4 {
            0 => re += &coef,
            1 => im += &coef,
            2 => re -= &coef,
            _ => im -= &coef,
        }
        // (n + 1/4)/(n + 1/2) · 4/(n + 1)
        let num = BigInt::from(4 * (4 * n + 1));
        let den = BigInt::from((4 * n + 2) * (n + 1));
        coef *= BigRational::new(num, den);
    }
    C64::new(re.to_f64().unwrap(), im.to_f64().unwrap())
}

#[test]
fn series_matches_exact_rational_oracle() {
    let want = exact_series_m();
    let got = hyp_m(C64::new(0.25, 0.0), C64::new(0.5, 0.0), C64::new(0.0, 4.0)).unwrap();
    assert!((got - want).norm() <= 1e-13 * want.norm(), "{got} vs {want}");
}

#[test]
fn even_kernel_is_real() {
    for t in [0.5f64, 1.0, 2.0] {
        let m = hyp_m(C64::new(0.25, 0.0), C64::new(0.5, 0.0), C64::new(0.0, t * t)).unwrap();
        let v = C64::from_polar(1.0, -0.5 * t * t) * m;
        assert!(v.im.abs() <= 1e-13, "t={t}: {v}");
    }
    // stays real with a gap and on the asymptotic branch
    for t in [3.0f64, 7.0, 12.0] {
        let m = hyp_m(C64::new(0.25, 0.5), C64::new(0.5, 0.0), C64::new(0.0, t * t)).unwrap();
        let v = C64::from_polar(1.0, -0.5 * t * t) * m;
        assert!(v.im.abs() <= 1e-10, "t={t}: {v}");
    }
}

#[test]
fn solutions_match_ode_integration() {
    let times: Vec<f64> = (0..=100).map(|k| 0.05 * k as f64).collect();
    for d in [0.0, 1.0] {
        let profile = FrequencyProfile::from_delta_sq(d).unwrap();
        let pairs = integrate_fundamental_at(&profile, &times, 1e-12).unwrap();
        for (t, p) in times.iter().zip(&pairs) {
            let (xp, vp) = even_solution(*t, d).unwrap();
            let (xm, vm) = odd_solution(*t, d).unwrap();
            let err = (xp - p.x_plus)
                .abs()
                .max((vp - p.xdot_plus).abs())
                .max((xm - p.x_minus).abs())
                .max((vm - p.xdot_minus).abs());
            assert!(err <= 1e-8, "d={d} t={t}: err {err}");
        }
    }
}

#[test]
fn overlap_band_agreement_on_weber_family() {
    for d in [0.0, 0.5, 1.0, 2.0] {
        for (a, b) in [
            (C64::new(0.25, 0.25 * d), 0.5),
            (C64::new(0.75, 0.25 * d), 1.5),
            (C64::new(1.25, 0.25 * d), 1.5),
            (C64::new(1.75, 0.25 * d), 2.5),
        ] {
            for r in [29.0, 30.0, 31.0, 33.0] {
                let z = C64::new(0.0, r);
                let s = hyp_m_series(a, b.into(), z).unwrap();
                let asy = hyp_m_asymptotic(a, b.into(), z).unwrap();
                assert!((s - asy).norm() <= 1e-9 * s.norm().max(1.0), "a={a} b={b} r={r}");
            }
        }
    }
}

#[test]
fn ode_residual_by_second_differences() {
    // Richardson-combined second differences, O(h⁴)
    let h = 2e-3;
    let d2 = |f: &dyn Fn(f64) -> f64, t: f64, h: f64| (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h);
    for d in [0.0, 1.0] {
        for k in 1..=100 {
            let t = 0.05 * k as f64;
            for sol in [even_solution, odd_solution] {
                let x = |s: f64| sol(s, d).unwrap().0;
                let xdd = (4.0 * d2(&x, t, 0.5 * h) - d2(&x, t, h)) / 3.0;
                let res = xdd + (t * t + d) * x(t);
                assert!(res.abs() <= 1e-8, "d={d} t={t}: {res}");
            }
        }
    }
}

#[test]
fn ode_residual_from_derivatives() {
    // ẍ = d/dt ẋ by a central difference of the analytic derivative
    let h = 1e-5;
    for d in [0.0, 1.0] {
        for k in 1..=50 {
            let t = 0.1 * k as f64;
            for f in [even_solution, odd_solution] {
                let xdd = (f(t + h, d).unwrap().1 - f(t - h, d).unwrap().1) / (2.0 * h);
                let res = xdd + (t * t + d) * f(t, d).unwrap().0;
                assert!(res.abs() <= 1e-8, "d={d} t={t}: {res}");
            }
        }
    }
}

#[test]
fn wkb_phase_rate() {
    let d = 1.0;
    let data = AsymptoticData::new(d).unwrap();
    for t in [10.0f64, 20.0, 40.0] {
        let diff = (data.theta_prime(t) - (t * t + d).sqrt()).abs();
        // next WKB term is δ⁴/(8t³)
        assert!(diff <= 1.01 * d * d / (8.0 * t.powi(3)), "t={t}: {diff}");
        assert!(diff >= 0.9 * d * d / (8.0 * t.powi(3)));
    }
}

fn phase_of_even(t: f64, d: f64) -> f64 {
    let (x, v) = even_solution(t, d).unwrap();
    let w = (t * t + d).sqrt();
    -(C64::new(w * x, v)).arg()
}

#[test]
fn even_solution_phase_advance() {
    let d = 1.0;
    let data = AsymptoticData::new(d).unwrap();
    // at t of order 3 the O(1/t²) corrections alone shift the phase by ~1e-2
    for (t1, t2) in [(30.0, 40.0), (40.0, 50.0)] {
        let got = phase_of_even(t2, d) - phase_of_even(t1, d);
        let want = data.theta_plus(t2) - data.theta_plus(t1);
        assert!(circular_distance(got, want) <= 1e-3, "({t1},{t2}): {}", circular_distance(got, want));
    }
}

#[test]
fn asymptotic_squeeze_closed_form() {
    // δ² = 1: (1 + e^π)^{-1/2} from the exact value of e^π to 30 digits
    let e_pi = 23.140692632779269005729086367948547f64;
    let want = 1.0 / (1.0 + e_pi).sqrt();
    assert!((asymptotic_squeeze(1.0).0 - want).abs() <= 1e-15);
    for d in [0.0, 0.3, 1.0, 3.0, 10.0] {
        let (tr, _) = asymptotic_squeeze(d);
        let fidelity = (1.0 - tr * tr).sqrt();
        assert!((fidelity - 1.0 / (1.0 + (-PI * d).exp()).sqrt()).abs() <= 1e-15);
    }
}
