#![allow(clippy::approx_constant)]

use std::f64::consts::PI;

use holeprob::quad::{integrate, Tol};
use holeprob::specfun::*;
use num_complex::Complex64;
use statrs::function::gamma::{gamma_lr, gamma_ur, ln_gamma};

#[test]
fn log_gamma_examples() {
    assert_eq!(log_gamma(1.0).unwrap(), 0.0);
    assert!((log_gamma(5.0).unwrap() - 24f64.ln()).abs() < 1e-14);
    assert!((log_gamma(0.5).unwrap() - PI.sqrt().ln()).abs() < 1e-14);
    assert!((log_gamma(5.0).unwrap() - 3.1780538).abs() < 1e-7);
    assert!((log_gamma(0.5).unwrap() - 0.5723649).abs() < 1e-7);
}

#[test]
fn log_gamma_matches_statrs() {
    for x in [1e-8, 1e-3, 0.1, 0.7, 1.5, 3.3, 14.9, 15.1, 40.0, 1e3, 1e6, 1e12] {
        let (got, want) = (log_gamma(x).unwrap(), ln_gamma(x));
        assert!((got - want).abs() < 1e-12 * want.abs().max(1.0), "x {x}: {got} vs {want}");
    }
}

#[test]
fn incomplete_gamma_examples() {
    assert!((reg_gamma_q(1.0, 1.0).unwrap() - (-1f64).exp()).abs() < 1e-15);
    for s in [0.3, 1.0, 7.5, 400.0] {
        assert_eq!(reg_gamma_q(s, 0.0).unwrap(), 1.0);
        assert_eq!(reg_gamma_p(s, 0.0).unwrap(), 0.0);
    }
    assert!(reg_gamma_q(0.0, 1.0).is_err());
    assert!(reg_gamma_q(1.0, -1.0).is_err());
}

#[test]
fn incomplete_gamma_matches_quadrature() {
    // ∫_3^∞ t^{1.5} e^{-t} dt / Γ(2.5), with the tail cut where the integrand
    // is below 1e-30.
    let s = 2.5;
    let lg = log_gamma(s).unwrap();
    let f = |t: f64| ((s - 1.0) * t.ln() - t - lg).exp();
    let want = integrate(f, 3.0, 90.0, Tol::new(1e-15, 1e-13)).unwrap().value;
    assert!((reg_gamma_q(s, 3.0).unwrap() - want).abs() < 1e-10);
    let lower = integrate(f, 0.0, 3.0, Tol::new(1e-15, 1e-13)).unwrap().value;
    assert!((reg_gamma_p(s, 3.0).unwrap() - lower).abs() < 1e-10);
}

#[test]
fn incomplete_gamma_matches_statrs() {
    for s in [0.5, 1.0, 2.0, 7.3, 30.0, 250.0] {
        for x in [0.01, 0.5, 1.0, 5.0, 29.0, 31.0, 200.0, 260.0] {
            let p = reg_gamma_p(s, x).unwrap();
            let q = reg_gamma_q(s, x).unwrap();
            assert!((p - gamma_lr(s, x)).abs() < 1e-12, "P({s}, {x})");
            assert!((q - gamma_ur(s, x)).abs() < 1e-12, "Q({s}, {x})");
        }
    }
}

#[test]
fn log_tails_keep_their_exponent() {
    // Q(1, x) = e^{-x} even where e^{-x} underflows.
    assert!((ln_reg_gamma_q(1.0, 1000.0).unwrap() + 1000.0).abs() < 1e-10);
    // P(1, x) = 1 - e^{-x} ≈ x for tiny x.
    assert!((ln_reg_gamma_p(1.0, 1e-200).unwrap() - 1e-200f64.ln()).abs() < 1e-10);
    // Ginibre factor far in the tail: ln Q(k, r²) for k = 1 vs direct.
    let g = inc_gamma(3.0, 2000.0).unwrap();
    let direct = -2000.0 + 2.0 * 2000f64.ln() + (1.0 + 2.0 / 2000.0 + 2.0 / 4e6f64).ln() - 2f64.ln();
    assert!((g.ln_q - direct).abs() < 1e-9);
}

#[test]
fn mittag_leffler_examples() {
    let acc = Accuracy::default();
    let one = Complex64::new(1.0, 0.0);
    let e = mittag_leffler(1.0, 1.0, one, acc).unwrap();
    assert!((e.value - one.exp()).norm() < 1e-14);
    assert!((e.value.re - 2.7182818).abs() < 1e-7);
    let v = mittag_leffler(1.0, 2.0, one, acc).unwrap().value;
    assert!((v.re - (1f64.exp() - 1.0)).abs() < 1e-14);
    let v = mittag_leffler(2.0, 2.0, one, acc).unwrap().value;
    assert!((v.re - 1f64.sinh()).abs() < 1e-14);
    assert!((v.re - 1.1752012).abs() < 1e-7);
}

#[test]
fn mittag_leffler_exp_grid() {
    let acc = Accuracy::default();
    for i in -10..=10 {
        for j in -10..=10 {
            let z = Complex64::new(i as f64, j as f64);
            if z.norm() > 10.0 {
                continue;
            }
            let v = mittag_leffler(1.0, 1.0, z, acc).unwrap();
            let want = z.exp();
            assert!((v.value - want).norm() < 1e-10 * want.norm().max(1.0), "z {z}");
        }
    }
}

#[test]
fn mittag_leffler_half_index() {
    // E_{1/2,1}(z) = e^{z²} erfc(-z); at z = 1, erfc(-1) = 1 + erf(1).
    let erf1 = 0.842_700_792_949_714_9;
    let v = mittag_leffler(0.5, 1.0, Complex64::new(1.0, 0.0), Accuracy::default()).unwrap();
    assert!((v.value.re - 1f64.exp() * (1.0 + erf1)).abs() < 1e-12);
}

#[test]
fn mittag_leffler_domain_and_budget() {
    let z = Complex64::new(0.5, 0.0);
    assert!(mittag_leffler(0.0, 1.0, z, Accuracy::default()).is_err());
    assert!(mittag_leffler(1.0, 1.0, Complex64::new(2e3, 0.0), Accuracy::default()).is_err());
    let short = Accuracy::new(1e-16, 3).unwrap();
    assert!(matches!(
        mittag_leffler(1.0, 1.0, Complex64::new(5.0, 0.0), short),
        Err(holeprob::Error::NonConvergence { .. })
    ));
    assert!(Accuracy::new(0.0, 10).is_err());
}
