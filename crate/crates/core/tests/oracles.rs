mod common;

use common::*;
use heston_fpt::model::{exponent_a, riccati_b, second_moment, stationary_density};
use heston_fpt::quadrature::{sine_transform, survival_averaged, survival_exact};
use heston_fpt::{Dimensionless, QuadConfig, State};

const OMEGAS: [f64; 5] = [0.01, 0.5, 2.0, 10.0, 50.0];
const TAUS: [f64; 5] = [1e-3, 0.1, 1.0, 5.0, 30.0];

#[test]
fn riccati_b_matches_rk4() {
    for beta in [0.1, 1.0, 5.0] {
        for &w in &OMEGAS {
            for &tau in &TAUS {
                let (b, _) = riccati_rk4(w, tau, THETA, beta);
                let got = riccati_b(w, tau, beta);
                assert!(rel_err(got, b) <= 1e-8, "beta={beta} w={w} tau={tau}: {got:e} vs {b:e}");
            }
        }
    }
}

#[test]
fn exponent_a_matches_integrated_b() {
    for beta in [0.1, 1.0, 5.0] {
        let nu = 2.0 * THETA / (beta * beta);
        for &w in &OMEGAS {
            for &tau in &TAUS {
                let got = exponent_a(w, tau, THETA, beta);
                let (_, a) = riccati_rk4(w, tau, THETA, beta);
                assert!(rel_err(got, a) <= 1e-6, "rk4 beta={beta} w={w} tau={tau}: {got:e} vs {a:e}");
                let quad = nu * simpson(|s| riccati_b(w, s, beta), 0.0, tau, 20_000);
                assert!(rel_err(got, quad) <= 1e-6, "simpson beta={beta} w={w} tau={tau}: {got:e} vs {quad:e}");
            }
        }
    }
}

#[test]
fn averaged_matches_gamma_weighted_exact() {
    let cfg = QuadConfig::default();
    let points = [
        (0.01, 1.0, 0.1),
        (0.005, 0.5, 0.5),
        (0.02, 2.0, 1.0),
        (0.1, 10.0, 0.3),
        (0.05, 0.5, 0.05),
    ];
    for (z, tau, beta) in points {
        let d = Dimensionless::new(THETA, beta).unwrap();
        let nu = d.nu();
        let exact = |x: f64| {
            let v = x * beta * beta / 2.0;
            survival_exact(&State::new(z, v, tau).unwrap(), &d, &cfg).unwrap().value
        };
        let direct = gamma_average(exact, nu, 50.0, 400);
        let got = survival_averaged(z, tau, &d, &cfg).unwrap().value;
        assert!(rel_err(got, direct) <= 1e-5, "z={z} tau={tau} beta={beta}: {got} vs {direct}");

        if nu > 0.3 {
            let (xs, ws) = gauss_laguerre(200, nu - 1.0);
            let gl: f64 = xs.iter().zip(&ws).map(|(&x, &w)| w * exact(x)).sum();
            assert!(rel_err(got, gl) <= 1e-5, "laguerre z={z} tau={tau} beta={beta}: {got} vs {gl}");
        }
    }
}

#[test]
fn sine_transform_closed_forms() {
    let cfg = QuadConfig::default();
    for a in [1e-4, 1e-2, 1.0, 100.0] {
        for z in [1e-4, 1e-2, 0.3, 1.0, 10.0] {
            let g = sine_transform(|w| (-a * w * w).exp(), z, &cfg).unwrap().value;
            assert!((g - gaussian_sine_closed_form(z, a)).abs() <= 1e-8, "gauss a={a} z={z}");
            let e = sine_transform(|w| (-a * w).exp(), z, &cfg).unwrap().value;
            assert!((e - exponential_sine_closed_form(z, a)).abs() <= 1e-8, "exp b={a} z={z}");
        }
    }
}

#[test]
fn small_beta_limit_is_gaussian_in_mean_variance() {
    let d = Dimensionless::new(THETA, 1e-4).unwrap();
    let cfg = QuadConfig::default();
    for (z, v, tau) in [(0.01, THETA, 0.5), (0.02, 10.0 * THETA, 1.0), (0.005, 0.0, 2.0)] {
        let want = libm::erf(z / (2.0 * second_moment(tau, v, THETA)).sqrt());
        let got = survival_exact(&State::new(z, v, tau).unwrap(), &d, &cfg).unwrap().value;
        assert!(rel_err(got, want) < 1e-3, "z={z} v={v} tau={tau}: {got} vs {want}");
    }
}

#[test]
fn stationary_density_matches_gauss_laguerre_moments() {
    // int p(v) g(v) dv with p written out against the Laguerre weight
    for beta in [0.05, 0.2] {
        let d = Dimensionless::new(THETA, beta).unwrap();
        let c = 2.0 / (beta * beta);
        let (xs, ws) = gauss_laguerre(60, d.nu() - 1.0);
        let mean: f64 = xs.iter().zip(&ws).map(|(x, w)| w * x / c).sum();
        assert!(rel_err(mean, THETA) < 1e-12);
        let mass = power_substituted(|v| stationary_density(v, THETA, beta), d.nu(), 60.0 / c, 400);
        assert!((mass - 1.0).abs() < 1e-6, "beta={beta}: {mass}");
    }
}
