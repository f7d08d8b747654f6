//! Closed-form approximations to the survival probability, their tails, the
//! risk ratio against a constant-volatility walk, and the crossing level
//! where small- and large-fluctuation hitting probabilities coincide.
//!
//! The approximations take plain non-negative inputs and never fail; each
//! one is attached to a [`Regime`] whose validity string is advisory only.
//! Negative inputs are outside their domain and give unspecified results.

use std::f64::consts::{FRAC_2_PI, PI};

use crate::error::{ensure_positive, Error, Result};
use crate::model::{lambda, Dimensionless};
use crate::quadrature::{survival_averaged, Method, QuadConfig};

/// An approximation together with the condition under which it holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Regime {
    pub tag: Method,
    pub validity: &'static str,
}

impl Regime {
    /// The regime behind an approximation tag; `None` for the exact methods.
    pub fn of(tag: Method) -> Option<Regime> {
        let validity = match tag {
            Method::ErfJoint => "(theta/beta^2) tau >> 1 or v >> 1 or beta << 1",
            Method::ArctanJoint => "beta >> 1 and tau past the initial transient",
            Method::Pheno => "beta >> 1; interpolates to the initial condition",
            Method::ErfAveraged => "(theta/beta^2) tau >> 1",
            Method::ArctanAveraged => "beta >> 1",
            Method::TailGaussian => "|L| >> sqrt(lambda)",
            Method::TailPowerlaw => "beta >> 1 and beta |L| >> theta tau",
            Method::Wiener => "constant volatility",
            Method::Exact | Method::Averaged => return None,
        };
        Some(Regime { tag, validity })
    }

    pub fn all() -> Vec<Regime> {
        [
            Method::ErfJoint,
            Method::ArctanJoint,
            Method::Pheno,
            Method::ErfAveraged,
            Method::ArctanAveraged,
            Method::TailGaussian,
            Method::TailPowerlaw,
            Method::Wiener,
        ]
        .into_iter()
        .filter_map(Regime::of)
        .collect()
    }
}

/// `Erf(z / sqrt(lambda(tau, v)))`, the saddle-point form for long times,
/// large variance or small `beta`.
pub fn survival_erf(z: f64, v: f64, tau: f64, theta: f64) -> f64 {
    if z == 0.0 {
        return 0.0;
    }
    libm::erf(z / lambda(tau, v, theta).sqrt())
}

/// `(2/pi) arctan(beta z / (theta tau + v))` for `beta >> 1`.
///
/// Meets the boundary condition but not the initial one: at `tau = 0` it
/// is below 1 whenever `v > 0`.
pub fn survival_arctan(z: f64, v: f64, tau: f64, theta: f64, beta: f64) -> f64 {
    if z == 0.0 {
        return 0.0;
    }
    FRAC_2_PI * (beta * z / (theta * tau + v)).atan()
}

/// Semi-phenomenological form `(2/pi) arctan(2 z / lambda(tau, v))`.
///
/// With `use_beta_factor` the argument becomes `2 beta z / lambda`, which is
/// the variant whose long-time limit matches [`survival_avg_arctan`].
pub fn survival_pheno(z: f64, v: f64, tau: f64, theta: f64, beta: f64, use_beta_factor: bool) -> f64 {
    if z == 0.0 {
        return 0.0;
    }
    let b = if use_beta_factor { beta } else { 1.0 };
    FRAC_2_PI * (2.0 * b * z / lambda(tau, v, theta)).atan()
}

/// `Erf(z / sqrt(2 theta tau))`; identical to the Wiener survival with
/// `sigma^2 t = theta tau`.
pub fn survival_avg_erf(z: f64, tau: f64, theta: f64) -> f64 {
    if z == 0.0 {
        return 0.0;
    }
    libm::erf(z / (2.0 * theta * tau).sqrt())
}

/// `(2/pi) arctan(beta z / (theta tau))`, the averaged survival for `beta >> 1`.
pub fn survival_avg_arctan(z: f64, tau: f64, theta: f64, beta: f64) -> f64 {
    survival_arctan(z, 0.0, tau, theta, beta)
}

/// Gaussian tail of the hitting probability,
/// `sqrt(lambda/pi) exp(-L^2/lambda) / |L|`. Pass `lambda = 2 theta tau` for
/// the averaged case.
pub fn tail_gaussian_hitting(l_abs: f64, lambda: f64) -> f64 {
    (lambda / PI).sqrt() * (-l_abs * l_abs / lambda).exp() / l_abs
}

/// Power-law tail `(2/pi) theta tau / (beta |L|)` of the averaged hitting
/// probability at large `beta`.
pub fn tail_powerlaw_hitting(l_abs: f64, tau: f64, theta: f64, beta: f64) -> f64 {
    FRAC_2_PI * theta * tau / (beta * l_abs)
}

/// Averaged hitting probability divided by that of a Wiener walk with
/// `sigma^2 = m^2`, i.e. by `1 - Erf(z / sqrt(2 theta tau))`.
pub fn risk_ratio(z: f64, tau: f64, d: &Dimensionless, config: &QuadConfig) -> Result<f64> {
    ensure_positive("z", z)?;
    ensure_positive("tau", tau)?;
    let theta_tau = d.theta * tau;
    let denom = libm::erfc(z / (2.0 * theta_tau).sqrt());
    if denom < f64::MIN_POSITIVE {
        return Err(Error::DivisionDomain { z, theta_tau });
    }
    let w = 1.0 - survival_averaged(z, tau, d, config)?.value;
    Ok(w / denom)
}

/// Large-`|L|`, large-`beta` growth of [`risk_ratio`]:
/// `sqrt(2 theta tau / pi) exp(L^2 / (2 theta tau)) / beta`, the quotient of
/// the power-law and Gaussian tails.
pub fn risk_ratio_asymptote(z: f64, tau: f64, d: &Dimensionless) -> f64 {
    let tt = d.theta * tau;
    (2.0 * tt / PI).sqrt() * (z * z / (2.0 * tt)).exp() / d.beta
}

/// Root of the crossing-level equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingResult {
    pub l_c: f64,
    pub beta: f64,
    pub theta_tau: f64,
    /// Scan interval that contained the sign change.
    pub bracket: (f64, f64),
    /// `|f(l_c)|`.
    pub residual: f64,
}

const SCAN_POINTS: usize = 200;
const SCAN_LO: f64 = 1e-4;
const SCAN_HI: f64 = 10.0;

fn crossing_gap(l: f64, beta: f64, theta_tau: f64) -> f64 {
    libm::erf(l / (2.0 * theta_tau).sqrt()) - FRAC_2_PI * (beta * l / theta_tau).atan()
}

/// Solves `Erf(l / sqrt(2 theta tau)) = (2/pi) arctan(beta l / (theta tau))`
/// for `l > 0`.
///
/// Scans 200 log-spaced points on `[1e-4, 10]`, ignoring the stretch near the
/// trivial root `l = 0` where `|f| <= 10 tol`, then bisects the first sign
/// change until `|f| <= tol`.
pub fn crossing_level(beta: f64, theta_tau: f64, tol: f64) -> Result<CrossingResult> {
    ensure_positive("beta", beta)?;
    ensure_positive("theta_tau", theta_tau)?;
    ensure_positive("tol", tol)?;
    let f = |l: f64| crossing_gap(l, beta, theta_tau);
    let ratio = (SCAN_HI / SCAN_LO).ln() / (SCAN_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..SCAN_POINTS)
        .map(|i| SCAN_LO * (ratio * i as f64).exp())
        .collect();
    let start = grid
        .iter()
        .position(|&l| f(l).abs() > 10.0 * tol)
        .ok_or(Error::NoRoot { beta, theta_tau })?;

    let mut prev = (grid[start], f(grid[start]));
    for &l in &grid[start + 1..] {
        let fl = f(l);
        if fl == 0.0 {
            return Ok(CrossingResult {
                l_c: l,
                beta,
                theta_tau,
                bracket: (prev.0, l),
                residual: 0.0,
            });
        }
        if fl.signum() != prev.1.signum() {
            let bracket = (prev.0, l);
            let (mut lo, mut hi, mut f_lo) = (prev.0, l, prev.1);
            let mut mid = 0.5 * (lo + hi);
            for _ in 0..200 {
                mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if fm.abs() <= tol && hi - lo <= 1e-12 * mid || fm == 0.0 || mid <= lo || mid >= hi {
                    break;
                }
                if fm.signum() == f_lo.signum() {
                    lo = mid;
                    f_lo = fm;
                } else {
                    hi = mid;
                }
            }
            return Ok(CrossingResult {
                l_c: mid,
                beta,
                theta_tau,
                bracket,
                residual: f(mid).abs(),
            });
        }
        prev = (l, fl);
    }
    Err(Error::NoRoot { beta, theta_tau })
}

/// Ordinary least-squares line `y = intercept + slope x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    pub r_squared: f64,
    pub rms_residual: f64,
    pub n: usize,
}

/// Fits of the crossing level: `l_c = a + b ln(beta)` at each fixed
/// `theta tau`, and `ln l_c = c + gamma ln(theta tau)` at each fixed `beta`.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossingFits {
    /// `(theta_tau, fit)`; `fit.slope` is the coefficient of `ln(beta)`.
    pub log_laws: Vec<(f64, LineFit)>,
    /// `(beta, fit)`; `fit.slope` is the exponent `gamma`.
    pub power_laws: Vec<(f64, LineFit)>,
}

const MIN_FIT_SAMPLES: usize = 5;

/// OLS fit of `ys` against `xs`. Requires at least five points.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    let n = xs.len();
    if n != ys.len() {
        return Err(Error::InsufficientData(format!(
            "{} abscissae but {} ordinates",
            n,
            ys.len()
        )));
    }
    if n < MIN_FIT_SAMPLES {
        return Err(Error::InsufficientData(format!(
            "{n} samples, need at least {MIN_FIT_SAMPLES}"
        )));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(Error::InsufficientData("non-finite sample".into()));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("all abscissae equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - intercept - slope * x;
            r * r
        })
        .sum();
    Ok(LineFit {
        slope,
        intercept,
        slope_stderr: (sse / (nf - 2.0) / sxx).sqrt(),
        r_squared: if syy == 0.0 { 1.0 } else { 1.0 - sse / syy },
        rms_residual: (sse / nf).sqrt(),
        n,
    })
}

fn check_decade(name: &str, lo: f64, hi: f64) -> Result<()> {
    if hi < 10.0 * lo {
        return Err(Error::InsufficientData(format!(
            "{name} spans [{lo:e}, {hi:e}], less than one decade"
        )));
    }
    Ok(())
}

/// Fits `l_c = a + b ln(beta)` to samples sharing one `theta tau`.
pub fn fit_log_law(betas: &[f64], l_c: &[f64]) -> Result<LineFit> {
    let (lo, hi) = min_max(betas);
    check_decade("beta", lo, hi)?;
    let xs: Vec<f64> = betas.iter().map(|b| b.ln()).collect();
    fit_line(&xs, l_c)
}

/// Fits `ln l_c = c + gamma ln(theta tau)` to samples sharing one `beta`.
pub fn fit_power_law(theta_taus: &[f64], l_c: &[f64]) -> Result<LineFit> {
    let (lo, hi) = min_max(theta_taus);
    check_decade("theta*tau", lo, hi)?;
    let xs: Vec<f64> = theta_taus.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = l_c.iter().map(|l| l.ln()).collect();
    fit_line(&xs, &ys)
}

fn min_max(xs: &[f64]) -> (f64, f64) {
    xs.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

/// Groups `(beta, theta_tau, l_c)` samples and fits both laws.
///
/// Samples with equal `theta_tau` form a log-law group and samples with
/// equal `beta` a power-law group. Groups of fewer than five samples are
/// not fitted; larger groups must span a decade.
pub fn fit_crossing_laws(samples: &[(f64, f64, f64)]) -> Result<CrossingFits> {
    let mut log_laws = Vec::new();
    for (tt, group) in group_by(samples, |s| s.1) {
        if group.len() < MIN_FIT_SAMPLES {
            continue;
        }
        let betas: Vec<f64> = group.iter().map(|s| s.0).collect();
        let ls: Vec<f64> = group.iter().map(|s| s.2).collect();
        log_laws.push((tt, fit_log_law(&betas, &ls)?));
    }
    let mut power_laws = Vec::new();
    for (beta, group) in group_by(samples, |s| s.0) {
        if group.len() < MIN_FIT_SAMPLES {
            continue;
        }
        let tts: Vec<f64> = group.iter().map(|s| s.1).collect();
        let ls: Vec<f64> = group.iter().map(|s| s.2).collect();
        power_laws.push((beta, fit_power_law(&tts, &ls)?));
    }
    if log_laws.is_empty() && power_laws.is_empty() {
        return Err(Error::InsufficientData(
            "no beta or theta*tau value is shared by five or more samples".into(),
        ));
    }
    Ok(CrossingFits {
        log_laws,
        power_laws,
    })
}

/// `(beta, theta_tau, l_c)`.
type Sample = (f64, f64, f64);

fn group_by<K: Fn(&Sample) -> f64>(samples: &[Sample], key: K) -> Vec<(f64, Vec<Sample>)> {
    let mut groups: Vec<(f64, Vec<Sample>)> = Vec::new();
    for s in samples {
        let k = key(s);
        match groups.iter_mut().find(|(g, _)| *g == k) {
            Some((_, members)) => members.push(*s),
            None => groups.push((k, vec![*s])),
        }
    }
    groups.sort_by(|a, b| a.0.total_cmp(&b.0));
    groups
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::State;
    use crate::quadrature::survival_exact;

    const THETA: f64 = 1.92e-3;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn boundary_and_initial_values() {
        assert_eq!(survival_erf(0.0, 0.3, 1.0, THETA), 0.0);
        assert_eq!(survival_erf(0.01, 0.0, 0.0, THETA), 1.0);
        assert_eq!(survival_arctan(0.0, THETA, 0.5, THETA, 10.0), 0.0);
        assert_eq!(survival_arctan(0.01, 0.0, 0.0, THETA, 10.0), 1.0);
        for flag in [false, true] {
            assert_eq!(survival_pheno(0.0, THETA, 0.5, THETA, 10.0, flag), 0.0);
            assert_eq!(survival_pheno(0.01, 0.0, 0.0, THETA, 10.0, flag), 1.0);
        }
        assert_eq!(survival_avg_erf(0.0, 1.0, THETA), 0.0);
        assert_eq!(survival_avg_arctan(0.0, 1.0, THETA, 10.0), 0.0);
        assert_eq!(survival_avg_arctan(0.01, 0.0, THETA, 10.0), 1.0);
    }

    #[test]
    fn arctan_misses_initial_condition() {
        assert!(survival_arctan(0.01, THETA, 0.0, THETA, 10.0) < 1.0);
    }

    #[test]
    fn avg_erf_direct_value() {
        let got = survival_avg_erf(0.01, 1.0, THETA);
        assert_eq!(got, libm::erf(0.01 / 3.84e-3f64.sqrt()));
        assert!((got - 0.180_523).abs() < 1e-6, "{got}");
    }

    #[test]
    fn avg_erf_is_wiener() {
        for (z, tt) in [(0.01, 1.92e-3), (0.3, 0.05), (2.0, 1.0)] {
            let w = crate::quadrature::survival_wiener(z, tt, 1.0).unwrap();
            assert_eq!(survival_avg_erf(z, 1.0, tt), w);
        }
    }

    #[test]
    fn arctan_forms_agree_at_zero_variance() {
        for z in [1e-3, 0.05, 2.0] {
            assert_eq!(
                survival_arctan(z, 0.0, 0.7, THETA, 3.0),
                survival_avg_arctan(z, 0.7, THETA, 3.0)
            );
        }
    }

    #[test]
    fn pheno_long_time_limit() {
        // lambda -> 2 theta tau, so the printed form tends to arctan(z / theta tau)
        let (z, tau) = (0.05, 1e4);
        let plain = survival_pheno(z, THETA, tau, THETA, 10.0, false);
        assert!(rel(plain, FRAC_2_PI * (z / (THETA * tau)).atan()) < 1e-3);
        let scaled = survival_pheno(z, THETA, tau, THETA, 10.0, true);
        assert!(rel(scaled, survival_avg_arctan(z, tau, THETA, 10.0)) < 1e-3);
    }

    #[test]
    fn erf_tracks_exact_in_its_regimes() {
        let d = Dimensionless::new(THETA, 1.0).unwrap();
        let cfg = QuadConfig::default();
        let exact = |z, v, tau| survival_exact(&State::new(z, v, tau).unwrap(), &d, &cfg).unwrap().value;
        // large initial variance, early times
        let v = 1e3 * THETA;
        for tau in [0.1, 0.2] {
            assert!(rel(survival_erf(0.01, v, tau, THETA), exact(0.01, v, tau)) < 0.02, "tau={tau}");
        }
        // long times
        let v = 5.0 * THETA;
        assert!(rel(survival_erf(0.01, v, 1e5, THETA), exact(0.01, v, 1e5)) < 0.01);
    }

    #[test]
    fn small_beta_limit_uses_mean_integrated_variance() {
        // As beta -> 0 the variance path is deterministic and the exact survival
        // is Erf(z / sqrt(2 E[X^2])). The lambda of survival_erf carries v where
        // this limit has v - theta, so at v = theta and tau = O(1) it undershoots.
        let d = Dimensionless::new(THETA, 1e-3).unwrap();
        let (z, tau) = (0.01, 0.5);
        let exact = survival_exact(&State::new(z, THETA, tau).unwrap(), &d, &QuadConfig::default())
            .unwrap()
            .value;
        let limit = libm::erf(z / (2.0 * crate::model::second_moment(tau, THETA, THETA)).sqrt());
        assert!(rel(exact, limit) < 5e-3, "{exact} vs {limit}");
        let approx = survival_erf(z, THETA, tau, THETA);
        assert!((approx - 0.190_786).abs() < 1e-6);
        assert!(approx < 0.8 * exact);
    }

    #[test]
    fn arctan_tracks_exact_at_large_beta() {
        let d = Dimensionless::new(THETA, 10.0).unwrap();
        let cfg = QuadConfig::default();
        let exact = survival_exact(&State::new(0.01, THETA, 0.5).unwrap(), &d, &cfg).unwrap().value;
        assert!(rel(survival_arctan(0.01, THETA, 0.5, THETA, 10.0), exact) < 0.05);
        for z in [0.01, 0.03, 0.1] {
            let exact = survival_averaged(z, 0.5, &d, &cfg).unwrap().value;
            let approx = survival_avg_arctan(z, 0.5, THETA, 10.0);
            assert!(rel(approx, exact) < 0.05, "z={z}: {approx} vs {exact}");
        }
    }

    #[test]
    fn gaussian_tail_follows_erfc() {
        // erfc(x) = exp(-x^2)/(x sqrt(pi)) (1 - 1/(2x^2) + ...), so the leading
        // term is within 5% once x^2 >= 10.
        let lam = 2.0 * THETA;
        for x2 in [10.0, 16.0, 40.0] {
            let l = (x2 * lam).sqrt();
            let w = 1.0 - survival_erf(l, 0.0, 1.0, THETA);
            let w = if w > 1e-12 { w } else { libm::erfc(l / lam.sqrt()) };
            assert!(rel(tail_gaussian_hitting(l, lam), w) < 0.05, "x2={x2}");
        }
        // -ln(W |L|) = L^2/lambda - ln(sqrt(lambda/pi)); the constant fades as L grows
        let q = |l: f64| -(tail_gaussian_hitting(l, 5e-3) * l).ln();
        assert!((q(1.8) / q(0.9) - 4.0).abs() < 0.1);
        assert_eq!(tail_gaussian_hitting(1e3, lam), 0.0);
    }

    #[test]
    fn powerlaw_tail() {
        let (tau, beta) = (3.0, 10.0);
        let c = tail_powerlaw_hitting(0.1, tau, THETA, beta) * 0.1;
        for l in [0.2, 1.0, 7.0] {
            assert!(rel(tail_powerlaw_hitting(l, tau, THETA, beta) * l, c) < 1e-14);
        }
        let ratio = tail_powerlaw_hitting(0.1, tau, THETA, 2.0 * beta) / tail_powerlaw_hitting(0.1, tau, THETA, beta);
        assert!((ratio - 0.5).abs() < 1e-15);
        for x in [10.0, 30.0, 1e3] {
            let l = x * THETA * tau / beta;
            let w = 1.0 - survival_avg_arctan(l, tau, THETA, beta);
            assert!(rel(tail_powerlaw_hitting(l, tau, THETA, beta), w) < 0.02, "x={x}");
        }
    }

    #[test]
    fn risk_ratio_regimes() {
        let cfg = QuadConfig::default();
        let d = Dimensionless::new(THETA, 10.0).unwrap();
        assert!(risk_ratio(0.02, 3.0, &d, &cfg).unwrap() < 1.0);
        for z in [0.5, 0.6] {
            let r = risk_ratio(z, 3.0, &d, &cfg).unwrap();
            let a = risk_ratio_asymptote(z, 3.0, &d);
            assert!(r / a < 2.0 && a / r < 2.0, "z={z}: ratio {r:e} vs asymptote {a:e}");
        }
        let small = Dimensionless::new(THETA, 0.01).unwrap();
        for z in [0.02, 0.05, 0.1] {
            let r = risk_ratio(z, 3.0, &small, &cfg).unwrap();
            assert!((r - 1.0).abs() < 0.05, "z={z}: {r}");
        }
        assert!(matches!(
            risk_ratio(5.0, 3.0, &d, &cfg),
            Err(Error::DivisionDomain { .. })
        ));
        assert!(risk_ratio(0.0, 3.0, &d, &cfg).is_err());
    }

    #[test]
    fn crossing_level_root() {
        let r = crossing_level(10.0, 5.76e-3, 1e-10).unwrap();
        assert!(r.l_c > 0.0 && r.residual <= 1e-10);
        assert!(r.bracket.0 <= r.l_c && r.l_c <= r.bracket.1);
        assert!(crossing_gap(r.l_c, 10.0, 5.76e-3).abs() <= 1e-10);
    }

    #[test]
    fn crossing_level_grows_with_time_and_beta() {
        let tts: Vec<f64> = (0..10).map(|i| 1e-3 * 10f64.powf(i as f64 / 9.0)).collect();
        let ls: Vec<f64> = tts.iter().map(|&t| crossing_level(10.0, t, 1e-10).unwrap().l_c).collect();
        assert!(ls.windows(2).all(|w| w[0] <= w[1]), "{ls:?}");
        let by_beta: Vec<f64> = [1.0, 3.0, 10.0, 30.0, 100.0]
            .iter()
            .map(|&b| crossing_level(b, 5.76e-3, 1e-10).unwrap().l_c)
            .collect();
        assert!(by_beta.windows(2).all(|w| w[0] < w[1]));
        // roughly logarithmic: equal steps in ln(beta), comparable increments
        let steps: Vec<f64> = by_beta.windows(2).map(|w| w[1] - w[0]).collect();
        let (lo, hi) = min_max(&steps);
        assert!(hi < 3.0 * lo, "{steps:?}");
    }

    #[test]
    fn crossing_level_no_root_at_small_beta() {
        assert!(matches!(
            crossing_level(0.01, 5.76e-3, 1e-10),
            Err(Error::NoRoot { .. })
        ));
        assert!(crossing_level(-1.0, 5.76e-3, 1e-10).is_err());
    }

    #[test]
    fn exact_line_is_recovered() {
        let xs: Vec<f64> = (0..8).map(|i| 1e-3 * 3f64.powi(i)).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 0.7 * x.powf(0.4)).collect();
        let fit = fit_power_law(&xs, &ys).unwrap();
        assert!((fit.slope - 0.4).abs() < 1e-10);
        assert!((fit.intercept - 0.7f64.ln()).abs() < 1e-10);
        assert!(fit.r_squared > 1.0 - 1e-12);

        let betas = [1.0, 2.0, 5.0, 10.0, 20.0, 50.0];
        let ls: Vec<f64> = betas.iter().map(|b: &f64| 0.1 + 0.05 * b.ln()).collect();
        let fit = fit_log_law(&betas, &ls).unwrap();
        assert!((fit.slope - 0.05).abs() < 1e-10);
    }

    #[test]
    fn fits_reject_thin_data() {
        assert!(matches!(fit_power_law(&[1.0, 2.0, 4.0, 8.0], &[1.0; 4]), Err(Error::InsufficientData(_))));
        let narrow: Vec<f64> = (0..6).map(|i| 1.0 + i as f64).collect();
        assert!(matches!(fit_log_law(&narrow, &[1.0; 6]), Err(Error::InsufficientData(_))));
        assert!(fit_crossing_laws(&[(1.0, 1.0, 0.1), (2.0, 2.0, 0.2)]).is_err());
    }

    #[test]
    fn grouped_fits() {
        let mut samples = Vec::new();
        for &beta in &[1.0, 10.0] {
            for i in 0..6 {
                let tt = 1e-3 * 10f64.powf(i as f64 / 5.0);
                samples.push((beta, tt, crossing_level(beta, tt, 1e-10).unwrap().l_c));
            }
        }
        let fits = fit_crossing_laws(&samples).unwrap();
        assert_eq!(fits.power_laws.len(), 2);
        assert!(fits.log_laws.is_empty());
        for (_, f) in &fits.power_laws {
            assert!(f.slope > 0.2 && f.slope < 0.6, "{f:?}");
        }
    }

    #[test]
    fn regimes_are_tagged() {
        let all = Regime::all();
        assert_eq!(all.len(), 8);
        assert!(Regime::of(Method::Exact).is_none());
        assert!(all.iter().all(|r| !r.validity.is_empty()));
    }
}
