//! Model parameters, the dimensionless reduction, and the closed-form kernels
//! of the Fourier solution.
//!
//! Time is measured in units of the reversion time `1/alpha`, variance in
//! units of `alpha`. With `tau = alpha t` and `v = y / alpha` the model reads
//!
//! ```text
//! dX = sqrt(v) dW1
//! dv = -(v - theta) dtau + beta sqrt(v) dW2
//! ```
//!
//! and the Fourier-sine transform of the survival probability is
//! `exp(-A(w, tau) - (2 / beta^2) B(w, tau) v) / w`, where `B` solves the
//! Riccati equation `B' = -B - B^2 + (beta w / 2)^2` with `B(w, 0) = 0` and
//! `A = (2 theta / beta^2) * integral of B`.

use libm::lgamma;

use crate::error::{ensure_finite, ensure_non_negative, ensure_positive, Result};

/// Heston parameters in physical units (all in 1/day).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Mean-reversion rate.
    pub alpha: f64,
    /// Normal level of the variance, `m^2`.
    pub m_sq: f64,
    /// Volatility of volatility.
    pub k: f64,
}

impl ModelParams {
    pub fn new(alpha: f64, m_sq: f64, k: f64) -> Result<Self> {
        Ok(Self {
            alpha: ensure_positive("alpha", alpha)?,
            m_sq: ensure_positive("m_sq", m_sq)?,
            k: ensure_positive("k", k)?,
        })
    }

    pub fn dimensionless(&self) -> Dimensionless {
        Dimensionless {
            theta: self.m_sq / self.alpha,
            beta: self.k / self.alpha,
        }
    }
}

/// The two dimensionless groups that fully determine the reduced problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dimensionless {
    /// Normal level `theta = m^2 / alpha`.
    pub theta: f64,
    /// Normalized volatility fluctuation `beta = k / alpha`.
    pub beta: f64,
}

impl Dimensionless {
    pub fn new(theta: f64, beta: f64) -> Result<Self> {
        Ok(Self {
            theta: ensure_positive("theta", theta)?,
            beta: ensure_positive("beta", beta)?,
        })
    }

    /// Shape of the stationary Gamma law, `nu = 2 theta / beta^2`.
    /// `nu < 1` means the Feller condition fails and `v = 0` is attainable.
    pub fn nu(&self) -> f64 {
        2.0 * self.theta / (self.beta * self.beta)
    }

    /// Rate of the stationary Gamma law, `2 / beta^2`.
    pub fn gamma_rate(&self) -> f64 {
        2.0 / (self.beta * self.beta)
    }
}

/// Dimensionless state: distance to the barrier, variance and elapsed time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    pub z: f64,
    pub v: f64,
    pub tau: f64,
}

impl State {
    pub fn new(z: f64, v: f64, tau: f64) -> Result<Self> {
        Ok(Self {
            z: ensure_non_negative("z", z)?,
            v: ensure_non_negative("v", v)?,
            tau: ensure_non_negative("tau", tau)?,
        })
    }
}

/// Converts a physical-units problem to its dimensionless form.
///
/// `y` is the initial variance (1/day), `t` the horizon in days, `level` the
/// critical return level `L` and `x` the starting return.
pub fn to_dimensionless(
    params: &ModelParams,
    y: f64,
    t: f64,
    level: f64,
    x: f64,
) -> Result<(Dimensionless, State)> {
    let params = ModelParams::new(params.alpha, params.m_sq, params.k)?;
    ensure_non_negative("y", y)?;
    ensure_non_negative("t", t)?;
    ensure_finite("L", level)?;
    ensure_finite("x", x)?;
    let state = State::new((level - x).abs(), y / params.alpha, params.alpha * t)?;
    Ok((params.dimensionless(), state))
}

/// `Delta(w)` and `mu_pm(w)` at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValues {
    pub delta: f64,
    pub mu_plus: f64,
    pub mu_minus: f64,
}

/// `Delta = sqrt(1 + (beta w)^2)`, `mu_pm = (Delta +- 1) / 2`.
///
/// `mu_minus` is formed as `(beta w)^2 / (2 (Delta + 1))`, which keeps full
/// relative precision for small `beta w`.
pub fn kernel(omega: f64, beta: f64) -> KernelValues {
    if omega == 0.0 {
        return KernelValues {
            delta: 1.0,
            mu_plus: 1.0,
            mu_minus: 0.0,
        };
    }
    let bw = beta * omega;
    let delta = bw.hypot(1.0);
    KernelValues {
        delta,
        mu_plus: 0.5 * (delta + 1.0),
        mu_minus: 0.5 * bw * bw / (delta + 1.0),
    }
}

/// Both Riccati outputs at one `(omega, tau)`, sharing the kernel evaluation.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RiccatiParts {
    /// `B(omega, tau)`.
    pub b: f64,
    /// `A(omega, tau) / nu`, i.e. `mu_- tau + ln[(mu_+ + mu_- e^{-Delta tau}) / Delta]`.
    pub a_per_nu: f64,
}

pub(crate) fn riccati_parts(omega: f64, tau: f64, beta: f64) -> RiccatiParts {
    if omega == 0.0 || tau == 0.0 {
        return RiccatiParts {
            b: 0.0,
            a_per_nu: 0.0,
        };
    }
    let KernelValues {
        delta,
        mu_plus,
        mu_minus,
    } = kernel(omega, beta);
    // exp(-Delta tau) may underflow to zero; every expression below stays finite.
    let decay = (-delta * tau).exp();
    let one_minus_decay = -(-delta * tau).exp_m1();
    let b = mu_minus * one_minus_decay / (1.0 + (mu_minus / mu_plus) * decay);
    // (mu_+ + mu_- e) / Delta = 1 - mu_- (1 - e) / Delta, always in (1/2, 1].
    let log_ratio = (-mu_minus * one_minus_decay / delta).ln_1p();
    RiccatiParts {
        b,
        a_per_nu: (mu_minus * tau + log_ratio).max(0.0),
    }
}

/// Closed-form solution `B(omega, tau)` of the Riccati equation.
pub fn riccati_b(omega: f64, tau: f64, beta: f64) -> f64 {
    riccati_parts(omega, tau, beta).b
}

/// Closed-form `A(omega, tau) = (2 theta / beta^2) * int_0^tau B(omega, s) ds`.
pub fn exponent_a(omega: f64, tau: f64, theta: f64, beta: f64) -> f64 {
    2.0 * theta / (beta * beta) * riccati_parts(omega, tau, beta).a_per_nu
}

/// Stationary density of the dimensionless variance: Gamma with shape
/// `nu = 2 theta / beta^2` and rate `2 / beta^2`.
///
/// At `v = 0` the value is `+inf` for `nu < 1`, the rate for `nu = 1` and `0`
/// otherwise. Negative `v` has zero density.
pub fn stationary_density(v: f64, theta: f64, beta: f64) -> f64 {
    let d = Dimensionless { theta, beta };
    let (nu, rate) = (d.nu(), d.gamma_rate());
    if v < 0.0 {
        return 0.0;
    }
    if v == 0.0 {
        return if nu < 1.0 {
            f64::INFINITY
        } else if nu == 1.0 {
            rate
        } else {
            0.0
        };
    }
    (nu * rate.ln() + (nu - 1.0) * v.ln() - rate * v - lgamma(nu)).exp()
}

/// Variance-like scale of the Gaussian approximations,
/// `lambda = 2 theta tau + 2 (1 - e^{-tau}) v`.
pub fn lambda(tau: f64, v: f64, theta: f64) -> f64 {
    2.0 * theta * tau - 2.0 * (-tau).exp_m1() * v
}

/// Dimensionless second moment of the return,
/// `<X^2> = theta tau + (v - theta)(1 - e^{-tau})`.
pub fn second_moment(tau: f64, v: f64, theta: f64) -> f64 {
    theta * tau - (v - theta) * (-tau).exp_m1()
}

#[cfg(test)]
mod tests {
    use super::*;

    const THETA: f64 = 1.92e-3;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
    }

    #[test]
    fn fig1_parameters_reduce() {
        let p = ModelParams::new(0.045, 8.62e-5, 0.0045).unwrap();
        let (d, s) = to_dimensionless(&p, 8.62e-5, 10.0, -0.05, 0.0).unwrap();
        assert!(close(d.theta, 1.9155555555555556e-3, 1e-14));
        assert!(close(d.beta, 0.1, 1e-14));
        assert!(close(d.nu(), 2.0 * 0.045 / (0.0045 * 0.0045) * 8.62e-5, 1e-12));
        assert!(close(s.z, 0.05, 1e-15));
        assert!(close(s.v, d.theta, 1e-15));
        assert!(close(s.tau, 0.45, 1e-15));
    }

    #[test]
    fn barrier_at_start_gives_zero_distance() {
        let p = ModelParams::new(0.045, 8.62e-5, 0.0045).unwrap();
        let (_, s) = to_dimensionless(&p, 1e-4, 1.0, 0.3, 0.3).unwrap();
        assert_eq!(s.z, 0.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(ModelParams::new(0.0, 1.0, 1.0).is_err());
        assert!(ModelParams::new(1.0, -1.0, 1.0).is_err());
        assert!(ModelParams::new(1.0, 1.0, f64::NAN).is_err());
        let p = ModelParams::new(0.045, 8.62e-5, 0.0045).unwrap();
        assert!(to_dimensionless(&p, -1.0, 1.0, 0.0, 0.0).is_err());
        assert!(to_dimensionless(&p, 1.0, -1.0, 0.0, 0.0).is_err());
        assert!(to_dimensionless(&p, 1.0, 1.0, f64::INFINITY, 0.0).is_err());
        assert!(Dimensionless::new(1e-3, 0.0).is_err());
        assert!(State::new(-1e-3, 0.0, 0.0).is_err());
    }

    #[test]
    fn kernel_closed_forms() {
        let k0 = kernel(0.0, 3.0);
        assert_eq!((k0.delta, k0.mu_plus, k0.mu_minus), (1.0, 1.0, 0.0));
        let k = kernel(1.0, 1.0);
        let s2 = 2f64.sqrt();
        assert!(close(k.delta, s2, 1e-15));
        assert!(close(k.mu_plus, (s2 + 1.0) / 2.0, 1e-15));
        assert!(close(k.mu_minus, (s2 - 1.0) / 2.0, 1e-15));
    }

    #[test]
    fn riccati_limits() {
        assert_eq!(riccati_b(1.0, 0.0, 1.0), 0.0);
        assert_eq!(exponent_a(1.0, 0.0, THETA, 1.0), 0.0);
        // exp(-Delta tau) underflows: B lands exactly on mu_-.
        let k = kernel(3.0, 0.7);
        assert_eq!(riccati_b(3.0, 1e4, 0.7), k.mu_minus);
        assert_eq!(riccati_b(0.0, 5.0, 0.7), 0.0);
        assert_eq!(exponent_a(0.0, 5.0, THETA, 0.7), 0.0);
    }

    #[test]
    fn exponent_a_stays_finite_for_tiny_beta() {
        // nu = 2 theta / beta^2 ~ 4e4 here
        // small beta*omega: A ~ (theta w^2 / 2)(tau - 1 + e^{-tau})
        let a = exponent_a(5.0, 1.0, THETA, 0.01);
        assert!(a.is_finite() && a > 0.0);
        assert!(close(a, THETA * 25.0 / 2.0 * (-1f64).exp(), 1e-3));
        assert!(exponent_a(5e3, 1.0, THETA, 0.01).is_finite());
    }

    #[test]
    fn lambda_and_second_moment_values() {
        assert_eq!(lambda(0.0, 0.0, THETA), 0.0);
        let e1 = (-1f64).exp();
        assert!(close(lambda(1.0, THETA, THETA), THETA * (2.0 + 2.0 * (1.0 - e1)), 1e-14));
        assert!(close(lambda(1e6, THETA, THETA), 2.0 * THETA * 1e6, 1e-6));
        assert_eq!(second_moment(0.0, 0.3, THETA), 0.0);
        assert!(close(second_moment(2.5, THETA, THETA), THETA * 2.5, 1e-15));
        assert!(close(
            second_moment(1.0, 2.0 * THETA, THETA),
            THETA * (1.0 + (1.0 - e1)),
            1e-14
        ));
    }

    #[test]
    fn density_behaviour_at_origin() {
        // theta = 1.92e-3, beta = 0.1 gives nu ~ 0.384: integrable blow-up
        assert_eq!(stationary_density(0.0, THETA, 0.1), f64::INFINITY);
        assert!(stationary_density(1e-12, THETA, 0.1) > stationary_density(1e-6, THETA, 0.1));
        // nu = 2 / 0.01 * theta > 1 when beta is small
        assert_eq!(stationary_density(0.0, THETA, 0.01), 0.0);
        // nu == 1: exponential with rate 2/beta^2
        let (theta, beta) = (0.125, 0.5);
        let rate = 2.0 / (beta * beta);
        assert_eq!(stationary_density(0.0, theta, beta), rate);
        assert!(close(stationary_density(0.1, theta, beta), rate * (-rate * 0.1).exp(), 1e-12));
        assert_eq!(stationary_density(-1.0, THETA, 0.1), 0.0);
    }
}
