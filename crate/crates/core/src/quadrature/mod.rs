//! Numerical inversion of the Fourier-sine representations of the survival
//! probability, plus the constant-volatility (Wiener) baseline.

mod gauss;
mod oscillatory;

pub use gauss::{integrate_adaptive, Adaptive, GaussLegendre};
pub use oscillatory::{
    sine_transform, sine_transform_with, FnIntegrand, SineIntegrand, SineTransform, OMEGA_CAP,
};

use libm::erf;

use crate::error::{ensure_non_negative, ensure_positive, Error, Result};
use crate::model::{self, riccati_parts, Dimensionless, State};

/// Quadrature tolerances and budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
    /// Gauss-Legendre order used on every subinterval.
    pub points_per_panel: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-9,
            rel_tol: 1e-7,
            max_panels: 1_000_000,
            points_per_panel: 16,
        }
    }
}

impl QuadConfig {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("abs_tol", self.abs_tol)?;
        ensure_positive("rel_tol", self.rel_tol)?;
        if self.max_panels < 1 {
            return Err(Error::Domain {
                name: "max_panels",
                value: self.max_panels as f64,
                reason: "must be >= 1",
            });
        }
        if self.points_per_panel < 2 {
            return Err(Error::Domain {
                name: "points_per_panel",
                value: self.points_per_panel as f64,
                reason: "must be >= 2",
            });
        }
        Ok(())
    }
}

/// Which formula produced a probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Exact,
    Averaged,
    Wiener,
    ErfJoint,
    ArctanJoint,
    Pheno,
    ErfAveraged,
    ArctanAveraged,
    TailGaussian,
    TailPowerlaw,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Averaged => "averaged",
            Method::Wiener => "wiener",
            Method::ErfJoint => "erf_joint",
            Method::ArctanJoint => "arctan_joint",
            Method::Pheno => "pheno",
            Method::ErfAveraged => "erf_averaged",
            Method::ArctanAveraged => "arctan_averaged",
            Method::TailGaussian => "tail_gaussian",
            Method::TailPowerlaw => "tail_powerlaw",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A probability with its provenance and quadrature diagnostics.
///
/// `value` is never clamped; `out_of_range` is set when it leaves
/// `[-1e-6, 1 + 1e-6]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SPResult {
    pub value: f64,
    pub err_estimate: f64,
    pub method: Method,
    pub panels_used: usize,
    pub out_of_range: bool,
}

const RANGE_SLACK: f64 = 1e-6;

impl SPResult {
    pub fn new(value: f64, err_estimate: f64, method: Method, panels_used: usize) -> Self {
        Self {
            value,
            err_estimate,
            method,
            panels_used,
            out_of_range: !(-RANGE_SLACK..=1.0 + RANGE_SLACK).contains(&value),
        }
    }

    /// A closed-form value with no quadrature involved.
    pub fn closed_form(value: f64, method: Method) -> Self {
        Self::new(value, 0.0, method, 0)
    }
}

/// `log E(w)`, an upper bound on the log of the joint integrand factor that is
/// decreasing for `w >= envelope_start`. With `v = 0` it also bounds the
/// volatility-averaged factor.
fn log_envelope(omega: f64, tau: f64, v: f64, d: &Dimensionless) -> f64 {
    let k = model::kernel(omega, d.beta);
    let base = k.mu_minus * tau + (k.mu_plus / k.delta).ln();
    let bw = d.beta * omega;
    let vol = if bw > 1.0 {
        v * (bw - 1.0) * (-(-bw * tau).exp_m1()) / (2.0 * d.beta * d.beta)
    } else {
        0.0
    };
    -d.nu() * base - vol
}

fn envelope_start(tau: f64, beta: f64) -> f64 {
    // d/dw [mu_- tau + ln(mu_+/Delta)] >= 0  <=>  Delta (Delta + 1) >= 2 / tau
    let delta_star = 0.5 * (-1.0 + (1.0 + 8.0 / tau).sqrt());
    let w_star = if delta_star > 1.0 {
        (delta_star * delta_star - 1.0).sqrt() / beta
    } else {
        0.0
    };
    w_star.max(1.0 / beta)
}

fn envelope_cutoff(target: f64, tau: f64, v: f64, d: &Dimensionless) -> f64 {
    let log_target = target.ln();
    let lo = envelope_start(tau, d.beta);
    if !lo.is_finite() || lo >= OMEGA_CAP {
        return OMEGA_CAP;
    }
    if log_envelope(lo, tau, v, d) <= log_target {
        return lo;
    }
    let mut hi = 2.0 * lo;
    while log_envelope(hi, tau, v, d) > log_target {
        hi *= 2.0;
        if hi >= OMEGA_CAP {
            return OMEGA_CAP;
        }
    }
    let mut lo = lo;
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if log_envelope(mid, tau, v, d) > log_target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi / lo < 1.0 + 1e-9 {
            break;
        }
    }
    hi
}

/// Integrand factor of the joint survival probability,
/// `exp(-A(w, tau) - (2 v / beta^2) B(w, tau))`, evaluated in log space.
struct JointFactor {
    tau: f64,
    v: f64,
    d: Dimensionless,
}

impl SineIntegrand for JointFactor {
    fn factor(&self, omega: f64) -> f64 {
        let p = riccati_parts(omega, self.tau, self.d.beta);
        let beta_sq = self.d.beta * self.d.beta;
        (-self.d.nu() * p.a_per_nu - 2.0 * self.v * p.b / beta_sq).exp()
    }

    fn scale(&self) -> f64 {
        1.0 / model::lambda(self.tau, self.v, self.d.theta).sqrt()
    }

    fn cutoff(&self, target: f64) -> f64 {
        envelope_cutoff(target, self.tau, self.v, &self.d)
    }
}

/// Integrand factor of the volatility-averaged survival probability,
/// `exp(-A(w, tau) - nu ln(1 + B(w, tau)))`; the Gamma average of
/// `exp(-(2 v / beta^2) B)` is `(1 + B)^{-nu}`.
struct AveragedFactor {
    tau: f64,
    d: Dimensionless,
}

impl SineIntegrand for AveragedFactor {
    fn factor(&self, omega: f64) -> f64 {
        let p = riccati_parts(omega, self.tau, self.d.beta);
        (-self.d.nu() * (p.a_per_nu + p.b.ln_1p())).exp()
    }

    fn scale(&self) -> f64 {
        1.0 / (2.0 * self.d.theta * self.tau).sqrt()
    }

    fn cutoff(&self, target: f64) -> f64 {
        envelope_cutoff(target, self.tau, 0.0, &self.d)
    }
}

/// Exact survival probability `S(z, v, tau)` by Fourier-sine inversion.
pub fn survival_exact(state: &State, d: &Dimensionless, config: &QuadConfig) -> Result<SPResult> {
    let state = State::new(state.z, state.v, state.tau)?;
    let d = Dimensionless::new(d.theta, d.beta)?;
    config.validate()?;
    if state.z == 0.0 {
        return Ok(SPResult::closed_form(0.0, Method::Exact));
    }
    if state.tau == 0.0 {
        return Ok(SPResult::closed_form(1.0, Method::Exact));
    }
    let integrand = JointFactor {
        tau: state.tau,
        v: state.v,
        d,
    };
    let t = sine_transform_with(&integrand, state.z, config)?;
    Ok(SPResult::new(t.value, t.err_estimate, Method::Exact, t.panels_used))
}

/// Survival probability `S(z, tau)` with the initial variance drawn from its
/// stationary Gamma law.
pub fn survival_averaged(
    z: f64,
    tau: f64,
    d: &Dimensionless,
    config: &QuadConfig,
) -> Result<SPResult> {
    ensure_non_negative("z", z)?;
    ensure_non_negative("tau", tau)?;
    let d = Dimensionless::new(d.theta, d.beta)?;
    config.validate()?;
    if z == 0.0 {
        return Ok(SPResult::closed_form(0.0, Method::Averaged));
    }
    if tau == 0.0 {
        return Ok(SPResult::closed_form(1.0, Method::Averaged));
    }
    let t = sine_transform_with(&AveragedFactor { tau, d }, z, config)?;
    Ok(SPResult::new(t.value, t.err_estimate, Method::Averaged, t.panels_used))
}

/// Survival probability of a driftless Brownian motion with variance rate
/// `sigma_sq`: `Erf(z / sqrt(2 sigma^2 t))`.
pub fn survival_wiener(z: f64, sigma_sq: f64, t: f64) -> Result<f64> {
    ensure_non_negative("z", z)?;
    ensure_positive("sigma_sq", sigma_sq)?;
    ensure_non_negative("t", t)?;
    Ok(if z == 0.0 {
        0.0
    } else if t == 0.0 {
        1.0
    } else {
        erf(z / (2.0 * sigma_sq * t).sqrt())
    })
}

/// Hitting probability `W = 1 - S`, keeping the diagnostics of `sp`.
pub fn hitting(sp: &SPResult) -> SPResult {
    SPResult {
        value: 1.0 - sp.value,
        ..*sp
    }
}
