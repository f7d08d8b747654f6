//! Fourier-sine inversion `(2/pi) * int_0^inf sin(w z)/w * F(w) dw`.
//!
//! The frequency axis is cut at the zeros `k pi / z` of `sin(w z)`. For a
//! positive, decreasing `F` the panel contributions alternate in sign and
//! shrink, so the partial sums bracket the limit. Panels are added until two
//! consecutive contributions fall below tolerance, the cutoff frequency is
//! passed, or a Wynn epsilon extrapolation of the partial sums settles.
//! Inside every panel the integrand is further split at `s, 2s, 4s, ...`
//! (with `s` the integrand's natural frequency scale) so that a narrow peak
//! near the origin cannot hide between the nodes of a wide panel.

use std::f64::consts::{FRAC_2_PI, PI};

use super::gauss::{integrate_adaptive, GaussLegendre};
use super::QuadConfig;
use crate::error::{Error, Result};

/// Hard upper limit on the truncation frequency.
pub const OMEGA_CAP: f64 = 1e8;

/// Partial sums fed to the epsilon table (odd, so the last column is even).
const EPS_WINDOW: usize = 17;
/// Panels summed before extrapolation is attempted.
const EPS_MIN_PANELS: usize = 8;

/// The non-oscillatory factor `F(w)` of a sine transform plus the hints the
/// panel scheme uses to place breakpoints and truncate.
pub trait SineIntegrand {
    fn factor(&self, omega: f64) -> f64;

    /// Width of the main feature of `F` near `w = 0`.
    fn scale(&self) -> f64 {
        1.0
    }

    /// A frequency beyond which `|F| <= target` everywhere.
    fn cutoff(&self, _target: f64) -> f64 {
        OMEGA_CAP
    }
}

/// Adapts a plain closure; no scale or cutoff information.
pub struct FnIntegrand<F>(pub F);

impl<F: Fn(f64) -> f64> SineIntegrand for FnIntegrand<F> {
    fn factor(&self, omega: f64) -> f64 {
        (self.0)(omega)
    }
}

/// Value of a sine transform with its error budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SineTransform {
    pub value: f64,
    pub err_estimate: f64,
    /// Sine panels summed, or subintervals of the single pass when `z` is
    /// too small for `sin(w z)` to vanish below the cutoff.
    pub panels_used: usize,
}

/// `sin(w z) / w`, with its Taylor series near `w z = 0`.
#[inline]
pub(crate) fn sin_over(omega: f64, z: f64) -> f64 {
    let x = omega * z;
    if x < 1e-4 {
        let x2 = x * x;
        z * (1.0 - x2 / 6.0 + x2 * x2 / 120.0)
    } else {
        x.sin() / omega
    }
}

/// `(2/pi) * int_0^inf sin(w z)/w * F(w) dw` for a plain closure `F`.
pub fn sine_transform<F: Fn(f64) -> f64>(
    factor: F,
    z: f64,
    config: &QuadConfig,
) -> Result<SineTransform> {
    sine_transform_with(&FnIntegrand(factor), z, config)
}

/// Sine transform of an integrand that carries its own scale and cutoff hints.
pub fn sine_transform_with<I: SineIntegrand + ?Sized>(
    integrand: &I,
    z: f64,
    config: &QuadConfig,
) -> Result<SineTransform> {
    if z == 0.0 {
        return Ok(SineTransform {
            value: 0.0,
            err_estimate: 0.0,
            panels_used: 0,
        });
    }
    let rule = GaussLegendre::new(config.points_per_panel);
    let omega_max = integrand
        .cutoff(0.01 * config.abs_tol)
        .clamp(f64::MIN_POSITIVE, OMEGA_CAP);
    let scale = integrand.scale().clamp(1e-300, omega_max);
    let f = |w: f64| FRAC_2_PI * sin_over(w, z) * integrand.factor(w);
    let period = PI / z;

    if period >= omega_max {
        // No interior zero below the cutoff: one pass over [0, omega_max].
        let piece = integrate_pieces(&rule, &f, 0.0, omega_max, scale, 0.1 * config.abs_tol);
        return Ok(SineTransform {
            value: piece.0,
            err_estimate: piece.1,
            panels_used: piece.2,
        });
    }

    let mut sum: f64 = 0.0;
    let mut quad_err = 0.0;
    let mut sums: Vec<f64> = Vec::new();
    let mut extrapolated: Vec<f64> = Vec::new();
    let mut last_contribution = f64::INFINITY;
    let mut last_sign = 0.0;
    let mut alternating_run = 0usize;

    for k in 0..config.max_panels {
        let a = k as f64 * period;
        let b = a + period;
        let tol = config.abs_tol + config.rel_tol * sum.abs();
        let (c, err, _) = integrate_pieces(&rule, &f, a, b, scale, 0.1 * tol);
        sum += c;
        quad_err += err;
        sums.push(sum);

        if c != 0.0 && c.signum() == -last_sign {
            alternating_run += 1;
        } else {
            alternating_run = 0;
        }
        last_sign = c.signum();

        let panels = k + 1;
        if c.abs() <= tol && last_contribution.abs() <= tol {
            return Ok(SineTransform {
                value: sum,
                err_estimate: quad_err + c.abs(),
                panels_used: panels,
            });
        }
        if b >= omega_max {
            return Ok(SineTransform {
                value: sum,
                err_estimate: quad_err + 0.01 * config.abs_tol,
                panels_used: panels,
            });
        }
        last_contribution = c;

        if panels >= EPS_MIN_PANELS && alternating_run >= EPS_MIN_PANELS - 1 {
            let window = &sums[sums.len().saturating_sub(EPS_WINDOW)..];
            let window = if window.len().is_multiple_of(2) { &window[1..] } else { window };
            extrapolated.push(wynn_epsilon(window));
            let n = extrapolated.len();
            if n >= 3 {
                let d1 = (extrapolated[n - 1] - extrapolated[n - 2]).abs();
                let d2 = (extrapolated[n - 2] - extrapolated[n - 3]).abs();
                if d1 <= tol && d2 <= tol {
                    return Ok(SineTransform {
                        value: extrapolated[n - 1],
                        err_estimate: quad_err + d1.max(d2),
                        panels_used: panels,
                    });
                }
            }
        } else {
            extrapolated.clear();
        }
    }
    let partial = extrapolated.last().copied().unwrap_or(sum);
    Err(Error::NonConvergence {
        partial,
        bound: quad_err + last_contribution.abs(),
        panels: config.max_panels,
    })
}

/// Integrates `[a, b]` split at the geometric breakpoints `scale * 2^j`.
/// Returns (value, error estimate, accepted subintervals).
fn integrate_pieces<F: Fn(f64) -> f64>(
    rule: &GaussLegendre,
    f: &F,
    a: f64,
    b: f64,
    scale: f64,
    tol: f64,
) -> (f64, f64, usize) {
    let mut cuts = vec![a];
    let mut p = if a < scale {
        scale
    } else {
        scale * 2f64.powf(((a / scale).log2()).floor() + 1.0)
    };
    while p < b {
        if p > a {
            cuts.push(p);
        }
        p *= 2.0;
    }
    cuts.push(b);
    let share = tol / (cuts.len() - 1) as f64;
    let mut total = (0.0, 0.0, 0);
    for w in cuts.windows(2) {
        let r = integrate_adaptive(rule, f, w[0], w[1], share);
        total.0 += r.value;
        total.1 += r.err_estimate;
        total.2 += r.intervals;
    }
    total
}

/// Wynn's epsilon algorithm on a sequence of partial sums; returns the
/// highest-order even-column entry that could be formed.
pub(crate) fn wynn_epsilon(sums: &[f64]) -> f64 {
    let n = sums.len();
    let mut best = sums[n - 1];
    let mut prev = vec![0.0; n + 1];
    let mut cur = sums.to_vec();
    for k in 1..n {
        let len = n - k;
        let mut next = Vec::with_capacity(len);
        for j in 0..len {
            let diff = cur[j + 1] - cur[j];
            if diff == 0.0 || !diff.is_finite() {
                return best;
            }
            next.push(prev[j + 1] + 1.0 / diff);
        }
        if k % 2 == 0 {
            let candidate = next[len - 1];
            if !candidate.is_finite() {
                return best;
            }
            best = candidate;
        }
        prev = cur;
        cur = next;
    }
    best
}
