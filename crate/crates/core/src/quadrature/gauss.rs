//! Gauss-Legendre rules and a bisection-adaptive integrator built on them.

use std::f64::consts::PI;

/// An `n`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the rule by Newton iteration on `P_n`, seeded with the
    /// Tricomi approximation of the roots.
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "Gauss-Legendre order must be at least 2");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Applies the rule on `[a, b]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let sum: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum();
        sum * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Adaptive {
    pub value: f64,
    pub err_estimate: f64,
    /// Number of accepted subintervals.
    pub intervals: usize,
    /// False when some subinterval hit the depth limit without meeting its share of `tol`.
    pub converged: bool,
}

const MAX_DEPTH: u32 = 48;

/// Adaptive bisection: a subinterval is accepted once the rule on the whole
/// and the sum over its two halves agree to within its share of `tol`.
/// The returned value sums the (more accurate) half-interval estimates.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    rule: &GaussLegendre,
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
) -> Adaptive {
    let mut out = Adaptive {
        value: 0.0,
        err_estimate: 0.0,
        intervals: 0,
        converged: true,
    };
    if a == b {
        return out;
    }
    let mut stack = vec![(a, b, rule.integrate(f, a, b), tol, 0u32)];
    while let Some((lo, hi, whole, local_tol, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = rule.integrate(f, lo, mid);
        let right = rule.integrate(f, mid, hi);
        let refined = left + right;
        let err = (refined - whole).abs();
        if err <= local_tol || depth >= MAX_DEPTH || mid <= lo || mid >= hi {
            if err > local_tol {
                out.converged = false;
            }
            out.value += refined;
            out.err_estimate += err;
            out.intervals += 1;
        } else {
            stack.push((mid, hi, right, 0.5 * local_tol, depth + 1));
            stack.push((lo, mid, left, 0.5 * local_tol, depth + 1));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        for n in [2usize, 3, 7, 16, 31] {
            let rule = GaussLegendre::new(n);
            let wsum: f64 = rule.weights().iter().sum();
            assert!((wsum - 2.0).abs() < 1e-14, "n={n}");
            // degree 2n-1 is exact
            let deg = 2 * n - 1;
            let got = rule.integrate(&|x: f64| x.powi(deg as i32 - 1), 0.0, 1.0);
            assert!((got - 1.0 / (deg as f64)).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn nodes_are_sorted_and_symmetric() {
        let rule = GaussLegendre::new(16);
        let xs = rule.nodes();
        assert!(xs.windows(2).all(|w| w[0] < w[1]));
        for i in 0..16 {
            assert!((xs[i] + xs[15 - i]).abs() < 1e-15);
        }
    }

    #[test]
    fn adaptive_handles_sharp_peak() {
        let rule = GaussLegendre::new(16);
        let f = |x: f64| 1.0 / (1e-4 + (x - 0.3) * (x - 0.3));
        let exact = (0.7f64 / 1e-2).atan() / 1e-2 + (0.3f64 / 1e-2).atan() / 1e-2;
        let r = integrate_adaptive(&rule, &f, 0.0, 1.0, 1e-10);
        assert!(r.converged);
        assert!((r.value - exact).abs() < 1e-9 * exact);
    }
}
