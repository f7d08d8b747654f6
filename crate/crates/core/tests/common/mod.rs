//! Reference computations that share no code path with the library.

#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};

pub const THETA: f64 = 1.92e-3;

/// Integrates `B' = (beta w)^2/4 - B - B^2`, `A' = nu B` from zero with
/// classical RK4; step chosen so that `h * sqrt(1 + (beta w)^2) <= 5e-3`.
pub fn riccati_rk4(omega: f64, tau: f64, theta: f64, beta: f64) -> (f64, f64) {
    let nu = 2.0 * theta / (beta * beta);
    let q = 0.25 * (beta * omega).powi(2);
    let rate = (1.0 + (beta * omega).powi(2)).sqrt();
    let n = ((tau * rate / 5e-3).ceil() as usize).max(200);
    let h = tau / n as f64;
    let f = |b: f64| q - b - b * b;
    let (mut b, mut a) = (0.0f64, 0.0f64);
    for _ in 0..n {
        let k1 = f(b);
        let k2 = f(b + 0.5 * h * k1);
        let k3 = f(b + 0.5 * h * k2);
        let k4 = f(b + h * k3);
        // A' = nu B integrated with the same stages
        a += nu * h / 6.0 * (b + 2.0 * (b + 0.5 * h * k1) + 2.0 * (b + 0.5 * h * k2) + (b + h * k3));
        b += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    (b, a)
}

/// Composite Simpson rule with `n` (even) intervals.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    assert!(n.is_multiple_of(2));
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + h * i as f64);
    }
    s * h / 3.0
}

/// Generalized Gauss-Laguerre rule for the weight `x^alpha e^{-x}` by the
/// Golub-Welsch eigenproblem. Weights are normalised to sum to one.
pub fn gauss_laguerre(n: usize, alpha: f64) -> (Vec<f64>, Vec<f64>) {
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        jacobi[(i, i)] = 2.0 * i as f64 + alpha + 1.0;
        if i + 1 < n {
            let k = (i + 1) as f64;
            let off = (k * (k + alpha)).sqrt();
            jacobi[(i, i + 1)] = off;
            jacobi[(i + 1, i)] = off;
        }
    }
    let eig = SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|j| (eig.eigenvalues[j], eig.eigenvectors[(0, j)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    pairs.into_iter().map(|(x, w)| (x, w / total)).unzip()
}

/// `(2/pi) int_0^inf sin(w z)/w exp(-a w^2) dw`.
pub fn gaussian_sine_closed_form(z: f64, a: f64) -> f64 {
    libm::erf(z / (2.0 * a.sqrt()))
}

/// `(2/pi) int_0^inf sin(w z)/w exp(-b w) dw`.
pub fn exponential_sine_closed_form(z: f64, b: f64) -> f64 {
    std::f64::consts::FRAC_2_PI * (z / b).atan()
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        (got - want).abs() / want.abs()
    }
}

/// Composite 5-point Gauss-Legendre rule on `n` equal panels.
pub fn gauss5<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    const X: [f64; 5] = [
        0.0,
        -0.538_469_310_105_683,
        0.538_469_310_105_683,
        -0.906_179_845_938_664,
        0.906_179_845_938_664,
    ];
    const W: [f64; 5] = [
        0.568_888_888_888_889,
        0.478_628_670_499_366,
        0.478_628_670_499_366,
        0.236_926_885_056_189,
        0.236_926_885_056_189,
    ];
    let h = (b - a) / n as f64;
    let mut total = 0.0;
    for i in 0..n {
        let mid = a + h * (i as f64 + 0.5);
        total += X.iter().zip(&W).map(|(x, w)| w * f(mid + 0.5 * h * x)).sum::<f64>();
    }
    0.5 * h * total
}

/// `int_0^upper f(x) dx` for `f(x) ~ x^(nu - 1)` near zero, after `x = s^m`
/// with `m nu` a whole number of at least 4 so the new integrand is smooth.
pub fn power_substituted<F: Fn(f64) -> f64>(f: F, nu: f64, upper: f64, panels: usize) -> f64 {
    let k = (4.0 * nu).ceil().max(1.0);
    let m = k / nu;
    gauss5(
        |s: f64| f(s.powf(m)) * m * s.powf(m - 1.0),
        0.0,
        upper.powf(1.0 / m),
        panels,
    )
}

/// `E[g(X)]` for `X ~ Gamma(nu, 1)`, via the same substitution with the
/// weight folded in analytically: `x^(nu-1) dx = m s^(k-1) ds`, `k = m nu`.
pub fn gamma_average<G: Fn(f64) -> f64>(g: G, nu: f64, upper: f64, panels: usize) -> f64 {
    let k = (4.0 * nu).ceil().max(1.0);
    let m = k / nu;
    let int = gauss5(
        |s: f64| {
            let x = s.powf(m);
            s.powf(k - 1.0) * (-x).exp() * g(x)
        },
        0.0,
        upper.powf(1.0 / m),
        panels,
    );
    int * k / libm::tgamma(nu + 1.0)
}
