//! Table builders for the evaluation subcommands.

use heston_fpt::asymptotics::{self, crossing_level};
use heston_fpt::model::lambda;
use heston_fpt::montecarlo;
use heston_fpt::quadrature::{survival_averaged, survival_exact, survival_wiener};
use heston_fpt::{Dimensionless, Method, QuadConfig, SPResult, State};
use rayon::prelude::*;

use crate::error::{CliError, Result};
use crate::spec::RunSpec;
use crate::table::{Cell, Table};

/// Parses a method tag; `erf`, `arctan`, `avg-erf` and `avg-arctan` are
/// accepted as short forms.
pub fn parse_method(tag: &str) -> Result<Method> {
    let m = match tag.trim().replace('-', "_").as_str() {
        "exact" => Method::Exact,
        "averaged" => Method::Averaged,
        "wiener" => Method::Wiener,
        "erf" | "erf_joint" => Method::ErfJoint,
        "arctan" | "arctan_joint" => Method::ArctanJoint,
        "pheno" => Method::Pheno,
        "avg_erf" | "erf_averaged" => Method::ErfAveraged,
        "avg_arctan" | "arctan_averaged" => Method::ArctanAveraged,
        "tail_gaussian" => Method::TailGaussian,
        "tail_powerlaw" => Method::TailPowerlaw,
        other => return Err(CliError::usage("--method", format!("unknown method `{other}`"))),
    };
    Ok(m)
}

/// Whether `method` depends on the initial variance.
pub fn uses_v(method: Method) -> bool {
    matches!(
        method,
        Method::Exact | Method::ErfJoint | Method::ArctanJoint | Method::Pheno | Method::TailGaussian
    )
}

fn is_tail(method: Method) -> bool {
    matches!(method, Method::TailGaussian | Method::TailPowerlaw)
}

/// Survival probability by `method`. Tail estimates are returned as
/// `1 - W`.
pub fn survival(
    method: Method,
    z: f64,
    v: f64,
    tau: f64,
    d: &Dimensionless,
    cfg: &QuadConfig,
    beta_factor: bool,
) -> Result<SPResult> {
    if is_tail(method) && z <= 0.0 {
        return Err(CliError::usage("--z", "tail estimates need z > 0"));
    }
    let closed = |value: f64| SPResult::closed_form(value, method);
    let (theta, beta) = (d.theta, d.beta);
    Ok(match method {
        Method::Exact => survival_exact(&State::new(z, v, tau)?, d, cfg)?,
        Method::Averaged => survival_averaged(z, tau, d, cfg)?,
        Method::Wiener => closed(survival_wiener(z, theta, tau)?),
        Method::ErfJoint => closed(asymptotics::survival_erf(z, v, tau, theta)),
        Method::ArctanJoint => closed(asymptotics::survival_arctan(z, v, tau, theta, beta)),
        Method::Pheno => closed(asymptotics::survival_pheno(z, v, tau, theta, beta, beta_factor)),
        Method::ErfAveraged => closed(asymptotics::survival_avg_erf(z, tau, theta)),
        Method::ArctanAveraged => closed(asymptotics::survival_avg_arctan(z, tau, theta, beta)),
        Method::TailGaussian => {
            closed(1.0 - asymptotics::tail_gaussian_hitting(z, lambda(tau, v, theta)))
        }
        Method::TailPowerlaw => closed(1.0 - asymptotics::tail_powerlaw_hitting(z, tau, theta, beta)),
    })
}

fn product3(a: &[f64], b: &[f64], c: &[f64]) -> Vec<(f64, f64, f64)> {
    let mut out = Vec::with_capacity(a.len() * b.len() * c.len());
    for &x in a {
        for &y in b {
            for &w in c {
                out.push((x, y, w));
            }
        }
    }
    out
}

fn product2(a: &[f64], b: &[f64]) -> Vec<(f64, f64)> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).collect()
}

/// Columns `z,v,tau,S,err_estimate,panels`.
pub fn exact(spec: &RunSpec) -> Result<Table> {
    let (d, cfg) = (spec.dimensionless(), spec.quad_config());
    let points = product3(&spec.z_values(), &spec.v_values(), &spec.tau_values());
    let results = points
        .par_iter()
        .map(|&(z, v, tau)| Ok(survival_exact(&State::new(z, v, tau)?, &d, &cfg)?))
        .collect::<Result<Vec<_>>>()?;
    let mut t = Table::new(&["z", "v", "tau", "S", "err_estimate", "panels"]);
    for (&(z, v, tau), r) in points.iter().zip(&results) {
        t.push(vec![
            z.into(),
            v.into(),
            tau.into(),
            r.value.into(),
            r.err_estimate.into(),
            r.panels_used.into(),
        ]);
    }
    Ok(t)
}

/// Columns `z,tau,S,err_estimate,panels`.
pub fn averaged(spec: &RunSpec) -> Result<Table> {
    if spec.v.is_some() {
        return Err(CliError::usage("--v", "the averaged survival does not take an initial variance"));
    }
    let (d, cfg) = (spec.dimensionless(), spec.quad_config());
    let points = product2(&spec.z_values(), &spec.tau_values());
    let results = points
        .par_iter()
        .map(|&(z, tau)| Ok(survival_averaged(z, tau, &d, &cfg)?))
        .collect::<Result<Vec<_>>>()?;
    let mut t = Table::new(&["z", "tau", "S", "err_estimate", "panels"]);
    for (&(z, tau), r) in points.iter().zip(&results) {
        t.push(vec![
            z.into(),
            tau.into(),
            r.value.into(),
            r.err_estimate.into(),
            r.panels_used.into(),
        ]);
    }
    Ok(t)
}

/// Columns `z,v,tau,S` (`z,tau,S` for forms without `v`); tail estimates
/// report `W` instead of `S`.
pub fn approx(spec: &RunSpec) -> Result<Table> {
    let tag = spec
        .method
        .as_deref()
        .ok_or_else(|| CliError::usage("--method", "required for approx"))?;
    let method = parse_method(tag)?;
    if matches!(method, Method::Exact | Method::Averaged) {
        return Err(CliError::usage(
            "--method",
            format!("`{tag}` is not an approximation; use the `{method}` subcommand"),
        ));
    }
    let with_v = uses_v(method);
    if !with_v && spec.v.is_some() {
        return Err(CliError::usage("--v", format!("`{method}` does not take an initial variance")));
    }
    let (d, cfg) = (spec.dimensionless(), spec.quad_config());
    let vs = if with_v { spec.v_values() } else { vec![f64::NAN] };
    let label = if is_tail(method) { "W" } else { "S" };
    let columns: Vec<&str> = if with_v {
        vec!["z", "v", "tau", label]
    } else {
        vec!["z", "tau", label]
    };
    let mut t = Table::new(&columns);
    for (z, v, tau) in product3(&spec.z_values(), &vs, &spec.tau_values()) {
        let s = survival(method, z, v, tau, &d, &cfg, spec.beta_factor)?.value;
        let value = if is_tail(method) { 1.0 - s } else { s };
        let mut row: Vec<Cell> = vec![z.into()];
        if with_v {
            row.push(v.into());
        }
        row.extend([tau.into(), value.into()]);
        t.push(row);
    }
    Ok(t)
}

/// Columns `z,tau,S,ci,wilson_lo,wilson_hi`; `ci` is the normal 95%
/// half-width.
pub fn simulate(spec: &RunSpec) -> Result<Table> {
    let d = spec.dimensionless();
    let levels = spec.z_values();
    if let Some(z) = levels.iter().find(|z| **z <= 0.0) {
        return Err(CliError::usage("--z", format!("simulation needs z > 0, got {z}")));
    }
    let mut taus = spec.tau_values();
    if taus.iter().any(|t| *t <= 0.0) {
        return Err(CliError::usage("--tau", "simulation times must be > 0"));
    }
    taus.sort_by(f64::total_cmp);
    taus.dedup();
    let cfg = spec.mc_config(taus);
    let estimates = if spec.stationary {
        if spec.v.is_some() {
            return Err(CliError::usage("--v", "cannot be combined with --stationary"));
        }
        montecarlo::estimate_survival_averaged_levels(&d, &levels, &cfg)?
    } else {
        let v0 = match spec.v_values().as_slice() {
            [v] => *v,
            _ => return Err(CliError::usage("--v", "simulation takes a single initial variance")),
        };
        montecarlo::estimate_survival_levels(&d, &levels, v0, &cfg)?
    };
    let mut t = Table::new(&["z", "tau", "S", "ci", "wilson_lo", "wilson_hi"]);
    for (z, est) in levels.iter().zip(&estimates) {
        for i in 0..est.grid.len() {
            let (lo, hi) = est.wilson_interval(i);
            t.push(vec![
                (*z).into(),
                est.grid[i].into(),
                est.survival[i].into(),
                est.ci_halfwidth[i].into(),
                lo.into(),
                hi.into(),
            ]);
        }
    }
    Ok(t)
}

/// Columns `beta,theta_tau,l_c,residual`. `theta*tau` comes from
/// `--theta-tau`, or else from theta times the `--tau` grid.
pub fn crossing(spec: &RunSpec) -> Result<Table> {
    let betas = match &spec.beta {
        Some(g) => g.values().to_vec(),
        None => vec![spec.dimensionless().beta],
    };
    let theta_taus = match &spec.theta_tau {
        Some(g) => {
            if spec.tau.is_some() {
                return Err(CliError::usage("--tau", "cannot be combined with --theta-tau"));
            }
            g.values().to_vec()
        }
        None => {
            let theta = spec.dimensionless().theta;
            spec.tau_values().iter().map(|t| theta * t).collect()
        }
    };
    let points = product2(&betas, &theta_taus);
    let tol = spec.tolerances.crossing_tol;
    let results = points
        .par_iter()
        .map(|&(b, tt)| Ok(crossing_level(b, tt, tol)?))
        .collect::<Result<Vec<_>>>()?;
    let mut t = Table::new(&["beta", "theta_tau", "l_c", "residual"]);
    for r in results {
        t.push(vec![r.beta.into(), r.theta_tau.into(), r.l_c.into(), r.residual.into()]);
    }
    Ok(t)
}

/// Columns `z,tau,ratio,asymptote`.
pub fn ratio(spec: &RunSpec) -> Result<Table> {
    let (d, cfg) = (spec.dimensionless(), spec.quad_config());
    let points = product2(&spec.z_values(), &spec.tau_values());
    let values = points
        .par_iter()
        .map(|&(z, tau)| Ok(asymptotics::risk_ratio(z, tau, &d, &cfg)?))
        .collect::<Result<Vec<_>>>()?;
    let mut t = Table::new(&["z", "tau", "ratio", "asymptote"]);
    for (&(z, tau), r) in points.iter().zip(values) {
        t.push(vec![
            z.into(),
            tau.into(),
            r.into(),
            asymptotics::risk_ratio_asymptote(z, tau, &d).into(),
        ]);
    }
    Ok(t)
}

/// Columns `z,v,tau,method,S,err_estimate` for each comma-separated method
/// (default `exact`). Methods that ignore `v` repeat their value on every
/// `v` row.
pub fn sweep(spec: &RunSpec) -> Result<Table> {
    let methods = spec
        .method
        .as_deref()
        .unwrap_or("exact")
        .split(',')
        .map(parse_method)
        .collect::<Result<Vec<_>>>()?;
    let (d, cfg) = (spec.dimensionless(), spec.quad_config());
    let points = product3(&spec.z_values(), &spec.v_values(), &spec.tau_values());
    let jobs: Vec<(Method, (f64, f64, f64))> = methods
        .iter()
        .flat_map(|&m| points.iter().map(move |&p| (m, p)))
        .collect();
    let results = jobs
        .par_iter()
        .map(|&(m, (z, v, tau))| survival(m, z, v, tau, &d, &cfg, spec.beta_factor))
        .collect::<Result<Vec<_>>>()?;
    let mut t = Table::new(&["z", "v", "tau", "method", "S", "err_estimate"]);
    for (&(m, (z, v, tau)), r) in jobs.iter().zip(&results) {
        t.push(vec![
            z.into(),
            v.into(),
            tau.into(),
            m.as_str().into(),
            r.value.into(),
            r.err_estimate.into(),
        ]);
    }
    Ok(t)
}
