//! Plot-ready tables for the reference figures.
//!
//! Every figure uses theta from the model parameters (default 1.92e-3) and
//! the figure's own beta and tau values. `--z` replaces the default z grid
//! where the figure has one. Only fig1 also honours `--beta` (through the
//! model parameters), `--v`, `--tau` and the simulation flags.

use heston_fpt::asymptotics::{self, crossing_level, fit_log_law, fit_power_law};
use heston_fpt::montecarlo;
use heston_fpt::quadrature::{survival_averaged, survival_exact};
use heston_fpt::{Dimensionless, State};
use rayon::prelude::*;

use crate::args::FigureName;
use crate::error::{CliError, Result};
use crate::grid::{log_space, Grid};
use crate::spec::RunSpec;
use crate::table::Table;

/// Points on each default axis.
pub const GRID_POINTS: usize = 64;

pub fn figure(name: FigureName, spec: &RunSpec) -> Result<Table> {
    match name {
        FigureName::Fig1 => fig1(spec),
        FigureName::Fig2 => fig2(spec),
        FigureName::Fig3 => fig3(spec),
        FigureName::Fig4 => fig4(spec),
        FigureName::Fig5 => averaged_vs_z(spec, 1.0, &[0.01, 0.1, 1.0], true, false),
        FigureName::Fig6 => fig6(spec),
        FigureName::Fig7 => averaged_vs_z(spec, 0.5, &[10.0, 50.0, 100.0], false, true),
        FigureName::Fig8 => averaged_vs_z(spec, 3.0, &[0.1, 10.0], true, true),
        FigureName::Fig9 => fig9(spec),
        FigureName::Fig9b => fig9b(spec),
        FigureName::Fig10 => fig10(spec),
    }
}

fn par_map<T, U, F>(items: &[T], f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U> + Sync + Send,
{
    items.par_iter().map(f).collect()
}

fn z_grid(spec: &RunSpec, lo: f64, hi: f64) -> Vec<f64> {
    spec.z
        .as_ref()
        .map_or_else(|| log_space(lo, hi, GRID_POINTS), |g| g.values().to_vec())
}

fn single(flag: &str, grid: &Option<Grid>, default: f64) -> Result<f64> {
    match grid {
        None => Ok(default),
        Some(g) => g
            .single()
            .ok_or_else(|| CliError::usage(flag, "this figure takes a single value")),
    }
}

fn with_beta(spec: &RunSpec, beta: f64) -> Result<Dimensionless> {
    Ok(Dimensionless::new(spec.dimensionless().theta, beta)?)
}

/// Exact survival against the simulation over z, one path set for all
/// levels. Columns `z,S_exact,err_estimate,S_mc,ci,wilson_lo,wilson_hi`.
fn fig1(spec: &RunSpec) -> Result<Table> {
    let d = spec.dimensionless();
    let (cfg, tau) = (spec.quad_config(), single("--tau", &spec.tau, 0.5)?);
    let v = single("--v", &spec.v, d.theta)?;
    let zs = z_grid(spec, 2e-3, 2e-1);
    if zs.iter().any(|z| *z <= 0.0) {
        return Err(CliError::usage("--z", "simulation needs z > 0"));
    }
    let exact = par_map(&zs, |&z| Ok(survival_exact(&State::new(z, v, tau)?, &d, &cfg)?))?;
    let mc = montecarlo::estimate_survival_levels(&d, &zs, v, &spec.mc_config(vec![tau]))?;
    let mut t = Table::new(&["z", "S_exact", "err_estimate", "S_mc", "ci", "wilson_lo", "wilson_hi"]);
    for ((z, e), m) in zs.iter().zip(&exact).zip(&mc) {
        let (lo, hi) = m.wilson_interval(0);
        t.push(vec![
            (*z).into(),
            e.value.into(),
            e.err_estimate.into(),
            m.survival[0].into(),
            m.ci_halfwidth[0].into(),
            lo.into(),
            hi.into(),
        ]);
    }
    Ok(t)
}

/// Survival against tau for three initial variances. Columns
/// `v_over_theta,v,tau,S_exact,err_estimate,S_erf`.
fn fig2(spec: &RunSpec) -> Result<Table> {
    let d = with_beta(spec, 1.0)?;
    let (cfg, z) = (spec.quad_config(), single("--z", &spec.z, 0.01)?);
    let taus = log_space(1e-2, 1e6, GRID_POINTS);
    let points: Vec<(f64, f64)> = [5.0, 100.0, 1000.0]
        .iter()
        .flat_map(|&r| taus.iter().map(move |&t| (r, t)))
        .collect();
    let exact = par_map(&points, |&(r, tau)| {
        Ok(survival_exact(&State::new(z, r * d.theta, tau)?, &d, &cfg)?)
    })?;
    let mut t = Table::new(&["v_over_theta", "v", "tau", "S_exact", "err_estimate", "S_erf"]);
    for (&(r, tau), e) in points.iter().zip(&exact) {
        let v = r * d.theta;
        t.push(vec![
            r.into(),
            v.into(),
            tau.into(),
            e.value.into(),
            e.err_estimate.into(),
            asymptotics::survival_erf(z, v, tau, d.theta).into(),
        ]);
    }
    Ok(t)
}

/// Survival against the initial variance at two times. Columns
/// `tau,v_over_theta,v,S_exact,err_estimate,S_erf`.
fn fig3(spec: &RunSpec) -> Result<Table> {
    let d = with_beta(spec, 1.0)?;
    let (cfg, z) = (spec.quad_config(), single("--z", &spec.z, 0.01)?);
    let ratios = log_space(1e-2, 1e6, GRID_POINTS);
    let points: Vec<(f64, f64)> = [0.1, 1000.0]
        .iter()
        .flat_map(|&tau| ratios.iter().map(move |&r| (tau, r)))
        .collect();
    let exact = par_map(&points, |&(tau, r)| {
        Ok(survival_exact(&State::new(z, r * d.theta, tau)?, &d, &cfg)?)
    })?;
    let mut t = Table::new(&["tau", "v_over_theta", "v", "S_exact", "err_estimate", "S_erf"]);
    for (&(tau, r), e) in points.iter().zip(&exact) {
        let v = r * d.theta;
        t.push(vec![
            tau.into(),
            r.into(),
            v.into(),
            e.value.into(),
            e.err_estimate.into(),
            asymptotics::survival_erf(z, v, tau, d.theta).into(),
        ]);
    }
    Ok(t)
}

/// Hitting probability against z at a small and a large beta. Columns
/// `beta,z,W_exact,err_estimate,W_erf,W_arctan`.
fn fig4(spec: &RunSpec) -> Result<Table> {
    let (tau, cfg) = (0.5, spec.quad_config());
    let theta = spec.dimensionless().theta;
    let zs = z_grid(spec, 1e-3, 1.0);
    let points: Vec<(f64, f64)> = [0.1, 10.0]
        .iter()
        .flat_map(|&b| zs.iter().map(move |&z| (b, z)))
        .collect();
    let exact = par_map(&points, |&(b, z)| {
        Ok(survival_exact(&State::new(z, theta, tau)?, &with_beta(spec, b)?, &cfg)?)
    })?;
    let mut t = Table::new(&["beta", "z", "W_exact", "err_estimate", "W_erf", "W_arctan"]);
    for (&(b, z), e) in points.iter().zip(&exact) {
        t.push(vec![
            b.into(),
            z.into(),
            (1.0 - e.value).into(),
            e.err_estimate.into(),
            (1.0 - asymptotics::survival_erf(z, theta, tau, theta)).into(),
            (1.0 - asymptotics::survival_arctan(z, theta, tau, theta, b)).into(),
        ]);
    }
    Ok(t)
}

/// Averaged hitting probability against z for several beta at one time,
/// with the small-beta (`W_avg_erf`) and/or large-beta (`W_avg_arctan`)
/// approximations. Columns `beta,z,W_exact,err_estimate,...`.
fn averaged_vs_z(spec: &RunSpec, tau: f64, betas: &[f64], erf: bool, arctan: bool) -> Result<Table> {
    let cfg = spec.quad_config();
    let theta = spec.dimensionless().theta;
    let zs = z_grid(spec, 1e-3, 1.0);
    let points: Vec<(f64, f64)> = betas
        .iter()
        .flat_map(|&b| zs.iter().map(move |&z| (b, z)))
        .collect();
    let exact = par_map(&points, |&(b, z)| {
        Ok(survival_averaged(z, tau, &with_beta(spec, b)?, &cfg)?)
    })?;
    let mut columns = vec!["beta", "z", "W_exact", "err_estimate"];
    if erf {
        columns.push("W_avg_erf");
    }
    if arctan {
        columns.push("W_avg_arctan");
    }
    let mut t = Table::new(&columns);
    for (&(b, z), e) in points.iter().zip(&exact) {
        let mut row = vec![b.into(), z.into(), (1.0 - e.value).into(), e.err_estimate.into()];
        if erf {
            row.push((1.0 - asymptotics::survival_avg_erf(z, tau, theta)).into());
        }
        if arctan {
            row.push((1.0 - asymptotics::survival_avg_arctan(z, tau, theta, b)).into());
        }
        t.push(row);
    }
    Ok(t)
}

/// Averaged hitting probability against beta at two times. Columns
/// `tau,beta,W_exact,err_estimate,W_powerlaw`.
fn fig6(spec: &RunSpec) -> Result<Table> {
    let (cfg, z) = (spec.quad_config(), single("--z", &spec.z, 0.01)?);
    let theta = spec.dimensionless().theta;
    let betas = log_space(1e-2, 1e3, GRID_POINTS);
    let points: Vec<(f64, f64)> = [0.1, 1.0]
        .iter()
        .flat_map(|&tau| betas.iter().map(move |&b| (tau, b)))
        .collect();
    let exact = par_map(&points, |&(tau, b)| {
        Ok(survival_averaged(z, tau, &with_beta(spec, b)?, &cfg)?)
    })?;
    let mut t = Table::new(&["tau", "beta", "W_exact", "err_estimate", "W_powerlaw"]);
    for (&(tau, b), e) in points.iter().zip(&exact) {
        t.push(vec![
            tau.into(),
            b.into(),
            (1.0 - e.value).into(),
            e.err_estimate.into(),
            asymptotics::tail_powerlaw_hitting(z, tau, theta, b).into(),
        ]);
    }
    Ok(t)
}

/// Crossing level against beta at three times, with a fit
/// `l_c = a + b ln(beta)` per time. Columns
/// `tau,theta_tau,beta,l_c,residual,l_c_fit`.
fn fig9(spec: &RunSpec) -> Result<Table> {
    let theta = spec.dimensionless().theta;
    let tol = spec.tolerances.crossing_tol;
    let betas = log_space(1.0, 100.0, GRID_POINTS);
    let mut t = Table::new(&["tau", "theta_tau", "beta", "l_c", "residual", "l_c_fit"]);
    for tau in [0.7, 1.3, 2.0] {
        let tt = theta * tau;
        let roots = par_map(&betas, |&b| Ok(crossing_level(b, tt, tol)?))?;
        let ls: Vec<f64> = roots.iter().map(|r| r.l_c).collect();
        let fit = fit_log_law(&betas, &ls)?;
        for (b, r) in betas.iter().zip(&roots) {
            t.push(vec![
                tau.into(),
                tt.into(),
                (*b).into(),
                r.l_c.into(),
                r.residual.into(),
                (fit.intercept + fit.slope * b.ln()).into(),
            ]);
        }
    }
    Ok(t)
}

/// Crossing level against theta*tau for three beta, with a power-law fit
/// per beta. Columns `beta,theta_tau,l_c,residual,l_c_fit,gamma`.
fn fig9b(spec: &RunSpec) -> Result<Table> {
    let tol = spec.tolerances.crossing_tol;
    let tts = log_space(1e-4, 1e-1, GRID_POINTS);
    let mut t = Table::new(&["beta", "theta_tau", "l_c", "residual", "l_c_fit", "gamma"]);
    for beta in [1.0, 5.0, 10.0] {
        let roots = par_map(&tts, |&tt| Ok(crossing_level(beta, tt, tol)?))?;
        let ls: Vec<f64> = roots.iter().map(|r| r.l_c).collect();
        let fit = fit_power_law(&tts, &ls)?;
        for (tt, r) in tts.iter().zip(&roots) {
            t.push(vec![
                beta.into(),
                (*tt).into(),
                r.l_c.into(),
                r.residual.into(),
                (fit.intercept + fit.slope * tt.ln()).exp().into(),
                fit.slope.into(),
            ]);
        }
    }
    Ok(t)
}

/// Risk ratio against z. Columns `z,ratio,asymptote`.
fn fig10(spec: &RunSpec) -> Result<Table> {
    let (tau, cfg) = (3.0, spec.quad_config());
    let d = with_beta(spec, 10.0)?;
    let zs = z_grid(spec, 1e-2, 1.0);
    let ratios = par_map(&zs, |&z| Ok(asymptotics::risk_ratio(z, tau, &d, &cfg)?))?;
    let mut t = Table::new(&["z", "ratio", "asymptote"]);
    for (z, r) in zs.iter().zip(ratios) {
        t.push(vec![
            (*z).into(),
            r.into(),
            asymptotics::risk_ratio_asymptote(*z, tau, &d).into(),
        ]);
    }
    Ok(t)
}
