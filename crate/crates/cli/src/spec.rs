//! Resolution of flags and config files into a validated [`RunSpec`].

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use heston_fpt::montecarlo::McConfig;
use heston_fpt::{Dimensionless, ModelParams, QuadConfig};
use serde_json::{json, Value};

use crate::args::{Command, Format, Options};
use crate::error::{CliError, Result};
use crate::grid::Grid;

/// Market parameters used when none are given (1/day).
pub const DEFAULT_ALPHA: f64 = 0.045;
pub const DEFAULT_M2: f64 = 8.62e-5;
pub const DEFAULT_K: f64 = 0.0045;

pub const DEFAULT_Z: f64 = 0.01;
pub const DEFAULT_TAU: f64 = 0.5;
pub const DEFAULT_CROSSING_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Params {
    Physical(ModelParams),
    Dimensionless(Dimensionless),
}

impl Params {
    pub fn dimensionless(&self) -> Dimensionless {
        match self {
            Params::Physical(p) => p.dimensionless(),
            Params::Dimensionless(d) => *d,
        }
    }

    fn echo(&self) -> Value {
        let d = self.dimensionless();
        match self {
            Params::Physical(p) => json!({
                "kind": "physical",
                "alpha": p.alpha,
                "m_sq": p.m_sq,
                "k": p.k,
                "theta": d.theta,
                "beta": d.beta,
            }),
            Params::Dimensionless(_) => json!({
                "kind": "dimensionless",
                "theta": d.theta,
                "beta": d.beta,
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
    pub crossing_tol: f64,
}

/// Everything one invocation needs. Grids left unset fall back to each
/// command's defaults.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub command: Command,
    pub params: Params,
    pub z: Option<Grid>,
    pub v: Option<Grid>,
    pub tau: Option<Grid>,
    /// Extra beta values (crossing-level only).
    pub beta: Option<Grid>,
    pub theta_tau: Option<Grid>,
    pub method: Option<String>,
    pub beta_factor: bool,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub seed: u64,
    pub paths: usize,
    pub dt: f64,
    pub threads: Option<usize>,
    pub bridge: bool,
    pub stationary: bool,
    pub tolerances: Tolerances,
}

impl RunSpec {
    /// Merges the config file named by `--config` (if any) under the flags,
    /// then validates.
    pub fn resolve(command: Command, mut options: Options) -> Result<Self> {
        if let Some(path) = options.config.clone() {
            let entries = read_config(&path)?;
            merge_config(&mut options, &entries, &path)?;
        }
        Self::from_options(command, &options)
    }

    pub fn from_options(command: Command, o: &Options) -> Result<Self> {
        let crossing = command == Command::CrossingLevel;
        let params = resolve_params(o, crossing)?;
        for (flag, grid) in [("--z", &o.z), ("--v", &o.v), ("--tau", &o.tau)] {
            if let Some(g) = grid {
                if g.values().iter().any(|x| *x < 0.0) {
                    return Err(CliError::usage(flag, "values must be >= 0"));
                }
            }
        }
        if let Some(g) = &o.theta_tau {
            if g.values().iter().any(|x| *x <= 0.0) {
                return Err(CliError::usage("--theta-tau", "values must be > 0"));
            }
        }
        let mc = McConfig::default();
        let quad = QuadConfig::default();
        let spec = RunSpec {
            command,
            params,
            z: o.z.clone(),
            v: o.v.clone(),
            tau: o.tau.clone(),
            beta: if crossing { o.beta.clone() } else { None },
            theta_tau: o.theta_tau.clone(),
            method: o.method.clone(),
            beta_factor: o.beta_factor,
            format: o.format.unwrap_or_default(),
            output: o.output.clone(),
            seed: o.seed.unwrap_or(mc.seed),
            paths: o.paths.unwrap_or(mc.n_paths),
            dt: o.dt.unwrap_or(mc.dt),
            threads: o.threads,
            bridge: !o.no_bridge,
            stationary: o.stationary,
            tolerances: Tolerances {
                abs_tol: o.abs_tol.unwrap_or(quad.abs_tol),
                rel_tol: o.rel_tol.unwrap_or(quad.rel_tol),
                max_panels: o.max_panels.unwrap_or(quad.max_panels),
                crossing_tol: o.crossing_tol.unwrap_or(DEFAULT_CROSSING_TOL),
            },
        };
        spec.validate_settings()?;
        Ok(spec)
    }

    fn validate_settings(&self) -> Result<()> {
        let positive = |flag: &str, x: f64| {
            if x.is_finite() && x > 0.0 {
                Ok(())
            } else {
                Err(CliError::usage(flag, format!("must be finite and > 0, got {x}")))
            }
        };
        positive("--dt", self.dt)?;
        positive("--abs-tol", self.tolerances.abs_tol)?;
        positive("--rel-tol", self.tolerances.rel_tol)?;
        positive("--crossing-tol", self.tolerances.crossing_tol)?;
        if self.tolerances.max_panels == 0 {
            return Err(CliError::usage("--max-panels", "must be >= 1"));
        }
        if self.paths == 0 {
            return Err(CliError::usage("--paths", "must be >= 1"));
        }
        if self.threads == Some(0) {
            return Err(CliError::usage("--threads", "must be >= 1"));
        }
        Ok(())
    }

    pub fn dimensionless(&self) -> Dimensionless {
        self.params.dimensionless()
    }

    pub fn quad_config(&self) -> QuadConfig {
        QuadConfig {
            abs_tol: self.tolerances.abs_tol,
            rel_tol: self.tolerances.rel_tol,
            max_panels: self.tolerances.max_panels,
            ..QuadConfig::default()
        }
    }

    /// Simulation settings recording at the sorted times `record`.
    pub fn mc_config(&self, record: Vec<f64>) -> McConfig {
        let horizon = record.iter().copied().fold(0.0, f64::max);
        McConfig {
            dt: self.dt,
            n_paths: self.paths,
            seed: self.seed,
            bridge_correction: self.bridge,
            horizon,
            record_grid: record,
            threads: self.threads,
            ..McConfig::default()
        }
    }

    pub fn z_values(&self) -> Vec<f64> {
        grid_or(&self.z, DEFAULT_Z)
    }

    pub fn v_values(&self) -> Vec<f64> {
        grid_or(&self.v, self.dimensionless().theta)
    }

    pub fn tau_values(&self) -> Vec<f64> {
        grid_or(&self.tau, DEFAULT_TAU)
    }

    /// The run description stored under `meta` in JSON output.
    pub fn echo(&self, figure: Option<&str>) -> Value {
        let grid = |g: &Option<Grid>| g.as_ref().map_or(Value::Null, |g| json!(g));
        json!({
            "command": self.command.as_str(),
            "figure": figure,
            "params": self.params.echo(),
            "z": grid(&self.z),
            "v": grid(&self.v),
            "tau": grid(&self.tau),
            "beta": grid(&self.beta),
            "theta_tau": grid(&self.theta_tau),
            "method": self.method,
            "beta_factor": self.beta_factor,
            "format": self.format,
            "output": self.output,
            "paths": self.paths,
            "dt": self.dt,
            "threads": self.threads,
            "bridge": self.bridge,
            "stationary": self.stationary,
            "tolerances": {
                "abs_tol": self.tolerances.abs_tol,
                "rel_tol": self.tolerances.rel_tol,
                "max_panels": self.tolerances.max_panels,
                "crossing_tol": self.tolerances.crossing_tol,
            },
        })
    }
}

fn grid_or(grid: &Option<Grid>, default: f64) -> Vec<f64> {
    grid.as_ref().map_or_else(|| vec![default], |g| g.values().to_vec())
}

fn resolve_params(o: &Options, crossing: bool) -> Result<Params> {
    let physical = [("--alpha", o.alpha), ("--m2", o.m2), ("--k", o.k)];
    let any_physical = physical.iter().any(|(_, x)| x.is_some());
    if any_physical {
        if o.theta.is_some() {
            return Err(CliError::usage("--theta", "cannot be combined with --alpha/--m2/--k"));
        }
        if o.beta.is_some() {
            return Err(CliError::usage("--beta", "cannot be combined with --alpha/--m2/--k"));
        }
        if let Some((flag, _)) = physical.iter().find(|(_, x)| x.is_none()) {
            return Err(CliError::usage(flag, "required together with --alpha, --m2 and --k"));
        }
        let p = ModelParams::new(o.alpha.unwrap(), o.m2.unwrap(), o.k.unwrap())?;
        return Ok(Params::Physical(p));
    }
    match (o.theta, &o.beta) {
        (None, None) => Ok(Params::Physical(ModelParams::new(
            DEFAULT_ALPHA,
            DEFAULT_M2,
            DEFAULT_K,
        )?)),
        (Some(_), None) => Err(CliError::usage("--beta", "required together with --theta")),
        (theta, Some(beta)) => {
            let b = if crossing {
                beta.values()[0]
            } else {
                beta.single()
                    .ok_or_else(|| CliError::usage("--beta", "expected a single value"))?
            };
            let theta = match theta {
                Some(t) => t,
                // crossing-level only needs theta to turn --tau into theta*tau
                None if crossing => DEFAULT_M2 / DEFAULT_ALPHA,
                None => return Err(CliError::usage("--theta", "required together with --beta")),
            };
            Ok(Params::Dimensionless(Dimensionless::new(theta, b)?))
        }
    }
}

const CONFIG_KEYS: &[&str] = &[
    "alpha",
    "m2",
    "k",
    "theta",
    "beta",
    "z",
    "v",
    "tau",
    "theta_tau",
    "method",
    "beta_factor",
    "paths",
    "dt",
    "seed",
    "threads",
    "bridge",
    "stationary",
    "abs_tol",
    "rel_tol",
    "max_panels",
    "crossing_tol",
    "output",
    "format",
];

/// Reads a flat `key = value` file. Blank lines and `#` comments are skipped;
/// keys may use `-` or `_`. Unknown and repeated keys are errors.
pub fn read_config(path: &Path) -> Result<Vec<(String, String)>> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let err = |message: String| CliError::Config {
        path: path.to_path_buf(),
        message,
    };
    let mut seen = HashSet::new();
    let mut entries = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("line {}: expected key=value", i + 1)))?;
        let key = key.trim().replace('-', "_");
        if !CONFIG_KEYS.contains(&key.as_str()) {
            return Err(err(format!("unknown key `{key}` (line {})", i + 1)));
        }
        if !seen.insert(key.clone()) {
            return Err(err(format!("duplicate key `{key}` (line {})", i + 1)));
        }
        entries.push((key, value.trim().to_string()));
    }
    Ok(entries)
}

/// Fills options not set on the command line from config entries.
pub fn merge_config(o: &mut Options, entries: &[(String, String)], path: &Path) -> Result<()> {
    fn parse<T: std::str::FromStr>(key: &str, value: &str, path: &Path) -> Result<T> {
        value.parse().map_err(|_| CliError::Config {
            path: path.to_path_buf(),
            message: format!("key `{key}`: cannot parse `{value}`"),
        })
    }
    fn fill<T>(slot: &mut Option<T>, value: T) {
        if slot.is_none() {
            *slot = Some(value);
        }
    }
    for (key, value) in entries {
        let (key, value) = (key.as_str(), value.as_str());
        match key {
            "alpha" => fill(&mut o.alpha, parse(key, value, path)?),
            "m2" => fill(&mut o.m2, parse(key, value, path)?),
            "k" => fill(&mut o.k, parse(key, value, path)?),
            "theta" => fill(&mut o.theta, parse(key, value, path)?),
            "beta" => fill(&mut o.beta, parse(key, value, path)?),
            "z" => fill(&mut o.z, parse(key, value, path)?),
            "v" => fill(&mut o.v, parse(key, value, path)?),
            "tau" => fill(&mut o.tau, parse(key, value, path)?),
            "theta_tau" => fill(&mut o.theta_tau, parse(key, value, path)?),
            "method" => fill(&mut o.method, value.to_string()),
            "paths" => fill(&mut o.paths, parse(key, value, path)?),
            "dt" => fill(&mut o.dt, parse(key, value, path)?),
            "seed" => fill(&mut o.seed, parse(key, value, path)?),
            "threads" => fill(&mut o.threads, parse(key, value, path)?),
            "abs_tol" => fill(&mut o.abs_tol, parse(key, value, path)?),
            "rel_tol" => fill(&mut o.rel_tol, parse(key, value, path)?),
            "max_panels" => fill(&mut o.max_panels, parse(key, value, path)?),
            "crossing_tol" => fill(&mut o.crossing_tol, parse(key, value, path)?),
            "output" => fill(&mut o.output, PathBuf::from(value)),
            "format" => {
                let f = match value {
                    "csv" => Format::Csv,
                    "json" => Format::Json,
                    _ => {
                        return Err(CliError::Config {
                            path: path.to_path_buf(),
                            message: format!("key `format`: expected csv or json, got `{value}`"),
                        })
                    }
                };
                fill(&mut o.format, f);
            }
            "beta_factor" => o.beta_factor |= parse::<bool>(key, value, path)?,
            "stationary" => o.stationary |= parse::<bool>(key, value, path)?,
            "bridge" => o.no_bridge |= !parse::<bool>(key, value, path)?,
            _ => unreachable!("keys are checked when the file is read"),
        }
    }
    Ok(())
}
