//! Path simulation of the dimensionless Heston dynamics with an absorbing
//! barrier, used as an independent check on the Fourier results.
//!
//! Variance follows full-truncation Euler,
//! `v' = v - (v+ - theta) dt + beta sqrt(v+ dt) N2`, and the return moves by
//! `sqrt(v+ dt) N1` with `N1`, `N2` independent. With bridge correction the
//! minimum of the return over each step is drawn from the Brownian-bridge law
//! with the step's frozen variance, so a barrier at distance `z` is crossed
//! inside the step with probability `exp(-2 w_n w_{n+1} / (v+ dt))`. One
//! simulated path therefore serves every barrier level at once: it survives
//! level `z` as long as its running minimum stays above `-z`.
//!
//! Every path owns a ChaCha8 stream selected by its index, and the per-level
//! absorption counts are integers, so results do not depend on how paths are
//! spread over threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::Dimensionless;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

const PATHS_PER_CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    EulerFullTruncation,
}

impl Scheme {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::EulerFullTruncation => "euler_full_truncation",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct McConfig {
    /// Step in dimensionless time.
    pub dt: f64,
    pub n_paths: usize,
    pub seed: u64,
    pub scheme: Scheme,
    pub bridge_correction: bool,
    /// Last simulated time.
    pub horizon: f64,
    /// Times at which survival is reported; each is rounded to the nearest step.
    pub record_grid: Vec<f64>,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            n_paths: 1_000_000,
            seed: 0x4853_5446_5054_0001,
            scheme: Scheme::EulerFullTruncation,
            bridge_correction: true,
            horizon: 1.0,
            record_grid: vec![1.0],
            threads: None,
        }
    }
}

impl McConfig {
    /// Config recording only at `horizon`.
    pub fn at_horizon(horizon: f64) -> Self {
        Self {
            horizon,
            record_grid: vec![horizon],
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::Config(format!("dt must be finite and > 0, got {}", self.dt)));
        }
        if self.n_paths == 0 {
            return Err(Error::Config("n_paths must be >= 1".into()));
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::Config(format!(
                "horizon must be finite and > 0, got {}",
                self.horizon
            )));
        }
        if self.record_grid.is_empty() {
            return Err(Error::Config("record_grid is empty".into()));
        }
        if self
            .record_grid
            .iter()
            .any(|t| !t.is_finite() || *t < 0.0 || *t > self.horizon)
        {
            return Err(Error::Config("record_grid entries must lie in [0, horizon]".into()));
        }
        if self.record_grid.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Config("record_grid must be sorted".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be >= 1".into()));
        }
        if (self.horizon / self.dt).round() > u32::MAX as f64 {
            return Err(Error::Config("too many time steps".into()));
        }
        Ok(())
    }

    fn record_steps(&self) -> Vec<u32> {
        self.record_grid
            .iter()
            .map(|t| (t / self.dt).round() as u32)
            .collect()
    }
}

/// Survival curve estimated from simulated paths.
#[derive(Debug, Clone, PartialEq)]
pub struct McEstimate {
    pub grid: Vec<f64>,
    pub survival: Vec<f64>,
    /// `1.96 sqrt(p (1 - p) / n)` at each grid point.
    pub ci_halfwidth: Vec<f64>,
    pub n_paths: usize,
    pub seed: u64,
    pub scheme: Scheme,
    pub bridge_correction: bool,
    pub dt: f64,
}

impl McEstimate {
    /// Wilson score 95% interval at grid point `i`. Unlike the normal
    /// half-width it does not collapse to a point when no path (or every
    /// path) has been absorbed.
    pub fn wilson_interval(&self, i: usize) -> (f64, f64) {
        wilson(self.survival[i], self.n_paths)
    }
}

/// Wilson score 95% interval for an observed fraction `p` out of `n` trials.
pub fn wilson(p: f64, n: usize) -> (f64, f64) {
    let n = n as f64;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[derive(Debug, Clone, Copy)]
enum InitialVariance {
    Fixed(f64),
    Stationary,
}

/// Survival of a path started at distance `z0 > 0` from the barrier with
/// variance `v0`.
pub fn estimate_survival(d: &Dimensionless, z0: f64, v0: f64, cfg: &McConfig) -> Result<McEstimate> {
    Ok(estimate_survival_levels(d, &[z0], v0, cfg)?.remove(0))
}

/// Like [`estimate_survival`] for several barrier distances, all read off
/// the same set of paths. Estimates come back in the order of `levels`.
pub fn estimate_survival_levels(
    d: &Dimensionless,
    levels: &[f64],
    v0: f64,
    cfg: &McConfig,
) -> Result<Vec<McEstimate>> {
    if !(v0.is_finite() && v0 >= 0.0) {
        return Err(Error::Domain {
            name: "v0",
            value: v0,
            reason: "must be finite and >= 0",
        });
    }
    simulate(d, levels, InitialVariance::Fixed(v0), cfg)
}

/// Survival with the initial variance drawn from the stationary Gamma law.
pub fn estimate_survival_averaged(d: &Dimensionless, z0: f64, cfg: &McConfig) -> Result<McEstimate> {
    Ok(estimate_survival_averaged_levels(d, &[z0], cfg)?.remove(0))
}

pub fn estimate_survival_averaged_levels(
    d: &Dimensionless,
    levels: &[f64],
    cfg: &McConfig,
) -> Result<Vec<McEstimate>> {
    simulate(d, levels, InitialVariance::Stationary, cfg)
}

/// `n` independent draws from the stationary Gamma law (shape `nu`,
/// rate `2 / beta^2`). Draw `i` depends only on `(seed, i)`.
pub fn sample_stationary_volatility(d: &Dimensionless, n: usize, seed: u64) -> Result<Vec<f64>> {
    let d = Dimensionless::new(d.theta, d.beta)?;
    let gamma = stationary_law(&d)?;
    let base = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = base.clone();
            rng.set_stream(i as u64);
            gamma.sample(&mut rng)
        })
        .collect())
}

fn stationary_law(d: &Dimensionless) -> Result<Gamma<f64>> {
    Gamma::new(d.nu(), 0.5 * d.beta * d.beta)
        .map_err(|e| Error::Config(format!("stationary Gamma law: {e}")))
}

fn simulate(
    d: &Dimensionless,
    levels: &[f64],
    init: InitialVariance,
    cfg: &McConfig,
) -> Result<Vec<McEstimate>> {
    let d = Dimensionless::new(d.theta, d.beta)?;
    cfg.validate()?;
    if levels.is_empty() {
        return Err(Error::Config("no barrier levels given".into()));
    }
    for &z in levels {
        if !(z.is_finite() && z > 0.0) {
            return Err(Error::Domain {
                name: "z0",
                value: z,
                reason: "must be finite and > 0 (start strictly inside)",
            });
        }
    }
    // Paths test levels nearest-first.
    let mut order: Vec<usize> = (0..levels.len()).collect();
    order.sort_by(|&a, &b| levels[a].total_cmp(&levels[b]));
    let sorted: Vec<f64> = order.iter().map(|&i| levels[i]).collect();

    let record = cfg.record_steps();
    let engine = Engine {
        theta: d.theta,
        beta: d.beta,
        dt: cfg.dt,
        n_steps: *record.last().expect("validated non-empty"),
        bridge: cfg.bridge_correction,
        levels: &sorted,
        record: &record,
        init,
        gamma: match init {
            InitialVariance::Stationary => Some(stationary_law(&d)?),
            InitialVariance::Fixed(_) => None,
        },
        base_rng: ChaCha8Rng::seed_from_u64(cfg.seed),
    };

    let n_chunks = cfg.n_paths.div_ceil(PATHS_PER_CHUNK);
    let run = || {
        (0..n_chunks)
            .into_par_iter()
            .map(|c| {
                let start = c * PATHS_PER_CHUNK;
                let end = (start + PATHS_PER_CHUNK).min(cfg.n_paths);
                engine.run_chunk(start..end)
            })
            .reduce(
                || vec![0u64; sorted.len() * record.len()],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            )
    };
    let absorbed = match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    };

    let n = cfg.n_paths as f64;
    let mut out = vec![None; levels.len()];
    for (rank, &orig) in order.iter().enumerate() {
        let mut cumulative = 0u64;
        let mut survival = Vec::with_capacity(record.len());
        let mut ci = Vec::with_capacity(record.len());
        for bucket in &absorbed[rank * record.len()..(rank + 1) * record.len()] {
            cumulative += bucket;
            let p = 1.0 - cumulative as f64 / n;
            survival.push(p);
            ci.push(Z95 * (p * (1.0 - p) / n).sqrt());
        }
        out[orig] = Some(McEstimate {
            grid: cfg.record_grid.clone(),
            survival,
            ci_halfwidth: ci,
            n_paths: cfg.n_paths,
            seed: cfg.seed,
            scheme: cfg.scheme,
            bridge_correction: cfg.bridge_correction,
            dt: cfg.dt,
        });
    }
    Ok(out.into_iter().map(|e| e.expect("every level filled")).collect())
}

struct Engine<'a> {
    theta: f64,
    beta: f64,
    dt: f64,
    n_steps: u32,
    bridge: bool,
    levels: &'a [f64],
    record: &'a [u32],
    init: InitialVariance,
    gamma: Option<Gamma<f64>>,
    base_rng: ChaCha8Rng,
}

impl Engine<'_> {
    /// Absorption counts for a block of paths, laid out `[level][record bucket]`.
    fn run_chunk(&self, paths: std::ops::Range<usize>) -> Vec<u64> {
        let n_rec = self.record.len();
        let mut absorbed = vec![0u64; self.levels.len() * n_rec];
        for path in paths {
            let mut rng = self.base_rng.clone();
            rng.set_stream(path as u64);
            let v0 = match (self.init, &self.gamma) {
                (InitialVariance::Fixed(v), _) => v,
                (InitialVariance::Stationary, Some(g)) => g.sample(&mut rng),
                (InitialVariance::Stationary, None) => unreachable!("law built for stationary start"),
            };
            let mut crossed = 0usize;
            let mut bucket = 0usize;
            self.walk(v0, &mut rng, |step, newly_crossed| {
                // a crossing at `step` counts from the first record at or after it
                while bucket < n_rec && self.record[bucket] < step {
                    bucket += 1;
                }
                if bucket < n_rec {
                    for level in crossed..newly_crossed {
                        absorbed[level * n_rec + bucket] += 1;
                    }
                }
                crossed = newly_crossed;
            });
        }
        absorbed
    }

    /// Advances one path until every level is crossed or the horizon is
    /// reached. `on_cross(step, n)` fires whenever the number of crossed
    /// levels grows to `n`.
    fn walk<R: Rng, C: FnMut(u32, usize)>(&self, v0: f64, rng: &mut R, mut on_cross: C) {
        let (theta, beta, dt) = (self.theta, self.beta, self.dt);
        let n_levels = self.levels.len();
        let mut x = 0.0f64;
        let mut v = v0;
        let mut running_min = 0.0f64;
        let mut crossed = 0usize;
        for step in 1..=self.n_steps {
            let vp = v.max(0.0);
            let sd = (vp * dt).sqrt();
            let n1: f64 = rng.sample(StandardNormal);
            let n2: f64 = rng.sample(StandardNormal);
            // drawn unconditionally so bridge on/off runs share their normals
            let u: f64 = 1.0 - rng.random::<f64>();
            let x_next = x + sd * n1;
            v = v - (vp - theta) * dt + beta * sd * n2;
            let step_min = if self.bridge && vp > 0.0 {
                let gap = x_next - x;
                0.5 * (x + x_next - (gap * gap - 2.0 * vp * dt * u.ln()).sqrt())
            } else {
                x.min(x_next)
            };
            if step_min < running_min {
                running_min = step_min;
                let mut now = crossed;
                while now < n_levels && -running_min >= self.levels[now] {
                    now += 1;
                }
                if now > crossed {
                    crossed = now;
                    on_cross(step, crossed);
                    if crossed == n_levels {
                        return;
                    }
                }
            }
            x = x_next;
        }
    }
}
