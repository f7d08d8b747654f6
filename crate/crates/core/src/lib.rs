//! Survival and hitting probabilities for the first-passage problem of the
//! Heston stochastic-volatility model.
//!
//! * [`model`]: parameters, the dimensionless reduction and the analytic
//!   kernels of the Fourier solution.
//! * [`quadrature`]: exact survival probabilities by Fourier-sine inversion.
//! * [`asymptotics`]: closed-form approximations, tail estimates, the risk
//!   ratio and the crossing level.
//! * [`montecarlo`]: an independent path-simulation estimator.

pub mod asymptotics;
pub mod error;
pub mod model;
pub mod montecarlo;
pub mod quadrature;

pub use error::{Error, Result};
pub use model::{Dimensionless, KernelValues, ModelParams, State};
pub use quadrature::{Method, QuadConfig, SPResult};
