//! Heterogeneous diffusion and heterogeneous Cattaneo–Vernotte (telegrapher)
//! transport with the position-dependent diffusivity
//! `D(x) = B (λ + |x|)^(2 − 2/β)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: gamma-family helpers, three-parameter Mittag-Leffler,
//!   real-order modified Bessel functions, Gauss hypergeometric, erfc.
//! * [`quadrature`]: adaptive Gauss–Kronrod integration used throughout.
//! * [`laplace`]: Gaver–Stehfest inversion on the real axis.
//! * [`analytic`]: closed-form densities, moments, MSD, autocorrelation,
//!   TA-MSD and the identity checks (ODE residual, complete monotonicity).
//! * [`montecarlo`]: Euler–Maruyama heterogeneous diffusion, exact
//!   dichotomous-noise telegrapher paths, ensemble estimators.
//! * [`voter`]: noisy voter model rates, agent and Langevin simulation,
//!   and the transform linking it to heterogeneous diffusion.
//! * [`validation`]: the cross-validation suite shared by the acceptance
//!   tests and the `validate` CLI command.

pub mod analytic;
mod error;
pub mod laplace;
pub mod montecarlo;
pub mod quadrature;
pub mod specfun;
pub mod stats;
pub mod validation;
pub mod voter;

pub use error::{Error, Result};

/// Library version echoed into run metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
