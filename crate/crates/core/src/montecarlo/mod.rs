//! Trajectory engines and ensemble estimators.
//!
//! Every trajectory j draws from its own ChaCha12 stream: the generator is
//! seeded from the root seed and then switched to stream j. Results are
//! therefore independent of how trajectories are spread over workers.

mod estimators;
mod hd;
mod telegrapher;

pub use estimators::{
    estimate_eb, estimate_msd, estimate_tamsd, histogram_pdf, histogram_pdf_range,
};
pub use hd::simulate_hd;
pub use telegrapher::{simulate_telegrapher, telegrapher_coordinate};

use crate::analytic::{Interpretation, ModelParams};
use crate::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Default floor used as effective λ when λ = 0 makes the drift or the
/// diffusivity singular at the origin.
pub const DEFAULT_REGULARIZATION: f64 = 1e-4;

/// Paths whose |x| exceeds this are truncated and flagged.
pub const OVERFLOW_GUARD: f64 = 1e100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub model: ModelParams,
    pub interpretation: Interpretation,
    pub dt: f64,
    pub t_end: f64,
    pub n_traj: usize,
    pub seed: u64,
    pub regularization: f64,
    /// Starting position.
    pub x0: f64,
    /// Keep every k-th step of the time grid (the last step is always kept).
    pub record_every: usize,
}

impl SimConfig {
    /// Config with α taken from `interpretation`, x₀ = 0, the default
    /// regularization and every step recorded.
    pub fn new(
        model: ModelParams,
        interpretation: Interpretation,
        dt: f64,
        t_end: f64,
        n_traj: usize,
        seed: u64,
    ) -> Result<Self> {
        let cfg = SimConfig {
            model: ModelParams {
                alpha: interpretation.alpha(),
                ..model
            },
            interpretation,
            dt,
            t_end,
            n_traj,
            seed,
            regularization: DEFAULT_REGULARIZATION,
            x0: 0.0,
            record_every: 1,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_record_every(mut self, k: usize) -> Result<Self> {
        self.record_every = k;
        self.validate()?;
        Ok(self)
    }

    pub fn with_x0(mut self, x0: f64) -> Result<Self> {
        self.x0 = x0;
        self.validate()?;
        Ok(self)
    }

    pub fn with_regularization(mut self, r: f64) -> Result<Self> {
        self.regularization = r;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        if self.model.alpha != self.interpretation.alpha() {
            return Err(Error::domain(format!(
                "model α = {} disagrees with the {:?} interpretation (α = {})",
                self.model.alpha,
                self.interpretation,
                self.interpretation.alpha()
            )));
        }
        if !(self.dt > 0.0 && self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::domain("dt and t_end must be positive"));
        }
        if self.dt > self.t_end / 100.0 * (1.0 + 1e-12) {
            return Err(Error::domain(format!(
                "dt must be ≤ t_end/100, got dt = {}, t_end = {}",
                self.dt, self.t_end
            )));
        }
        if self.n_traj == 0 || self.record_every == 0 {
            return Err(Error::domain("n_traj and record_every must be ≥ 1"));
        }
        if !(self.regularization >= 0.0) || !self.regularization.is_finite() || !self.x0.is_finite()
        {
            return Err(Error::domain("regularization must be ≥ 0 and x0 finite"));
        }
        Ok(())
    }

    fn n_steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }

    /// Indices of recorded steps and their times.
    fn record_grid(&self) -> (Vec<usize>, Arc<[f64]>) {
        let n = self.n_steps();
        let mut idx: Vec<usize> = (0..=n).step_by(self.record_every).collect();
        if *idx.last().unwrap() != n {
            idx.push(n);
        }
        let times: Vec<f64> = idx.iter().map(|&i| i as f64 * self.dt).collect();
        (idx, times.into())
    }
}

/// Which engine produced an ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Hd,
    Telegrapher,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Arc<[f64]>,
    pub positions: Vec<f64>,
    pub seed_stream: u64,
    /// The overflow guard fired; positions after it repeat the last finite value.
    pub truncated: bool,
}

#[derive(Debug, Clone)]
pub struct Ensemble {
    pub config: SimConfig,
    pub engine: Engine,
    pub times: Arc<[f64]>,
    pub trajectories: Vec<Trajectory>,
    /// Effective λ used by the integrator (equals λ unless the floor applied).
    pub regularization_used: f64,
}

impl Ensemble {
    pub fn truncated_count(&self) -> usize {
        self.trajectories.iter().filter(|t| t.truncated).count()
    }

    /// Trajectories that finished without hitting the overflow guard.
    pub fn usable(&self) -> impl Iterator<Item = &Trajectory> {
        self.trajectories.iter().filter(|t| !t.truncated)
    }

    /// Index of `t` in the recorded times.
    pub fn time_index(&self, t: f64) -> Result<usize> {
        self.times
            .iter()
            .position(|&s| (s - t).abs() <= 1e-9 * t.abs().max(1.0))
            .ok_or_else(|| Error::precondition(format!("t = {t} is not a recorded sample time")))
    }
}

/// Generator for trajectory `stream` under root `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
