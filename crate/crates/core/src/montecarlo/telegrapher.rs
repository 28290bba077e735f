//! Dichotomous-noise telegrapher paths ẋ = υ(x)η(t), integrated exactly in
//! the signed coordinate y = sign(x)·β[(λ+|x|)^(1/β) − λ^(1/β)], where the
//! motion is ballistic at speed ±υ between Poisson sign flips of rate 1/(2τ).

use super::{stream_rng, Engine, Ensemble, SimConfig, Trajectory};
use crate::analytic::{front_position, y_coordinate, Interpretation, ModelParams};
use crate::{Error, Result};
use rand::Rng;
use rand_distr::Exp;
use rayon::prelude::*;

/// Signed transformed coordinate of x.
pub fn telegrapher_coordinate(p: &ModelParams, x: f64) -> f64 {
    y_coordinate(p, x) * x.signum()
}

fn position(p: &ModelParams, y: f64) -> f64 {
    front_position(p, 1.0, y.abs()) * y.signum()
}

pub fn simulate_telegrapher(cfg: &SimConfig) -> Result<Ensemble> {
    cfg.validate()?;
    let p = cfg.model;
    let tau = p.require_tau()?;
    if cfg.interpretation != Interpretation::Stratonovich {
        return Err(Error::domain(format!(
            "the telegrapher Langevin dynamics holds only for α = 1/2, got α = {}",
            p.alpha
        )));
    }
    let ups = p.upsilon()?;
    let flips = Exp::new(1.0 / (2.0 * tau)).map_err(|e| Error::domain(e.to_string()))?;
    let y0 = telegrapher_coordinate(&p, cfg.x0);
    let (_, times) = cfg.record_grid();
    let trajectories = (0..cfg.n_traj as u64)
        .into_par_iter()
        .map(|j| {
            let mut rng = stream_rng(cfg.seed, j);
            let mut v = if rng.random::<bool>() { ups } else { -ups };
            let (mut t, mut y) = (0.0, y0);
            let mut next_flip: f64 = rng.sample(flips);
            let mut positions = Vec::with_capacity(times.len());
            for &target in times.iter() {
                while next_flip <= target {
                    y += v * (next_flip - t);
                    t = next_flip;
                    v = -v;
                    next_flip = t + rng.sample(flips);
                }
                y += v * (target - t);
                t = target;
                positions.push(if y == y0 { cfg.x0 } else { position(&p, y) });
            }
            Trajectory {
                times: times.clone(),
                positions,
                seed_stream: j,
                truncated: false,
            }
        })
        .collect();
    Ok(Ensemble {
        config: *cfg,
        engine: Engine::Telegrapher,
        times,
        trajectories,
        regularization_used: p.lambda,
    })
}
