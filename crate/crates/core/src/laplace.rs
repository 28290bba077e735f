//! Gaver–Stehfest inversion of Laplace images on the real axis.
//!
//! f(t) ≈ (ln 2 / t) Σₖ Vₖ F(k ln 2 / t), k = 1..N.
//!
//! Images whose time signal vanishes before an arrival time t_a can be
//! supplied pre-shifted: `eval` then returns e^(s·t_a) F(s), `delay` is
//! t_a, and the inversion evaluates the shifted signal at t − t_a. This
//! moves a jump at the front to the origin, where the weights (Σ Vₖ = 0)
//! are blind to it.

use crate::{Error, Result};
use std::f64::consts::LN_2;

/// Default number of Stehfest terms in double precision.
pub const DEFAULT_TERMS: usize = 14;

/// Convergence diagnostic above which a point is flagged.
pub const DIAGNOSTIC_THRESHOLD: f64 = 1e-4;

type ImageFn<'a> = dyn Fn(f64) -> Result<f64> + Send + Sync + 'a;

/// A real-axis Laplace image.
pub struct LaplaceImage<'a> {
    eval: Box<ImageFn<'a>>,
    /// Smallest admissible s.
    pub domain_floor: f64,
    /// Arrival time folded into `eval` (0 for an unshifted image).
    pub delay: f64,
}

impl<'a> LaplaceImage<'a> {
    pub fn new(eval: impl Fn(f64) -> Result<f64> + Send + Sync + 'a) -> Self {
        LaplaceImage {
            eval: Box::new(eval),
            domain_floor: 0.0,
            delay: 0.0,
        }
    }

    pub fn with_floor(mut self, floor: f64) -> Self {
        self.domain_floor = floor;
        self
    }

    /// Declares that `eval` already returns e^(s·delay) F(s).
    pub fn with_delay(mut self, delay: f64) -> Self {
        self.delay = delay;
        self
    }

    pub fn eval(&self, s: f64) -> Result<f64> {
        if !(s > 0.0) || s < self.domain_floor {
            return Err(Error::domain(format!(
                "image evaluated at s = {s} below floor {}",
                self.domain_floor
            )));
        }
        let v = (self.eval)(s)?;
        if !v.is_finite() {
            return Err(Error::Numerical(format!("image non-finite at s = {s}")));
        }
        Ok(v)
    }
}

/// Stehfest weights V₁..V_N.
pub fn stehfest_weights(n: usize) -> Result<Vec<f64>> {
    if n == 0 || n % 2 != 0 || n > 30 {
        return Err(Error::precondition(format!(
            "Stehfest order must be even and ≤ 30, got {n}"
        )));
    }
    let half = n / 2;
    let fact = |m: usize| -> f64 { (1..=m).map(|i| i as f64).product() };
    let weights = (1..=n)
        .map(|k| {
            let mut s = 0.0;
            for j in (k + 1) / 2..=k.min(half) {
                s += (j as f64).powi(half as i32) * fact(2 * j)
                    / (fact(half - j) * fact(j) * fact(j - 1) * fact(k - j) * fact(2 * j - k));
            }
            if (k + half) % 2 == 0 {
                s
            } else {
                -s
            }
        })
        .collect();
    Ok(weights)
}

fn check_terms(n: usize) -> Result<()> {
    if n % 2 != 0 || !(8..=20).contains(&n) {
        return Err(Error::precondition(format!(
            "n_terms must be even and in [8, 20], got {n}"
        )));
    }
    Ok(())
}

fn gs_raw(f: &LaplaceImage, u: f64, n: usize) -> Result<f64> {
    let w = stehfest_weights(n)?;
    let scale = LN_2 / u;
    let mut sum = 0.0;
    for (k, vk) in w.iter().enumerate() {
        sum += vk * f.eval((k + 1) as f64 * scale)?;
    }
    let v = scale * sum;
    if v.is_nan() {
        return Err(Error::Numerical(format!(
            "Gaver-Stehfest sum is NaN at t = {u}"
        )));
    }
    Ok(v)
}

/// Gaver–Stehfest estimate of f(t).
pub fn invert_gaver_stehfest(f: &LaplaceImage, t: f64, n_terms: usize) -> Result<f64> {
    check_terms(n_terms)?;
    if !(t > 0.0) {
        return Err(Error::domain(format!(
            "inversion time must be positive, got {t}"
        )));
    }
    let u = t - f.delay;
    if u <= 0.0 {
        return Ok(0.0);
    }
    gs_raw(f, u, n_terms)
}

/// One inverted grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inversion {
    pub t: f64,
    pub value: f64,
    /// |f_N(t) − f_(N−2)(t)|.
    pub diagnostic: f64,
}

impl Inversion {
    pub fn flagged(&self) -> bool {
        !(self.diagnostic <= DIAGNOSTIC_THRESHOLD)
    }
}

/// Elementwise inversion with the N versus N−2 diagnostic.
pub fn invert_on_grid(f: &LaplaceImage, times: &[f64], n_terms: usize) -> Result<Vec<Inversion>> {
    check_terms(n_terms)?;
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::precondition("times must be strictly increasing"));
    }
    times
        .iter()
        .map(|&t| {
            let value = invert_gaver_stehfest(f, t, n_terms)?;
            let u = t - f.delay;
            let coarse = if u > 0.0 {
                gs_raw(f, u, n_terms - 2)?
            } else {
                0.0
            };
            Ok(Inversion {
                t,
                value,
                diagnostic: (value - coarse).abs(),
            })
        })
        .collect()
}
