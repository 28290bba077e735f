//! Noisy voter model: per-capita rates π±(n), the Fokker–Planck drift and
//! diffusion, agent-based and Langevin simulation, and the transform that
//! maps it onto heterogeneous diffusion.
//!
//! Time unit: the total event rate of the agent model is N(π⁺ + π⁻), one
//! expected update per agent per unit time. With x = n/N this gives
//! increments of mean F(x)dt and variance D(x)dt.

use crate::montecarlo::stream_rng;
use crate::{Error, Result};
use rand::Rng;
use rand_distr::{Exp, StandardNormal};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VoterParams {
    /// Number of agents N ≥ 2.
    #[serde(rename = "N")]
    pub n: u64,
    /// Noise-update probability A ∈ [0, 1].
    #[serde(rename = "A")]
    pub a: f64,
    /// Exponent of the return transform (may be negative).
    pub beta: f64,
}

impl VoterParams {
    pub fn new(n: u64, a: f64, beta: f64) -> Result<Self> {
        let p = VoterParams { n, a, beta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::domain(format!("N must be ≥ 2, got {}", self.n)));
        }
        if !(0.0..=1.0).contains(&self.a) {
            return Err(Error::domain(format!(
                "A must lie in [0, 1], got {}",
                self.a
            )));
        }
        if !self.beta.is_finite() {
            return Err(Error::domain("β must be finite"));
        }
        Ok(())
    }

    /// B = β²(1 − A)/(4N).
    pub fn b_voter(&self) -> f64 {
        self.beta * self.beta * (1.0 - self.a) / (4.0 * self.n as f64)
    }
}

/// (π⁺(n), π⁻(n)).
pub fn rates(p: &VoterParams, n: u64) -> Result<(f64, f64)> {
    if n > p.n {
        return Err(Error::domain(format!("n = {n} outside [0, {}]", p.n)));
    }
    let big = p.n as f64;
    let (up, down) = ((p.n - n) as f64 / big, n as f64 / big);
    Ok((
        up * (0.5 * p.a + (1.0 - p.a) * down),
        down * (0.5 * p.a + (1.0 - p.a) * up),
    ))
}

/// (F(x), D(x)) = ((A/2)(1 − 2x), A/(2N) + (2/N)(1 − A)x(1 − x)).
pub fn drift_diffusion(p: &VoterParams, x: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("x must lie in [0, 1], got {x}")));
    }
    let big = p.n as f64;
    Ok((
        0.5 * p.a * (1.0 - 2.0 * x),
        0.5 * p.a / big + 2.0 / big * (1.0 - p.a) * x * (1.0 - x),
    ))
}

/// π±(x) = (N·D(x) ± F(x))/2. Rounding-level negatives are clipped to 0.
pub fn rates_from_fp(
    d_fn: impl Fn(f64) -> f64,
    f_fn: impl Fn(f64) -> f64,
    n: u64,
    x: f64,
) -> Result<(f64, f64)> {
    let nd = n as f64 * d_fn(x);
    let f = f_fn(x);
    let (plus, minus) = (0.5 * (nd + f), 0.5 * (nd - f));
    let slack = 1e-12 * (nd.abs() + f.abs());
    if plus < -slack || minus < -slack || !plus.is_finite() || !minus.is_finite() {
        return Err(Error::domain(format!(
            "negative transition rate at x = {x}: N·D = {nd}, F = {f}"
        )));
    }
    Ok((plus.max(0.0), minus.max(0.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VoterMethod {
    Gillespie,
    /// Fixed step dt with jump probabilities N·π±·dt.
    Discrete {
        dt: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct VoterPath {
    pub times: Vec<f64>,
    pub counts: Vec<u64>,
    /// The path reached a state with zero total rate (A = 0 consensus).
    pub absorbed: bool,
}

impl VoterPath {
    /// n at time t (paths are piecewise constant, right-continuous).
    pub fn count_at(&self, t: f64) -> u64 {
        let i = self.times.partition_point(|&s| s <= t);
        self.counts[i.saturating_sub(1)]
    }
}

/// Agent-level path recording every event.
pub fn simulate_voter(
    p: &VoterParams,
    n0: u64,
    t_end: f64,
    seed: u64,
    method: VoterMethod,
) -> Result<VoterPath> {
    run_voter(p, n0, t_end, seed, 0, method, None)
}

/// As [`simulate_voter`] but recording n only at multiples of `sample_dt`,
/// on trajectory stream `stream` of `seed`.
pub fn simulate_voter_sampled(
    p: &VoterParams,
    n0: u64,
    t_end: f64,
    seed: u64,
    stream: u64,
    method: VoterMethod,
    sample_dt: f64,
) -> Result<VoterPath> {
    if !(sample_dt > 0.0) {
        return Err(Error::domain("sample_dt must be > 0"));
    }
    run_voter(p, n0, t_end, seed, stream, method, Some(sample_dt))
}

fn run_voter(
    p: &VoterParams,
    n0: u64,
    t_end: f64,
    seed: u64,
    stream: u64,
    method: VoterMethod,
    sample_dt: Option<f64>,
) -> Result<VoterPath> {
    p.validate()?;
    if n0 > p.n {
        return Err(Error::domain(format!("n0 = {n0} outside [0, {}]", p.n)));
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::domain("t_end must be > 0"));
    }
    let big = p.n as f64;
    let mut rng = stream_rng(seed, stream);
    let mut n = n0;
    let mut t = 0.0;
    let mut path = VoterPath {
        times: vec![0.0],
        counts: vec![n0],
        absorbed: false,
    };
    let mut next_sample = sample_dt.unwrap_or(f64::INFINITY);
    // record n for every sample time up to (excluding) `until`
    let flush = |path: &mut VoterPath, next_sample: &mut f64, until: f64, n: u64| {
        if let Some(h) = sample_dt {
            while *next_sample < until && *next_sample <= t_end * (1.0 + 1e-12) {
                path.times.push(*next_sample);
                path.counts.push(n);
                *next_sample = (path.times.len()) as f64 * h;
            }
        }
    };
    match method {
        VoterMethod::Gillespie => loop {
            let (up, down) = rates(p, n)?;
            let total = big * (up + down);
            if total == 0.0 {
                path.absorbed = true;
                flush(&mut path, &mut next_sample, f64::INFINITY, n);
                break;
            }
            let wait: f64 = rng.sample(Exp::new(total).map_err(|e| Error::domain(e.to_string()))?);
            if t + wait > t_end {
                flush(&mut path, &mut next_sample, f64::INFINITY, n);
                break;
            }
            t += wait;
            flush(&mut path, &mut next_sample, t, n);
            n = if rng.random::<f64>() * (up + down) < up {
                n + 1
            } else {
                n - 1
            };
            if sample_dt.is_none() {
                path.times.push(t);
                path.counts.push(n);
            }
        },
        VoterMethod::Discrete { dt } => {
            if !(dt > 0.0) {
                return Err(Error::domain("discrete voter step dt must be > 0"));
            }
            let steps = (t_end / dt).round() as u64;
            for k in 1..=steps {
                let (up, down) = rates(p, n)?;
                let (pu, pd) = (big * up * dt, big * down * dt);
                if pu + pd > 1.0 {
                    return Err(Error::domain(format!(
                        "discrete voter step too large: jump probability {} > 1",
                        pu + pd
                    )));
                }
                if pu + pd == 0.0 {
                    path.absorbed = true;
                }
                let r: f64 = rng.random();
                let m = if r < pu {
                    n + 1
                } else if r < pu + pd {
                    n - 1
                } else {
                    n
                };
                t = k as f64 * dt;
                if sample_dt.is_some() {
                    flush(&mut path, &mut next_sample, t, n);
                } else if m != n {
                    path.times.push(t);
                    path.counts.push(m);
                }
                n = m;
            }
            flush(&mut path, &mut next_sample, f64::INFINITY, n);
        }
    }
    Ok(path)
}

/// y = [x/(1 − x)]^(β/2).
pub fn transform_return(x: f64, beta: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::domain(format!(
            "transform_return needs x in (0, 1), got {x}"
        )));
    }
    Ok((x / (1.0 - x)).powf(0.5 * beta))
}

/// F(z) = −Aβ²/(2z).
pub fn bessel_force(z: f64, p: &VoterParams) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::domain(format!("bessel_force needs z > 0, got {z}")));
    }
    Ok(-p.a * p.beta * p.beta / (2.0 * z))
}

/// V(z) = (Aβ²/2) ln z, with F = −V′.
pub fn bessel_potential(z: f64, p: &VoterParams) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::domain(format!(
            "bessel_potential needs z > 0, got {z}"
        )));
    }
    Ok(0.5 * p.a * p.beta * p.beta * z.ln())
}

/// Drifts of the two regimes of ẏ = ẏ₊ + ẏ₋ at y:
/// (−(A|β|/2) y^(1+2/|β|), −(A|β|/2) y^(1−2/|β|)), upper then lower sign.
pub fn regime_drifts(y: f64, p: &VoterParams) -> Result<(f64, f64)> {
    let b = p.beta.abs();
    if !(y > 0.0) || b == 0.0 {
        return Err(Error::domain("regime drifts need y > 0 and β ≠ 0"));
    }
    let c = -0.5 * p.a * b;
    Ok((c * y.powf(1.0 + 2.0 / b), c * y.powf(1.0 - 2.0 / b)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LangevinPath {
    pub times: Vec<f64>,
    pub x: Vec<f64>,
}

/// Euler–Maruyama for dx = F(x)dt + √D(x) dW with (F, D) from
/// [`drift_diffusion`], reflected into (ε, 1 − ε), ε = 1/(2N).
/// Every `record_every`-th step is kept.
pub fn simulate_voter_langevin(
    p: &VoterParams,
    x0: f64,
    dt: f64,
    t_end: f64,
    seed: u64,
) -> Result<LangevinPath> {
    simulate_voter_langevin_sampled(p, x0, dt, t_end, seed, 0, 1)
}

pub fn simulate_voter_langevin_sampled(
    p: &VoterParams,
    x0: f64,
    dt: f64,
    t_end: f64,
    seed: u64,
    stream: u64,
    record_every: usize,
) -> Result<LangevinPath> {
    p.validate()?;
    if !(x0 > 0.0 && x0 < 1.0) {
        return Err(Error::domain(format!("x0 must lie in (0, 1), got {x0}")));
    }
    if !(dt > 0.0 && t_end > dt) || record_every == 0 {
        return Err(Error::domain("need 0 < dt < t_end and record_every ≥ 1"));
    }
    let eps = 0.5 / p.n as f64;
    let (lo, hi) = (eps, 1.0 - eps);
    let mut rng = stream_rng(seed, stream);
    let steps = (t_end / dt).round() as usize;
    let mut path = LangevinPath {
        times: vec![0.0],
        x: vec![x0],
    };
    let mut x = x0.clamp(lo, hi);
    for k in 1..=steps {
        let (f, d) = drift_diffusion(p, x)?;
        let z: f64 = rng.sample(StandardNormal);
        x += f * dt + (d * dt).sqrt() * z;
        // reflect (repeatedly, in case a step overshoots the whole interval)
        while x < lo || x > hi {
            x = if x < lo { 2.0 * lo - x } else { 2.0 * hi - x };
        }
        if k % record_every == 0 || k == steps {
            path.times.push(k as f64 * dt);
            path.x.push(x);
        }
    }
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_rates() {
        let p = VoterParams::new(10, 0.3, 2.0).unwrap();
        assert_eq!(rates(&p, 0).unwrap(), (0.15, 0.0));
        assert_eq!(rates(&p, 10).unwrap(), (0.0, 0.15));
        let (a, b) = rates(&p, 5).unwrap();
        assert!((a - 0.25).abs() < 1e-15 && (b - 0.25).abs() < 1e-15);
        assert!(rates(&p, 11).is_err());
    }

    #[test]
    fn sampled_gillespie_is_on_grid() {
        let p = VoterParams::new(50, 0.5, 2.0).unwrap();
        let s = simulate_voter_sampled(&p, 25, 10.0, 1, 0, VoterMethod::Gillespie, 0.5).unwrap();
        assert_eq!(s.times.len(), 21);
        for (i, t) in s.times.iter().enumerate() {
            assert!((t - 0.5 * i as f64).abs() < 1e-12);
        }
        let full = simulate_voter(&p, 25, 10.0, 1, VoterMethod::Gillespie).unwrap();
        for (t, n) in s.times.iter().zip(&s.counts) {
            assert_eq!(full.count_at(*t), *n);
        }
    }
}
