//! Ensemble MSD, time-averaged MSD, ergodicity-breaking ratio and histograms.

use super::{Engine, Ensemble, Trajectory};
use crate::analytic::{
    fit_loglog_slope, support_interval, FrontKind, MsdCurve, PdfResult, LONG_WINDOW, SHORT_WINDOW,
};
use crate::{Error, Result};

/// Samples this close to the support edge (relative) are front atoms.
const FRONT_REL: f64 = 1e-9;

fn sample_at(e: &Ensemble, t: f64) -> Result<Vec<f64>> {
    let i = e.time_index(t)?;
    let xs: Vec<f64> = e.usable().map(|tr| tr.positions[i]).collect();
    if xs.is_empty() {
        return Err(Error::domain("empty ensemble"));
    }
    Ok(xs)
}

/// Ensemble ⟨x²(t)⟩ with standard errors. For telegrapher ensembles the
/// exponents are fitted over the requested times inside the short and long
/// windows (NaN when fewer than two fall inside); otherwise both are the
/// slope over all requested times.
pub fn estimate_msd(e: &Ensemble, times: &[f64]) -> Result<MsdCurve> {
    let mut msd = Vec::with_capacity(times.len());
    let mut std_err = Vec::with_capacity(times.len());
    for &t in times {
        let xs = sample_at(e, t)?;
        let n = xs.len() as f64;
        let mean = xs.iter().map(|x| x * x).sum::<f64>() / n;
        let var = if xs.len() > 1 {
            xs.iter().map(|x| (x * x - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        msd.push(mean);
        std_err.push((var / n).sqrt());
    }
    let (exponent_short, exponent_long) = match e.engine {
        Engine::Telegrapher => {
            let tau = e.config.model.tau;
            let window = |w: (f64, f64)| {
                let (ts, vs): (Vec<f64>, Vec<f64>) = times
                    .iter()
                    .zip(&msd)
                    .filter(|(t, _)| {
                        **t >= w.0 * tau * (1.0 - 1e-9) && **t <= w.1 * tau * (1.0 + 1e-9)
                    })
                    .map(|(t, v)| (*t, *v))
                    .unzip();
                fit_loglog_slope(&ts, &vs)
            };
            (window(SHORT_WINDOW), window(LONG_WINDOW))
        }
        Engine::Hd => {
            let s = fit_loglog_slope(times, &msd);
            (s, s)
        }
    };
    Ok(MsdCurve {
        times: times.to_vec(),
        msd,
        std_err,
        exponent_short,
        exponent_long,
    })
}

fn lag_steps(traj: &Trajectory, lag: f64) -> Result<usize> {
    let ts = &traj.times;
    if ts.len() < 2 {
        return Err(Error::domain("trajectory has fewer than two samples"));
    }
    let span = ts[ts.len() - 1] - ts[0];
    if !(lag > 0.0) || lag > span * (1.0 + 1e-12) {
        return Err(Error::domain(format!(
            "lag {lag} lies beyond the series length {span}"
        )));
    }
    if lag > span / 10.0 * (1.0 + 1e-12) {
        return Err(Error::precondition(format!(
            "TA-MSD needs lag ≤ T/10, got lag = {lag}, T = {span}"
        )));
    }
    let dt = ts[1] - ts[0];
    let k = (lag / dt).round() as usize;
    if k == 0 || (k as f64 * dt - lag).abs() > 1e-9 * lag {
        return Err(Error::precondition(format!(
            "lag {lag} is not a multiple of the sampling step {dt}"
        )));
    }
    Ok(k)
}

/// (T−𝔗)⁻¹ ∫₀^(T−𝔗) [x(t+𝔗) − x(t)]² dt by the trapezoid rule on the samples.
pub fn estimate_tamsd(traj: &Trajectory, lag: f64) -> Result<f64> {
    let k = lag_steps(traj, lag)?;
    let x = &traj.positions;
    let m = x.len() - k;
    let sq = |i: usize| (x[i + k] - x[i]).powi(2);
    if m == 1 {
        return Ok(sq(0));
    }
    let inner: f64 = (1..m - 1).map(sq).sum();
    Ok((inner + 0.5 * (sq(0) + sq(m - 1))) / (m - 1) as f64)
}

/// ⟨TA-MSD(𝔗, T)⟩ / ⟨x²(𝔗)⟩ over the usable trajectories, each truncated at T.
pub fn estimate_eb(e: &Ensemble, lag: f64, horizon: f64) -> Result<f64> {
    let end = e.time_index(horizon)?;
    let mut sum = 0.0;
    let mut n = 0usize;
    for tr in e.usable() {
        let cut = Trajectory {
            times: e.times[..=end].into(),
            positions: tr.positions[..=end].to_vec(),
            seed_stream: tr.seed_stream,
            truncated: false,
        };
        sum += estimate_tamsd(&cut, lag)?;
        n += 1;
    }
    if n == 0 {
        return Err(Error::domain("empty ensemble"));
    }
    let msd = estimate_msd(e, &[lag])?.msd[0];
    if !(msd > 0.0) {
        return Err(Error::domain(format!("ensemble MSD at lag {lag} is zero")));
    }
    Ok(sum / n as f64 / msd)
}

/// Normalized histogram at time t. Telegrapher ensembles are binned over
/// their support and samples sitting on the front are reported as atoms;
/// other ensembles are binned over ±max|x|.
pub fn histogram_pdf(e: &Ensemble, t: f64, bins: usize) -> Result<PdfResult> {
    let (lo, hi) = match e.engine {
        Engine::Telegrapher => support_interval(&e.config.model, t)?,
        Engine::Hd => {
            let m = sample_at(e, t)?.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
            if m > 0.0 {
                (-m, m)
            } else {
                (-0.5, 0.5)
            }
        }
    };
    histogram_pdf_range(e, t, bins, lo, hi)
}

/// Histogram on [lo, hi]. Front atoms of telegrapher ensembles are split off
/// first; samples outside [lo, hi] count towards the normalization only.
pub fn histogram_pdf_range(
    e: &Ensemble,
    t: f64,
    bins: usize,
    lo: f64,
    hi: f64,
) -> Result<PdfResult> {
    if bins < 10 {
        return Err(Error::precondition(format!(
            "histogram needs ≥ 10 bins, got {bins}"
        )));
    }
    if !(hi > lo) {
        return Err(Error::domain("histogram range must have hi > lo"));
    }
    let xs = sample_at(e, t)?;
    let n = xs.len() as f64;
    let front = match e.engine {
        Engine::Telegrapher => Some(support_interval(&e.config.model, t)?.1),
        Engine::Hd => None,
    };
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0u64; bins];
    let (mut left, mut right, mut outside) = (0u64, 0u64, 0u64);
    for &x in &xs {
        if let Some(xf) = front {
            if x.abs() >= xf * (1.0 - FRONT_REL) {
                if x > 0.0 {
                    right += 1;
                } else {
                    left += 1;
                }
                continue;
            }
        }
        let k = ((x - lo) / width).floor();
        if k >= 0.0 && (k as usize) < bins {
            counts[k as usize] += 1;
        } else if x == hi {
            counts[bins - 1] += 1;
        } else {
            outside += 1;
        }
    }
    let grid: Vec<f64> = (0..bins).map(|k| lo + (k as f64 + 0.5) * width).collect();
    let density: Vec<f64> = counts.iter().map(|&c| c as f64 / (n * width)).collect();
    let atoms = match front {
        Some(xf) => vec![(-xf, left as f64 / n), (xf, right as f64 / n)],
        None => vec![],
    };
    let mut warnings = vec![];
    if outside > 0 {
        warnings.push(format!("{outside} samples fall outside [{lo}, {hi}]"));
    }
    let mass = counts.iter().sum::<u64>() as f64 / n + atoms.iter().map(|a| a.1).sum::<f64>();
    Ok(PdfResult {
        grid,
        density,
        atoms,
        support: (lo, hi),
        front: if front.is_some() {
            FrontKind::Atom
        } else {
            FrontKind::None
        },
        singular_origin: false,
        mass,
        warnings,
    })
}
