//! Moments, MSDs, the heterogeneous-diffusion autocorrelation and the
//! time-averaged MSD.

use super::pdf::cv_cont;
use super::{ModelParams, MsdCurve};
use crate::quadrature::tanh_sinh;
use crate::specfun::{hyp2f1, ln_gamma, mittag_leffler3, MlParams};
use crate::{Error, Result};
use std::f64::consts::PI;

/// Short-time fit window, in units of τ.
pub const SHORT_WINDOW: (f64, f64) = (1e-3, 1e-2);
/// Long-time fit window, in units of τ.
pub const LONG_WINDOW: (f64, f64) = (1e2, 1e3);
const FIT_POINTS: usize = 25;

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("t must be > 0, got {t}")))
    }
}

/// E^c_{1,b}(−t/τ).
fn ml1(b: f64, c: f64, x: f64) -> Result<f64> {
    mittag_leffler3(&MlParams::new(1.0, b, c)?, x)
}

/// Least-squares slope of ln v against ln t.
pub fn fit_loglog_slope(ts: &[f64], vs: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = ts
        .iter()
        .zip(vs)
        .filter(|(t, v)| **t > 0.0 && **v > 0.0)
        .map(|(t, v)| (t.ln(), v.ln()))
        .collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return f64::NAN;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Even moment ⟨x^(2m)(t)⟩ of the λ = 0 CV solution.
pub fn moments_lambda0(p: &ModelParams, m: u32, t: f64) -> Result<f64> {
    p.require_lambda0()?;
    p.require_nu_below_one()?;
    check_t(t)?;
    if m == 0 {
        return Err(Error::domain("moment order m must be ≥ 1"));
    }
    let ups = p.upsilon()?;
    let (b, nu) = (p.beta, p.nu());
    let bm = b * m as f64;
    if !(1.0 + bm - nu > 0.0) {
        return Err(Error::domain(format!(
            "Γ(1 + βm − ν) has a pole or sign change at βm − ν = {}",
            bm - nu
        )));
    }
    let ln_c = 2.0 * bm * (2.0 * ups / b).ln() + ln_gamma(1.0 + bm) + ln_gamma(1.0 + bm - nu)
        - ln_gamma(1.0 - nu)
        + 2.0 * bm * t.ln();
    Ok(ln_c.exp() * ml1(1.0 + 2.0 * bm, bm, -t / p.tau)?)
}

/// MSD of the λ = 0 CV solution with log-log slopes fitted over the
/// [`SHORT_WINDOW`] and [`LONG_WINDOW`] decades.
pub fn msd_cv(p: &ModelParams, times: &[f64]) -> Result<MsdCurve> {
    let msd = times
        .iter()
        .map(|&t| moments_lambda0(p, 1, t))
        .collect::<Result<Vec<_>>>()?;
    let fit = |w: (f64, f64)| -> Result<f64> {
        let ts: Vec<f64> = (0..FIT_POINTS)
            .map(|i| p.tau * w.0 * (w.1 / w.0).powf(i as f64 / (FIT_POINTS - 1) as f64))
            .collect();
        let vs = ts
            .iter()
            .map(|&t| moments_lambda0(p, 1, t))
            .collect::<Result<Vec<_>>>()?;
        Ok(fit_loglog_slope(&ts, &vs))
    };
    Ok(MsdCurve {
        times: times.to_vec(),
        msd,
        std_err: vec![],
        exponent_short: fit(SHORT_WINDOW)?,
        exponent_long: fit(LONG_WINDOW)?,
    })
}

/// MSD of heterogeneous diffusion, (2/β)^(2β) Γ(1+β−ν)/Γ(1−ν) (Bt)^β.
pub fn msd_hd(p: &ModelParams, t: f64) -> Result<f64> {
    p.require_lambda0()?;
    p.require_nu_below_one()?;
    if !(t >= 0.0) {
        return Err(Error::domain(format!("t must be ≥ 0, got {t}")));
    }
    let (b, nu) = (p.beta, p.nu());
    let ln_c = 2.0 * b * (2.0 / b).ln() + ln_gamma(1.0 + b - nu) - ln_gamma(1.0 - nu);
    Ok(ln_c.exp() * (p.b * t).powf(b))
}

/// ∫_ℝ g(|y|) P_CV(y, t) dy including both front atoms.
fn cv_expectation(ups: f64, tau: f64, t: f64, g: impl Fn(f64) -> f64) -> Result<f64> {
    let vt = ups * t;
    let q = tanh_sinh(
        |y, _, w| g(y) * cv_cont(ups, tau, t, w).unwrap_or(f64::NAN),
        0.0,
        vt,
        1e-13,
        1e-11,
    )?;
    Ok(2.0 * q.value + (-t / (2.0 * tau)).exp() * g(vt))
}

/// MSD of the λ ≥ 0, ν = 1/2 solution for β ∈ {1/2, 3/2}: closed
/// Prabhakar terms plus a quadrature over the CV density.
pub fn msd_lambda(p: &ModelParams, t: f64) -> Result<f64> {
    if !p.nu_is_half() {
        return Err(Error::domain(format!(
            "msd_lambda needs α = 1/2 (ν = 1/2), got ν = {}",
            p.nu()
        )));
    }
    check_t(t)?;
    let tau = p.require_tau()?;
    let ups = p.upsilon()?;
    let (l, b) = (p.lambda, p.beta);
    let r = -t / tau;
    let vt = ups * t;
    if (b - 0.5).abs() < super::SPECIAL_TOL {
        let j = cv_expectation(ups, tau, t, |y| (2.0 * y + l * l).sqrt())?;
        Ok(2.0 * vt * ml1(2.0, 0.5, r)? + 2.0 * l * l - 2.0 * l * j)
    } else if (b - 1.5).abs() < super::SPECIAL_TOL {
        let l23 = l.powf(2.0 / 3.0);
        let j = cv_expectation(ups, tau, t, |y| (2.0 * y / 3.0 + l23).powf(1.5))?;
        Ok(16.0 / 9.0 * vt.powi(3) * ml1(4.0, 1.5, r)?
            + 8.0 / 3.0 * l23 * vt * vt * ml1(3.0, 1.0, r)?
            + 2.0 * l23 * l23 * vt * ml1(2.0, 0.5, r)?
            + 2.0 * l * l
            - 2.0 * l * j)
    } else {
        Err(Error::domain(format!(
            "msd_lambda is closed only for β ∈ {{1/2, 3/2}}, got {b}"
        )))
    }
}

fn require_stratonovich_hd(p: &ModelParams) -> Result<()> {
    p.require_lambda0()?;
    if !p.nu_is_half() {
        return Err(Error::domain(format!(
            "the heterogeneous-diffusion autocorrelation needs α = 1/2 (ν = 1/2), got ν = {}",
            p.nu()
        )));
    }
    Ok(())
}

/// ⟨x(t₁)x(t₂)⟩ of heterogeneous diffusion (λ = 0, α = 1/2), 0 < t₁ < t₂.
pub fn autocorrelation_hd(p: &ModelParams, t1: f64, t2: f64) -> Result<f64> {
    require_stratonovich_hd(p)?;
    if !(t1 > 0.0 && t2 > t1 && t2.is_finite()) {
        return Err(Error::domain(format!(
            "autocorrelation needs 0 < t1 < t2, got ({t1}, {t2})"
        )));
    }
    let (b, bb) = (p.beta, p.b);
    let ln_pre = b * 2f64.ln() - 0.5 * PI.ln() + ln_gamma(1.0 + b) + ln_gamma(1.0 + b / 2.0)
        - 2.0 * b * b.ln()
        - ln_gamma((1.0 + b) / 2.0);
    let d = t2 - t1;
    let f = hyp2f1((1.0 - b) / 2.0, 1.0 + b / 2.0, 1.5, -t1 / d)?;
    let ln_pow = (1.0 + b) / 2.0 * (bb * t1).ln() + (b - 1.0) / 2.0 * (bb * d).ln();
    Ok(2.0 * (ln_pre + ln_pow).exp() * f)
}

/// Leading-order TA-MSD Γ(1/2+β)/√π (2/β)^(2β) B^β 𝔗/T^(1−β), for 𝔗 ≤ T/10.
pub fn tamsd_hd(p: &ModelParams, lag: f64, horizon: f64) -> Result<f64> {
    require_stratonovich_hd(p)?;
    if !(lag > 0.0) || !(lag <= horizon / 10.0) {
        return Err(Error::precondition(format!(
            "tamsd_hd needs 0 < lag ≤ horizon/10, got lag = {lag}, horizon = {horizon}"
        )));
    }
    let b = p.beta;
    let ln_c = ln_gamma(0.5 + b) - 0.5 * PI.ln() + 2.0 * b * (2.0 / b).ln() + b * p.b.ln();
    Ok(ln_c.exp() * lag / horizon.powf(1.0 - b))
}

/// TA-MSD from the exact MSD and autocorrelation,
/// (T−𝔗)⁻¹ ∫₀^(T−𝔗) [⟨x²(t+𝔗)⟩ + ⟨x²(t)⟩ − 2⟨x(t)x(t+𝔗)⟩] dt.
pub fn tamsd_exact_hd(p: &ModelParams, lag: f64, horizon: f64) -> Result<f64> {
    require_stratonovich_hd(p)?;
    if !(lag > 0.0 && lag < horizon && horizon.is_finite()) {
        return Err(Error::precondition(format!(
            "tamsd_exact_hd needs 0 < lag < horizon, got lag = {lag}, horizon = {horizon}"
        )));
    }
    let span = horizon - lag;
    let q = tanh_sinh(
        |t, _, _| {
            let v = msd_hd(p, t + lag).and_then(|a| {
                let c = autocorrelation_hd(p, t, t + lag)?;
                Ok(a + msd_hd(p, t)? - 2.0 * c)
            });
            v.unwrap_or(f64::NAN)
        },
        0.0,
        span,
        1e-12,
        1e-10,
    )?;
    Ok(q.value / span)
}
