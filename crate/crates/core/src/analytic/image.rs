//! Laplace-space solution P̂(x, s), the Bessel-type ODE it solves, and a
//! finite-difference test of complete monotonicity.

use super::{y_coordinate, ModelParams};
use crate::laplace::LaplaceImage;
use crate::specfun::{bessel_k_scaled, ln_gamma};
use crate::{Error, Result};

fn ln_hat(p: &ModelParams, x: f64, s: f64, shifted: bool) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::domain(format!("pdf_cv_hat needs s > 0, got {s}")));
    }
    let tau = p.require_tau()?;
    let ups = p.upsilon()?;
    let (nu, a, b) = (p.nu(), p.a(), p.beta);
    let q = (s * s + s / tau).sqrt();
    let y = y_coordinate(p, x);
    // exponent −(y/υ)q, or −(y/υ)(q − s) after the front shift
    let expo = if shifted {
        -(y / ups) * (s / tau) / (q + s)
    } else {
        -(y / ups) * q
    };
    let ln_ratio = (s + 1.0 / tau).ln() - q.ln();
    if p.lambda > 0.0 {
        let z2 = b / ups * p.lambda.powf(1.0 / b) * q;
        let z1 = z2 + y / ups * q;
        Ok((nu - 1.0) / b * p.lambda.ln() - (2.0 * ups).ln()
            + a * (p.lambda + x.abs()).ln()
            + ln_ratio
            + bessel_k_scaled(nu, z1)?.ln()
            - bessel_k_scaled(nu - 1.0, z2)?.ln()
            + expo)
    } else {
        p.require_nu_below_one()?;
        if x == 0.0 {
            return Err(Error::domain("the λ = 0 image is singular at x = 0"));
        }
        let z1 = y / ups * q;
        Ok(
            (1.0 - nu) * (b / (2.0 * ups)).ln() + a * x.abs().ln() - ups.ln() - ln_gamma(1.0 - nu)
                + (s + 1.0 / tau).ln()
                - 0.5 * nu * (s * s + s / tau).ln()
                + bessel_k_scaled(nu, z1)?.ln()
                + expo,
        )
    }
}

/// Laplace-space solution P̂_{λ,β}(α; x, s). λ = 0 uses the K_{ν−1}
/// small-argument limit and needs ν < 1 and x ≠ 0.
pub fn pdf_cv_hat(p: &ModelParams, x: f64, s: f64) -> Result<f64> {
    let v = ln_hat(p, x, s, false)?.exp();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Numerical(format!("P̂ overflows at x = {x}, s = {s}")))
    }
}

/// e^(s·y/υ) P̂(x, s): the image of the density seen from the front arrival time y/υ.
pub fn pdf_cv_hat_shifted(p: &ModelParams, x: f64, s: f64) -> Result<f64> {
    let v = ln_hat(p, x, s, true)?.exp();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Numerical(format!(
            "shifted P̂ overflows at x = {x}, s = {s}"
        )))
    }
}

/// Front-shifted image of P̂(x, ·) ready for Gaver–Stehfest inversion.
pub fn pdf_cv_hat_image(p: &ModelParams, x: f64) -> Result<LaplaceImage<'static>> {
    p.validate()?;
    let ups = p.upsilon()?;
    if p.lambda == 0.0 {
        p.require_nu_below_one()?;
        if x == 0.0 {
            return Err(Error::domain("the λ = 0 image is singular at x = 0"));
        }
    }
    let delay = y_coordinate(p, x) / ups;
    let q = *p;
    Ok(LaplaceImage::new(move |s| pdf_cv_hat_shifted(&q, x, s)).with_delay(delay))
}

/// Normalized residual of the Bessel-type ODE for F̂(X, s) = (λ+X)^a K_ν(...).
/// Derivatives use 8th-order central differences with step 0.02ℓ, ℓ being
/// the local variation length of ln F̂.
pub fn ode_residual(p: &ModelParams, x_big: f64, s: f64) -> Result<f64> {
    ode_residual_with_order(p, x_big, s, p.nu())
}

/// As [`ode_residual`] with the Bessel order of F̂ replaced by `nu`.
pub fn ode_residual_with_order(p: &ModelParams, x_big: f64, s: f64, nu: f64) -> Result<f64> {
    if !(p.lambda > 0.0) || !(x_big > 0.0) || !(s > 0.0) {
        return Err(Error::domain("ode_residual needs λ > 0, X > 0 and s > 0"));
    }
    let (l, b, a, al, bb, tau) = (p.lambda, p.beta, p.a(), p.alpha, p.b, p.tau);
    let root = ((tau * s * s + s) / bb).sqrt();
    let xi0 = l + x_big;
    let ln_f = |xx: f64| -> Result<f64> {
        let xi = l + xx;
        let z = b * xi.powf(1.0 / b) * root;
        Ok(a * xi.ln() + bessel_k_scaled(nu, z)?.ln() - z)
    };
    let z0 = b * xi0.powf(1.0 / b) * root;
    let ell = xi0 / (1.0 + a.abs() + nu.abs() + z0 / b);
    let h = 0.02 * ell;
    let f0l = ln_f(x_big)?;
    let mut g = [0.0; 9];
    for (k, gk) in g.iter_mut().enumerate() {
        let off = k as f64 - 4.0;
        *gk = (ln_f(x_big + off * h)? - f0l).exp();
    }
    let d = |k: usize| g[4 + k] - g[4 - k];
    let sm = |k: usize| g[4 + k] + g[4 - k];
    let f1 = (0.8 * d(1) - 0.2 * d(2) + 4.0 / 105.0 * d(3) - 1.0 / 280.0 * d(4)) / h;
    let f2 = (-205.0 / 72.0 * g[4] + 1.6 * sm(1) - 0.2 * sm(2) + 8.0 / 315.0 * sm(3)
        - 1.0 / 560.0 * sm(4))
        / (h * h);
    let c1 = 2.0 * (al + 1.0) * (b - 1.0) / (b * xi0);
    let c0 = 2.0 * al * (b - 1.0) * (b - 2.0) / (b * b * xi0 * xi0)
        - (tau * s * s + s) / (bb * xi0.powf(2.0 - 2.0 / b));
    let terms = [f2, c1 * f1, c0 * g[4]];
    let scale = terms.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    Ok((terms[0] + terms[1] + terms[2]).abs() / scale)
}

/// True iff the divided differences of `f` on `s_grid` alternate in sign
/// (−1)^k through `order`, up to the propagated rounding bound.
pub fn cm_check_image(
    f: impl Fn(f64) -> Result<f64>,
    s_grid: &[f64],
    order: usize,
) -> Result<bool> {
    if order == 0 || s_grid.len() < order + 1 {
        return Err(Error::precondition(format!(
            "cm_check needs order ≥ 1 and at least order + 1 = {} grid points",
            order + 1
        )));
    }
    if s_grid.windows(2).any(|w| !(w[1] > w[0])) || !(s_grid[0] > 0.0) {
        return Err(Error::precondition(
            "cm_check needs a positive, strictly increasing s grid",
        ));
    }
    let mut d: Vec<f64> = s_grid.iter().map(|&s| f(s)).collect::<Result<_>>()?;
    let mut err: Vec<f64> = d.iter().map(|v| 4.0 * f64::EPSILON * v.abs()).collect();
    for k in 1..=order {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let mut nd = Vec::with_capacity(d.len() - 1);
        let mut ne = Vec::with_capacity(d.len() - 1);
        for i in 0..d.len() - 1 {
            let gap = s_grid[i + k] - s_grid[i];
            nd.push((d[i + 1] - d[i]) / gap);
            ne.push((err[i + 1] + err[i]) / gap);
        }
        if nd.iter().zip(&ne).any(|(v, e)| sign * v < -e) {
            return Ok(false);
        }
        d = nd;
        err = ne;
    }
    Ok(true)
}

/// Complete-monotonicity check of s ↦ P̂(x, s) (needs 0 < ν ≤ 3/2).
pub fn cm_check(p: &ModelParams, x: f64, s_grid: &[f64], order: usize) -> Result<bool> {
    if !p.valid_cmf() {
        return Err(Error::precondition(format!(
            "cm_check needs 0 < ν ≤ 3/2, got ν = {}",
            p.nu()
        )));
    }
    cm_check_image(|s| pdf_cv_hat(p, x, s), s_grid, order)
}
