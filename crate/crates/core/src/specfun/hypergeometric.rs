//! Gauss hypergeometric function ₂F₁(a, b; c; z) for real z < 1.
//!
//! Negative z is first mapped by Pfaff's transformation to
//! w = z/(z−1) ∈ [0, 1). The power series is summed for w ≤ 0.9; closer to
//! 1 the 1−w connection formula is used. When c−a−b is an integer that
//! formula is singular term by term and the logarithmic form of the
//! connection (Abramowitz & Stegun 15.3.11–12) is used instead.

use super::gamma::{gamma, is_nonpositive_integer, rgamma};
use crate::{Error, Result};

const SERIES_MAX_W: f64 = 0.9;
const MAX_TERMS: usize = 20_000;
/// c−a−b closer than this to an integer takes the logarithmic branch.
const INTEGER_GAP_TOL: f64 = 1e-9;

/// ₂F₁(a, b; c; z), z < 1.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if is_nonpositive_integer(c) {
        return Err(Error::domain(format!("hyp2f1: c = {c} is a pole")));
    }
    if !(z < 1.0) || !(a.is_finite() && b.is_finite() && c.is_finite()) {
        return Err(Error::domain(format!(
            "hyp2f1: need finite parameters and z < 1, got z = {z}"
        )));
    }
    if z == 0.0 || a == 0.0 || b == 0.0 {
        return Ok(1.0);
    }
    if z < 0.0 {
        // Pfaff: (1−z)^(−a) ₂F₁(a, c−b; c; z/(z−1))
        let w = z / (z - 1.0);
        return Ok((1.0 - z).powf(-a) * hyp_unit(a, c - b, c, w)?);
    }
    hyp_unit(a, b, c, z)
}

/// ₂F₁ for 0 ≤ w < 1.
fn hyp_unit(a: f64, b: f64, c: f64, w: f64) -> Result<f64> {
    if w <= SERIES_MAX_W || is_nonpositive_integer(a) || is_nonpositive_integer(b) {
        return series(a, b, c, w);
    }
    let s = c - a - b;
    if (s - s.round()).abs() > INTEGER_GAP_TOL {
        return connection(a, b, c, w);
    }
    integer_gap(a, b, c, s.round() as i64, 1.0 - w)
}

/// Connection to v = 1 − w when c = a + b + m, m integer.
fn integer_gap(a: f64, b: f64, c: f64, m: i64, v: f64) -> Result<f64> {
    let gc = gamma(c)?;
    let ln_v = v.ln();
    let mu = m.unsigned_abs() as usize;
    let mf = mu as f64;
    // finite sum Σ_{n<|m|} (p)_n (q)_n / (n! (1−|m|)_n) v^n
    let finite = |p: f64, q: f64| -> f64 {
        let mut term = 1.0;
        let mut sum = 0.0;
        for n in 0..mu {
            let nf = n as f64;
            sum += term;
            term *= (p + nf) * (q + nf) / ((nf + 1.0) * (1.0 - mf + nf)) * v;
        }
        sum
    };
    // log series Σ_n (p)_n (q)_n / (n! (n+|m|)!) v^n [ln v − ψ(n+1) − ψ(n+|m|+1) + ψ(p+n) + ψ(q+n)]
    let log_series = |p: f64, q: f64| -> Result<f64> {
        let mut term = 1.0 / (1..=mu).map(|i| i as f64).product::<f64>();
        let mut psi_n1 = digamma(1.0);
        let mut psi_nm1 = digamma(mf + 1.0);
        let mut psi_p = digamma(p);
        let mut psi_q = digamma(q);
        let mut sum = 0.0;
        for n in 0..MAX_TERMS {
            let nf = n as f64;
            let contrib = term * (ln_v - psi_n1 - psi_nm1 + psi_p + psi_q);
            sum += contrib;
            if n > 2 && contrib.abs() <= f64::EPSILON * sum.abs() {
                return Ok(sum);
            }
            term *= (p + nf) * (q + nf) / ((nf + 1.0) * (nf + mf + 1.0)) * v;
            psi_n1 += 1.0 / (nf + 1.0);
            psi_nm1 += 1.0 / (nf + mf + 1.0);
            psi_p += 1.0 / (p + nf);
            psi_q += 1.0 / (q + nf);
        }
        Err(Error::convergence("hyp2f1 logarithmic connection", sum))
    };
    let sign = if mu % 2 == 0 { 1.0 } else { -1.0 };
    let r = if m >= 0 {
        let head = if mu > 0 {
            gamma(mf)? * gc * rgamma(a + mf) * rgamma(b + mf) * finite(a, b)
        } else {
            0.0
        };
        let tail = rgamma(a) * rgamma(b);
        let tail = if tail == 0.0 {
            0.0
        } else {
            sign * v.powi(mu as i32) * gc * tail * log_series(a + mf, b + mf)?
        };
        head - tail
    } else {
        let head =
            gamma(mf)? * gc * rgamma(a) * rgamma(b) * v.powi(-(mu as i32)) * finite(a - mf, b - mf);
        let tail = rgamma(a - mf) * rgamma(b - mf);
        let tail = if tail == 0.0 {
            0.0
        } else {
            sign * gc * tail * log_series(a, b)?
        };
        head - tail
    };
    if r.is_finite() {
        Ok(r)
    } else {
        Err(Error::Numerical(format!(
            "hyp2f1 logarithmic connection at v = {v}"
        )))
    }
}

fn digamma(x: f64) -> f64 {
    statrs::function::gamma::digamma(x)
}

fn series(a: f64, b: f64, c: f64, w: f64) -> Result<f64> {
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * w;
        sum += term;
        if term == 0.0 || (term.abs() <= f64::EPSILON * sum.abs() && kf > 4.0) {
            return Ok(sum);
        }
    }
    Err(Error::convergence("hyp2f1 series", sum))
}

fn connection(a: f64, b: f64, c: f64, w: f64) -> Result<f64> {
    let s = c - a - b;
    let v = 1.0 - w;
    let gc = gamma(c)?;
    let t1 = gc * gamma(s)? * rgamma(c - a) * rgamma(c - b) * series(a, b, 1.0 - s, v)?;
    let t2 =
        v.powf(s) * gc * gamma(-s)? * rgamma(a) * rgamma(b) * series(c - a, c - b, 1.0 + s, v)?;
    let r = t1 + t2;
    if r.is_finite() {
        Ok(r)
    } else {
        Err(Error::Numerical(format!(
            "hyp2f1 connection formula at w = {w}"
        )))
    }
}
