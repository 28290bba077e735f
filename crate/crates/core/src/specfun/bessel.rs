//! Modified Bessel functions of real order, I_ν and K_ν, for real
//! non-negative argument.
//!
//! I_ν uses the ascending series below the crossover and the Hankel
//! large-argument expansion above it. K_ν uses Temme's series for
//! x ≤ 2 and Steed's continued fraction above, both for the reduced
//! order |μ| ≤ 1/2, followed by forward recurrence to the requested order.
//! Both functions have exponentially scaled variants so callers can form
//! ratios without overflow.

use super::gamma::rgamma;
use crate::{Error, Result};
use std::f64::consts::PI;

/// Below this argument I_ν uses the ascending series.
pub const I_SERIES_CROSSOVER: f64 = 12.0;

const EPS: f64 = f64::EPSILON;
const MAX_ITER: usize = 10_000;

/// I_ν(z).
pub fn bessel_i(nu: f64, z: f64) -> Result<f64> {
    let scaled = bessel_i_scaled(nu, z)?;
    let v = scaled * z.exp();
    if !v.is_finite() {
        return Err(Error::Numerical(format!(
            "I_{nu}({z}) overflows; use bessel_i_scaled"
        )));
    }
    Ok(v)
}

/// e^(−z) I_ν(z).
pub fn bessel_i_scaled(nu: f64, z: f64) -> Result<f64> {
    if !(z >= 0.0) || !nu.is_finite() {
        return Err(Error::domain(format!("bessel_i: need z ≥ 0, got z = {z}")));
    }
    // I_{−n} = I_n for integer n
    let nu = if nu < 0.0 && nu == nu.round() {
        -nu
    } else {
        nu
    };
    if z == 0.0 {
        return if nu == 0.0 {
            Ok(1.0)
        } else if nu > 0.0 {
            Ok(0.0)
        } else {
            Err(Error::domain(format!(
                "I_{nu}(0) diverges for negative non-integer order"
            )))
        };
    }
    if z > I_SERIES_CROSSOVER.max(nu * nu) {
        i_scaled_hankel(nu, z)
    } else {
        Ok(i_series(nu, z)? * (-z).exp())
    }
}

fn i_series(nu: f64, z: f64) -> Result<f64> {
    let half = 0.5 * z;
    let q = half * half;
    let mut term = (nu * half.ln()).exp() * rgamma(nu + 1.0);
    let mut sum = term;
    for k in 1..MAX_ITER {
        let kf = k as f64;
        term *= q / (kf * (kf + nu));
        sum += term;
        if term.abs() <= EPS * sum.abs() && kf > z {
            return Ok(sum);
        }
    }
    Err(Error::convergence(format!("I_{nu}({z}) series"), sum))
}

fn i_scaled_hankel(nu: f64, z: f64) -> Result<f64> {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        term *= -(mu - odd * odd) / (k as f64 * 8.0 * z);
        if term.abs() > last {
            break;
        }
        sum += term;
        last = term.abs();
        if term.abs() < EPS * sum.abs() {
            break;
        }
    }
    Ok(sum / (2.0 * PI * z).sqrt())
}

/// K_ν(z), z > 0.
pub fn bessel_k(nu: f64, z: f64) -> Result<f64> {
    let scaled = bessel_k_scaled(nu, z)?;
    Ok(scaled * (-z).exp())
}

/// e^z K_ν(z), z > 0.
pub fn bessel_k_scaled(nu: f64, z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain(format!("bessel_k: need z > 0, got z = {z}")));
    }
    if !nu.is_finite() {
        return Err(Error::domain("bessel_k: non-finite order"));
    }
    // K_{−ν} = K_ν
    let nu = nu.abs();
    let n = (nu + 0.5).floor();
    let mu = nu - n;
    let (mut k_mu, mut k_mu1) = if z <= 2.0 {
        k_temme(mu, z)?
    } else {
        k_steed(mu, z)?
    };
    let two_over_z = 2.0 / z;
    for i in 1..=(n as usize) {
        let next = (mu + i as f64) * two_over_z * k_mu1 + k_mu;
        k_mu = k_mu1;
        k_mu1 = next;
    }
    if !k_mu.is_finite() {
        return Err(Error::Numerical(format!("K_{nu}({z}) overflows")));
    }
    Ok(k_mu)
}

// Coefficients of 1/Γ(1+x) = Σ d_j x^j (Abramowitz & Stegun 6.1.34 shifted).
const RGAMMA1P: [f64; 26] = [
    1.0,
    0.577_215_664_901_532_9,
    -0.655_878_071_520_253_8,
    -0.042_002_635_034_095_2,
    0.166_538_611_382_291_5,
    -0.042_197_734_555_544_3,
    -0.009_621_971_527_877_0,
    0.007_218_943_246_663_0,
    -0.001_165_167_591_859_1,
    -0.000_215_241_674_114_9,
    0.000_128_050_282_388_2,
    -0.000_020_134_854_780_7,
    -0.000_001_250_493_482_1,
    0.000_001_133_027_232_0,
    -0.000_000_205_633_841_7,
    0.000_000_006_116_095_0,
    0.000_000_005_002_007_5,
    -0.000_000_001_181_274_6,
    0.000_000_000_104_342_7,
    0.000_000_000_007_782_3,
    -0.000_000_000_003_696_8,
    0.000_000_000_000_510_0,
    -0.000_000_000_000_020_6,
    -0.000_000_000_000_005_4,
    0.000_000_000_000_001_4,
    0.000_000_000_000_000_1,
];

/// Temme's auxiliary functions: (Γ1(μ), Γ2(μ), 1/Γ(1+μ), 1/Γ(1−μ)).
fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    // even part and odd part / μ of the series, so Γ1 needs no division
    let m2 = mu * mu;
    let mut even = 0.0;
    let mut odd_over_mu = 0.0;
    let mut p = 1.0;
    for pair in RGAMMA1P.chunks(2) {
        even += pair[0] * p;
        if let Some(d) = pair.get(1) {
            odd_over_mu += d * p;
        }
        p *= m2;
    }
    let gampl = even + mu * odd_over_mu;
    let gammi = even - mu * odd_over_mu;
    (-odd_over_mu, even, gampl, gammi)
}

/// Scaled (e^x K_μ, e^x K_{μ+1}) for |μ| ≤ 1/2, x ≤ 2.
fn k_temme(mu: f64, x: f64) -> Result<(f64, f64)> {
    let x2 = 0.5 * x;
    let pimu = PI * mu;
    let fact = if pimu.abs() < EPS {
        1.0
    } else {
        pimu / pimu.sin()
    };
    let d = -x2.ln();
    let e = mu * d;
    let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
    let (gam1, gam2, gampl, gammi) = temme_gammas(mu);
    let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
    let mut sum = ff;
    let ee = e.exp();
    let mut p = 0.5 * ee / gampl;
    let mut q = 0.5 / (ee * gammi);
    let mut c = 1.0;
    let dd = x2 * x2;
    let mut sum1 = p;
    let mut converged = false;
    for i in 1..MAX_ITER {
        let fi = i as f64;
        ff = (fi * ff + p + q) / (fi * fi - mu * mu);
        c *= dd / fi;
        p /= fi - mu;
        q /= fi + mu;
        let del = c * ff;
        sum += del;
        sum1 += c * (p - fi * ff);
        if del.abs() < sum.abs() * EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::convergence(format!("K_{mu}({x}) Temme series"), sum));
    }
    let ex = x.exp();
    Ok((sum * ex, sum1 * 2.0 / x * ex))
}

/// Scaled (e^x K_μ, e^x K_{μ+1}) for |μ| ≤ 1/2, x > 2 (Steed's CF2).
fn k_steed(mu: f64, x: f64) -> Result<(f64, f64)> {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - mu * mu;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    let mut converged = false;
    for i in 1..MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::convergence(format!("K_{mu}({x}) Steed CF2"), s));
    }
    let h = a1 * h;
    let k_mu = (PI / (2.0 * x)).sqrt() / s;
    let k_mu1 = k_mu * (mu + x + 0.5 - h) / x;
    Ok((k_mu, k_mu1))
}
