//! Gamma-family helpers. Γ, ln Γ and erfc come from `libm`; the reciprocal
//! gamma and Pochhammer symbol are built on top so that poles are handled
//! explicitly.

use crate::{Error, Result};

/// Γ(x). Poles (non-positive integers) return a domain error.
pub fn gamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::domain(format!("gamma pole at {x}")));
    }
    Ok(libm::tgamma(x))
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Sign and ln|Γ(x)| for any non-pole real x.
pub fn ln_gamma_signed(x: f64) -> Result<(f64, f64)> {
    if is_nonpositive_integer(x) {
        return Err(Error::domain(format!("gamma pole at {x}")));
    }
    if x > 0.0 {
        return Ok((1.0, ln_gamma(x)));
    }
    // Γ(x) Γ(1 − x) = π / sin(πx)
    let s = (std::f64::consts::PI * x).sin();
    let sign = if s > 0.0 { 1.0 } else { -1.0 };
    Ok((
        sign,
        std::f64::consts::PI.ln() - s.abs().ln() - ln_gamma(1.0 - x),
    ))
}

/// 1/Γ(x), entire: zero at the poles of Γ.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x < 170.0 && x > -170.0 {
        let g = libm::tgamma(x);
        if g.is_finite() && g != 0.0 {
            return 1.0 / g;
        }
    }
    match ln_gamma_signed(x) {
        Ok((sign, lg)) => sign * (-lg).exp(),
        Err(_) => 0.0,
    }
}

/// Rising factorial (c)_r = c (c+1) ... (c+r−1), by direct product.
///
/// The product is finite for every real `c`, including the poles of Γ
/// where the ratio Γ(c+r)/Γ(c) is read as its limit; only a non-finite
/// `c` is rejected.
pub fn pochhammer(c: f64, r: u32) -> Result<f64> {
    if !c.is_finite() {
        return Err(Error::domain(format!("pochhammer: non-finite c = {c}")));
    }
    Ok((0..r).fold(1.0, |acc, k| acc * (c + f64::from(k))))
}

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

pub(crate) fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(1.0, 3).unwrap(), 6.0);
        assert_eq!(pochhammer(0.5, 0).unwrap(), 1.0);
        assert!((pochhammer(2.5, 2).unwrap() - 8.75).abs() < 1e-15);
        assert_eq!(pochhammer(-3.0, 2).unwrap(), 6.0);
        assert_eq!(pochhammer(0.0, 5).unwrap(), 0.0);
        assert!(pochhammer(f64::NAN, 2).is_err());
    }

    #[test]
    fn rgamma_zero_at_poles() {
        assert_eq!(rgamma(0.0), 0.0);
        assert_eq!(rgamma(-3.0), 0.0);
        assert!((rgamma(0.5) - 1.0 / std::f64::consts::PI.sqrt()).abs() < 1e-15);
        assert!((rgamma(-0.5) + 0.5 / std::f64::consts::PI.sqrt()).abs() < 1e-15);
        let r = rgamma(171.5);
        assert!(r > 0.0 && r < 1e-300);
        assert!((r / (-ln_gamma(171.5)).exp() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn gamma_pole_is_domain_error() {
        assert!(matches!(gamma(-2.0), Err(Error::Domain(_))));
    }

    #[test]
    fn signed_log_gamma_negative_argument() {
        let (s, lg) = ln_gamma_signed(-1.5).unwrap();
        let g = 4.0 * std::f64::consts::PI.sqrt() / 3.0;
        assert_eq!(s, g.signum());
        assert!((lg.exp() - g.abs()).abs() < 1e-13);
    }

    fn erfc_by_quadrature(x: f64) -> f64 {
        // composite Simpson on (2/√π) ∫₀^x e^(−u²) du with many panels
        let n = 20_000;
        let h = x / n as f64;
        let f = |u: f64| (-u * u).exp();
        let mut s = f(0.0) + f(x);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(i as f64 * h);
        }
        1.0 - 2.0 / std::f64::consts::PI.sqrt() * s * h / 3.0
    }

    #[test]
    fn erfc_values() {
        assert_eq!(erfc(0.0), 1.0);
        assert!(erfc(40.0).abs() < 1e-300);
        assert!((erfc(0.5) - erfc_by_quadrature(0.5)).abs() < 1e-12);
        assert!((erfc(-1.2) - erfc_by_quadrature(-1.2)).abs() < 1e-12);
    }
}
