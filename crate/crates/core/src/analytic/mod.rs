//! Closed-form evaluators for the heterogeneous diffusion and
//! heterogeneous Cattaneo–Vernotte (CV) equations with diffusivity
//! D(x) = B(λ+|x|)^(2−2/β).

mod image;
mod moments;
mod pdf;

pub use image::{
    cm_check, cm_check_image, ode_residual, ode_residual_with_order, pdf_cv_hat, pdf_cv_hat_image,
    pdf_cv_hat_shifted,
};
pub use moments::{
    autocorrelation_hd, fit_loglog_slope, moments_lambda0, msd_cv, msd_hd, msd_lambda,
    tamsd_exact_hd, tamsd_hd, LONG_WINDOW, SHORT_WINDOW,
};
pub use pdf::{
    cv_density, front_atom_weight, pdf_cv_inverted, pdf_cv_lambda0, pdf_cv_lambda0_at,
    pdf_cv_nu_half, pdf_cv_nu_threehalf, pdf_cv_nu_threehalf_at, pdf_hd, pdf_hd_grid,
    pdf_nu_threehalf_diffusion_limit, symmetric_grid, ThreeHalfCase,
};

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Tolerance used when matching ν, α or β against special values.
pub(crate) const SPECIAL_TOL: f64 = 1e-12;

/// Parameters of the diffusivity and of the transport equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    /// Cusp offset λ ≥ 0.
    pub lambda: f64,
    /// Heterogeneity exponent β > 0.
    pub beta: f64,
    /// Scale B > 0.
    #[serde(rename = "B")]
    pub b: f64,
    /// Lag time τ ≥ 0 (τ = 0 is the diffusion limit).
    pub tau: f64,
    /// Stochastic interpretation α ∈ [0, 1].
    pub alpha: f64,
}

impl ModelParams {
    pub fn new(lambda: f64, beta: f64, b: f64, tau: f64, alpha: f64) -> Result<Self> {
        let p = ModelParams {
            lambda,
            beta,
            b,
            tau,
            alpha,
        };
        p.validate()?;
        Ok(p)
    }

    /// Builds the parameters from the front speed υ, setting B = υ²τ.
    pub fn from_upsilon(
        lambda: f64,
        beta: f64,
        upsilon: f64,
        tau: f64,
        alpha: f64,
    ) -> Result<Self> {
        if !(upsilon > 0.0) || !(tau > 0.0) {
            return Err(Error::domain("from_upsilon needs υ > 0 and τ > 0"));
        }
        Self::new(lambda, beta, upsilon * upsilon * tau, tau, alpha)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.lambda, self.beta, self.b, self.tau, self.alpha]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::domain("model parameters must be finite"));
        }
        if self.lambda < 0.0 {
            return Err(Error::domain(format!("λ must be ≥ 0, got {}", self.lambda)));
        }
        if self.beta <= 0.0 {
            return Err(Error::domain(format!("β must be > 0, got {}", self.beta)));
        }
        if self.b <= 0.0 {
            return Err(Error::domain(format!("B must be > 0, got {}", self.b)));
        }
        if self.tau < 0.0 {
            return Err(Error::domain(format!("τ must be ≥ 0, got {}", self.tau)));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::domain(format!(
                "α must lie in [0, 1], got {}",
                self.alpha
            )));
        }
        Ok(())
    }

    /// υ = √(B/τ); requires τ > 0.
    pub fn upsilon(&self) -> Result<f64> {
        if self.tau > 0.0 {
            Ok((self.b / self.tau).sqrt())
        } else {
            Err(Error::domain("υ = √(B/τ) is undefined for τ = 0"))
        }
    }

    /// ν = (1−2α)(1−β)/2 + 1/2.
    pub fn nu(&self) -> f64 {
        (1.0 - 2.0 * self.alpha) * (1.0 - self.beta) / 2.0 + 0.5
    }

    /// a = 1/2 + (1+α)(1−β)/β.
    pub fn a(&self) -> f64 {
        0.5 + (1.0 + self.alpha) * (1.0 - self.beta) / self.beta
    }

    /// Whether the Laplace-space solution is known to be completely monotone (0 < ν ≤ 3/2).
    pub fn valid_cmf(&self) -> bool {
        let nu = self.nu();
        nu > 0.0 && nu <= 1.5 + SPECIAL_TOL
    }

    pub(crate) fn nu_is_half(&self) -> bool {
        (self.nu() - 0.5).abs() < SPECIAL_TOL
    }

    pub(crate) fn require_tau(&self) -> Result<f64> {
        if self.tau > 0.0 {
            Ok(self.tau)
        } else {
            Err(Error::domain("this evaluator needs τ > 0"))
        }
    }

    pub(crate) fn require_lambda0(&self) -> Result<()> {
        if self.lambda == 0.0 {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "this evaluator needs λ = 0, got {}",
                self.lambda
            )))
        }
    }

    pub(crate) fn require_nu_below_one(&self) -> Result<()> {
        if self.nu() < 1.0 {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "the λ = 0 solution needs ν < 1, got ν = {} (α = {}, β = {})",
                self.nu(),
                self.alpha,
                self.beta
            )))
        }
    }
}

/// Stochastic interpretation of the multiplicative Langevin equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Interpretation {
    /// Hänggi–Klimontovich (anti-Itô), α = 0.
    Hk,
    /// Stratonovich, α = 1/2.
    Stratonovich,
    /// Itô, α = 1.
    Ito,
}

impl Interpretation {
    pub fn alpha(self) -> f64 {
        match self {
            Interpretation::Hk => 0.0,
            Interpretation::Stratonovich => 0.5,
            Interpretation::Ito => 1.0,
        }
    }
}

/// How the continuous part of a density behaves at the wave front.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FrontKind {
    /// No front (infinite propagation speed).
    None,
    /// Bounded density with point masses at the front.
    Atom,
    /// Integrable divergence (x_f − |x|)^(ν−3/2), no point mass.
    Integrable,
    /// Non-integrable divergence; the mass is a Hadamard finite part and
    /// the density is negative next to the front.
    FinitePart,
}

/// A density on a grid plus point masses.
#[derive(Debug, Clone, Serialize)]
pub struct PdfResult {
    pub grid: Vec<f64>,
    /// Continuous part evaluated on `grid`.
    pub density: Vec<f64>,
    /// (position, weight) point masses.
    pub atoms: Vec<(f64, f64)>,
    pub support: (f64, f64),
    pub front: FrontKind,
    /// The continuous part diverges (integrably) at x = 0.
    pub singular_origin: bool,
    /// Adaptive-quadrature integral of the continuous part plus atom weights.
    pub mass: f64,
    pub warnings: Vec<String>,
}

impl PdfResult {
    pub fn atom_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum()
    }

    /// Trapezoid integral of `density` over `grid` plus atom weights.
    pub fn trapezoid_mass(&self) -> f64 {
        let cont: f64 = self
            .grid
            .windows(2)
            .zip(self.density.windows(2))
            .map(|(x, d)| 0.5 * (x[1] - x[0]) * (d[0] + d[1]))
            .sum();
        cont + self.atom_mass()
    }
}

/// Mean-squared displacement curve with fitted log-log exponents.
#[derive(Debug, Clone, Serialize)]
pub struct MsdCurve {
    pub times: Vec<f64>,
    pub msd: Vec<f64>,
    /// Standard errors of `msd` (empty for closed forms).
    pub std_err: Vec<f64>,
    pub exponent_short: f64,
    pub exponent_long: f64,
}

/// D(x) = B(λ+|x|)^(2−2/β). Returns +∞ where the power diverges.
pub fn diffusivity(p: &ModelParams, x: f64) -> f64 {
    let base = p.lambda + x.abs();
    let e = 2.0 - 2.0 / p.beta;
    if e == 0.0 {
        return p.b;
    }
    p.b * base.powf(e)
}

/// D′(x) for x ≠ 0 (or λ > 0).
fn diffusivity_prime(p: &ModelParams, x: f64) -> Result<f64> {
    let e = 2.0 - 2.0 / p.beta;
    if e == 0.0 {
        return Ok(0.0);
    }
    if x == 0.0 {
        // the one-sided derivatives ±B·e·λ^(e−1) agree only when they vanish
        if p.lambda == 0.0 && e > 1.0 {
            return Ok(0.0);
        }
        return Err(Error::domain(
            "D′(x) is undefined at x = 0 (cusp or divergence)",
        ));
    }
    Ok(p.b * e * (p.lambda + x.abs()).powf(e - 1.0) * x.signum())
}

/// Fictitious drift A(α)·D′(x) with A_HK = −α, A_S = 1/2 − α, A_I = 1 − α.
pub fn fictitious_drift(p: &ModelParams, form: Interpretation, x: f64) -> Result<f64> {
    let amp = match form {
        Interpretation::Hk => -p.alpha,
        Interpretation::Stratonovich => 0.5 - p.alpha,
        Interpretation::Ito => 1.0 - p.alpha,
    };
    if amp == 0.0 {
        return Ok(0.0);
    }
    Ok(amp * diffusivity_prime(p, x)?)
}

/// Support ±[(υt/β + λ^(1/β))^β − λ] of the CV solution at time t.
pub fn support_interval(p: &ModelParams, t: f64) -> Result<(f64, f64)> {
    let ups = p.upsilon()?;
    if !(t >= 0.0) {
        return Err(Error::domain(format!("t must be ≥ 0, got {t}")));
    }
    let hi = front_position(p, ups, t);
    Ok((-hi, hi))
}

/// Front position x_f = (υt/β + λ^(1/β))^β − λ, computed without cancellation.
pub(crate) fn front_position(p: &ModelParams, ups: f64, t: f64) -> f64 {
    let r = ups * t / p.beta;
    if p.lambda == 0.0 {
        return r.powf(p.beta);
    }
    let l = p.lambda.powf(1.0 / p.beta);
    // λ[(1 + r/λ^(1/β))^β − 1]
    p.lambda * (p.beta * (r / l).ln_1p()).exp_m1()
}

/// y = β[(λ+|x|)^(1/β) − λ^(1/β)], computed without cancellation.
pub(crate) fn y_coordinate(p: &ModelParams, x: f64) -> f64 {
    let ax = x.abs();
    if p.lambda == 0.0 {
        return p.beta * ax.powf(1.0 / p.beta);
    }
    p.beta * p.lambda.powf(1.0 / p.beta) * ((ax / p.lambda).ln_1p() / p.beta).exp_m1()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn derived_parameters() {
        let p = ModelParams::new(0.0, 1.0 / 3.0, 1.0, 0.1, 1.0).unwrap();
        assert!(close(p.nu(), 1.0 / 6.0, 1e-15));
        let q = ModelParams::new(0.5, 3.0, 1.0, 0.1, 1.0).unwrap();
        assert!(close(q.nu(), 1.5, 1e-15));
        assert!(close(q.a(), -5.0 / 6.0, 1e-15));
        assert!(q.valid_cmf());
        let r = ModelParams::new(0.5, 5.0, 1.0, 0.1, 0.0).unwrap();
        assert!(close(r.nu(), -1.5, 1e-15));
        assert!(!r.valid_cmf());
        assert!(ModelParams::new(0.0, 1.0, 1.0, 0.1, 1.5).is_err());
        assert!(ModelParams::new(-1.0, 1.0, 1.0, 0.1, 0.5).is_err());
        assert!(ModelParams::new(0.0, 1.0, 1.0, 0.0, 0.5)
            .unwrap()
            .upsilon()
            .is_err());
        let u = ModelParams::from_upsilon(0.0, 1.0, 2.0, 0.1, 0.5).unwrap();
        assert!(close(u.upsilon().unwrap(), 2.0, 1e-15));
    }

    #[test]
    fn diffusivity_examples() {
        let p = ModelParams::new(0.7, 1.0, 2.5, 0.1, 0.5).unwrap();
        assert_eq!(diffusivity(&p, -3.0), 2.5);
        let q = ModelParams::new(0.0, 1.0 / 3.0, 2.0, 0.1, 0.5).unwrap();
        assert!(close(diffusivity(&q, 2.0), 2.0 * 2f64.powi(-4), 1e-15));
        assert!(close(diffusivity(&q, -2.0), diffusivity(&q, 2.0), 0.0));
        assert_eq!(diffusivity(&q, 0.0), f64::INFINITY);
        let r = ModelParams::new(0.25, 2.0, 3.0, 0.1, 0.5).unwrap();
        assert!(close(diffusivity(&r, 0.0), 3.0 * 0.25, 1e-15));
    }

    #[test]
    fn fictitious_drift_examples() {
        let s = ModelParams::new(0.3, 0.7, 1.0, 0.1, 0.5).unwrap();
        assert_eq!(
            fictitious_drift(&s, Interpretation::Stratonovich, 0.4).unwrap(),
            0.0
        );
        let i = ModelParams::new(0.3, 0.7, 1.0, 0.1, 1.0).unwrap();
        assert_eq!(
            fictitious_drift(&i, Interpretation::Ito, -1.4).unwrap(),
            0.0
        );
        let b = 1.7;
        let q = ModelParams::new(0.0, 2.0, b, 0.1, 0.0).unwrap();
        assert!(close(
            fictitious_drift(&q, Interpretation::Ito, 1.0).unwrap(),
            b,
            1e-15
        ));
        // odd in x
        assert!(close(
            fictitious_drift(&q, Interpretation::Ito, -1.0).unwrap(),
            -b,
            1e-15
        ));
        let sing = ModelParams::new(0.0, 0.5, 1.0, 0.1, 0.0).unwrap();
        assert!(fictitious_drift(&sing, Interpretation::Ito, 0.0).is_err());
    }

    #[test]
    fn support_examples() {
        let p = ModelParams::from_upsilon(0.25, 0.5, 1.0, 0.1, 0.5).unwrap();
        let (lo, hi) = support_interval(&p, 1.0).unwrap();
        assert!(close(hi, 1.19, 0.01) && lo == -hi);
        let q = ModelParams::from_upsilon(0.25, 1.5, 1.0, 0.1, 0.5).unwrap();
        assert!(close(support_interval(&q, 1.0).unwrap().1, 0.85, 0.01));
        let r = ModelParams::from_upsilon(0.0, 1.0, 2.0, 0.1, 0.5).unwrap();
        assert_eq!(support_interval(&r, 3.0).unwrap(), (-6.0, 6.0));
    }

    #[test]
    fn y_coordinate_inverts_front() {
        let p = ModelParams::from_upsilon(0.25, 0.5, 1.0, 0.1, 0.5).unwrap();
        let xf = front_position(&p, 1.0, 1.3);
        assert!(close(y_coordinate(&p, xf), 1.3, 1e-14));
        assert!(close(y_coordinate(&p, -xf), 1.3, 1e-14));
    }
}
