//! Time-domain densities: heterogeneous diffusion, the λ = 0 CV solution,
//! the λ > 0 closed forms at ν = 1/2 and ν = 3/2, and numerical inversion
//! for everything else.

use super::{
    front_position, image::pdf_cv_hat_image, y_coordinate, FrontKind, ModelParams, PdfResult,
    SPECIAL_TOL,
};
use crate::laplace::invert_gaver_stehfest;
use crate::quadrature::{gauss_kronrod, tanh_sinh, tanh_sinh_to_infinity};
use crate::specfun::{bessel_i_scaled, erfc, ln_gamma};
use crate::{Error, Result};
use std::f64::consts::PI;

const MASS_ABS_TOL: f64 = 1e-11;
const MASS_REL_TOL: f64 = 1e-10;
/// Normalization misfit above which a closed form is reported as suspect.
const MISFIT_WARN: f64 = 1e-3;

/// n cell-centred nodes on (−h, h), mirrored exactly; odd n is rounded up
/// so that x = 0 is never a node.
pub fn symmetric_grid(half_width: f64, n: usize) -> Vec<f64> {
    let n = (n.max(2) + 1) / 2 * 2;
    let half = n / 2;
    let dx = 2.0 * half_width / n as f64;
    let pos: Vec<f64> = (0..half).map(|i| (i as f64 + 0.5) * dx).collect();
    pos.iter()
        .rev()
        .map(|x| -x)
        .chain(pos.iter().copied())
        .collect()
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("t must be > 0, got {t}")))
    }
}

/// Gap υt − y between the front and the point at distance w inside it.
fn y_gap(p: &ModelParams, xf: f64, w: f64) -> f64 {
    let base = p.lambda + xf;
    p.beta * base.powf(1.0 / p.beta) * -((-w / base).ln_1p() / p.beta).exp_m1()
}

/// Continuous part of the homogeneous CV density at distance wy = υt − |y|
/// inside the front.
pub(crate) fn cv_cont(ups: f64, tau: f64, t: f64, wy: f64) -> Result<f64> {
    let vt = ups * t;
    if wy <= 0.0 || wy > vt {
        return Ok(if wy == 0.0 {
            (-t / (2.0 * tau)).exp() / (4.0 * tau * ups) * (1.0 + t / (4.0 * tau))
        } else {
            0.0
        });
    }
    let lam = (wy * (2.0 * vt - wy)).sqrt();
    let c = 2.0 * tau * ups;
    let z = lam / c;
    let pre = (z - t / (2.0 * tau)).exp() / (4.0 * tau * ups);
    Ok(pre * (bessel_i_scaled(0.0, z)? + vt / lam * bessel_i_scaled(1.0, z)?))
}

/// Continuous part of the homogeneous CV density P_CV(y, t).
pub fn cv_density(p: &ModelParams, y: f64, t: f64) -> Result<f64> {
    check_t(t)?;
    let ups = p.upsilon()?;
    cv_cont(ups, p.tau, t, ups * t - y.abs())
}

/// Weight of each of the two front atoms at time t. For λ > 0 it is the
/// large-s limit of e^(s·y/υ) P̂; for λ = 0 only ν = 1/2 carries one.
pub fn front_atom_weight(p: &ModelParams, t: f64) -> Result<f64> {
    check_t(t)?;
    let ups = p.upsilon()?;
    let decay = (-t / (2.0 * p.tau)).exp();
    if p.lambda == 0.0 {
        return Ok(if p.nu_is_half() { 0.5 * decay } else { 0.0 });
    }
    let xf = front_position(p, ups, t);
    let (nu, a, b) = (p.nu(), p.a(), p.beta);
    let ln_w = (nu - 0.5) / b * p.lambda.ln() + (a - 1.5 / b + 1.0) * (p.lambda + xf).ln();
    Ok(0.5 * decay * ln_w.exp())
}

// ---------------------------------------------------------------------------
// heterogeneous diffusion

/// Heterogeneous-diffusion density W_{0,β}(α; x, t) (λ = 0, ν < 1). At x = 0
/// it returns the limit, which is +∞ when the |x| power is negative.
pub fn pdf_hd(p: &ModelParams, x: f64, t: f64) -> Result<f64> {
    p.require_lambda0()?;
    p.require_nu_below_one()?;
    check_t(t)?;
    let b = p.beta;
    let gexp = 2.0 * p.alpha * (1.0 - b) / b;
    let ax = x.abs();
    if ax == 0.0 {
        if gexp < 0.0 {
            return Ok(f64::INFINITY);
        }
        if gexp > 0.0 {
            return Ok(0.0);
        }
    }
    let z = b * ax.powf(1.0 / b);
    Ok(ln_hd(p, t, z, if ax > 0.0 { ax.ln() } else { 0.0 }).exp())
}

/// ln W at z = β|x|^(1/β), given ln|x|.
fn ln_hd(p: &ModelParams, t: f64, z: f64, ln_ax: f64) -> f64 {
    let (b, nu, bb) = (p.beta, p.nu(), p.b);
    let gexp = 2.0 * p.alpha * (1.0 - b) / b;
    0.5 * PI.ln() + if gexp != 0.0 { gexp * ln_ax } else { 0.0 } - ln_gamma(1.0 - nu)
        + (0.5 - nu) * (b * b / (4.0 * bb * t)).ln()
        - z * z / (4.0 * bb * t)
        - 0.5 * (4.0 * PI * bb * t).ln()
}

/// Heterogeneous-diffusion density on a grid with quadrature mass.
pub fn pdf_hd_grid(p: &ModelParams, grid: &[f64], t: f64) -> Result<PdfResult> {
    let density = grid
        .iter()
        .map(|&x| pdf_hd(p, x, t))
        .collect::<Result<Vec<_>>>()?;
    // In z = β|x|^(1/β) the mass density is ∝ z^(1−2ν) e^(−z²/4Bt). Below
    // z₀ = √(4Bt) substitute z = v^m, m = 1/(2−2ν), which keeps it bounded
    // at v = 0 even as ν → 1.
    let b = p.beta;
    let in_z = |ln_z: f64, ln_extra: f64| -> f64 {
        if ln_z == f64::NEG_INFINITY {
            return 0.0;
        }
        // x = (z/β)^β, dx/dz = (z/β)^(β−1)
        let ln_zb = ln_z - b.ln();
        (ln_hd(p, t, ln_z.exp(), b * ln_zb) + (b - 1.0) * ln_zb + ln_extra).exp()
    };
    let z0 = (4.0 * p.b * t).sqrt();
    let m = (1.0 / (2.0 - 2.0 * p.nu())).max(1.0);
    let inner = tanh_sinh(
        |v, _, _| in_z(m * v.ln(), m.ln() + (m - 1.0) * v.ln()),
        0.0,
        z0.powf(1.0 / m),
        MASS_ABS_TOL,
        MASS_REL_TOL,
    )?;
    let outer = tanh_sinh_to_infinity(|z, _| in_z(z.ln(), 0.0), z0, MASS_ABS_TOL, MASS_REL_TOL)?;
    let half = inner.value + outer.value;
    let gexp = 2.0 * p.alpha * (1.0 - p.beta) / p.beta;
    Ok(PdfResult {
        grid: grid.to_vec(),
        density,
        atoms: vec![],
        support: (f64::NEG_INFINITY, f64::INFINITY),
        front: FrontKind::None,
        singular_origin: gexp < 0.0,
        mass: 2.0 * half,
        warnings: vec![],
    })
}

// ---------------------------------------------------------------------------
// λ = 0 CV solution

struct Lambda0 {
    ups: f64,
    tau: f64,
    t: f64,
    nu: f64,
    beta: f64,
    /// exponent of |x| in the prefactor
    gexp: f64,
    xf: f64,
    /// log of the x-independent part of E(x), including e^(−t/2τ)
    ln_e0: f64,
}

impl Lambda0 {
    fn new(p: &ModelParams, t: f64) -> Result<Self> {
        p.require_lambda0()?;
        p.require_nu_below_one()?;
        check_t(t)?;
        let ups = p.upsilon()?;
        let (tau, nu, b) = (p.tau, p.nu(), p.beta);
        let ln_a = (nu - 0.5) * (4.0 * tau * ups * ups / (b * b)).ln() + 0.5 * PI.ln()
            - 2f64.ln()
            - ln_gamma(1.0 - nu);
        let ln_e0 = ln_a - t / (2.0 * tau) + (0.5 - nu) * ups.ln() - (2.0 * tau * ups).ln();
        Ok(Lambda0 {
            ups,
            tau,
            t,
            nu,
            beta: b,
            gexp: 2.0 * p.alpha * (1.0 / b - 1.0),
            xf: (ups * t / b).powf(b),
            ln_e0,
        })
    }

    fn ln_e(&self, x: f64) -> f64 {
        self.ln_e0
            + if self.gexp != 0.0 {
                self.gexp * x.ln()
            } else {
                0.0
            }
    }

    /// Λ at distance w inside the front.
    fn big_lambda(&self, w: f64) -> f64 {
        let u = (w / self.xf).min(1.0);
        self.ups * self.t * (-((2.0 / self.beta) * (-u).ln_1p()).exp_m1()).sqrt()
    }

    /// Continuous part at x ∈ (0, x_f], w = x_f − x.
    fn cont(&self, x: f64, w: f64) -> Result<f64> {
        if w < 0.0 {
            return Ok(0.0);
        }
        if x == 0.0 && self.gexp != 0.0 {
            return Ok(if self.gexp < 0.0 { f64::INFINITY } else { 0.0 });
        }
        let lam = self.big_lambda(w);
        let vt = self.ups * self.t;
        if lam == 0.0 {
            if (self.nu - 0.5).abs() < SPECIAL_TOL {
                return Ok(self.ln_e(x).exp() * (1.0 + self.t / (4.0 * self.tau)));
            }
            return Ok(if self.nu > 0.5 {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            });
        }
        let z = lam / (2.0 * self.tau * self.ups);
        let nu = self.nu;
        let br = lam.powf(nu - 0.5) * bessel_i_scaled(nu - 0.5, z)?
            + vt * lam.powf(nu - 1.5) * bessel_i_scaled(nu - 1.5, z)?;
        Ok((self.ln_e(x) + z).exp() * br)
    }

    /// e^(ln_weight)·cont(x) for 0 < x < x_f given ln x, without forming
    /// x^gexp (which overflows for tiny x when gexp is close to −1).
    fn cont_weighted(&self, ln_x: f64, ln_weight: f64) -> Result<f64> {
        let x = ln_x.exp();
        let lam = self.big_lambda(self.xf - x);
        let vt = self.ups * self.t;
        let z = lam / (2.0 * self.tau * self.ups);
        let nu = self.nu;
        let br = lam.powf(nu - 0.5) * bessel_i_scaled(nu - 0.5, z)?
            + vt * lam.powf(nu - 1.5) * bessel_i_scaled(nu - 1.5, z)?;
        let ln_pow = if self.gexp != 0.0 {
            self.gexp * ln_x
        } else {
            0.0
        };
        Ok((self.ln_e0 + ln_pow + z + ln_weight).exp() * br)
    }

    /// E(x)·h(x) with h = Λ^(ν−1/2) I_{ν−1/2}(Λ/2τυ).
    fn e_h(&self, x: f64, w: f64) -> Result<f64> {
        let lam = self.big_lambda(w);
        if lam == 0.0 {
            return Ok(0.0);
        }
        let z = lam / (2.0 * self.tau * self.ups);
        Ok((self.ln_e(x) + z).exp() * lam.powf(self.nu - 0.5) * bessel_i_scaled(self.nu - 0.5, z)?)
    }

    /// m(x) with the singular I_{ν−3/2} term written as m(x)·h′(x).
    fn m_factor(&self, x: f64) -> f64 {
        -self.ups * self.t * 2.0 * self.tau * self.ups * x.powf(1.0 - 2.0 / self.beta) / self.beta
    }

    /// Mass of the continuous part, as a Hadamard finite part when ν < 1/2.
    fn continuous_mass(&self) -> Result<f64> {
        let xf = self.xf;
        if (self.nu - 0.5).abs() < SPECIAL_TOL {
            let q = tanh_sinh(
                |x, _, w| self.cont(x, w).unwrap_or(f64::NAN),
                0.0,
                xf,
                MASS_ABS_TOL,
                MASS_REL_TOL,
            )?;
            return Ok(2.0 * q.value);
        }
        // Split at x1 and integrate the I_{ν−3/2} term by parts on [x1, x_f]:
        // ∫ m h′ = −m(x1)h(x1) − ∫ m′ h, the divergent boundary term at the
        // front being dropped (finite part).
        // x = u^m on [0, x1] keeps the x^gexp origin singularity bounded
        let x1 = 0.5 * xf;
        let m = if self.gexp < 0.0 {
            1.0 / (self.gexp + 1.0)
        } else {
            1.0
        };
        let inner = tanh_sinh(
            |u, _, _| {
                let ln_u = u.ln();
                self.cont_weighted(m * ln_u, m.ln() + (m - 1.0) * ln_u)
                    .unwrap_or(f64::NAN)
            },
            0.0,
            x1.powf(1.0 / m),
            MASS_ABS_TOL,
            MASS_REL_TOL,
        )?;
        let k = self.gexp + 1.0 - 2.0 / self.beta;
        let outer = tanh_sinh(
            |x, _, w| {
                let mprime_over_e = self.m_factor(x) * k / x;
                self.e_h(x, w).unwrap_or(f64::NAN) * (1.0 - mprime_over_e)
            },
            x1,
            xf,
            MASS_ABS_TOL,
            MASS_REL_TOL,
        )?;
        let boundary = self.m_factor(x1) * self.e_h(x1, xf - x1)?;
        Ok(2.0 * (inner.value + outer.value - boundary))
    }

    fn front_kind(&self) -> FrontKind {
        if (self.nu - 0.5).abs() < SPECIAL_TOL {
            FrontKind::Atom
        } else if self.nu > 0.5 {
            FrontKind::Integrable
        } else {
            FrontKind::FinitePart
        }
    }
}

/// Continuous part of the λ = 0 CV density at a single point.
pub fn pdf_cv_lambda0_at(p: &ModelParams, x: f64, t: f64) -> Result<f64> {
    let l0 = Lambda0::new(p, t)?;
    let ax = x.abs();
    if ax >= l0.xf {
        return Ok(if ax == l0.xf { l0.cont(ax, 0.0)? } else { 0.0 });
    }
    l0.cont(ax, l0.xf - ax)
}

/// λ = 0 CV density on a grid. The front carries atoms only at ν = 1/2; for
/// ν > 1/2 the density has an integrable front divergence and for ν < 1/2
/// a non-integrable one whose mass is a finite part (see [`FrontKind`]).
pub fn pdf_cv_lambda0(p: &ModelParams, grid: &[f64], t: f64) -> Result<PdfResult> {
    let l0 = Lambda0::new(p, t)?;
    let density = grid
        .iter()
        .map(|&x| {
            let ax = x.abs();
            if ax > l0.xf {
                Ok(0.0)
            } else {
                l0.cont(ax, l0.xf - ax)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let front = l0.front_kind();
    let atoms = if front == FrontKind::Atom {
        let w = 0.5 * (-t / (2.0 * l0.tau)).exp();
        vec![(-l0.xf, w), (l0.xf, w)]
    } else {
        vec![]
    };
    let mass = l0.continuous_mass()? + atoms.iter().map(|a| a.1).sum::<f64>();
    let mut warnings = vec![];
    if front == FrontKind::FinitePart {
        warnings.push(format!(
            "ν = {} < 1/2: the density is negative next to the front and its mass is a finite part",
            l0.nu
        ));
    }
    Ok(PdfResult {
        grid: grid.to_vec(),
        density,
        atoms,
        support: (-l0.xf, l0.xf),
        front,
        singular_origin: l0.gexp < 0.0,
        mass,
        warnings,
    })
}

// ---------------------------------------------------------------------------
// λ ≥ 0, ν = 1/2

/// P_{λ,β}(1/2; x, t) = (λ+|x|)^(1/β−1) P_CV(y, t) on a grid.
pub fn pdf_cv_nu_half(p: &ModelParams, grid: &[f64], t: f64) -> Result<PdfResult> {
    if !p.nu_is_half() {
        return Err(Error::domain(format!(
            "pdf_cv_nu_half needs ν = 1/2, got {}",
            p.nu()
        )));
    }
    check_t(t)?;
    let ups = p.upsilon()?;
    let tau = p.tau;
    let xf = front_position(p, ups, t);
    let e = 1.0 / p.beta - 1.0;
    let at = |x: f64, w: f64| -> Result<f64> {
        if w < 0.0 {
            return Ok(0.0);
        }
        let base = p.lambda + x;
        if base == 0.0 && e != 0.0 {
            return Ok(if e < 0.0 { f64::INFINITY } else { 0.0 });
        }
        let pre = if e == 0.0 { 1.0 } else { base.powf(e) };
        Ok(pre * cv_cont(ups, tau, t, y_gap(p, xf, w))?)
    };
    let density = grid
        .iter()
        .map(|&x| at(x.abs(), xf - x.abs()))
        .collect::<Result<Vec<_>>>()?;
    let q = tanh_sinh(
        |x, _, w| at(x, w).unwrap_or(f64::NAN),
        0.0,
        xf,
        MASS_ABS_TOL,
        MASS_REL_TOL,
    )?;
    let w = 0.5 * (-t / (2.0 * tau)).exp();
    Ok(PdfResult {
        grid: grid.to_vec(),
        density,
        atoms: vec![(-xf, w), (xf, w)],
        support: (-xf, xf),
        front: FrontKind::Atom,
        singular_origin: p.lambda == 0.0 && e < 0.0,
        mass: 2.0 * q.value + 2.0 * w,
        warnings: vec![],
    })
}

// ---------------------------------------------------------------------------
// λ > 0, ν = 3/2

/// The two parameter points with a ν = ±3/2 closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThreeHalfCase {
    /// α = 1, β = 3 (ν = 3/2).
    ItoBeta3,
    /// α = 0, β = 5 (ν = −3/2).
    HkBeta5,
}

impl ThreeHalfCase {
    pub fn of(p: &ModelParams) -> Result<Self> {
        let near = |a: f64, b: f64| (a - b).abs() < SPECIAL_TOL;
        if near(p.alpha, 1.0) && near(p.beta, 3.0) {
            Ok(ThreeHalfCase::ItoBeta3)
        } else if near(p.alpha, 0.0) && near(p.beta, 5.0) {
            Ok(ThreeHalfCase::HkBeta5)
        } else {
            Err(Error::domain(format!(
                "the ν = 3/2 closed form needs (α, β) = (1, 3) or (0, 5), got ({}, {})",
                p.alpha, p.beta
            )))
        }
    }
}

struct ThreeHalf {
    ups: f64,
    tau: f64,
    t: f64,
    lambda: f64,
    beta: f64,
    a: f64,
    xf: f64,
}

impl ThreeHalf {
    fn new(p: &ModelParams, t: f64) -> Result<Self> {
        ThreeHalfCase::of(p)?;
        if !(p.lambda > 0.0) {
            return Err(Error::domain("the ν = 3/2 closed form needs λ > 0"));
        }
        check_t(t)?;
        let ups = p.upsilon()?;
        Ok(ThreeHalf {
            ups,
            tau: p.tau,
            t,
            lambda: p.lambda,
            beta: p.beta,
            a: p.a(),
            xf: front_position(p, ups, t),
        })
    }

    /// Prefactors of the P_CV term and of the braced term.
    fn prefactors(&self, x: f64) -> (f64, f64) {
        let (l, b, a) = (self.lambda, self.beta, self.a);
        let lb = l.powf(1.0 / b);
        let base = l + x;
        (
            lb * base.powf(a - 0.5 / b),
            lb * base.powf(a - 1.5 / b) / (2.0 * b),
        )
    }

    /// ∫_{y/υ}^t e^(−ξ/2τ) I₁(q/2τυ)/q dξ with q = √(υ²ξ² − y²), after ξ = y/υ + u².
    fn tail_integral(&self, y: f64, wy: f64) -> Result<f64> {
        let (ups, tau) = (self.ups, self.tau);
        let c = 2.0 * tau * ups;
        let umax = (wy / ups).sqrt();
        let q = gauss_kronrod(
            |u| {
                if u == 0.0 {
                    return 0.0;
                }
                let xi = y / ups + u * u;
                let r = (ups * (2.0 * y + ups * u * u)).sqrt();
                let qq = u * r;
                let z = qq / c;
                match bessel_i_scaled(1.0, z) {
                    // 2u·I₁(q/c)/q = 2 I₁(q/c)/r
                    Ok(i1) => 2.0 * (z - xi / (2.0 * tau)).exp() * i1 / r,
                    Err(_) => f64::NAN,
                }
            },
            0.0,
            umax,
            1e-14,
            1e-11,
        )?;
        Ok(q.value)
    }

    fn cont(&self, p: &ModelParams, x: f64, w: f64) -> Result<f64> {
        if w < 0.0 {
            return Ok(0.0);
        }
        let wy = y_gap(p, self.xf, w);
        let y = y_coordinate(p, x);
        let (p1, p2) = self.prefactors(x);
        let cv = cv_cont(self.ups, self.tau, self.t, wy)?;
        let brace = (-y / (2.0 * self.tau * self.ups)).exp()
            + if y > 0.0 {
                y / (2.0 * self.tau) * self.tail_integral(y, wy)?
            } else {
                0.0
            };
        Ok(p1 * cv + p2 * brace)
    }
}

/// ν = 3/2 closed form at a single point (continuous part).
pub fn pdf_cv_nu_threehalf_at(p: &ModelParams, x: f64, t: f64) -> Result<f64> {
    let th = ThreeHalf::new(p, t)?;
    let ax = x.abs();
    th.cont(p, ax, th.xf - ax)
}

/// ν = 3/2 closed form on a grid, evaluated as printed with β set to the
/// case value. A normalization misfit above 1e−3 is reported in `warnings`.
pub fn pdf_cv_nu_threehalf(p: &ModelParams, grid: &[f64], t: f64) -> Result<PdfResult> {
    let th = ThreeHalf::new(p, t)?;
    let density = grid
        .iter()
        .map(|&x| th.cont(p, x.abs(), th.xf - x.abs()))
        .collect::<Result<Vec<_>>>()?;
    let (p1f, _) = th.prefactors(th.xf);
    let w = p1f * 0.5 * (-t / (2.0 * th.tau)).exp() / (th.lambda + th.xf).powf(1.0 / th.beta - 1.0);
    let q = tanh_sinh(
        |x, _, wd| th.cont(p, x, wd).unwrap_or(f64::NAN),
        0.0,
        th.xf,
        1e-10,
        1e-9,
    )?;
    let mass = 2.0 * q.value + 2.0 * w;
    let mut warnings = vec![];
    if (mass - 1.0).abs() > MISFIT_WARN {
        warnings.push(format!(
            "closed form integrates to {mass:.6} instead of 1 at (α, β) = ({}, {})",
            p.alpha, p.beta
        ));
    }
    Ok(PdfResult {
        grid: grid.to_vec(),
        density,
        atoms: vec![(-th.xf, w), (th.xf, w)],
        support: (-th.xf, th.xf),
        front: FrontKind::Atom,
        singular_origin: false,
        mass,
        warnings,
    })
}

/// τ → 0 limit of the ν = 3/2 closed form: p₁ N(y, t) + p₂ erfc(y/(2√(Bt))).
pub fn pdf_nu_threehalf_diffusion_limit(p: &ModelParams, x: f64, t: f64) -> Result<f64> {
    ThreeHalfCase::of(p)?;
    check_t(t)?;
    if !(p.lambda > 0.0) {
        return Err(Error::domain("the ν = 3/2 closed form needs λ > 0"));
    }
    let (l, b, a, bb) = (p.lambda, p.beta, p.a(), p.b);
    let lb = l.powf(1.0 / b);
    let base = l + x.abs();
    let y = y_coordinate(p, x);
    let gauss = (-y * y / (4.0 * bb * t)).exp() / (4.0 * PI * bb * t).sqrt();
    Ok(lb * base.powf(a - 0.5 / b) * gauss
        + lb * base.powf(a - 1.5 / b) / (2.0 * b) * erfc(y / (2.0 * (bb * t).sqrt())))
}

// ---------------------------------------------------------------------------
// numerical inversion

/// Density from Gaver–Stehfest inversion of the front-shifted image at each
/// grid point (numerical, not a closed form). Atoms come from the large-s
/// limit of the image.
pub fn pdf_cv_inverted(p: &ModelParams, grid: &[f64], t: f64, n_terms: usize) -> Result<PdfResult> {
    check_t(t)?;
    let ups = p.upsilon()?;
    let xf = front_position(p, ups, t);
    let at = |x: f64| -> Result<f64> {
        if x.abs() >= xf {
            return Ok(0.0);
        }
        invert_gaver_stehfest(&pdf_cv_hat_image(p, x)?, t, n_terms)
    };
    let density = grid.iter().map(|&x| at(x)).collect::<Result<Vec<_>>>()?;
    let aw = front_atom_weight(p, t)?;
    let atoms = if aw > 0.0 {
        vec![(-xf, aw), (xf, aw)]
    } else {
        vec![]
    };
    let front = if p.lambda > 0.0 || p.nu_is_half() {
        FrontKind::Atom
    } else if p.nu() > 0.5 {
        FrontKind::Integrable
    } else {
        FrontKind::FinitePart
    };
    let mut warnings = vec![format!(
        "numerical Gaver–Stehfest inversion with N = {n_terms}"
    )];
    let lo = if p.lambda == 0.0 { 1e-9 * xf } else { 0.0 };
    let mass = match gauss_kronrod(|x| at(x).unwrap_or(f64::NAN), lo, xf, 1e-7, 1e-6) {
        Ok(q) => 2.0 * q.value + 2.0 * aw,
        Err(e) => {
            warnings.push(format!("mass quadrature: {e}"));
            f64::NAN
        }
    };
    Ok(PdfResult {
        grid: grid.to_vec(),
        density,
        atoms,
        support: (-xf, xf),
        front,
        singular_origin: false,
        mass,
        warnings,
    })
}
