//! Numerical integration on the real line.
//!
//! `gauss_kronrod` is an adaptive G7K15 rule for smooth integrands.
//! `tanh_sinh` handles algebraic endpoint singularities; the integrand
//! receives the distance to each endpoint as well as the abscissa, so
//! expressions like (x_f − x)^(−0.9) can be formed without cancellation.

use crate::{Error, Result};

/// Value and error estimate of a quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quad {
    pub value: f64,
    pub error: f64,
    pub evals: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = fc * WGK[7];
    let mut rg = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        rk += WGK[j] * s;
        if j % 2 == 1 {
            rg += WG[j / 2] * s;
        }
    }
    (rk * h, ((rk - rg) * h).abs())
}

/// Adaptive G7K15 on [a, b]. Stops when the summed error estimate is below
/// max(abs_tol, rel_tol·|I|).
pub fn gauss_kronrod<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Quad> {
    const MAX_SEGMENTS: usize = 2000;
    if a == b {
        return Ok(Quad {
            value: 0.0,
            error: 0.0,
            evals: 0,
        });
    }
    let (v, e) = gk15(&mut f, a, b);
    let mut segs = vec![(a, b, v, e)];
    let mut evals = 15;
    loop {
        let total: f64 = segs.iter().map(|s| s.2).sum();
        let err: f64 = segs.iter().map(|s| s.3).sum();
        if !total.is_finite() {
            return Err(Error::Numerical("non-finite integrand".into()));
        }
        if err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(Quad {
                value: total,
                error: err,
                evals,
            });
        }
        if segs.len() >= MAX_SEGMENTS {
            return Err(Error::convergence("adaptive Gauss-Kronrod", total));
        }
        let (i, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty");
        let (sa, sb, _, _) = segs.swap_remove(i);
        let m = 0.5 * (sa + sb);
        if m <= sa || m >= sb {
            let total: f64 = segs.iter().map(|s| s.2).sum();
            return Err(Error::convergence(
                "adaptive Gauss-Kronrod (interval exhausted)",
                total,
            ));
        }
        let (v1, e1) = gk15(&mut f, sa, m);
        let (v2, e2) = gk15(&mut f, m, sb);
        evals += 30;
        segs.push((sa, m, v1, e1));
        segs.push((m, sb, v2, e2));
    }
}

/// Tanh-sinh quadrature on [a, b]. The integrand is called as
/// `f(x, x − a, b − x)` with both offsets computed without cancellation.
pub fn tanh_sinh<F: FnMut(f64, f64, f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Quad> {
    const MAX_LEVEL: u32 = 11;
    if a == b {
        return Ok(Quad {
            value: 0.0,
            error: 0.0,
            evals: 0,
        });
    }
    let half = 0.5 * (b - a);
    let hpi = std::f64::consts::FRAC_PI_2;
    // contribution of the pair of nodes at ±t (without the step h)
    let pair = |t: f64, f: &mut F| -> Option<f64> {
        let u = hpi * t.sinh();
        let e = (-2.0 * u).exp();
        // 1 − tanh u and the weight, both written in e^(−2u)
        let d = 2.0 * e / (1.0 + e);
        let w = hpi * t.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e));
        let off = half * d;
        if off <= f64::MIN_POSITIVE || w == 0.0 {
            return None;
        }
        let other = 2.0 * half - off;
        let left = f(a + off, off, other);
        let right = f(b - off, other, off);
        Some(w * (left + right))
    };
    let mid = 0.5 * (a + b);
    let center = hpi * f(mid, half, half);
    let mut evals = 1;
    let mut h = 1.0;
    let mut sum = center;
    let mut k = 1;
    while let Some(p) = pair(k as f64 * h, &mut f) {
        sum += p;
        evals += 2;
        k += 1;
    }
    let mut estimate = sum * h * half;
    let mut last_diff = f64::INFINITY;
    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        let mut k = 1;
        loop {
            match pair(k as f64 * h, &mut f) {
                Some(p) => sum += p,
                None => break,
            }
            evals += 2;
            k += 2;
        }
        let next = sum * h * half;
        if !next.is_finite() {
            return Err(Error::Numerical("non-finite integrand in tanh-sinh".into()));
        }
        let diff = (next - estimate).abs();
        estimate = next;
        if level >= 3 && diff <= abs_tol.max(rel_tol * estimate.abs()) {
            // quadratic convergence: the next correction is far smaller
            let error = if last_diff.is_finite() && diff < last_diff {
                diff * diff / last_diff
            } else {
                diff
            };
            return Ok(Quad {
                value: estimate,
                error,
                evals,
            });
        }
        last_diff = diff;
    }
    Err(Error::convergence("tanh-sinh", estimate))
}

/// ∫ₐ^∞ f. Uses x = a + u/(1−u) on [0, 1) with tanh-sinh; the integrand
/// receives (x, x − a).
pub fn tanh_sinh_to_infinity<F: FnMut(f64, f64) -> f64>(
    mut f: F,
    a: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Quad> {
    tanh_sinh(
        |_, u, v| {
            // u + v = 1; x − a = u/v
            let off = u / v;
            if !off.is_finite() {
                return 0.0;
            }
            let val = f(a + off, off) / (v * v);
            if val.is_finite() {
                val
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        abs_tol,
        rel_tol,
    )
}
