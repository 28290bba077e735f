//! The twelve acceptance criteria as runnable checks. Each check measures
//! its own wall time and fails if it exceeds its budget.

use crate::analytic::*;
use crate::laplace::{invert_gaver_stehfest, LaplaceImage, DEFAULT_TERMS};
use crate::montecarlo::{
    estimate_eb, estimate_msd, histogram_pdf_range, simulate_hd, simulate_telegrapher, SimConfig,
};
use crate::quadrature::gauss_kronrod;
use crate::specfun::{bessel_i, prabhakar_image, prabhakar_kernel, MlParams};
use crate::stats::{chi_square, chi_square_two_sample};
use crate::voter::{
    drift_diffusion, rates, rates_from_fp, simulate_voter_langevin_sampled, simulate_voter_sampled,
    VoterMethod, VoterParams,
};
use crate::Result;
use rayon::prelude::*;
use serde::Serialize;
use std::time::Instant;

/// Root seed of the Monte-Carlo checks.
pub const VALIDATION_SEED: u64 = 20_260_116;

#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
    pub budget_seconds: f64,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2}. {} ({:.3} s of {} s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.budget_seconds,
            self.detail
        )
    }
}

/// (id, name, runtime budget in seconds).
pub const CRITERIA: [(u8, &str, f64); 12] = [
    (1, "support endpoints", 1e-3),
    (2, "CV reduction", 1.0),
    (3, "Laplace consistency", 30.0),
    (4, "normalization", 30.0),
    (5, "complete monotonicity", 5.0),
    (6, "ODE residual", 5.0),
    (7, "MSD crossover", 5.0),
    (8, "Monte-Carlo telegrapher", 120.0),
    (9, "heterogeneous-diffusion MSD", 300.0),
    (10, "ergodicity breaking", 300.0),
    (11, "voter round-trip", 120.0),
    (12, "Prabhakar pair", 5.0),
];

type Check = Result<(bool, String)>;

pub fn run(id: u8) -> Outcome {
    let (_, name, budget) = CRITERIA[(id - 1) as usize];
    let start = Instant::now();
    let res = match id {
        1 => support_endpoints(),
        2 => cv_reduction(),
        3 => laplace_consistency(),
        4 => normalization(),
        5 => complete_monotonicity(),
        6 => ode_residuals(),
        7 => msd_crossover(),
        8 => telegrapher_monte_carlo(),
        9 => hd_msd(),
        10 => ergodicity_breaking(),
        11 => voter_round_trip(),
        12 => prabhakar_pair(),
        _ => unreachable!("criteria are numbered 1 to 12"),
    };
    let seconds = start.elapsed().as_secs_f64();
    let (ok, mut detail) = match res {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    let in_time = seconds < budget;
    if !in_time {
        detail.push_str("; over the runtime budget");
    }
    Outcome {
        id,
        name,
        passed: ok && in_time,
        detail,
        seconds,
        budget_seconds: budget,
    }
}

pub fn run_all() -> Vec<Outcome> {
    CRITERIA.iter().map(|c| run(c.0)).collect()
}

fn support_endpoints() -> Check {
    let mut out = vec![];
    let mut ok = true;
    for &(beta, want) in &[(0.5, 1.19), (1.5, 0.85)] {
        let p = ModelParams::from_upsilon(0.25, beta, 1.0, 0.1, 0.5)?;
        let (lo, hi) = support_interval(&p, 1.0)?;
        ok &= (hi - want).abs() <= 0.01 && lo == -hi;
        out.push(format!("β={beta}: ±{hi:.4}"));
    }
    Ok((ok, out.join(", ")))
}

fn classical_telegrapher(x: f64, t: f64, ups: f64, tau: f64) -> Result<f64> {
    let lam = (ups * ups * t * t - x * x).sqrt();
    let z = lam / (2.0 * tau * ups);
    Ok((-t / (2.0 * tau)).exp() / (4.0 * tau * ups)
        * (bessel_i(0.0, z)? + ups * t / lam * bessel_i(1.0, z)?))
}

fn cv_reduction() -> Check {
    let (ups, tau, t) = (1.0, 0.1, 1.0);
    let p = ModelParams::from_upsilon(0.0, 1.0, ups, tau, 0.5)?;
    let grid = symmetric_grid(0.999, 400);
    let r = pdf_cv_lambda0(&p, &grid, t)?;
    let mut worst: f64 = 0.0;
    for (x, d) in grid.iter().zip(&r.density) {
        let want = classical_telegrapher(*x, t, ups, tau)?;
        worst = worst.max((d - want).abs() / want);
    }
    let w = 0.5 * (-t / (2.0 * tau)).exp();
    let atom_err = r
        .atoms
        .iter()
        .map(|a| (a.1 - w).abs() / w)
        .fold(0.0, f64::max);
    let ok =
        worst < 1e-10 && r.atoms.len() == 2 && atom_err <= 1e-15 && (r.mass - 1.0).abs() <= 1e-6;
    Ok((
        ok,
        format!(
            "pointwise rel {worst:.1e}, atom rel {atom_err:.1e}, mass − 1 = {:.1e}",
            r.mass - 1.0
        ),
    ))
}

fn laplace_consistency() -> Check {
    type Closed = fn(&ModelParams, &[f64], f64) -> Result<crate::analytic::PdfResult>;
    let cases: Vec<(ModelParams, Closed)> = vec![
        (
            ModelParams::from_upsilon(0.0, 0.5, 1.0, 0.1, 0.0)?,
            pdf_cv_lambda0,
        ),
        (
            ModelParams::from_upsilon(0.0, 1.5, 1.0, 0.1, 0.0)?,
            pdf_cv_lambda0,
        ),
        (
            ModelParams::from_upsilon(0.0, 1.9, 1.0, 0.1, 1.0)?,
            pdf_cv_lambda0,
        ),
        (
            ModelParams::from_upsilon(0.25, 0.5, 1.0, 0.1, 0.5)?,
            pdf_cv_nu_half,
        ),
        (
            ModelParams::from_upsilon(0.5, 3.0, 1.0, 0.1, 1.0)?,
            pdf_cv_nu_threehalf,
        ),
    ];
    let mut worst: f64 = 0.0;
    let mut points = 0;
    for (p, closed) in &cases {
        for &t in &[0.5, 1.0, 2.0] {
            let xf = support_interval(p, t)?.1;
            let grid: Vec<f64> = (1..=20).map(|k| xf * k as f64 / 22.0).collect();
            let want = closed(p, &grid, t)?.density;
            for (x, w) in grid.iter().zip(&want) {
                let inv = invert_gaver_stehfest(&pdf_cv_hat_image(p, *x)?, t, DEFAULT_TERMS)?;
                worst = worst.max((inv - w).abs());
                points += 1;
            }
        }
    }
    Ok((
        worst < 2e-3,
        format!(
            "{points} points over {} regimes, max |Δ| = {worst:.2e}",
            cases.len()
        ),
    ))
}

fn twelve_combos() -> Vec<(f64, f64)> {
    let mut v = vec![];
    for &alpha in &[0.0, 0.5, 1.0] {
        for &beta in &[0.5, 1.0, 1.5, 1.9] {
            v.push((alpha, beta));
        }
    }
    v
}

fn normalization() -> Check {
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for (alpha, beta) in twelve_combos() {
        let p = ModelParams::from_upsilon(0.0, beta, 1.0, 0.1, alpha)?;
        let grid = symmetric_grid(1.0, 16);
        let masses = [
            pdf_cv_lambda0(&p, &grid, 1.0)?.mass,
            pdf_hd_grid(&p, &grid, 1.0)?.mass,
        ];
        let mut all = masses.to_vec();
        if alpha == 0.5 {
            let q = ModelParams { lambda: 0.25, ..p };
            all.push(pdf_cv_nu_half(&q, &grid, 1.0)?.mass);
        }
        for m in all {
            worst = worst.max((m - 1.0).abs());
            n += 1;
        }
    }
    for &lambda in &[0.25, 0.5, 2.0] {
        let p = ModelParams::from_upsilon(lambda, 3.0, 1.0, 0.1, 1.0)?;
        worst =
            worst.max((pdf_cv_nu_threehalf(&p, &symmetric_grid(1.0, 16), 1.0)?.mass - 1.0).abs());
        n += 1;
    }
    Ok((
        worst <= 1e-4,
        format!("{n} densities, max |mass − 1| = {worst:.2e}"),
    ))
}

fn complete_monotonicity() -> Check {
    let s_grid: Vec<f64> = (0..12).map(|i| 0.2 * 1.5f64.powi(i)).collect();
    let mut tried = 0;
    let mut failed = vec![];
    for &lambda in &[0.0, 0.25, 1.0] {
        for &beta in &[0.5, 1.0, 1.5, 2.0, 3.0] {
            for &alpha in &[0.0, 0.5, 1.0] {
                let p = ModelParams::from_upsilon(lambda, beta, 1.0, 0.1, alpha)?;
                if !p.valid_cmf() || (lambda == 0.0 && p.nu() >= 1.0) {
                    continue;
                }
                for &x in &[0.1, 0.7] {
                    tried += 1;
                    if !cm_check(&p, x, &s_grid, 4)? {
                        failed.push(format!("(λ={lambda}, β={beta}, α={alpha}, x={x})"));
                    }
                }
            }
        }
    }
    let control = cm_check_image(|s| Ok((2.0 + s.sin()) / s), &s_grid, 4)?;
    Ok((
        failed.is_empty() && !control,
        format!(
            "{} of {tried} cases CM through order 4{}; non-CMF control {}",
            tried - failed.len(),
            if failed.is_empty() {
                String::new()
            } else {
                format!(" (failed {})", failed.join(" "))
            },
            if control {
                "wrongly passed"
            } else {
                "rejected"
            }
        ),
    ))
}

/// The six parameter sets (λ, β, α) of the ODE check.
pub const ODE_SETS: [(f64, f64, f64); 6] = [
    (0.5, 2.0, 0.5),
    (0.3, 0.5, 0.0),
    (1.0, 1.0, 0.5),
    (0.5, 3.0, 1.0),
    (0.2, 1.5, 1.0),
    (0.7, 0.7, 0.3),
];

fn ode_residuals() -> Check {
    let xs = [0.02, 0.1, 0.5, 1.0, 3.0];
    let ss = [0.01, 0.1, 1.0, 5.0, 20.0];
    let mut worst: f64 = 0.0;
    let mut weakest_control = f64::INFINITY;
    let mut weak = vec![];
    for &(lambda, beta, alpha) in &ODE_SETS {
        let p = ModelParams::new(lambda, beta, 1.0, 0.1, alpha)?;
        let mut control: f64 = 0.0;
        for &x in &xs {
            for &s in &ss {
                worst = worst.max(ode_residual(&p, x, s)?);
                control = control.max(ode_residual_with_order(&p, x, s, p.nu() + 0.1)?);
            }
        }
        if control <= 1e-2 {
            weak.push(format!("(λ={lambda}, β={beta}, α={alpha}): {control:.2e}"));
        }
        weakest_control = weakest_control.min(control);
    }
    Ok((
        worst < 1e-6 && weak.is_empty(),
        format!(
            "max residual {worst:.1e}; weakest per-set control {weakest_control:.2e}{}",
            if weak.is_empty() {
                String::new()
            } else {
                format!(" (≤ 1e-2 at {})", weak.join(", "))
            }
        ),
    ))
}

fn msd_crossover() -> Check {
    let mut ok = true;
    let mut out = vec![];
    for &beta in &[0.5, 1.0, 1.5] {
        let p = ModelParams::from_upsilon(0.0, beta, 1.0, 0.1, 0.5)?;
        let t_long = LONG_WINDOW.1 * p.tau;
        let c = msd_cv(&p, &[t_long])?;
        let amp = c.msd[0] / msd_hd(&p, t_long)? - 1.0;
        ok &= (c.exponent_short - 2.0 * beta).abs() <= 0.05
            && (c.exponent_long - beta).abs() <= 0.05
            && amp.abs() <= 0.01;
        out.push(format!(
            "β={beta}: {:.3}/{:.3}, amplitude {:+.1e}",
            c.exponent_short, c.exponent_long, amp
        ));
    }
    Ok((ok, out.join("; ")))
}

fn telegrapher_monte_carlo() -> Check {
    let p = ModelParams::from_upsilon(0.0, 1.0, 1.0, 0.1, 0.5)?;
    let cfg = SimConfig::new(
        p,
        Interpretation::Stratonovich,
        0.01,
        1.0,
        1_000_000,
        VALIDATION_SEED,
    )?
    .with_record_every(100)?;
    let e = simulate_telegrapher(&cfg)?;
    let xf = support_interval(&p, 1.0)?.1;
    let outside = e
        .trajectories
        .iter()
        .filter(|tr| tr.positions[1].abs() > xf * (1.0 + 1e-12))
        .count();
    let bins = 50;
    let h = histogram_pdf_range(&e, 1.0, bins, -0.9, 0.9)?;
    let n = e.trajectories.len() as f64;
    let width = 1.8 / bins as f64;
    let observed: Vec<u64> = h
        .density
        .iter()
        .map(|d| (d * n * width).round() as u64)
        .collect();
    let expected = (0..bins)
        .map(|k| {
            let a = -0.9 + k as f64 * width;
            let q = gauss_kronrod(
                |x| pdf_cv_lambda0_at(&p, x, 1.0).unwrap_or(f64::NAN),
                a,
                a + width,
                1e-12,
                1e-10,
            )?;
            Ok(n * q.value)
        })
        .collect::<Result<Vec<f64>>>()?;
    let test = chi_square(&observed, &expected, 0)?;
    let atoms = h.atoms.iter().map(|a| a.1).sum::<f64>();
    Ok((
        test.p_value > 0.01 && outside == 0,
        format!(
            "χ² = {:.1} on {} dof, p = {:.3}; {outside} samples outside support; front mass {atoms:.5} (exact {:.5})",
            test.statistic,
            test.dof,
            test.p_value,
            (-5.0f64).exp()
        ),
    ))
}

fn hd_msd() -> Check {
    let mut ok = true;
    let mut out = vec![];
    for &beta in &[0.5, 1.5] {
        let p = ModelParams::new(0.0, beta, 1.0, 0.0, 0.5)?;
        let cfg = SimConfig::new(
            p,
            Interpretation::Stratonovich,
            0.01,
            10.0,
            100_000,
            VALIDATION_SEED + 1,
        )?
        .with_regularization(1e-4)?
        .with_record_every(50)?;
        let e = simulate_hd(&cfg)?;
        let times: Vec<f64> = (2..=20).map(|i| 0.5 * i as f64).collect();
        let m = estimate_msd(&e, &times)?;
        let mut worst: f64 = 0.0;
        for (t, v) in times.iter().zip(&m.msd) {
            worst = worst.max((v / msd_hd(&p, *t)? - 1.0).abs());
        }
        ok &= worst < 0.05 && e.truncated_count() == 0;
        out.push(format!("β={beta}: max rel dev {worst:.4}"));
    }
    Ok((ok, out.join("; ")))
}

fn ergodicity_breaking() -> Check {
    let mut ok = true;
    let mut out = vec![];
    for &(beta, want, tol) in &[(0.5, 0.10, 0.02), (1.0, 1.0, 0.05)] {
        let p = ModelParams::new(0.0, beta, 1.0, 0.0, 0.5)?;
        let cfg = SimConfig::new(
            p,
            Interpretation::Stratonovich,
            0.01,
            100.0,
            10_000,
            VALIDATION_SEED + 2,
        )?
        .with_record_every(10)?;
        let eb = estimate_eb(&simulate_hd(&cfg)?, 1.0, 100.0)?;
        ok &= (eb - want).abs() <= tol;
        out.push(format!("β={beta}: {eb:.4} (target {want} ± {tol})"));
    }
    Ok((ok, out.join("; ")))
}

fn voter_round_trip() -> Check {
    let mut worst: f64 = 0.0;
    for &a in &[0.0, 0.3, 1.0] {
        let p = VoterParams::new(50, a, 2.0)?;
        for n in 0..=50u64 {
            let x = n as f64 / 50.0;
            let d = |x: f64| drift_diffusion(&p, x).map(|v| v.1).unwrap_or(f64::NAN);
            let f = |x: f64| drift_diffusion(&p, x).map(|v| v.0).unwrap_or(f64::NAN);
            let (rp, rm) = rates_from_fp(d, f, 50, x)?;
            let (ep, em) = rates(&p, n)?;
            worst = worst.max((rp - ep).abs()).max((rm - em).abs());
        }
    }
    let test = voter_cross_engine(1000, 0.1, 1000, VALIDATION_SEED + 3)?;
    Ok((
        worst <= 1e-12 && test.p_value > 0.01,
        format!(
            "max rate mismatch {worst:.1e}; agent vs Langevin χ² p = {:.3}",
            test.p_value
        ),
    ))
}

/// Two-sample χ² of stationary histograms from agent-based (Gillespie) and
/// Langevin replicas: burn-in 50, then ten samples 30 time units apart.
pub fn voter_cross_engine(
    n_agents: u64,
    a: f64,
    replicas: u64,
    seed: u64,
) -> Result<crate::stats::TestResult> {
    let p = VoterParams::new(n_agents, a, 2.0)?;
    let (burn, gap) = (50.0, 30.0);
    let t_end = burn + 9.0 * gap;
    let bins = 50usize;
    let width = (n_agents as f64 / bins as f64).ceil();
    let bin = move |n: f64| (((n + 0.5) / width).floor() as usize).min(bins - 1);
    let sampled = |times: &[f64]| times.iter().map(|t| *t >= burn - 1e-9).collect::<Vec<_>>();
    let agent = (0..replicas)
        .into_par_iter()
        .map(|r| {
            let s = simulate_voter_sampled(
                &p,
                n_agents / 2,
                t_end,
                seed,
                r,
                VoterMethod::Gillespie,
                gap,
            )?;
            let mut h = vec![0u64; bins];
            for (keep, n) in sampled(&s.times).iter().zip(&s.counts) {
                if *keep {
                    h[bin(*n as f64)] += 1;
                }
            }
            Ok(h)
        })
        .collect::<Result<Vec<_>>>()?;
    let dt = 0.01;
    let lang = (0..replicas)
        .into_par_iter()
        .map(|r| {
            let s = simulate_voter_langevin_sampled(
                &p,
                0.5,
                dt,
                t_end,
                seed + 1,
                r,
                (gap / dt).round() as usize,
            )?;
            let mut h = vec![0u64; bins];
            for (keep, x) in sampled(&s.times).iter().zip(&s.x) {
                if *keep {
                    h[bin(x * n_agents as f64)] += 1;
                }
            }
            Ok(h)
        })
        .collect::<Result<Vec<_>>>()?;
    let total = |v: &[Vec<u64>]| {
        (0..bins)
            .map(|i| v.iter().map(|h| h[i]).sum())
            .collect::<Vec<u64>>()
    };
    chi_square_two_sample(&total(&agent), &total(&lang))
}

/// (a, b, c) triples of the Prabhakar battery, all with 0 < ac < b.
pub const PRABHAKAR_BATTERY: [(f64, f64, f64); 9] = [
    (0.5, 1.0, 1.0),
    (0.7, 1.5, 0.8),
    (0.3, 0.9, 2.0),
    (0.5, 1.5, 0.5),
    (0.8, 2.0, 1.0),
    (0.6, 1.1, 1.2),
    (0.95, 1.5, 1.0),
    (1.0, 1.5, 0.5),
    (1.0, 4.0, 1.5),
];

/// Gaver–Stehfest order used for the Prabhakar battery.
pub const PRABHAKAR_TERMS: usize = 16;

fn prabhakar_pair() -> Check {
    let mut worst: f64 = 0.0;
    let mut at = String::new();
    for &(a, b, c) in &PRABHAKAR_BATTERY {
        let p = MlParams::new(a, b, c)?;
        for &kappa in &[0.5, 1.0, 2.0] {
            let img = LaplaceImage::new(move |s| Ok(prabhakar_image(&p, kappa, s)));
            for i in 0..=8 {
                let t = 0.1 * 100f64.powf(i as f64 / 8.0);
                let got = invert_gaver_stehfest(&img, t, PRABHAKAR_TERMS)?;
                let want = prabhakar_kernel(&p, kappa, t)?;
                let rel = ((got - want) / want).abs();
                if rel > worst {
                    worst = rel;
                    at = format!("(a,b,c)=({a},{b},{c}) κ={kappa} t={t:.3}");
                }
            }
        }
    }
    Ok((worst <= 1e-5, format!("max rel {worst:.2e} at {at}")))
}
