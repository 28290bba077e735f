use crate::args::*;
use crate::config::FileConfig;
use crate::output::{csv, emit_csv, ensure_dir, linspace, logspace, num, write, write_json};
use crate::{Failure, Outcome};
use hetcv_core::analytic::*;
use hetcv_core::laplace::{invert_on_grid, LaplaceImage};
use hetcv_core::montecarlo::*;
use hetcv_core::specfun::*;
use hetcv_core::stats::mean_se;
use hetcv_core::voter::*;
use hetcv_core::{validation, Error, VERSION};
use serde::Serialize;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::path::Path;

pub struct Context {
    pub argv: Vec<String>,
    pub file: Option<FileConfig>,
}

impl Context {
    fn meta(&self, command: &str, resolved: &impl Serialize, extra: Value) -> Value {
        let mut m = json!({
            "command": command,
            "version": VERSION,
            "argv": self.argv,
            "config_file": self.file.as_ref().map(|f| json!({
                "path": f.path,
                "values": f.values,
                "overridden_by_flags": f.overridden,
            })),
            "resolved": resolved,
        });
        if let (Value::Object(m), Value::Object(x)) = (&mut m, extra) {
            m.extend(x);
        }
        m
    }
}

fn domain(msg: impl Into<String>) -> Failure {
    Failure::Core(Error::Domain(msg.into()))
}

fn warn(msg: &str) {
    eprintln!("warning: {msg}");
}

impl ModelArgs {
    fn model(&self) -> Outcome<ModelParams> {
        Ok(ModelParams::new(
            self.lambda,
            self.beta,
            self.b,
            self.tau,
            self.alpha,
        )?)
    }
}

fn seed_or_env(seed: Option<u64>) -> Outcome<u64> {
    if let Some(s) = seed {
        return Ok(s);
    }
    match std::env::var("HETCV_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| {
            Failure::Config(format!("HETCV_SEED must be an unsigned integer, got {v:?}"))
        }),
        Err(_) => Ok(0),
    }
}

fn require_out<'a>(out: &'a Option<std::path::PathBuf>, cmd: &str) -> Outcome<&'a Path> {
    out.as_deref()
        .ok_or_else(|| Failure::Usage(format!("{cmd} needs --out <dir>")))
}

fn check_count(n: usize, least: usize, what: &str) -> Outcome<()> {
    if n < least {
        return Err(domain(format!("{what} must be ≥ {least}, got {n}")));
    }
    Ok(())
}

pub fn pdf(a: &PdfArgs, ctx: &Context) -> Outcome<()> {
    let p = a.params.model()?;
    check_count(a.n, 2, "--n")?;
    let (lo, hi) = match (a.xmin, a.xmax) {
        (Some(l), Some(h)) => (l, h),
        (l, h) => {
            let edge = match a.model {
                ModelKind::Cv => 1.05 * support_interval(&p, a.t)?.1,
                ModelKind::Hd => {
                    let y = 5.0 * (2.0 * p.b * a.t).sqrt();
                    (y / p.beta + p.lambda.powf(1.0 / p.beta)).powf(p.beta) - p.lambda
                }
            };
            (l.unwrap_or(-edge), h.unwrap_or(edge))
        }
    };
    if !(hi > lo) {
        return Err(domain(format!("need xmin < xmax, got [{lo}, {hi}]")));
    }
    let grid = linspace(lo, hi, a.n);
    let (method, r) = match a.model {
        ModelKind::Hd => ("heterogeneous diffusion", pdf_hd_grid(&p, &grid, a.t)?),
        ModelKind::Cv if a.invert => (
            "Gaver-Stehfest",
            pdf_cv_inverted(&p, &grid, a.t, a.n_terms)?,
        ),
        ModelKind::Cv if p.lambda == 0.0 => ("closed form, λ = 0", pdf_cv_lambda0(&p, &grid, a.t)?),
        ModelKind::Cv if (p.nu() - 0.5).abs() < 1e-12 => {
            ("closed form, ν = 1/2", pdf_cv_nu_half(&p, &grid, a.t)?)
        }
        ModelKind::Cv if ThreeHalfCase::of(&p).is_ok() => {
            ("closed form, ν = 3/2", pdf_cv_nu_threehalf(&p, &grid, a.t)?)
        }
        ModelKind::Cv => (
            "Gaver-Stehfest",
            pdf_cv_inverted(&p, &grid, a.t, a.n_terms)?,
        ),
    };
    for w in &r.warnings {
        warn(w);
    }
    let body = csv(
        &["x", "density"],
        r.grid.iter().zip(&r.density).map(|(x, d)| vec![*x, *d]),
    );
    emit_csv(a.out.as_deref(), "pdf.csv", &body)?;
    if let Some(dir) = a.out.as_deref() {
        let side = json!({
            "method": method,
            "support": [r.support.0, r.support.1],
            "atoms": r.atoms.iter().map(|(x, w)| json!({"x": x, "weight": w})).collect::<Vec<_>>(),
            "front": r.front,
            "singular_origin": r.singular_origin,
            "mass": r.mass,
            "warnings": r.warnings,
        });
        write_json(dir, "pdf.json", &side)?;
        write_json(
            dir,
            "meta.json",
            &ctx.meta("pdf", a, json!({ "method": method })),
        )?;
    }
    Ok(())
}

pub fn msd(a: &MsdArgs, ctx: &Context) -> Outcome<()> {
    let p = a.params.model()?;
    check_count(a.n, 2, "--n")?;
    if !(a.tmin > 0.0 && a.tmax > a.tmin) {
        return Err(domain(format!(
            "need 0 < tmin < tmax, got [{}, {}]",
            a.tmin, a.tmax
        )));
    }
    let times = logspace(a.tmin, a.tmax, a.n);
    let (values, extra) = match a.model {
        ModelKind::Cv if p.lambda == 0.0 => {
            let c = msd_cv(&p, &times)?;
            let x = json!({"exponent_short": c.exponent_short, "exponent_long": c.exponent_long});
            (c.msd, x)
        }
        ModelKind::Cv => (
            times
                .iter()
                .map(|t| msd_lambda(&p, *t))
                .collect::<Result<Vec<_>, _>>()?,
            json!({}),
        ),
        ModelKind::Hd => (
            times
                .iter()
                .map(|t| msd_hd(&p, *t))
                .collect::<Result<Vec<_>, _>>()?,
            json!({}),
        ),
    };
    let body = csv(
        &["t", "msd"],
        times.iter().zip(&values).map(|(t, v)| vec![*t, *v]),
    );
    emit_csv(a.out.as_deref(), "msd.csv", &body)?;
    if let Some(dir) = a.out.as_deref() {
        write_json(dir, "meta.json", &ctx.meta("msd", a, extra))?;
    }
    Ok(())
}

pub fn acf(a: &AcfArgs, ctx: &Context) -> Outcome<()> {
    let p = a.params.model()?;
    check_count(a.n, 1, "--n")?;
    if !(a.t1 > 0.0 && a.tmax > a.t1) {
        return Err(domain(format!(
            "need 0 < t1 < tmax, got t1 = {}, tmax = {}",
            a.t1, a.tmax
        )));
    }
    let t2: Vec<f64> = (1..=a.n)
        .map(|i| a.t1 * (a.tmax / a.t1).powf(i as f64 / a.n as f64))
        .collect();
    let rows = t2
        .iter()
        .map(|t| Ok(vec![*t, autocorrelation_hd(&p, a.t1, *t)?]))
        .collect::<Outcome<Vec<_>>>()?;
    emit_csv(a.out.as_deref(), "acf.csv", &csv(&["t2", "acf"], rows))?;
    if let Some(dir) = a.out.as_deref() {
        write_json(dir, "meta.json", &ctx.meta("acf", a, json!({})))?;
    }
    Ok(())
}

pub fn tamsd(a: &TamsdArgs, ctx: &Context) -> Outcome<()> {
    let p = a.params.model()?;
    check_count(a.n, 1, "--n")?;
    let lag_max = a.lag_max.unwrap_or(a.horizon / 10.0);
    if !(a.lag_min > 0.0 && lag_max >= a.lag_min) {
        return Err(domain(format!(
            "need 0 < lag_min ≤ lag_max, got [{}, {lag_max}]",
            a.lag_min
        )));
    }
    let lags = if a.n == 1 {
        vec![a.lag_min]
    } else {
        logspace(a.lag_min, lag_max, a.n)
    };
    let rows = lags
        .iter()
        .map(|l| {
            Ok(vec![
                *l,
                tamsd_hd(&p, *l, a.horizon)?,
                tamsd_exact_hd(&p, *l, a.horizon)?,
            ])
        })
        .collect::<Outcome<Vec<_>>>()?;
    emit_csv(
        a.out.as_deref(),
        "tamsd.csv",
        &csv(&["lag", "tamsd_leading", "tamsd_exact"], rows),
    )?;
    if let Some(dir) = a.out.as_deref() {
        write_json(dir, "meta.json", &ctx.meta("tamsd", a, json!({})))?;
    }
    Ok(())
}

fn interpretation(alpha: f64) -> Outcome<Interpretation> {
    [
        Interpretation::Hk,
        Interpretation::Stratonovich,
        Interpretation::Ito,
    ]
    .into_iter()
    .find(|i| i.alpha() == alpha)
    .ok_or_else(|| domain(format!("simulation needs α ∈ {{0, 1/2, 1}}, got {alpha}")))
}

fn file_time(t: f64) -> String {
    format!("{t}")
}

pub fn simulate(a: &SimulateArgs, ctx: &Context) -> Outcome<()> {
    let dir = require_out(&a.out, "simulate")?;
    let p = a.params.model()?;
    let seed = seed_or_env(a.seed)?;
    let cfg = SimConfig::new(p, interpretation(p.alpha)?, a.dt, a.t_end, a.n_traj, seed)?
        .with_x0(a.x0)?
        .with_regularization(a.regularization)?
        .with_record_every(a.record_every)?;
    let e = match a.engine {
        EngineKind::Hd => simulate_hd(&cfg)?,
        EngineKind::Telegrapher => simulate_telegrapher(&cfg)?,
    };
    if e.truncated_count() > 0 {
        warn(&format!(
            "{} trajectories hit the overflow guard and were dropped",
            e.truncated_count()
        ));
    }
    ensure_dir(dir)?;

    let times: Vec<f64> = e.times[1..].to_vec();
    let m = estimate_msd(&e, &times)?;
    let rows = (0..times.len()).map(|i| vec![times[i], m.msd[i], m.std_err[i]]);
    write(dir, "msd.csv", &csv(&["t", "msd", "std_err"], rows))?;

    let step = e.times[1] - e.times[0];
    let kmax = (a.t_end / 10.0 / step + 1e-9).floor() as usize;
    let mut tamsd_rows = vec![];
    let mut eb = vec![];
    if kmax >= 1 && a.n_lags >= 1 {
        let mut ks: Vec<usize> = logspace(1.0, kmax as f64, a.n_lags.min(kmax))
            .iter()
            .map(|k| k.round() as usize)
            .collect();
        ks.dedup();
        for k in ks {
            let lag = k as f64 * step;
            let v = e
                .usable()
                .map(|tr| estimate_tamsd(tr, lag))
                .collect::<Result<Vec<f64>, _>>()?;
            let (mean, se) = mean_se(&v);
            tamsd_rows.push(vec![lag, mean, se]);
            if let Ok(r) = estimate_eb(&e, lag, a.t_end) {
                eb.push(json!({"lag": lag, "ratio": r}));
            }
        }
    } else {
        warn("t_end/10 is shorter than the sampling step; tamsd.csv has no rows");
    }
    write(
        dir,
        "tamsd.csv",
        &csv(&["lag", "tamsd", "std_err"], tamsd_rows),
    )?;

    let hist_times = if a.hist_t.is_empty() {
        vec![a.t_end]
    } else {
        a.hist_t.clone()
    };
    let mut hists = vec![];
    for &t in &hist_times {
        let h = histogram_pdf(&e, t, a.bins)?;
        let name = format!("hist_t{}.csv", file_time(t));
        let body = csv(
            &["x", "density"],
            h.grid.iter().zip(&h.density).map(|(x, d)| vec![*x, *d]),
        );
        write(dir, &name, &body)?;
        for w in &h.warnings {
            warn(w);
        }
        hists.push(json!({
            "t": t,
            "file": name,
            "range": [h.support.0, h.support.1],
            "atoms": h.atoms.iter().map(|(x, w)| json!({"x": x, "weight": w})).collect::<Vec<_>>(),
            "warnings": h.warnings,
        }));
    }

    if a.trajectories {
        let mut s = String::from("traj_id,t,x\n");
        for tr in e.usable() {
            for (t, x) in tr.times.iter().zip(&tr.positions) {
                let _ = writeln!(s, "{},{},{}", tr.seed_stream, num(*t), num(*x));
            }
        }
        write(dir, "trajectories.csv", &s)?;
    }

    let extra = json!({
        "seed": seed,
        "engine": e.engine,
        "sim_config": cfg,
        "regularization_used": e.regularization_used,
        "truncated": e.truncated_count(),
        "msd_exponent": m.exponent_long,
        "ergodicity_breaking": eb,
        "histograms": hists,
    });
    write_json(dir, "meta.json", &ctx.meta("simulate", a, extra))?;
    Ok(())
}

pub fn simulate_voter(a: &VoterArgs, ctx: &Context) -> Outcome<()> {
    let dir = require_out(&a.out, "simulate-voter")?;
    let p = VoterParams::new(a.n, a.a, a.beta)?;
    let seed = seed_or_env(a.seed)?;
    let n0 = a.n0.unwrap_or(a.n / 2);
    let sample_dt = a.sample_dt.unwrap_or(a.t_end / 1000.0);
    let burn = a.burn_in.unwrap_or(a.t_end / 10.0);
    check_count(a.bins, 1, "--bins")?;
    let nf = a.n as f64;
    let mut path = String::new();
    let mut xs = vec![];
    let mut absorbed = false;
    match a.method {
        VoterMethodKind::Gillespie | VoterMethodKind::Discrete => {
            let method = match a.method {
                VoterMethodKind::Gillespie => VoterMethod::Gillespie,
                _ => VoterMethod::Discrete { dt: a.dt },
            };
            let r = simulate_voter_sampled(&p, n0, a.t_end, seed, 0, method, sample_dt)?;
            absorbed = r.absorbed;
            path.push_str("t,n\n");
            for (t, n) in r.times.iter().zip(&r.counts) {
                let _ = writeln!(path, "{},{n}", num(*t));
                if *t >= burn {
                    xs.push(*n as f64 / nf);
                }
            }
        }
        VoterMethodKind::Langevin => {
            let every = ((sample_dt / a.dt).round() as usize).max(1);
            let r =
                simulate_voter_langevin_sampled(&p, n0 as f64 / nf, a.dt, a.t_end, seed, 0, every)?;
            path.push_str("t,x\n");
            for (t, x) in r.times.iter().zip(&r.x) {
                let _ = writeln!(path, "{},{}", num(*t), num(*x));
                if *t >= burn {
                    xs.push(*x);
                }
            }
        }
    }
    if xs.is_empty() {
        return Err(domain(format!("no samples after the burn-in {burn}")));
    }
    ensure_dir(dir)?;
    write(dir, "path.csv", &path)?;
    let w = 1.0 / a.bins as f64;
    let mut counts = vec![0u64; a.bins];
    for x in &xs {
        counts[((x / w) as usize).min(a.bins - 1)] += 1;
    }
    let total = xs.len() as f64;
    let rows = counts
        .iter()
        .enumerate()
        .map(|(i, c)| vec![(i as f64 + 0.5) * w, *c as f64 / (total * w)]);
    write(dir, "stationary_hist.csv", &csv(&["x", "density"], rows))?;
    let extra = json!({
        "seed": seed,
        "n0": n0,
        "sample_dt": sample_dt,
        "burn_in": burn,
        "histogram_samples": xs.len(),
        "absorbed": absorbed,
    });
    write_json(dir, "meta.json", &ctx.meta("simulate-voter", a, extra))?;
    Ok(())
}

pub fn invert_laplace(a: &InvertArgs, ctx: &Context) -> Outcome<()> {
    let img: LaplaceImage<'static> = match (a.preset, &a.params) {
        (Some(Preset::Constant), _) => LaplaceImage::new(|s| Ok(1.0 / s)),
        (Some(Preset::Exponential), _) => LaplaceImage::new(|s| Ok(1.0 / (s + 1.0))),
        (Some(Preset::Ramp), _) => LaplaceImage::new(|s| Ok(1.0 / (s * s))),
        (Some(Preset::Step), _) => LaplaceImage::new(|s| Ok((-s).exp() / s)),
        (Some(Preset::Prabhakar), _) => {
            let q = MlParams::new(1.0, 4.0, 1.5)?;
            LaplaceImage::new(move |s| Ok(prabhakar_image(&q, 2.0, s)))
        }
        (Some(Preset::Cv), _) => pdf_cv_hat_image(&a.model.model()?, a.x)?,
        (None, Some(v)) => {
            if v.len() != 4 {
                return Err(Failure::Usage(format!(
                    "--params takes a,b,c,kappa, got {} values",
                    v.len()
                )));
            }
            let q = MlParams::new(v[0], v[1], v[2])?;
            let kappa = v[3];
            if !(kappa > 0.0) {
                return Err(domain(format!("κ must be > 0, got {kappa}")));
            }
            LaplaceImage::new(move |s| Ok(prabhakar_image(&q, kappa, s)))
        }
        (None, None) => {
            return Err(Failure::Usage(
                "invert-laplace needs --preset <name> or --params a,b,c,kappa".into(),
            ))
        }
    };
    let times = if a.times.is_empty() {
        check_count(a.n, 1, "--n")?;
        logspace(a.tmin, a.tmax, a.n)
    } else {
        a.times.clone()
    };
    let inv = invert_on_grid(&img, &times, a.n_terms)?;
    for r in inv.iter().filter(|r| r.flagged()) {
        warn(&format!(
            "t = {}: N vs N−2 difference {:.3e} exceeds the diagnostic threshold",
            r.t, r.diagnostic
        ));
    }
    let rows = inv.iter().map(|r| vec![r.t, r.value, r.diagnostic]);
    emit_csv(
        a.out.as_deref(),
        "inversion.csv",
        &csv(&["t", "value", "diagnostic"], rows),
    )?;
    if let Some(dir) = a.out.as_deref() {
        let flagged: Vec<f64> = inv.iter().filter(|r| r.flagged()).map(|r| r.t).collect();
        write_json(
            dir,
            "meta.json",
            &ctx.meta("invert-laplace", a, json!({ "flagged_times": flagged })),
        )?;
    }
    Ok(())
}

pub fn validate(a: &ValidateArgs, ctx: &Context) -> Outcome<()> {
    let ids: Vec<u8> = if !a.criterion.is_empty() {
        a.criterion.clone()
    } else {
        match a.suite {
            Suite::All => (1..=12).collect(),
            Suite::Analytic => vec![1, 2, 4, 5, 6, 7],
            Suite::Laplace => vec![3, 12],
            Suite::Montecarlo => vec![8, 9, 10],
            Suite::Voter => vec![11],
        }
    };
    let mut outcomes = vec![];
    for id in ids {
        let o = validation::run(id);
        println!("{}", o.line());
        outcomes.push(o);
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!(
        "{} of {} criteria passed",
        outcomes.len() - failed,
        outcomes.len()
    );
    if let Some(dir) = a.out.as_deref() {
        ensure_dir(dir)?;
        write_json(dir, "validation.json", &outcomes)?;
        write_json(
            dir,
            "meta.json",
            &ctx.meta("validate", a, json!({ "failed": failed })),
        )?;
    }
    if failed > 0 {
        return Err(Failure::ChecksFailed(failed));
    }
    Ok(())
}

pub fn specfun_eval(a: &EvalArgs) -> Outcome<()> {
    let need = |v: Option<f64>, flag: &str| {
        v.ok_or_else(|| Failure::Usage(format!("--fn {:?} needs --{flag}", a.func).to_lowercase()))
    };
    let v = match a.func {
        SpecFn::Gamma => gamma(need(a.x, "x")?)?,
        SpecFn::Lngamma => ln_gamma(need(a.x, "x")?),
        SpecFn::Rgamma => rgamma(need(a.x, "x")?),
        SpecFn::Pochhammer => {
            let r =
                a.r.ok_or_else(|| Failure::Usage("--fn pochhammer needs --r".into()))?;
            pochhammer(need(a.x, "x")?, r)?
        }
        SpecFn::Erfc => erfc(need(a.x, "x")?),
        SpecFn::Besseli => bessel_i(need(a.nu, "nu")?, need(a.z, "z")?)?,
        SpecFn::Besselk => bessel_k(need(a.nu, "nu")?, need(a.z, "z")?)?,
        SpecFn::Hyp2f1 => hyp2f1(
            need(a.a, "a")?,
            need(a.b, "b")?,
            need(a.c, "c")?,
            need(a.z, "z")?,
        )?,
        SpecFn::Ml3 => {
            let q = MlParams::new(need(a.a, "a")?, need(a.b, "b")?, need(a.c, "c")?)?;
            mittag_leffler3(&q, need(a.x, "x")?)?
        }
        SpecFn::Prabhakar => {
            let q = MlParams::new(need(a.a, "a")?, need(a.b, "b")?, need(a.c, "c")?)?;
            prabhakar_kernel(&q, need(a.kappa, "kappa")?, need(a.t, "t")?)?
        }
    };
    println!("{v}");
    Ok(())
}
