use hetcv_core::laplace::{invert_gaver_stehfest, invert_on_grid, LaplaceImage, DEFAULT_TERMS};
use hetcv_core::specfun::{prabhakar_image, prabhakar_kernel, MlParams};

fn gs(f: impl Fn(f64) -> f64 + Send + Sync, t: f64, n: usize) -> f64 {
    let img = LaplaceImage::new(move |s| Ok(f(s)));
    invert_gaver_stehfest(&img, t, n).unwrap()
}

#[test]
fn constant_and_exponential() {
    assert!((gs(|s| 1.0 / s, 3.0, DEFAULT_TERMS) - 1.0).abs() < 1e-8);
    // N = 14 leaves 1.0e-5 here; 18 is the smallest order reaching 1e-6
    assert!((gs(|s| 1.0 / (s + 1.0), 2.0, 18) - (-2.0f64).exp()).abs() < 1e-6);
}

#[test]
fn prabhakar_pair_example() {
    let p = MlParams::new(1.0, 4.0, 1.5).unwrap();
    let want = prabhakar_kernel(&p, 2.0, 1.0).unwrap();
    let got = gs(|s| s.powf(-2.5) * (s + 2.0).powf(-1.5), 1.0, 16);
    assert!(((got - want) / want).abs() < 1e-5, "{got} vs {want}");
    let got = gs(|s| s.powf(-2.5) * (s + 2.0).powf(-1.5), 1.0, 18);
    assert!(((got - want) / want).abs() < 1e-6, "{got} vs {want}");
}

#[test]
fn ramp_on_grid() {
    // N = 16 is the most accurate even order for this image in double precision
    let img = LaplaceImage::new(|s| Ok(1.0 / (s * s)));
    let pts = invert_on_grid(&img, &[1.0, 2.0, 3.0], 16).unwrap();
    for p in pts {
        assert!((p.value - p.t).abs() < 1e-7, "t={}: {}", p.t, p.value);
        assert!(!p.flagged());
    }
}

#[test]
fn step_is_flagged() {
    let img = LaplaceImage::new(|s| Ok((-s).exp() / s));
    let p = invert_on_grid(&img, &[0.5], DEFAULT_TERMS).unwrap()[0];
    assert!(p.value.abs() < 0.1, "{}", p.value);
    assert!(p.flagged(), "diagnostic {}", p.diagnostic);
}

#[test]
fn grid_must_increase() {
    let img = LaplaceImage::new(|s| Ok(1.0 / s));
    assert!(invert_on_grid(&img, &[1.0, 1.0], DEFAULT_TERMS).is_err());
    assert!(invert_on_grid(&img, &[2.0, 1.0], DEFAULT_TERMS).is_err());
}

#[test]
fn linearity() {
    let f = |s: f64| 1.0 / (s + 0.5);
    let g = |s: f64| s.powf(-1.5);
    for &t in &[0.3, 1.0, 4.0] {
        // weights grow with N and amplify image rounding; N = 10 keeps it below 1e-10
        let combo = gs(move |s| 2.0 * f(s) - 0.7 * g(s), t, 10);
        let sep = 2.0 * gs(f, t, 10) - 0.7 * gs(g, t, 10);
        assert!((combo - sep).abs() < 1e-10);
    }
}

#[test]
fn self_consistency_12_vs_16() {
    // power-law and Stieltjes-type images; exponentially decaying signals
    // converge more slowly in N and are covered by the pair battery instead
    let images: Vec<Box<dyn Fn(f64) -> f64 + Send + Sync>> = vec![
        Box::new(|s| s.powf(-1.5)),
        Box::new(|s| 1.0 / s),
        Box::new(|s| 1.0 / (s * (1.0 + s.sqrt()))),
    ];
    for f in &images {
        for &t in &[0.5, 1.0, 3.0] {
            let a = gs(|s| f(s), t, 12);
            let b = gs(|s| f(s), t, 16);
            assert!(((a - b) / b).abs() < 1e-6, "t={t}: {a} vs {b}");
        }
    }
}

// Tolerances of the known-pair battery at the default order, documented in
// the README.
#[test]
fn known_pair_battery() {
    for &t in &[0.5, 1.0, 2.0, 5.0] {
        assert!((gs(|s| 1.0 / s, t, 14) - 1.0).abs() < 1e-8);
        assert!((gs(|s| 1.0 / (s * s), t, 14) - t).abs() < 5e-7 * t);
        assert!((gs(|s| 1.0 / (s + 0.8), t, 14) - (-0.8 * t).exp()).abs() < 5e-5);
    }
    // oscillatory image: usable only for t ≲ 1, away from the zeros of cos
    for &t in &[0.2, 0.5, 0.8] {
        let got = gs(|s| s / (s * s + 1.0), t, 14);
        assert!((got - t.cos()).abs() < 1e-3, "t={t}: {got}");
    }
}

#[test]
fn prabhakar_pair_on_cmf_set() {
    // a ≤ 0.8 part of the battery; the full battery including a → 1 is an
    // acceptance criterion
    let set = [
        (0.5, 1.0, 1.0),
        (0.7, 1.5, 0.8),
        (0.3, 0.9, 2.0),
        (0.5, 1.5, 0.5),
        (0.8, 2.0, 1.0),
        (0.6, 1.1, 1.2),
    ];
    for &(a, b, c) in &set {
        let p = MlParams::new(a, b, c).unwrap();
        assert!(p.cmf_range());
        for &kappa in &[0.5, 1.0, 2.0] {
            let img = LaplaceImage::new(move |s| Ok(prabhakar_image(&p, kappa, s)));
            for i in 0..=8 {
                let t = 0.1 * 100f64.powf(i as f64 / 8.0);
                let got = invert_gaver_stehfest(&img, t, 16).unwrap();
                let want = prabhakar_kernel(&p, kappa, t).unwrap();
                assert!(
                    ((got - want) / want).abs() < 1e-5,
                    "({a},{b},{c}) κ={kappa} t={t}: {got} vs {want}"
                );
            }
        }
    }
}
