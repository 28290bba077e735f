//! Goodness-of-fit and two-sample tests used by the Monte-Carlo checks.

use crate::{Error, Result};
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestResult {
    pub statistic: f64,
    pub dof: f64,
    pub p_value: f64,
}

/// Pearson χ² of observed counts against expected counts. `constraints` is
/// the number of degrees of freedom used up by the expectation (1 when it
/// was rescaled to the observed total, 0 when it is absolute).
pub fn chi_square(observed: &[u64], expected: &[f64], constraints: usize) -> Result<TestResult> {
    if observed.len() != expected.len() || observed.len() <= constraints {
        return Err(Error::precondition(
            "χ² needs matching bins and more bins than constraints",
        ));
    }
    if expected.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::domain("χ² expected counts must be positive"));
    }
    let statistic: f64 = observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| (o as f64 - e).powi(2) / e)
        .sum();
    let dof = (observed.len() - constraints) as f64;
    let dist = ChiSquared::new(dof).map_err(|e| Error::domain(e.to_string()))?;
    Ok(TestResult {
        statistic,
        dof,
        p_value: dist.sf(statistic),
    })
}

/// χ² homogeneity test of two binned samples of possibly different sizes.
/// Bins empty in both samples are skipped.
pub fn chi_square_two_sample(a: &[u64], b: &[u64]) -> Result<TestResult> {
    if a.len() != b.len() {
        return Err(Error::precondition("two-sample χ² needs matching bins"));
    }
    let (na, nb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    if na == 0.0 || nb == 0.0 {
        return Err(Error::domain("two-sample χ² needs non-empty samples"));
    }
    let (ka, kb) = ((nb / na).sqrt(), (na / nb).sqrt());
    let mut statistic = 0.0;
    let mut used = 0usize;
    for (&x, &y) in a.iter().zip(b) {
        if x + y == 0 {
            continue;
        }
        statistic += (ka * x as f64 - kb * y as f64).powi(2) / (x + y) as f64;
        used += 1;
    }
    if used < 2 {
        return Err(Error::domain(
            "two-sample χ² needs at least two occupied bins",
        ));
    }
    let dof = (used - 1) as f64;
    let dist = ChiSquared::new(dof).map_err(|e| Error::domain(e.to_string()))?;
    Ok(TestResult {
        statistic,
        dof,
        p_value: dist.sf(statistic),
    })
}

/// Mean and standard error of the mean.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (m, f64::NAN);
    }
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

/// Two-sided Welch z-test for equal means (large samples).
pub fn welch_z(a: &[f64], b: &[f64]) -> Result<TestResult> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::precondition(
            "Welch test needs at least two samples per group",
        ));
    }
    let (ma, sa) = mean_se(a);
    let (mb, sb) = mean_se(b);
    let se = (sa * sa + sb * sb).sqrt();
    if !(se > 0.0) {
        return Err(Error::domain("Welch test with zero variance"));
    }
    let z = (ma - mb) / se;
    let p = 2.0 * Normal::standard().sf(z.abs());
    Ok(TestResult {
        statistic: z,
        dof: f64::INFINITY,
        p_value: p,
    })
}
