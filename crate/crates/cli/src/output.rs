use crate::Outcome;
use serde::Serialize;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

/// 17 significant digits, enough to round-trip any f64.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

pub fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        let cells: Vec<String> = r.into_iter().map(num).collect();
        let _ = writeln!(s, "{}", cells.join(","));
    }
    s
}

pub fn ensure_dir(dir: &Path) -> Outcome<()> {
    std::fs::create_dir_all(dir)?;
    Ok(())
}

pub fn write(dir: &Path, name: &str, body: &str) -> Outcome<PathBuf> {
    ensure_dir(dir)?;
    let p = dir.join(name);
    std::fs::write(&p, body)?;
    Ok(p)
}

pub fn write_json(dir: &Path, name: &str, v: &impl Serialize) -> Outcome<PathBuf> {
    let mut body =
        serde_json::to_string_pretty(v).map_err(|e| crate::Failure::Io(e.to_string()))?;
    body.push('\n');
    write(dir, name, &body)
}

/// CSV to `dir/name`, or to stdout when no directory was given.
pub fn emit_csv(dir: Option<&Path>, name: &str, body: &str) -> Outcome<()> {
    match dir {
        Some(d) => {
            write(d, name, body)?;
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())?;
        }
    }
    Ok(())
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

pub fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let (la, lb) = (a.ln(), b.ln());
    (0..n)
        .map(|i| match i {
            0 => a,
            _ if i == n - 1 => b,
            _ => (la + (lb - la) * i as f64 / (n - 1) as f64).exp(),
        })
        .collect()
}
