//! TOML configuration files. Top-level keys and the keys of a section
//! named after the subcommand become flags inserted ahead of the
//! command-line flags, so the command line wins. Keys are flag names with
//! `-` or `_` (`t_end`, `t-end`, `B`).

use crate::args::Cli;
use crate::{Failure, Outcome};
use clap::error::ErrorKind;
use clap::CommandFactory;
use serde_json::{json, Value};
use std::ffi::OsString;
use std::path::Path;
use toml::de::{DeTable, DeValue};

#[derive(Debug)]
pub struct FileConfig {
    pub path: String,
    /// Keys read for this command, as written in the file.
    pub values: serde_json::Map<String, Value>,
    /// Keys ignored because the same flag was given on the command line.
    pub overridden: Vec<String>,
    pub merged_argv: Vec<OsString>,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

fn json_of(v: &DeValue) -> Value {
    match v {
        DeValue::String(s) => json!(s.as_ref()),
        DeValue::Integer(i) => integer(i.as_str(), i.radix()).map_or(Value::Null, |n| json!(n)),
        DeValue::Float(f) => float(f.as_str()).map_or(Value::Null, |x| json!(x)),
        DeValue::Boolean(b) => json!(b),
        DeValue::Datetime(d) => json!(d.to_string()),
        DeValue::Array(a) => Value::Array(a.iter().map(|x| json_of(x.get_ref())).collect()),
        DeValue::Table(t) => Value::Object(
            t.iter()
                .map(|(k, x)| (k.get_ref().to_string(), json_of(x.get_ref())))
                .collect(),
        ),
    }
}

fn integer(raw: &str, radix: u32) -> Option<i64> {
    let clean = raw.replace('_', "");
    let digits = clean
        .trim_start_matches("0x")
        .trim_start_matches("0o")
        .trim_start_matches("0b");
    i64::from_str_radix(digits, radix).ok()
}

fn float(raw: &str) -> Option<f64> {
    raw.replace('_', "").parse().ok()
}

/// Flag values for one TOML value, or None if it cannot be a flag value.
fn scalar_token(v: &DeValue) -> Option<String> {
    match v {
        DeValue::String(s) => Some(s.to_string()),
        DeValue::Integer(i) => integer(i.as_str(), i.radix()).map(|n| n.to_string()),
        DeValue::Float(f) => float(f.as_str()).map(|x| x.to_string()),
        DeValue::Boolean(b) => Some(b.to_string()),
        _ => None,
    }
}

/// Names of the subcommands selected by `argv` (outermost first).
fn chain(argv: &[OsString]) -> Vec<String> {
    let mut out = vec![];
    let Ok(m) = Cli::command().try_get_matches_from(argv) else {
        return out;
    };
    let mut cur = &m;
    while let Some((name, sub)) = cur.subcommand() {
        out.push(name.to_string());
        cur = sub;
    }
    out
}

pub fn load(path: &Path, argv: &[OsString]) -> Outcome<FileConfig> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Config(format!("{shown}: cannot read: {e}")))?;
    let doc = DeTable::parse(&text).map_err(|e| {
        let line = e.span().map_or(1, |s| line_of(&text, s.start));
        Failure::Config(format!("{shown}:{line}: {}", e.message().trim_end()))
    })?;
    let names = chain(argv);
    let Some(top) = names.first() else {
        return Err(Failure::Usage("no subcommand given".into()));
    };
    let root = Cli::command();
    let mut leaf = root.clone();
    for n in &names {
        leaf = leaf
            .find_subcommand(n)
            .cloned()
            .ok_or_else(|| Failure::Usage(format!("unknown subcommand {n}")))?;
    }
    let subcommands: Vec<String> = root
        .get_subcommands()
        .map(|c| c.get_name().to_string())
        .collect();

    let mut entries = vec![];
    for (k, v) in doc.get_ref().iter() {
        let key = k.get_ref().to_string();
        let line = line_of(&text, k.span().start);
        match v.get_ref() {
            DeValue::Table(t) if key == *top => {
                for (k2, v2) in t.iter() {
                    entries.push((
                        k2.get_ref().to_string(),
                        v2,
                        line_of(&text, k2.span().start),
                    ));
                }
            }
            DeValue::Table(_) if subcommands.contains(&key) => {}
            DeValue::Table(_) => {
                return Err(Failure::Config(format!(
                    "{shown}:{line}: unknown section [{key}]"
                )));
            }
            _ => entries.push((key, v, line)),
        }
    }

    let user: Vec<String> = argv
        .iter()
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let mut prefix: Vec<OsString> = vec![argv[0].clone()];
    prefix.extend(names.iter().map(OsString::from));
    let mut tokens: Vec<String> = vec![];
    let mut values = serde_json::Map::new();
    let mut overridden = vec![];
    for (key, v, line) in entries {
        let at = |msg: String| Failure::Config(format!("{shown}:{line}: {msg}"));
        let dashed = key.replace('_', "-");
        let arg = leaf
            .get_arguments()
            .find(|a| a.get_long() == Some(dashed.as_str()) && a.get_id() != "config")
            .ok_or_else(|| at(format!("unknown key `{key}` for `{}`", names.join(" "))))?;
        let long = format!("--{}", arg.get_long().unwrap_or_default());
        if user
            .iter()
            .any(|u| *u == long || u.starts_with(&format!("{long}=")))
        {
            values.insert(key.clone(), json_of(v.get_ref()));
            overridden.push(key);
            continue;
        }
        let mut mine = vec![];
        if arg.get_action().takes_values() {
            let items: Vec<&DeValue> = match v.get_ref() {
                DeValue::Array(a) => a.iter().map(|x| x.get_ref()).collect(),
                other => vec![other],
            };
            for it in items {
                let s =
                    scalar_token(it).ok_or_else(|| at(format!("`{key}` needs a scalar value")))?;
                mine.push(format!("{long}={s}"));
            }
        } else {
            match v.get_ref() {
                DeValue::Boolean(true) => mine.push(long.clone()),
                DeValue::Boolean(false) => {}
                _ => return Err(at(format!("`{key}` is a switch and takes true or false"))),
            }
        }
        let mut probe = prefix.clone();
        probe.extend(mine.iter().map(OsString::from));
        if let Err(e) = Cli::command().try_get_matches_from(probe) {
            if e.kind() != ErrorKind::MissingRequiredArgument {
                let msg = e.render().to_string();
                let first = msg
                    .lines()
                    .next()
                    .unwrap_or("")
                    .trim_start_matches("error: ")
                    .to_string();
                return Err(at(format!("`{key}`: {first}")));
            }
        }
        values.insert(key, json_of(v.get_ref()));
        tokens.extend(mine);
    }

    // insert after the innermost subcommand token
    let mut pos = 1;
    let mut want = names.iter();
    let mut next = want.next();
    while pos < argv.len() {
        if let Some(n) = next {
            if argv[pos].to_string_lossy() == n.as_str() {
                next = want.next();
                if next.is_none() {
                    pos += 1;
                    break;
                }
            }
        }
        pos += 1;
    }
    let mut merged = argv[..pos].to_vec();
    merged.extend(tokens.iter().map(OsString::from));
    merged.extend(argv[pos..].iter().cloned());
    Ok(FileConfig {
        path: shown,
        values,
        overridden,
        merged_argv: merged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_numbers() {
        let t = "a = 1\nb = 2\n";
        assert_eq!(line_of(t, 0), 1);
        assert_eq!(line_of(t, 6), 2);
    }

    #[test]
    fn number_tokens() {
        assert_eq!(integer("1_000", 10), Some(1000));
        assert_eq!(integer("0x10", 16), Some(16));
        assert_eq!(float("1e-3"), Some(1e-3));
    }
}
