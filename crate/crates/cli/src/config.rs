//! Flat `key = value` configuration with command-line overrides.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use curvedflat::Quaternion;
use num_complex::Complex64;

use crate::error::CliError;
use crate::expr::{parse_expr, Expr};

const KEYS: &[&str] = &[
    "corner", "width", "height", "nx", "ny", "g", "omega", "rho", "a", "theta", "scale", "levels",
    "out", "surface", "partner",
];

/// Everything a pipeline run needs.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub command: String,
    pub corner: Complex64,
    pub width: f64,
    pub height: f64,
    pub nx: usize,
    pub ny: usize,
    pub g: Expr,
    pub omega: Expr,
    pub rho: f64,
    pub a: Quaternion,
    pub theta: f64,
    /// Homothety factor applied to the stored Christoffel partner.
    pub scale: f64,
    /// Grid sizes (vertices per side) for convergence reports, coarse to fine.
    pub levels: Vec<usize>,
    /// Output prefix; `.obj`, `.csv` and `.txt` are appended.
    pub out: PathBuf,
    /// Stored surfaces for `validate`.
    pub surface: Option<PathBuf>,
    pub partner: Option<PathBuf>,
    /// Positional arguments (the points of `crossratio`).
    pub positional: Vec<String>,
}

/// Reads `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", n + 1)))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

/// Splits `--key value` pairs from positional arguments.
pub fn parse_overrides(
    args: &[String],
) -> Result<(BTreeMap<String, String>, Vec<String>), CliError> {
    let mut map = BTreeMap::new();
    let mut positional = Vec::new();
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        match arg.strip_prefix("--") {
            Some(key) if key.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) => {
                let (key, value) = match key.split_once('=') {
                    Some((k, v)) => (k.to_string(), v.to_string()),
                    None => {
                        let v = it
                            .next()
                            .ok_or_else(|| CliError::Config(format!("--{key} needs a value")))?;
                        (key.to_string(), v.clone())
                    }
                };
                map.insert(key, value);
            }
            _ => positional.push(arg.clone()),
        }
    }
    Ok((map, positional))
}

fn number<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.trim()
        .parse()
        .map_err(|_| CliError::Config(format!("{key}: cannot parse '{v}'")))
}

fn finite(key: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Config(format!("{key} must be finite")))
    }
}

/// A constant complex number written as an expression, e.g. `-1-1i`.
pub fn parse_complex(key: &str, v: &str) -> Result<Complex64, CliError> {
    let c = parse_expr(v)?.eval(Complex64::new(0.0, 0.0));
    if c.re.is_finite() && c.im.is_finite() {
        Ok(c)
    } else {
        Err(CliError::Config(format!("{key} must be finite")))
    }
}

/// Parses `a + b i + c j + d k`; spaces are optional and any unit may be
/// omitted or repeated (`1 + k`, `-0.5j`, `2 - i + 3`).
pub fn parse_quaternion(src: &str) -> Result<Quaternion, CliError> {
    let err = |m: &str| CliError::Config(format!("quaternion '{src}': {m}"));
    let words: Vec<&str> = src.split_whitespace().collect();
    let numeric = |c: Option<char>| c.is_some_and(|c| c.is_ascii_digit() || c == '.');
    if words
        .windows(2)
        .any(|w| numeric(w[0].chars().last()) && numeric(w[1].chars().next()))
    {
        return Err(err("two numbers without an operator"));
    }
    let s: String = words.concat();
    if s.is_empty() {
        return Err(err("empty"));
    }
    let b = s.as_bytes();
    let mut q = [0.0f64; 4];
    let mut pos = 0;
    while pos < b.len() {
        let mut sign = 1.0;
        if b[pos] == b'+' || b[pos] == b'-' {
            if b[pos] == b'-' {
                sign = -1.0;
            }
            pos += 1;
        } else if pos > 0 {
            return Err(err("expected '+' or '-'"));
        }
        let start = pos;
        while pos < b.len()
            && (b[pos].is_ascii_digit() || b[pos] == b'.' || b[pos] == b'e' && pos > start)
        {
            if b[pos] == b'e' && pos + 1 < b.len() && (b[pos + 1] == b'+' || b[pos + 1] == b'-') {
                pos += 1;
            }
            pos += 1;
        }
        let coeff = if start == pos {
            1.0
        } else {
            s[start..pos]
                .parse::<f64>()
                .map_err(|_| err("malformed number"))?
        };
        let slot = match b.get(pos) {
            Some(b'i') => 1,
            Some(b'j') => 2,
            Some(b'k') => 3,
            _ if start == pos => return Err(err("missing term")),
            _ => 0,
        };
        if slot > 0 {
            pos += 1;
        }
        q[slot] += sign * coeff;
    }
    if q.iter().any(|v| !v.is_finite()) {
        return Err(err("not finite"));
    }
    Ok(Quaternion::from_array(q))
}

impl PipelineConfig {
    /// Merges the config file (if any) with overrides; overrides win.
    pub fn build(command: &str, file: Option<&Path>, args: &[String]) -> Result<Self, CliError> {
        let mut map = match file {
            Some(p) => {
                parse_config_text(&std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?)?
            }
            None => BTreeMap::new(),
        };
        let (over, positional) = parse_overrides(args)?;
        map.extend(over);
        if let Some(k) = map.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(CliError::Config(format!("unknown key '{k}'")));
        }
        let get = |k: &str| map.get(k).map(String::as_str);
        let f = |k: &str, default: f64| -> Result<f64, CliError> {
            get(k)
                .map_or(Ok(default), |v| number(k, v))
                .and_then(|v| finite(k, v))
        };
        let n = |k: &str, default: usize| get(k).map_or(Ok(default), |v| number(k, v));
        let nx = n("nx", 65)?;
        let ny = n("ny", nx)?;
        if nx < 9 || ny < 9 {
            return Err(CliError::Config("nx and ny must be at least 9".into()));
        }
        let levels = match get("levels") {
            Some(v) => v
                .split(',')
                .map(|s| number::<usize>("levels", s))
                .collect::<Result<Vec<_>, _>>()?,
            None => vec![33, 65],
        };
        if levels.iter().any(|l| *l < 9) {
            return Err(CliError::Config(
                "refinement levels must be at least 9".into(),
            ));
        }
        let scale = f("scale", 1.0)?;
        if scale == 0.0 {
            return Err(CliError::Config("scale must be nonzero".into()));
        }
        let width = f("width", 2.0)?;
        let height = f("height", width)?;
        if !(width > 0.0 && height > 0.0) {
            return Err(CliError::Config("width and height must be positive".into()));
        }
        Ok(Self {
            command: command.to_string(),
            corner: parse_complex("corner", get("corner").unwrap_or("-1-1i"))?,
            width,
            height,
            nx,
            ny,
            g: parse_expr(get("g").unwrap_or("z"))?,
            omega: parse_expr(get("omega").unwrap_or("1"))?,
            rho: f("rho", 1.0)?,
            a: parse_quaternion(get("a").unwrap_or("1 + k"))?,
            theta: f("theta", 0.0)?,
            scale,
            levels,
            out: PathBuf::from(get("out").unwrap_or(command)),
            surface: get("surface").map(PathBuf::from),
            partner: get("partner").map(PathBuf::from),
            positional,
        })
    }
}
