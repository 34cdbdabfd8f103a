//! Run configuration: defaults, an optional `key = value` file, and flags,
//! in increasing order of precedence.

use std::fs;
use std::path::{Path, PathBuf};

use hecke_zeta::transferop::{Method, MAX_BASIS, MIN_BASIS};
use hecke_zeta::C64;

use crate::Failure;

/// How the parabolic sums are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MethodChoice {
    Direct,
    Continued,
    /// Continued everywhere; it is valid off the poles on the whole plane.
    #[default]
    Auto,
}

impl MethodChoice {
    pub fn parse(s: &str) -> Result<Self, Failure> {
        match s {
            "direct" => Ok(Self::Direct),
            "continued" => Ok(Self::Continued),
            "auto" => Ok(Self::Auto),
            _ => Err(Failure::config(format!("method must be direct, continued or auto (got {s:?})"))),
        }
    }

    pub fn method(self, tol: f64) -> Method {
        match self {
            Self::Direct => Method::Direct { tol: tol.min(1e-12) },
            Self::Continued | Self::Auto => Method::Continued,
        }
    }
}

/// Settings shared by all subcommands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub lambda: f64,
    pub basis: usize,
    pub max_word_len: usize,
    pub k_max: usize,
    pub method: MethodChoice,
    pub tol: f64,
    /// `None` uses every available thread.
    pub threads: Option<usize>,
    /// `None` writes to stdout.
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            lambda: 3.0,
            basis: 32,
            max_word_len: 12,
            k_max: 25,
            method: MethodChoice::Auto,
            tol: 1e-9,
            threads: None,
            out: None,
        }
    }
}

/// Flag values; `None` keeps the file or default value.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub lambda: Option<f64>,
    pub basis: Option<usize>,
    pub max_word_len: Option<usize>,
    pub k_max: Option<usize>,
    pub method: Option<String>,
    pub tol: Option<f64>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    /// Defaults, then `file`, then `flags`; validated.
    pub fn resolve(file: Option<&Path>, flags: &Overrides) -> Result<Self, Failure> {
        let mut cfg = Self::default();
        if let Some(path) = file {
            let text = fs::read_to_string(path).map_err(|e| Failure::config(format!("{}: {e}", path.display())))?;
            cfg.apply_file(&text).map_err(|f| Failure::config(format!("{}: {}", path.display(), f.message)))?;
        }
        if let Some(v) = flags.lambda {
            cfg.lambda = v;
        }
        if let Some(v) = flags.basis {
            cfg.basis = v;
        }
        if let Some(v) = flags.max_word_len {
            cfg.max_word_len = v;
        }
        if let Some(v) = flags.k_max {
            cfg.k_max = v;
        }
        if let Some(v) = &flags.method {
            cfg.method = MethodChoice::parse(v)?;
        }
        if let Some(v) = flags.tol {
            cfg.tol = v;
        }
        if let Some(v) = flags.threads {
            cfg.threads = Some(v);
        }
        if let Some(v) = &flags.out {
            cfg.out = Some(v.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads `key = value` lines; `#` starts a comment.
    pub fn apply_file(&mut self, text: &str) -> Result<(), Failure> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Failure::config(format!("line {}: expected key = value", i + 1)))?;
            let (key, value) = (key.trim().replace('-', "_"), value.trim());
            let bad = |what: &str| Failure::config(format!("line {}: {key} must be {what} (got {value:?})", i + 1));
            match key.as_str() {
                "lambda" => self.lambda = value.parse().map_err(|_| bad("a number"))?,
                "basis" => self.basis = value.parse().map_err(|_| bad("an integer"))?,
                "max_word_len" => self.max_word_len = value.parse().map_err(|_| bad("an integer"))?,
                "k_max" => self.k_max = value.parse().map_err(|_| bad("an integer"))?,
                "method" => self.method = MethodChoice::parse(value)?,
                "tol" => self.tol = value.parse().map_err(|_| bad("a number"))?,
                "threads" => self.threads = Some(value.parse().map_err(|_| bad("an integer"))?),
                "out" => self.out = Some(PathBuf::from(value)),
                _ => return Err(Failure::config(format!("line {}: unknown key {key:?}", i + 1))),
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), Failure> {
        if !(self.lambda > 2.0) {
            return Err(Failure::config(format!("lambda must exceed 2 (got {})", self.lambda)));
        }
        if !(MIN_BASIS..=MAX_BASIS).contains(&self.basis) {
            return Err(Failure::config(format!(
                "basis must lie in [{MIN_BASIS}, {MAX_BASIS}] (got {})",
                self.basis
            )));
        }
        if self.max_word_len == 0 {
            return Err(Failure::config("max-word-len must be positive".to_string()));
        }
        if !(self.tol > 0.0) {
            return Err(Failure::config(format!("tol must be positive (got {})", self.tol)));
        }
        if self.threads == Some(0) {
            return Err(Failure::config("threads must be positive".to_string()));
        }
        Ok(())
    }
}

/// Parses `a`, `bi`, `a+bi` or `a-bi` without spaces.
pub fn parse_complex(text: &str) -> Result<C64, Failure> {
    let bad = || Failure::config(format!("cannot parse complex number {text:?} (use a+bi or a-bi)"));
    let t = text.trim();
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| C64::new(re, 0.0)).map_err(|_| bad());
    };
    // the sign joining the parts is the last one not opening an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let coef = |s: &str| -> Result<f64, Failure> {
        match s {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => s.parse().map_err(|_| bad()),
        }
    };
    match split {
        Some(k) => {
            let re: f64 = body[..k].parse().map_err(|_| bad())?;
            Ok(C64::new(re, coef(&body[k..])?))
        }
        None => Ok(C64::new(0.0, coef(body)?)),
    }
}

/// Parses `lo:hi` with `lo < hi`.
pub fn parse_range(text: &str) -> Result<(f64, f64), Failure> {
    let bad = || Failure::config(format!("cannot parse range {text:?} (use lo:hi)"));
    let (a, b) = text.split_once(':').ok_or_else(bad)?;
    let (lo, hi): (f64, f64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if !(lo < hi) {
        return Err(Failure::config(format!("range {text:?} must have lo < hi")));
    }
    Ok((lo, hi))
}

/// Parses a comma-separated list of complex numbers.
pub fn parse_list(text: &str) -> Result<Vec<C64>, Failure> {
    text.split(',').map(parse_complex).collect()
}
