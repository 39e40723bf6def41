//! Plain-text run configuration: one `key = value` per line, `#` starts a
//! comment, blank lines are ignored.
//!
//! | key            | type                          | default       |
//! |----------------|-------------------------------|---------------|
//! | `alpha`        | real ≥ 0                      | required      |
//! | `beta`         | real ≥ 0                      | required      |
//! | `nu`           | real ≥ 0                      | required      |
//! | `eta`          | real ≥ 0                      | required      |
//! | `n`            | power of two ≥ 8              | 256           |
//! | `dt`           | real > 0                      | 2.5e-4        |
//! | `t_end`        | real ≥ 0                      | 1.0           |
//! | `output_every` | integer ≥ 1                   | 40            |
//! | `integrator`   | `if-rk4`                      | `if-rk4`      |
//! | `seed`         | unsigned integer              | 0             |
//! | `init`         | `orszag-tang` \| `random-band` | `orszag-tang` |
//! | `amplitude`    | real ≥ 0                      | 1.0           |
//! | `band`         | integer, `3·band ≤ n`         | 8             |
//!
//! A sweep spec uses the same format with `alphas` and `betas` given as
//! comma-separated lists; `alpha` and `beta` are then not accepted.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use crate::dynamics::{InitKind, IntegratorKind, SolverConfig};
use crate::error::{Error, Result};

pub const REQUIRED_KEYS: [&str; 4] = ["alpha", "beta", "nu", "eta"];

fn config_error(line: usize, message: impl Into<String>) -> Error {
    Error::Config { line, message: message.into() }
}

/// Non-empty `(line number, key, value)` entries, with duplicates rejected.
fn entries(text: &str) -> Result<Vec<(usize, String, String)>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| config_error(line, format!("expected key = value, found {content:?}")))?;
        let (key, value) = (key.trim().to_string(), value.trim().to_string());
        if !seen.insert(key.clone()) {
            return Err(config_error(line, format!("duplicate key {key:?}")));
        }
        out.push((line, key, value));
    }
    Ok(out)
}

fn parse_real(line: usize, key: &str, value: &str) -> Result<f64> {
    let v: f64 = value
        .parse()
        .map_err(|_| config_error(line, format!("{key}: {value:?} is not a real number")))?;
    if !v.is_finite() {
        return Err(config_error(line, format!("{key}: {value:?} is not finite")));
    }
    Ok(v)
}

fn parse_uint(line: usize, key: &str, value: &str) -> Result<u64> {
    value
        .parse()
        .map_err(|_| config_error(line, format!("{key}: {value:?} is not a non-negative integer")))
}

/// Applies one entry to `config`; returns false for keys it does not know.
fn apply(config: &mut SolverConfig, line: usize, key: &str, value: &str) -> Result<bool> {
    match key {
        "alpha" => config.alpha = parse_real(line, key, value)?,
        "beta" => config.beta = parse_real(line, key, value)?,
        "nu" => config.nu = parse_real(line, key, value)?,
        "eta" => config.eta = parse_real(line, key, value)?,
        "n" => config.n = parse_uint(line, key, value)? as usize,
        "dt" => config.dt = parse_real(line, key, value)?,
        "t_end" => config.t_end = parse_real(line, key, value)?,
        "output_every" => config.output_every = parse_uint(line, key, value)? as usize,
        "seed" => config.seed = parse_uint(line, key, value)?,
        "amplitude" => config.amplitude = parse_real(line, key, value)?,
        "band" => config.band = parse_uint(line, key, value)? as usize,
        "integrator" => {
            config.integrator = match value {
                "if-rk4" => IntegratorKind::IfRk4,
                _ => return Err(config_error(line, format!("integrator: unknown value {value:?}"))),
            }
        }
        "init" => {
            config.init = match value {
                "orszag-tang" => InitKind::OrszagTang,
                "random-band" => InitKind::RandomBand,
                _ => return Err(config_error(line, format!("init: unknown value {value:?}"))),
            }
        }
        _ => return Ok(false),
    }
    Ok(true)
}

fn line_of(entries: &[(usize, String, String)], key: &str) -> usize {
    entries.iter().find(|e| e.1 == key).map_or(0, |e| e.0)
}

fn validated(config: SolverConfig, entries: &[(usize, String, String)]) -> Result<SolverConfig> {
    config.validate().map_err(|e| {
        let message = e.to_string();
        let key = ["alpha", "beta", "nu", "eta", "dt", "t_end", "output_every", "amplitude", "band", "n"]
            .into_iter()
            .find(|k| message.starts_with(&format!("invalid argument: {k} ")))
            .or(match e {
                Error::InvalidGrid(_) => Some("n"),
                Error::BandTooHigh { .. } => Some("band"),
                _ => None,
            });
        config_error(key.map_or(0, |k| line_of(entries, k)), message)
    })?;
    Ok(config)
}

/// Parses and validates a configuration. Line 0 in an error refers to the
/// file as a whole (a missing key).
pub fn parse_config_str(text: &str) -> Result<SolverConfig> {
    let entries = entries(text)?;
    let mut config = SolverConfig::default();
    for (line, key, value) in &entries {
        if !apply(&mut config, *line, key, value)? {
            return Err(config_error(*line, format!("unknown key {key:?}")));
        }
    }
    for key in REQUIRED_KEYS {
        if !entries.iter().any(|e| e.1 == key) {
            return Err(config_error(0, format!("missing required key {key:?}")));
        }
    }
    validated(config, &entries)
}

pub fn parse_config(path: &Path) -> Result<SolverConfig> {
    parse_config_str(&fs::read_to_string(path)?)
}

/// Every key, in the documented order, with values that reparse exactly.
pub fn emit_config(config: &SolverConfig) -> String {
    format!(
        "alpha = {}\nbeta = {}\nnu = {}\neta = {}\nn = {}\ndt = {}\nt_end = {}\noutput_every = {}\n\
         integrator = {}\nseed = {}\ninit = {}\namplitude = {}\nband = {}\n",
        config.alpha,
        config.beta,
        config.nu,
        config.eta,
        config.n,
        config.dt,
        config.t_end,
        config.output_every,
        config.integrator.as_str(),
        config.seed,
        config.init.as_str(),
        config.amplitude,
        config.band,
    )
}

/// Grid of `(α, β)` points sharing every other setting.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    pub base: SolverConfig,
}

impl SweepSpec {
    /// Points in row-major order over `(α, β)`.
    pub fn points(&self) -> Vec<SolverConfig> {
        let mut out = Vec::with_capacity(self.alphas.len() * self.betas.len());
        for &alpha in &self.alphas {
            for &beta in &self.betas {
                out.push(SolverConfig { alpha, beta, ..self.base.clone() });
            }
        }
        out
    }
}

fn parse_list(line: usize, key: &str, value: &str) -> Result<Vec<f64>> {
    let list = value
        .split(',')
        .map(|v| parse_real(line, key, v.trim()))
        .collect::<Result<Vec<_>>>()?;
    if list.is_empty() {
        return Err(config_error(line, format!("{key}: empty list")));
    }
    Ok(list)
}

pub fn parse_sweep_str(text: &str) -> Result<SweepSpec> {
    let entries = entries(text)?;
    let mut base = SolverConfig::default();
    let (mut alphas, mut betas) = (None, None);
    for (line, key, value) in &entries {
        match key.as_str() {
            "alphas" => alphas = Some(parse_list(*line, key, value)?),
            "betas" => betas = Some(parse_list(*line, key, value)?),
            "alpha" | "beta" => {
                return Err(config_error(*line, format!("{key:?} is set per point; use {key}s")));
            }
            _ => {
                if !apply(&mut base, *line, key, value)? {
                    return Err(config_error(*line, format!("unknown key {key:?}")));
                }
            }
        }
    }
    for key in ["alphas", "betas", "nu", "eta"] {
        if !entries.iter().any(|e| e.1 == key) {
            return Err(config_error(0, format!("missing required key {key:?}")));
        }
    }
    Ok(SweepSpec { alphas: alphas.unwrap(), betas: betas.unwrap(), base })
}

pub fn parse_sweep(path: &Path) -> Result<SweepSpec> {
    parse_sweep_str(&fs::read_to_string(path)?)
}
