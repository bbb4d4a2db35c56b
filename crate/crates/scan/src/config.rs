//! Sweep configuration: defaults, `key = value` files, and validation.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use complementarity_core::ChannelKind;

use crate::ScanError;

pub const DEFAULT_X: [f64; 5] = [0.1, 0.2, 0.25, 0.5, FRAC_1_SQRT_2];
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Default for PGrid {
    fn default() -> Self {
        PGrid { start: 0.0, stop: 1.0, count: 101 }
    }
}

impl PGrid {
    /// Evenly spaced points, endpoints included exactly.
    pub fn points(&self) -> Vec<f64> {
        let n = self.count;
        let span = self.stop - self.start;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.stop
                } else {
                    self.start + span * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }

    pub fn step(&self) -> f64 {
        (self.stop - self.start) / (self.count - 1) as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub channels: Vec<ChannelKind>,
    pub x_values: Vec<f64>,
    pub p_grid: PGrid,
    /// Memory parameter; only correlated amplitude damping uses it.
    pub mu: f64,
    /// `None` writes to stdout.
    pub output: Option<PathBuf>,
    pub format: Format,
    pub tolerance: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            channels: ChannelKind::ALL.to_vec(),
            x_values: DEFAULT_X.to_vec(),
            p_grid: PGrid::default(),
            mu: 1.0,
            output: None,
            format: Format::Csv,
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

fn field(field: &'static str, message: impl Into<String>) -> ScanError {
    ScanError::Config { field, message: message.into() }
}

fn parse_real(name: &'static str, value: &str) -> Result<f64, ScanError> {
    value
        .trim()
        .parse::<f64>()
        .map_err(|e| field(name, format!("`{}`: {e}", value.trim())))
}

pub fn parse_channels(value: &str) -> Result<Vec<ChannelKind>, ScanError> {
    let mut out = Vec::new();
    for item in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if item.eq_ignore_ascii_case("all") {
            out.extend(ChannelKind::ALL);
            continue;
        }
        out.push(item.parse::<ChannelKind>().map_err(|e| field("channels", e))?);
    }
    Ok(out)
}

pub fn parse_reals(name: &'static str, value: &str) -> Result<Vec<f64>, ScanError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_real(name, s))
        .collect()
}

impl SweepConfig {
    /// Set one field from its textual form. Keys match the long CLI flags,
    /// with either `-` or `_` as separator.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ScanError> {
        match key.trim().replace('-', "_").as_str() {
            "channels" => self.channels = parse_channels(value)?,
            "x" | "x_values" => self.x_values = parse_reals("x", value)?,
            "p_start" => self.p_grid.start = parse_real("p_start", value)?,
            "p_stop" => self.p_grid.stop = parse_real("p_stop", value)?,
            "p_count" => {
                self.p_grid.count = value
                    .trim()
                    .parse()
                    .map_err(|e| field("p_count", format!("`{}`: {e}", value.trim())))?
            }
            "mu" => self.mu = parse_real("mu", value)?,
            "format" => self.format = value.parse().map_err(|e: String| field("format", e))?,
            "out" | "output" => {
                let v = value.trim();
                self.output = if v.is_empty() || v == "-" { None } else { Some(PathBuf::from(v)) };
            }
            "tolerance" => self.tolerance = parse_real("tolerance", value)?,
            _ => return Err(field("config", format!("unknown key `{}`", key.trim()))),
        }
        Ok(())
    }

    /// Apply a flat `key = value` file on top of `self`. Blank lines and
    /// lines starting with `#` are skipped.
    pub fn merge_str(&mut self, text: &str) -> Result<(), ScanError> {
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                field("config", format!("line {}: expected `key = value`", n + 1))
            })?;
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self, ScanError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| field("config", format!("{}: {e}", path.display())))?;
        let mut cfg = SweepConfig::default();
        cfg.merge_str(&text)?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ScanError> {
        if self.channels.is_empty() {
            return Err(field("channels", "at least one channel is required"));
        }
        if self.x_values.is_empty() {
            return Err(field("x", "at least one value is required"));
        }
        if let Some(x) = self.x_values.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(field("x", format!("{x} is outside [0, 1]")));
        }
        let g = &self.p_grid;
        if g.count < 2 {
            return Err(field("p_count", format!("{} < 2", g.count)));
        }
        if !(0.0..=1.0).contains(&g.start) {
            return Err(field("p_start", format!("{} is outside [0, 1]", g.start)));
        }
        if !(0.0..=1.0).contains(&g.stop) {
            return Err(field("p_stop", format!("{} is outside [0, 1]", g.stop)));
        }
        if g.start > g.stop {
            return Err(field("p_start", format!("{} exceeds p_stop {}", g.start, g.stop)));
        }
        if !(0.0..=1.0).contains(&self.mu) {
            return Err(field("mu", format!("{} is outside [0, 1]", self.mu)));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(field("tolerance", format!("{} must be positive", self.tolerance)));
        }
        Ok(())
    }
}
