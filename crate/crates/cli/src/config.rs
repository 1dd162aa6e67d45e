//! Run configuration: barrier parameters, sweep ranges and the optional
//! flat `key = value` config file.
//!
//! File keys are the long flag names without the leading dashes
//! (`a`, `v0`, `omega0`, `sweep`, `xmin`, ...). Blank lines and lines
//! starting with `#` are ignored; a key may repeat (`sweep`), otherwise the
//! last occurrence wins. Command-line flags override the file.

use std::fmt;
use std::str::FromStr;

use quatkg::BarrierSpec;

use crate::error::CliError;
use crate::output::{Cell, Record};

/// Most parameters a sweep may vary at once.
pub const MAX_SWEEPS: usize = 2;

/// Grid points allowed in a single sweep axis.
pub const MAX_SWEEP_POINTS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "text" => Ok(Self::Text),
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(CliError::Invalid(format!("unknown format `{other}` (text, csv, json)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Param {
    A,
    V0,
    Omega0,
    Theta,
    Phi,
}

impl Param {
    pub fn name(self) -> &'static str {
        match self {
            Param::A => "a",
            Param::V0 => "v0",
            Param::Omega0 => "omega0",
            Param::Theta => "theta",
            Param::Phi => "phi",
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "a" => Ok(Param::A),
            "v0" => Ok(Param::V0),
            "omega0" => Ok(Param::Omega0),
            "theta" => Ok(Param::Theta),
            "phi" => Ok(Param::Phi),
            other => Err(CliError::Invalid(format!(
                "unknown sweep parameter `{other}` (a, v0, omega0, theta, phi)"
            ))),
        }
    }
}

/// Barrier parameters, radians for the angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecParams {
    pub a: f64,
    pub v0: f64,
    pub omega0: f64,
    pub theta: f64,
    pub phi: f64,
}

impl Default for SpecParams {
    fn default() -> Self {
        Self {
            a: 1.0,
            v0: 0.3,
            omega0: 1.0,
            theta: std::f64::consts::FRAC_PI_2,
            phi: 0.0,
        }
    }
}

impl SpecParams {
    pub fn set(&mut self, param: Param, value: f64) {
        match param {
            Param::A => self.a = value,
            Param::V0 => self.v0 = value,
            Param::Omega0 => self.omega0 = value,
            Param::Theta => self.theta = value,
            Param::Phi => self.phi = value,
        }
    }

    pub fn to_spec(&self) -> Result<BarrierSpec, CliError> {
        Ok(BarrierSpec::new(self.a, self.v0, self.omega0, self.theta, self.phi)?)
    }

    pub fn record(&self) -> Record {
        vec![
            ("a".into(), Cell::Num(self.a)),
            ("v0".into(), Cell::Num(self.v0)),
            ("omega0".into(), Cell::Num(self.omega0)),
            ("theta".into(), Cell::Num(self.theta)),
            ("phi".into(), Cell::Num(self.phi)),
        ]
    }
}

/// `param:start:stop:step`, inclusive of `stop` when it lies on the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRange {
    pub param: Param,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl FromStr for SweepRange {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(CliError::Invalid(format!(
                "sweep `{s}` must look like param:start:stop:step"
            )));
        }
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Invalid(format!("bad number `{t}` in sweep `{s}`")))
        };
        let range = SweepRange {
            param: parts[0].parse()?,
            start: num(parts[1])?,
            stop: num(parts[2])?,
            step: num(parts[3])?,
        };
        range.validate()?;
        Ok(range)
    }
}

impl SweepRange {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.start.is_finite() && self.stop.is_finite() && self.step.is_finite()) {
            return Err(CliError::Invalid(format!("sweep over {} must be finite", self.param)));
        }
        if self.step <= 0.0 {
            return Err(CliError::Invalid(format!("sweep step over {} must be > 0", self.param)));
        }
        if self.stop < self.start {
            return Err(CliError::Invalid(format!(
                "sweep over {} is empty (stop < start)",
                self.param
            )));
        }
        let n = (self.stop - self.start) / self.step;
        if n >= MAX_SWEEP_POINTS as f64 {
            return Err(CliError::Invalid(format!("sweep over {} has too many points", self.param)));
        }
        Ok(())
    }

    /// Grid values `start + i·step`; the last one snaps to `stop` when it is
    /// within rounding of it.
    pub fn values(&self) -> Vec<f64> {
        let span = (self.stop - self.start) / self.step;
        let n = (span + 1e-9).floor() as usize + 1;
        (0..n)
            .map(|i| {
                let v = self.start + self.step * i as f64;
                if (v - self.stop).abs() <= 1e-9 * self.step {
                    self.stop
                } else {
                    v.min(self.stop)
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    entries: Vec<(String, String)>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Invalid(format!("config line {}: expected key = value", lineno + 1)))?;
            let key = k.trim().trim_start_matches("--").to_string();
            if key.is_empty() {
                return Err(CliError::Invalid(format!("config line {}: empty key", lineno + 1)));
            }
            entries.push((key, v.trim().to_string()));
        }
        Ok(Self { entries })
    }

    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Invalid(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn get_all(&self, key: &str) -> Vec<&str> {
        self.entries.iter().filter(|(k, _)| k == key).map(|(_, v)| v.as_str()).collect()
    }

    /// Flag value if given, else the parsed file value, else `None`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| CliError::Invalid(format!("config key `{key}`: cannot parse `{v}`")))
            })
            .transpose()
    }

    pub fn flag(&self, flag: bool, key: &str) -> Result<bool, CliError> {
        if flag {
            return Ok(true);
        }
        match self.get(key) {
            None => Ok(false),
            Some(v) => match v.to_ascii_lowercase().as_str() {
                "true" | "1" | "yes" => Ok(true),
                "false" | "0" | "no" => Ok(false),
                _ => Err(CliError::Invalid(format!("config key `{key}`: expected a boolean, got `{v}`"))),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_parsing_and_grid() {
        let r: SweepRange = "theta:0:3.141592653589793:0.7853981633974483".parse().unwrap();
        let v = r.values();
        assert_eq!(v.len(), 5);
        assert_eq!(v[0], 0.0);
        assert_eq!(*v.last().unwrap(), std::f64::consts::PI);

        let r: SweepRange = "a:0:1:0.3".parse().unwrap();
        assert_eq!(r.values().len(), 4);
        assert!(r.values().iter().all(|&x| x <= 1.0));

        let r: SweepRange = "v0:0.5:0.5:0.1".parse().unwrap();
        assert_eq!(r.values(), vec![0.5]);
    }

    #[test]
    fn sweep_rejects_bad_ranges() {
        for bad in ["a:0:1", "b:0:1:0.1", "a:1:0:0.1", "a:0:1:0", "a:0:1:-0.1", "a:0:inf:0.1", "a:x:1:0.1"] {
            assert!(bad.parse::<SweepRange>().is_err(), "{bad}");
        }
    }

    #[test]
    fn config_file_lookup() {
        let cfg = ConfigFile::parse("# comment\na = 2\n--v0 = 0.1\nsweep = a:0:1:0.5\nsweep = theta:0:1:0.5\na = 3\n").unwrap();
        assert_eq!(cfg.get("a"), Some("3"));
        assert_eq!(cfg.get("v0"), Some("0.1"));
        assert_eq!(cfg.get_all("sweep").len(), 2);
        assert_eq!(cfg.pick::<f64>(None, "a").unwrap(), Some(3.0));
        assert_eq!(cfg.pick(Some(5.0), "a").unwrap(), Some(5.0));
        assert!(cfg.pick::<f64>(None, "sweep").is_err());
        assert!(ConfigFile::parse("novalue").is_err());
    }

    #[test]
    fn formats() {
        assert_eq!("CSV".parse::<OutputFormat>().unwrap(), OutputFormat::Csv);
        assert!("xml".parse::<OutputFormat>().is_err());
    }
}
