//! Experiment configuration: defaults, the flat key=value config file format,
//! and value parsing with explicit unit suffixes.
//!
//! The file format is line-oriented: `[section]` headers, `key = value`
//! pairs, `#` comments. SNR values carry an explicit `dB` or `linear`
//! suffix so no silent unit guessing ever happens; distances are plain
//! numbers in a consistent length unit. Numeric lists are comma-separated
//! and ranges are written `start:stop:step` (inclusive).

use std::fmt;
use std::path::PathBuf;

/// Which relaying schemes a Monte Carlo pass simulates. Analytic rates are
/// always evaluated (they are cheap and the ratio columns need all three).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchemeSet {
    pub alsbr: bool,
    pub cubr: bool,
    pub cbr: bool,
}

impl Default for SchemeSet {
    fn default() -> Self {
        Self {
            alsbr: true,
            cubr: true,
            cbr: true,
        }
    }
}

/// Monte Carlo settings for a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub slots: u64,
    pub seed: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            slots: 1_000_000,
            seed: 42,
        }
    }
}

/// Full description of one sweep run.
///
/// Defaults reproduce the reference setup: `gamma_max` 30 dB, `gamma_p`
/// 10 dB, path-loss exponent 3, unit-gain data hops (`d_sr = d_rd = 1`),
/// interference distances `d_rp` in {10, 4.64, 2.93} and `d_sp` swept from
/// 1 to 12 in steps of 0.5.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub gamma_max_db: f64,
    pub gamma_p_db: f64,
    pub alpha: f64,
    pub d_sr: f64,
    pub d_rd: f64,
    pub d_sp: Vec<f64>,
    pub d_rp: Vec<f64>,
    pub schemes: SchemeSet,
    pub mc: Option<McConfig>,
    pub output: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            gamma_max_db: 30.0,
            gamma_p_db: 10.0,
            alpha: 3.0,
            d_sr: 1.0,
            d_rd: 1.0,
            d_sp: range_values(1.0, 12.0, 0.5),
            d_rp: vec![10.0, 4.64, 2.93],
            schemes: SchemeSet::default(),
            mc: None,
            output: None,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.d_sp.is_empty() {
            return Err(ConfigError::new(0, "d_sp sweep must not be empty"));
        }
        if self.d_rp.is_empty() {
            return Err(ConfigError::new(0, "d_rp list must not be empty"));
        }
        for &d in self
            .d_sp
            .iter()
            .chain(self.d_rp.iter())
            .chain([&self.d_sr, &self.d_rd])
        {
            if !(d.is_finite() && d > 0.0) {
                return Err(ConfigError::new(0, format!("distances must be positive, got {d}")));
            }
        }
        Ok(())
    }

    /// One-line echo of the scalar settings for CSV metadata.
    pub fn summary(&self) -> String {
        format!(
            "gamma_max={} dB gamma_p={} dB alpha={} d_sr={} d_rd={}",
            self.gamma_max_db, self.gamma_p_db, self.alpha, self.d_sr, self.d_rd
        )
    }
}

/// Inclusive numeric range with a small tolerance on the final step.
pub fn range_values(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    for i in 0..=n {
        out.push(start + step * i as f64);
    }
    out
}

/// Config file / value parse error with a line number when known.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl ConfigError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "config line {}: {}", self.line, self.message)
        } else {
            write!(f, "config: {}", self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

/// Parse an SNR value with a mandatory `dB` or `linear` suffix; returns dB.
fn parse_snr_db(value: &str, line: usize) -> Result<f64, ConfigError> {
    let v = value.trim();
    if let Some(num) = v.strip_suffix("dB").or_else(|| v.strip_suffix("db")) {
        num.trim()
            .parse::<f64>()
            .map_err(|e| ConfigError::new(line, format!("bad dB value {num:?}: {e}")))
    } else if let Some(num) = v.strip_suffix("linear") {
        let lin = num
            .trim()
            .parse::<f64>()
            .map_err(|e| ConfigError::new(line, format!("bad linear value {num:?}: {e}")))?;
        if lin <= 0.0 {
            return Err(ConfigError::new(line, "linear SNR must be positive"));
        }
        Ok(10.0 * lin.log10())
    } else {
        Err(ConfigError::new(
            line,
            format!("SNR value {v:?} needs an explicit unit suffix (dB or linear)"),
        ))
    }
}

/// Parse a comma list or `start:stop:step` range of plain numbers.
pub fn parse_number_list(value: &str, line: usize) -> Result<Vec<f64>, ConfigError> {
    let v = value.trim();
    if v.contains(':') {
        let parts: Vec<&str> = v.split(':').collect();
        if parts.len() != 3 {
            return Err(ConfigError::new(line, format!("range {v:?} must be start:stop:step")));
        }
        let nums: Result<Vec<f64>, _> = parts.iter().map(|p| p.trim().parse::<f64>()).collect();
        let nums = nums.map_err(|e| ConfigError::new(line, format!("bad range {v:?}: {e}")))?;
        if !(nums[2] > 0.0 && nums[1] >= nums[0]) {
            return Err(ConfigError::new(line, format!("range {v:?} must ascend with positive step")));
        }
        Ok(range_values(nums[0], nums[1], nums[2]))
    } else {
        v.split(',')
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|e| ConfigError::new(line, format!("bad number {p:?}: {e}")))
            })
            .collect()
    }
}

fn parse_bool(value: &str, line: usize) -> Result<bool, ConfigError> {
    match value.trim() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        other => Err(ConfigError::new(line, format!("expected a boolean, got {other:?}"))),
    }
}

fn parse_f64(value: &str, line: usize) -> Result<f64, ConfigError> {
    value
        .trim()
        .parse::<f64>()
        .map_err(|e| ConfigError::new(line, format!("bad number {value:?}: {e}")))
}

fn parse_u64(value: &str, line: usize) -> Result<u64, ConfigError> {
    let v = value.trim().replace('_', "");
    v.parse::<u64>()
        .map_err(|e| ConfigError::new(line, format!("bad integer {value:?}: {e}")))
}

/// Parse the flat config format, starting from defaults.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut cfg = ExperimentConfig::default();
    let mut mc = McConfig::default();
    let mut mc_enabled = false;
    let mut section = String::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') && line.ends_with(']') {
            section = line[1..line.len() - 1].trim().to_string();
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| ConfigError::new(line_no, format!("expected key = value, got {line:?}")))?;
        let key = key.trim();
        let value = value.trim();

        match (section.as_str(), key) {
            ("system", "gamma_max") => cfg.gamma_max_db = parse_snr_db(value, line_no)?,
            ("system", "gamma_p") => cfg.gamma_p_db = parse_snr_db(value, line_no)?,
            ("system", "alpha") => cfg.alpha = parse_f64(value, line_no)?,
            ("geometry", "d_sr") => cfg.d_sr = parse_f64(value, line_no)?,
            ("geometry", "d_rd") => cfg.d_rd = parse_f64(value, line_no)?,
            ("geometry", "d_sp") => cfg.d_sp = parse_number_list(value, line_no)?,
            ("geometry", "d_rp") => cfg.d_rp = parse_number_list(value, line_no)?,
            ("schemes", "alsbr") => cfg.schemes.alsbr = parse_bool(value, line_no)?,
            ("schemes", "cubr") => cfg.schemes.cubr = parse_bool(value, line_no)?,
            ("schemes", "cbr") => cfg.schemes.cbr = parse_bool(value, line_no)?,
            ("simulation", "enabled") => mc_enabled = parse_bool(value, line_no)?,
            ("simulation", "slots") => mc.slots = parse_u64(value, line_no)?,
            ("simulation", "seed") => mc.seed = parse_u64(value, line_no)?,
            ("output", "path") => cfg.output = Some(PathBuf::from(value)),
            _ => {
                return Err(ConfigError::new(
                    line_no,
                    format!("unknown key {key:?} in section [{section}]"),
                ))
            }
        }
    }

    if mc_enabled {
        cfg.mc = Some(mc);
    }
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_config() {
        let text = "\
# experiment
[system]
gamma_max = 30 dB
gamma_p = 10 dB
alpha = 3

[geometry]
d_sr = 1
d_rd = 1
d_sp = 1:3:1
d_rp = 10, 4.64

[simulation]
enabled = true
slots = 50000
seed = 7

[output]
path = out.csv
";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.gamma_max_db, 30.0);
        assert_eq!(cfg.d_sp, vec![1.0, 2.0, 3.0]);
        assert_eq!(cfg.d_rp, vec![10.0, 4.64]);
        assert_eq!(cfg.mc, Some(McConfig { slots: 50_000, seed: 7 }));
        assert_eq!(cfg.output, Some(PathBuf::from("out.csv")));
    }

    #[test]
    fn linear_suffix_converts_once() {
        let cfg = parse_config("[system]\ngamma_max = 1000 linear\n").unwrap();
        assert!((cfg.gamma_max_db - 30.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_missing_unit_and_unknown_keys() {
        assert!(parse_config("[system]\ngamma_max = 30\n").is_err());
        assert!(parse_config("[system]\nbogus = 1\n").is_err());
        assert!(parse_config("[geometry]\nd_sp = \n").is_err());
        let err = parse_config("[geometry]\nd_sp = 5:1:1\n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn range_is_inclusive() {
        assert_eq!(range_values(1.0, 2.0, 0.5), vec![1.0, 1.5, 2.0]);
        assert_eq!(parse_number_list("2.93", 1).unwrap(), vec![2.93]);
    }
}
