use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use transduction_core::model::{ChannelDirection, CANONICAL_PUMP_PHASE, DEFAULT_KAPPA_E, DEFAULT_KAPPA_O};

use crate::error::{LabError, Result};

/// Every name accepted by `--set` and `--grid`, with its default value.
/// `beta` has no default: setting it switches evaluation to the squeezed
/// frame.
pub const PARAMETERS: [(&str, Option<f64>); 13] = [
    ("c_g", Some(0.0)),
    ("c_nu", Some(0.0)),
    ("beta", None),
    ("zeta_o", Some(1.0)),
    ("zeta_e", Some(1.0)),
    ("chi_o", Some(0.0)),
    ("chi_e", Some(0.0)),
    ("omega", Some(0.0)),
    ("n_th", Some(0.0)),
    ("theta", Some(CANONICAL_PUMP_PHASE)),
    ("kappa_o", Some(DEFAULT_KAPPA_O)),
    ("kappa_e", Some(DEFAULT_KAPPA_E)),
    ("eliminate_noise", Some(0.0)),
];

pub fn is_parameter(name: &str) -> bool {
    PARAMETERS.iter().any(|(n, _)| *n == name)
}

fn check_parameter(name: &str) -> Result<()> {
    if is_parameter(name) {
        Ok(())
    } else {
        let known: Vec<&str> = PARAMETERS.iter().map(|(n, _)| *n).collect();
        Err(LabError::config(format!("unknown parameter '{name}' (known: {})", known.join(", "))))
    }
}

/// One sweep dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn linear(name: &str, min: f64, max: f64, count: usize) -> Result<Self> {
        Self::range(name, min, max, count, false)
    }

    pub fn log(name: &str, min: f64, max: f64, count: usize) -> Result<Self> {
        Self::range(name, min, max, count, true)
    }

    pub fn list(name: &str, values: &[f64]) -> Result<Self> {
        check_parameter(name)?;
        if values.is_empty() {
            return Err(LabError::config(format!("axis '{name}' has no values")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(LabError::config(format!("axis '{name}' has a non-finite value")));
        }
        Ok(Self { name: name.to_string(), label: None, values: values.to_vec() })
    }

    pub fn range(name: &str, min: f64, max: f64, count: usize, log: bool) -> Result<Self> {
        check_parameter(name)?;
        if count < 2 {
            return Err(LabError::config(format!("axis '{name}' needs at least 2 points, got {count}")));
        }
        if !min.is_finite() || !max.is_finite() {
            return Err(LabError::config(format!("axis '{name}' has a non-finite bound")));
        }
        if log && (min <= 0.0 || max <= 0.0) {
            return Err(LabError::config(format!("log axis '{name}' needs positive bounds")));
        }
        let step = |k: usize| k as f64 / (count - 1) as f64;
        let values = if log {
            let (a, b) = (min.ln(), max.ln());
            (0..count).map(|k| if k == count - 1 { max } else { (a + (b - a) * step(k)).exp() }).collect()
        } else {
            (0..count).map(|k| if k == count - 1 { max } else { min + (max - min) * step(k) }).collect()
        };
        Ok(Self { name: name.to_string(), label: None, values })
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = Some(label.to_string());
        self
    }
}

/// `name:min:max:count[:log]`
impl FromStr for Axis {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || LabError::config(format!("bad grid '{s}', expected name:min:max:count[:log]"));
        if !(4..=5).contains(&parts.len()) {
            return Err(bad());
        }
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
        let count = parts[3].trim().parse::<usize>().map_err(|_| bad())?;
        let log = match parts.get(4).map(|t| t.trim()) {
            None | Some("lin") | Some("linear") => false,
            Some("log") => true,
            Some(_) => return Err(bad()),
        };
        Self::range(parts[0].trim(), num(parts[1])?, num(parts[2])?, count, log)
    }
}

/// `key=value`
pub fn parse_assignment(s: &str) -> Result<(String, f64)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| LabError::config(format!("expected key=value, got '{s}'")))?;
    let key = k.trim();
    check_parameter(key)?;
    let value = match v.trim() {
        "true" => 1.0,
        "false" => 0.0,
        t => t.parse::<f64>().map_err(|_| LabError::config(format!("'{t}' is not a number for '{key}'")))?,
    };
    Ok((key.to_string(), value))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(LabError::config(format!("unknown format '{other}' (csv, json)"))),
        }
    }
}

impl Format {
    pub fn from_path(path: &Path) -> Option<Self> {
        path.extension().and_then(|e| e.to_str()).and_then(|e| e.parse().ok())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Direction {
    #[default]
    #[serde(rename = "o2m")]
    OpticalToMicrowave,
    #[serde(rename = "m2o")]
    MicrowaveToOptical,
}

impl Direction {
    pub fn channel(self) -> ChannelDirection {
        match self {
            Self::OpticalToMicrowave => ChannelDirection::OpticalToMicrowave,
            Self::MicrowaveToOptical => ChannelDirection::MicrowaveToOptical,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::OpticalToMicrowave => "o2m",
            Self::MicrowaveToOptical => "m2o",
        }
    }
}

impl FromStr for Direction {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "o2m" | "optical-to-microwave" => Ok(Self::OpticalToMicrowave),
            "m2o" | "microwave-to-optical" => Ok(Self::MicrowaveToOptical),
            other => Err(LabError::config(format!("unknown direction '{other}' (o2m, m2o)"))),
        }
    }
}

/// A fully specified sweep.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SweepConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default)]
    pub axes: Vec<Axis>,
    /// Values for parameters that are not swept.
    #[serde(default)]
    pub fixed: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub direction: Direction,
    #[serde(default)]
    pub eliminate_noise: bool,
}

impl SweepConfig {
    /// Replaces an axis of the same name, or appends.
    pub fn set_axis(&mut self, axis: Axis) {
        self.fixed.remove(&axis.name);
        match self.axes.iter_mut().find(|a| a.name == axis.name) {
            Some(slot) => *slot = axis,
            None => self.axes.push(axis),
        }
    }

    /// Fixes a parameter, dropping any axis over it.
    pub fn set_fixed(&mut self, name: &str, value: f64) -> Result<()> {
        check_parameter(name)?;
        self.axes.retain(|a| a.name != name);
        self.fixed.insert(name.to_string(), value);
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        for (i, axis) in self.axes.iter().enumerate() {
            check_parameter(&axis.name)?;
            if axis.values.is_empty() {
                return Err(LabError::config(format!("axis '{}' has no values", axis.name)));
            }
            if self.axes[..i].iter().any(|a| a.name == axis.name) {
                return Err(LabError::config(format!("axis '{}' appears twice", axis.name)));
            }
            if self.fixed.contains_key(&axis.name) {
                return Err(LabError::config(format!("'{}' is both swept and fixed", axis.name)));
            }
        }
        for (name, value) in &self.fixed {
            check_parameter(name)?;
            if !value.is_finite() {
                return Err(LabError::config(format!("'{name}' must be finite")));
            }
        }
        let bogoliubov = self.uses_beta();
        for name in ["chi_o", "chi_e", "omega", "c_nu", "theta"] {
            if bogoliubov && self.mentions(name) {
                return Err(LabError::config(format!("'{name}' has no effect when beta is given")));
            }
        }
        if !bogoliubov && (self.eliminate_noise || self.mentions("eliminate_noise")) {
            return Err(LabError::config("noise elimination needs beta (squeezed-frame evaluation)"));
        }
        Ok(())
    }

    pub fn mentions(&self, name: &str) -> bool {
        self.fixed.contains_key(name) || self.axes.iter().any(|a| a.name == name)
    }

    /// Evaluation happens in the squeezed (Bogoliubov) frame when `beta` is
    /// swept or fixed.
    pub fn uses_beta(&self) -> bool {
        self.mentions("beta")
    }

    pub fn n_points(&self) -> usize {
        self.axes.iter().map(|a| a.values.len()).product()
    }

    /// Parameter values at flat grid index `k`; the last axis varies fastest.
    pub fn point(&self, mut k: usize) -> BTreeMap<&str, f64> {
        let mut values: BTreeMap<&str, f64> =
            PARAMETERS.iter().filter_map(|(n, d)| d.map(|v| (*n, v))).collect();
        if self.eliminate_noise {
            values.insert("eliminate_noise", 1.0);
        }
        for (name, v) in &self.fixed {
            values.insert(name.as_str(), *v);
        }
        for axis in self.axes.iter().rev() {
            let n = axis.values.len();
            values.insert(axis.name.as_str(), axis.values[k % n]);
            k /= n;
        }
        values
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| LabError::config(format!("bad config: {e}")))?;
        file.into_config()
    }

    pub fn from_toml_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| LabError::Io { path: path.display().to_string(), source })?;
        Self::from_toml_str(&text)
    }
}

/// On-disk configuration. Axes may be written as a grid string, a range or
/// an explicit list:
///
/// ```toml
/// preset = "fig2a"
/// format = "csv"
/// direction = "o2m"
///
/// [set]
/// zeta_o = 0.95
///
/// [[axis]]
/// grid = "c_g:0.01:2:200"
///
/// [[axis]]
/// name = "c_nu"
/// values = [0.0, 0.1, 0.2]
/// ```
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    preset: Option<String>,
    #[serde(default)]
    set: BTreeMap<String, f64>,
    #[serde(default)]
    axis: Vec<AxisEntry>,
    out: Option<PathBuf>,
    format: Option<Format>,
    direction: Option<Direction>,
    eliminate_noise: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
enum AxisEntry {
    Grid {
        grid: String,
        label: Option<String>,
    },
    Range {
        name: String,
        min: f64,
        max: f64,
        count: usize,
        #[serde(default)]
        log: bool,
        label: Option<String>,
    },
    List {
        name: String,
        values: Vec<f64>,
        label: Option<String>,
    },
}

impl AxisEntry {
    fn into_axis(self) -> Result<Axis> {
        let (axis, label) = match self {
            Self::Grid { grid, label } => (grid.parse::<Axis>()?, label),
            Self::Range { name, min, max, count, log, label } => (Axis::range(&name, min, max, count, log)?, label),
            Self::List { name, values, label } => (Axis::list(&name, &values)?, label),
        };
        Ok(Axis { label, ..axis })
    }
}

impl ConfigFile {
    fn into_config(self) -> Result<SweepConfig> {
        let mut cfg = match &self.preset {
            Some(name) => crate::presets::preset(name)?,
            None => SweepConfig::default(),
        };
        for entry in self.axis {
            cfg.set_axis(entry.into_axis()?);
        }
        for (k, v) in self.set {
            cfg.set_fixed(&k, v)?;
        }
        if self.out.is_some() {
            cfg.out = self.out;
        }
        if let Some(f) = self.format {
            cfg.format = f;
        }
        if let Some(d) = self.direction {
            cfg.direction = d;
        }
        if let Some(e) = self.eliminate_noise {
            cfg.eliminate_noise = e;
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let a: Axis = "c_g:0:1:5".parse().unwrap();
        assert_eq!(a.values, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let a: Axis = "n_th:0.01:100:5:log".parse().unwrap();
        assert_eq!(a.values.len(), 5);
        assert!((a.values[2] - 1.0).abs() < 1e-15);
        assert_eq!(a.values[4], 100.0);
        assert!("c_g:0:1:1".parse::<Axis>().is_err());
        assert!("bogus:0:1:3".parse::<Axis>().is_err());
        assert!("c_g:0:1".parse::<Axis>().is_err());
        assert!("c_g:0:1:3:cubic".parse::<Axis>().is_err());
        assert!("n_th:0:1:3:log".parse::<Axis>().is_err());
    }

    #[test]
    fn assignments() {
        assert_eq!(parse_assignment("zeta_o=0.9").unwrap(), ("zeta_o".into(), 0.9));
        assert_eq!(parse_assignment(" eliminate_noise = true").unwrap().1, 1.0);
        assert!(parse_assignment("zeta_o").is_err());
        assert!(parse_assignment("nope=1").is_err());
        assert!(parse_assignment("c_g=abc").is_err());
    }

    #[test]
    fn point_indexing_is_row_major() {
        let mut cfg = SweepConfig::default();
        cfg.set_axis(Axis::list("c_g", &[1.0, 2.0]).unwrap());
        cfg.set_axis(Axis::list("c_nu", &[0.1, 0.2, 0.3]).unwrap());
        assert_eq!(cfg.n_points(), 6);
        let p = cfg.point(4);
        assert_eq!((p["c_g"], p["c_nu"]), (2.0, 0.2));
        assert_eq!(p["zeta_o"], 1.0);
        assert!(!p.contains_key("beta"));
    }

    #[test]
    fn fixed_and_swept_are_exclusive() {
        let mut cfg = SweepConfig::default();
        cfg.set_axis(Axis::list("c_g", &[1.0, 2.0]).unwrap());
        cfg.set_fixed("c_g", 0.5).unwrap();
        assert!(cfg.axes.is_empty());
        cfg.set_axis(Axis::list("c_g", &[1.0]).unwrap());
        assert!(!cfg.fixed.contains_key("c_g"));
        cfg.validate().unwrap();
    }

    #[test]
    fn beta_mode_rejects_detuning() {
        let mut cfg = SweepConfig::default();
        cfg.set_fixed("beta", 0.5).unwrap();
        cfg.set_fixed("chi_o", 0.1).unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn elimination_needs_beta() {
        let cfg = SweepConfig { eliminate_noise: true, ..Default::default() };
        assert!(matches!(cfg.validate(), Err(LabError::Config(_))));
    }

    #[test]
    fn toml_round_trip() {
        let text = r#"
            format = "json"
            direction = "m2o"

            [set]
            zeta_o = 0.95

            [[axis]]
            grid = "c_g:0.1:1:4"

            [[axis]]
            name = "c_nu"
            values = [0.0, 0.1]

            [[axis]]
            name = "zeta_e"
            min = 0.9
            max = 1.0
            count = 3
        "#;
        let cfg = SweepConfig::from_toml_str(text).unwrap();
        assert_eq!(cfg.format, Format::Json);
        assert_eq!(cfg.direction, Direction::MicrowaveToOptical);
        assert_eq!(cfg.fixed["zeta_o"], 0.95);
        assert_eq!(cfg.axes.len(), 3);
        assert_eq!(cfg.n_points(), 24);
        cfg.validate().unwrap();
    }

    #[test]
    fn toml_rejects_unknown_keys() {
        assert!(SweepConfig::from_toml_str("colour = 1").is_err());
        assert!(SweepConfig::from_toml_str("[set]\nwidth = 1").is_err());
    }
}
