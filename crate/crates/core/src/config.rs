//! Flat `key = value` run configuration.
//!
//! One assignment per line, `#` starts a comment, blank lines are ignored.
//! Every key is optional and defaults to the reference validation setup:
//!
//! | key | default | meaning |
//! |---|---|---|
//! | `mean_demand` | 500 | mean daily demand |
//! | `demand_std` | 200 | daily demand standard deviation |
//! | `lead_time_min` | 7 | lower end of the uniform lead time, days |
//! | `lead_time_max` | 13 | upper end of the uniform lead time, days |
//! | `rop` | 5000 | reorder point |
//! | `roq` | 1000 | reorder quantity |
//! | `review_period` | 1 | review interval in days (undershoot model) |
//! | `model` | conventional | `conventional` or `undershoot` |
//! | `mode` | backorder | `backorder` or `lost-sales` |
//! | `horizon_days` | 365 | simulated days per replication |
//! | `replications` | 100 | replications per batch |
//! | `seed` | 20160301 | master seed |
//! | `beta_target` | none | target fill rate for `solve` |
//! | `initial_on_hand` | rop + roq | opening stock |
//! | `exact_cdf` | false | use the erf-based Φ |
//! | `truncate_negative_demand` | false | clamp negative demand draws to 0 |
//! | `format` | markdown | `markdown` or `csv` |
//! | `out` | none | output path |

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::analytic::{DemandSpec, LeadTimeDistribution, ModelInputs, ModelKind, UnfulfilledDemandMode};
use crate::normal::CdfKind;
use crate::sim::SimConfig;
use crate::validation::table::TableFormat;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("unknown key `{key}`")]
    UnknownKey { key: String },
    #[error("key `{key}` given more than once")]
    Duplicate { key: String },
    #[error("key `{key}`: {message}")]
    BadValue { key: String, message: String },
    #[error("missing required key `{key}`")]
    Missing { key: String },
    #[error("cannot read {path}: {message}")]
    Io { path: PathBuf, message: String },
}

impl ConfigError {
    fn bad(key: &str, message: impl Into<String>) -> Self {
        ConfigError::BadValue {
            key: key.to_string(),
            message: message.into(),
        }
    }
}

pub const KEYS: [&str; 18] = [
    "mean_demand",
    "demand_std",
    "lead_time_min",
    "lead_time_max",
    "rop",
    "roq",
    "review_period",
    "model",
    "mode",
    "horizon_days",
    "replications",
    "seed",
    "beta_target",
    "initial_on_hand",
    "exact_cdf",
    "truncate_negative_demand",
    "format",
    "out",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub mean_demand: f64,
    pub demand_std: f64,
    pub lead_time_min: f64,
    pub lead_time_max: f64,
    pub rop: f64,
    pub roq: f64,
    pub review_period: f64,
    pub model: ModelKind,
    pub mode: UnfulfilledDemandMode,
    pub horizon_days: u32,
    pub replications: usize,
    pub seed: u64,
    pub beta_target: Option<f64>,
    pub initial_on_hand: Option<f64>,
    pub exact_cdf: bool,
    pub truncate_negative_demand: bool,
    pub format: TableFormat,
    pub out: Option<PathBuf>,
    #[serde(skip)]
    seen: Vec<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mean_demand: 500.0,
            demand_std: 200.0,
            lead_time_min: 7.0,
            lead_time_max: 13.0,
            rop: 5000.0,
            roq: 1000.0,
            review_period: 1.0,
            model: ModelKind::Conventional,
            mode: UnfulfilledDemandMode::Backorder,
            horizon_days: 365,
            replications: 100,
            seed: 20_160_301,
            beta_target: None,
            initial_on_hand: None,
            exact_cdf: false,
            truncate_negative_demand: false,
            format: TableFormat::Markdown,
            out: None,
            seen: Vec::new(),
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    value.parse::<T>().map_err(|e| ConfigError::bad(key, format!("cannot parse `{value}`: {e}")))
}

fn parse_finite(key: &str, value: &str) -> Result<f64, ConfigError> {
    let v: f64 = parse_value(key, value)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ConfigError::bad(key, "must be finite"))
    }
}

fn parse_bool(key: &str, value: &str) -> Result<bool, ConfigError> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(ConfigError::bad(key, format!("expected true or false, got `{value}`"))),
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: i + 1,
                text: raw.to_string(),
            })?;
            let key = key.trim();
            if cfg.seen.iter().any(|k| k == key) {
                return Err(ConfigError::Duplicate { key: key.to_string() });
            }
            cfg.set(key, value.trim())?;
            cfg.seen.push(key.to_string());
        }
        cfg.check()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Self::parse(&text)
    }

    /// Assigns one key. Later calls override earlier ones.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "mean_demand" => self.mean_demand = parse_finite(key, value)?,
            "demand_std" => self.demand_std = parse_finite(key, value)?,
            "lead_time_min" => self.lead_time_min = parse_finite(key, value)?,
            "lead_time_max" => self.lead_time_max = parse_finite(key, value)?,
            "rop" => self.rop = parse_finite(key, value)?,
            "roq" => self.roq = parse_finite(key, value)?,
            "review_period" => self.review_period = parse_finite(key, value)?,
            "model" => self.model = parse_value(key, value)?,
            "mode" => self.mode = parse_value(key, value)?,
            "horizon_days" => self.horizon_days = parse_value(key, value)?,
            "replications" => self.replications = parse_value(key, value)?,
            "seed" => self.seed = parse_value(key, value)?,
            "beta_target" => self.beta_target = Some(parse_finite(key, value)?),
            "initial_on_hand" => self.initial_on_hand = Some(parse_finite(key, value)?),
            "exact_cdf" => self.exact_cdf = parse_bool(key, value)?,
            "truncate_negative_demand" => self.truncate_negative_demand = parse_bool(key, value)?,
            "format" => self.format = parse_value(key, value)?,
            "out" => {
                if value.is_empty() {
                    return Err(ConfigError::bad(key, "empty path"));
                }
                self.out = Some(PathBuf::from(value))
            }
            other => return Err(ConfigError::UnknownKey { key: other.to_string() }),
        }
        Ok(())
    }

    /// Range checks, reported against the offending key.
    pub fn check(&self) -> Result<(), ConfigError> {
        if !(self.mean_demand > 0.0) {
            return Err(ConfigError::bad("mean_demand", "must be positive"));
        }
        if self.demand_std < 0.0 {
            return Err(ConfigError::bad("demand_std", "must be non-negative"));
        }
        if !(self.lead_time_min > 0.0) {
            return Err(ConfigError::bad("lead_time_min", "must be positive"));
        }
        if self.lead_time_max < self.lead_time_min {
            return Err(ConfigError::bad("lead_time_max", "must be at least lead_time_min"));
        }
        if self.rop < 0.0 {
            return Err(ConfigError::bad("rop", "must be non-negative"));
        }
        if !(self.roq > 0.0) {
            return Err(ConfigError::bad("roq", "must be positive"));
        }
        if !(self.review_period > 0.0) {
            return Err(ConfigError::bad("review_period", "must be positive"));
        }
        if self.horizon_days == 0 {
            return Err(ConfigError::bad("horizon_days", "must be at least 1"));
        }
        if self.replications == 0 {
            return Err(ConfigError::bad("replications", "must be at least 1"));
        }
        if let Some(b) = self.beta_target {
            if !(b > 0.0 && b < 1.0) {
                return Err(ConfigError::bad("beta_target", "must lie strictly between 0 and 1"));
            }
        }
        if let Some(x) = self.initial_on_hand {
            if x < 0.0 {
                return Err(ConfigError::bad("initial_on_hand", "must be non-negative"));
            }
        }
        Ok(())
    }

    pub fn require_beta_target(&self) -> Result<f64, ConfigError> {
        self.beta_target.ok_or_else(|| ConfigError::Missing { key: "beta_target".into() })
    }

    pub fn cdf(&self) -> CdfKind {
        if self.exact_cdf {
            CdfKind::Exact
        } else {
            CdfKind::Approx
        }
    }

    pub fn demand(&self) -> Result<DemandSpec, ConfigError> {
        DemandSpec::new(self.mean_demand, self.demand_std).map_err(|e| ConfigError::bad("mean_demand", e.to_string()))
    }

    pub fn lead_time(&self) -> Result<LeadTimeDistribution, ConfigError> {
        LeadTimeDistribution::uniform(self.lead_time_min, self.lead_time_max)
            .map_err(|e| ConfigError::bad("lead_time_min", e.to_string()))
    }

    pub fn model_inputs(&self) -> Result<ModelInputs, ConfigError> {
        Ok(ModelInputs {
            demand: self.demand()?,
            lead_time: self.lead_time()?,
            q: self.roq,
            review_period: self.review_period,
            mode: self.mode,
            cdf: self.cdf(),
        })
    }

    pub fn sim_config(&self) -> Result<SimConfig, ConfigError> {
        let mut cfg = SimConfig::new(self.demand()?, self.lead_time()?, self.rop, self.roq, self.mode);
        cfg.horizon_days = self.horizon_days;
        cfg.initial_on_hand = self.initial_on_hand.unwrap_or(self.rop + self.roq);
        cfg.truncate_negative_demand = self.truncate_negative_demand;
        cfg.seed = self.seed;
        Ok(cfg)
    }
}
