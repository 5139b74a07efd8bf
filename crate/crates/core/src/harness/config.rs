//! Sweep configuration: TOML schema, validation with line-anchored
//! diagnostics, and environment overrides.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::Theorem;
use crate::fracquad::QuadratureConfig;
use crate::preinvex::{library_function, library_map, GridSize};

pub const SCHEMA_VERSION: u32 = 1;

/// The bundled default suite.
pub const DEFAULT_CONFIG: &str = include_str!("../../configs/default.toml");

pub const ENV_RTOL: &str = "FRACINEQ_RTOL";
pub const ENV_ATOL: &str = "FRACINEQ_ATOL";
pub const ENV_JOBS: &str = "FRACINEQ_JOBS";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Parse(String),
    #[error("{field}: {message}{}", line.map(|l| format!(" (line {l})")).unwrap_or_default())]
    Invalid {
        field: String,
        message: String,
        line: Option<usize>,
    },
    #[error("environment variable {var}={value}: {message}")]
    Env {
        var: String,
        value: String,
        message: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSettings {
    pub format: OutputFormat,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CertificationSettings {
    pub grid: [usize; 3],
    pub tolerance: f64,
}

impl Default for CertificationSettings {
    fn default() -> Self {
        Self {
            grid: [21, 21, 99],
            tolerance: crate::preinvex::CERTIFICATION_TOL,
        }
    }
}

impl CertificationSettings {
    pub fn grid_size(&self) -> GridSize {
        GridSize::new(self.grid[0], self.grid[1], self.grid[2])
    }
}

/// Sampling ranges for falsification. Unset ranges and lists fall back to
/// the span of the instance templates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FalsifySettings {
    pub trials: u64,
    pub seed: u64,
    pub top_k: usize,
    pub grid: [usize; 3],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_range: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_range: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_range: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_range: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_range: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub functions: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub maps: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theorems: Option<Vec<Theorem>>,
}

impl Default for FalsifySettings {
    fn default() -> Self {
        Self {
            trials: 10_000,
            seed: 0,
            top_k: 10,
            grid: [11, 11, 49],
            a_range: None,
            b_range: None,
            alpha_range: None,
            lambda_range: None,
            q_range: None,
            functions: None,
            maps: None,
            theorems: None,
        }
    }
}

/// A parameter grid; instances are its cartesian product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceTemplate {
    pub functions: Vec<String>,
    pub maps: Vec<String>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub alpha: Vec<f64>,
    pub lambda: Vec<f64>,
    pub q: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default)]
    pub certification: CertificationSettings,
    #[serde(default)]
    pub output: OutputSettings,
    #[serde(default)]
    pub falsify: FalsifySettings,
    #[serde(default)]
    pub instances: Vec<InstanceTemplate>,
}

impl SweepConfig {
    /// Parses and validates `source`.
    pub fn from_toml_str(source: &str) -> Result<Self, ConfigError> {
        let cfg: SweepConfig = toml::from_str(source).map_err(|e| ConfigError::Parse(e.to_string()))?;
        cfg.validate_with_source(Some(source))?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_toml_str(&text)
    }

    pub fn default_suite() -> Self {
        Self::from_toml_str(DEFAULT_CONFIG).expect("bundled default config is valid")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.validate_with_source(None)
    }

    fn validate_with_source(&self, source: Option<&str>) -> Result<(), ConfigError> {
        let invalid = |section: Option<(&str, usize)>, key: &str, field: String, message: String| {
            ConfigError::Invalid {
                field,
                message,
                line: source.and_then(|s| locate_key(s, section, key)),
            }
        };

        if self.schema_version != SCHEMA_VERSION {
            return Err(invalid(
                None,
                "schema_version",
                "schema_version".into(),
                format!("unsupported version {} (expected {SCHEMA_VERSION})", self.schema_version),
            ));
        }
        if let Err(e) = self.quadrature.validate() {
            return Err(invalid(Some(("quadrature", 0)), "rel_tol", "quadrature".into(), e.to_string()));
        }
        let [nu, nv, nt] = self.certification.grid;
        if nu < 2 || nv < 2 || nt < 1 {
            return Err(invalid(
                Some(("certification", 0)),
                "grid",
                "certification.grid".into(),
                "need n_u, n_v >= 2 and n_t >= 1".into(),
            ));
        }
        if !(self.certification.tolerance >= 0.0 && self.certification.tolerance.is_finite()) {
            return Err(invalid(
                Some(("certification", 0)),
                "tolerance",
                "certification.tolerance".into(),
                "must be a finite number >= 0".into(),
            ));
        }
        self.validate_falsify(&invalid)?;

        for (i, t) in self.instances.iter().enumerate() {
            let sec = Some(("instances", i));
            let lists: [(&str, usize); 7] = [
                ("functions", t.functions.len()),
                ("maps", t.maps.len()),
                ("a", t.a.len()),
                ("b", t.b.len()),
                ("alpha", t.alpha.len()),
                ("lambda", t.lambda.len()),
                ("q", t.q.len()),
            ];
            for (key, len) in lists {
                if len == 0 {
                    return Err(invalid(sec, key, format!("instances[{i}].{key}"), "list must not be empty".into()));
                }
            }
            for (j, id) in t.functions.iter().enumerate() {
                if let Err(e) = library_function(id) {
                    return Err(invalid(sec, "functions", format!("instances[{i}].functions[{j}]"), e.to_string()));
                }
            }
            for (j, id) in t.maps.iter().enumerate() {
                if let Err(e) = library_map(id) {
                    return Err(invalid(sec, "maps", format!("instances[{i}].maps[{j}]"), e.to_string()));
                }
            }
            let checks: [(&str, &Vec<f64>, fn(f64) -> bool, &str); 5] = [
                ("a", &t.a, |x| x.is_finite(), "must be finite"),
                ("b", &t.b, |x| x.is_finite(), "must be finite"),
                ("alpha", &t.alpha, |x| x > 0.0 && x.is_finite(), "alpha must be > 0"),
                ("lambda", &t.lambda, |x| x > 0.0 && x <= 0.5, "lambda must lie in (0, 1/2]"),
                ("q", &t.q, |x| x >= 1.0 && x.is_finite(), "q must be >= 1"),
            ];
            for (key, values, ok, msg) in checks {
                if let Some((j, v)) = values.iter().enumerate().find(|(_, &v)| !ok(v)) {
                    return Err(invalid(sec, key, format!("instances[{i}].{key}[{j}] = {v}"), msg.into()));
                }
            }
        }
        Ok(())
    }

    fn validate_falsify(
        &self,
        invalid: &dyn Fn(Option<(&str, usize)>, &str, String, String) -> ConfigError,
    ) -> Result<(), ConfigError> {
        let f = &self.falsify;
        let sec = Some(("falsify", 0));
        let [nu, nv, nt] = f.grid;
        if nu < 2 || nv < 2 || nt < 1 {
            return Err(invalid(sec, "grid", "falsify.grid".into(), "need n_u, n_v >= 2 and n_t >= 1".into()));
        }
        let ranges: [(&str, Option<[f64; 2]>, fn(f64) -> bool, &str); 5] = [
            ("a_range", f.a_range, |x| x.is_finite(), "must be finite"),
            ("b_range", f.b_range, |x| x.is_finite(), "must be finite"),
            ("alpha_range", f.alpha_range, |x| x > 0.0 && x.is_finite(), "alpha must be > 0"),
            ("lambda_range", f.lambda_range, |x| x > 0.0 && x <= 0.5, "lambda must lie in (0, 1/2]"),
            ("q_range", f.q_range, |x| x > 1.0 && x.is_finite(), "q must be > 1"),
        ];
        for (key, range, ok, msg) in ranges {
            if let Some([lo, hi]) = range {
                if !ok(lo) || !ok(hi) {
                    return Err(invalid(sec, key, format!("falsify.{key}"), msg.into()));
                }
                if lo > hi {
                    return Err(invalid(sec, key, format!("falsify.{key}"), format!("lower end {lo} exceeds upper end {hi}")));
                }
            }
        }
        for (j, id) in f.functions.iter().flatten().enumerate() {
            if let Err(e) = library_function(id) {
                return Err(invalid(sec, "functions", format!("falsify.functions[{j}]"), e.to_string()));
            }
        }
        for (j, id) in f.maps.iter().flatten().enumerate() {
            if let Err(e) = library_map(id) {
                return Err(invalid(sec, "maps", format!("falsify.maps[{j}]"), e.to_string()));
            }
        }
        Ok(())
    }

    /// Theorems using `q` need every configured `q > 1`.
    pub fn validate_for_theorems(&self, theorems: &[Theorem]) -> Result<(), ConfigError> {
        if let Some(th) = theorems.iter().find(|t| t.uses_q()) {
            for (i, t) in self.instances.iter().enumerate() {
                if let Some((j, v)) = t.q.iter().enumerate().find(|(_, &v)| v <= 1.0) {
                    return Err(ConfigError::Invalid {
                        field: format!("instances[{i}].q[{j}] = {v}"),
                        message: format!("{th} needs q > 1"),
                        line: None,
                    });
                }
            }
        }
        Ok(())
    }

    /// Applies `FRACINEQ_RTOL` / `FRACINEQ_ATOL` through `lookup`.
    pub fn apply_env_overrides(&mut self, lookup: impl Fn(&str) -> Option<String>) -> Result<(), ConfigError> {
        for (var, slot) in [(ENV_RTOL, &mut self.quadrature.rel_tol), (ENV_ATOL, &mut self.quadrature.abs_tol)] {
            if let Some(value) = lookup(var) {
                let parsed = value
                    .trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| *v > 0.0 && v.is_finite());
                match parsed {
                    Some(v) => *slot = v,
                    None => {
                        return Err(ConfigError::Env {
                            var: var.into(),
                            value,
                            message: "expected a positive number".into(),
                        })
                    }
                }
            }
        }
        Ok(())
    }
}

/// Worker count from `FRACINEQ_JOBS`, if set.
pub fn jobs_from_env(lookup: impl Fn(&str) -> Option<String>) -> Result<Option<usize>, ConfigError> {
    match lookup(ENV_JOBS) {
        None => Ok(None),
        Some(value) => match value.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(ConfigError::Env {
                var: ENV_JOBS.into(),
                value,
                message: "expected a positive integer".into(),
            }),
        },
    }
}

/// 1-based line of `key = ...` inside the `index`-th occurrence of
/// `[section]` / `[[section]]`, or at top level when `section` is `None`.
fn locate_key(source: &str, section: Option<(&str, usize)>, key: &str) -> Option<usize> {
    let mut current: Option<(String, usize)> = None;
    let mut seen: std::collections::HashMap<String, usize> = std::collections::HashMap::new();
    for (n, raw) in source.lines().enumerate() {
        let line = raw.trim();
        if line.starts_with('[') {
            let name = line.trim_matches(|c| c == '[' || c == ']').trim().to_string();
            let count = seen.entry(name.clone()).or_insert(0);
            current = Some((name, *count));
            *count += 1;
            continue;
        }
        let in_scope = match (&current, section) {
            (None, None) => true,
            (Some((name, idx)), Some((want, want_idx))) => name == want && *idx == want_idx,
            _ => false,
        };
        if in_scope {
            if let Some(rest) = line.strip_prefix(key) {
                if rest.trim_start().starts_with('=') {
                    return Some(n + 1);
                }
            }
        }
    }
    None
}
