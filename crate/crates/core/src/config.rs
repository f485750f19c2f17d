//! Run configuration shared by the command-line tool.
//!
//! A configuration is a flat list of `key=value` pairs. It can be read from
//! a plain file (`#` starts a comment), from the `#! key=value` header of a
//! CSV file written by the tool, or from the `config` object of a JSON
//! output, so any output can be fed back in to reproduce it.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::classical::{ClassicalParams, ClassicalPolicy};
use crate::error::{Error, Result};
use crate::experiments::{ExperimentPolicy, TrendCriteria};
use crate::fourier::{ExtractionPolicy, SamplingDomain};
use crate::hpoincare::{GammaInfConvention, PoincareSpec, TruncationPolicy, Weight};
use crate::qfield::{DualIndex, IdealHNF, Integral, RealQuadraticField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// A level given either by a rational integer generator or by HNF entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LevelSpec {
    Rational(i64),
    Hnf(i64, i64, i64),
}

impl LevelSpec {
    pub fn ideal(&self, field: &RealQuadraticField) -> Result<IdealHNF> {
        match *self {
            Self::Rational(n) => field.ideal_from_gen(Integral::new(n, 0)),
            Self::Hnf(a, b, c) => IdealHNF::from_hnf(field, a, b, c),
        }
    }
}

impl fmt::Display for LevelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Rational(n) => write!(f, "{n}"),
            Self::Hnf(a, b, c) => write!(f, "{a}:{b}:{c}"),
        }
    }
}

impl FromStr for LevelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameters(format!("level '{s}': expected n or m00:m01:m11"));
        let parts: Vec<&str> = s.trim().split(':').collect();
        let ints = parts
            .iter()
            .map(|p| p.trim().parse::<i64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        match ints[..] {
            [n] => Ok(Self::Rational(n)),
            [a, b, c] => Ok(Self::Hnf(a, b, c)),
            _ => Err(bad()),
        }
    }
}

/// Every input of every command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub d: i64,
    /// Parallel weights of a weight sweep.
    pub ks: Vec<i64>,
    /// Weight of a level sweep or certificate.
    pub weight: (i64, i64),
    /// Parallel weight for `certify`, weight for `classical`.
    pub k: Option<i64>,
    pub level: LevelSpec,
    pub levels: Vec<LevelSpec>,
    /// Numerators `a + b omega` of `nu = numerator / sqrt D`.
    pub nu: (i64, i64),
    pub mu: (i64, i64),
    /// `certify` covers every totally positive `nu` of this trace instead of `nu`.
    pub nu_trace: Option<i64>,
    pub grid_n: usize,
    pub y: [f64; 2],
    pub term_cutoff: f64,
    pub gamma_height_max: Option<f64>,
    pub max_terms: usize,
    pub convention: GammaInfConvention,
    pub aliasing_threshold: f64,
    pub safety_factor: f64,
    pub trend_threshold: f64,
    pub max_error: f64,
    pub m: i64,
    pub n: i64,
    pub q: i64,
    pub cmax: i64,
    pub m_max: i64,
    pub n_max: usize,
    pub classical_grid_n: usize,
    pub classical_y: Option<f64>,
    pub classical_cutoff: f64,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        let cp = ClassicalPolicy::default();
        let tc = TrendCriteria::default();
        Self {
            d: 5,
            ks: vec![6, 10, 14, 18],
            weight: (4, 4),
            k: None,
            level: LevelSpec::Rational(1),
            levels: [2, 3, 4, 7].map(LevelSpec::Rational).to_vec(),
            nu: (0, 1),
            mu: (-1, 1),
            nu_trace: None,
            grid_n: SamplingDomain::DEFAULT_GRID,
            y: [1.1, 1.0],
            term_cutoff: 1e-10,
            gamma_height_max: None,
            max_terms: TruncationPolicy::DEFAULT_MAX_TERMS,
            convention: GammaInfConvention::UnitExtended,
            aliasing_threshold: ExtractionPolicy::default().aliasing_threshold,
            safety_factor: 10.0,
            trend_threshold: tc.threshold,
            max_error: tc.max_error,
            m: 1,
            n: 1,
            q: 1,
            cmax: 1000,
            m_max: 10,
            n_max: 10,
            classical_grid_n: cp.grid_n,
            classical_y: cp.y,
            classical_cutoff: cp.term_cutoff,
            format: OutputFormat::Csv,
        }
    }
}

/// Keys in output order.
pub const KEYS: &[&str] = &[
    "d",
    "ks",
    "weight",
    "k",
    "level",
    "levels",
    "nu",
    "mu",
    "nu_trace",
    "grid_n",
    "y",
    "term_cutoff",
    "gamma_height_max",
    "max_terms",
    "convention",
    "aliasing_threshold",
    "safety_factor",
    "trend_threshold",
    "max_error",
    "m",
    "n",
    "q",
    "cmax",
    "m_max",
    "n_max",
    "classical_grid_n",
    "classical_y",
    "classical_cutoff",
    "format",
];

fn bad(key: &str, value: &str) -> Error {
    Error::InvalidParameters(format!("cannot parse {key}={value}"))
}

fn num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value.trim().parse().map_err(|_| bad(key, value))
}

fn list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    if value.trim().is_empty() {
        return Ok(Vec::new());
    }
    value.split(',').map(|v| num(key, v)).collect()
}

fn pair<T: FromStr + Copy>(key: &str, value: &str) -> Result<(T, T)> {
    match list::<T>(key, value)?[..] {
        [a, b] => Ok((a, b)),
        _ => Err(bad(key, value)),
    }
}

fn optional<T: FromStr>(key: &str, value: &str) -> Result<Option<T>> {
    match value.trim() {
        "" | "none" => Ok(None),
        v => num(key, v).map(Some),
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn show_opt<T: fmt::Debug>(x: Option<T>) -> String {
    x.map_or_else(|| "none".to_string(), |v| format!("{v:?}"))
}

impl RunConfig {
    /// Sets one key from its text form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key.trim() {
            "d" => self.d = num(key, v)?,
            "ks" => self.ks = list(key, v)?,
            "weight" => self.weight = pair(key, v)?,
            "k" => self.k = optional(key, v)?,
            "level" => self.level = v.parse()?,
            "levels" => {
                self.levels = if v.is_empty() {
                    Vec::new()
                } else {
                    v.split(',').map(str::parse).collect::<Result<_>>()?
                }
            }
            "nu" => self.nu = pair(key, v)?,
            "mu" => self.mu = pair(key, v)?,
            "nu_trace" => self.nu_trace = optional(key, v)?,
            "grid_n" => self.grid_n = num(key, v)?,
            "y" => self.y = pair::<f64>(key, v).map(|(a, b)| [a, b])?,
            "term_cutoff" => self.term_cutoff = num(key, v)?,
            "gamma_height_max" => self.gamma_height_max = optional(key, v)?,
            "max_terms" => self.max_terms = num(key, v)?,
            "convention" => {
                self.convention = match v {
                    "unit_extended" => GammaInfConvention::UnitExtended,
                    "translations_only" => GammaInfConvention::translations_only(),
                    _ => match v.strip_prefix("translations_only:") {
                        Some(cap) => GammaInfConvention::TranslationsOnly {
                            unit_cap: num(key, cap)?,
                        },
                        None => return Err(bad(key, v)),
                    },
                }
            }
            "aliasing_threshold" => self.aliasing_threshold = num(key, v)?,
            "safety_factor" => self.safety_factor = num(key, v)?,
            "trend_threshold" => self.trend_threshold = num(key, v)?,
            "max_error" => self.max_error = num(key, v)?,
            "m" => self.m = num(key, v)?,
            "n" => self.n = num(key, v)?,
            "q" => self.q = num(key, v)?,
            "cmax" => self.cmax = num(key, v)?,
            "m_max" => self.m_max = num(key, v)?,
            "n_max" => self.n_max = num(key, v)?,
            "classical_grid_n" => self.classical_grid_n = num(key, v)?,
            "classical_y" => self.classical_y = optional(key, v)?,
            "classical_cutoff" => self.classical_cutoff = num(key, v)?,
            "format" => {
                self.format = match v {
                    "csv" => OutputFormat::Csv,
                    "json" => OutputFormat::Json,
                    _ => return Err(bad(key, v)),
                }
            }
            other => return Err(Error::InvalidParameters(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    /// Text form of one key; round-trips exactly through [`RunConfig::set`].
    pub fn get(&self, key: &str) -> Option<String> {
        let s = match key {
            "d" => self.d.to_string(),
            "ks" => join(&self.ks),
            "weight" => format!("{},{}", self.weight.0, self.weight.1),
            "k" => show_opt(self.k),
            "level" => self.level.to_string(),
            "levels" => join(&self.levels),
            "nu" => format!("{},{}", self.nu.0, self.nu.1),
            "mu" => format!("{},{}", self.mu.0, self.mu.1),
            "nu_trace" => show_opt(self.nu_trace),
            "grid_n" => self.grid_n.to_string(),
            "y" => format!("{:?},{:?}", self.y[0], self.y[1]),
            "term_cutoff" => format!("{:?}", self.term_cutoff),
            "gamma_height_max" => show_opt(self.gamma_height_max),
            "max_terms" => self.max_terms.to_string(),
            "convention" => match self.convention {
                GammaInfConvention::UnitExtended => "unit_extended".into(),
                GammaInfConvention::TranslationsOnly { unit_cap } => format!("translations_only:{unit_cap}"),
            },
            "aliasing_threshold" => format!("{:?}", self.aliasing_threshold),
            "safety_factor" => format!("{:?}", self.safety_factor),
            "trend_threshold" => format!("{:?}", self.trend_threshold),
            "max_error" => format!("{:?}", self.max_error),
            "m" => self.m.to_string(),
            "n" => self.n.to_string(),
            "q" => self.q.to_string(),
            "cmax" => self.cmax.to_string(),
            "m_max" => self.m_max.to_string(),
            "n_max" => self.n_max.to_string(),
            "classical_grid_n" => self.classical_grid_n.to_string(),
            "classical_y" => show_opt(self.classical_y),
            "classical_cutoff" => format!("{:?}", self.classical_cutoff),
            "format" => match self.format {
                OutputFormat::Csv => "csv".into(),
                OutputFormat::Json => "json".into(),
            },
            _ => return None,
        };
        Some(s)
    }

    /// All keys with their text values, in [`KEYS`] order.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        KEYS.iter().map(|&k| (k, self.get(k).expect("known key"))).collect()
    }

    pub fn to_map(&self) -> BTreeMap<String, String> {
        self.entries().into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }

    pub fn apply_map<'a>(&mut self, pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<()> {
        for (k, v) in pairs {
            self.set(k, v)?;
        }
        Ok(())
    }

    /// Reads pairs from any of the three accepted text forms.
    pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>> {
        if text.trim_start().starts_with('{') {
            let value: serde_json::Value =
                serde_json::from_str(text).map_err(|e| Error::InvalidParameters(format!("config JSON: {e}")))?;
            let obj = value
                .get("config")
                .and_then(|c| c.as_object())
                .ok_or_else(|| Error::InvalidParameters("JSON input has no 'config' object".into()))?;
            return obj
                .iter()
                .map(|(k, v)| match v.as_str() {
                    Some(s) => Ok((k.clone(), s.to_string())),
                    None => Err(Error::InvalidParameters(format!("config value for {k} is not a string"))),
                })
                .collect();
        }
        let embedded = text.lines().any(|l| l.starts_with("#!"));
        let mut out = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let body = match (embedded, line.strip_prefix("#!")) {
                (true, Some(b)) => b,
                (true, None) => continue,
                (false, _) => line.split('#').next().unwrap_or(""),
            };
            if body.trim().is_empty() {
                continue;
            }
            let (k, v) = body
                .split_once('=')
                .ok_or_else(|| Error::InvalidParameters(format!("config line {}: expected key=value", i + 1)))?;
            out.push((k.trim().to_string(), v.trim().to_string()));
        }
        Ok(out)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (k, v) in Self::parse_pairs(text)? {
            // written by the output layer next to the configuration
            if k == "command" {
                continue;
            }
            cfg.set(&k, &v)?;
        }
        Ok(cfg)
    }

    /// `#! key=value` header lines.
    pub fn csv_header(&self) -> String {
        self.entries().into_iter().map(|(k, v)| format!("#! {k}={v}\n")).collect()
    }

    pub fn field(&self) -> Result<RealQuadraticField> {
        RealQuadraticField::new(self.d)
    }

    pub fn nu_index(&self, field: &RealQuadraticField) -> Result<DualIndex> {
        DualIndex::totally_positive(field, Integral::new(self.nu.0, self.nu.1))
    }

    pub fn mu_index(&self, field: &RealQuadraticField) -> Result<DualIndex> {
        DualIndex::totally_positive(field, Integral::new(self.mu.0, self.mu.1))
    }

    pub fn domain(&self) -> Result<SamplingDomain> {
        SamplingDomain::new(self.y, self.grid_n)
    }

    pub fn experiment_policy(&self) -> Result<ExperimentPolicy> {
        let policy = ExperimentPolicy {
            term_cutoff: self.term_cutoff,
            gamma_height_max: self.gamma_height_max,
            max_terms: self.max_terms,
            convention: self.convention,
            extraction: ExtractionPolicy {
                aliasing_threshold: self.aliasing_threshold,
            },
        };
        let probe = TruncationPolicy {
            max_terms: self.max_terms,
            ..TruncationPolicy::new(self.gamma_height_max.unwrap_or(1.0), self.term_cutoff)
        };
        probe.validate()?;
        if !(self.aliasing_threshold > 0.0 && self.aliasing_threshold < 1.0) {
            return Err(Error::InvalidPolicy(format!("aliasing_threshold = {}", self.aliasing_threshold)));
        }
        Ok(policy)
    }

    pub fn trend_criteria(&self) -> TrendCriteria {
        TrendCriteria {
            threshold: self.trend_threshold,
            max_error: self.max_error,
        }
    }

    /// Weight for `certify`: `k` if given, otherwise `weight`.
    pub fn certify_weight(&self) -> Result<Weight> {
        match self.k {
            Some(k) => Weight::parallel(k),
            None => Weight::new(self.weight.0, self.weight.1),
        }
    }

    pub fn certify_spec(&self) -> Result<PoincareSpec> {
        let field = self.field()?;
        let level = self.level.ideal(&field)?;
        PoincareSpec::new(field, self.certify_weight()?, self.nu_index(&field)?, level, self.convention)
    }

    /// Specs to certify: one per `nu` of trace `nu_trace`, or the single `nu`.
    pub fn certify_specs(&self) -> Result<Vec<PoincareSpec>> {
        let base = self.certify_spec()?;
        match self.nu_trace {
            None => Ok(vec![base]),
            Some(t) if t >= 1 => base.field.totally_positive_of_trace(t).into_iter().map(|nu| base.with_nu(nu)).collect(),
            Some(t) => Err(Error::InvalidParameters(format!("nu_trace = {t} must be positive"))),
        }
    }

    pub fn classical_params(&self) -> Result<ClassicalParams> {
        ClassicalParams::new(self.m, self.n, self.k.unwrap_or(12), self.q)
    }

    pub fn classical_policy(&self) -> Result<ClassicalPolicy> {
        if !(self.classical_cutoff > 0.0) {
            return Err(Error::InvalidPolicy(format!("classical_cutoff = {}", self.classical_cutoff)));
        }
        if let Some(y) = self.classical_y {
            if !(y > 0.0 && y.is_finite()) {
                return Err(Error::InvalidDomain(format!("classical_y = {y}")));
            }
        }
        Ok(ClassicalPolicy {
            grid_n: self.classical_grid_n,
            term_cutoff: self.classical_cutoff,
            y: self.classical_y,
            max_terms: self.max_terms,
        })
    }

    pub fn safety(&self) -> Result<f64> {
        if self.safety_factor > 0.0 && self.safety_factor.is_finite() {
            Ok(self.safety_factor)
        } else {
            Err(Error::InvalidParameters(format!("safety_factor = {}", self.safety_factor)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let mut cfg = RunConfig::default();
        cfg.set("y", "1.3, 0.9").unwrap();
        cfg.set("levels", "2,1:3:5").unwrap();
        cfg.set("convention", "translations_only:8").unwrap();
        cfg.set("k", "12").unwrap();
        cfg.set("term_cutoff", "0.1").unwrap();
        let text: String = cfg.entries().into_iter().map(|(k, v)| format!("{k}={v}\n")).collect();
        assert_eq!(RunConfig::from_text(&text).unwrap(), cfg);
        assert_eq!(RunConfig::from_text(&cfg.csv_header()).unwrap(), cfg);
    }

    #[test]
    fn file_syntax() {
        let cfg = RunConfig::from_text("# comment\n\nd = 13  # trailing\nks=6,8\n").unwrap();
        assert_eq!(cfg.d, 13);
        assert_eq!(cfg.ks, vec![6, 8]);
        assert!(RunConfig::from_text("nonsense\n").is_err());
        assert!(RunConfig::from_text("colour=blue\n").is_err());
        assert!(RunConfig::from_text("ks=6,x\n").is_err());
    }

    #[test]
    fn embedded_header_ignores_data_lines() {
        let text = "#! d=13\n#! grid_n=16\naxis,param\nweight,6\n";
        let cfg = RunConfig::from_text(text).unwrap();
        assert_eq!((cfg.d, cfg.grid_n), (13, 16));
    }

    #[test]
    fn json_config_object() {
        let text = r#"{"config": {"d": "2", "nu": "0,1"}, "report": []}"#;
        assert_eq!(RunConfig::from_text(text).unwrap().d, 2);
        assert!(RunConfig::from_text(r#"{"report": 1}"#).is_err());
    }

    #[test]
    fn defaults_are_valid() {
        let cfg = RunConfig::default();
        let field = cfg.field().unwrap();
        assert!(cfg.nu_index(&field).is_ok());
        assert!(cfg.mu_index(&field).is_ok());
        assert!(cfg.domain().is_ok());
        assert!(cfg.experiment_policy().is_ok());
        assert!(cfg.classical_params().is_ok());
        assert!(cfg.certify_spec().is_ok());
    }

    #[test]
    fn level_syntax() {
        assert_eq!("7".parse::<LevelSpec>().unwrap(), LevelSpec::Rational(7));
        assert_eq!("1:0:5".parse::<LevelSpec>().unwrap(), LevelSpec::Hnf(1, 0, 5));
        assert!("1:2".parse::<LevelSpec>().is_err());
    }
}
