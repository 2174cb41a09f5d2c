//! Scenario configuration: per-scenario defaults, a flat TOML file and
//! `--param key=value` overrides, resolved in that order of precedence.
//!
//! A config file is a flat TOML table. The reserved keys `scenario`, `out`
//! and `threads` mirror the CLI flags; every other key must be a parameter
//! of the chosen scenario. Nested tables and unknown keys are errors.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::io::fmt_num;
use super::Scenario;
use crate::error::{Error, Result};
use crate::hamiltonians::ModelParams;

/// A parameter value.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Num(f64),
    List(Vec<f64>),
    Bool(bool),
    Text(String),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Num(_) => "number",
            Value::List(_) => "list",
            Value::Bool(_) => "bool",
            Value::Text(_) => "text",
        }
    }

    /// Parses the textual form used by `--param`: `true`/`false`, a number,
    /// a comma-separated list of numbers, or free text.
    pub fn parse(s: &str) -> Value {
        let s = s.trim();
        match s {
            "true" => return Value::Bool(true),
            "false" => return Value::Bool(false),
            _ => {}
        }
        if let Ok(x) = s.parse::<f64>() {
            return Value::Num(x);
        }
        if s.contains(',') {
            if let Ok(v) = s.split(',').map(|t| t.trim().parse::<f64>()).collect::<std::result::Result<Vec<_>, _>>() {
                return Value::List(v);
            }
        }
        Value::Text(s.to_string())
    }

    fn from_toml(key: &str, v: &toml::Value) -> Result<Value> {
        let num = |x: &toml::Value| match x {
            toml::Value::Float(f) => Some(*f),
            toml::Value::Integer(i) => Some(*i as f64),
            _ => None,
        };
        match v {
            toml::Value::Float(_) | toml::Value::Integer(_) => Ok(Value::Num(num(v).expect("numeric"))),
            toml::Value::Boolean(b) => Ok(Value::Bool(*b)),
            toml::Value::String(s) => Ok(Value::Text(s.clone())),
            toml::Value::Array(a) => a
                .iter()
                .map(|x| num(x).ok_or_else(|| Error::Config(format!("{key}: list entries must be numbers"))))
                .collect::<Result<Vec<_>>>()
                .map(Value::List),
            _ => Err(Error::Config(format!("{key}: unsupported value (tables are not allowed)"))),
        }
    }

    /// Coerces `self` to the type of `template`.
    fn coerce_like(self, template: &Value, key: &str) -> Result<Value> {
        match (template, self) {
            (Value::Num(_), v @ Value::Num(_)) => Ok(v),
            (Value::List(_), v @ Value::List(_)) => Ok(v),
            (Value::List(_), Value::Num(x)) => Ok(Value::List(vec![x])),
            (Value::Bool(_), v @ Value::Bool(_)) => Ok(v),
            (Value::Text(_), Value::Text(s)) => Ok(Value::Text(s)),
            (Value::Text(_), Value::Num(x)) => Ok(Value::Text(x.to_string())),
            (t, v) => Err(Error::Config(format!("{key}: expected {}, got {} ({v})", t.kind(), v.kind()))),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Num(x) => f.write_str(&fmt_num(*x)),
            Value::List(v) => f.write_str(&v.iter().map(|&x| fmt_num(x)).collect::<Vec<_>>().join(",")),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Text(s) => f.write_str(s),
        }
    }
}

/// Fully resolved configuration of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub params: BTreeMap<String, Value>,
    pub out_dir: PathBuf,
    pub threads: Option<usize>,
}

fn f_main() -> f64 {
    5f64.powf(-1.5)
}

fn num(k: &str, v: f64) -> (String, Value) {
    (k.to_string(), Value::Num(v))
}

fn list(k: &str, v: &[f64]) -> (String, Value) {
    (k.to_string(), Value::List(v.to_vec()))
}

fn text(k: &str, v: &str) -> (String, Value) {
    (k.to_string(), Value::Text(v.to_string()))
}

fn boolean(k: &str, v: bool) -> (String, Value) {
    (k.to_string(), Value::Bool(v))
}

/// Every parameter a scenario accepts, with its default value.
pub fn defaults(scenario: Scenario) -> BTreeMap<String, Value> {
    use Scenario::*;
    let drive = vec![num("omega", 1.0), num("omega_q", 1.2), num("f", f_main()), num("levels", 700.0)];
    let stability = vec![num("edge_width", 20.0), num("edge_tol", 1e-6)];
    let main = vec![num("omega0", 0.975), num("g", 0.04), num("dt", 0.005)];
    let detunings = vec![list("detunings", &[0.01, 0.025, 0.05, 0.1]), num("detuning_sign", -1.0)];
    let mut m: Vec<(String, Value)> = drive;
    match scenario {
        Fig1 | Fig2 | Fig3 => {
            m.extend(stability);
            m.extend([
                list("g_values", &[0.04, 0.08]),
                num("detuning_min", -0.2),
                num("detuning_max", 0.2),
                num("detuning_samples", 41.0),
                num("j_max", 100.0),
            ]);
        }
        Fig4 | FigA2 => {
            m.extend(stability);
            m.extend(detunings);
            m.extend([num("g", 0.04), num("j_max", 100.0), num("n_max", 100.0)]);
        }
        Fig5 => {
            m.extend(stability);
            m.retain(|(k, _)| k != "f" && k != "omega_q");
            m.extend([
                num("omega0", 1.05),
                num("omega_q", 1.25),
                num("g", 0.15 / 1.05),
                list("f_values", &[0.02, 0.05, 0.1, 0.2]),
                num("j_max", 400.0),
                num("n_max", 300.0),
            ]);
        }
        Fig6 => {
            m.extend(stability);
            m.extend([num("omega0", 0.975), num("g", 0.04), num("j_max", 200.0), num("curve_h0_max", 100.0), num("curve_samples", 201.0)]);
        }
        Fig7 => {
            m.extend(stability);
            m.extend([
                list("detunings", &[0.01, 0.025]),
                num("detuning_sign", -1.0),
                num("g", 0.04),
                num("dt", 0.005),
                num("j_max", 100.0),
            ]);
        }
        Fig8 => {
            m.extend(detunings);
            m.extend([
                num("g", 0.04),
                num("dt", 0.005),
                num("j_max", 200.0),
                text("models", "full,rotating,displaced"),
                num("curve_detuning", 0.025),
                num("curve_n_max", 100.0),
                num("curve_samples", 201.0),
            ]);
        }
        Fig9 => {
            m.extend(stability);
            m.extend(main);
            m.push(list("markers", &[11.64, 8.99, 129.13, 65.0]));
        }
        Fig10 => {
            m.extend(main);
            m.extend([list("markers", &[11.64, 8.99, 129.13, 65.0]), num("grid_samples", 161.0)]);
        }
        Fig11 => {
            m.extend(main);
            m.extend([
                num("q0", 5.0),
                num("p0", 0.0),
                num("spin", 0.0),
                list("frames", &[0.0, 10.0, 20.0, 50.0, 400.0, 1000.0]),
                text("models", "full,rwa"),
                num("grid_samples", 121.0),
                num("grid_half_width", 12.0),
                num("series_every", 10.0),
                num("angular_bins", 64.0),
                num("budget", 2e11),
                boolean("allow_long", false),
            ]);
        }
        FigA1 => {
            m.retain(|(k, _)| k != "f" && k != "levels" && k != "omega_q");
            m.extend([
                num("omega0", 1.0),
                num("omega_q", 1.0),
                num("g", 0.04),
                num("dt", 0.005),
                num("levels", 1000.0),
                list("f_multipliers", &[0.5, 1.0, 2.0]),
                text("models", "rwa,full"),
                num("t_max", 30.0),
                num("edge_width", 20.0),
                num("sample_every", 20.0),
                num("budget", 2e11),
                boolean("allow_long", false),
            ]);
        }
        FigA3 | FigA4 => {
            let d = if scenario == FigA3 { 0.01 } else { 0.025 };
            m.extend([
                num("detuning", d),
                num("detuning_sign", -1.0),
                list("g_values", &[0.0025, 0.005, 0.0088, 0.0138, 0.0375, 0.05]),
                num("dt", 0.005),
                num("j_max", 200.0),
            ]);
        }
    }
    m.into_iter().collect()
}

impl ExperimentConfig {
    /// Defaults of `scenario` with output into `out_dir`.
    pub fn new(scenario: Scenario, out_dir: impl Into<PathBuf>) -> Self {
        Self { scenario, params: defaults(scenario), out_dir: out_dir.into(), threads: None }
    }

    /// Applies one `key=value` override.
    pub fn set(&mut self, key: &str, value: Value) -> Result<()> {
        let template =
            self.params.get(key).ok_or_else(|| Error::Config(format!("unknown parameter {key:?} for scenario {}", self.scenario)))?;
        let v = value.coerce_like(template, key)?;
        self.params.insert(key.to_string(), v);
        Ok(())
    }

    /// Applies `key=value` strings in order.
    pub fn apply_overrides<S: AsRef<str>>(&mut self, overrides: &[S]) -> Result<()> {
        for o in overrides {
            let o = o.as_ref();
            let (k, v) = o.split_once('=').ok_or_else(|| Error::Config(format!("expected key=value, got {o:?}")))?;
            self.set(k.trim(), Value::parse(v))?;
        }
        Ok(())
    }

    /// Applies a flat TOML table. `scenario`, `out` and `threads` are
    /// handled here; everything else goes through [`set`](Self::set).
    pub fn apply_toml(&mut self, text: &str) -> Result<()> {
        let table: toml::Table = text.parse().map_err(|e| Error::Config(format!("config file: {e}")))?;
        for (k, v) in &table {
            match k.as_str() {
                "scenario" => {
                    let s = v.as_str().ok_or_else(|| Error::Config("scenario must be a string".into()))?;
                    if s.parse::<Scenario>()? != self.scenario {
                        return Err(Error::Config(format!("config file is for scenario {s}, not {}", self.scenario)));
                    }
                }
                "out" => {
                    let s = v.as_str().ok_or_else(|| Error::Config("out must be a string".into()))?;
                    self.out_dir = PathBuf::from(s);
                }
                "threads" => {
                    let n = v.as_integer().filter(|&n| n >= 1).ok_or_else(|| Error::Config("threads must be a positive integer".into()))?;
                    self.threads = Some(n as usize);
                }
                _ => self.set(k, Value::from_toml(k, v)?)?,
            }
        }
        Ok(())
    }

    /// Defaults, then the config file, then the overrides.
    pub fn resolve<S: AsRef<str>>(scenario: Scenario, config_file: Option<&Path>, overrides: &[S]) -> Result<Self> {
        let mut c = Self::new(scenario, PathBuf::from(format!("out/{scenario}")));
        if let Some(p) = config_file {
            let text = std::fs::read_to_string(p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
            c.apply_toml(&text)?;
        }
        c.apply_overrides(overrides)?;
        Ok(c)
    }

    fn get(&self, key: &str) -> Result<&Value> {
        self.params.get(key).ok_or_else(|| Error::Config(format!("scenario {} has no parameter {key:?}", self.scenario)))
    }

    pub fn num(&self, key: &str) -> Result<f64> {
        match self.get(key)? {
            Value::Num(x) if x.is_finite() => Ok(*x),
            v => Err(Error::Config(format!("{key}: expected a finite number, got {v}"))),
        }
    }

    /// A non-negative integer parameter.
    pub fn count(&self, key: &str) -> Result<usize> {
        let x = self.num(key)?;
        if x < 0.0 || x.fract() != 0.0 || x > u32::MAX as f64 {
            return Err(Error::Config(format!("{key}: expected a non-negative integer, got {x}")));
        }
        Ok(x as usize)
    }

    pub fn list(&self, key: &str) -> Result<Vec<f64>> {
        match self.get(key)? {
            Value::List(v) if v.iter().all(|x| x.is_finite()) && !v.is_empty() => Ok(v.clone()),
            v => Err(Error::Config(format!("{key}: expected a non-empty list of finite numbers, got {v}"))),
        }
    }

    pub fn flag(&self, key: &str) -> Result<bool> {
        match self.get(key)? {
            Value::Bool(b) => Ok(*b),
            v => Err(Error::Config(format!("{key}: expected true or false, got {v}"))),
        }
    }

    pub fn text(&self, key: &str) -> Result<&str> {
        match self.get(key)? {
            Value::Text(s) => Ok(s),
            v => Err(Error::Config(format!("{key}: expected text, got {v}"))),
        }
    }

    /// Comma-separated text list.
    pub fn names(&self, key: &str) -> Result<Vec<String>> {
        let v: Vec<String> = self.text(key)?.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
        if v.is_empty() {
            return Err(Error::Config(format!("{key}: empty list")));
        }
        Ok(v)
    }

    /// Model parameters from `omega0, omega_q, g, f, omega, levels`; any of
    /// them can be replaced through `with`.
    pub fn model_params(&self, with: &[(&str, f64)]) -> Result<ModelParams> {
        let pick = |k: &str| -> Result<f64> {
            match with.iter().find(|(n, _)| *n == k) {
                Some((_, v)) => Ok(*v),
                None => self.num(k),
            }
        };
        let levels = match with.iter().find(|(n, _)| *n == "levels") {
            Some((_, v)) => *v as usize,
            None => self.count("levels")?,
        };
        ModelParams::new(pick("omega0")?, pick("omega_q")?, pick("g")?, pick("f")?, pick("omega")?, levels)
    }

    /// `ω0 = ω + detuning_sign · Δ0` for a tabulated detuning magnitude.
    pub fn omega0_for(&self, detuning: f64) -> Result<f64> {
        let sign = self.num("detuning_sign")?;
        if sign != 1.0 && sign != -1.0 {
            return Err(Error::Config(format!("detuning_sign must be 1 or -1, got {sign}")));
        }
        Ok(self.num("omega")? + sign * detuning)
    }

    /// `key = value` lines echoing the resolved parameters.
    pub fn header(&self) -> Vec<(String, String)> {
        let mut h = vec![
            ("tool".to_string(), env!("CARGO_PKG_NAME").to_string()),
            ("version".to_string(), env!("CARGO_PKG_VERSION").to_string()),
            ("scenario".to_string(), self.scenario.to_string()),
        ];
        h.extend(self.params.iter().map(|(k, v)| (format!("param.{k}"), v.to_string())));
        h
    }
}

impl FromStr for Value {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(Value::parse(s))
    }
}
