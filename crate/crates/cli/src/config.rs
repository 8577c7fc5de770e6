//! Line-oriented `key = value` run configuration.

use std::collections::HashMap;
use std::path::PathBuf;

use fiv_core::dynamics::State;
use fiv_core::model::Params;
use fiv_core::response::{Case, HbMode, SweepVariable, MIN_GRID};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Simulation {
    pub dt: f64,
    pub t_end: f64,
    pub initial: State,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSettings {
    pub variable: SweepVariable,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub cases: Vec<Case>,
}

/// Which harmonic-balance residuals to trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceChoice {
    Real,
    Imag,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeSettings {
    pub omega_min: f64,
    pub omega_max: f64,
    pub grid: usize,
    pub mode: HbMode,
    pub source: SourceChoice,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: Params,
    pub simulation: Simulation,
    pub sweep: SweepSettings,
    pub amplitude: AmplitudeSettings,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: Params::default(),
            simulation: Simulation {
                dt: 1e-3,
                t_end: 400.0,
                initial: State::initial(0.0, 0.0, 0.0, 0.0),
            },
            sweep: SweepSettings {
                variable: SweepVariable::V0,
                from: 0.0,
                to: 1.0,
                steps: 20,
                cases: Case::ALL.to_vec(),
            },
            amplitude: AmplitudeSettings {
                omega_min: 0.05,
                omega_max: 3.0,
                grid: 200,
                mode: HbMode::Verbatim,
                source: SourceChoice::Both,
            },
            out: PathBuf::from("."),
        }
    }
}

pub const KEYS: [&str; 30] = [
    "alpha",
    "beta",
    "gamma",
    "theta",
    "xi_x",
    "xi_q",
    "mu",
    "xi",
    "eta",
    "v0",
    "f0",
    "omega0",
    "dt",
    "t_end",
    "init_x",
    "init_v",
    "init_q",
    "init_i",
    "vary",
    "from",
    "to",
    "steps",
    "cases",
    "omega_min",
    "omega_max",
    "grid",
    "hb_mode",
    "source",
    "out",
    "zeta",
];

pub fn parse_case(s: &str) -> Option<Case> {
    Case::ALL
        .into_iter()
        .find(|c| c.to_string().eq_ignore_ascii_case(s))
}

pub fn parse_hb_mode(s: &str) -> Option<HbMode> {
    match s {
        "verbatim" => Some(HbMode::Verbatim),
        "corrected" => Some(HbMode::Corrected),
        _ => None,
    }
}

pub fn parse_source(s: &str) -> Option<SourceChoice> {
    match s {
        "real" => Some(SourceChoice::Real),
        "imag" => Some(SourceChoice::Imag),
        "both" => Some(SourceChoice::Both),
        _ => None,
    }
}

impl RunConfig {
    /// Assigns one key. `zeta` is accepted as an alias of `xi`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let num = || {
            value
                .parse::<f64>()
                .map_err(|_| format!("`{value}` is not a number"))
        };
        let count = || {
            value
                .parse::<usize>()
                .map_err(|_| format!("`{value}` is not a non-negative integer"))
        };
        let p = &mut self.params;
        let s = &mut self.simulation;
        match key {
            "alpha" => p.alpha = num()?,
            "beta" => p.beta = num()?,
            "gamma" => p.gamma = num()?,
            "theta" => p.theta = num()?,
            "xi_x" => p.xi_x = num()?,
            "xi_q" => p.xi_q = num()?,
            "mu" => p.mu = num()?,
            "xi" | "zeta" => p.xi = num()?,
            "eta" => p.eta = num()?,
            "v0" => p.v0 = num()?,
            "f0" => p.f0 = num()?,
            "omega0" => p.omega0 = num()?,
            "dt" => s.dt = num()?,
            "t_end" => s.t_end = num()?,
            "init_x" => s.initial.x = num()?,
            "init_v" => s.initial.v = num()?,
            "init_q" => s.initial.q = num()?,
            "init_i" => s.initial.i = num()?,
            "vary" => self.sweep.variable = value.parse().map_err(|e| format!("{e}"))?,
            "from" => self.sweep.from = num()?,
            "to" => self.sweep.to = num()?,
            "steps" => self.sweep.steps = count()?,
            "cases" => {
                self.sweep.cases = value
                    .split(',')
                    .map(|c| {
                        parse_case(c.trim()).ok_or_else(|| format!("unknown case `{}`", c.trim()))
                    })
                    .collect::<Result<_, _>>()?
            }
            "omega_min" => self.amplitude.omega_min = num()?,
            "omega_max" => self.amplitude.omega_max = num()?,
            "grid" => self.amplitude.grid = count()?,
            "hb_mode" => {
                self.amplitude.mode = parse_hb_mode(value)
                    .ok_or_else(|| format!("`{value}` is not verbatim or corrected"))?
            }
            "source" => {
                self.amplitude.source = parse_source(value)
                    .ok_or_else(|| format!("`{value}` is not real, imag or both"))?
            }
            "out" => self.out = PathBuf::from(value),
            _ => return Err("unknown key".to_string()),
        }
        Ok(())
    }

    /// Checks every invariant. On failure returns the offending key and reason.
    pub fn check(&self) -> Result<(), (&'static str, String)> {
        self.params
            .validate()
            .map_err(|e| (invalid_key(&e), e.to_string()))?;
        let s = &self.simulation;
        if !(s.dt.is_finite() && s.dt > 0.0) {
            return Err(("dt", format!("must be > 0, got {}", s.dt)));
        }
        if !(s.t_end.is_finite() && s.t_end > 0.0) {
            return Err(("t_end", format!("must be > 0, got {}", s.t_end)));
        }
        for (key, v) in [
            ("init_x", s.initial.x),
            ("init_v", s.initial.v),
            ("init_q", s.initial.q),
            ("init_i", s.initial.i),
        ] {
            if !v.is_finite() {
                return Err((key, format!("must be finite, got {v}")));
            }
        }
        let w = &self.sweep;
        if w.steps < 2 {
            return Err(("steps", format!("must be >= 2, got {}", w.steps)));
        }
        if !(w.from.is_finite() && w.to.is_finite() && w.from < w.to) {
            return Err(("to", format!("need from < to, got {} and {}", w.from, w.to)));
        }
        if w.cases.is_empty() {
            return Err(("cases", "no cases listed".to_string()));
        }
        let a = &self.amplitude;
        if !(a.omega_min.is_finite() && a.omega_min > 0.0) {
            return Err(("omega_min", format!("must be > 0, got {}", a.omega_min)));
        }
        if !(a.omega_max.is_finite() && a.omega_max > a.omega_min) {
            return Err((
                "omega_max",
                format!("must exceed omega_min, got {}", a.omega_max),
            ));
        }
        if a.grid < MIN_GRID {
            return Err(("grid", format!("must be >= {MIN_GRID}, got {}", a.grid)));
        }
        Ok(())
    }
}

fn invalid_key(e: &fiv_core::Error) -> &'static str {
    match e {
        fiv_core::Error::InvalidParameter { name, .. } => name,
        _ => "alpha",
    }
}

/// Parses configuration text. Missing keys keep their defaults; `#` starts a
/// comment. Errors name the line and the key.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    let mut lines: HashMap<&'static str, usize> = HashMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(CliError::Config {
                line,
                key: content.to_string(),
                reason: "expected `key = value`".to_string(),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        let Some(known) = KEYS.iter().find(|k| **k == key) else {
            return Err(CliError::Config {
                line,
                key: key.to_string(),
                reason: "unknown key".to_string(),
            });
        };
        if lines.insert(known, line).is_some() {
            return Err(CliError::Config {
                line,
                key: key.to_string(),
                reason: "duplicate key".to_string(),
            });
        }
        cfg.set(key, value).map_err(|reason| CliError::Config {
            line,
            key: key.to_string(),
            reason,
        })?;
    }
    cfg.check().map_err(|(key, reason)| CliError::Config {
        line: lines.get(key).copied().unwrap_or(0),
        key: key.to_string(),
        reason,
    })?;
    Ok(cfg)
}
