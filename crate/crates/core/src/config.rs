//! Line-oriented run configuration: `key = value` pairs, optionally grouped
//! under `[section]` headers, `#` comments.
//!
//! ```text
//! command = sweep-angle
//! preset = fig2.4:cn-c
//!
//! [stack]
//! kappa1 = 0.5
//!
//! [excitation]
//! e_perp_re = 1
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use num_complex::Complex64;
use serde::Serialize;

use crate::maslov::GoMode;
use crate::sweep::{SweepVariable, MAX_SWEEP_KAPPA};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: syntax error: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown key `{key}`{hint}")]
    UnknownKey {
        line: usize,
        key: String,
        hint: String,
    },
    #[error("line {line}: `{key} = {value}` is out of range: {msg}")]
    Range {
        line: usize,
        key: String,
        value: String,
        msg: String,
    },
    #[error("unknown preset `{0}` (run `chiralfocus presets` for the list)")]
    UnknownPreset(String),
    #[error("missing command: set `command = ...` or pass one of sweep-angle, sweep-chirality, focal-scan, presets")]
    MissingCommand,
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    SweepAngle,
    SweepChirality,
    FocalScan,
    Presets,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::SweepAngle => "sweep-angle",
            Command::SweepChirality => "sweep-chirality",
            Command::FocalScan => "focal-scan",
            Command::Presets => "presets",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            Command::SweepAngle,
            Command::SweepChirality,
            Command::FocalScan,
            Command::Presets,
        ]
        .into_iter()
        .find(|c| c.as_str() == s)
    }
}

/// Explicit per-layer material and thickness settings.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct LayerSpec {
    pub eps_r: Option<f64>,
    pub mu_r: Option<f64>,
    pub kappa: Option<f64>,
    pub eta_r: Option<f64>,
    pub thickness: Option<f64>,
}

impl LayerSpec {
    pub fn is_empty(&self) -> bool {
        *self == LayerSpec::default()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub preset: Option<String>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub k0: Option<f64>,
    pub quarter_wave: Option<bool>,
    pub layers: [LayerSpec; 2],
    /// Incidence angle in degrees.
    pub theta_deg: Option<f64>,
    pub e_par: Option<Complex64>,
    pub e_perp: Option<Complex64>,
    pub variable: Option<SweepVariable>,
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub step: Option<f64>,
    pub focal_f: Option<f64>,
    pub focal_d: Option<f64>,
    pub kz_start: Option<f64>,
    pub kz_stop: Option<f64>,
    pub kz_step: Option<f64>,
    pub n_alpha: Option<usize>,
    pub n_gamma: Option<usize>,
    pub mode: Option<GoMode>,
}

/// Every accepted key with its home section (`""` for top level).
const KEYS: &[(&str, &str)] = &[
    ("command", ""),
    ("preset", ""),
    ("out", ""),
    ("threads", ""),
    ("k0", "stack"),
    ("quarter_wave", "stack"),
    ("eps_r1", "stack"),
    ("mu_r1", "stack"),
    ("kappa1", "stack"),
    ("eta_r1", "stack"),
    ("d1", "stack"),
    ("eps_r2", "stack"),
    ("mu_r2", "stack"),
    ("kappa2", "stack"),
    ("eta_r2", "stack"),
    ("d2", "stack"),
    ("theta_deg", "excitation"),
    ("e_par_re", "excitation"),
    ("e_par_im", "excitation"),
    ("e_perp_re", "excitation"),
    ("e_perp_im", "excitation"),
    ("variable", "sweep"),
    ("start", "sweep"),
    ("stop", "sweep"),
    ("step", "sweep"),
    ("f", "focal"),
    ("d", "focal"),
    ("kz_start", "focal"),
    ("kz_stop", "focal"),
    ("kz_step", "focal"),
    ("n_alpha", "focal"),
    ("n_gamma", "focal"),
    ("mode", "focal"),
];

const SECTIONS: &[&str] = &["", "run", "stack", "excitation", "sweep", "focal"];

struct Entry {
    line: usize,
    value: String,
}

fn range(line: usize, key: &str, value: &str, msg: impl Into<String>) -> ConfigError {
    ConfigError::Range {
        line,
        key: key.into(),
        value: value.into(),
        msg: msg.into(),
    }
}

fn parse_f64(key: &str, e: &Entry) -> Result<f64, ConfigError> {
    let v: f64 = e.value.parse().map_err(|_| ConfigError::Syntax {
        line: e.line,
        msg: format!("`{key}` expects a number, got `{}`", e.value),
    })?;
    if !v.is_finite() {
        return Err(range(e.line, key, &e.value, "must be finite"));
    }
    Ok(v)
}

fn parse_usize(key: &str, e: &Entry) -> Result<usize, ConfigError> {
    let v: usize = e.value.parse().map_err(|_| ConfigError::Syntax {
        line: e.line,
        msg: format!("`{key}` expects a positive integer, got `{}`", e.value),
    })?;
    if v == 0 {
        return Err(range(e.line, key, &e.value, "must be at least 1"));
    }
    Ok(v)
}

fn parse_bool(key: &str, e: &Entry) -> Result<bool, ConfigError> {
    match e.value.as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(ConfigError::Syntax {
            line: e.line,
            msg: format!("`{key}` expects true or false, got `{}`", e.value),
        }),
    }
}

/// Parses configuration text. Physical ranges are checked here; stack
/// completeness and preset names are checked when the run is resolved.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut entries: BTreeMap<&'static str, Entry> = BTreeMap::new();
    let mut section = String::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = raw.split('#').next().unwrap_or("").trim();
        if s.is_empty() {
            continue;
        }
        if let Some(rest) = s.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| ConfigError::Syntax {
                    line,
                    msg: "unterminated section header".into(),
                })?
                .trim();
            if !SECTIONS.contains(&name) {
                return Err(ConfigError::Syntax {
                    line,
                    msg: format!("unknown section [{name}] (expected one of run, stack, excitation, sweep, focal)"),
                });
            }
            section = if name == "run" {
                String::new()
            } else {
                name.to_string()
            };
            continue;
        }
        let (key, value) = s.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line,
            msg: format!("expected `key = value`, got `{s}`"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        if value.is_empty() {
            return Err(ConfigError::Syntax {
                line,
                msg: format!("`{key}` has no value"),
            });
        }
        let &(k, home) =
            KEYS.iter()
                .find(|(k, _)| *k == key)
                .ok_or_else(|| ConfigError::UnknownKey {
                    line,
                    key: key.to_string(),
                    hint: String::new(),
                })?;
        if !section.is_empty() && section != home {
            let place = if home.is_empty() {
                "the top level".to_string()
            } else {
                format!("[{home}]")
            };
            return Err(ConfigError::UnknownKey {
                line,
                key: key.to_string(),
                hint: format!(" in [{section}] (it belongs in {place})"),
            });
        }
        if let Some(prev) = entries.get(k) {
            return Err(ConfigError::Syntax {
                line,
                msg: format!("`{key}` already set on line {}", prev.line),
            });
        }
        entries.insert(
            k,
            Entry {
                line,
                value: value.to_string(),
            },
        );
    }

    let mut c = RunConfig::default();
    let num = |k: &str| entries.get(k).map(|e| parse_f64(k, e)).transpose();
    let positive = |k: &str| -> Result<Option<f64>, ConfigError> {
        match entries.get(k) {
            Some(e) => {
                let v = parse_f64(k, e)?;
                if v <= 0.0 {
                    return Err(range(e.line, k, &e.value, "must be positive"));
                }
                Ok(Some(v))
            }
            None => Ok(None),
        }
    };

    if let Some(e) = entries.get("command") {
        c.command = Some(Command::parse(&e.value).ok_or_else(|| ConfigError::Syntax {
            line: e.line,
            msg: format!("unknown command `{}` (expected sweep-angle, sweep-chirality, focal-scan or presets)", e.value),
        })?);
    }
    c.preset = entries.get("preset").map(|e| e.value.clone());
    c.out = entries.get("out").map(|e| PathBuf::from(&e.value));
    c.threads = entries
        .get("threads")
        .map(|e| parse_usize("threads", e))
        .transpose()?;
    c.k0 = positive("k0")?;
    c.quarter_wave = entries
        .get("quarter_wave")
        .map(|e| parse_bool("quarter_wave", e))
        .transpose()?;

    for (idx, layer) in c.layers.iter_mut().enumerate() {
        let n = idx + 1;
        let key = |base: &str| -> &'static str {
            KEYS.iter()
                .find(|(k, _)| *k == format!("{base}{n}"))
                .map(|(k, _)| *k)
                .expect("known key")
        };
        layer.eps_r = positive(key("eps_r"))?;
        layer.mu_r = positive(key("mu_r"))?;
        layer.eta_r = positive(key("eta_r"))?;
        let kk = key("kappa");
        if let Some(e) = entries.get(kk) {
            let v = parse_f64(kk, e)?;
            if !(0.0..=MAX_SWEEP_KAPPA).contains(&v) {
                return Err(range(
                    e.line,
                    kk,
                    &e.value,
                    format!("chirality must lie in [0, {MAX_SWEEP_KAPPA}]"),
                ));
            }
            layer.kappa = Some(v);
        }
        let dk = key("d");
        if let Some(e) = entries.get(dk) {
            let v = parse_f64(dk, e)?;
            if v < 0.0 {
                return Err(range(
                    e.line,
                    dk,
                    &e.value,
                    "thickness must be non-negative",
                ));
            }
            layer.thickness = Some(v);
        }
        if layer.eta_r.is_some() && (layer.eps_r.is_some() || layer.mu_r.is_some()) {
            let line = entries[key("eta_r")].line;
            return Err(ConfigError::Syntax {
                line,
                msg: format!("layer {n}: give either eta_r{n} or eps_r{n}/mu_r{n}, not both"),
            });
        }
    }

    if let Some(e) = entries.get("theta_deg") {
        let v = parse_f64("theta_deg", e)?;
        if !(0.0..90.0).contains(&v) {
            return Err(range(
                e.line,
                "theta_deg",
                &e.value,
                "incidence angle must lie in [0, 90) degrees",
            ));
        }
        c.theta_deg = Some(v);
    }
    let complex = |re: &str, im: &str| -> Result<Option<Complex64>, ConfigError> {
        match (num(re)?, num(im)?) {
            (None, None) => Ok(None),
            (a, b) => Ok(Some(Complex64::new(a.unwrap_or(0.0), b.unwrap_or(0.0)))),
        }
    };
    c.e_par = complex("e_par_re", "e_par_im")?;
    c.e_perp = complex("e_perp_re", "e_perp_im")?;
    if c.e_par.is_some() || c.e_perp.is_some() {
        let (p, q) = (c.e_par.unwrap_or_default(), c.e_perp.unwrap_or_default());
        if p.norm_sqr() + q.norm_sqr() == 0.0 {
            return Err(ConfigError::Invalid(
                "excitation amplitudes are all zero".into(),
            ));
        }
    }

    if let Some(e) = entries.get("variable") {
        c.variable = Some(match e.value.as_str() {
            "theta_i" => SweepVariable::ThetaI,
            "kappa1" => SweepVariable::Kappa1,
            "kappa2" => SweepVariable::Kappa2,
            _ => {
                return Err(ConfigError::Syntax {
                    line: e.line,
                    msg: format!(
                        "`variable` must be theta_i, kappa1 or kappa2, got `{}`",
                        e.value
                    ),
                })
            }
        });
    }
    c.start = num("start")?;
    c.stop = num("stop")?;
    c.step = positive("step")?;
    if let (Some(a), Some(b)) = (c.start, c.stop) {
        if b < a {
            let e = &entries["stop"];
            return Err(range(
                e.line,
                "stop",
                &e.value,
                format!("must not be below start = {a}"),
            ));
        }
    }
    let bounds = match c.variable {
        Some(SweepVariable::ThetaI) => {
            Some((0.0, 90.0, "angle sweeps cover [0, 90) degrees", false))
        }
        Some(_) => Some((0.0, MAX_SWEEP_KAPPA, "chirality sweeps cover [0, 5]", true)),
        None => None,
    };
    if let Some((lo, hi, msg, closed)) = bounds {
        for k in ["start", "stop"] {
            if let Some(e) = entries.get(k) {
                let v = parse_f64(k, e)?;
                if v < lo || v > hi || (!closed && v == hi) {
                    return Err(range(e.line, k, &e.value, msg));
                }
            }
        }
    }

    c.focal_f = positive("f")?;
    c.focal_d = positive("d")?;
    c.kz_start = num("kz_start")?;
    c.kz_stop = num("kz_stop")?;
    c.kz_step = positive("kz_step")?;
    if let (Some(a), Some(b)) = (c.kz_start, c.kz_stop) {
        if b < a {
            let e = &entries["kz_stop"];
            return Err(range(
                e.line,
                "kz_stop",
                &e.value,
                format!("must not be below kz_start = {a}"),
            ));
        }
    }
    c.n_alpha = entries
        .get("n_alpha")
        .map(|e| parse_usize("n_alpha", e))
        .transpose()?;
    c.n_gamma = entries
        .get("n_gamma")
        .map(|e| parse_usize("n_gamma", e))
        .transpose()?;
    if let Some(e) = entries.get("mode") {
        c.mode = Some(e.value.parse().map_err(|_| ConfigError::Syntax {
            line: e.line,
            msg: format!(
                "`mode` must be paper_faithful or full_matrix, got `{}`",
                e.value
            ),
        })?);
    }
    Ok(c)
}

/// Home section of a configuration key (`""` for top level).
pub fn key_section(key: &str) -> Option<&'static str> {
    KEYS.iter().find(|(k, _)| *k == key).map(|(_, s)| *s)
}

fn fmt_f64(v: f64) -> String {
    // shortest representation that parses back to the same value
    format!("{v:?}")
}

impl RunConfig {
    /// Replaces every setting that `other` defines.
    pub fn overlay(&mut self, other: RunConfig) {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(
            command,
            preset,
            out,
            threads,
            k0,
            quarter_wave,
            theta_deg,
            e_par,
            e_perp,
            variable,
            start,
            stop,
            step,
            focal_f,
            focal_d,
            kz_start,
            kz_stop,
            kz_step,
            n_alpha,
            n_gamma,
            mode
        );
        for (mine, theirs) in self.layers.iter_mut().zip(other.layers) {
            macro_rules! layer {
                ($($f:ident),*) => { $( if theirs.$f.is_some() { mine.$f = theirs.$f; } )* };
            }
            layer!(eps_r, mu_r, kappa, eta_r, thickness);
        }
    }

    /// Renders the configuration back to text that parses to an equal value.
    pub fn to_text(&self) -> String {
        let mut top = String::new();
        let mut sections: BTreeMap<&str, String> = BTreeMap::new();
        let mut put = |key: &str, value: String| {
            let home = KEYS
                .iter()
                .find(|(k, _)| *k == key)
                .map(|(_, s)| *s)
                .unwrap_or("");
            let target = if home.is_empty() {
                &mut top
            } else {
                sections.entry(home).or_default()
            };
            let _ = writeln!(target, "{key} = {value}");
        };
        if let Some(c) = self.command {
            put("command", c.as_str().into());
        }
        if let Some(p) = &self.preset {
            put("preset", p.clone());
        }
        if let Some(o) = &self.out {
            put("out", o.display().to_string());
        }
        if let Some(t) = self.threads {
            put("threads", t.to_string());
        }
        if let Some(v) = self.k0 {
            put("k0", fmt_f64(v));
        }
        if let Some(v) = self.quarter_wave {
            put("quarter_wave", v.to_string());
        }
        for (i, l) in self.layers.iter().enumerate() {
            let n = i + 1;
            for (name, v) in [
                ("eps_r", l.eps_r),
                ("mu_r", l.mu_r),
                ("kappa", l.kappa),
                ("eta_r", l.eta_r),
                ("d", l.thickness),
            ] {
                if let Some(v) = v {
                    put(&format!("{name}{n}"), fmt_f64(v));
                }
            }
        }
        if let Some(v) = self.theta_deg {
            put("theta_deg", fmt_f64(v));
        }
        for (name, v) in [("e_par", self.e_par), ("e_perp", self.e_perp)] {
            if let Some(v) = v {
                put(&format!("{name}_re"), fmt_f64(v.re));
                put(&format!("{name}_im"), fmt_f64(v.im));
            }
        }
        if let Some(v) = self.variable {
            put("variable", v.name().into());
        }
        for (name, v) in [
            ("start", self.start),
            ("stop", self.stop),
            ("step", self.step),
            ("f", self.focal_f),
            ("d", self.focal_d),
            ("kz_start", self.kz_start),
            ("kz_stop", self.kz_stop),
            ("kz_step", self.kz_step),
        ] {
            if let Some(v) = v {
                put(name, fmt_f64(v));
            }
        }
        if let Some(v) = self.n_alpha {
            put("n_alpha", v.to_string());
        }
        if let Some(v) = self.n_gamma {
            put("n_gamma", v.to_string());
        }
        if let Some(m) = self.mode {
            put(
                "mode",
                match m {
                    GoMode::PaperFaithful => "paper_faithful".into(),
                    GoMode::FullMatrix => "full_matrix".into(),
                },
            );
        }
        let mut out = top;
        for (name, body) in sections {
            let _ = write!(out, "\n[{name}]\n{body}");
        }
        out
    }
}
