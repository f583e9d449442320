use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::Args;
use fho_core::classical::DriveCase;
use fho_core::experiments::{default_alpha_grid, log_grid, Preset};
use fho_core::model::HBAR_SI;
use fho_core::{OscillatorParams, SchemeKind};
use serde::{Deserialize, Serialize};

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn bad(key: &str, msg: impl fmt::Display) -> ConfigError {
    ConfigError(format!("config key `{key}`: {msg}"))
}

/// A fixed step in units of 1/ω₀, or `auto`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Step {
    Auto,
    Fixed(f64),
}

impl std::str::FromStr for Step {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(Step::Auto);
        }
        s.parse::<f64>()
            .map(Step::Fixed)
            .map_err(|_| format!("expected a number or `auto`, got `{s}`"))
    }
}

impl Serialize for Step {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Step::Auto => s.serialize_str("auto"),
            Step::Fixed(v) => s.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for Step {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Step::Fixed(v)),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Everything that can come from a config file or the command line.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    /// paper-resonant or paper-nonresonant
    #[arg(long)]
    pub preset: Option<String>,
    /// K (constant of motion) or H (Hamiltonian)
    #[arg(long)]
    pub scheme: Option<String>,
    /// resonant or nonresonant
    #[arg(long)]
    pub case: Option<String>,
    /// Drive amplitude α, N
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Drive frequency ω, rad/s
    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    /// Natural frequency ω₀, rad/s
    #[arg(long, allow_negative_numbers = true)]
    pub omega0: Option<f64>,
    /// Mass, kg
    #[arg(long, allow_negative_numbers = true)]
    pub mass: Option<f64>,
    /// Drive phase φ, rad
    #[arg(long, allow_negative_numbers = true)]
    pub phi: Option<f64>,
    /// Retained levels
    #[arg(long)]
    pub n_states: Option<usize>,
    /// Step in units of 1/ω₀, or `auto`
    #[arg(long)]
    pub dt: Option<Step>,
    /// Horizon in natural periods
    #[arg(long, allow_negative_numbers = true)]
    pub t_end: Option<f64>,
    /// Write every n-th step
    #[arg(long)]
    pub stride: Option<usize>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Sweep threads, 0 = all cores
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Seed for randomized validation inputs
    #[arg(long)]
    pub seed: Option<u64>,
    /// Explicit α grid, comma separated
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub alphas: Option<Vec<f64>>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha_max: Option<f64>,
    #[arg(long)]
    pub alpha_count: Option<usize>,
    /// Classical initial position, m
    #[arg(long, allow_negative_numbers = true)]
    pub x0: Option<f64>,
    /// Classical initial velocity, m/s
    #[arg(long, allow_negative_numbers = true)]
    pub v0: Option<f64>,
}

impl Settings {
    /// Fields set in `over` win.
    pub fn merge(self, over: Settings) -> Settings {
        macro_rules! pick {
            ($($f:ident),*) => { Settings { $($f: over.$f.or(self.$f)),* } };
        }
        pick!(
            preset, scheme, case, alpha, omega, omega0, mass, phi, n_states, dt, t_end, stride,
            out, jobs, seed, alphas, alpha_min, alpha_max, alpha_count, x0, v0
        )
    }
}

/// Reads TOML, or JSON when the extension is `.json`. A manifest written
/// by this tool is accepted too.
pub fn load_file(path: &Path) -> Result<Settings, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
    let parsed = if path.extension().is_some_and(|e| e == "json") {
        let mut value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        if let Some(inner) = value.get_mut("config") {
            value = inner.take();
        }
        serde_json::from_value(value).map_err(|e| ConfigError(format!("{}: {e}", path.display())))
    } else {
        toml::from_str(&text).map_err(|e| ConfigError(format!("{}: {e}", path.display())))
    };
    parsed
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SchemeChoice {
    K,
    H,
}

impl SchemeChoice {
    pub fn kind(self, case: DriveCase) -> SchemeKind {
        match self {
            SchemeChoice::K => SchemeKind::constant_of_motion(case),
            SchemeChoice::H => SchemeKind::Hamiltonian,
        }
    }
}

/// Fully resolved configuration. Serializes to the same keys as
/// [`Settings`], so a manifest can be fed back in.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Resolved {
    pub preset: Option<String>,
    pub scheme: SchemeChoice,
    #[serde(serialize_with = "case_name")]
    pub case: DriveCase,
    pub alpha: f64,
    pub omega: f64,
    pub omega0: f64,
    pub mass: f64,
    pub phi: f64,
    pub n_states: usize,
    pub dt: Step,
    pub t_end: f64,
    pub stride: Option<usize>,
    pub out: PathBuf,
    pub jobs: usize,
    pub seed: u64,
    pub alphas: Vec<f64>,
    pub x0: f64,
    pub v0: f64,
}

fn case_name<S: serde::Serializer>(c: &DriveCase, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(match c {
        DriveCase::Resonant => "resonant",
        DriveCase::NonResonant => "nonresonant",
    })
}

fn finite(key: &str, v: f64) -> Result<f64, ConfigError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad(key, format!("must be finite, got {v}")))
    }
}

fn positive(key: &str, v: f64) -> Result<f64, ConfigError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(bad(key, format!("must be > 0, got {v}")))
    }
}

impl Resolved {
    pub fn from_settings(s: &Settings) -> Result<Self, ConfigError> {
        let preset = match &s.preset {
            Some(name) => Some(Preset::parse(name).ok_or_else(|| {
                bad("preset", format!("unknown preset `{name}` (paper-resonant, paper-nonresonant)"))
            })?),
            None => None,
        };
        let base = preset.unwrap_or(Preset::PaperResonant).params();

        let scheme = match s.scheme.as_deref() {
            None | Some("K") | Some("k") => SchemeChoice::K,
            Some("H") | Some("h") => SchemeChoice::H,
            Some(other) => return Err(bad("scheme", format!("expected K or H, got `{other}`"))),
        };
        let omega0 = positive("omega0", s.omega0.unwrap_or(base.natural_frequency))?;
        let explicit_case = match s.case.as_deref() {
            None => None,
            Some("resonant") => Some(DriveCase::Resonant),
            Some("nonresonant") => Some(DriveCase::NonResonant),
            Some(other) => {
                return Err(bad("case", format!("expected resonant or nonresonant, got `{other}`")))
            }
        };
        let case = explicit_case
            .or(preset.map(Preset::case))
            .unwrap_or(match s.omega {
                Some(w) if w != omega0 => DriveCase::NonResonant,
                _ => DriveCase::Resonant,
            });
        let omega = match (s.omega, case) {
            (Some(w), _) => finite("omega", w)?,
            (None, DriveCase::Resonant) => omega0,
            (None, DriveCase::NonResonant) => 0.5 * omega0,
        };
        if omega < 0.0 {
            return Err(bad("omega", format!("must be >= 0, got {omega}")));
        }
        match case {
            DriveCase::Resonant if omega != omega0 => {
                return Err(bad("case", format!("resonant requires omega = omega0, got {omega} vs {omega0}")))
            }
            DriveCase::NonResonant if omega == omega0 => {
                return Err(bad("case", "nonresonant requires omega != omega0"))
            }
            _ => {}
        }

        let alpha = finite("alpha", s.alpha.unwrap_or(base.drive_amplitude))?;
        if alpha < 0.0 {
            return Err(bad("alpha", format!("must be >= 0, got {alpha}")));
        }
        let n_states = s.n_states.unwrap_or(12);
        if n_states < 2 {
            return Err(bad("n_states", format!("must be >= 2, got {n_states}")));
        }
        let dt = s.dt.unwrap_or(if preset.is_some() { Step::Auto } else { Step::Fixed(1e-3) });
        if let Step::Fixed(v) = dt {
            positive("dt", v)?;
        }
        if dt == Step::Auto && n_states > fho_core::dynamics::oracle::MAX_ORACLE_STATES {
            return Err(bad("dt", "auto step supports at most 64 states"));
        }
        let stride = s.stride;
        if stride == Some(0) {
            return Err(bad("stride", "must be >= 1"));
        }

        let alphas = match (&s.alphas, s.alpha_min, s.alpha_max, s.alpha_count) {
            (Some(list), ..) => list.clone(),
            (None, None, None, None) => default_alpha_grid(),
            (None, lo, hi, count) => log_grid(
                positive("alpha_min", lo.unwrap_or(1e-15))?,
                positive("alpha_max", hi.unwrap_or(1e-12))?,
                count.unwrap_or(20),
            ),
        };
        if alphas.is_empty() {
            return Err(bad("alphas", "grid is empty"));
        }
        if let Some(a) = alphas.iter().find(|a| !(**a >= 0.0 && a.is_finite())) {
            return Err(bad("alphas", format!("values must be finite and >= 0, got {a}")));
        }

        Ok(Resolved {
            preset: preset.map(|p| p.name().to_string()),
            scheme,
            case,
            alpha,
            omega,
            omega0,
            mass: positive("mass", s.mass.unwrap_or(base.mass))?,
            phi: finite("phi", s.phi.unwrap_or(base.drive_phase))?,
            n_states,
            dt,
            t_end: positive("t_end", s.t_end.unwrap_or(if preset.is_some() { 1.0 } else { 50.0 }))?,
            stride,
            out: s.out.clone().unwrap_or_else(|| PathBuf::from("out")),
            jobs: s.jobs.unwrap_or(0),
            seed: s.seed.unwrap_or(0),
            alphas,
            x0: finite("x0", s.x0.unwrap_or(0.0))?,
            v0: finite("v0", s.v0.unwrap_or(0.0))?,
        })
    }

    pub fn params(&self) -> OscillatorParams {
        OscillatorParams {
            mass: self.mass,
            natural_frequency: self.omega0,
            drive_amplitude: self.alpha,
            drive_frequency: self.omega,
            drive_phase: self.phi,
            hbar: HBAR_SI,
        }
    }

    /// Horizon in units of 1/ω₀.
    pub fn t_end_tau(&self) -> f64 {
        self.t_end * 2.0 * PI
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve(s: Settings) -> Result<Resolved, ConfigError> {
        Resolved::from_settings(&s)
    }

    #[test]
    fn defaults() {
        let r = resolve(Settings::default()).unwrap();
        assert_eq!(r.case, DriveCase::Resonant);
        assert_eq!(r.omega, r.omega0);
        assert_eq!(r.alpha, 1e-13);
        assert_eq!(r.n_states, 12);
        assert_eq!(r.dt, Step::Fixed(1e-3));
        assert_eq!(r.alphas.len(), 20);
    }

    #[test]
    fn nonresonant_preset_halves_frequency() {
        let r = resolve(Settings {
            preset: Some("paper-nonresonant".into()),
            ..Default::default()
        })
        .unwrap();
        assert_eq!(r.case, DriveCase::NonResonant);
        assert_eq!(r.omega, 0.5 * r.omega0);
        assert_eq!((r.dt, r.t_end), (Step::Auto, 1.0));
    }

    #[test]
    fn flags_override_file() {
        let file = Settings {
            alpha: Some(1e-14),
            n_states: Some(6),
            ..Default::default()
        };
        let flags = Settings {
            alpha: Some(2e-14),
            ..Default::default()
        };
        let r = resolve(file.merge(flags)).unwrap();
        assert_eq!(r.alpha, 2e-14);
        assert_eq!(r.n_states, 6);
    }

    #[test]
    fn errors_name_the_key() {
        for (s, key) in [
            (Settings { scheme: Some("Q".into()), ..Default::default() }, "scheme"),
            (Settings { n_states: Some(1), ..Default::default() }, "n_states"),
            (Settings { dt: Some(Step::Fixed(-1.0)), ..Default::default() }, "dt"),
            (Settings { preset: Some("x".into()), ..Default::default() }, "preset"),
            (Settings { case: Some("resonant".into()), omega: Some(1.0), ..Default::default() }, "case"),
            (Settings { alphas: Some(vec![]), ..Default::default() }, "alphas"),
        ] {
            let e = resolve(s).unwrap_err();
            assert!(e.0.contains(&format!("`{key}`")), "{e}");
        }
    }

    #[test]
    fn step_parsing() {
        assert_eq!("auto".parse::<Step>().unwrap(), Step::Auto);
        assert_eq!("2e-4".parse::<Step>().unwrap(), Step::Fixed(2e-4));
        assert!("fast".parse::<Step>().is_err());
        let s: Settings = toml::from_str("dt = \"auto\"\nalpha = 1e-14").unwrap();
        assert_eq!(s.dt, Some(Step::Auto));
        assert!(toml::from_str::<Settings>("alpah = 1").is_err());
    }
}
