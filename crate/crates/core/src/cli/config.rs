//! Run configuration: a single JSON document, natural or SI units.

use crate::field::{Branch, FieldConfig};
use crate::frame::{Event, FrameParams};
use crate::modes::{Family, Mode, Prefactor, StateSpec};
use crate::residual::Scheme;
use crate::sign::Sign;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Environment variable naming a directory searched for config files.
pub const CONFIG_DIR_ENV: &str = "ROTDIRAC_CONFIG_DIR";
/// File looked up in that directory when no `--config` is given.
pub const DEFAULT_CONFIG_NAME: &str = "default.json";

pub mod si {
    pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
    pub const HBAR: f64 = 1.054_571_817e-34;
    pub const C: f64 = 299_792_458.0;
    pub const MEV: f64 = 1.602_176_634e-13;
    pub const PROTON_REST_MEV: f64 = 938.272_088_16;
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("malformed config: {0}")]
    Parse(String),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    #[default]
    Natural,
    Si,
}

fn plus() -> Sign {
    Sign::Plus
}

/// Field block. In natural units `wave`, `axial` are `eHc/(ħΩ²)`, `eH₃c/(ħΩ²)`
/// and `mass` is `mc²/(ħΩ)`. In SI units fields are in tesla, the charge in
/// units of `e`, the rest energy in MeV and `omega` in rad/s.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldBlock {
    #[serde(default)]
    pub units: Units,
    #[serde(default = "plus")]
    pub polarization: Sign,
    #[serde(default = "plus")]
    pub propagation: Sign,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wave: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axial: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wave_tesla: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axial_tesla: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub charge: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass_mev: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<Branch>,
}

/// Frame block. `tau` is `τΩ`; `tau_s` is `τ` in seconds and needs SI `omega`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_s: Option<f64>,
    #[serde(default = "plus")]
    pub freq_sign: Sign,
    /// Defaults to `polarization × propagation`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub light_sign: Option<Sign>,
}

impl Default for FrameBlock {
    fn default() -> Self {
        FrameBlock { tau: Some(0.0), tau_s: None, freq_sign: Sign::Plus, light_sign: None }
    }
}

/// Mode block. For `n = 0` give exactly one of `e_rot`, `p_rot`, `momentum`
/// (the resting-frame `pc`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeBlock {
    pub family: Family,
    #[serde(default)]
    pub n: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_rot: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_rot: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub momentum: Option<f64>,
    #[serde(default)]
    pub root_index: usize,
    #[serde(default = "exponential")]
    pub prefactor: Prefactor,
}

fn exponential() -> Prefactor {
    Prefactor::Exponential
}

impl Default for ModeBlock {
    fn default() -> Self {
        ModeBlock {
            family: Family::Massless,
            n: 0,
            e_rot: None,
            p_rot: Some(1.0),
            momentum: None,
            root_index: 0,
            prefactor: Prefactor::Exponential,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyBlock {
    #[serde(default = "analytic")]
    pub scheme: Scheme,
    #[serde(default = "default_tol")]
    pub tolerance: f64,
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "plus")]
    pub coupling: Sign,
    /// Relative change applied to `E` before verification.
    #[serde(default)]
    pub perturb_energy: f64,
}

fn analytic() -> Scheme {
    Scheme::Analytic
}
fn default_tol() -> f64 {
    1e-8
}
fn default_points() -> usize {
    1000
}

impl Default for VerifyBlock {
    fn default() -> Self {
        VerifyBlock {
            scheme: Scheme::Analytic,
            tolerance: 1e-8,
            points: 1000,
            seed: 0,
            coupling: Sign::Plus,
            perturb_energy: 0.0,
        }
    }
}

/// Explicit coefficients for `roots` and the cubic scan axes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CubicBlock {
    pub h: f64,
    pub e0: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventRow {
    pub phi: f64,
    pub r: f64,
    pub z: f64,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub field: FieldBlock,
    #[serde(default)]
    pub frame: FrameBlock,
    #[serde(default)]
    pub mode: ModeBlock,
    #[serde(default)]
    pub verify: VerifyBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cubic: Option<CubicBlock>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub events: Vec<EventRow>,
    #[serde(default)]
    pub output: OutputBlock,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            field: FieldBlock {
                units: Units::Natural,
                polarization: Sign::Plus,
                propagation: Sign::Plus,
                wave: Some(0.5),
                axial: Some(-1.0),
                mass: Some(0.0),
                omega: None,
                wave_tesla: None,
                axial_tesla: None,
                charge: None,
                mass_mev: None,
                branch: None,
            },
            frame: FrameBlock::default(),
            mode: ModeBlock::default(),
            verify: VerifyBlock::default(),
            cubic: None,
            events: Vec::new(),
            output: OutputBlock::default(),
        }
    }
}

/// Everything the commands need, in natural units.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Resolved {
    pub field: FieldConfig,
    pub frame: FrameParams,
    pub branch: Branch,
    /// `Ω` in rad/s when given.
    pub omega_si: Option<f64>,
}

fn need(v: Option<f64>, what: &str) -> Result<f64, ConfigError> {
    let x = v.ok_or_else(|| ConfigError::Invalid(format!("missing {what}")))?;
    if !x.is_finite() {
        return Err(ConfigError::Invalid(format!("{what} is not finite")));
    }
    Ok(x)
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io { path: path.display().to_string(), msg: e.to_string() })?;
        Self::from_json(&text)
    }

    /// Convert to the dimensionless library inputs.
    pub fn resolve(&self) -> Result<Resolved, ConfigError> {
        let f = &self.field;
        let (wave, axial, mass, omega_si) = match f.units {
            Units::Natural => (f.wave.unwrap_or(0.0), need(f.axial, "field.axial")?, f.mass.unwrap_or(0.0), f.omega),
            Units::Si => {
                let omega = need(f.omega, "field.omega (rad/s)")?;
                if omega <= 0.0 {
                    return Err(ConfigError::Invalid("field.omega must be positive".into()));
                }
                let q = f.charge.unwrap_or(1.0);
                let unit = q * si::ELEMENTARY_CHARGE * si::C * si::C / (si::HBAR * omega * omega);
                let wave = f.wave_tesla.unwrap_or(0.0) * unit;
                let axial = need(f.axial_tesla, "field.axial_tesla")? * unit;
                let mass = f.mass_mev.unwrap_or(0.0) * si::MEV / (si::HBAR * omega);
                (wave, axial, mass, Some(omega))
            }
        };
        let field = FieldConfig::new(f.polarization, f.propagation, wave, axial, mass)
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        let tau = match (self.frame.tau, self.frame.tau_s) {
            (Some(_), Some(_)) => return Err(ConfigError::Invalid("give only one of frame.tau, frame.tau_s".into())),
            (Some(t), None) => t,
            (None, Some(ts)) => {
                let omega = omega_si.ok_or_else(|| ConfigError::Invalid("frame.tau_s needs field.omega".into()))?;
                ts * omega
            }
            (None, None) => 0.0,
        };
        let light = self.frame.light_sign.unwrap_or(f.polarization * f.propagation);
        let frame = FrameParams::natural(tau, f.polarization, f.propagation, self.frame.freq_sign, light)
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        let branch = match (f.branch, self.mode.family) {
            (Some(b), _) => b,
            (None, Family::Flipped) => Branch::Plus,
            (None, _) => Branch::for_axial(axial),
        };
        if self.verify.tolerance <= 0.0 || !self.verify.tolerance.is_finite() {
            return Err(ConfigError::Invalid("verify.tolerance must be positive".into()));
        }
        Ok(Resolved { field, frame, branch, omega_si })
    }

    /// State request: massless modes come from `(Ẽ or p̃)` through the light
    /// cone, massive modes from the resting-frame momentum.
    pub fn state_spec(&self, r: &Resolved) -> Result<StateSpec, ConfigError> {
        let m = &self.mode;
        let given = [m.e_rot.is_some(), m.p_rot.is_some(), m.momentum.is_some()].iter().filter(|x| **x).count();
        if m.family == Family::MasslessZero {
            return Ok(StateSpec { family: m.family, momentum: 0.0, root_index: 0, prefactor: m.prefactor });
        }
        if m.n != 0 {
            return Err(ConfigError::Invalid(format!(
                "mode.n = {} is not supported by the closed-form families (winding 0 only)",
                m.n
            )));
        }
        if given != 1 {
            return Err(ConfigError::Invalid("give exactly one of mode.e_rot, mode.p_rot, mode.momentum".into()));
        }
        let momentum = if let Some(p) = m.momentum {
            p
        } else if m.family.is_massless() {
            let p_rot = m.p_rot.unwrap_or_else(|| r.frame.light_sign.value() * m.e_rot.unwrap_or(0.0));
            Mode::on_light_cone(p_rot, &r.frame).momentum
        } else {
            if !r.frame.is_galilean() {
                return Err(ConfigError::Invalid(
                    "massive families with n = 0 are quantized only at tau = 0; give mode.momentum".into(),
                ));
            }
            m.p_rot.ok_or_else(|| ConfigError::Invalid("massive families take mode.p_rot or mode.momentum".into()))?
        };
        Ok(StateSpec { family: m.family, momentum, root_index: m.root_index, prefactor: m.prefactor })
    }

    pub fn events(&self) -> Vec<Event> {
        self.events.iter().map(|e| Event::new(e.phi, e.r, e.z, e.t)).collect()
    }
}

/// `--config` if it exists, then the same name under the config directory, then
/// `default.json` there, then built-in defaults.
pub fn locate(config: Option<&Path>, dir: Option<&Path>) -> Result<Option<PathBuf>, ConfigError> {
    match config {
        Some(p) if p.exists() => Ok(Some(p.to_path_buf())),
        Some(p) => {
            if let Some(d) = dir {
                let q = d.join(p);
                if q.exists() {
                    return Ok(Some(q));
                }
            }
            Err(ConfigError::Io { path: p.display().to_string(), msg: "not found".into() })
        }
        None => Ok(dir.map(|d| d.join(DEFAULT_CONFIG_NAME)).filter(|p| p.exists())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_resolves() {
        let c = RunConfig::default();
        let r = c.resolve().unwrap();
        assert_eq!(r.branch, Branch::Minus);
        let s = c.state_spec(&r).unwrap();
        assert_eq!(s.family, Family::Massless);
    }

    #[test]
    fn round_trips_through_json() {
        let c = RunConfig::default();
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(RunConfig::from_json(&text).unwrap(), c);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(RunConfig::from_json(r#"{"field": {"axial": -1, "bogus": 2}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"field": {"axial": -1, "polarization": 0}}"#).is_err());
    }

    #[test]
    fn si_conversion() {
        let text = r#"{"field": {"units": "si", "omega": 1e11, "axial_tesla": -1.0, "mass_mev": 0.0},
                       "frame": {"tau_s": 1e-17}}"#;
        let c = RunConfig::from_json(text).unwrap();
        let r = c.resolve().unwrap();
        assert!((r.frame.tau - 1e-6).abs() < 1e-18);
        let expect = -si::ELEMENTARY_CHARGE * si::C * si::C / (si::HBAR * 1e22);
        assert!((r.field.axial - expect).abs() <= 1e-15 * expect.abs());
    }

    #[test]
    fn mode_block_needs_exactly_one_momentum() {
        let mut c = RunConfig::default();
        c.mode.e_rot = Some(1.0);
        let r = c.resolve().unwrap();
        assert!(c.state_spec(&r).is_err());
    }
}
