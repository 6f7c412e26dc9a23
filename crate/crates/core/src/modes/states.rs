//! Closed-form states and their evaluation.
//!
//! Every state has the shape
//!
//! ```text
//! Ψ(x, y, z, t) = N e^{−iEt + ipz} exp(−½α₁α₂θ) e^{D(x̃, ỹ)} u(x̃, ỹ)
//! D = −½d(x̃² + ỹ²) + d₁x̃ + d₂ỹ,   u = c + x̃·cx + ỹ·cy
//! ```
//!
//! with `θ = ϵt − εz` and `(x̃, ỹ)` the transverse coordinates rotated by `−θ`.

use super::cubic::{characteristic_residual, characteristic_roots, CubicError};
use super::moments::{gaussian_norm_sqr, GaussianWeight};
use super::{detuning, Mode};
use crate::field::{Branch, FieldConfig, FieldError};
use crate::frame::{to_rotating, Event, FrameParams};
use crate::sign::Sign;
use crate::spinor::{apply_rot_phase, flip_state, Complex, Spinor4, ONE, SPIN_WEIGHT, ZERO};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

/// Tolerance on the quantization defect when a state is mapped between frames.
pub const QUANTIZATION_TOL: f64 = 1e-10;
/// Tolerance on the rational characteristic residual accepted by the builders.
pub const ROOT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Massive ground state on the `Minus` branch.
    Ground,
    /// Massive first excited state.
    Excited,
    /// Massive ground state on the `Plus` branch.
    Flipped,
    /// Massless ground state with `ϵE = εpc`.
    Massless,
    /// Massless state with `E = p = 0`.
    MasslessZero,
}

impl Family {
    pub const ALL: [Family; 5] =
        [Family::Ground, Family::Excited, Family::Flipped, Family::Massless, Family::MasslessZero];

    pub fn name(self) -> &'static str {
        match self {
            Family::Ground => "ground",
            Family::Excited => "excited",
            Family::Flipped => "flipped",
            Family::Massless => "massless",
            Family::MasslessZero => "massless-zero",
        }
    }

    pub fn is_massless(self) -> bool {
        matches!(self, Family::Massless | Family::MasslessZero)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown family '{s}' (expected ground, excited, flipped, massless, massless-zero)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MassiveKind {
    Ground,
    Excited,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrameKind {
    Rotating,
    Resting,
}

/// Normalization of the massless state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Prefactor {
    /// `√(d/2π)·exp(−d₂²/2d)`, unit norm.
    Exponential,
    /// `√(d/2π)·(−d₂²/2d)`, the exponent without `exp`; not unit norm.
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    T,
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 4] = [Axis::T, Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StateError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Cubic(#[from] CubicError),
    #[error("this family needs a massive particle")]
    NotMassive,
    #[error("this family needs a massless particle (mass = {0})")]
    NotMassless(f64),
    #[error("root index {index} out of range ({count} real roots)")]
    RootIndex { index: usize, count: usize },
    #[error("normalized energy {value} does not solve the characteristic equation (residual {residual:e})")]
    RootResidual { value: f64, residual: f64 },
    #[error("normalized energy {0} sits on the pole E0")]
    OnPole(f64),
    #[error("mode violates the quantization condition (defect {defect:e}, tau = {tau}, n = {n})")]
    Quantization { defect: f64, tau: f64, n: f64 },
    #[error("massless state needs pol*E = prop*p (got E = {energy}, p = {momentum})")]
    LightCone { energy: f64, momentum: f64 },
    #[error("massless state needs winding 0 (got {0})")]
    Winding(f64),
    #[error("massless state needs light sign = polarization * propagation")]
    LightSign,
    #[error("wave amplitude must vanish for the E = p = 0 state")]
    ZeroModeNeedsNoWave,
    #[error("configuration sign {what} differs between field and frame")]
    SignMismatch { what: &'static str },
    #[error("non-finite state")]
    NonFinite,
}

/// `D = −½d(x̃² + ỹ²) + d₁x̃ + d₂ỹ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub d: f64,
    pub d1: Complex,
    pub d2: Complex,
}

impl Envelope {
    pub fn exponent(&self, x: f64, y: f64) -> Complex {
        -0.5 * self.d * (x * x + y * y) + self.d1 * x + self.d2 * y
    }

    /// Centroid of `|e^D|²` in the rotated coordinates.
    pub fn center(&self) -> (f64, f64) {
        GaussianWeight::new(self.d, self.d1, self.d2).center
    }
}

/// `u(x̃, ỹ) = c + x̃·cx + ỹ·cy`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinorPoly {
    pub c: Spinor4,
    pub cx: Spinor4,
    pub cy: Spinor4,
}

impl SpinorPoly {
    pub fn constant(c: Spinor4) -> Self {
        SpinorPoly { c, cx: Spinor4::ZERO, cy: Spinor4::ZERO }
    }

    pub fn eval(&self, x: f64, y: f64) -> Spinor4 {
        self.c + self.cx.scale_re(x) + self.cy.scale_re(y)
    }

    pub fn max_abs(&self) -> f64 {
        self.c.max_abs().max(self.cx.max_abs()).max(self.cy.max_abs())
    }
}

/// A closed-form state together with everything needed to evaluate it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveFunctionModel {
    pub family: Family,
    pub branch: Branch,
    pub frame: FrameKind,
    pub polarization: Sign,
    pub propagation: Sign,
    pub mode: Mode,
    pub mass: f64,
    pub envelope: Envelope,
    pub spinor: SpinorPoly,
    pub norm: f64,
    /// `ℰ` for massive states.
    pub normalized_energy: Option<f64>,
    /// `Λ` for massive states.
    pub detuning: Option<f64>,
}

/// Value and first derivatives of the stationary factor `F = e^D u`.
#[derive(Debug, Clone, Copy)]
pub struct StationaryJet {
    pub f: Spinor4,
    pub fx: Spinor4,
    pub fy: Spinor4,
}

impl WaveFunctionModel {
    /// Wave phase `θ = ϵt − εz`.
    pub fn theta(&self, z: f64, t: f64) -> f64 {
        self.polarization.value() * t - self.propagation.value() * z
    }

    /// `(x̃, ỹ)`: the transverse point rotated by `−θ`.
    pub fn rotated(&self, x: f64, y: f64, theta: f64) -> (f64, f64) {
        let (s, c) = theta.sin_cos();
        (x * c + y * s, -x * s + y * c)
    }

    /// Centroid of `|Ψ|²` in the lab transverse plane at phase `θ`.
    pub fn lab_center(&self, theta: f64) -> (f64, f64) {
        let (xr, yr) = self.envelope.center();
        let (s, c) = theta.sin_cos();
        (xr * c - yr * s, xr * s + yr * c)
    }

    /// `F = e^D u` at rotated coordinates, without `N`.
    pub fn stationary(&self, xr: f64, yr: f64) -> Spinor4 {
        self.spinor.eval(xr, yr).scale(self.envelope.exponent(xr, yr).exp())
    }

    pub fn stationary_jet(&self, xr: f64, yr: f64) -> StationaryJet {
        let e = self.envelope.exponent(xr, yr).exp();
        let u = self.spinor.eval(xr, yr);
        let dx = -self.envelope.d * xr + self.envelope.d1;
        let dy = -self.envelope.d * yr + self.envelope.d2;
        StationaryJet {
            f: u.scale(e),
            fx: (u.scale(dx) + self.spinor.cx).scale(e),
            fy: (u.scale(dy) + self.spinor.cy).scale(e),
        }
    }

    /// `Ψ(x, y, z, t)` in the resting frame.
    pub fn eval(&self, x: f64, y: f64, z: f64, t: f64) -> Spinor4 {
        let th = self.theta(z, t);
        let (xr, yr) = self.rotated(x, y, th);
        let ph = Complex::new(0.0, -self.mode.energy * t + self.mode.momentum * z).exp() * self.norm;
        apply_rot_phase(-th, &self.stationary(xr, yr)).scale(ph)
    }

    /// `Ψ̃(φ̃, r, z̃, t̃) = N e^{−iẼt̃ + ip̃z̃ − inφ̃} e^D u` in the rotating frame.
    pub fn eval_rotating(&self, e: &Event) -> Spinor4 {
        let (s, c) = e.phi.sin_cos();
        let ph = Complex::new(0.0, -self.mode.e_rot * e.t + self.mode.p_rot * e.z - self.mode.winding * e.phi).exp()
            * self.norm;
        self.stationary(e.r * c, e.r * s).scale(ph)
    }

    /// The resting-frame state written through the rotating-frame phase
    /// `−Ẽt̃ + p̃z̃ − nφ̃`. Equals [`eval`](Self::eval) exactly when the
    /// quantization condition holds.
    pub fn eval_via_rotating(&self, x: f64, y: f64, z: f64, t: f64, fp: &FrameParams) -> Spinor4 {
        let th = self.theta(z, t);
        let (xr, yr) = self.rotated(x, y, th);
        let lab = Event::new(y.atan2(x), x.hypot(y), z, t);
        let r = to_rotating(&lab, fp);
        let ph = Complex::new(0.0, -self.mode.e_rot * r.t + self.mode.p_rot * r.z - self.mode.winding * r.phi).exp()
            * self.norm;
        apply_rot_phase(-th, &self.stationary(xr, yr)).scale(ph)
    }

    /// Analytic `(Ψ, [∂_t, ∂_x, ∂_y, ∂_z]Ψ)` in the resting frame.
    pub fn jet(&self, x: f64, y: f64, z: f64, t: f64) -> (Spinor4, [Spinor4; 4]) {
        let th = self.theta(z, t);
        let (s, c) = th.sin_cos();
        let (xr, yr) = self.rotated(x, y, th);
        let j = self.stationary_jet(xr, yr);
        let ph = Complex::new(0.0, -self.mode.energy * t + self.mode.momentum * z).exp() * self.norm;
        let rot = |v: &Spinor4| apply_rot_phase(-th, v).scale(ph);
        // ∂_θ of exp(−½α₁α₂θ)F: spin term −(i/2)w_j F_j plus ỹF_x̃ − x̃F_ỹ
        let mut spin = j.f;
        for (k, w) in SPIN_WEIGHT.iter().enumerate() {
            spin.0[k] *= Complex::new(0.0, -0.5 * w);
        }
        let dtheta = spin + j.fx.scale_re(yr) - j.fy.scale_re(xr);
        let psi = rot(&j.f);
        let d_theta = rot(&dtheta);
        let eps = self.polarization.value();
        let prop = self.propagation.value();
        let dt = psi.scale(Complex::new(0.0, -self.mode.energy)) + d_theta.scale_re(eps);
        let dz = psi.scale(Complex::new(0.0, self.mode.momentum)) - d_theta.scale_re(prop);
        let dx = rot(&(j.fx.scale_re(c) - j.fy.scale_re(s)));
        let dy = rot(&(j.fx.scale_re(s) + j.fy.scale_re(c)));
        (psi, [dt, dx, dy, dz])
    }

    /// `∫|Ψ|² dx dy` from closed-form Gaussian moments.
    pub fn norm_sqr_closed_form(&self) -> f64 {
        let e = &self.envelope;
        self.norm * self.norm * gaussian_norm_sqr(e.d, e.d1, e.d2, &self.spinor.c, &self.spinor.cx, &self.spinor.cy)
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }
}

/// `ψ₀ = (hℰ, −ε(ℰ+ϵ)(ℰ−ℰ₀), ϵεhℰ, −ϵ(ℰ−ϵ)(ℰ−ℰ₀))`.
fn massive_spinor(h: f64, e: f64, e0: f64, pol: Sign, prop: Sign) -> Spinor4 {
    let (ev, vv) = (pol.value(), prop.value());
    Spinor4::from_real([h * e, -vv * (e + ev) * (e - e0), ev * vv * h * e, -ev * (e - ev) * (e - e0)])
}

/// Ground-state normalization `√(d/π)·exp(−d₂²/2d) / √(2[h²ℰ² + (ℰ²+1)(ℰ−ℰ₀)²])`.
pub fn ground_norm(d: f64, d2: f64, h: f64, e: f64, e0: f64) -> f64 {
    let spin = 2.0 * (h * h * e * e + (e * e + 1.0) * (e - e0).powi(2));
    (d / PI).sqrt() * (-d2 * d2 / (2.0 * d)).exp() / spin.sqrt()
}

fn check_signs(cfg: &FieldConfig, fp: &FrameParams) -> Result<(), StateError> {
    if cfg.polarization != fp.polarization {
        return Err(StateError::SignMismatch { what: "polarization" });
    }
    if cfg.propagation != fp.propagation {
        return Err(StateError::SignMismatch { what: "propagation" });
    }
    Ok(())
}

fn check_quantization(mode: &Mode, fp: &FrameParams) -> Result<(), StateError> {
    if fp.is_galilean() && mode.winding == 0.0 {
        return Ok(());
    }
    if !mode.satisfies_quantization(fp, QUANTIZATION_TOL) {
        return Err(StateError::Quantization { defect: mode.quantization_defect(fp), tau: fp.tau, n: mode.winding });
    }
    Ok(())
}

fn massive_family(kind: MassiveKind, branch: Branch) -> Family {
    match (kind, branch) {
        (MassiveKind::Ground, Branch::Minus) => Family::Ground,
        (MassiveKind::Ground, Branch::Plus) => Family::Flipped,
        (MassiveKind::Excited, _) => Family::Excited,
    }
}

/// Massive state at normalized energy `ℰ` without checking that `ℰ` solves the
/// characteristic equation or that the mode is quantized.
///
/// On the `Minus` branch the spinor is `ψ₀`, on the `Plus` branch `εα₁α₃βψ₀`
/// with `ℰ₀` taking the opposite sign. `d₂ = dh/(ℰ − ℰ₀)`, `d₁ = −iσd₂`. The
/// excited state multiplies by `1 − iσ(d/d₂)x̃ − (d/d₂)ỹ`.
pub fn massive_candidate(
    cfg: &FieldConfig,
    branch: Branch,
    mode: Mode,
    kind: MassiveKind,
    e: f64,
) -> Result<WaveFunctionModel, StateError> {
    if cfg.mass == 0.0 {
        return Err(StateError::NotMassive);
    }
    let d = cfg.d(branch)?;
    let h = cfg.h()?;
    let e0 = cfg.e0(branch)?;
    if e == e0 {
        return Err(StateError::OnPole(e));
    }
    let sigma = branch.sigma();
    let d2 = d * h / (e - e0);
    let d1 = Complex::new(0.0, -sigma * d2);
    let mut c = massive_spinor(h, e, e0, cfg.polarization, cfg.propagation);
    if branch == Branch::Plus {
        c = flip_state(&c, cfg.propagation);
    }
    let spinor = match kind {
        MassiveKind::Ground => SpinorPoly::constant(c),
        MassiveKind::Excited => {
            if d2 == 0.0 {
                return Err(StateError::NonFinite);
            }
            let r = d / d2;
            SpinorPoly { c, cx: c.scale(Complex::new(0.0, -sigma * r)), cy: c.scale_re(-r) }
        }
    };
    let envelope = Envelope { d, d1, d2: Complex::new(d2, 0.0) };
    let lambda = detuning(mode.momentum, cfg.propagation, cfg.mass, branch, kind);
    let mut wf = WaveFunctionModel {
        family: massive_family(kind, branch),
        branch,
        frame: FrameKind::Rotating,
        polarization: cfg.polarization,
        propagation: cfg.propagation,
        mode,
        mass: cfg.mass,
        envelope,
        spinor,
        norm: 1.0,
        normalized_energy: Some(e),
        detuning: Some(lambda),
    };
    let n2 = wf.norm_sqr_closed_form();
    if !n2.is_finite() || n2 <= 0.0 {
        return Err(StateError::NonFinite);
    }
    wf.norm = 1.0 / n2.sqrt();
    Ok(wf)
}

/// Mode of a massive state: root `root_index` (ascending) of the characteristic
/// equation at resting-frame momentum `p`, with `E = ϵ(mℰ + εp)` and `n = 0`.
pub fn massive_mode(
    cfg: &FieldConfig,
    branch: Branch,
    fp: &FrameParams,
    momentum: f64,
    root_index: usize,
    kind: MassiveKind,
) -> Result<(Mode, f64), StateError> {
    if cfg.mass == 0.0 {
        return Err(StateError::NotMassive);
    }
    check_signs(cfg, fp)?;
    let lambda = detuning(momentum, cfg.propagation, cfg.mass, branch, kind);
    let roots = characteristic_roots(cfg.h()?, cfg.e0(branch)?, lambda)?;
    let root = roots.get(root_index).ok_or(StateError::RootIndex { index: root_index, count: roots.len() })?;
    let e = root.value;
    let energy = cfg.polarization.value() * (cfg.mass * e + cfg.propagation.value() * momentum);
    Ok((Mode::from_resting(energy, momentum, 0, fp), e))
}

fn checked_massive(
    cfg: &FieldConfig,
    branch: Branch,
    fp: &FrameParams,
    mode: Mode,
    kind: MassiveKind,
) -> Result<WaveFunctionModel, StateError> {
    if cfg.mass == 0.0 {
        return Err(StateError::NotMassive);
    }
    check_signs(cfg, fp)?;
    let e = mode.normalized_energy(cfg.polarization, cfg.propagation, cfg.mass);
    let lambda = detuning(mode.momentum, cfg.propagation, cfg.mass, branch, kind);
    let residual = characteristic_residual(e, cfg.h()?, cfg.e0(branch)?, lambda);
    if residual.is_nan() || residual.abs() > ROOT_TOL * (1.0 + e * e) {
        return Err(StateError::RootResidual { value: e, residual });
    }
    check_quantization(&mode, fp)?;
    massive_candidate(cfg, branch, mode, kind, e)
}

/// Massive ground state for a mode whose `ℰ` solves the characteristic equation.
/// On the `Plus` branch this is the flipped family.
pub fn ground_state(
    cfg: &FieldConfig,
    branch: Branch,
    fp: &FrameParams,
    mode: Mode,
) -> Result<WaveFunctionModel, StateError> {
    checked_massive(cfg, branch, fp, mode, MassiveKind::Ground)
}

pub fn excited_state(
    cfg: &FieldConfig,
    branch: Branch,
    fp: &FrameParams,
    mode: Mode,
) -> Result<WaveFunctionModel, StateError> {
    checked_massive(cfg, branch, fp, mode, MassiveKind::Excited)
}

/// Massless ground state. Spinor `(0, εϵ, 0, −1)` on the `Minus` branch and its
/// flip on the `Plus` branch; `d₂ = −σεB/2`, `d₁ = −iσd₂`.
pub fn massless_state(
    cfg: &FieldConfig,
    branch: Branch,
    fp: &FrameParams,
    mode: Mode,
    prefactor: Prefactor,
) -> Result<WaveFunctionModel, StateError> {
    if cfg.mass != 0.0 {
        return Err(StateError::NotMassless(cfg.mass));
    }
    check_signs(cfg, fp)?;
    if mode.winding != 0.0 {
        return Err(StateError::Winding(mode.winding));
    }
    if fp.light_sign != cfg.polarization * cfg.propagation {
        return Err(StateError::LightSign);
    }
    let lhs = cfg.polarization.value() * mode.energy;
    let rhs = cfg.propagation.value() * mode.momentum;
    if (lhs - rhs).abs() > 1e-12 * (1.0 + lhs.abs()) {
        return Err(StateError::LightCone { energy: mode.energy, momentum: mode.momentum });
    }
    let zero = mode.energy == 0.0 && mode.momentum == 0.0;
    if zero && cfg.wave != 0.0 {
        return Err(StateError::ZeroModeNeedsNoWave);
    }
    check_quantization(&mode, fp)?;
    let d = cfg.d(branch)?;
    let sigma = branch.sigma();
    let d2 = -sigma * cfg.propagation.value() * cfg.wave / 2.0;
    let d1 = Complex::new(0.0, -sigma * d2);
    let mut c = Spinor4::new([ZERO, ONE * (cfg.propagation * cfg.polarization).value(), ZERO, -ONE]);
    if branch == Branch::Plus {
        c = flip_state(&c, cfg.propagation);
    }
    let gauss = (-d2 * d2 / (2.0 * d)).exp();
    let amp = match prefactor {
        Prefactor::Exponential => gauss,
        Prefactor::Literal => -d2 * d2 / (2.0 * d),
    };
    Ok(WaveFunctionModel {
        family: if zero { Family::MasslessZero } else { Family::Massless },
        branch,
        frame: FrameKind::Rotating,
        polarization: cfg.polarization,
        propagation: cfg.propagation,
        mode,
        mass: 0.0,
        envelope: Envelope { d, d1, d2: Complex::new(d2, 0.0) },
        spinor: SpinorPoly::constant(c),
        norm: (d / (2.0 * PI)).sqrt() * amp,
        normalized_energy: None,
        detuning: None,
    })
}

/// Check the quantization condition and mark the state as a resting-frame state.
///
/// `(E, p)` are recomputed from `(Ẽ, p̃, n)` through the frame duality.
pub fn to_resting_wavefunction(wf: &WaveFunctionModel, fp: &FrameParams) -> Result<WaveFunctionModel, StateError> {
    if wf.polarization != fp.polarization {
        return Err(StateError::SignMismatch { what: "polarization" });
    }
    if wf.propagation != fp.propagation {
        return Err(StateError::SignMismatch { what: "propagation" });
    }
    check_quantization(&wf.mode, fp)?;
    let mode = Mode::with_winding(wf.mode.e_rot, wf.mode.p_rot, wf.mode.winding, fp);
    let mut out = wf.with_mode(mode);
    out.frame = FrameKind::Resting;
    Ok(out)
}
