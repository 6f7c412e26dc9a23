//! Mode bookkeeping between the two frames, the characteristic cubic, and the
//! closed-form states.

mod cubic;
mod expect;
mod moments;
mod states;

pub use cubic::{characteristic_residual, characteristic_roots, CharacteristicRoot, CubicError};
pub use expect::BOX_HALF_WIDTH;
pub use expect::{expectations, massless_expectations_moments, massless_expectations_published, Expectations};
pub use moments::{gaussian_norm_sqr, GaussianWeight};
pub use states::{
    excited_state, ground_norm, ground_state, massive_candidate, massive_mode, massless_state, to_resting_wavefunction,
    Axis, Envelope, Family, FrameKind, MassiveKind, Prefactor, SpinorPoly, StateError, StationaryJet,
    WaveFunctionModel, QUANTIZATION_TOL, ROOT_TOL,
};

use crate::field::{Branch, FieldConfig};
use crate::frame::{to_rotating, Event, FrameParams};
use serde::{Deserialize, Serialize};

/// Energies and momenta of a mode in both frames.
///
/// `e_rot`, `p_rot` are `Ẽ`, `p̃c`; `energy`, `momentum` are the resting-frame
/// parameters `E`, `pc`. All in units of `ħΩ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub e_rot: f64,
    pub p_rot: f64,
    /// Winding number `n`. Integer for every physical mode; stored as a float so
    /// that broken modes can be represented and rejected.
    pub winding: f64,
    pub energy: f64,
    pub momentum: f64,
}

/// `(Ẽ, p̃, n) ↦ (E, p)`:
/// `E = γẼ − ϵ_ω ε τ p̃ − ϵ n`, `p = γp̃ − ϵ_ω ε τ Ẽ − ε n`.
pub fn frame_duality(e_rot: f64, p_rot: f64, winding: f64, fp: &FrameParams) -> (f64, f64) {
    let bo = fp.boost();
    let e = fp.gamma * e_rot - bo * p_rot - fp.polarization.value() * winding;
    let p = fp.gamma * p_rot - bo * e_rot - fp.propagation.value() * winding;
    (e, p)
}

/// Inverse of [`frame_duality`]; the 2×2 system has unit determinant.
pub fn frame_duality_inverse(energy: f64, momentum: f64, winding: f64, fp: &FrameParams) -> (f64, f64) {
    let bo = fp.boost();
    let a = energy + fp.polarization.value() * winding;
    let b = momentum + fp.propagation.value() * winding;
    (fp.gamma * a + bo * b, bo * a + fp.gamma * b)
}

impl Mode {
    pub fn from_rotating(e_rot: f64, p_rot: f64, n: i64, fp: &FrameParams) -> Self {
        Self::with_winding(e_rot, p_rot, n as f64, fp)
    }

    pub fn with_winding(e_rot: f64, p_rot: f64, winding: f64, fp: &FrameParams) -> Self {
        let (energy, momentum) = frame_duality(e_rot, p_rot, winding, fp);
        Mode { e_rot, p_rot, winding, energy, momentum }
    }

    pub fn from_resting(energy: f64, momentum: f64, n: i64, fp: &FrameParams) -> Self {
        let (e_rot, p_rot) = frame_duality_inverse(energy, momentum, n as f64, fp);
        Mode { e_rot, p_rot, winding: n as f64, energy, momentum }
    }

    /// `n = 0` mode from the rotating-frame momentum; `Ẽ = ε_v p̃` closes the
    /// quantization condition.
    pub fn on_light_cone(p_rot: f64, fp: &FrameParams) -> Self {
        Self::from_rotating(fp.light_sign.value() * p_rot, p_rot, 0, fp)
    }

    /// `(ϵE − εpc)/mc²`.
    pub fn normalized_energy(&self, pol: crate::Sign, prop: crate::Sign, mass: f64) -> f64 {
        (pol.value() * self.energy - prop.value() * self.momentum) / mass
    }

    /// `b(Ẽ − ε_v p̃) − n`, zero exactly when the quantization condition holds.
    pub fn quantization_defect(&self, fp: &FrameParams) -> f64 {
        fp.time_mix * (self.e_rot - fp.light_sign.value() * self.p_rot) - self.winding
    }

    /// The quantization condition with a tolerance scaled to the size of its terms.
    pub fn satisfies_quantization(&self, fp: &FrameParams, tol: f64) -> bool {
        let scale = 1.0 + self.winding.abs() + fp.time_mix.abs() * (self.e_rot.abs() + self.p_rot.abs());
        self.quantization_defect(fp).abs() <= tol * scale
    }

    /// `(−Ẽt̃ + p̃z̃ − nφ̃) − (−Et + pz)` at a resting-frame event.
    pub fn phase_identity_defect(&self, fp: &FrameParams, e: &Event) -> f64 {
        let r = to_rotating(e, fp);
        let rot = -self.e_rot * r.t + self.p_rot * r.z - self.winding * r.phi;
        let rest = -self.energy * e.t + self.momentum * e.z;
        rot - rest
    }
}

/// `Λ = (2εpc − σ(2j+1)ħΩ)/mc²`, `j = 0` for the ground state and `1` for the
/// excited state, `σ = ±1` by branch. `p` is the resting-frame momentum.
pub fn detuning(momentum: f64, propagation: crate::Sign, mass: f64, branch: Branch, kind: MassiveKind) -> f64 {
    let level = match kind {
        MassiveKind::Ground => 1.0,
        MassiveKind::Excited => 3.0,
    };
    (2.0 * propagation.value() * momentum - branch.sigma() * level) / mass
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuantizationError {
    #[error("quantization bracket vanishes (tau = {tau}, polarization {polarization}, freq sign {freq_sign}); n = {n} has no solution")]
    SingularBracket { tau: f64, polarization: crate::Sign, freq_sign: crate::Sign, n: i64 },
}

/// Gap implied by the quantization condition for winding `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantizationGap {
    pub n: i64,
    /// `Ẽ − ε_v p̃c` (exact). `None` when the condition leaves it free (`τ = 0`, `n = 0`).
    pub rotating: Option<f64>,
    /// `ϵ(E − ε_v pc)` (exact).
    pub resting: Option<f64>,
    /// `ħn/(τ²Ω)`, the small-`τΩ` estimate of the resting gap.
    pub approx: Option<f64>,
    /// `|resting − approx| / |resting|`.
    pub rel_gap: Option<f64>,
}

pub fn quantization_gap(n: i64, fp: &FrameParams) -> Result<QuantizationGap, QuantizationError> {
    let bracket = fp.time_mix;
    if bracket == 0.0 {
        if n != 0 {
            return Err(QuantizationError::SingularBracket {
                tau: fp.tau,
                polarization: fp.polarization,
                freq_sign: fp.freq_sign,
                n,
            });
        }
        return Ok(QuantizationGap { n, rotating: None, resting: None, approx: None, rel_gap: None });
    }
    let nf = n as f64;
    let g = nf / bracket;
    let eps = fp.polarization.value();
    let ev = fp.light_sign.value();
    let prop = fp.propagation.value();
    let resting = eps * ((fp.gamma + ev * fp.boost()) * g - nf * (eps - prop * ev));
    let approx = nf / (fp.tau * fp.tau);
    let rel_gap = if resting != 0.0 { Some((resting - approx).abs() / resting.abs()) } else { Some(0.0) };
    Ok(QuantizationGap { n, rotating: Some(g), resting: Some(resting), approx: Some(approx), rel_gap })
}

/// What to build: family, resting-frame momentum, which characteristic root.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateSpec {
    pub family: Family,
    pub momentum: f64,
    #[serde(default)]
    pub root_index: usize,
    #[serde(default = "default_prefactor")]
    pub prefactor: Prefactor,
}

fn default_prefactor() -> Prefactor {
    Prefactor::Exponential
}

impl StateSpec {
    pub fn new(family: Family, momentum: f64, root_index: usize) -> Self {
        StateSpec { family, momentum, root_index, prefactor: Prefactor::Exponential }
    }

    /// Branch used when none is given: `Plus` for the flipped family, otherwise
    /// whichever branch makes `d` positive.
    pub fn default_branch(&self, cfg: &FieldConfig) -> Branch {
        match self.family {
            Family::Flipped => Branch::Plus,
            _ => Branch::for_axial(cfg.axial),
        }
    }
}

/// Build the requested state and map it to the resting frame.
///
/// Massive states carry winding `0`; for `τΩ > 0` they fail the quantization
/// check unless `Ẽ = ε_v p̃` happens to hold.
pub fn build_state(
    spec: &StateSpec,
    cfg: &FieldConfig,
    branch: Option<Branch>,
    fp: &FrameParams,
) -> Result<WaveFunctionModel, StateError> {
    let branch = branch.unwrap_or_else(|| spec.default_branch(cfg));
    let wf = match spec.family {
        Family::Ground | Family::Flipped => {
            let (mode, _) = massive_mode(cfg, branch, fp, spec.momentum, spec.root_index, MassiveKind::Ground)?;
            ground_state(cfg, branch, fp, mode)?
        }
        Family::Excited => {
            let (mode, _) = massive_mode(cfg, branch, fp, spec.momentum, spec.root_index, MassiveKind::Excited)?;
            excited_state(cfg, branch, fp, mode)?
        }
        Family::Massless | Family::MasslessZero => {
            let p = if spec.family == Family::MasslessZero { 0.0 } else { spec.momentum };
            let energy = (cfg.polarization * cfg.propagation).value() * p;
            let mode = Mode::from_resting(energy, p, 0, fp);
            massless_state(cfg, branch, fp, mode, spec.prefactor)?
        }
    };
    to_resting_wavefunction(&wf, fp)
}
