//! Substitution of states into the Dirac equation and into the co-rotating
//! stationary operator.

mod audit;
mod coeffs;
mod derivative;
mod report;

pub use audit::{convention_audit, AuditEntry, AuditReport, ConventionChoice, PrefactorCheck, AUDIT_PASS};
pub use coeffs::{rotating_coefficients, CoefficientReport, Monomial};
pub use derivative::{coordinate_scale, derivative, fd_step, jet, ridders, DerivativeError, Point, Scheme};
pub use report::{sample_points, verify, PointRecord, ResidualReport, VerifyOptions};

use crate::field::FieldConfig;
use crate::modes::WaveFunctionModel;
use crate::sign::Sign;
use crate::spinor::{dirac_matrices, Complex, Matrix4, Spinor4, I};
use serde::{Deserialize, Serialize};

/// Residual spinor with the quantities needed to judge it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualSample {
    pub residual: Spinor4,
    pub psi_norm: f64,
    /// `|E| + |p| + m + 1`.
    pub scale: f64,
    /// `‖R‖ / (‖Ψ‖·scale)`.
    pub relative: f64,
}

fn relative(r: &Spinor4, psi_norm: f64, scale: f64) -> f64 {
    let rn = r.norm();
    if rn == 0.0 {
        0.0
    } else {
        rn / (psi_norm * scale)
    }
}

/// `i∂_tΨ − α·(−i∇ − q A)Ψ − βmΨ` from a precomputed jet, with `q = ±1` the
/// coupling sign.
pub fn dirac_residual_from_jet(
    psi: &Spinor4,
    grad: &[Spinor4; 4],
    cfg: &FieldConfig,
    p: &Point,
    coupling: Sign,
) -> Spinor4 {
    let g = dirac_matrices();
    let a = cfg.potential(p.x, p.y, p.z, p.t);
    let q = coupling.value();
    let mut r = grad[0].scale(I);
    let comps = [(grad[1], a.a1), (grad[2], a.a2), (grad[3], a.a3)];
    for (k, (d, ak)) in comps.iter().enumerate() {
        // π_k Ψ = −i∂_kΨ − q A_k Ψ
        let pi = d.scale(-I) - psi.scale_re(q * ak);
        r = r - g.alpha[k] * pi;
    }
    r - (g.beta * *psi).scale_re(cfg.mass)
}

/// Dirac residual of a resting-frame state at `p`.
pub fn dirac_residual(
    wf: &WaveFunctionModel,
    cfg: &FieldConfig,
    p: &Point,
    scheme: Scheme,
    coupling: Sign,
) -> Result<ResidualSample, DerivativeError> {
    let (psi, grad) = jet(wf, p, scheme)?;
    let residual = dirac_residual_from_jet(&psi, &grad, cfg, p, coupling);
    let scale = wf.mode.energy.abs() + wf.mode.momentum.abs() + cfg.mass + 1.0;
    let psi_norm = psi.norm();
    Ok(ResidualSample { residual, psi_norm, scale, relative: relative(&residual, psi_norm, scale) })
}

/// Pieces of the co-rotating operator that do not involve `(x̃, ỹ)`.
pub(crate) struct RotatingOperator {
    /// `−E + α₃p + βm − α₁B/k + iR·½α₁α₂`
    pub m0: Matrix4,
    /// `iR`, `R = ϵ − εα₃`
    pub rot: Matrix4,
    pub alpha1: Matrix4,
    pub alpha2: Matrix4,
    pub axial: f64,
}

impl RotatingOperator {
    pub fn new(wf: &WaveFunctionModel, cfg: &FieldConfig) -> Self {
        let g = dirac_matrices();
        let id = Matrix4::identity();
        let r = wf.polarization.value() * id - wf.propagation.value() * g.alpha[2];
        let rot = r.scale(I);
        let half = (g.alpha[0] * g.alpha[1]).scale(Complex::new(0.5, 0.0));
        let m0 = (-wf.mode.energy) * id + wf.mode.momentum * g.alpha[2] + cfg.mass * g.beta
            - (cfg.wave / cfg.k()) * g.alpha[0]
            + rot * half;
        RotatingOperator { m0, rot, alpha1: g.alpha[0], alpha2: g.alpha[1], axial: cfg.axial }
    }
}

/// The stationary operator of the co-rotating frame applied to `F = e^D u` and
/// divided by `e^D`:
///
/// ```text
/// [−E + α₃p + βm − α₁B/k + iR(½α₁α₂ + x̃∂_ỹ − ỹ∂_x̃) − iα₁∂_x̃ − iα₂∂_ỹ
///  + α₁B₃ỹ/2 − α₂B₃x̃/2] F,   R = ϵ − εα₃
/// ```
///
/// `relative` is taken against the largest coefficient of `u` times
/// `|E| + |p| + m + 1`.
pub fn rotating_residual(wf: &WaveFunctionModel, cfg: &FieldConfig, xr: f64, yr: f64) -> ResidualSample {
    let op = RotatingOperator::new(wf, cfg);
    let env = &wf.envelope;
    let u = wf.spinor.eval(xr, yr);
    let fx = u.scale(-env.d * xr + env.d1) + wf.spinor.cx;
    let fy = u.scale(-env.d * yr + env.d2) + wf.spinor.cy;
    let mut r = op.m0 * u;
    r += op.rot * (fy.scale_re(xr) - fx.scale_re(yr));
    r += (op.alpha1 * fx).scale(-I) + (op.alpha2 * fy).scale(-I);
    r += (op.alpha1 * u).scale_re(0.5 * op.axial * yr) - (op.alpha2 * u).scale_re(0.5 * op.axial * xr);
    let scale = wf.mode.energy.abs() + wf.mode.momentum.abs() + cfg.mass + 1.0;
    let psi_norm = wf.spinor.max_abs();
    ResidualSample { residual: r, psi_norm, scale, relative: relative(&r, psi_norm, scale) }
}
