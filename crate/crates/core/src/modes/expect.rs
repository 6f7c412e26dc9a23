//! Cross-section averages of energy, momentum and spin at fixed `(z, t)`.

use super::states::WaveFunctionModel;
use crate::field::FieldConfig;
use crate::quadrature::{integrate_square, QuadratureError, QuadratureOptions};
use crate::spinor::I;
use serde::{Deserialize, Serialize};

/// Averages normalized by `∫|Ψ|²`. Canonical momenta `−i∇`, energy `i∂_t`,
/// spin `½Σ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Expectations {
    pub energy: f64,
    pub px: f64,
    pub py: f64,
    pub pz: f64,
    pub spin: [f64; 3],
    /// `∫|Ψ|² dx dy`.
    pub norm: f64,
    /// Nodes per axis at convergence; zero for closed forms.
    pub nodes: usize,
}

/// Half-width of the integration square in units of `1/√d`.
pub const BOX_HALF_WIDTH: f64 = 8.0;

/// Quadrature over the square of half-width `8/√d` centered on the envelope
/// centroid at this `(z, t)`.
pub fn expectations(
    wf: &WaveFunctionModel,
    z: f64,
    t: f64,
    opts: &QuadratureOptions,
) -> Result<Expectations, QuadratureError> {
    let th = wf.theta(z, t);
    let center = wf.lab_center(th);
    let half = BOX_HALF_WIDTH / wf.envelope.d.sqrt();
    let est = integrate_square(
        |x, y| {
            let (psi, g) = wf.jet(x, y, z, t);
            let dens = psi.norm_sqr();
            let e = (psi.dot(&g[0].scale(I))).re;
            let px = (psi.dot(&g[1].scale(-I))).re;
            let py = (psi.dot(&g[2].scale(-I))).re;
            let pz = (psi.dot(&g[3].scale(-I))).re;
            let [a, b, c, dd] = psi.0;
            // Σ_k = diag(σ_k, σ_k)
            let s1 = 2.0 * ((a.conj() * b).re + (c.conj() * dd).re);
            let s2 = 2.0 * ((a.conj() * b).im + (c.conj() * dd).im);
            let s3 = a.norm_sqr() - b.norm_sqr() + c.norm_sqr() - dd.norm_sqr();
            [dens, e, px, py, pz, s1, s2, s3]
        },
        center,
        half,
        opts,
    )?;
    let v = est.value;
    let n = v[0];
    Ok(Expectations {
        energy: v[1] / n,
        px: v[2] / n,
        py: v[3] / n,
        pz: v[4] / n,
        spin: [0.5 * v[5] / n, 0.5 * v[6] / n, 0.5 * v[7] / n],
        norm: n,
        nodes: est.nodes,
    })
}

fn transverse(cfg: &FieldConfig, theta: f64) -> (f64, f64) {
    let amp = 0.5 * cfg.propagation.value() * cfg.wave;
    (amp * theta.cos(), amp * theta.sin())
}

/// Massless averages from the Gaussian moments of the state:
/// `ϵE_a = ϵE − σ/2 + σd₂²/d = εp_za`, `p_xa + ip_ya = (εB/2)e^{iθ}`, `s = (0, 0, −σ/2)`.
pub fn massless_expectations_moments(
    wf: &WaveFunctionModel,
    cfg: &FieldConfig,
    z: f64,
    t: f64,
) -> Option<Expectations> {
    if !wf.family.is_massless() {
        return None;
    }
    let sigma = wf.branch.sigma();
    let eps = wf.polarization.value();
    let d2 = wf.envelope.d2.re;
    let shift = -0.5 * sigma + sigma * d2 * d2 / wf.envelope.d;
    let energy = wf.mode.energy + eps * shift;
    let (px, py) = transverse(cfg, wf.theta(z, t));
    Some(Expectations {
        energy,
        px,
        py,
        pz: wf.propagation.value() * eps * energy,
        spin: [0.0, 0.0, -0.5 * sigma],
        norm: wf.norm_sqr_closed_form(),
        nodes: 0,
    })
}

/// Massless averages in their published form:
/// `ϵE_a = ϵE − ħΩ + (B₃/2)(B/B₃)² = εp_za`, `s₃ = ħ/2`.
pub fn massless_expectations_published(
    wf: &WaveFunctionModel,
    cfg: &FieldConfig,
    z: f64,
    t: f64,
) -> Option<Expectations> {
    if !wf.family.is_massless() {
        return None;
    }
    let eps = wf.polarization.value();
    let ratio = cfg.wave / cfg.axial;
    let energy = wf.mode.energy + eps * (-1.0 + 0.5 * cfg.axial * ratio * ratio);
    let (px, py) = transverse(cfg, wf.theta(z, t));
    Some(Expectations {
        energy,
        px,
        py,
        pz: wf.propagation.value() * eps * energy,
        spin: [0.0, 0.0, 0.5],
        norm: 1.0,
        nodes: 0,
    })
}

impl Expectations {
    /// Largest absolute difference over energy, momenta and spin.
    pub fn max_abs_diff(&self, other: &Expectations) -> f64 {
        let a = self.as_array();
        let b = other.as_array();
        a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    /// `[E_a, p_xa, p_ya, p_za, s₁, s₂, s₃]`.
    pub fn as_array(&self) -> [f64; 7] {
        [self.energy, self.px, self.py, self.pz, self.spin[0], self.spin[1], self.spin[2]]
    }

    pub const LABELS: [&'static str; 7] = ["E_a", "p_xa", "p_ya", "p_za", "s1", "s2", "s3"];
}
