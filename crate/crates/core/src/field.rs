//! Circularly polarized plane wave plus a constant axial magnetic field.
//!
//! The potential (multiplied by the coupling, so `eA/c` in Gaussian units) is
//!
//! ```text
//! A₁ = −½ B₃ y + (B/k) cos(ϵt − kz)
//! A₂ =  ½ B₃ x + (B/k) sin(ϵt − kz),   A₃ = 0,   k = ε
//! ```
//!
//! where `B = eHc/(ħΩ²)` and `B₃ = eH₃c/(ħΩ²)` are the dimensionless field groups.

use crate::sign::Sign;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FieldError {
    #[error("envelope coefficient d = {0} is not positive for the selected branch")]
    NonPositiveEnvelope(f64),
    #[error("mass must be non-negative and finite, got {0}")]
    BadMass(f64),
    #[error("field groups h and E0 are undefined for a massless particle")]
    Massless,
    #[error("non-finite field parameter")]
    NonFinite,
}

/// Which sign of `d = ±eH₃/2ħc` is taken as the positive envelope coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `d = −eH₃/2ħc` (requires `eH₃ < 0`).
    Minus,
    /// `d = +eH₃/2ħc` (requires `eH₃ > 0`); states are related by `ε α₁α₃β`.
    Plus,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Minus, Branch::Plus];

    /// `+1` on the `Minus` branch, `−1` on the `Plus` branch; the sign that
    /// multiplies `ħΩ` and `ℰ₀` in the branch-dependent formulas.
    pub fn sigma(self) -> f64 {
        match self {
            Branch::Minus => 1.0,
            Branch::Plus => -1.0,
        }
    }

    /// The branch whose `d` is positive for this axial field.
    pub fn for_axial(axial: f64) -> Branch {
        if axial < 0.0 {
            Branch::Minus
        } else {
            Branch::Plus
        }
    }
}

/// Dimensionless field configuration (`ħ = c = Ω = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldConfig {
    /// `ϵ`
    pub polarization: Sign,
    /// `ε`
    pub propagation: Sign,
    /// `eHc/(ħΩ²)`, signed by the particle charge.
    pub wave: f64,
    /// `eH₃c/(ħΩ²)`, signed by the particle charge.
    pub axial: f64,
    /// `mc²/(ħΩ)`.
    pub mass: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialValue {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl FieldConfig {
    pub fn new(polarization: Sign, propagation: Sign, wave: f64, axial: f64, mass: f64) -> Result<Self, FieldError> {
        if !wave.is_finite() || !axial.is_finite() {
            return Err(FieldError::NonFinite);
        }
        if !mass.is_finite() || mass < 0.0 {
            return Err(FieldError::BadMass(mass));
        }
        Ok(FieldConfig { polarization, propagation, wave, axial, mass })
    }

    /// Propagation constant `k = εΩ/c`.
    pub fn k(&self) -> f64 {
        self.propagation.value()
    }

    /// Wave phase `ϵΩt − kz`.
    pub fn phase(&self, z: f64, t: f64) -> f64 {
        self.polarization.value() * t - self.k() * z
    }

    /// Envelope coefficient `d > 0` on the given branch.
    pub fn d(&self, branch: Branch) -> Result<f64, FieldError> {
        let d = -branch.sigma() * self.axial / 2.0;
        if d > 0.0 {
            Ok(d)
        } else {
            Err(FieldError::NonPositiveEnvelope(d))
        }
    }

    /// `h = eH/(kmc²)`.
    pub fn h(&self) -> Result<f64, FieldError> {
        if self.mass == 0.0 {
            return Err(FieldError::Massless);
        }
        Ok(self.wave / (self.k() * self.mass))
    }

    /// `ℰ₀ = 2dħ/(Ωm)`, with the sign change that goes with the `Plus` branch.
    pub fn e0(&self, branch: Branch) -> Result<f64, FieldError> {
        if self.mass == 0.0 {
            return Err(FieldError::Massless);
        }
        Ok(branch.sigma() * 2.0 * self.d(branch)? / self.mass)
    }

    /// Transverse localization length `1/√d`.
    pub fn localization_length(&self, branch: Branch) -> Result<f64, FieldError> {
        Ok(1.0 / self.d(branch)?.sqrt())
    }

    pub fn potential(&self, x: f64, y: f64, z: f64, t: f64) -> PotentialValue {
        let (s, c) = self.phase(z, t).sin_cos();
        let amp = self.wave / self.k();
        PotentialValue { a1: -0.5 * self.axial * y + amp * c, a2: 0.5 * self.axial * x + amp * s, a3: 0.0 }
    }

    /// `(E, B)` with `B = ∇×A` and `E = −∂A/∂t`, analytic.
    pub fn field_strengths(&self, _x: f64, _y: f64, z: f64, t: f64) -> ([f64; 3], [f64; 3]) {
        let th = self.phase(z, t);
        let (s, c) = th.sin_cos();
        let amp = self.wave / self.k();
        let eps = self.polarization.value();
        let k = self.k();
        // ∂θ/∂t = ϵ, ∂θ/∂z = −k
        let e = [amp * s * eps, -amp * c * eps, 0.0];
        // B₁ = −∂_z A₂, B₂ = ∂_z A₁, B₃ = ∂_x A₂ − ∂_y A₁
        let b = [amp * c * k, amp * s * k, self.axial];
        (e, b)
    }

    /// Analytic divergence of `A`, identically zero for this gauge.
    pub fn divergence(&self) -> f64 {
        0.0
    }
}
