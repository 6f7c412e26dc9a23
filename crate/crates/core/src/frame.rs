//! The non-Galilean transformation between the resting frame and a point-rotating
//! frame.
//!
//! In dimensionless units (`c = Ω = 1`) the map acts linearly on `(φ, z, t)`:
//!
//! ```text
//! φ̃ = φ − ϵ t + ε z
//! z̃ = −ε_v b φ + γ z + ϵ_ω ε τ t
//! t̃ = −b φ + ϵ_ω ε τ z + γ t
//! ```
//!
//! with `τ` standing for `τΩ`, `γ = √(1+τ²)` and
//! `b = ϵ_ω τ [ϵ_ω ϵ τ − (1 − γ)]`. The cylindrical radius is unchanged.

use crate::sign::Sign;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FrameError {
    #[error("rotation frequency must be positive, got {0}")]
    NonPositiveFrequency(f64),
    #[error("time constant must be non-negative, got {0}")]
    NegativeTau(f64),
    #[error("non-finite frame parameter")]
    NonFinite,
    #[error("transformation matrix is singular (det = {0:e})")]
    Singular(f64),
}

/// Derived constants of the transformation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameParams {
    /// `τΩ`.
    pub tau: f64,
    /// `ϵ`, polarization of the wave.
    pub polarization: Sign,
    /// `ε`, propagation direction of the wave.
    pub propagation: Sign,
    /// `ϵ_ω`, sign of the preserved angular rate `±1/τ`.
    pub freq_sign: Sign,
    /// `ε_v`, direction of the preserved light ray.
    pub light_sign: Sign,
    /// Boost velocity of the rotating frame along `z`, in units of `c`.
    pub velocity: f64,
    /// Time-mixing coefficient `b` (units of `1/Ω`).
    pub time_mix: f64,
    /// Length-mixing coefficient `a = ε_v b` (units of `c/Ω`).
    pub length_mix: f64,
    /// `√(1+τ²Ω²)`.
    pub gamma: f64,
}

fn time_mix(tau: f64, omega: f64, polarization: Sign, freq_sign: Sign) -> f64 {
    let gamma = (1.0 + tau * tau * omega * omega).sqrt();
    let fs = freq_sign.value();
    fs * tau * (fs * polarization.value() * tau * omega - (1.0 - gamma))
}

impl FrameParams {
    /// Build the frame from `τ` and `Ω` in any consistent units; only `τΩ` is kept.
    pub fn derive(
        tau: f64,
        omega: f64,
        polarization: Sign,
        propagation: Sign,
        freq_sign: Sign,
        light_sign: Sign,
    ) -> Result<Self, FrameError> {
        if !tau.is_finite() || !omega.is_finite() {
            return Err(FrameError::NonFinite);
        }
        if omega <= 0.0 {
            return Err(FrameError::NonPositiveFrequency(omega));
        }
        if tau < 0.0 {
            return Err(FrameError::NegativeTau(tau));
        }
        let t = tau * omega;
        let gamma = (1.0 + t * t).sqrt();
        let velocity = freq_sign.value() * propagation.value() * t / gamma;
        let time_mix = time_mix(t, 1.0, polarization, freq_sign);
        Ok(FrameParams {
            tau: t,
            polarization,
            propagation,
            freq_sign,
            light_sign,
            velocity,
            time_mix,
            length_mix: light_sign.value() * time_mix,
            gamma,
        })
    }

    /// Frame from the dimensionless group `τΩ`.
    pub fn natural(
        tau_omega: f64,
        polarization: Sign,
        propagation: Sign,
        freq_sign: Sign,
        light_sign: Sign,
    ) -> Result<Self, FrameError> {
        Self::derive(tau_omega, 1.0, polarization, propagation, freq_sign, light_sign)
    }

    pub fn is_galilean(&self) -> bool {
        self.tau == 0.0
    }

    /// `ϵ_ω ε τΩ`, the off-diagonal Lorentz coefficient.
    pub fn boost(&self) -> f64 {
        self.freq_sign.value() * self.propagation.value() * self.tau
    }

    /// Coefficients of the map acting on `(φ, z, t)`.
    pub fn matrix(&self) -> [[f64; 3]; 3] {
        let eps = self.polarization.value();
        let prop = self.propagation.value();
        let b = self.time_mix;
        let bo = self.boost();
        [[1.0, prop, -eps], [-self.light_sign.value() * b, self.gamma, bo], [-b, bo, self.gamma]]
    }

    pub fn determinant(&self) -> f64 {
        det3(&self.matrix())
    }
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// A point in cylindrical coordinates with time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub phi: f64,
    pub r: f64,
    pub z: f64,
    pub t: f64,
}

impl Event {
    pub fn new(phi: f64, r: f64, z: f64, t: f64) -> Self {
        Event { phi, r, z, t }
    }
}

pub fn to_rotating(e: &Event, fp: &FrameParams) -> Event {
    let phi = e.phi - fp.polarization.value() * e.t + fp.propagation.value() * e.z;
    if fp.is_galilean() {
        return Event { phi, r: e.r, z: e.z, t: e.t };
    }
    let b = fp.time_mix;
    let bo = fp.boost();
    Event {
        phi,
        r: e.r,
        z: -fp.light_sign.value() * b * e.phi + fp.gamma * e.z + bo * e.t,
        t: -b * e.phi + bo * e.z + fp.gamma * e.t,
    }
}

pub fn to_resting(e: &Event, fp: &FrameParams) -> Result<Event, FrameError> {
    if fp.is_galilean() {
        let phi = e.phi + fp.polarization.value() * e.t - fp.propagation.value() * e.z;
        return Ok(Event { phi, r: e.r, z: e.z, t: e.t });
    }
    let m = fp.matrix();
    let det = det3(&m);
    if !det.is_finite() || det.abs() <= 1e-300 {
        return Err(FrameError::Singular(det));
    }
    // Cramer's rule on (φ, z, t).
    let rhs = [e.phi, e.z, e.t];
    let solve = |col: usize| {
        let mut mm = m;
        for row in 0..3 {
            mm[row][col] = rhs[row];
        }
        det3(&mm) / det
    };
    Ok(Event { phi: solve(0), r: e.r, z: solve(1), t: solve(2) })
}

/// Result of [`check_constancy`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstancyReport {
    pub samples: usize,
    /// Largest `|z̃/t̃ − ε_v c| / c` over light-ray events.
    pub light_max_dev: f64,
    /// Largest `|φ̃/t̃ − ϵ_ω/τ| · τ`; `None` when `τ = 0`.
    pub freq_max_dev: Option<f64>,
    pub note: Option<String>,
}

/// Relative deviation of `z̃/t̃` from `ε_v` for one event; `None` when `t̃ ≈ 0`.
pub fn light_deviation(e: &Event, fp: &FrameParams) -> Option<f64> {
    let r = to_rotating(e, fp);
    if r.t.abs() <= 1e-12 * (e.t.abs() + e.z.abs() + e.phi.abs() * fp.time_mix.abs()) || r.t == 0.0 {
        return None;
    }
    Some((r.z / r.t - fp.light_sign.value()).abs())
}

/// Relative deviation of `φ̃/t̃` from `ϵ_ω/τ`; `None` when `τ = 0` or `t̃ ≈ 0`.
pub fn frequency_deviation(e: &Event, fp: &FrameParams) -> Option<f64> {
    if fp.is_galilean() {
        return None;
    }
    let r = to_rotating(e, fp);
    if r.t == 0.0 {
        return None;
    }
    Some((r.phi * fp.tau / r.t - fp.freq_sign.value()).abs())
}

/// Sample events on the light cone `z = ε_v t` and on the frequency cone
/// `φ = ϵ_ω t/τ` and report the worst deviation of the transformed ratios.
pub fn check_constancy(fp: &FrameParams, samples: usize, seed: u64) -> ConstancyReport {
    let samples = samples.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut light = 0.0f64;
    for _ in 0..samples {
        let t = nonzero(&mut rng, 10.0);
        let e = Event::new(rng.gen_range(-PI..PI), rng.gen_range(0.0..5.0), fp.light_sign.value() * t, t);
        if let Some(d) = light_deviation(&e, fp) {
            light = light.max(d);
        }
    }
    let (freq, note) = if fp.is_galilean() {
        (None, Some("frequency constancy undefined at tau = 0; skipped".to_string()))
    } else {
        let mut worst = 0.0f64;
        for _ in 0..samples {
            let t = nonzero(&mut rng, 10.0);
            let e =
                Event::new(fp.freq_sign.value() * t / fp.tau, rng.gen_range(0.0..5.0), rng.gen_range(-10.0..10.0), t);
            if let Some(d) = frequency_deviation(&e, fp) {
                worst = worst.max(d);
            }
        }
        (Some(worst), None)
    };
    ConstancyReport { samples, light_max_dev: light, freq_max_dev: freq, note }
}

fn nonzero(rng: &mut ChaCha8Rng, scale: f64) -> f64 {
    let mag = rng.gen_range(0.1..1.0) * scale;
    if rng.gen_bool(0.5) {
        mag
    } else {
        -mag
    }
}
