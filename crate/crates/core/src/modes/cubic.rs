//! The characteristic equation `ℰ(ℰ + Λ) − 1 − ℰh²/(ℰ − ℰ₀) = 0`.
//!
//! Cleared of the pole it is the cubic
//! `ℰ³ + (Λ − ℰ₀)ℰ² − (1 + Λℰ₀ + h²)ℰ + ℰ₀ = 0`. Roots come from the closed form
//! followed by one Newton step on the cubic.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CubicError {
    #[error("non-finite coefficient")]
    NonFinite,
    #[error("root {root} lies within {distance:e} of the pole E0 = {pole}")]
    PoleProximity { root: f64, pole: f64, distance: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicRoot {
    pub value: f64,
    /// Residual of the rational form at `value`.
    pub residual: f64,
    /// `|ℰ − ℰ₀|`.
    pub pole_distance: f64,
}

/// Relative distance below which a root is treated as sitting on the pole.
const POLE_TOL: f64 = 1e-8;

/// `ℰ(ℰ + Λ) − 1 − ℰh²/(ℰ − ℰ₀)`.
pub fn characteristic_residual(e: f64, h: f64, e0: f64, lambda: f64) -> f64 {
    e * (e + lambda) - 1.0 - e * h * h / (e - e0)
}

fn cubic(e: f64, a: f64, b: f64, c: f64) -> (f64, f64) {
    let v = ((e + a) * e + b) * e + c;
    let dv = (3.0 * e + 2.0 * a) * e + b;
    (v, dv)
}

fn quadratic_roots(b: f64, c: f64) -> Vec<f64> {
    // x² + bx + c
    let disc = b * b - 4.0 * c;
    if disc < 0.0 {
        return Vec::new();
    }
    let sgn = if b >= 0.0 { 1.0 } else { -1.0 };
    let q = -0.5 * (b + sgn * disc.sqrt());
    if q == 0.0 {
        return vec![0.0, 0.0];
    }
    let mut r = vec![q, c / q];
    r.sort_by(|x, y| x.total_cmp(y));
    r
}

/// Real roots of `x³ + ax² + bx + c`, ascending, from the closed form.
fn cubic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    let mut out = if p == 0.0 && q == 0.0 {
        vec![0.0; 3]
    } else if disc > 0.0 {
        let s = disc.sqrt();
        let u = (-q / 2.0 + s).cbrt();
        let v = (-q / 2.0 - s).cbrt();
        vec![u + v]
    } else {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        (0..3).map(|k| m * (phi - 2.0 * PI * k as f64 / 3.0).cos()).collect()
    };
    for t in out.iter_mut() {
        *t -= shift;
    }
    out.sort_by(|x, y| x.total_cmp(y));
    out
}

fn newton_polish(e: f64, a: f64, b: f64, c: f64) -> f64 {
    let (v, dv) = cubic(e, a, b, c);
    if dv == 0.0 || !dv.is_finite() {
        return e;
    }
    let next = e - v / dv;
    if cubic(next, a, b, c).0.abs() <= v.abs() {
        next
    } else {
        e
    }
}

/// Real roots of the characteristic equation, ascending, each with its residual
/// and distance to the pole.
///
/// When `h = 0` or `ℰ₀ = 0` the cubic carries the spurious factor `(ℰ − ℰ₀)` or `ℰ`;
/// the remaining quadratic is solved directly.
pub fn characteristic_roots(h: f64, e0: f64, lambda: f64) -> Result<Vec<CharacteristicRoot>, CubicError> {
    if !h.is_finite() || !e0.is_finite() || !lambda.is_finite() {
        return Err(CubicError::NonFinite);
    }
    let values = if h == 0.0 {
        quadratic_roots(lambda, -1.0)
    } else if e0 == 0.0 {
        quadratic_roots(lambda, -(1.0 + h * h))
    } else {
        let (a, b, c) = (lambda - e0, -(1.0 + lambda * e0 + h * h), e0);
        let mut v: Vec<f64> = cubic_roots(a, b, c).into_iter().map(|r| newton_polish(r, a, b, c)).collect();
        v.sort_by(|x, y| x.total_cmp(y));
        v
    };
    let mut out = Vec::with_capacity(values.len());
    for value in values {
        let distance = (value - e0).abs();
        if distance <= POLE_TOL * (1.0 + e0.abs()) {
            return Err(CubicError::PoleProximity { root: value, pole: e0, distance });
        }
        out.push(CharacteristicRoot {
            value,
            residual: characteristic_residual(value, h, e0, lambda),
            pole_distance: distance,
        });
    }
    Ok(out)
}
