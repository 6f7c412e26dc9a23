//! Closed-form moments of `|e^D u|²` for a Gaussian envelope and a spinor
//! polynomial of degree one.

use crate::spinor::{Complex, Spinor4};
use std::f64::consts::PI;

/// `exp(2 Re D)` written as a normalized Gaussian of mean `center`,
/// per-axis variance `1/(2d)`, times `mass`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianWeight {
    pub center: (f64, f64),
    pub variance: f64,
    pub mass: f64,
}

impl GaussianWeight {
    /// `D = −½d(x² + y²) + d₁x + d₂y`.
    pub fn new(d: f64, d1: Complex, d2: Complex) -> Self {
        let (a, b) = (d1.re, d2.re);
        GaussianWeight { center: (a / d, b / d), variance: 0.5 / d, mass: PI / d * ((a * a + b * b) / d).exp() }
    }

    /// `(E[x], E[y], E[x²], E[y²], E[xy])` under the normalized weight.
    pub fn moments(&self) -> [f64; 5] {
        let (mx, my) = self.center;
        [mx, my, mx * mx + self.variance, my * my + self.variance, mx * my]
    }
}

/// `∫|e^D (c + x·cx + y·cy)|² dx dy`.
pub fn gaussian_norm_sqr(d: f64, d1: Complex, d2: Complex, c: &Spinor4, cx: &Spinor4, cy: &Spinor4) -> f64 {
    let w = GaussianWeight::new(d, d1, d2);
    let [ex, ey, exx, eyy, exy] = w.moments();
    let mean = c.norm_sqr()
        + 2.0 * c.dot(cx).re * ex
        + 2.0 * c.dot(cy).re * ey
        + cx.norm_sqr() * exx
        + cy.norm_sqr() * eyy
        + 2.0 * cx.dot(cy).re * exy;
    w.mass * mean
}
