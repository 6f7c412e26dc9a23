//! The co-rotating residual collected as a polynomial in `(x̃, ỹ)`.
//!
//! For `F = e^D u` with `u` of degree one the reduced residual has degree at most
//! three; every coefficient must vanish for an exact state.

use super::RotatingOperator;
use crate::field::FieldConfig;
use crate::modes::WaveFunctionModel;
use crate::spinor::{Complex, Matrix4, Spinor4, I};
use serde::{Deserialize, Serialize};

const DEG: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Poly([[Spinor4; DEG]; DEG]);

impl Poly {
    fn zero() -> Self {
        Poly([[Spinor4::ZERO; DEG]; DEG])
    }

    /// `x^i y^j · self`
    fn shift(&self, i: usize, j: usize) -> Self {
        let mut out = Poly::zero();
        for a in 0..DEG {
            for b in 0..DEG {
                let v = self.0[a][b];
                if v.max_abs() == 0.0 {
                    continue;
                }
                assert!(a + i < DEG && b + j < DEG, "degree overflow");
                out.0[a + i][b + j] = v;
            }
        }
        out
    }

    fn scale(&self, c: Complex) -> Self {
        Poly(self.0.map(|row| row.map(|v| v.scale(c))))
    }

    fn apply(&self, m: &Matrix4) -> Self {
        Poly(self.0.map(|row| row.map(|v| *m * v)))
    }

    fn add(&mut self, other: &Poly) {
        for a in 0..DEG {
            for b in 0..DEG {
                self.0[a][b] += other.0[a][b];
            }
        }
    }
}

/// `x̃^i ỹ^j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Monomial {
    pub x: usize,
    pub y: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientReport {
    pub coefficients: Vec<(Monomial, Spinor4)>,
    /// Largest coefficient magnitude divided by `max|u coefficient|·(|E| + |p| + m + 1)`.
    pub max_relative: f64,
    pub worst: Monomial,
}

/// Coefficients of the reduced co-rotating residual, collected term by term.
pub fn rotating_coefficients(wf: &WaveFunctionModel, cfg: &FieldConfig) -> CoefficientReport {
    let op = RotatingOperator::new(wf, cfg);
    let env = &wf.envelope;
    let mut u = Poly::zero();
    u.0[0][0] = wf.spinor.c;
    u.0[1][0] = wf.spinor.cx;
    u.0[0][1] = wf.spinor.cy;
    let mut cx = Poly::zero();
    cx.0[0][0] = wf.spinor.cx;
    let mut cy = Poly::zero();
    cy.0[0][0] = wf.spinor.cy;

    // F_x̃/e^D = (−dx̃ + d₁)u + cx, F_ỹ/e^D = (−dỹ + d₂)u + cy
    let mut fx = u.shift(1, 0).scale(Complex::new(-env.d, 0.0));
    fx.add(&u.scale(env.d1));
    fx.add(&cx);
    let mut fy = u.shift(0, 1).scale(Complex::new(-env.d, 0.0));
    fy.add(&u.scale(env.d2));
    fy.add(&cy);

    let mut r = u.apply(&op.m0);
    let mut ang = fy.shift(1, 0);
    ang.add(&fx.shift(0, 1).scale(Complex::new(-1.0, 0.0)));
    r.add(&ang.apply(&op.rot));
    r.add(&fx.apply(&op.alpha1).scale(-I));
    r.add(&fy.apply(&op.alpha2).scale(-I));
    r.add(&u.shift(0, 1).apply(&op.alpha1).scale(Complex::new(0.5 * op.axial, 0.0)));
    r.add(&u.shift(1, 0).apply(&op.alpha2).scale(Complex::new(-0.5 * op.axial, 0.0)));

    let scale = (wf.mode.energy.abs() + wf.mode.momentum.abs() + cfg.mass + 1.0) * wf.spinor.max_abs();
    let mut coefficients = Vec::new();
    let mut max_relative = 0.0;
    let mut worst = Monomial { x: 0, y: 0 };
    for a in 0..DEG {
        for b in 0..DEG - a {
            let v = r.0[a][b];
            let m = Monomial { x: a, y: b };
            let rel = v.norm() / scale;
            if rel > max_relative {
                max_relative = rel;
                worst = m;
            }
            coefficients.push((m, v));
        }
    }
    CoefficientReport { coefficients, max_relative, worst }
}
