//! Space-time derivatives of a state: analytic, or by finite differences.

use crate::modes::{Axis, WaveFunctionModel};
use crate::spinor::Spinor4;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Analytic,
    Fd2,
    Fd4,
    Richardson,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::Analytic, Scheme::Fd2, Scheme::Fd4, Scheme::Richardson];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Analytic => "analytic",
            Scheme::Fd2 => "fd2",
            Scheme::Fd4 => "fd4",
            Scheme::Richardson => "richardson",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Scheme::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| format!("unknown scheme '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DerivativeError {
    #[error("finite-difference step underflows along {axis:?} (scale {scale:e})")]
    StepUnderflow { axis: Axis, scale: f64 },
}

/// A Cartesian event `(x, y, z, t)` in the resting frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub t: f64,
}

impl Point {
    pub fn new(x: f64, y: f64, z: f64, t: f64) -> Self {
        Point { x, y, z, t }
    }

    fn get(&self, axis: Axis) -> f64 {
        match axis {
            Axis::T => self.t,
            Axis::X => self.x,
            Axis::Y => self.y,
            Axis::Z => self.z,
        }
    }

    fn shifted(&self, axis: Axis, h: f64) -> Point {
        let mut p = *self;
        match axis {
            Axis::T => p.t += h,
            Axis::X => p.x += h,
            Axis::Y => p.y += h,
            Axis::Z => p.z += h,
        }
        p
    }
}

/// Length over which the state changes by `O(1)` along `axis` near `p`.
pub fn coordinate_scale(wf: &WaveFunctionModel, p: &Point, axis: Axis) -> f64 {
    let width = 1.0 / wf.envelope.d.sqrt();
    match axis {
        Axis::X | Axis::Y => width,
        Axis::T | Axis::Z => {
            let r = p.x.hypot(p.y) + width;
            let rate = 1.0
                + wf.mode.energy.abs()
                + wf.mode.momentum.abs()
                + wf.envelope.d.sqrt() * r
                + wf.envelope.d2.norm() * r
                + wf.envelope.d1.norm() * r;
            1.0 / rate
        }
    }
}

fn step(axis: Axis, x: f64, scale: f64, exponent: f64) -> Result<f64, DerivativeError> {
    let h = f64::EPSILON.powf(exponent) * scale;
    if !h.is_finite() || h <= 0.0 || x + h == x {
        return Err(DerivativeError::StepUnderflow { axis, scale });
    }
    // exactly representable step
    let h = (x + h) - x;
    Ok(h)
}

/// Step used by the finite-difference schemes; `0` for analytic.
pub fn fd_step(wf: &WaveFunctionModel, p: &Point, axis: Axis, scheme: Scheme) -> Result<f64, DerivativeError> {
    let scale = coordinate_scale(wf, p, axis);
    match scheme {
        Scheme::Analytic => Ok(0.0),
        Scheme::Fd2 | Scheme::Fd4 => step(axis, p.get(axis), scale, 1.0 / 3.0),
        Scheme::Richardson => step(axis, p.get(axis), scale, 0.0).map(|h| 0.1 * h),
    }
}

fn eval(wf: &WaveFunctionModel, p: &Point) -> Spinor4 {
    wf.eval(p.x, p.y, p.z, p.t)
}

fn central(wf: &WaveFunctionModel, p: &Point, axis: Axis, h: f64) -> Spinor4 {
    (eval(wf, &p.shifted(axis, h)) - eval(wf, &p.shifted(axis, -h))).scale_re(0.5 / h)
}

fn fd4(wf: &WaveFunctionModel, p: &Point, axis: Axis, h: f64) -> Spinor4 {
    let f = |k: f64| eval(wf, &p.shifted(axis, k * h));
    (f(-2.0) - f(2.0) + (f(1.0) - f(-1.0)).scale_re(8.0)).scale_re(1.0 / (12.0 * h))
}

/// Ridders' extrapolation of central differences; returns the estimate and its
/// error bound.
pub fn ridders<F: Fn(f64) -> Spinor4>(central_at: F, h0: f64) -> (Spinor4, f64) {
    const NTAB: usize = 10;
    const CON: f64 = 1.4;
    const CON2: f64 = CON * CON;
    const SAFE: f64 = 2.0;
    let mut a = vec![vec![Spinor4::ZERO; NTAB]; NTAB];
    let mut h = h0;
    a[0][0] = central_at(h);
    let mut err = f64::INFINITY;
    let mut ans = a[0][0];
    for i in 1..NTAB {
        h /= CON;
        a[0][i] = central_at(h);
        let mut fac = CON2;
        for j in 1..=i {
            a[j][i] = (a[j - 1][i].scale_re(fac) - a[j - 1][i - 1]).scale_re(1.0 / (fac - 1.0));
            fac *= CON2;
            let errt = (a[j][i] - a[j - 1][i]).max_abs().max((a[j][i] - a[j - 1][i - 1]).max_abs());
            if errt <= err {
                err = errt;
                ans = a[j][i];
            }
        }
        if (a[i][i] - a[i - 1][i - 1]).max_abs() >= SAFE * err {
            break;
        }
    }
    (ans, err)
}

/// `∂_axis Ψ` at `p` by the requested scheme.
pub fn derivative(wf: &WaveFunctionModel, p: &Point, axis: Axis, scheme: Scheme) -> Result<Spinor4, DerivativeError> {
    match scheme {
        Scheme::Analytic => Ok(wf.jet(p.x, p.y, p.z, p.t).1[axis.index()]),
        Scheme::Fd2 => Ok(central(wf, p, axis, fd_step(wf, p, axis, scheme)?)),
        Scheme::Fd4 => Ok(fd4(wf, p, axis, fd_step(wf, p, axis, scheme)?)),
        Scheme::Richardson => {
            let h0 = fd_step(wf, p, axis, scheme)?;
            Ok(ridders(|h| central(wf, p, axis, h), h0).0)
        }
    }
}

/// `(Ψ, [∂_t, ∂_x, ∂_y, ∂_z]Ψ)` by the requested scheme.
pub fn jet(wf: &WaveFunctionModel, p: &Point, scheme: Scheme) -> Result<(Spinor4, [Spinor4; 4]), DerivativeError> {
    if scheme == Scheme::Analytic {
        return Ok(wf.jet(p.x, p.y, p.z, p.t));
    }
    let mut g = [Spinor4::ZERO; 4];
    for axis in Axis::ALL {
        g[axis.index()] = derivative(wf, p, axis, scheme)?;
    }
    Ok((eval(wf, p), g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Branch, FieldConfig};
    use crate::frame::FrameParams;
    use crate::modes::{massless_state, Mode, Prefactor};
    use crate::sign::Sign::{Minus, Plus};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn state(wave: f64) -> WaveFunctionModel {
        let cfg = FieldConfig::new(Plus, Minus, wave, -1.4, 0.0).unwrap();
        let fp = FrameParams::natural(0.0, Plus, Minus, Plus, Minus).unwrap();
        massless_state(&cfg, Branch::Minus, &fp, Mode::on_light_cone(0.8, &fp), Prefactor::Exponential).unwrap()
    }

    #[test]
    fn time_derivative_of_plane_wave_phase() {
        // with B = 0 and r = 0 the only time dependence is e^{−iEt} and the spin phase
        let wf = state(0.0);
        let p = Point::new(0.0, 0.0, 0.3, 0.7);
        let psi = wf.eval(0.0, 0.0, 0.3, 0.7);
        let dt = derivative(&wf, &p, Axis::T, Scheme::Analytic).unwrap();
        // components 2, 4 carry spin weight −1: ∂_t e^{iϵt/2} = iϵ/2
        let expect = psi.scale(crate::spinor::Complex::new(0.0, -wf.mode.energy + 0.5));
        assert!((dt - expect).max_abs() < 1e-14);
    }

    #[test]
    fn radial_derivative_vanishes_at_origin() {
        let wf = state(0.0);
        let p = Point::new(0.0, 0.0, 0.0, 0.0);
        for s in Scheme::ALL {
            for ax in [Axis::X, Axis::Y] {
                assert!(derivative(&wf, &p, ax, s).unwrap().max_abs() < 1e-9, "{s} {ax:?}");
            }
        }
    }

    #[test]
    fn schemes_agree_with_analytic() {
        let wf = state(0.9);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let th = wf.theta(0.0, 0.0);
            let (cx, cy) = wf.lab_center(th);
            let p = Point::new(
                cx + rng.gen_range(-1.0..1.0),
                cy + rng.gen_range(-1.0..1.0),
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
            );
            let (psi, a) = jet(&wf, &p, Scheme::Analytic).unwrap();
            let scale = psi.max_abs().max(a.iter().map(|s| s.max_abs()).fold(0.0, f64::max));
            let (_, f4) = jet(&wf, &p, Scheme::Fd4).unwrap();
            let (_, ri) = jet(&wf, &p, Scheme::Richardson).unwrap();
            for k in 0..4 {
                assert!((a[k] - f4[k]).max_abs() <= 1e-7 * scale);
                assert!((a[k] - ri[k]).max_abs() <= 1e-9 * scale);
            }
        }
    }

    #[test]
    fn fd2_error_is_second_order() {
        let wf = state(0.9);
        let p = Point::new(0.3, -0.2, 0.5, 0.1);
        let exact = derivative(&wf, &p, Axis::X, Scheme::Analytic).unwrap();
        let e1 = (central(&wf, &p, Axis::X, 0.02) - exact).max_abs();
        let e2 = (central(&wf, &p, Axis::X, 0.01) - exact).max_abs();
        let ratio = e1 / e2;
        assert!((ratio - 4.0).abs() < 0.1, "{ratio}");
    }

    #[test]
    fn degenerate_scale_reports_underflow() {
        assert!(step(Axis::X, 1e300, 1e-300, 1.0 / 3.0).is_err());
        assert!(step(Axis::X, 0.0, 0.0, 1.0 / 3.0).is_err());
    }
}
