//! WebAssembly bindings for the browser demo. Each export has a plain Rust
//! counterpart returning JSON so it can be tested natively.

use rotdirac::frame::{light_deviation, to_resting, to_rotating, Event, FrameParams};
use rotdirac::modes::{build_state, characteristic_roots, Family, StateSpec};
use rotdirac::{FieldConfig, Sign};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Grid half-width in envelope widths `1/√d`, added to the centroid offset.
const GRID_WIDTHS: f64 = 4.0;
const MAX_GRID: usize = 400;

fn sign(x: i32, what: &str) -> Result<Sign, String> {
    Sign::from_f64(x as f64).map_err(|_| format!("{what} must be 1 or -1, got {x}"))
}

pub fn roots_json(h: f64, e0: f64, lambda: f64) -> Result<String, String> {
    let roots = characteristic_roots(h, e0, lambda).map_err(|e| e.to_string())?;
    let rows: Vec<_> = roots
        .iter()
        .map(|r| json!({"value": r.value, "residual": r.residual, "pole_distance": r.pole_distance}))
        .collect();
    Ok(json!({"h": h, "e0": e0, "lambda": lambda, "roots": rows}).to_string())
}

#[allow(clippy::too_many_arguments)]
pub fn transform_json(
    tau: f64,
    polarization: i32,
    propagation: i32,
    freq_sign: i32,
    light_sign: i32,
    phi: f64,
    r: f64,
    z: f64,
    t: f64,
    inverse: bool,
) -> Result<String, String> {
    let fp = FrameParams::natural(
        tau,
        sign(polarization, "polarization")?,
        sign(propagation, "propagation")?,
        sign(freq_sign, "freq_sign")?,
        sign(light_sign, "light_sign")?,
    )
    .map_err(|e| e.to_string())?;
    let e = Event::new(phi, r, z, t);
    let (out, resting) = if inverse {
        let o = to_resting(&e, &fp).map_err(|e| e.to_string())?;
        (o, o)
    } else {
        (to_rotating(&e, &fp), e)
    };
    Ok(json!({
        "event": out,
        "velocity": fp.velocity,
        "gamma": fp.gamma,
        "time_mix": fp.time_mix,
        "light_dev": light_deviation(&resting, &fp),
    })
    .to_string())
}

/// `|Ψ|²` on an `n × n` grid, row-major in `y` then `x`, centered on the axis.
#[allow(clippy::too_many_arguments)]
pub fn density_json(
    family: &str,
    polarization: i32,
    propagation: i32,
    wave: f64,
    axial: f64,
    mass: f64,
    momentum: f64,
    z: f64,
    t: f64,
    n: usize,
) -> Result<String, String> {
    if !(2..=MAX_GRID).contains(&n) {
        return Err(format!("grid size must be in 2..={MAX_GRID}"));
    }
    let family: Family = family.parse()?;
    let pol = sign(polarization, "polarization")?;
    let prop = sign(propagation, "propagation")?;
    let cfg = FieldConfig::new(pol, prop, wave, axial, mass).map_err(|e| e.to_string())?;
    let fp = FrameParams::natural(0.0, pol, prop, Sign::Plus, pol * prop).map_err(|e| e.to_string())?;
    let wf = build_state(&StateSpec::new(family, momentum, 0), &cfg, None, &fp).map_err(|e| e.to_string())?;
    let (cx, cy) = wf.lab_center(wf.theta(z, t));
    let half = GRID_WIDTHS / wf.envelope.d.sqrt() + cx.hypot(cy);
    let step = 2.0 * half / (n - 1) as f64;
    let mut values = Vec::with_capacity(n * n);
    for j in 0..n {
        let y = -half + j as f64 * step;
        for i in 0..n {
            let x = -half + i as f64 * step;
            values.push(wf.eval(x, y, z, t).norm_sqr());
        }
    }
    Ok(json!({
        "half_width": half,
        "center": [cx, cy],
        "n": n,
        "energy": wf.mode.energy,
        "normalized_energy": wf.normalized_energy,
        "values": values,
    })
    .to_string())
}

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn roots(h: f64, e0: f64, lambda: f64) -> Result<String, JsError> {
    js(roots_json(h, e0, lambda))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn transform_event(
    tau: f64,
    polarization: i32,
    propagation: i32,
    freq_sign: i32,
    light_sign: i32,
    phi: f64,
    r: f64,
    z: f64,
    t: f64,
    inverse: bool,
) -> Result<String, JsError> {
    js(transform_json(tau, polarization, propagation, freq_sign, light_sign, phi, r, z, t, inverse))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn density_grid(
    family: &str,
    polarization: i32,
    propagation: i32,
    wave: f64,
    axial: f64,
    mass: f64,
    momentum: f64,
    z: f64,
    t: f64,
    n: usize,
) -> Result<String, JsError> {
    js(density_json(family, polarization, propagation, wave, axial, mass, momentum, z, t, n))
}
