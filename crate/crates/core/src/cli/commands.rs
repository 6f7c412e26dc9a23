use super::config::{si, Resolved, RunConfig};
use super::table::{fmt_f64, Cell, Table};
use super::{exit, CliError, Command, Outcome, ScanAxis};
use crate::field::Branch;
use crate::frame::{
    check_constancy, frequency_deviation, light_deviation, to_resting, to_rotating, Event, FrameParams,
};
use crate::modes::{
    build_state, characteristic_roots, detuning, expectations, massless_expectations_moments,
    massless_expectations_published, quantization_gap, CharacteristicRoot, CubicError, Expectations, Family,
    MassiveKind, Prefactor, QuantizationGap,
};
use crate::quadrature::QuadratureOptions;
use crate::residual::{convention_audit, rotating_coefficients, verify, VerifyOptions};
use crate::sign::Sign;
use rayon::prelude::*;
use serde_json::json;

/// Events per constancy check in scan rows.
const SCAN_CONSTANCY_SAMPLES: usize = 100;
/// Normalization accepted by `verify`.
const NORM_TOL: f64 = 1e-8;

pub(super) fn dispatch(cmd: &Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let r = cfg.resolve()?;
    match cmd {
        Command::Transform { inverse, samples } => transform(cfg, &r, *inverse, *samples),
        Command::Roots => roots(cfg, &r),
        Command::Verify { scheme, points, strict_prefactor, perturb_energy, records } => {
            let mut v = cfg.verify.clone();
            if let Some(s) = scheme {
                v.scheme = *s;
            }
            if let Some(p) = points {
                v.points = *p;
            }
            if let Some(d) = perturb_energy {
                v.perturb_energy = *d;
            }
            verify_cmd(cfg, &r, &v, *strict_prefactor, *records)
        }
        Command::Expect { z, t } => expect(cfg, &r, *z, *t),
        Command::Scan { axis, from, to, steps, log } => scan(cfg, &r, *axis, *from, *to, *steps, *log),
        Command::Audit { points } => audit(cfg, &r, points.unwrap_or(cfg.verify.points)),
    }
}

fn ok(result: serde_json::Value, table: Table) -> Outcome {
    Outcome { result, table, code: exit::OK, message: None }
}

fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::Minus => "minus",
        Branch::Plus => "plus",
    }
}

fn sign_cell(s: Sign) -> Cell {
    Cell::I(s.value() as i64)
}

/// Winding used for gap reports: the configured one, or `1` when it is zero.
fn gap_winding(cfg: &RunConfig) -> i64 {
    if cfg.mode.n == 0 {
        1
    } else {
        cfg.mode.n
    }
}

fn gap_json(g: &QuantizationGap, omega_si: Option<f64>) -> serde_json::Value {
    let mev = omega_si.zip(g.resting).map(|(w, e)| e * si::HBAR * w / si::MEV);
    json!({
        "n": g.n,
        "rotating": g.rotating,
        "resting": g.resting,
        "approx": g.approx,
        "rel_gap": g.rel_gap,
        "resting_mev": mev,
        "resting_proton_rest_energies": mev.map(|m| m / si::PROTON_REST_MEV),
    })
}

fn frame_json(fp: &FrameParams) -> serde_json::Value {
    json!({
        "frame": fp,
        "speed_m_s": fp.velocity.abs() * si::C,
    })
}

fn on_light_cone(e: &Event, fp: &FrameParams) -> bool {
    (e.z - fp.light_sign.value() * e.t).abs() <= 1e-12 * (1.0 + e.z.abs() + e.t.abs())
}

fn on_frequency_cone(e: &Event, fp: &FrameParams) -> bool {
    !fp.is_galilean()
        && (e.phi * fp.tau - fp.freq_sign.value() * e.t).abs() <= 1e-12 * (1.0 + (e.phi * fp.tau).abs() + e.t.abs())
}

fn transform(cfg: &RunConfig, r: &Resolved, inverse: bool, samples: usize) -> Result<Outcome, CliError> {
    let events = cfg.events();
    if events.is_empty() {
        return Err(CliError::new(exit::CONFIG, "no events: add an \"events\" array of {phi, r, z, t}"));
    }
    let fp = &r.frame;
    let mut t =
        Table::new(&["index", "phi", "r", "z", "t", "phi_out", "r_out", "z_out", "t_out", "light_dev", "freq_dev"]);
    for (i, e) in events.iter().enumerate() {
        let (out, resting) = if inverse {
            let o = to_resting(e, fp).map_err(|err| CliError::new(exit::CONFIG, err.to_string()))?;
            (o, o)
        } else {
            (to_rotating(e, fp), *e)
        };
        let light = if on_light_cone(&resting, fp) { light_deviation(&resting, fp) } else { None };
        let freq = if on_frequency_cone(&resting, fp) { frequency_deviation(&resting, fp) } else { None };
        t.push(vec![
            i.into(),
            e.phi.into(),
            e.r.into(),
            e.z.into(),
            e.t.into(),
            out.phi.into(),
            out.r.into(),
            out.z.into(),
            out.t.into(),
            light.into(),
            freq.into(),
        ]);
    }
    let constancy = check_constancy(fp, samples, cfg.verify.seed);
    let gap = quantization_gap(gap_winding(cfg), fp).ok().map(|g| gap_json(&g, r.omega_si));
    let result = json!({
        "inverse": inverse,
        "frame": frame_json(fp),
        "constancy": constancy,
        "gap": gap,
        "events": t.to_json(),
    });
    Ok(ok(result, t))
}

fn massive_kind(f: Family) -> Option<MassiveKind> {
    match f {
        Family::Ground | Family::Flipped => Some(MassiveKind::Ground),
        Family::Excited => Some(MassiveKind::Excited),
        Family::Massless | Family::MasslessZero => None,
    }
}

/// `(h, ℰ₀, Λ)` from the cubic block, or from the field and a massive mode.
fn cubic_coefficients(cfg: &RunConfig, r: &Resolved) -> Result<(f64, f64, f64), CliError> {
    if let Some(c) = cfg.cubic {
        return Ok((c.h, c.e0, c.lambda));
    }
    let kind = massive_kind(cfg.mode.family).ok_or_else(|| {
        CliError::new(exit::CONFIG, "the characteristic equation needs a massive family or a \"cubic\" block")
    })?;
    let spec = cfg.state_spec(r)?;
    let field_err = |e: crate::field::FieldError| CliError::new(exit::CONFIG, e.to_string());
    let h = r.field.h().map_err(field_err)?;
    let e0 = r.field.e0(r.branch).map_err(field_err)?;
    let lambda = detuning(spec.momentum, r.field.propagation, r.field.mass, r.branch, kind);
    Ok((h, e0, lambda))
}

fn cubic_error(e: CubicError) -> CliError {
    match e {
        CubicError::PoleProximity { .. } => CliError::new(exit::POLE, e.to_string()),
        CubicError::NonFinite => CliError::new(exit::CONFIG, e.to_string()),
    }
}

/// Discriminant of `(ℰ² + Λℰ − 1)(ℰ − ℰ₀) − h²ℰ`; positive for three real roots.
fn discriminant(h: f64, e0: f64, lambda: f64) -> f64 {
    let (a, b, c, d) = (1.0, lambda - e0, -1.0 - lambda * e0 - h * h, e0);
    18.0 * a * b * c * d - 4.0 * b.powi(3) * d + b * b * c * c - 4.0 * a * c.powi(3) - 27.0 * a * a * d * d
}

fn roots(cfg: &RunConfig, r: &Resolved) -> Result<Outcome, CliError> {
    let (h, e0, lambda) = cubic_coefficients(cfg, r)?;
    let roots = characteristic_roots(h, e0, lambda).map_err(cubic_error)?;
    let tol = cfg.verify.tolerance * (1.0 + e0.abs());
    let mut t = Table::new(&["index", "value", "residual", "pole_distance"]);
    for (i, root) in roots.iter().enumerate() {
        t.push(vec![i.into(), root.value.into(), root.residual.into(), root.pole_distance.into()]);
    }
    let near: Vec<&CharacteristicRoot> = roots.iter().filter(|x| x.pole_distance <= tol).collect();
    let result = json!({
        "h": h,
        "e0": e0,
        "lambda": lambda,
        "discriminant": discriminant(h, e0, lambda),
        "pole_tolerance": tol,
        "roots": t.to_json(),
    });
    let mut out = ok(result, t);
    if let Some(x) = near.first() {
        out.code = exit::POLE;
        out.message = Some(format!("root {} lies within {:e} of the pole {}", x.value, x.pole_distance, e0));
    }
    Ok(out)
}

fn verify_cmd(
    cfg: &RunConfig,
    r: &Resolved,
    v: &super::config::VerifyBlock,
    strict: bool,
    records: bool,
) -> Result<Outcome, CliError> {
    let mut spec = cfg.state_spec(r)?;
    if strict {
        spec.prefactor = Prefactor::Literal;
    }
    let mut wf = build_state(&spec, &r.field, Some(r.branch), &r.frame)?;
    if v.perturb_energy != 0.0 {
        wf.mode.energy *= 1.0 + v.perturb_energy;
    }
    let opts = VerifyOptions {
        points: v.points,
        seed: v.seed,
        scheme: v.scheme,
        coupling: v.coupling,
        keep_records: records,
        ..Default::default()
    };
    let rep = verify(&wf, &r.field, &opts).map_err(|e| CliError::new(exit::RESIDUAL, e.to_string()))?;
    let pass = rep.max_rel_residual <= v.tolerance;
    let norm_closed = wf.norm_sqr_closed_form();
    let norm_quad = expectations(&wf, 0.0, 0.0, &QuadratureOptions::default()).ok().map(|e| e.norm);
    let norm_pass = (norm_closed - 1.0).abs() <= NORM_TOL;
    let coeff =
        (!wf.family.is_massless() && r.frame.is_galilean()).then(|| rotating_coefficients(&wf, &r.field).max_relative);
    let defect = wf.mode.quantization_defect(&r.frame);
    let prefactor = match spec.prefactor {
        Prefactor::Exponential => "exponential",
        Prefactor::Literal => "literal",
    };
    let result = json!({
        "state": {
            "family": wf.family,
            "branch": wf.branch,
            "mode": wf.mode,
            "normalized_energy": wf.normalized_energy,
            "detuning": wf.detuning,
            "envelope": wf.envelope,
            "prefactor": prefactor,
            "perturb_energy": v.perturb_energy,
            "quantization_defect": defect,
        },
        "residual": {
            "tolerance": v.tolerance,
            "pass": pass,
            "report": rep,
        },
        "normalization": {
            "closed_form": norm_closed,
            "quadrature": norm_quad,
            "tolerance": NORM_TOL,
            "pass": norm_pass,
        },
        "rotating_coefficients_max_relative": coeff,
    });
    let w = rep.worst_point;
    let table = Table::key_value(vec![
        ("family", wf.family.name().into()),
        ("branch", branch_name(wf.branch).into()),
        ("energy", wf.mode.energy.into()),
        ("momentum", wf.mode.momentum.into()),
        ("e_rot", wf.mode.e_rot.into()),
        ("p_rot", wf.mode.p_rot.into()),
        ("winding", wf.mode.winding.into()),
        ("quantization_defect", defect.into()),
        ("prefactor", prefactor.into()),
        ("perturb_energy", v.perturb_energy.into()),
        ("scheme", rep.scheme.name().into()),
        ("step", rep.step.into()),
        ("points", rep.points_evaluated.into()),
        ("seed", Cell::I(rep.seed as i64)),
        ("max_rel_residual", rep.max_rel_residual.into()),
        ("mean_rel_residual", rep.mean_rel_residual.into()),
        ("worst_x", w.x.into()),
        ("worst_y", w.y.into()),
        ("worst_z", w.z.into()),
        ("worst_t", w.t.into()),
        ("tolerance", v.tolerance.into()),
        ("residual_pass", pass.to_string().into()),
        ("norm_closed_form", norm_closed.into()),
        ("norm_quadrature", norm_quad.into()),
        ("normalization_pass", norm_pass.to_string().into()),
        ("rotating_coefficients_max_relative", coeff.into()),
    ]);
    let mut out = ok(result, table);
    if !pass {
        out.code = exit::RESIDUAL;
        out.message = Some(format!(
            "max relative residual {} exceeds tolerance {}",
            fmt_f64(rep.max_rel_residual),
            fmt_f64(v.tolerance)
        ));
    } else if !norm_pass {
        out.message = Some(format!("normalization {} differs from 1", fmt_f64(norm_closed)));
    }
    Ok(out)
}

fn expect(cfg: &RunConfig, r: &Resolved, z: f64, t: f64) -> Result<Outcome, CliError> {
    let spec = cfg.state_spec(r)?;
    let wf = build_state(&spec, &r.field, Some(r.branch), &r.frame)?;
    let q = expectations(&wf, z, t, &QuadratureOptions::default())?;
    let closed = massless_expectations_moments(&wf, &r.field, z, t);
    let published = massless_expectations_published(&wf, &r.field, z, t);
    let mut table =
        Table::new(&["quantity", "quadrature", "closed_form", "abs_diff", "published_form", "published_abs_diff"]);
    let qa = q.as_array();
    let ca = closed.map(|c| c.as_array());
    let pa = published.map(|c| c.as_array());
    for (i, label) in Expectations::LABELS.iter().enumerate() {
        let c = ca.map(|a| a[i]);
        let p = pa.map(|a| a[i]);
        table.push(vec![
            (*label).into(),
            qa[i].into(),
            c.into(),
            c.map(|c| (qa[i] - c).abs()).into(),
            p.into(),
            p.map(|p| (qa[i] - p).abs()).into(),
        ]);
    }
    let result = json!({
        "z": z,
        "t": t,
        "family": wf.family,
        "branch": wf.branch,
        "norm": q.norm,
        "nodes": q.nodes,
        "max_abs_diff": closed.map(|c| q.max_abs_diff(&c)),
        "published_max_abs_diff": published.map(|c| q.max_abs_diff(&c)),
        "rows": table.to_json(),
    });
    Ok(ok(result, table))
}

fn sweep(from: f64, to: f64, steps: usize, log: bool) -> Result<Vec<f64>, CliError> {
    if !from.is_finite() || !to.is_finite() || steps == 0 {
        return Err(CliError::new(exit::CONFIG, "scan range must be finite with at least one step"));
    }
    if log && (from <= 0.0 || to <= 0.0) {
        return Err(CliError::new(exit::CONFIG, "geometric scan needs a positive range"));
    }
    if steps == 1 {
        return Ok(vec![from]);
    }
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| {
            let s = i as f64 / last;
            // endpoints exactly as given
            if i == 0 {
                from
            } else if i == steps - 1 {
                to
            } else if log {
                (from.ln() + s * (to.ln() - from.ln())).exp()
            } else {
                from + s * (to - from)
            }
        })
        .collect())
}

fn cubic_row(h: f64, e0: f64, lambda: f64) -> Vec<Cell> {
    let disc = discriminant(h, e0, lambda);
    match characteristic_roots(h, e0, lambda) {
        Ok(roots) => {
            let list: Vec<String> = roots.iter().map(|x| fmt_f64(x.value)).collect();
            let res = roots.iter().map(|x| x.residual.abs()).fold(0.0, f64::max);
            let pole = roots.iter().map(|x| x.pole_distance).fold(f64::INFINITY, f64::min);
            vec![
                h.into(),
                e0.into(),
                lambda.into(),
                disc.into(),
                roots.len().into(),
                list.join(";").into(),
                res.into(),
                pole.into(),
                Cell::Empty,
            ]
        }
        Err(e) => vec![
            h.into(),
            e0.into(),
            lambda.into(),
            disc.into(),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            e.to_string().into(),
        ],
    }
}

fn tau_row(tau: f64, base: &FrameParams, n: i64, omega_si: Option<f64>, seed: u64) -> Vec<Cell> {
    let fp = match FrameParams::natural(tau, base.polarization, base.propagation, base.freq_sign, base.light_sign) {
        Ok(fp) => fp,
        Err(e) => {
            let mut row = vec![tau.into()];
            row.extend(std::iter::repeat_n(Cell::Empty, 11));
            row.push(e.to_string().into());
            return row;
        }
    };
    let c = check_constancy(&fp, SCAN_CONSTANCY_SAMPLES, seed);
    let (gap, err) = match quantization_gap(n, &fp) {
        Ok(g) => (Some(g), Cell::Empty),
        Err(e) => (None, e.to_string().into()),
    };
    let resting = gap.and_then(|g| g.resting);
    let mev = omega_si.zip(resting).map(|(w, e)| e * si::HBAR * w / si::MEV);
    vec![
        tau.into(),
        fp.velocity.into(),
        (fp.velocity.abs() * si::C).into(),
        fp.gamma.into(),
        fp.time_mix.into(),
        gap.and_then(|g| g.rotating).into(),
        resting.into(),
        gap.and_then(|g| g.approx).into(),
        gap.and_then(|g| g.rel_gap).into(),
        mev.into(),
        c.light_max_dev.into(),
        c.freq_max_dev.into(),
        err,
    ]
}

fn n_row(n: i64, fp: &FrameParams) -> Vec<Cell> {
    match quantization_gap(n, fp) {
        Ok(g) => vec![n.into(), g.rotating.into(), g.resting.into(), g.approx.into(), g.rel_gap.into(), Cell::Empty],
        Err(e) => vec![n.into(), Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty, e.to_string().into()],
    }
}

const CUBIC_COLUMNS: [&str; 10] =
    ["index", "h", "e0", "lambda", "discriminant", "root_count", "roots", "max_residual", "min_pole_distance", "error"];
const TAU_COLUMNS: [&str; 14] = [
    "index",
    "tau",
    "velocity_c",
    "speed_m_s",
    "gamma",
    "time_mix",
    "gap_rotating",
    "gap_resting",
    "gap_approx",
    "rel_gap",
    "gap_mev",
    "light_dev",
    "freq_dev",
    "error",
];
const N_COLUMNS: [&str; 7] = ["index", "n", "gap_rotating", "gap_resting", "gap_approx", "rel_gap", "error"];

fn scan(
    cfg: &RunConfig,
    r: &Resolved,
    axis: ScanAxis,
    from: f64,
    to: f64,
    steps: usize,
    log: bool,
) -> Result<Outcome, CliError> {
    let (columns, rows): (&[&str], Vec<Vec<Cell>>) = match axis {
        ScanAxis::N => {
            if !from.is_finite() || !to.is_finite() {
                return Err(CliError::new(exit::CONFIG, "scan range must be finite"));
            }
            let (a, b) = (from.round() as i64, to.round() as i64);
            let ns: Vec<i64> = if a <= b { (a..=b).collect() } else { (b..=a).rev().collect() };
            (&N_COLUMNS, ns.par_iter().map(|&n| n_row(n, &r.frame)).collect())
        }
        ScanAxis::Tau => {
            let xs = sweep(from, to, steps, log)?;
            let n = gap_winding(cfg);
            let seed = cfg.verify.seed;
            (&TAU_COLUMNS, xs.par_iter().map(|&x| tau_row(x, &r.frame, n, r.omega_si, seed)).collect())
        }
        ScanAxis::H | ScanAxis::E0 | ScanAxis::Lambda => {
            let xs = sweep(from, to, steps, log)?;
            let (h, e0, lambda) = cubic_coefficients(cfg, r)?;
            let rows = xs
                .par_iter()
                .map(|&x| match axis {
                    ScanAxis::H => cubic_row(x, e0, lambda),
                    ScanAxis::E0 => cubic_row(h, x, lambda),
                    _ => cubic_row(h, e0, x),
                })
                .collect();
            (&CUBIC_COLUMNS, rows)
        }
    };
    let mut table = Table::new(columns);
    for (i, mut row) in rows.into_iter().enumerate() {
        row.insert(0, i.into());
        table.push(row);
    }
    let axis_name = match axis {
        ScanAxis::H => "h",
        ScanAxis::E0 => "e0",
        ScanAxis::Lambda => "lambda",
        ScanAxis::Tau => "tau",
        ScanAxis::N => "n",
    };
    let failed = table.rows.iter().filter(|r| !matches!(r.last(), Some(Cell::Empty))).count();
    let result = json!({
        "axis": axis_name,
        "from": from,
        "to": to,
        "steps": table.rows.len(),
        "log": log,
        "failed_rows": failed,
        "rows": table.to_json(),
    });
    Ok(ok(result, table))
}

fn audit(cfg: &RunConfig, r: &Resolved, points: usize) -> Result<Outcome, CliError> {
    let spec = cfg.state_spec(r)?;
    let rep = convention_audit(&spec, &r.field, r.frame.tau, points, cfg.verify.seed);
    let mut table = Table::new(&[
        "rank",
        "charge",
        "branch",
        "polarization",
        "propagation",
        "freq_sign",
        "light_sign",
        "max_rel_residual",
        "rejected",
    ]);
    for (i, e) in rep.entries.iter().enumerate() {
        let c = e.choice;
        table.push(vec![
            i.into(),
            sign_cell(c.charge),
            branch_name(c.branch).into(),
            sign_cell(c.polarization),
            sign_cell(c.propagation),
            sign_cell(c.freq_sign),
            sign_cell(c.light_sign),
            e.max_rel_residual.into(),
            e.rejected.clone().map_or(Cell::Empty, Cell::S),
        ]);
    }
    let found = rep.found;
    let result = serde_json::to_value(&rep).map_err(|e| CliError::new(exit::IO, e.to_string()))?;
    let mut out = ok(result, table);
    if !found {
        out.code = exit::RESIDUAL;
        out.message = Some(format!("no convention reaches the audit threshold {}", fmt_f64(rep.threshold)));
    }
    Ok(out)
}
