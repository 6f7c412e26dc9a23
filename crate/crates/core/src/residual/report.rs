//! Residual verification over seeded batches of events.

use super::derivative::{fd_step, DerivativeError, Point, Scheme};
use super::dirac_residual;
use crate::field::FieldConfig;
use crate::modes::{Axis, WaveFunctionModel};
use crate::sign::Sign;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub points: usize,
    pub seed: u64,
    pub scheme: Scheme,
    /// Sign multiplying the potential in the kinetic momentum.
    pub coupling: Sign,
    /// `z` and `t` are drawn from `[−extent, extent]`.
    pub extent: f64,
    /// Transverse sampling radius in envelope widths `1/√d`.
    pub radius: f64,
    pub keep_records: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            points: 1000,
            seed: 0,
            scheme: Scheme::Analytic,
            coupling: Sign::Plus,
            extent: 10.0,
            radius: 4.0,
            keep_records: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub point: Point,
    pub rel_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub max_rel_residual: f64,
    pub mean_rel_residual: f64,
    pub worst_point: Point,
    pub scheme: Scheme,
    /// Finite-difference step along `x` at the worst point; `0` for analytic.
    pub step: f64,
    pub points_evaluated: usize,
    pub seed: u64,
    /// Denominator of the relative residual.
    pub scale_convention: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub records: Option<Vec<PointRecord>>,
}

/// Events within `radius` envelope widths of the state's centroid, `z` and `t`
/// uniform in `[−extent, extent]`. Deterministic in `seed`.
pub fn sample_points(wf: &WaveFunctionModel, opts: &VerifyOptions) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let width = 1.0 / wf.envelope.d.sqrt();
    (0..opts.points)
        .map(|_| {
            let z = rng.gen_range(-opts.extent..=opts.extent);
            let t = rng.gen_range(-opts.extent..=opts.extent);
            let (cx, cy) = wf.lab_center(wf.theta(z, t));
            // uniform in the disk
            let r = opts.radius * width * rng.gen::<f64>().sqrt();
            let a = rng.gen_range(0.0..std::f64::consts::TAU);
            Point::new(cx + r * a.cos(), cy + r * a.sin(), z, t)
        })
        .collect()
}

pub fn verify(
    wf: &WaveFunctionModel,
    cfg: &FieldConfig,
    opts: &VerifyOptions,
) -> Result<ResidualReport, DerivativeError> {
    let pts = sample_points(wf, opts);
    let rel: Vec<f64> = pts
        .par_iter()
        .map(|p| dirac_residual(wf, cfg, p, opts.scheme, opts.coupling).map(|s| s.relative))
        .collect::<Result<_, _>>()?;
    let mut max = 0.0;
    let mut worst = 0;
    let mut sum = 0.0;
    for (i, &r) in rel.iter().enumerate() {
        // NaN counts as a failure
        let r = if r.is_nan() { f64::INFINITY } else { r };
        sum += r;
        if r > max || i == 0 {
            max = r;
            worst = i;
        }
    }
    let n = pts.len().max(1);
    let worst_point = pts.get(worst).copied().unwrap_or(Point::new(0.0, 0.0, 0.0, 0.0));
    let step = if pts.is_empty() { 0.0 } else { fd_step(wf, &worst_point, Axis::X, opts.scheme)? };
    let records = opts
        .keep_records
        .then(|| pts.iter().zip(&rel).map(|(p, r)| PointRecord { point: *p, rel_residual: *r }).collect());
    Ok(ResidualReport {
        max_rel_residual: max,
        mean_rel_residual: sum / n as f64,
        worst_point,
        scheme: opts.scheme,
        step,
        points_evaluated: pts.len(),
        seed: opts.seed,
        scale_convention: "|R| / (|psi| (|E| + |p| + m + 1)), hbar = c = Omega = 1".to_string(),
        records,
    })
}
