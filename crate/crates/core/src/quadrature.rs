//! Adaptive tensor-product Gauss–Legendre quadrature on a square.
//!
//! The node count is doubled until every component of the estimate changes by
//! less than the absolute tolerance.

use gauss_quad::GaussLegendre;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureOptions {
    pub start_nodes: usize,
    pub max_nodes: usize,
    pub abs_tol: f64,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions { start_nodes: 16, max_nodes: 512, abs_tol: 1e-10 }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuadratureError {
    #[error("quadrature did not converge: change {change:e} > {tol:e} at {nodes} nodes per axis")]
    NonConvergence { change: f64, tol: f64, nodes: usize, estimate: Vec<f64> },
    #[error("invalid quadrature box or options")]
    BadInput,
    #[error("integrand is not finite")]
    NonFinite,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate<const K: usize> {
    #[serde(with = "serde_arrays")]
    pub value: [f64; K],
    /// Largest component change at the final doubling.
    pub error: f64,
    pub nodes: usize,
}

mod serde_arrays {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer, const K: usize>(v: &[f64; K], s: S) -> Result<S::Ok, S::Error> {
        v.as_slice().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>, const K: usize>(d: D) -> Result<[f64; K], D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        v.try_into().map_err(|_| serde::de::Error::custom("wrong array length"))
    }
}

fn rule(half: f64, n: usize) -> Vec<(f64, f64)> {
    let gl = GaussLegendre::new(n).expect("n >= 2");
    gl.as_node_weight_pairs().iter().map(|&(x, w)| (half * x, half * w)).collect()
}

fn single<const K: usize, F>(f: &F, center: (f64, f64), half: f64, n: usize) -> [f64; K]
where
    F: Fn(f64, f64) -> [f64; K] + Sync,
{
    let r = rule(half, n);
    let rows: Vec<[f64; K]> = r
        .par_iter()
        .map(|&(x, wx)| {
            let mut acc = [0.0; K];
            for &(y, wy) in &r {
                let v = f(center.0 + x, center.1 + y);
                for k in 0..K {
                    acc[k] += wy * v[k];
                }
            }
            acc.map(|a| a * wx)
        })
        .collect();
    // rows are summed in order so the result does not depend on the thread count
    let mut total = [0.0; K];
    for row in rows {
        for k in 0..K {
            total[k] += row[k];
        }
    }
    total
}

/// `∫∫ f(x, y) dx dy` over `[cx − L, cx + L] × [cy − L, cy + L]`.
pub fn integrate_square<const K: usize, F>(
    f: F,
    center: (f64, f64),
    half_width: f64,
    opts: &QuadratureOptions,
) -> Result<Estimate<K>, QuadratureError>
where
    F: Fn(f64, f64) -> [f64; K] + Sync,
{
    if !half_width.is_finite() || half_width <= 0.0 || opts.start_nodes < 2 || opts.max_nodes < opts.start_nodes {
        return Err(QuadratureError::BadInput);
    }
    let mut n = opts.start_nodes;
    let mut prev = single(&f, center, half_width, n);
    if prev.iter().any(|v| !v.is_finite()) {
        return Err(QuadratureError::NonFinite);
    }
    loop {
        let next_n = 2 * n;
        if next_n > opts.max_nodes {
            let change = f64::INFINITY;
            return Err(QuadratureError::NonConvergence {
                change,
                tol: opts.abs_tol,
                nodes: n,
                estimate: prev.to_vec(),
            });
        }
        let next = single(&f, center, half_width, next_n);
        if next.iter().any(|v| !v.is_finite()) {
            return Err(QuadratureError::NonFinite);
        }
        let change = prev.iter().zip(&next).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if change < opts.abs_tol {
            return Ok(Estimate { value: next, error: change, nodes: next_n });
        }
        if 2 * next_n > opts.max_nodes {
            return Err(QuadratureError::NonConvergence {
                change,
                tol: opts.abs_tol,
                nodes: next_n,
                estimate: next.to_vec(),
            });
        }
        prev = next;
        n = next_n;
    }
}
