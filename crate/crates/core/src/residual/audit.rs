//! Exhaustive enumeration of the discrete sign conventions.
//!
//! Each choice builds the state under its own signs and measures it against the
//! Dirac equation of the given field with the chosen coupling sign.

use super::coeffs::{rotating_coefficients, CoefficientReport};
use super::derivative::Scheme;
use super::report::{verify, VerifyOptions};
use crate::field::{Branch, FieldConfig};
use crate::frame::FrameParams;
use crate::modes::{build_state, Prefactor, StateSpec};
use crate::sign::Sign;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Residual below which a convention counts as annihilating the Dirac operator.
pub const AUDIT_PASS: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConventionChoice {
    /// Sign multiplying the potential in the Dirac operator.
    pub charge: Sign,
    pub branch: Branch,
    pub polarization: Sign,
    pub propagation: Sign,
    pub freq_sign: Sign,
    pub light_sign: Sign,
    /// Massless prefactor taken literally, without the exponential.
    pub strict_prefactor: bool,
}

impl ConventionChoice {
    /// All 64 sign combinations with the exponential prefactor.
    pub fn enumerate() -> Vec<ConventionChoice> {
        let mut out = Vec::with_capacity(64);
        for charge in Sign::BOTH {
            for branch in Branch::BOTH {
                for polarization in Sign::BOTH {
                    for propagation in Sign::BOTH {
                        for freq_sign in Sign::BOTH {
                            for light_sign in Sign::BOTH {
                                out.push(ConventionChoice {
                                    charge,
                                    branch,
                                    polarization,
                                    propagation,
                                    freq_sign,
                                    light_sign,
                                    strict_prefactor: false,
                                });
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditEntry {
    pub choice: ConventionChoice,
    /// `None` when the state cannot be built under this choice.
    pub max_rel_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rejected: Option<String>,
}

/// The literal prefactor changes the normalization but not the relative residual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrefactorCheck {
    pub choice: ConventionChoice,
    pub norm_exponential: f64,
    pub norm_literal: f64,
    pub residual_exponential: f64,
    pub residual_literal: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub spec: StateSpec,
    pub threshold: f64,
    pub points: usize,
    pub seed: u64,
    /// Sorted by residual, rejected choices last.
    pub entries: Vec<AuditEntry>,
    pub passing: usize,
    /// `false` when no choice reaches the threshold.
    pub found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prefactor: Option<PrefactorCheck>,
    /// Co-rotating residual coefficients of the best massive candidate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<CoefficientReport>,
}

fn evaluate(
    spec: &StateSpec,
    cfg: &FieldConfig,
    tau: f64,
    choice: &ConventionChoice,
    opts: &VerifyOptions,
) -> Result<(f64, f64, crate::modes::WaveFunctionModel, FieldConfig), String> {
    let mcfg = FieldConfig { polarization: choice.polarization, propagation: choice.propagation, ..*cfg };
    let fp = FrameParams::natural(tau, choice.polarization, choice.propagation, choice.freq_sign, choice.light_sign)
        .map_err(|e| e.to_string())?;
    let mut s = *spec;
    s.prefactor = if choice.strict_prefactor { Prefactor::Literal } else { Prefactor::Exponential };
    let wf = build_state(&s, &mcfg, Some(choice.branch), &fp).map_err(|e| e.to_string())?;
    let o = VerifyOptions { coupling: choice.charge, ..*opts };
    let rep = verify(&wf, cfg, &o).map_err(|e| e.to_string())?;
    Ok((rep.max_rel_residual, wf.norm_sqr_closed_form(), wf, mcfg))
}

/// Rank every convention by the largest relative Dirac residual over a seeded
/// batch of `points` events.
pub fn convention_audit(spec: &StateSpec, cfg: &FieldConfig, tau: f64, points: usize, seed: u64) -> AuditReport {
    let opts = VerifyOptions { points, seed, scheme: Scheme::Analytic, ..Default::default() };
    let choices = ConventionChoice::enumerate();
    let results: Vec<_> = choices.par_iter().map(|c| evaluate(spec, cfg, tau, c, &opts)).collect();
    let mut entries: Vec<AuditEntry> = choices
        .iter()
        .zip(&results)
        .map(|(c, r)| match r {
            Ok((res, _, _, _)) => AuditEntry { choice: *c, max_rel_residual: Some(*res), rejected: None },
            Err(e) => AuditEntry { choice: *c, max_rel_residual: None, rejected: Some(e.clone()) },
        })
        .collect();
    let key = |e: &AuditEntry| {
        e.max_rel_residual.map(|r| if r.is_nan() { f64::INFINITY } else { r }).unwrap_or(f64::INFINITY)
    };
    entries.sort_by(|a, b| key(a).total_cmp(&key(b)).then((a.rejected.is_some()).cmp(&b.rejected.is_some())));
    let passing = entries.iter().filter(|e| e.max_rel_residual.is_some_and(|r| r <= AUDIT_PASS)).count();

    let best = entries.first().filter(|e| e.max_rel_residual.is_some()).map(|e| e.choice);
    let mut prefactor = None;
    let mut coefficients = None;
    if let Some(choice) = best {
        if spec.family.is_massless() {
            let strict = ConventionChoice { strict_prefactor: true, ..choice };
            if let (Ok(a), Ok(b)) = (evaluate(spec, cfg, tau, &choice, &opts), evaluate(spec, cfg, tau, &strict, &opts))
            {
                prefactor = Some(PrefactorCheck {
                    choice,
                    norm_exponential: a.1,
                    norm_literal: b.1,
                    residual_exponential: a.0,
                    residual_literal: b.0,
                });
            }
        } else if let Ok((_, _, wf, mcfg)) = evaluate(spec, cfg, tau, &choice, &opts) {
            coefficients = Some(rotating_coefficients(&wf, &mcfg));
        }
    }
    AuditReport {
        spec: *spec,
        threshold: AUDIT_PASS,
        points,
        seed,
        entries,
        passing,
        found: passing > 0,
        prefactor,
        coefficients,
    }
}
