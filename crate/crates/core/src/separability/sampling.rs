//! Seeded random-witness campaigns.
//!
//! Trial `t` (1-based) draws its operator from a ChaCha20 generator seeded with
//! the master seed and set to stream `t`, so every trial is reproducible on its
//! own. Trials are evaluated in fixed-size chunks in parallel and reduced in
//! trial order, which makes the report independent of the thread count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::criterion::{PreparedState, ViolationTolerance, WitnessTestResult};
use crate::error::{bail_arg, Result};
use crate::linalg::{stream_rng, DimSpec};
use crate::states::DensityMatrix;
use crate::witness::{semi_random_bipartite, semi_random_multipartite, WitnessLabel, WitnessOperator};

const CHUNK: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Entangled,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectionConfig {
    pub trials: usize,
    pub master_seed: u64,
    pub tolerance: ViolationTolerance,
    /// Run every trial instead of stopping at the first violation.
    pub full_stats: bool,
}

impl Default for DetectionConfig {
    fn default() -> Self {
        DetectionConfig {
            trials: 1000,
            master_seed: 0,
            tolerance: ViolationTolerance::default(),
            full_stats: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub state_id: String,
    pub dims: Vec<usize>,
    /// Trials requested.
    pub trials: usize,
    /// Trials actually evaluated (smaller than `trials` after an early exit).
    pub trials_run: usize,
    pub violations: usize,
    pub first_violation_trial: Option<usize>,
    pub max_margin: f64,
    /// Largest `margin / λ₁` over the evaluated trials.
    pub max_relative_margin: f64,
    pub verdict: Verdict,
    pub master_seed: u64,
    pub tolerance: ViolationTolerance,
    pub full_stats: bool,
}

/// Semi-random operator for trial `t` (1-based): bipartite form for two
/// parties, otherwise the single-cut form with `k = (t - 1) mod N`.
pub fn trial_witness(dims: &DimSpec, master_seed: u64, trial: usize) -> Result<WitnessOperator> {
    let mut rng = stream_rng(master_seed, trial as u64);
    let n = dims.parties();
    let (op, cut) = if n == 2 {
        (semi_random_bipartite(dims, &mut rng)?, None)
    } else {
        let k = (trial - 1) % n;
        (semi_random_multipartite(dims, k, &mut rng)?, Some(k + 1))
    };
    Ok(op.with_label(WitnessLabel::SemiRandom {
        cut,
        seed: Some(master_seed),
        trial: Some(trial as u64),
    }))
}

pub fn run_trial(prepared: &PreparedState, master_seed: u64, trial: usize, tol: &ViolationTolerance) -> Result<WitnessTestResult> {
    let o = trial_witness(prepared.rho().dims(), master_seed, trial)?;
    prepared.witness_test(&o, tol)
}

/// Tests `trials` semi-random witnesses against `rho`.
pub fn sample_witness_detection(rho: &DensityMatrix, state_id: &str, config: &DetectionConfig) -> Result<DetectionReport> {
    if config.trials == 0 {
        bail_arg!("at least one trial is required");
    }
    rho.dims().require_witness_compatible()?;
    let prepared = PreparedState::new(rho)?;

    let mut trials_run = 0usize;
    let mut violations = 0usize;
    let mut first = None;
    let mut max_margin = f64::NEG_INFINITY;
    let mut max_rel = f64::NEG_INFINITY;

    let mut start = 1usize;
    'chunks: while start <= config.trials {
        let end = (start + CHUNK - 1).min(config.trials);
        let results: Vec<Result<WitnessTestResult>> = (start..=end)
            .into_par_iter()
            .map(|t| run_trial(&prepared, config.master_seed, t, &config.tolerance))
            .collect();
        for (offset, r) in results.into_iter().enumerate() {
            let r = r?;
            let t = start + offset;
            trials_run = t;
            max_margin = max_margin.max(r.margin);
            if r.lhs > 0.0 {
                max_rel = max_rel.max(r.margin / r.lhs);
            }
            if r.violated {
                violations += 1;
                first.get_or_insert(t);
                if !config.full_stats {
                    break 'chunks;
                }
            }
        }
        start = end + 1;
    }

    Ok(DetectionReport {
        state_id: state_id.to_string(),
        dims: rho.dims().dims().to_vec(),
        trials: config.trials,
        trials_run,
        violations,
        first_violation_trial: first,
        max_margin,
        max_relative_margin: if max_rel.is_finite() { max_rel } else { 0.0 },
        verdict: if violations > 0 { Verdict::Entangled } else { Verdict::Inconclusive },
        master_seed: config.master_seed,
        tolerance: config.tolerance,
        full_stats: config.full_stats,
    })
}
