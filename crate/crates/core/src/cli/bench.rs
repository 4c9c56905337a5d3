//! Trials-to-detection benchmark over a one-parameter family of states.
//!
//! For every grid value the detector is run `reps` times with independent
//! master seeds; the first violating trial is recorded, and repetitions that
//! never violate are censored at `trials + 1`.

use std::fmt::Write as _;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{bail_arg, Result};
use crate::linalg::{random_unitary, stream_rng, DimSpec};
use crate::separability::{
    ppt_oracle, sample_witness_detection, wootters_oracle, DetectionConfig, ViolationTolerance,
};
use crate::states::{isotropic, noisy, werner_2qubit, DensityMatrix, PureState};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum BenchFamily {
    /// Two-qubit Werner state, parameter `p`.
    Werner,
    /// `d ⊗ d` isotropic state, parameter `p`.
    Isotropic { d: usize },
    /// `v |ψ_s⟩⟨ψ_s| + (1 - v) I/d²` with `ψ_s ∝ |00⟩ + s Σ_{i≥1} |ii⟩` rotated
    /// by a random local unitary per repetition, parameter `s ∈ [0, 1]`.
    Schmidt { d: usize, visibility: f64 },
}

impl BenchFamily {
    pub fn name(&self) -> &'static str {
        match self {
            BenchFamily::Werner => "werner",
            BenchFamily::Isotropic { .. } => "isotropic",
            BenchFamily::Schmidt { .. } => "schmidt",
        }
    }

    /// Name of the entanglement measure reported in the `oracle` column.
    pub fn oracle_name(&self) -> &'static str {
        match self {
            BenchFamily::Werner => "wootters_concurrence",
            _ => "negativity",
        }
    }

    fn state<R: Rng + ?Sized>(&self, param: f64, rng: &mut R) -> Result<DensityMatrix> {
        match *self {
            BenchFamily::Werner => werner_2qubit(param),
            BenchFamily::Isotropic { d } => isotropic(d, param),
            BenchFamily::Schmidt { d, visibility } => {
                if !(0.0..=1.0).contains(&param) {
                    bail_arg!("Schmidt parameter must lie in [0, 1], got {param}");
                }
                let dims = DimSpec::new(vec![d, d])?;
                let mut v = vec![Complex64::new(0.0, 0.0); d * d];
                for i in 0..d {
                    v[i * d + i] = Complex64::new(if i == 0 { 1.0 } else { param }, 0.0);
                }
                let psi = PureState::from_coeffs(dims, v)?;
                let us = [random_unitary(d, rng), random_unitary(d, rng)];
                noisy(&psi.apply_local_unitary(&us)?, visibility)
            }
        }
    }

    fn oracle(&self, rho: &DensityMatrix) -> Result<f64> {
        match self {
            BenchFamily::Werner => wootters_oracle(rho),
            _ => Ok(ppt_oracle(rho, 1)?.negativity),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub family: BenchFamily,
    pub grid: Vec<f64>,
    pub trials: usize,
    pub reps: usize,
    pub seed: u64,
    pub tolerance: ViolationTolerance,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub param: f64,
    pub oracle: f64,
    pub median_first_violation: f64,
    pub mean_first_violation: f64,
    pub violation_rate: f64,
    pub censored: usize,
    /// Per-repetition first violating trial, `trials + 1` when censored.
    #[serde(skip)]
    pub first_violations: Vec<usize>,
}

fn median(values: &[usize]) -> f64 {
    let mut v = values.to_vec();
    v.sort_unstable();
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2] as f64
    } else {
        (v[n / 2 - 1] + v[n / 2]) as f64 / 2.0
    }
}

pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    if cfg.grid.is_empty() {
        bail_arg!("parameter grid is empty");
    }
    if cfg.reps == 0 || cfg.trials == 0 {
        bail_arg!("reps and trials must be positive");
    }
    let mut rows = Vec::with_capacity(cfg.grid.len());
    for (index, &param) in cfg.grid.iter().enumerate() {
        let mut rng = stream_rng(cfg.seed, index as u64);
        let mut firsts = Vec::with_capacity(cfg.reps);
        let mut oracle_sum = 0.0;
        for _ in 0..cfg.reps {
            let rho = cfg.family.state(param, &mut rng)?;
            oracle_sum += cfg.family.oracle(&rho)?;
            let det = DetectionConfig {
                trials: cfg.trials,
                master_seed: rng.random(),
                tolerance: cfg.tolerance,
                full_stats: false,
            };
            let report = sample_witness_detection(&rho, cfg.family.name(), &det)?;
            firsts.push(report.first_violation_trial.unwrap_or(cfg.trials + 1));
        }
        let censored = firsts.iter().filter(|&&t| t > cfg.trials).count();
        rows.push(BenchRow {
            param,
            oracle: oracle_sum / cfg.reps as f64,
            median_first_violation: median(&firsts),
            mean_first_violation: firsts.iter().sum::<usize>() as f64 / cfg.reps as f64,
            violation_rate: (cfg.reps - censored) as f64 / cfg.reps as f64,
            censored,
            first_violations: firsts,
        });
    }
    Ok(rows)
}

pub const CSV_HEADER: &str = "param,oracle,median_first_violation,mean_first_violation,violation_rate,censored";

pub fn rows_to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.param, r.oracle, r.median_first_violation, r.mean_first_violation, r.violation_rate, r.censored
        );
    }
    out
}

/// Parses `a,b,c` or `start:stop:step` (inclusive, rounded to the step).
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| crate::Error::Argument(format!("bad grid value '{s}'")))
    };
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop, step) = (parse(start)?, parse(stop)?, parse(step)?);
            if step <= 0.0 || stop < start {
                bail_arg!("grid range needs stop >= start and a positive step");
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize;
            Ok((0..=n).map(|i| start + i as f64 * step).map(|x| (x * 1e12).round() / 1e12).collect())
        }
        [list] => list.split(',').map(parse).collect(),
        _ => bail_arg!("grid must be a comma list or start:stop:step"),
    }
}
