//! Deterministic sweep execution: one result row per (law, size[, depth])
//! point, each with its own hash-derived random stream so results do not
//! depend on execution order or thread count.

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::config::{SweepExperiment, SweepPlan, VisibilityEstimator};
use crate::error::{Error, Result};
use crate::noise::{noise_probability, NoiseSpec};
use crate::protocols::{run_branch, run_ghz_parity, run_grover, visibility_minmax, ExperimentKind};

/// One sweep point's outcome, as persisted to CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub experiment: String,
    pub law: String,
    pub size: usize,
    pub iterations: Option<usize>,
    pub p_effective: f64,
    pub metric: f64,
    pub stderr: f64,
    pub shots: usize,
    pub seed: u64,
    pub backend: String,
}

impl ResultRow {
    pub fn validate(&self) -> Result<()> {
        if !(-0.01..=1.01).contains(&self.metric) {
            return Err(Error::Parameter {
                name: "metric",
                value: self.metric,
                min: -0.01,
                max: 1.01,
            });
        }
        if self.stderr < 0.0 {
            return Err(Error::Parameter {
                name: "stderr",
                value: self.stderr,
                min: 0.0,
                max: f64::INFINITY,
            });
        }
        Ok(())
    }
}

/// Stable per-point stream seed: a SHA-256 digest of the labeled sweep
/// coordinates, truncated to 64 bits. Adding or reordering points never
/// changes any other point's stream.
pub fn derive_seed(
    master: u64,
    experiment: &str,
    law: &str,
    size: usize,
    iterations: Option<usize>,
) -> u64 {
    let coordinate = match iterations {
        Some(t) => format!("{master}:{experiment}:{law}:{size}:{t}"),
        None => format!("{master}:{experiment}:{law}:{size}:-"),
    };
    let digest = Sha256::digest(coordinate.as_bytes());
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

/// Evaluate every point of the plan, in parallel, and return rows sorted
/// by (law, size, iterations).
pub fn run_sweep(plan: &SweepPlan) -> Result<Vec<ResultRow>> {
    let points = plan.points();
    if points.is_empty() {
        return Err(Error::EmptyInput { what: "sweep plan" });
    }
    let mut rows = points
        .par_iter()
        .map(|&(noise, kind)| {
            evaluate_point(plan, noise, kind).map_err(|e| Error::SweepPoint {
                label: point_label(plan.experiment, &noise, kind),
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<ResultRow>>>()?;
    rows.sort_by(|a, b| (&a.law, a.size, a.iterations).cmp(&(&b.law, b.size, b.iterations)));
    Ok(rows)
}

fn point_label(experiment: SweepExperiment, noise: &NoiseSpec, kind: ExperimentKind) -> String {
    match kind {
        ExperimentKind::Grover { n, iterations } => {
            format!(
                "{} law={} n={} t={}",
                experiment.label(),
                noise.law.label(),
                n,
                iterations
            )
        }
        _ => format!(
            "{} law={} size={}",
            experiment.label(),
            noise.law.label(),
            kind.size()
        ),
    }
}

fn evaluate_point(plan: &SweepPlan, noise: NoiseSpec, kind: ExperimentKind) -> Result<ResultRow> {
    let size = kind.size();
    let iterations = match kind {
        ExperimentKind::Grover { iterations, .. } => Some(iterations),
        _ => None,
    };
    let seed = derive_seed(plan.seed, kind.label(), noise.law.label(), size, iterations);
    let config = plan.config_for(noise, kind, seed);
    let (metric, stderr) = match kind {
        ExperimentKind::GhzParity { .. } => {
            let (curve, vis) = run_ghz_parity(&config)?;
            match plan.estimator {
                VisibilityEstimator::Fourier => (vis.value, vis.stderr),
                VisibilityEstimator::MinMax => {
                    let v = visibility_minmax(&curve)?;
                    (v.value, v.stderr)
                }
            }
        }
        ExperimentKind::BranchMass { .. } => {
            let (curve, vis) = run_branch(&config)?;
            match plan.estimator {
                VisibilityEstimator::Fourier => (vis.value, vis.stderr),
                VisibilityEstimator::MinMax => {
                    let v = visibility_minmax(&curve)?;
                    (v.value, v.stderr)
                }
            }
        }
        ExperimentKind::Grover { .. } => {
            let success = run_grover(&config)?;
            (success.value, success.stderr)
        }
    };
    let row = ResultRow {
        experiment: kind.label().to_string(),
        law: noise.law.label().to_string(),
        size,
        iterations,
        p_effective: noise_probability(&noise.law, size)?,
        metric,
        stderr,
        shots: plan.shots,
        seed,
        backend: config.backend.label().to_string(),
    };
    row.validate()?;
    Ok(row)
}
