//! Sweep-plan construction from the flat key-value config format.
//!
//! Schema (whitespace-separated `key=value` pairs, `#` starts a comment):
//! experiment, law, k, alpha, p0, sizes, iterations, shots, phase_points,
//! seed, backend. Ranges are written `2..8` (inclusive) or `3,4,5`.

use crate::error::{Error, Result};
use crate::noise::{
    NoiseLaw, NoisePlacement, NoiseScope, NoiseSpec, DEFAULT_ALPHA, DEFAULT_K, DEFAULT_P0,
};
use crate::protocols::{Backend, ExperimentConfig, ExperimentKind};

pub const DEFAULT_SHOTS: usize = 2000;
pub const DEFAULT_PHASE_POINTS: usize = 64;
pub const DEFAULT_SEED: u64 = 42;

/// Which experiment a sweep runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepExperiment {
    Ghz,
    Branch,
    Grover,
}

impl SweepExperiment {
    pub fn label(&self) -> &'static str {
        match self {
            SweepExperiment::Ghz => "ghz",
            SweepExperiment::Branch => "branch",
            SweepExperiment::Grover => "grover",
        }
    }
}

/// How sweep rows turn a parity curve into a visibility number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VisibilityEstimator {
    /// Fourier magnitude at the known harmonic.
    #[default]
    Fourier,
    /// Half the peak-to-peak range; biased upward under shot noise.
    MinMax,
}

/// A validated sweep: the experiment grid, the noise laws to compare, and
/// the sampling parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPlan {
    pub experiment: SweepExperiment,
    pub sizes: Vec<usize>,
    /// Grover circuit depths; empty for the other experiments.
    pub iterations: Vec<usize>,
    pub laws: Vec<NoiseSpec>,
    pub shots: usize,
    pub phase_points: usize,
    pub seed: u64,
    pub backend: Backend,
    pub estimator: VisibilityEstimator,
}

impl SweepPlan {
    /// One experiment configuration per (law, size[, iterations]) point,
    /// in deterministic (law label, size, iterations) order. Seeds are
    /// derived per point by the sweep runner.
    pub fn points(&self) -> Vec<(NoiseSpec, ExperimentKind)> {
        let mut laws = self.laws.clone();
        laws.sort_by_key(|spec| spec.law.label());
        let mut out = Vec::new();
        for law in &laws {
            for &size in &self.sizes {
                match self.experiment {
                    SweepExperiment::Ghz => {
                        out.push((*law, ExperimentKind::GhzParity { n: size }));
                    }
                    SweepExperiment::Branch => {
                        out.push((*law, ExperimentKind::BranchMass { m: size }));
                    }
                    SweepExperiment::Grover => {
                        for &t in &self.iterations {
                            out.push((
                                *law,
                                ExperimentKind::Grover {
                                    n: size,
                                    iterations: t,
                                },
                            ));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn config_for(
        &self,
        noise: NoiseSpec,
        kind: ExperimentKind,
        seed: u64,
    ) -> ExperimentConfig {
        ExperimentConfig {
            kind,
            noise,
            phase_points: self.phase_points,
            shots: self.shots,
            seed,
            backend: self.backend,
        }
    }
}

/// Parse the flat key-value text into a validated plan with defaults
/// filled in (power law k=0.02 alpha=2.0 against a constant p0=0.08
/// baseline, 2000 shots, 64 phase points, trajectory backend).
pub fn parse_config(text: &str) -> Result<SweepPlan> {
    parse_pairs(&tokenize(text)?)
}

/// Split config text into key-value pairs; `#` comments run to end of line.
pub fn tokenize(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("");
        for token in line.split_whitespace() {
            let Some((key, value)) = token.split_once('=') else {
                return Err(Error::config(token, "expected key=value"));
            };
            if key.is_empty() || value.is_empty() {
                return Err(Error::config(token, "expected key=value"));
            }
            pairs.push((key.to_string(), value.to_string()));
        }
    }
    Ok(pairs)
}

/// Build a plan from key-value pairs; later pairs override earlier ones,
/// which is how CLI flags win over config-file entries.
pub fn parse_pairs(pairs: &[(String, String)]) -> Result<SweepPlan> {
    let mut experiment = None;
    let mut law_name: Option<String> = None;
    let mut k = DEFAULT_K;
    let mut alpha = DEFAULT_ALPHA;
    let mut p0 = DEFAULT_P0;
    let mut sizes: Option<Vec<usize>> = None;
    let mut iterations: Option<Vec<usize>> = None;
    let mut shots = DEFAULT_SHOTS;
    let mut phase_points = DEFAULT_PHASE_POINTS;
    let mut seed = DEFAULT_SEED;
    let mut backend = Backend::Trajectory;

    for (key, value) in pairs {
        match key.as_str() {
            "experiment" => {
                experiment = Some(match value.as_str() {
                    "ghz" => SweepExperiment::Ghz,
                    "branch" => SweepExperiment::Branch,
                    "grover" => SweepExperiment::Grover,
                    other => {
                        return Err(Error::config(
                            "experiment",
                            format!(
                                "unknown experiment '{other}' (expected ghz, branch, or grover)"
                            ),
                        ))
                    }
                });
            }
            "law" => law_name = Some(value.clone()),
            "k" => k = parse_number(key, value)?,
            "alpha" => alpha = parse_number(key, value)?,
            "p0" => p0 = parse_number(key, value)?,
            "sizes" => sizes = Some(parse_counts(key, value)?),
            "iterations" => iterations = Some(parse_counts(key, value)?),
            "shots" => shots = parse_count(key, value)?,
            "phase_points" => phase_points = parse_count(key, value)?,
            "seed" => {
                seed = value
                    .parse::<u64>()
                    .map_err(|_| Error::config(key, format!("'{value}' is not a 64-bit seed")))?;
            }
            "backend" => {
                backend = match value.as_str() {
                    "trajectory" => Backend::Trajectory,
                    "exact" => Backend::Exact,
                    other => {
                        return Err(Error::config(
                            "backend",
                            format!("unknown backend '{other}' (expected trajectory or exact)"),
                        ))
                    }
                };
            }
            other => return Err(Error::config(other, "unknown key")),
        }
    }

    let experiment = experiment.ok_or_else(|| Error::config("experiment", "missing"))?;

    if !(0.0..=0.5).contains(&p0) {
        return Err(Error::config("p0", format!("{p0} outside [0, 0.5]")));
    }
    if !k.is_finite() || k < 0.0 {
        return Err(Error::config(
            "k",
            format!("{k} is not a nonnegative strength"),
        ));
    }
    if !alpha.is_finite() {
        return Err(Error::config(
            "alpha",
            format!("{alpha} is not a finite exponent"),
        ));
    }

    // The selected law is compared against the constant baseline; choosing
    // the constant law runs the baseline series alone.
    let constant = NoiseLaw::Constant { p0 };
    let mass_law = match law_name.as_deref() {
        None | Some("power") => Some(NoiseLaw::PowerLaw { k, alpha }),
        Some("exp") => Some(NoiseLaw::ExpSaturating { k, alpha }),
        Some("constant") => None,
        Some(other) => {
            return Err(Error::config(
                "law",
                format!("unknown law '{other}' (expected power, exp, or constant)"),
            ))
        }
    };
    let laws = build_noise_specs(experiment, mass_law, constant);

    let sizes = sizes.unwrap_or_else(|| default_sizes(experiment));
    let (size_min, size_max) = match experiment {
        SweepExperiment::Ghz => (2, 12),
        SweepExperiment::Branch => (0, 12),
        SweepExperiment::Grover => (3, 5),
    };
    for &s in &sizes {
        if s < size_min || s > size_max {
            return Err(Error::config(
                "sizes",
                format!(
                    "{s} outside [{size_min}, {size_max}] for {}",
                    experiment.label()
                ),
            ));
        }
    }

    let iterations = match experiment {
        SweepExperiment::Grover => {
            let its = iterations.unwrap_or_else(|| (1..=7).collect());
            for &t in &its {
                if !(1..=7).contains(&t) {
                    return Err(Error::config("iterations", format!("{t} outside [1, 7]")));
                }
            }
            its
        }
        _ => {
            if iterations.is_some() {
                return Err(Error::config(
                    "iterations",
                    "only used by the grover experiment",
                ));
            }
            Vec::new()
        }
    };

    if shots == 0 {
        return Err(Error::config("shots", "must be at least 1"));
    }
    if experiment == SweepExperiment::Ghz {
        let max_n = sizes.iter().copied().max().unwrap_or(2);
        if phase_points <= 2 * max_n {
            return Err(Error::config(
                "phase_points",
                format!(
                    "{phase_points} cannot resolve harmonic {max_n}; need more than {}",
                    2 * max_n
                ),
            ));
        }
    } else if phase_points <= 2 {
        return Err(Error::config("phase_points", "need more than 2"));
    }

    let plan = SweepPlan {
        experiment,
        sizes,
        iterations,
        laws,
        shots,
        phase_points,
        seed,
        backend,
        estimator: VisibilityEstimator::Fourier,
    };

    // Per-point validation catches the rest (exact-backend size caps).
    for (noise, kind) in plan.points() {
        plan.config_for(noise, kind, 0)
            .validate()
            .map_err(|e| Error::config("sizes", e.to_string()))?;
    }
    Ok(plan)
}

fn build_noise_specs(
    experiment: SweepExperiment,
    mass_law: Option<NoiseLaw>,
    constant: NoiseLaw,
) -> Vec<NoiseSpec> {
    let placement = match experiment {
        SweepExperiment::Grover => NoisePlacement::PerIteration,
        _ => NoisePlacement::AfterPrep,
    };
    let mass_scope = match experiment {
        SweepExperiment::Branch => NoiseScope::BranchAncillasOnly,
        _ => NoiseScope::AllQubits,
    };
    let mut laws = Vec::new();
    if let Some(law) = mass_law {
        laws.push(NoiseSpec::new(law, placement, mass_scope));
    }
    laws.push(NoiseSpec::new(constant, placement, NoiseScope::AllQubits));
    laws
}

fn default_sizes(experiment: SweepExperiment) -> Vec<usize> {
    match experiment {
        SweepExperiment::Ghz => (2..=8).collect(),
        SweepExperiment::Branch => (0..=12).collect(),
        SweepExperiment::Grover => vec![3, 4, 5],
    }
}

fn parse_number(key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .map_err(|_| Error::config(key, format!("'{value}' is not a number")))
}

fn parse_count(key: &str, value: &str) -> Result<usize> {
    value
        .parse::<usize>()
        .map_err(|_| Error::config(key, format!("'{value}' is not a count")))
}

/// `2..8` (inclusive), `3,4,5`, or a single count.
fn parse_counts(key: &str, value: &str) -> Result<Vec<usize>> {
    if let Some((lo, hi)) = value.split_once("..") {
        let lo = parse_count(key, lo)?;
        let hi = parse_count(key, hi)?;
        if hi < lo {
            return Err(Error::config(key, format!("empty range {lo}..{hi}")));
        }
        return Ok((lo..=hi).collect());
    }
    let list: Result<Vec<usize>> = value.split(',').map(|v| parse_count(key, v)).collect();
    let list = list?;
    if list.is_empty() {
        return Err(Error::config(key, "empty list"));
    }
    Ok(list)
}
