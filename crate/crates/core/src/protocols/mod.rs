//! The three experiments: GHZ parity scans, branch-mass interferometry,
//! and Grover search under dephasing.

mod branch;
mod ghz;
mod grover;
mod trajectory;
mod visibility;

pub use branch::{build_branch, run_branch};
pub use ghz::{build_ghz, run_ghz_parity};
pub use grover::{build_grover, grover_success, run_grover};
pub use visibility::{visibility_from_curve, visibility_minmax, VisibilityEstimate};

use std::f64::consts::PI;

use crate::density::MAX_MIXED_QUBITS;
use crate::error::{Error, Result};
use crate::noise::NoiseSpec;
use crate::statevector::MAX_PURE_QUBITS;

/// Which engine evaluates the experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    /// Stochastic pure-state unraveling with sampled Z insertions.
    Trajectory,
    /// Deterministic density-operator evolution; numerical ground truth.
    Exact,
}

impl Backend {
    pub fn label(&self) -> &'static str {
        match self {
            Backend::Trajectory => "trajectory",
            Backend::Exact => "exact",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    /// n-qubit GHZ state, parity scanned over the analysis-pulse azimuth.
    GhzParity { n: usize },
    /// Control qubit entangled with m ancillas, interfered after uncompute.
    BranchMass { m: usize },
    /// n-qubit search for the all-ones state, t iterations.
    Grover { n: usize, iterations: usize },
}

impl ExperimentKind {
    pub fn label(&self) -> &'static str {
        match self {
            ExperimentKind::GhzParity { .. } => "ghz",
            ExperimentKind::BranchMass { .. } => "branch",
            ExperimentKind::Grover { .. } => "grover",
        }
    }

    /// Size coordinate reported in result rows: n for GHZ and Grover, m for
    /// the branch experiment.
    pub fn size(&self) -> usize {
        match *self {
            ExperimentKind::GhzParity { n } => n,
            ExperimentKind::BranchMass { m } => m,
            ExperimentKind::Grover { n, .. } => n,
        }
    }
}

/// One experiment evaluation: what to run, under which noise model, and how
/// to estimate it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub noise: NoiseSpec,
    pub phase_points: usize,
    pub shots: usize,
    pub seed: u64,
    pub backend: Backend,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.noise.law.validate()?;
        if self.shots == 0 {
            return Err(Error::Parameter {
                name: "shots",
                value: 0.0,
                min: 1.0,
                max: f64::INFINITY,
            });
        }
        let exact = self.backend == Backend::Exact;
        match self.kind {
            ExperimentKind::GhzParity { n } => {
                if !(2..=12).contains(&n) {
                    return Err(Error::Size { n, min: 2, max: 12 });
                }
                if n > MAX_PURE_QUBITS || (exact && n > MAX_MIXED_QUBITS) {
                    return Err(Error::Size {
                        n,
                        min: 2,
                        max: MAX_MIXED_QUBITS,
                    });
                }
                if self.phase_points <= 2 * n {
                    return Err(Error::PhaseGrid {
                        points: self.phase_points,
                        harmonic: n,
                    });
                }
            }
            ExperimentKind::BranchMass { m } => {
                if m > 12 {
                    return Err(Error::Size {
                        n: m,
                        min: 0,
                        max: 12,
                    });
                }
                if exact && m + 1 > MAX_MIXED_QUBITS {
                    return Err(Error::Size {
                        n: m,
                        min: 0,
                        max: MAX_MIXED_QUBITS - 1,
                    });
                }
                if self.phase_points <= 2 {
                    return Err(Error::PhaseGrid {
                        points: self.phase_points,
                        harmonic: 1,
                    });
                }
            }
            ExperimentKind::Grover { n, iterations } => {
                if !(3..=5).contains(&n) {
                    return Err(Error::Size { n, min: 3, max: 5 });
                }
                if !(1..=7).contains(&iterations) {
                    return Err(Error::Parameter {
                        name: "iterations",
                        value: iterations as f64,
                        min: 1.0,
                        max: 7.0,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Evenly spaced azimuths 2*pi*j/points over [0, 2*pi).
pub fn phase_grid(points: usize) -> Vec<f64> {
    (0..points)
        .map(|j| 2.0 * PI * j as f64 / points as f64)
        .collect()
}

/// A sampled parity-versus-azimuth curve with per-point uncertainties.
#[derive(Debug, Clone, PartialEq)]
pub struct ParityCurve {
    phases: Vec<f64>,
    parity: Vec<f64>,
    stderr: Vec<f64>,
}

impl ParityCurve {
    pub fn new(phases: Vec<f64>, parity: Vec<f64>, stderr: Vec<f64>) -> Result<Self> {
        if phases.is_empty() {
            return Err(Error::EmptyInput {
                what: "parity curve",
            });
        }
        if phases.len() != parity.len() || phases.len() != stderr.len() {
            return Err(Error::Shape {
                circuit: phases.len(),
                state: parity.len(),
            });
        }
        let two_pi = 2.0 * PI;
        for w in phases.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::Parameter {
                    name: "phases",
                    value: w[1],
                    min: w[0],
                    max: two_pi,
                });
            }
        }
        if phases[0] < 0.0 || *phases.last().unwrap() >= two_pi {
            return Err(Error::Parameter {
                name: "phases",
                value: *phases.last().unwrap(),
                min: 0.0,
                max: two_pi,
            });
        }
        for (&v, &e) in parity.iter().zip(&stderr) {
            if !(-1.0..=1.0).contains(&v) {
                return Err(Error::Parameter {
                    name: "parity",
                    value: v,
                    min: -1.0,
                    max: 1.0,
                });
            }
            if e < 0.0 {
                return Err(Error::Parameter {
                    name: "stderr",
                    value: e,
                    min: 0.0,
                    max: f64::INFINITY,
                });
            }
        }
        Ok(ParityCurve {
            phases,
            parity,
            stderr,
        })
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn parity(&self) -> &[f64] {
        &self.parity
    }

    pub fn stderr(&self) -> &[f64] {
        &self.stderr
    }
}

/// A sampled success probability with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuccessEstimate {
    pub value: f64,
    pub stderr: f64,
}
