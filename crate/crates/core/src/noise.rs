//! Dephasing noise: size-scaling laws for the per-qubit phase-flip
//! probability, the channel algebra, and per-trajectory sampling.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gates::Mat2;

/// Dephasing probabilities are capped here; beyond 0.5 the channel would
/// grow coherent again (|1-2p| increases), so 0.5 is maximal decoherence.
pub const MAX_DEPHASING_P: f64 = 0.5;

pub const DEFAULT_K: f64 = 0.02;
pub const DEFAULT_ALPHA: f64 = 2.0;
/// Baseline probability; equals the default power law evaluated at size 2.
pub const DEFAULT_P0: f64 = 0.08;

/// How the per-qubit dephasing probability scales with system size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseLaw {
    /// Size-independent baseline.
    Constant { p0: f64 },
    /// k * size^alpha.
    PowerLaw { k: f64, alpha: f64 },
    /// 1 - exp(-k * size^alpha), saturating toward 1 before the clamp.
    ExpSaturating { k: f64, alpha: f64 },
}

impl NoiseLaw {
    pub fn default_power() -> Self {
        NoiseLaw::PowerLaw {
            k: DEFAULT_K,
            alpha: DEFAULT_ALPHA,
        }
    }

    pub fn default_exp() -> Self {
        NoiseLaw::ExpSaturating {
            k: DEFAULT_K,
            alpha: DEFAULT_ALPHA,
        }
    }

    pub fn default_constant() -> Self {
        NoiseLaw::Constant { p0: DEFAULT_P0 }
    }

    /// Stable label used in CSV rows, chart legends, and seed derivation.
    pub fn label(&self) -> &'static str {
        match self {
            NoiseLaw::Constant { .. } => "constant",
            NoiseLaw::PowerLaw { .. } => "power",
            NoiseLaw::ExpSaturating { .. } => "exp",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            NoiseLaw::Constant { p0 } => check_param("p0", p0, 0.0, MAX_DEPHASING_P),
            NoiseLaw::PowerLaw { k, alpha } | NoiseLaw::ExpSaturating { k, alpha } => {
                check_param("k", k, 0.0, f64::INFINITY)?;
                check_param("alpha", alpha, f64::NEG_INFINITY, f64::INFINITY)
            }
        }
    }
}

fn check_param(name: &'static str, value: f64, min: f64, max: f64) -> Result<()> {
    if !value.is_finite() || value < min || value > max {
        return Err(Error::Parameter {
            name,
            value,
            min,
            max,
        });
    }
    Ok(())
}

/// Where noise markers sit in a circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoisePlacement {
    /// A single marker right after state preparation.
    AfterPrep,
    /// One marker after every algorithm iteration.
    PerIteration,
}

/// Which qubits a noise marker covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseScope {
    AllQubits,
    /// Only the ancillas entangled with one branch of the control qubit.
    BranchAncillasOnly,
}

/// Full description of a noise model: scaling law, placement, and scope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub law: NoiseLaw,
    pub site: NoisePlacement,
    pub scope: NoiseScope,
}

impl NoiseSpec {
    pub fn new(law: NoiseLaw, site: NoisePlacement, scope: NoiseScope) -> Self {
        NoiseSpec { law, site, scope }
    }
}

/// Evaluate `law` at integer `size`, clamped to [0, 0.5].
pub fn noise_probability(law: &NoiseLaw, size: usize) -> Result<f64> {
    law.validate()?;
    let raw = match *law {
        NoiseLaw::Constant { p0 } => p0,
        NoiseLaw::PowerLaw { k, alpha } => k * (size as f64).powf(alpha),
        NoiseLaw::ExpSaturating { k, alpha } => 1.0 - (-k * (size as f64).powf(alpha)).exp(),
    };
    Ok(raw.clamp(0.0, MAX_DEPHASING_P))
}

/// Phase-flip Kraus pair {sqrt(1-p) I, sqrt(p) Z}.
pub fn phase_flip_kraus(p: f64) -> Result<[Mat2; 2]> {
    check_param("p", p, 0.0, MAX_DEPHASING_P)?;
    let zero = Complex64::new(0.0, 0.0);
    let a = Complex64::new((1.0 - p).sqrt(), 0.0);
    let b = Complex64::new(p.sqrt(), 0.0);
    Ok([[[a, zero], [zero, a]], [[b, zero], [zero, -b]]])
}

/// Damping parameter giving the same off-diagonal attenuation as a
/// phase flip with probability `p`: 1-2p = sqrt(1-lambda).
pub fn phase_damping_lambda(p: f64) -> f64 {
    let c = 1.0 - 2.0 * p;
    1.0 - c * c
}

/// Phase-damping Kraus pair {diag(1, sqrt(1-lambda)), diag(0, sqrt(lambda))}.
pub fn phase_damping_kraus(lambda: f64) -> Result<[Mat2; 2]> {
    check_param("lambda", lambda, 0.0, 1.0)?;
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let keep = Complex64::new((1.0 - lambda).sqrt(), 0.0);
    let leak = Complex64::new(lambda.sqrt(), 0.0);
    Ok([[[one, zero], [zero, keep]], [[zero, zero], [zero, leak]]])
}

/// One Bernoulli draw: true means a Z is applied on this qubit.
pub fn sample_z_action(p: f64, rng: &mut impl Rng) -> bool {
    rng.random::<f64>() < p
}

/// Single-qubit dephasing channel at a fixed probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DephasingChannel {
    p: f64,
}

impl DephasingChannel {
    pub fn new(p: f64) -> Result<Self> {
        check_param("p", p, 0.0, MAX_DEPHASING_P)?;
        Ok(DephasingChannel { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Factor multiplying each off-diagonal element: 1 - 2p.
    pub fn coherence_factor(&self) -> f64 {
        1.0 - 2.0 * self.p
    }

    pub fn kraus_operators(&self) -> [Mat2; 2] {
        phase_flip_kraus(self.p).expect("p validated at construction")
    }

    pub fn damping_lambda(&self) -> f64 {
        phase_damping_lambda(self.p)
    }
}

/// Supplies the Z pattern for each noise marker during a trajectory.
/// Returns a bitmask over qubit indices; bit q set means Z on qubit q.
pub trait NoiseResolver {
    fn z_mask(&mut self, site_index: usize, qubits: &[usize]) -> u64;
}

/// Noiseless resolver: every marker is a no-op.
pub struct NoNoise;

impl NoiseResolver for NoNoise {
    fn z_mask(&mut self, _site_index: usize, _qubits: &[usize]) -> u64 {
        0
    }
}

/// Independent Bernoulli(p) draw per covered qubit per marker.
pub struct SampledDephasing<R> {
    p: f64,
    rng: R,
}

impl<R: Rng> SampledDephasing<R> {
    pub fn new(p: f64, rng: R) -> Result<Self> {
        check_param("p", p, 0.0, MAX_DEPHASING_P)?;
        Ok(SampledDephasing { p, rng })
    }
}

impl<R: Rng> NoiseResolver for SampledDephasing<R> {
    fn z_mask(&mut self, _site_index: usize, qubits: &[usize]) -> u64 {
        let mut mask = 0u64;
        for &q in qubits {
            if sample_z_action(self.p, &mut self.rng) {
                mask |= 1 << q;
            }
        }
        mask
    }
}

/// Fixed Z pattern per site index; sites past the list get no noise.
/// Intended for tests and worked examples.
pub struct ForcedZ {
    masks: Vec<u64>,
}

impl ForcedZ {
    pub fn new(masks: Vec<u64>) -> Self {
        ForcedZ { masks }
    }
}

impl NoiseResolver for ForcedZ {
    fn z_mask(&mut self, site_index: usize, _qubits: &[usize]) -> u64 {
        self.masks.get(site_index).copied().unwrap_or(0)
    }
}
