//! Closed-form predictors, independent of the simulation engines, used as
//! ground truth wherever a closed form exists.

use crate::error::{Error, Result};
use crate::noise::{noise_probability, NoiseScope, NoiseSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Derivation {
    GhzClosedForm,
    BranchClosedForm,
    GroverNoiseless,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub metric: f64,
    pub derivation: Derivation,
}

/// Parity visibility of an n-qubit GHZ state after per-qubit dephasing:
/// each qubit's channel multiplies the coherence by 1-2p, so the fringe
/// amplitude is (1-2p)^n with p = noise_probability(spec, n).
pub fn predict_ghz_visibility(spec: &NoiseSpec, n: usize) -> Result<Prediction> {
    if n < 2 {
        return Err(Error::Size {
            n,
            min: 2,
            max: usize::MAX,
        });
    }
    let p = noise_probability(&spec.law, n)?;
    Ok(Prediction {
        metric: (1.0 - 2.0 * p).powi(n as i32),
        derivation: Derivation::GhzClosedForm,
    })
}

/// Control-qubit fringe visibility with m entangled ancillas. Dephasing on
/// the ancillas only gives (1-2p(m))^m; dephasing on the control as well
/// adds one more factor.
pub fn predict_branch_visibility(spec: &NoiseSpec, m: usize) -> Result<Prediction> {
    let p = noise_probability(&spec.law, m)?;
    let factors = match spec.scope {
        NoiseScope::BranchAncillasOnly => m as i32,
        NoiseScope::AllQubits => m as i32 + 1,
    };
    Ok(Prediction {
        metric: (1.0 - 2.0 * p).powi(factors),
        derivation: Derivation::BranchClosedForm,
    })
}

/// Noiseless Grover success after t iterations on n qubits with a single
/// marked state: sin^2((2t+1) * asin(2^(-n/2))).
pub fn grover_noiseless_success(n: usize, t: usize) -> Result<Prediction> {
    if n < 2 {
        return Err(Error::Size {
            n,
            min: 2,
            max: usize::MAX,
        });
    }
    let theta = (1.0 / ((1u64 << n) as f64).sqrt()).asin();
    let amp = ((2 * t + 1) as f64 * theta).sin();
    Ok(Prediction {
        metric: amp * amp,
        derivation: Derivation::GroverNoiseless,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::{NoiseLaw, NoisePlacement};
    use proptest::prelude::*;

    fn spec(law: NoiseLaw, scope: NoiseScope) -> NoiseSpec {
        NoiseSpec::new(law, NoisePlacement::AfterPrep, scope)
    }

    #[test]
    fn ghz_predictions() {
        let none = spec(NoiseLaw::Constant { p0: 0.0 }, NoiseScope::AllQubits);
        assert_eq!(predict_ghz_visibility(&none, 4).unwrap().metric, 1.0);

        let constant = spec(NoiseLaw::default_constant(), NoiseScope::AllQubits);
        let v = predict_ghz_visibility(&constant, 3).unwrap().metric;
        assert!((v - 0.592704).abs() < 1e-12);

        let power = spec(NoiseLaw::default_power(), NoiseScope::AllQubits);
        let v = predict_ghz_visibility(&power, 4).unwrap().metric;
        assert!((v - 0.01679616).abs() < 1e-12);

        assert!(predict_ghz_visibility(&power, 1).is_err());
    }

    #[test]
    fn branch_predictions() {
        let power = spec(NoiseLaw::default_power(), NoiseScope::BranchAncillasOnly);
        assert_eq!(predict_branch_visibility(&power, 0).unwrap().metric, 1.0);
        assert_eq!(predict_branch_visibility(&power, 5).unwrap().metric, 0.0);
        let v = predict_branch_visibility(&power, 4).unwrap().metric;
        assert!((v - 0.01679616).abs() < 1e-12);

        let constant = spec(NoiseLaw::default_constant(), NoiseScope::AllQubits);
        let v = predict_branch_visibility(&constant, 2).unwrap().metric;
        assert!((v - 0.592704).abs() < 1e-12);
        let v = predict_branch_visibility(&constant, 4).unwrap().metric;
        assert!((v - 0.4182119424).abs() < 1e-12);
    }

    #[test]
    fn grover_predictions() {
        assert!((grover_noiseless_success(3, 0).unwrap().metric - 0.125).abs() < 1e-12);
        assert!((grover_noiseless_success(3, 1).unwrap().metric - 0.78125).abs() < 1e-12);
        assert!((grover_noiseless_success(3, 2).unwrap().metric - 0.9453125).abs() < 1e-9);
        assert!(grover_noiseless_success(1, 1).is_err());
    }

    proptest! {
        #[test]
        fn prop_predictions_in_unit_interval(
            k in 0.0f64..0.5,
            alpha in 0.0f64..3.0,
            n in 2usize..10,
            t in 0usize..10,
        ) {
            for law in [
                NoiseLaw::PowerLaw { k, alpha },
                NoiseLaw::ExpSaturating { k, alpha },
                NoiseLaw::Constant { p0: k.min(0.5) },
            ] {
                for scope in [NoiseScope::AllQubits, NoiseScope::BranchAncillasOnly] {
                    let s = spec(law, scope);
                    let g = predict_ghz_visibility(&s, n).unwrap().metric;
                    let b = predict_branch_visibility(&s, n).unwrap().metric;
                    prop_assert!((0.0..=1.0).contains(&g));
                    prop_assert!((0.0..=1.0).contains(&b));
                }
            }
            let s = grover_noiseless_success(n, t).unwrap().metric;
            prop_assert!((0.0..=1.0).contains(&s));
        }
    }
}
