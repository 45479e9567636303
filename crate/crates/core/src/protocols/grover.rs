//! Grover search for the all-ones state under per-iteration dephasing.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circuit::Circuit;
use crate::density::{dm_apply_circuit, MixedState};
use crate::error::{Error, Result};
use crate::gates::GateOp;
use crate::noise::{noise_probability, NoNoise, SampledDephasing};
use crate::protocols::{Backend, ExperimentConfig, ExperimentKind, SuccessEstimate};
use crate::statevector::{apply_ops, zero_state, MAX_PURE_QUBITS};

/// Uniform superposition, then t rounds of oracle (MCZ on all qubits,
/// marking |1..1>) and diffusion (H, X, MCZ, X, H), realized up to global
/// phase. Dephasing acts on every qubit right after preparation and again
/// after each round, so a fully dephased register stays at the uniform
/// mixture instead of retaining the coherent first-round boost.
pub fn build_grover(n: usize, t: usize) -> Result<Circuit> {
    if !(2..=MAX_PURE_QUBITS).contains(&n) {
        return Err(Error::Size {
            n,
            min: 2,
            max: MAX_PURE_QUBITS,
        });
    }
    let all: Vec<usize> = (0..n).collect();
    let mut c = Circuit::new(n);
    for q in 0..n {
        c.push_gate(GateOp::H(q));
    }
    c.push_noise(all.clone());
    for _ in 0..t {
        c.push_gate(GateOp::Mcz(all.clone()));
        for q in 0..n {
            c.push_gate(GateOp::H(q));
        }
        for q in 0..n {
            c.push_gate(GateOp::X(q));
        }
        c.push_gate(GateOp::Mcz(all.clone()));
        for q in 0..n {
            c.push_gate(GateOp::X(q));
        }
        for q in 0..n {
            c.push_gate(GateOp::H(q));
        }
        c.push_noise(all.clone());
    }
    Ok(c)
}

/// Success probability: frequency (Trajectory) or exact probability (Exact)
/// of measuring the marked all-ones state.
pub fn run_grover(config: &ExperimentConfig) -> Result<SuccessEstimate> {
    let ExperimentKind::Grover { n, iterations } = config.kind else {
        return Err(Error::config(
            "experiment",
            "run_grover needs a grover configuration",
        ));
    };
    config.validate()?;
    let p = noise_probability(&config.noise.law, n)?;
    grover_success(n, iterations, p, config.backend, config.shots, config.seed)
}

/// Backend dispatch without the sweep-range config checks; iteration
/// count 0 (bare uniform superposition) is allowed here.
pub fn grover_success(
    n: usize,
    t: usize,
    p: f64,
    backend: Backend,
    shots: usize,
    seed: u64,
) -> Result<SuccessEstimate> {
    let circuit = build_grover(n, t)?;
    let target = (1u64 << n) - 1;
    match backend {
        Backend::Exact => {
            let mut dm = MixedState::from_pure(&zero_state(n)?)?;
            dm_apply_circuit(&mut dm, &circuit, p)?;
            Ok(SuccessEstimate {
                value: dm.diagonal_probabilities()[target as usize],
                stderr: 0.0,
            })
        }
        Backend::Trajectory => {
            let site_at = circuit
                .first_noise_site()
                .expect("grover circuit has noise sites");
            let mut prefix = zero_state(n)?;
            apply_ops(&mut prefix, &circuit.ops[..site_at], 0, &mut NoNoise)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut hits = 0u64;
            for _ in 0..shots {
                let mut s = prefix.clone();
                let mut resolver = SampledDephasing::new(p, &mut rng)?;
                apply_ops(&mut s, &circuit.ops[site_at..], 0, &mut resolver)?;
                if s.sample_outcome(&mut rng) == target {
                    hits += 1;
                }
            }
            let f = hits as f64 / shots as f64;
            Ok(SuccessEstimate {
                value: f,
                stderr: (f * (1.0 - f) / shots as f64).sqrt(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::{NoiseLaw, NoisePlacement, NoiseScope, NoiseSpec};

    fn config(n: usize, t: usize, law: NoiseLaw, backend: Backend) -> ExperimentConfig {
        ExperimentConfig {
            kind: ExperimentKind::Grover { n, iterations: t },
            noise: NoiseSpec::new(law, NoisePlacement::PerIteration, NoiseScope::AllQubits),
            phase_points: 64,
            shots: 2000,
            seed: 13,
            backend,
        }
    }

    #[test]
    fn circuit_structure() {
        let c = build_grover(3, 0).unwrap();
        assert_eq!(c.ops.len(), 4);
        assert_eq!(c.noise_site_count(), 1);
        let c = build_grover(3, 2).unwrap();
        assert_eq!(c.noise_site_count(), 3);
        assert_eq!(c.ops.len(), 4 + 2 * 15);
    }

    #[test]
    fn noiseless_success_milestones() {
        let s = grover_success(3, 0, 0.0, Backend::Exact, 1, 0).unwrap();
        assert!((s.value - 0.125).abs() < 1e-12);
        let s = grover_success(3, 1, 0.0, Backend::Exact, 1, 0).unwrap();
        assert!((s.value - 0.78125).abs() < 1e-12);
        let s = grover_success(3, 2, 0.0, Backend::Exact, 1, 0).unwrap();
        assert!((s.value - 0.9453125).abs() < 1e-9);
    }

    #[test]
    fn noiseless_trajectory_within_binomial_bound() {
        let cfg = config(3, 2, NoiseLaw::Constant { p0: 0.0 }, Backend::Trajectory);
        let s = run_grover(&cfg).unwrap();
        let bound = 4.0 * (0.9453 * 0.0547f64 / 2000.0).sqrt();
        assert!((s.value - 0.9453125).abs() < bound);
    }

    #[test]
    fn saturated_mass_law_pins_success_to_baseline() {
        // p clamps to 0.5 at n=5: the register is fully dephased to the
        // uniform mixture, a fixed point of the iteration, so success is
        // exactly 1/32 at every depth.
        for t in [1, 4, 7] {
            let s = grover_success(5, t, 0.5, Backend::Exact, 1, 0).unwrap();
            assert!((s.value - 1.0 / 32.0).abs() < 1e-9, "t={t}: {}", s.value);
        }
    }

    #[test]
    fn backend_agreement_constant_noise() {
        let exact = grover_success(3, 1, 0.08, Backend::Exact, 1, 0).unwrap();
        let traj = grover_success(3, 1, 0.08, Backend::Trajectory, 20000, 21).unwrap();
        let sigma = (exact.value * (1.0 - exact.value) / 20000.0f64).sqrt();
        assert!((traj.value - exact.value).abs() < 4.0 * sigma);
    }

    #[test]
    fn wrong_kind_is_config_error() {
        let mut cfg = config(3, 1, NoiseLaw::default_constant(), Backend::Exact);
        cfg.kind = ExperimentKind::GhzParity { n: 3 };
        assert!(run_grover(&cfg).unwrap_err().is_config());
    }
}
