//! GHZ parity-scan experiment.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, CircuitOp};
use crate::density::{dm_apply_circuit, MixedState};
use crate::error::{Error, Result};
use crate::gates::GateOp;
use crate::noise::{noise_probability, NoNoise};
use crate::protocols::trajectory::{run_phase_scan, PhaseScan};
use crate::protocols::visibility::{visibility_from_curve, VisibilityEstimate};
use crate::protocols::{phase_grid, Backend, ExperimentConfig, ExperimentKind, ParityCurve};
use crate::statevector::{apply_ops, zero_state, MAX_PURE_QUBITS};

/// Prepare |0..0> + |1..1> with a Hadamard and a CNOT chain, then mark the
/// point where dephasing acts on every qubit.
pub fn build_ghz(n: usize) -> Result<Circuit> {
    if !(2..=MAX_PURE_QUBITS).contains(&n) {
        return Err(Error::Size {
            n,
            min: 2,
            max: MAX_PURE_QUBITS,
        });
    }
    let mut c = Circuit::new(n);
    c.push_gate(GateOp::H(0));
    for q in 0..n - 1 {
        c.push_gate(GateOp::Cnot {
            control: q,
            target: q + 1,
        });
    }
    c.push_noise((0..n).collect());
    Ok(c)
}

/// Scan the analysis-pulse azimuth over the phase grid and estimate the
/// parity fringe amplitude at harmonic n.
pub fn run_ghz_parity(config: &ExperimentConfig) -> Result<(ParityCurve, VisibilityEstimate)> {
    let ExperimentKind::GhzParity { n } = config.kind else {
        return Err(Error::config(
            "experiment",
            "run_ghz_parity needs a ghz configuration",
        ));
    };
    config.validate()?;
    let p = noise_probability(&config.noise.law, n)?;
    let phases = phase_grid(config.phase_points);
    let circuit = build_ghz(n)?;

    let curve = match config.backend {
        Backend::Exact => {
            let mut dm = MixedState::from_pure(&zero_state(n)?)?;
            dm_apply_circuit(&mut dm, &circuit, p)?;
            let mut parity = Vec::with_capacity(phases.len());
            for &phi in &phases {
                let mut probe = dm.clone();
                for q in 0..n {
                    probe.apply_gate(&GateOp::EquatorialPulse(q, phi))?;
                }
                parity.push(probe.parity_expectation().clamp(-1.0, 1.0));
            }
            let stderr = vec![0.0; phases.len()];
            ParityCurve::new(phases, parity, stderr)?
        }
        Backend::Trajectory => {
            let site_at = circuit
                .first_noise_site()
                .expect("ghz circuit has a noise site");
            let mut prefix = zero_state(n)?;
            apply_ops(&mut prefix, &circuit.ops[..site_at], 0, &mut NoNoise)?;
            let CircuitOp::Noise(site) = &circuit.ops[site_at] else {
                unreachable!()
            };
            let scan = PhaseScan {
                prefix,
                site_qubits: &site.qubits,
                fixed_suffix: &circuit.ops[site_at + 1..],
                p,
                parity_mask: (1u64 << n) - 1,
            };
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            run_phase_scan(
                &scan,
                &phases,
                |phi| (0..n).map(|q| GateOp::EquatorialPulse(q, phi)).collect(),
                config.shots,
                &mut rng,
            )?
        }
    };
    let visibility = visibility_from_curve(&curve, n)?;
    Ok((curve, visibility))
}
