//! Branch-mass interference: a control qubit entangled with m ancillas,
//! dephased, disentangled, and interfered.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, CircuitOp};
use crate::density::{dm_apply_circuit, MixedState};
use crate::error::{Error, Result};
use crate::gates::GateOp;
use crate::noise::{noise_probability, NoNoise, NoiseScope};
use crate::protocols::trajectory::{run_phase_scan, PhaseScan};
use crate::protocols::visibility::{visibility_from_curve, VisibilityEstimate};
use crate::protocols::{phase_grid, Backend, ExperimentConfig, ExperimentKind, ParityCurve};
use crate::statevector::{apply_ops, zero_state, MAX_PURE_QUBITS};

/// Control is qubit 0; ancillas are 1..=m, fanned out by CNOTs so they ride
/// the |1> branch, then uncomputed before the control is interfered with
/// RZ(0, phi) and a final Hadamard. Only the control is measured.
pub fn build_branch(m: usize, scope: NoiseScope, phi: f64) -> Result<Circuit> {
    if m + 1 > MAX_PURE_QUBITS {
        return Err(Error::Size {
            n: m,
            min: 0,
            max: MAX_PURE_QUBITS - 1,
        });
    }
    let mut c = Circuit::new(m + 1);
    c.push_gate(GateOp::H(0));
    for q in 1..=m {
        c.push_gate(GateOp::Cnot {
            control: 0,
            target: q,
        });
    }
    let site = match scope {
        NoiseScope::BranchAncillasOnly => (1..=m).collect(),
        NoiseScope::AllQubits => (0..=m).collect(),
    };
    c.push_noise(site);
    for q in (1..=m).rev() {
        c.push_gate(GateOp::Cnot {
            control: 0,
            target: q,
        });
    }
    c.push_gate(GateOp::Rz(0, phi));
    c.push_gate(GateOp::H(0));
    Ok(c)
}

/// Scan the interferometer phase and estimate the control fringe
/// visibility: P(control = 0 | phi) = (1 + V cos phi) / 2.
pub fn run_branch(config: &ExperimentConfig) -> Result<(ParityCurve, VisibilityEstimate)> {
    let ExperimentKind::BranchMass { m } = config.kind else {
        return Err(Error::config(
            "experiment",
            "run_branch needs a branch configuration",
        ));
    };
    config.validate()?;
    let p = noise_probability(&config.noise.law, m)?;
    let phases = phase_grid(config.phase_points);
    let template = build_branch(m, config.noise.scope, 0.0)?;
    let site_at = template
        .first_noise_site()
        .expect("branch circuit has a noise site");
    // ops: [prefix.. | noise | uncompute.. | RZ, H]
    let interfere_at = template.ops.len() - 2;

    let curve = match config.backend {
        Backend::Exact => {
            let mut dm = MixedState::from_pure(&zero_state(m + 1)?)?;
            let mut through_uncompute = template.clone();
            through_uncompute.ops.truncate(interfere_at);
            dm_apply_circuit(&mut dm, &through_uncompute, p)?;
            let mut parity = Vec::with_capacity(phases.len());
            for &phi in &phases {
                let mut probe = dm.clone();
                probe.apply_gate(&GateOp::Rz(0, phi))?;
                probe.apply_gate(&GateOp::H(0))?;
                parity.push((2.0 * probe.prob_qubit_zero(0)? - 1.0).clamp(-1.0, 1.0));
            }
            let stderr = vec![0.0; phases.len()];
            ParityCurve::new(phases, parity, stderr)?
        }
        Backend::Trajectory => {
            let mut prefix = zero_state(m + 1)?;
            apply_ops(&mut prefix, &template.ops[..site_at], 0, &mut NoNoise)?;
            let CircuitOp::Noise(site) = &template.ops[site_at] else {
                unreachable!()
            };
            let scan = PhaseScan {
                prefix,
                site_qubits: &site.qubits,
                fixed_suffix: &template.ops[site_at + 1..interfere_at],
                p,
                parity_mask: 1,
            };
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            run_phase_scan(
                &scan,
                &phases,
                |phi| vec![GateOp::Rz(0, phi), GateOp::H(0)],
                config.shots,
                &mut rng,
            )?
        }
    };
    let visibility = visibility_from_curve(&curve, 1)?;
    Ok((curve, visibility))
}
