//! Trajectory evaluation of phase-scan experiments with one noise site.
//!
//! Per shot the runner draws an independent Z pattern at the site and one
//! measurement outcome. States reached by equal Z patterns are memoized
//! (keyed by the exact mask, deduplicated by exact amplitude equality), so
//! repeated patterns cost one distribution lookup instead of a re-run; the
//! random stream is untouched by the caching and matches a naive per-shot
//! simulation draw for draw.

use std::collections::HashMap;

use rand::Rng;

use crate::circuit::CircuitOp;
use crate::error::Result;
use crate::gates::GateOp;
use crate::noise::{sample_z_action, NoNoise};
use crate::protocols::ParityCurve;
use crate::statevector::{apply_ops, PureState};

pub(crate) struct PhaseScan<'a> {
    /// State evolved through every op before the noise site.
    pub prefix: PureState,
    /// Qubits covered by the site, in draw order.
    pub site_qubits: &'a [usize],
    /// Ops after the site that do not depend on the scan azimuth.
    pub fixed_suffix: &'a [CircuitOp],
    /// Per-qubit Z probability at the site.
    pub p: f64,
    /// Bits entering the reported parity (1 bit per measured qubit).
    pub parity_mask: u64,
}

pub(crate) fn run_phase_scan(
    scan: &PhaseScan,
    phases: &[f64],
    phi_gates: impl Fn(f64) -> Vec<GateOp>,
    shots: usize,
    rng: &mut impl Rng,
) -> Result<ParityCurve> {
    let mut mask_to_state: HashMap<u64, usize> = HashMap::new();
    let mut states: Vec<PureState> = Vec::new();
    let mut parity = Vec::with_capacity(phases.len());
    let mut stderr = Vec::with_capacity(phases.len());

    for &phi in phases {
        let gates = phi_gates(phi);
        let mut dists: Vec<Option<Vec<f64>>> = vec![None; states.len()];
        let mut signed_sum: i64 = 0;
        for _ in 0..shots {
            let mut mask = 0u64;
            for &q in scan.site_qubits {
                if sample_z_action(scan.p, rng) {
                    mask |= 1 << q;
                }
            }
            let id = match mask_to_state.get(&mask) {
                Some(&id) => id,
                None => {
                    let mut s = scan.prefix.clone();
                    s.apply_z_mask(mask);
                    apply_ops(&mut s, scan.fixed_suffix, 0, &mut NoNoise)?;
                    // Z patterns often collapse to few distinct states
                    // (sign flips cancel exactly), so dedup by equality.
                    let id = match states.iter().position(|t| *t == s) {
                        Some(existing) => existing,
                        None => {
                            states.push(s);
                            dists.push(None);
                            states.len() - 1
                        }
                    };
                    mask_to_state.insert(mask, id);
                    id
                }
            };
            if dists[id].is_none() {
                let mut s = states[id].clone();
                for g in &gates {
                    s.apply_gate(g)?;
                }
                let mut cum = Vec::with_capacity(s.amplitudes().len());
                let mut acc = 0.0;
                for a in s.amplitudes() {
                    acc += a.norm_sqr();
                    cum.push(acc);
                }
                dists[id] = Some(cum);
            }
            let cum = dists[id].as_ref().unwrap();
            let total = *cum.last().unwrap();
            let u: f64 = rng.random::<f64>() * total;
            let outcome = cum.partition_point(|&c| c <= u).min(cum.len() - 1) as u64;
            if (outcome & scan.parity_mask).count_ones() & 1 == 1 {
                signed_sum -= 1;
            } else {
                signed_sum += 1;
            }
        }
        let mean = signed_sum as f64 / shots as f64;
        parity.push(mean);
        stderr.push(((1.0 - mean * mean).max(0.0) / shots as f64).sqrt());
    }
    ParityCurve::new(phases.to_vec(), parity, stderr)
}
