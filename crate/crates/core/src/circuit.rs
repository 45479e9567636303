//! Circuits: an ordered op list mixing gates with noise-injection markers.

use crate::error::{Error, Result};
use crate::gates::GateOp;

/// Marks the point where a sweep injects dephasing. The qubit list is the
/// concrete injection scope; it may be empty (a zero-mass branch site).
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSite {
    pub qubits: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CircuitOp {
    Gate(GateOp),
    Noise(NoiseSite),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub n_qubits: usize,
    pub ops: Vec<CircuitOp>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            ops: Vec::new(),
        }
    }

    pub fn push_gate(&mut self, gate: GateOp) {
        self.ops.push(CircuitOp::Gate(gate));
    }

    pub fn push_noise(&mut self, qubits: Vec<usize>) {
        self.ops.push(CircuitOp::Noise(NoiseSite { qubits }));
    }

    pub fn noise_site_count(&self) -> usize {
        self.ops
            .iter()
            .filter(|op| matches!(op, CircuitOp::Noise(_)))
            .count()
    }

    /// Every op must address qubits below `n_qubits`.
    pub fn validate(&self) -> Result<()> {
        for op in &self.ops {
            match op {
                CircuitOp::Gate(g) => g.validate(self.n_qubits)?,
                CircuitOp::Noise(site) => {
                    for &q in &site.qubits {
                        if q >= self.n_qubits {
                            return Err(Error::Index {
                                index: q,
                                n_qubits: self.n_qubits,
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Index of the first noise marker, if any. The trajectory runner caches
    /// the state up to this point since everything before it is deterministic.
    pub fn first_noise_site(&self) -> Option<usize> {
        self.ops
            .iter()
            .position(|op| matches!(op, CircuitOp::Noise(_)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_catches_out_of_range_ops() {
        let mut c = Circuit::new(2);
        c.push_gate(GateOp::H(0));
        c.push_noise(vec![0, 1]);
        assert!(c.validate().is_ok());
        c.push_gate(GateOp::X(2));
        assert!(c.validate().is_err());
    }

    #[test]
    fn first_noise_site_position() {
        let mut c = Circuit::new(2);
        assert_eq!(c.first_noise_site(), None);
        c.push_gate(GateOp::H(0));
        c.push_gate(GateOp::Cnot {
            control: 0,
            target: 1,
        });
        c.push_noise(vec![0, 1]);
        assert_eq!(c.first_noise_site(), Some(2));
        assert_eq!(c.noise_site_count(), 1);
    }
}
