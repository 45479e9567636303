//! Gate set: the fixed vocabulary of unitaries the experiment circuits use.
//!
//! Basis convention, used everywhere in this crate: qubit `q` is bit `q` of
//! the basis-state index (qubit 0 least significant). Bitstrings render with
//! qubit 0 rightmost, so index 6 on three qubits prints as "110".

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Mat2 = [[Complex64; 2]; 2];

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// A gate instance bound to concrete qubit indices.
#[derive(Debug, Clone, PartialEq)]
pub enum GateOp {
    H(usize),
    X(usize),
    Z(usize),
    /// Z-axis rotation diag(e^{-i phi/2}, e^{i phi/2}).
    Rz(usize, f64),
    /// pi/2 pulse about the equatorial axis at azimuth phi:
    /// (1/sqrt2) [[1, -i e^{-i phi}], [-i e^{i phi}, 1]].
    EquatorialPulse(usize, f64),
    Cnot {
        control: usize,
        target: usize,
    },
    /// Multi-controlled Z: flips the sign of the basis states where every
    /// listed qubit is 1. A single-element set is a plain Z.
    Mcz(Vec<usize>),
}

impl GateOp {
    /// Check all indices against a state of `n_qubits` qubits.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let check = |q: usize| {
            if q < n_qubits {
                Ok(())
            } else {
                Err(Error::Index { index: q, n_qubits })
            }
        };
        match self {
            GateOp::H(q) | GateOp::X(q) | GateOp::Z(q) => check(*q),
            GateOp::Rz(q, _) | GateOp::EquatorialPulse(q, _) => check(*q),
            GateOp::Cnot { control, target } => {
                check(*control)?;
                check(*target)?;
                if control == target {
                    return Err(Error::Gate {
                        reason: format!("CNOT control and target are both qubit {control}"),
                    });
                }
                Ok(())
            }
            GateOp::Mcz(qubits) => {
                if qubits.is_empty() {
                    return Err(Error::Gate {
                        reason: "MCZ with empty qubit set".into(),
                    });
                }
                for &q in qubits {
                    check(q)?;
                }
                Ok(())
            }
        }
    }

    /// The 2x2 unitary for single-qubit variants, `None` for CNOT/MCZ.
    pub fn unitary2(&self) -> Option<Mat2> {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        match self {
            GateOp::H(_) => Some([
                [c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)],
                [c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)],
            ]),
            GateOp::X(_) => Some([[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]),
            GateOp::Z(_) => Some([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]]),
            GateOp::Rz(_, phi) => {
                let half = Complex64::from_polar(1.0, phi / 2.0);
                Some([[half.conj(), c(0.0, 0.0)], [c(0.0, 0.0), half]])
            }
            GateOp::EquatorialPulse(_, phi) => {
                let minus_i = c(0.0, -1.0);
                let e_minus = Complex64::from_polar(1.0, -phi);
                let e_plus = Complex64::from_polar(1.0, *phi);
                Some([
                    [c(FRAC_1_SQRT_2, 0.0), minus_i * e_minus * FRAC_1_SQRT_2],
                    [minus_i * e_plus * FRAC_1_SQRT_2, c(FRAC_1_SQRT_2, 0.0)],
                ])
            }
            GateOp::Cnot { .. } | GateOp::Mcz(_) => None,
        }
    }
}
