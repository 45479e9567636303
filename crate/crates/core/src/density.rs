//! Density-operator engine: deterministic channel application used as
//! numerical ground truth for the stochastic trajectory backend.

use num_complex::Complex64;

use crate::circuit::{Circuit, CircuitOp};
use crate::error::{Error, Result};
use crate::gates::{GateOp, Mat2};
use crate::noise::phase_flip_kraus;
use crate::statevector::PureState;

pub const MAX_MIXED_QUBITS: usize = 10;

const KRAUS_COMPLETENESS_TOL: f64 = 1e-12;

/// Density matrix in row-major order over 2^n basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedState {
    n_qubits: usize,
    dim: usize,
    rho: Vec<Complex64>,
}

impl MixedState {
    /// Outer product |psi><psi| of a pure state.
    pub fn from_pure(state: &PureState) -> Result<Self> {
        let n = state.n_qubits();
        if n > MAX_MIXED_QUBITS {
            return Err(Error::Size {
                n,
                min: 1,
                max: MAX_MIXED_QUBITS,
            });
        }
        let amps = state.amplitudes();
        let dim = amps.len();
        let mut rho = vec![Complex64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                rho[r * dim + c] = amps[r] * amps[c].conj();
            }
        }
        Ok(MixedState {
            n_qubits: n,
            dim,
            rho,
        })
    }

    /// Classical mixture with the given diagonal; off-diagonals zero.
    pub fn from_diagonal(probs: &[f64]) -> Result<Self> {
        let n = probs.len().trailing_zeros() as usize;
        if probs.len() < 2 || probs.len() != 1 << n || n > MAX_MIXED_QUBITS {
            return Err(Error::Size {
                n,
                min: 1,
                max: MAX_MIXED_QUBITS,
            });
        }
        let dim = probs.len();
        let mut rho = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (i, &p) in probs.iter().enumerate() {
            rho[i * dim + i] = Complex64::new(p, 0.0);
        }
        Ok(MixedState {
            n_qubits: n,
            dim,
            rho,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.rho[row * self.dim + col]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.rho[i * self.dim + i].re).sum()
    }

    /// Real diagonal in the computational basis.
    pub fn diagonal_probabilities(&self) -> Vec<f64> {
        (0..self.dim)
            .map(|i| self.rho[i * self.dim + i].re)
            .collect()
    }

    /// Expectation of the product of Z over all qubits.
    pub fn parity_expectation(&self) -> f64 {
        (0..self.dim)
            .map(|i| {
                let sign = if (i as u64).count_ones() & 1 == 1 {
                    -1.0
                } else {
                    1.0
                };
                sign * self.rho[i * self.dim + i].re
            })
            .sum()
    }

    /// Probability that measuring `qubit` yields 0.
    pub fn prob_qubit_zero(&self, qubit: usize) -> Result<f64> {
        if qubit >= self.n_qubits {
            return Err(Error::Index {
                index: qubit,
                n_qubits: self.n_qubits,
            });
        }
        let bit = 1usize << qubit;
        Ok((0..self.dim)
            .filter(|i| i & bit == 0)
            .map(|i| self.rho[i * self.dim + i].re)
            .sum())
    }

    pub fn max_hermiticity_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            for c in r..self.dim {
                let d = (self.rho[r * self.dim + c] - self.rho[c * self.dim + r].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// rho -> U rho U^dagger.
    pub fn apply_gate(&mut self, gate: &GateOp) -> Result<()> {
        gate.validate(self.n_qubits)?;
        match gate {
            GateOp::H(q) | GateOp::EquatorialPulse(q, _) => {
                let u = gate.unitary2().expect("single-qubit gate");
                self.left_mul(*q, &u);
                self.right_mul_dagger(*q, &u);
            }
            GateOp::X(q) => self.permute(|i| i ^ (1 << q)),
            GateOp::Z(q) => {
                let bit = 1usize << q;
                self.scale_diagonal_phases(|i| {
                    if i & bit != 0 {
                        Complex64::new(-1.0, 0.0)
                    } else {
                        Complex64::new(1.0, 0.0)
                    }
                });
            }
            GateOp::Rz(q, phi) => {
                let plus = Complex64::from_polar(1.0, phi / 2.0);
                let minus = plus.conj();
                let bit = 1usize << q;
                self.scale_diagonal_phases(|i| if i & bit != 0 { plus } else { minus });
            }
            GateOp::Cnot { control, target } => {
                let cbit = 1usize << control;
                let tbit = 1usize << target;
                self.permute(|i| if i & cbit != 0 { i ^ tbit } else { i });
            }
            GateOp::Mcz(qubits) => {
                let mut mask = 0usize;
                for &q in qubits {
                    mask |= 1 << q;
                }
                self.scale_diagonal_phases(|i| {
                    if i & mask == mask {
                        Complex64::new(-1.0, 0.0)
                    } else {
                        Complex64::new(1.0, 0.0)
                    }
                });
            }
        }
        Ok(())
    }

    /// rho -> sum_k K rho K^dagger with single-qubit Kraus operators on
    /// `target`. The set must satisfy sum K^dagger K = I within 1e-12.
    pub fn apply_channel(&mut self, kraus: &[Mat2], target: usize) -> Result<()> {
        if target >= self.n_qubits {
            return Err(Error::Index {
                index: target,
                n_qubits: self.n_qubits,
            });
        }
        let deviation = completeness_deviation(kraus);
        if deviation > KRAUS_COMPLETENESS_TOL {
            return Err(Error::Channel { deviation });
        }
        let mut acc = vec![Complex64::new(0.0, 0.0); self.rho.len()];
        let mut tmp = self.clone();
        for (i, k) in kraus.iter().enumerate() {
            if i > 0 {
                tmp.rho.copy_from_slice(&self.rho);
            }
            tmp.left_mul(target, k);
            tmp.right_mul_dagger(target, k);
            for (a, t) in acc.iter_mut().zip(&tmp.rho) {
                *a += t;
            }
        }
        self.rho = acc;
        Ok(())
    }

    fn left_mul(&mut self, q: usize, u: &Mat2) {
        let step = 1usize << q;
        for c in 0..self.dim {
            let mut base = 0;
            while base < self.dim {
                for r0 in base..base + step {
                    let r1 = r0 + step;
                    let a = self.rho[r0 * self.dim + c];
                    let b = self.rho[r1 * self.dim + c];
                    self.rho[r0 * self.dim + c] = u[0][0] * a + u[0][1] * b;
                    self.rho[r1 * self.dim + c] = u[1][0] * a + u[1][1] * b;
                }
                base += step << 1;
            }
        }
    }

    fn right_mul_dagger(&mut self, q: usize, u: &Mat2) {
        let step = 1usize << q;
        for r in 0..self.dim {
            let row = r * self.dim;
            let mut base = 0;
            while base < self.dim {
                for c0 in base..base + step {
                    let c1 = c0 + step;
                    let a = self.rho[row + c0];
                    let b = self.rho[row + c1];
                    self.rho[row + c0] = a * u[0][0].conj() + b * u[0][1].conj();
                    self.rho[row + c1] = a * u[1][0].conj() + b * u[1][1].conj();
                }
                base += step << 1;
            }
        }
    }

    /// rho(r,c) -> d(r) * conj(d(c)) * rho(r,c) for a diagonal unitary d.
    fn scale_diagonal_phases(&mut self, d: impl Fn(usize) -> Complex64) {
        for r in 0..self.dim {
            let dr = d(r);
            for c in 0..self.dim {
                self.rho[r * self.dim + c] *= dr * d(c).conj();
            }
        }
    }

    /// rho -> P rho P^dagger for an involutive basis permutation.
    fn permute(&mut self, pi: impl Fn(usize) -> usize) {
        let dim = self.dim;
        let old = self.rho.clone();
        for r in 0..dim {
            for c in 0..dim {
                self.rho[r * dim + c] = old[pi(r) * dim + pi(c)];
            }
        }
    }
}

/// Max deviation of sum K^dagger K from the identity.
pub fn completeness_deviation(kraus: &[Mat2]) -> f64 {
    let zero = Complex64::new(0.0, 0.0);
    let mut acc = [[zero, zero], [zero, zero]];
    for k in kraus {
        for (r, acc_row) in acc.iter_mut().enumerate() {
            for (c, cell) in acc_row.iter_mut().enumerate() {
                for row in k {
                    *cell += row[r].conj() * row[c];
                }
            }
        }
    }
    let mut worst = 0.0f64;
    for (r, acc_row) in acc.iter().enumerate() {
        for (c, cell) in acc_row.iter().enumerate() {
            let expect = if r == c {
                Complex64::new(1.0, 0.0)
            } else {
                zero
            };
            worst = worst.max((cell - expect).norm());
        }
    }
    worst
}

/// Run a circuit exactly, applying a phase-flip channel of probability `p`
/// to every qubit covered by each noise marker.
pub fn dm_apply_circuit(state: &mut MixedState, circuit: &Circuit, p: f64) -> Result<()> {
    if circuit.n_qubits != state.n_qubits {
        return Err(Error::Shape {
            circuit: circuit.n_qubits,
            state: state.n_qubits,
        });
    }
    circuit.validate()?;
    let kraus = phase_flip_kraus(p)?;
    for op in &circuit.ops {
        match op {
            CircuitOp::Gate(g) => state.apply_gate(g)?,
            CircuitOp::Noise(site) => {
                for &q in &site.qubits {
                    state.apply_channel(&kraus, q)?;
                }
            }
        }
    }
    Ok(())
}
