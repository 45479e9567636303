//! Dense statevector engine: in-place gate kernels over strided amplitude
//! pairs, stochastic noise insertion, and measurement sampling.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;

use crate::circuit::{Circuit, CircuitOp};
use crate::error::{Error, Result};
use crate::gates::{GateOp, Mat2};
use crate::noise::NoiseResolver;

pub const MAX_PURE_QUBITS: usize = 16;

/// Normalized complex amplitude vector over 2^n basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

/// |0...0> on `n` qubits.
pub fn zero_state(n: usize) -> Result<PureState> {
    if !(1..=MAX_PURE_QUBITS).contains(&n) {
        return Err(Error::Size {
            n,
            min: 1,
            max: MAX_PURE_QUBITS,
        });
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    amps[0] = Complex64::new(1.0, 0.0);
    Ok(PureState { n_qubits: n, amps })
}

impl PureState {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let n = amps.len().trailing_zeros() as usize;
        if amps.len() < 2 || amps.len() != 1 << n || n > MAX_PURE_QUBITS {
            return Err(Error::Size {
                n,
                min: 1,
                max: MAX_PURE_QUBITS,
            });
        }
        Ok(PureState { n_qubits: n, amps })
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probability(&self, index: u64) -> f64 {
        self.amps[index as usize].norm_sqr()
    }

    /// Apply one gate in place.
    pub fn apply_gate(&mut self, gate: &GateOp) -> Result<()> {
        gate.validate(self.n_qubits)?;
        match gate {
            GateOp::H(q) | GateOp::EquatorialPulse(q, _) => {
                let u = gate.unitary2().expect("single-qubit gate");
                self.apply_single(*q, &u);
            }
            GateOp::X(q) => self.apply_x(*q),
            GateOp::Z(q) => self.apply_z_mask(1 << q),
            GateOp::Rz(q, phi) => self.apply_rz(*q, *phi),
            GateOp::Cnot { control, target } => self.apply_cnot(*control, *target),
            GateOp::Mcz(qubits) => {
                let mut mask = 0u64;
                for &q in qubits {
                    mask |= 1 << q;
                }
                self.apply_all_ones_phase(mask);
            }
        }
        Ok(())
    }

    fn apply_single(&mut self, q: usize, u: &Mat2) {
        let step = 1 << q;
        let len = self.amps.len();
        let mut base = 0;
        while base < len {
            for j in base..base + step {
                let k = j + step;
                let a = self.amps[j];
                let b = self.amps[k];
                self.amps[j] = u[0][0] * a + u[0][1] * b;
                self.amps[k] = u[1][0] * a + u[1][1] * b;
            }
            base += step << 1;
        }
    }

    fn apply_x(&mut self, q: usize) {
        let step = 1 << q;
        let len = self.amps.len();
        let mut base = 0;
        while base < len {
            for j in base..base + step {
                self.amps.swap(j, j + step);
            }
            base += step << 1;
        }
    }

    fn apply_rz(&mut self, q: usize, phi: f64) {
        let plus = Complex64::from_polar(1.0, phi / 2.0);
        let minus = plus.conj();
        let bit = 1usize << q;
        for (i, a) in self.amps.iter_mut().enumerate() {
            *a *= if i & bit != 0 { plus } else { minus };
        }
    }

    fn apply_cnot(&mut self, control: usize, target: usize) {
        let cbit = 1usize << control;
        let tbit = 1usize << target;
        for i in 0..self.amps.len() {
            if i & cbit != 0 && i & tbit == 0 {
                self.amps.swap(i, i | tbit);
            }
        }
    }

    /// Flip the sign of every basis state with odd parity over `mask`.
    /// Equivalent to applying Z to each set bit of `mask`.
    pub fn apply_z_mask(&mut self, mask: u64) {
        if mask == 0 {
            return;
        }
        for (i, a) in self.amps.iter_mut().enumerate() {
            if (i as u64 & mask).count_ones() & 1 == 1 {
                *a = -*a;
            }
        }
    }

    fn apply_all_ones_phase(&mut self, mask: u64) {
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i as u64 & mask == mask {
                *a = -*a;
            }
        }
    }

    /// Draw one measurement outcome in the computational basis.
    pub fn sample_outcome(&self, rng: &mut impl Rng) -> u64 {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (i, a) in self.amps.iter().enumerate() {
            acc += a.norm_sqr();
            if u < acc {
                return i as u64;
            }
        }
        (self.amps.len() - 1) as u64
    }

    /// Draw `shots` independent outcomes from |amplitude|^2.
    pub fn sample_counts(&self, shots: usize, rng: &mut impl Rng) -> Result<Counts> {
        if shots == 0 {
            return Err(Error::Parameter {
                name: "shots",
                value: 0.0,
                min: 1.0,
                max: f64::INFINITY,
            });
        }
        let mut cum = Vec::with_capacity(self.amps.len());
        let mut acc = 0.0;
        for a in &self.amps {
            acc += a.norm_sqr();
            cum.push(acc);
        }
        let total = acc;
        let mut counts = Counts::new(self.n_qubits);
        for _ in 0..shots {
            let u: f64 = rng.random::<f64>() * total;
            let idx = cum.partition_point(|&c| c <= u).min(self.amps.len() - 1);
            counts.record(idx as u64);
        }
        Ok(counts)
    }
}

/// Run a circuit, resolving each noise marker through `resolver`.
pub fn apply_circuit<R: NoiseResolver>(
    state: &mut PureState,
    circuit: &Circuit,
    resolver: &mut R,
) -> Result<()> {
    if circuit.n_qubits != state.n_qubits {
        return Err(Error::Shape {
            circuit: circuit.n_qubits,
            state: state.n_qubits,
        });
    }
    circuit.validate()?;
    apply_ops(state, &circuit.ops, 0, resolver)
}

/// Run a slice of ops; `site_offset` numbers the noise sites seen so far.
/// Used by the trajectory runner to resume after a cached prefix.
pub fn apply_ops<R: NoiseResolver>(
    state: &mut PureState,
    ops: &[CircuitOp],
    site_offset: usize,
    resolver: &mut R,
) -> Result<()> {
    let mut site_index = site_offset;
    for op in ops {
        match op {
            CircuitOp::Gate(g) => state.apply_gate(g)?,
            CircuitOp::Noise(site) => {
                let mask = resolver.z_mask(site_index, &site.qubits);
                state.apply_z_mask(mask);
                site_index += 1;
            }
        }
    }
    Ok(())
}

/// Render a basis index as a bitstring, qubit 0 rightmost.
pub fn bitstring(index: u64, n_qubits: usize) -> String {
    (0..n_qubits)
        .rev()
        .map(|q| if index >> q & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Measurement histogram over basis states.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Counts {
    n_qubits: usize,
    map: BTreeMap<u64, u64>,
    total: u64,
}

impl Counts {
    pub fn new(n_qubits: usize) -> Self {
        Counts {
            n_qubits,
            map: BTreeMap::new(),
            total: 0,
        }
    }

    pub fn record(&mut self, index: u64) {
        *self.map.entry(index).or_insert(0) += 1;
        self.total += 1;
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn get(&self, index: u64) -> u64 {
        self.map.get(&index).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.map.iter().map(|(&k, &v)| (k, v))
    }

    pub fn frequency(&self, index: u64) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        self.get(index) as f64 / self.total as f64
    }

    /// Sum over outcomes of (-1)^popcount weighted by frequency.
    pub fn parity_expectation(&self) -> Result<f64> {
        if self.total == 0 {
            return Err(Error::EmptyInput {
                what: "measurement histogram",
            });
        }
        let signed: i64 = self
            .map
            .iter()
            .map(|(&idx, &cnt)| {
                let sign = if idx.count_ones() & 1 == 1 { -1i64 } else { 1 };
                sign * cnt as i64
            })
            .sum();
        Ok(signed as f64 / self.total as f64)
    }

    /// Histogram keyed by rendered bitstrings, for display and reports.
    pub fn to_bitstring_map(&self) -> BTreeMap<String, u64> {
        self.map
            .iter()
            .map(|(&k, &v)| (bitstring(k, self.n_qubits), v))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::{ForcedZ, NoNoise};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn amp(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn zero_state_examples() {
        let s = zero_state(1).unwrap();
        assert_eq!(s.amplitudes(), &[amp(1.0), amp(0.0)]);
        let s = zero_state(2).unwrap();
        assert_eq!(s.amplitudes().len(), 4);
        assert_eq!(s.amplitudes()[0], amp(1.0));
        assert!(matches!(zero_state(17), Err(Error::Size { .. })));
        assert!(matches!(zero_state(0), Err(Error::Size { .. })));
    }

    #[test]
    fn hadamard_on_zero() {
        let mut s = zero_state(1).unwrap();
        s.apply_gate(&GateOp::H(0)).unwrap();
        assert!((s.amplitudes()[0] - amp(SQRT_HALF)).norm() < 1e-12);
        assert!((s.amplitudes()[1] - amp(SQRT_HALF)).norm() < 1e-12);
    }

    #[test]
    fn cnot_makes_bell_state() {
        // (|00> + |01>)/sqrt2 with qubit 0 in superposition -> (|00> + |11>)/sqrt2
        let mut s = zero_state(2).unwrap();
        s.apply_gate(&GateOp::H(0)).unwrap();
        s.apply_gate(&GateOp::Cnot {
            control: 0,
            target: 1,
        })
        .unwrap();
        assert!((s.amplitudes()[0] - amp(SQRT_HALF)).norm() < 1e-12);
        assert!((s.amplitudes()[3] - amp(SQRT_HALF)).norm() < 1e-12);
        assert!(s.amplitudes()[1].norm() < 1e-12);
        assert!(s.amplitudes()[2].norm() < 1e-12);
    }

    #[test]
    fn mcz_flips_sign_of_all_ones() {
        let mut s = zero_state(3).unwrap();
        for q in 0..3 {
            s.apply_gate(&GateOp::X(q)).unwrap();
        }
        s.apply_gate(&GateOp::Mcz(vec![0, 1, 2])).unwrap();
        assert!((s.amplitudes()[7] - amp(-1.0)).norm() < 1e-12);
    }

    #[test]
    fn apply_gate_rejects_bad_index() {
        let mut s = zero_state(2).unwrap();
        assert!(matches!(
            s.apply_gate(&GateOp::H(2)),
            Err(Error::Index { .. })
        ));
    }

    #[test]
    fn empty_circuit_is_identity() {
        let mut s = zero_state(2).unwrap();
        s.apply_gate(&GateOp::H(0)).unwrap();
        let before = s.clone();
        apply_circuit(&mut s, &Circuit::new(2), &mut NoNoise).unwrap();
        assert_eq!(s, before);
    }

    #[test]
    fn ghz3_circuit_amplitudes() {
        let mut c = Circuit::new(3);
        c.push_gate(GateOp::H(0));
        c.push_gate(GateOp::Cnot {
            control: 0,
            target: 1,
        });
        c.push_gate(GateOp::Cnot {
            control: 1,
            target: 2,
        });
        let mut s = zero_state(3).unwrap();
        apply_circuit(&mut s, &c, &mut NoNoise).unwrap();
        assert!((s.amplitudes()[0] - amp(SQRT_HALF)).norm() < 1e-12);
        assert!((s.amplitudes()[7] - amp(SQRT_HALF)).norm() < 1e-12);
        for i in 1..7 {
            assert!(s.amplitudes()[i].norm() < 1e-12);
        }
    }

    #[test]
    fn forced_z_flips_superposition_phase() {
        let mut c = Circuit::new(1);
        c.push_gate(GateOp::H(0));
        c.push_noise(vec![0]);
        let mut s = zero_state(1).unwrap();
        apply_circuit(&mut s, &c, &mut ForcedZ::new(vec![0b1])).unwrap();
        // (|0> - |1>)/sqrt2
        assert!((s.amplitudes()[0] - amp(SQRT_HALF)).norm() < 1e-12);
        assert!((s.amplitudes()[1] - amp(-SQRT_HALF)).norm() < 1e-12);
    }

    #[test]
    fn circuit_qubit_mismatch_is_shape_error() {
        let mut s = zero_state(2).unwrap();
        let c = Circuit::new(3);
        assert!(matches!(
            apply_circuit(&mut s, &c, &mut NoNoise),
            Err(Error::Shape { .. })
        ));
    }

    #[test]
    fn sampling_deterministic_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s = zero_state(1).unwrap();
        let counts = s.sample_counts(100, &mut rng).unwrap();
        assert_eq!(counts.get(0), 100);
        assert_eq!(counts.total(), 100);

        let mut one = zero_state(1).unwrap();
        one.apply_gate(&GateOp::X(0)).unwrap();
        let counts = one.sample_counts(1, &mut rng).unwrap();
        assert_eq!(counts.get(1), 1);
        assert_eq!(counts.to_bitstring_map().get("1"), Some(&1));
    }

    #[test]
    fn bell_state_sampling_within_binomial_bound() {
        let mut s = zero_state(2).unwrap();
        s.apply_gate(&GateOp::H(0)).unwrap();
        s.apply_gate(&GateOp::Cnot {
            control: 0,
            target: 1,
        })
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let counts = s.sample_counts(2000, &mut rng).unwrap();
        let bound = 4.0 * (2000.0f64 * 0.25).sqrt();
        assert!((counts.get(0) as f64 - 1000.0).abs() < bound);
        assert!((counts.get(3) as f64 - 1000.0).abs() < bound);
        assert_eq!(counts.get(1), 0);
        assert_eq!(counts.get(2), 0);
    }

    #[test]
    fn sampling_is_reproducible_for_a_seed() {
        let mut s = zero_state(3).unwrap();
        for q in 0..3 {
            s.apply_gate(&GateOp::H(q)).unwrap();
        }
        let a = s
            .sample_counts(500, &mut ChaCha8Rng::seed_from_u64(3))
            .unwrap();
        let b = s
            .sample_counts(500, &mut ChaCha8Rng::seed_from_u64(3))
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parity_expectation_examples() {
        let mut c = Counts::new(2);
        for _ in 0..500 {
            c.record(0b00);
            c.record(0b11);
        }
        assert_eq!(c.parity_expectation().unwrap(), 1.0);

        let mut c = Counts::new(2);
        for _ in 0..1000 {
            c.record(0b01);
        }
        assert_eq!(c.parity_expectation().unwrap(), -1.0);

        let mut c = Counts::new(2);
        for _ in 0..500 {
            c.record(0b00);
            c.record(0b01);
        }
        assert_eq!(c.parity_expectation().unwrap(), 0.0);

        assert!(Counts::new(2).parity_expectation().is_err());
    }

    #[test]
    fn bitstring_renders_qubit0_rightmost() {
        assert_eq!(bitstring(6, 3), "110");
        assert_eq!(bitstring(1, 3), "001");
        assert_eq!(bitstring(0, 1), "0");
    }
}
