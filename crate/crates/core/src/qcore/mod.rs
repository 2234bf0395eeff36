//! Dense pure-state algebra for small qubit registers.
//!
//! Qubit indices are 1-based throughout: qubit 1 is the most significant bit
//! of the amplitude index, so |HVHH> for four photons is index 0b0100 with
//! |H> = |0> and |V> = |1>. All values are immutable after construction and
//! every operation is a pure function.

mod density;
mod eigen;

pub use density::DensityMatrix;
pub(crate) use eigen::eig2_hermitian;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported register: 4096 amplitudes.
pub const MAX_QUBITS: usize = 12;

/// Squared-norm threshold below which a branch counts as annihilated.
pub const ANNIHILATION_THRESHOLD: f64 = 1e-14;

/// Normalized pure state of `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

/// Named states used throughout the protocols.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CanonicalState {
    /// Four-qubit state (|HHHH>+|VVVV>)*sqrt(3)/3 + (|HV>+|VH>)(|HV>+|VH>)*sqrt(3)/6.
    Psi1,
    /// Four-qubit GHZ state.
    Psi2,
    GhzN(usize),
    WN(usize),
    Epr,
    Basis(usize, usize),
}

/// Arbitrary single-qubit operator; filters need not be unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalOperator {
    entries: [Complex64; 4],
}

impl LocalOperator {
    pub fn new(entries: [Complex64; 4]) -> Self {
        assert!(
            entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()),
            "operator entries must be finite"
        );
        LocalOperator { entries }
    }

    pub fn from_rows(r0: [Complex64; 2], r1: [Complex64; 2]) -> Self {
        Self::new([r0[0], r0[1], r1[0], r1[1]])
    }

    pub fn identity() -> Self {
        Self::diag(1.0.into(), 1.0.into())
    }

    pub fn diag(a: Complex64, b: Complex64) -> Self {
        Self::new([a, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), b])
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * 2 + j]
    }

    /// Matrix product self * rhs (apply rhs first).
    pub fn compose(&self, rhs: &LocalOperator) -> LocalOperator {
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for i in 0..2 {
            for j in 0..2 {
                out[i * 2 + j] = self.get(i, 0) * rhs.get(0, j) + self.get(i, 1) * rhs.get(1, j);
            }
        }
        LocalOperator { entries: out }
    }
}

/// Vector of per-qubit maximal marginal eigenvalues, each in [1/2, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectraPoint {
    values: Vec<f64>,
}

impl SpectraPoint {
    /// Validated constructor for externally supplied points.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: 0,
            });
        }
        for &v in &values {
            if !(0.5 - 1e-9..=1.0 + 1e-9).contains(&v) {
                return Err(Error::SpectraRange(v));
            }
        }
        Ok(SpectraPoint { values })
    }

    pub(crate) fn new_unchecked(values: Vec<f64>) -> Self {
        SpectraPoint { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// On-disk representation of a state: `{"num_qubits": n, "amplitudes": [[re, im], ...]}`.
#[derive(Serialize, Deserialize)]
struct StateFile {
    num_qubits: usize,
    amplitudes: Vec<[f64; 2]>,
}

impl StateVector {
    /// Builds a state from raw amplitudes, normalizing them.
    pub fn from_amplitudes(num_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::QubitCount(num_qubits));
        }
        let expected = 1usize << num_qubits;
        if amps.len() != expected {
            return Err(Error::AmplitudeCount {
                expected,
                got: amps.len(),
            });
        }
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if !norm_sqr.is_finite() || norm_sqr < ANNIHILATION_THRESHOLD {
            return Err(Error::Annihilated(norm_sqr));
        }
        let scale = 1.0 / norm_sqr.sqrt();
        let amps = amps.into_iter().map(|a| a * scale).collect();
        Ok(StateVector { num_qubits, amps })
    }

    /// Computational basis state |index>.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::QubitCount(num_qubits));
        }
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::BasisIndex { index, num_qubits });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { num_qubits, amps })
    }

    pub fn canonical(which: CanonicalState) -> Result<Self> {
        match which {
            CanonicalState::Psi1 => {
                let heavy = 3f64.sqrt() / 3.0;
                let light = 3f64.sqrt() / 6.0;
                let mut amps = vec![Complex64::new(0.0, 0.0); 16];
                amps[0b0000] = heavy.into();
                amps[0b1111] = heavy.into();
                // (|HV>+|VH>)(|HV>+|VH>) on qubit pairs (1,2) and (3,4)
                for idx in [0b0101, 0b0110, 0b1001, 0b1010] {
                    amps[idx] = light.into();
                }
                StateVector::from_amplitudes(4, amps)
            }
            CanonicalState::Psi2 => StateVector::canonical(CanonicalState::GhzN(4)),
            CanonicalState::GhzN(n) => {
                if n == 0 || n > MAX_QUBITS {
                    return Err(Error::QubitCount(n));
                }
                let dim = 1usize << n;
                let mut amps = vec![Complex64::new(0.0, 0.0); dim];
                amps[0] = std::f64::consts::FRAC_1_SQRT_2.into();
                amps[dim - 1] = std::f64::consts::FRAC_1_SQRT_2.into();
                StateVector::from_amplitudes(n, amps)
            }
            CanonicalState::WN(n) => {
                if n == 0 || n > MAX_QUBITS {
                    return Err(Error::QubitCount(n));
                }
                let dim = 1usize << n;
                let mut amps = vec![Complex64::new(0.0, 0.0); dim];
                let a = 1.0 / (n as f64).sqrt();
                for k in 0..n {
                    amps[1 << k] = a.into();
                }
                StateVector::from_amplitudes(n, amps)
            }
            CanonicalState::Epr => StateVector::canonical(CanonicalState::GhzN(2)),
            CanonicalState::Basis(n, index) => StateVector::basis(n, index),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    fn check_qubit(&self, qubit: usize) -> Result<usize> {
        if qubit == 0 || qubit > self.num_qubits {
            return Err(Error::InvalidQubit {
                qubit,
                num_qubits: self.num_qubits,
            });
        }
        // shift that isolates the qubit's bit in an amplitude index
        Ok(self.num_qubits - qubit)
    }

    /// Applies single-qubit operators to distinct qubits simultaneously and
    /// renormalizes. The second return value is the squared norm of the
    /// unnormalized image over the squared norm of the input: for operators
    /// with largest singular value <= 1 this is the pass probability of the
    /// corresponding filter branch.
    pub fn apply_local(&self, ops: &[(usize, LocalOperator)]) -> Result<(StateVector, f64)> {
        for (i, (qa, _)) in ops.iter().enumerate() {
            for (qb, _) in &ops[i + 1..] {
                if qa == qb {
                    return Err(Error::DuplicateQubit);
                }
            }
        }
        let before = self.norm_sqr();
        let mut amps = self.amps.clone();
        for &(qubit, ref op) in ops {
            let shift = self.check_qubit(qubit)?;
            let mask = 1usize << shift;
            for i in 0..amps.len() {
                if i & mask == 0 {
                    let a0 = amps[i];
                    let a1 = amps[i | mask];
                    amps[i] = op.get(0, 0) * a0 + op.get(0, 1) * a1;
                    amps[i | mask] = op.get(1, 0) * a0 + op.get(1, 1) * a1;
                }
            }
        }
        let after: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if after < ANNIHILATION_THRESHOLD {
            return Err(Error::Annihilated(after));
        }
        let success = after / before;
        let scale = 1.0 / after.sqrt();
        let amps = amps.into_iter().map(|a| a * scale).collect();
        Ok((
            StateVector {
                num_qubits: self.num_qubits,
                amps,
            },
            success,
        ))
    }

    /// Projects `qubit` onto `outcome`, removes it from the register, and
    /// renormalizes. Returns the conditional state (remaining qubits keep
    /// their order) and the Born probability of the outcome.
    pub fn postselect(&self, qubit: usize, outcome: u8) -> Result<(StateVector, f64)> {
        if self.num_qubits < 2 {
            return Err(Error::QubitCount(self.num_qubits));
        }
        if outcome > 1 {
            return Err(Error::InvalidOutcome(outcome));
        }
        let shift = self.check_qubit(qubit)?;
        let low_mask = (1usize << shift) - 1;
        let dim = self.amps.len() / 2;
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        let mut prob = 0.0;
        for i in 0..self.amps.len() {
            let bit = (i >> shift) & 1;
            if bit as u8 == outcome {
                let reduced = ((i >> (shift + 1)) << shift) | (i & low_mask);
                amps[reduced] = self.amps[i];
                prob += self.amps[i].norm_sqr();
            }
        }
        if prob < ANNIHILATION_THRESHOLD {
            return Err(Error::Annihilated(prob));
        }
        let scale = 1.0 / prob.sqrt();
        for a in &mut amps {
            *a *= scale;
        }
        Ok((
            StateVector {
                num_qubits: self.num_qubits - 1,
                amps,
            },
            prob,
        ))
    }

    /// Single-qubit reduced density matrix (partial trace over the rest).
    pub fn reduced_density(&self, qubit: usize) -> Result<DensityMatrix> {
        let shift = self.check_qubit(qubit)?;
        let mask = 1usize << shift;
        let mut r00 = 0.0f64;
        let mut r11 = 0.0f64;
        let mut r01 = Complex64::new(0.0, 0.0);
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let a0 = self.amps[i];
                let a1 = self.amps[i | mask];
                r00 += a0.norm_sqr();
                r11 += a1.norm_sqr();
                r01 += a0 * a1.conj();
            }
        }
        DensityMatrix::new(2, vec![r00.into(), r01, r01.conj(), r11.into()])
    }

    /// The vector of maximal marginal eigenvalues, one entry per qubit.
    pub fn local_spectra(&self) -> SpectraPoint {
        let values = (1..=self.num_qubits)
            .map(|q| {
                let rho = self.reduced_density(q).expect("qubit index in range");
                let (hi, _) = eig2_hermitian(rho.get(0, 0).re, rho.get(0, 1), rho.get(1, 1).re);
                hi
            })
            .collect();
        SpectraPoint::new_unchecked(values)
    }

    /// Schmidt coefficients of a two-qubit state: the singular values of the
    /// 2x2 amplitude matrix, largest first.
    pub fn schmidt_coefficients(&self) -> Result<(f64, f64)> {
        if self.num_qubits != 2 {
            return Err(Error::QubitCount(self.num_qubits));
        }
        // singular values = sqrt of eigenvalues of M^dagger M
        let m = [self.amps[0], self.amps[1], self.amps[2], self.amps[3]];
        let g00 = m[0].norm_sqr() + m[2].norm_sqr();
        let g11 = m[1].norm_sqr() + m[3].norm_sqr();
        let g01 = m[0].conj() * m[1] + m[2].conj() * m[3];
        let (hi, lo) = eig2_hermitian(g00, g01, g11);
        Ok((hi.max(0.0).sqrt(), lo.max(0.0).sqrt()))
    }

    /// Serializes to the state file format.
    pub fn to_json(&self) -> String {
        let file = StateFile {
            num_qubits: self.num_qubits,
            amplitudes: self.amps.iter().map(|a| [a.re, a.im]).collect(),
        };
        serde_json::to_string_pretty(&file).expect("state serialization cannot fail")
    }

    /// Parses the state file format; amplitudes are normalized on load.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: StateFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let amps = file
            .amplitudes
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        StateVector::from_amplitudes(file.num_qubits, amps)
    }
}

/// Convenience form of [`DensityMatrix::fidelity_pure`].
pub fn fidelity_pure(rho: &DensityMatrix, target: &StateVector) -> Result<f64> {
    rho.fidelity_pure(target)
}
