use num_complex::Complex64;

use super::eigen;
use super::StateVector;
use crate::error::{Error, Result};

/// Dense Hermitian density matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != dim * dim || dim == 0 {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        Ok(DensityMatrix { dim, entries })
    }

    /// Projector |psi><psi| onto a pure state.
    pub fn pure(state: &StateVector) -> Self {
        let amps = state.amplitudes();
        let dim = amps.len();
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                entries[i * dim + j] = amps[i] * amps[j].conj();
            }
        }
        DensityMatrix { dim, entries }
    }

    /// The maximally mixed state I/dim.
    pub fn maximally_mixed(dim: usize) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        DensityMatrix { dim, entries }
    }

    /// Convex mixture p*a + (1-p)*b.
    pub fn mix(a: &Self, b: &Self, p: f64) -> Result<Self> {
        if a.dim != b.dim {
            return Err(Error::DimensionMismatch {
                expected: a.dim,
                got: b.dim,
            });
        }
        let entries = a
            .entries
            .iter()
            .zip(&b.entries)
            .map(|(x, y)| x * p + y * (1.0 - p))
            .collect();
        Ok(DensityMatrix {
            dim: a.dim,
            entries,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest deviation from Hermitian symmetry.
    pub fn hermiticity_error(&self) -> f64 {
        let mut err = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                err = err.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        err
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        if self.dim == 2 {
            let (hi, lo) =
                eigen::eig2_hermitian(self.get(0, 0).re, self.get(0, 1), self.get(1, 1).re);
            vec![hi, lo]
        } else {
            self.eigen().0
        }
    }

    /// Eigendecomposition (values descending, vectors as columns).
    pub fn eigen(&self) -> (Vec<f64>, Vec<Complex64>) {
        eigen::eigh(&self.entries, self.dim)
    }

    /// Checks the density-matrix contract: Hermitian within 1e-10, unit trace
    /// within 1e-10, eigenvalues >= -1e-9.
    pub fn validate(&self) -> Result<()> {
        if self.hermiticity_error() > 1e-10 {
            return Err(Error::Parse("matrix is not Hermitian".into()));
        }
        let t = self.trace();
        if (t.re - 1.0).abs() > 1e-10 || t.im.abs() > 1e-10 {
            return Err(Error::Parse(format!("trace {} is not 1", t.re)));
        }
        let min = self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < -1e-9 {
            return Err(Error::Parse(format!("negative eigenvalue {min}")));
        }
        Ok(())
    }

    /// Partial trace down to the single qubit `qubit` (1-based, qubit 1 is the
    /// most significant bit of the index). The matrix dimension must be a
    /// power of two.
    pub fn reduced_single(&self, qubit: usize) -> Result<DensityMatrix> {
        let n = self.dim.trailing_zeros() as usize;
        if 1 << n != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim.next_power_of_two(),
                got: self.dim,
            });
        }
        if qubit == 0 || qubit > n {
            return Err(Error::InvalidQubit {
                qubit,
                num_qubits: n,
            });
        }
        let shift = n - qubit;
        let mask = 1usize << shift;
        let mut r = [Complex64::new(0.0, 0.0); 4];
        for i in 0..self.dim {
            let a = (i >> shift) & 1;
            // partner index with the qubit bit flipped contributes to the
            // off-diagonal; same index to the diagonal
            r[a * 2 + a] += self.get(i, i);
            if a == 0 {
                r[1] += self.get(i, i | mask); // <0|rho|1> block
                r[2] += self.get(i | mask, i);
            }
        }
        DensityMatrix::new(2, r.to_vec())
    }

    /// Overlap <target| rho |target>.
    pub fn fidelity_pure(&self, target: &StateVector) -> Result<f64> {
        let amps = target.amplitudes();
        if amps.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: amps.len(),
            });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += amps[i].conj() * self.get(i, j) * amps[j];
            }
        }
        Ok(acc.re)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::CanonicalState;

    #[test]
    fn pure_projector_fidelity_is_one() {
        let psi2 = StateVector::canonical(CanonicalState::Psi2).unwrap();
        let rho = DensityMatrix::pure(&psi2);
        rho.validate().unwrap();
        assert!((rho.fidelity_pure(&psi2).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn maximally_mixed_fidelity() {
        let psi2 = StateVector::canonical(CanonicalState::Psi2).unwrap();
        let rho = DensityMatrix::maximally_mixed(16);
        assert!((rho.fidelity_pure(&psi2).unwrap() - 1.0 / 16.0).abs() < 1e-12);
    }

    #[test]
    fn mixed_state_fidelity_by_linearity() {
        // 0.9 * |psi2><psi2| + 0.1 * I/16 -> 0.9 + 0.1/16 = 0.90625
        let psi2 = StateVector::canonical(CanonicalState::Psi2).unwrap();
        let rho = DensityMatrix::mix(
            &DensityMatrix::pure(&psi2),
            &DensityMatrix::maximally_mixed(16),
            0.9,
        )
        .unwrap();
        assert!((rho.fidelity_pure(&psi2).unwrap() - 0.90625).abs() < 1e-12);
    }

    #[test]
    fn reduced_single_of_pure_ghz_is_maximally_mixed() {
        let psi2 = StateVector::canonical(CanonicalState::Psi2).unwrap();
        let rho = DensityMatrix::pure(&psi2);
        for q in 1..=4 {
            let r = rho.reduced_single(q).unwrap();
            assert!((r.get(0, 0).re - 0.5).abs() < 1e-12);
            assert!((r.get(1, 1).re - 0.5).abs() < 1e-12);
            assert!(r.get(0, 1).norm() < 1e-12);
        }
    }

    #[test]
    fn reduced_single_matches_statevector_route() {
        let w4 = StateVector::canonical(CanonicalState::WN(4)).unwrap();
        let rho = DensityMatrix::pure(&w4);
        for q in 1..=4 {
            let a = rho.reduced_single(q).unwrap();
            let b = w4.reduced_density(q).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    assert!((a.get(i, j) - b.get(i, j)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn fidelity_dimension_mismatch() {
        let epr = StateVector::canonical(CanonicalState::Epr).unwrap();
        let rho = DensityMatrix::maximally_mixed(16);
        assert!(rho.fidelity_pure(&epr).is_err());
    }
}
