//! Simulated state tomography with Poisson counting noise.
//!
//! Counts are simulated for the full 3^n basis-setting set, reconstructed by
//! linear inversion over the Pauli basis, and projected to the nearest
//! density matrix in Frobenius norm (eigenvalue projection onto the
//! probability simplex). Error bars come from a parametric bootstrap that
//! resamples every count from a Poisson with the observed mean.
//!
//! Basis rotations, shared by count simulation and inversion:
//!
//! * Z: identity,
//! * X: (1/sqrt2) [[1, 1], [1, -1]],
//! * Y: (1/sqrt2) [[1, -i], [1, i]],
//!
//! so outcome 0 of an X (Y) measurement is the +1 eigenstate of sigma_x
//! (sigma_y). Setting `k` of a simulation with seed `s` draws from generator
//! stream `(s, k)`; bootstrap step `t` draws from stream `(s, t)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polytope;
use crate::qcore::{eig2_hermitian, DensityMatrix, SpectraPoint, StateVector};
use crate::rng::PhiloxStream;

/// Largest register with full 3^n tomography support.
pub const MAX_TOMO_QUBITS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Basis {
    X,
    Y,
    Z,
}

impl Basis {
    fn rotation(self) -> [Complex64; 4] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            Basis::Z => [
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
            ],
            Basis::X => [
                Complex64::new(h, 0.0),
                Complex64::new(h, 0.0),
                Complex64::new(h, 0.0),
                Complex64::new(-h, 0.0),
            ],
            Basis::Y => [
                Complex64::new(h, 0.0),
                Complex64::new(0.0, -h),
                Complex64::new(h, 0.0),
                Complex64::new(0.0, h),
            ],
        }
    }

    fn from_char(c: char) -> Result<Basis> {
        match c {
            'X' => Ok(Basis::X),
            'Y' => Ok(Basis::Y),
            'Z' => Ok(Basis::Z),
            other => Err(Error::InvalidSetting(other.to_string())),
        }
    }

    fn to_char(self) -> char {
        match self {
            Basis::X => 'X',
            Basis::Y => 'Y',
            Basis::Z => 'Z',
        }
    }
}

/// Per-qubit measurement bases for one tomography setting, qubit 1 first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MeasurementSetting {
    bases: Vec<Basis>,
}

impl MeasurementSetting {
    pub fn new(bases: Vec<Basis>) -> Self {
        MeasurementSetting { bases }
    }

    pub fn bases(&self) -> &[Basis] {
        &self.bases
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }
}

impl fmt::Display for MeasurementSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bases {
            write!(f, "{}", b.to_char())?;
        }
        Ok(())
    }
}

impl FromStr for MeasurementSetting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bases = s
            .chars()
            .map(Basis::from_char)
            .collect::<Result<Vec<_>>>()
            .map_err(|_| Error::InvalidSetting(s.to_string()))?;
        Ok(MeasurementSetting { bases })
    }
}

/// All 3^n settings in canonical order (X < Y < Z, qubit 1 most significant).
pub fn all_settings(num_qubits: usize) -> Vec<MeasurementSetting> {
    let mut out = Vec::with_capacity(3usize.pow(num_qubits as u32));
    let mut digits = vec![0usize; num_qubits];
    loop {
        out.push(MeasurementSetting::new(
            digits
                .iter()
                .map(|&d| [Basis::X, Basis::Y, Basis::Z][d])
                .collect(),
        ));
        // increment base-3 counter, last qubit fastest
        let mut i = num_qubits;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < 3 {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// Measured (or simulated) coincidence counts for a complete setting sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct TomoDataset {
    pub num_qubits: usize,
    /// Nominal expected counts per setting.
    pub n_set: u64,
    entries: Vec<(MeasurementSetting, Vec<u64>)>,
}

#[derive(Serialize, Deserialize)]
struct DatasetFile {
    num_qubits: usize,
    n_set: u64,
    counts: Vec<DatasetEntry>,
}

#[derive(Serialize, Deserialize)]
struct DatasetEntry {
    setting: String,
    counts: Vec<u64>,
}

impl TomoDataset {
    pub fn new(
        num_qubits: usize,
        n_set: u64,
        entries: Vec<(MeasurementSetting, Vec<u64>)>,
    ) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_TOMO_QUBITS {
            return Err(Error::TomoSize(num_qubits));
        }
        let dim = 1usize << num_qubits;
        for (setting, counts) in &entries {
            if setting.len() != num_qubits {
                return Err(Error::InvalidSetting(setting.to_string()));
            }
            if counts.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: counts.len(),
                });
            }
        }
        Ok(TomoDataset {
            num_qubits,
            n_set,
            entries,
        })
    }

    pub fn entries(&self) -> &[(MeasurementSetting, Vec<u64>)] {
        &self.entries
    }

    pub fn total_counts(&self) -> u64 {
        self.entries
            .iter()
            .map(|(_, c)| c.iter().sum::<u64>())
            .sum()
    }

    pub fn to_json(&self) -> String {
        let file = DatasetFile {
            num_qubits: self.num_qubits,
            n_set: self.n_set,
            counts: self
                .entries
                .iter()
                .map(|(s, c)| DatasetEntry {
                    setting: s.to_string(),
                    counts: c.clone(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("dataset serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: DatasetFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let entries = file
            .counts
            .into_iter()
            .map(|e| Ok((e.setting.parse()?, e.counts)))
            .collect::<Result<Vec<_>>>()?;
        TomoDataset::new(file.num_qubits, file.n_set, entries)
    }
}

/// Applies a single-qubit operator to a density matrix: rho -> U rho U^dag.
fn apply_rotation(
    entries: &mut [Complex64],
    dim: usize,
    num_qubits: usize,
    qubit: usize,
    u: &[Complex64; 4],
) {
    let shift = num_qubits - qubit;
    let mask = 1usize << shift;
    // rows
    for i in 0..dim {
        if i & mask == 0 {
            for c in 0..dim {
                let a = entries[i * dim + c];
                let b = entries[(i | mask) * dim + c];
                entries[i * dim + c] = u[0] * a + u[1] * b;
                entries[(i | mask) * dim + c] = u[2] * a + u[3] * b;
            }
        }
    }
    // columns (conjugated)
    for j in 0..dim {
        if j & mask == 0 {
            for r in 0..dim {
                let a = entries[r * dim + j];
                let b = entries[r * dim + (j | mask)];
                entries[r * dim + j] = u[0].conj() * a + u[1].conj() * b;
                entries[r * dim + (j | mask)] = u[2].conj() * a + u[3].conj() * b;
            }
        }
    }
}

/// Born-rule outcome probabilities of `rho` under one setting.
fn outcome_probabilities(rho: &DensityMatrix, setting: &MeasurementSetting) -> Vec<f64> {
    let dim = rho.dim();
    let n = setting.len();
    let mut work = rho.entries().to_vec();
    for (q, basis) in setting.bases().iter().enumerate() {
        if *basis != Basis::Z {
            apply_rotation(&mut work, dim, n, q + 1, &basis.rotation());
        }
    }
    (0..dim).map(|z| work[z * dim + z].re.max(0.0)).collect()
}

/// Simulates Poisson counts for every setting: outcome z of setting k draws
/// Poisson(n_set * p(z)) from generator stream (seed, k).
pub fn simulate_counts(rho: &DensityMatrix, n_set: u64, seed: u64) -> Result<TomoDataset> {
    let num_qubits = rho.dim().trailing_zeros() as usize;
    if 1 << num_qubits != rho.dim() || num_qubits == 0 || num_qubits > MAX_TOMO_QUBITS {
        return Err(Error::TomoSize(num_qubits));
    }
    if n_set == 0 {
        return Err(Error::NSetRange);
    }
    let entries = all_settings(num_qubits)
        .into_iter()
        .enumerate()
        .map(|(k, setting)| {
            let probs = outcome_probabilities(rho, &setting);
            let mut stream = PhiloxStream::new(seed, k as u64);
            let counts = probs
                .iter()
                .map(|&p| stream.poisson(n_set as f64 * p))
                .collect();
            (setting, counts)
        })
        .collect();
    TomoDataset::new(num_qubits, n_set, entries)
}

/// Pure-state convenience wrapper around [`simulate_counts`].
pub fn simulate_counts_pure(state: &StateVector, n_set: u64, seed: u64) -> Result<TomoDataset> {
    simulate_counts(&DensityMatrix::pure(state), n_set, seed)
}

/// Noise-free dataset with counts rounded from n_set * p; useful as the
/// infinite-statistics limit.
pub fn noiseless_counts(rho: &DensityMatrix, n_set: u64) -> Result<TomoDataset> {
    let num_qubits = rho.dim().trailing_zeros() as usize;
    if 1 << num_qubits != rho.dim() || num_qubits == 0 || num_qubits > MAX_TOMO_QUBITS {
        return Err(Error::TomoSize(num_qubits));
    }
    if n_set == 0 {
        return Err(Error::NSetRange);
    }
    let entries = all_settings(num_qubits)
        .into_iter()
        .map(|setting| {
            let counts = outcome_probabilities(rho, &setting)
                .iter()
                .map(|&p| (n_set as f64 * p).round() as u64)
                .collect();
            (setting, counts)
        })
        .collect();
    TomoDataset::new(num_qubits, n_set, entries)
}

/// Pauli string digit: 0 = I, 1 = X, 2 = Y, 3 = Z.
fn pauli_matrix(digit: usize) -> [Complex64; 4] {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    match digit {
        0 => [one, zero, zero, one],
        1 => [zero, one, one, zero],
        2 => [
            zero,
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            zero,
        ],
        3 => [one, zero, zero, -one],
        _ => unreachable!(),
    }
}

fn pauli_basis_of(digit: usize) -> Option<Basis> {
    match digit {
        1 => Some(Basis::X),
        2 => Some(Basis::Y),
        3 => Some(Basis::Z),
        _ => None,
    }
}

/// Linear inversion over the Pauli basis, then projection to the nearest
/// density matrix in Frobenius norm.
pub fn reconstruct(dataset: &TomoDataset) -> Result<DensityMatrix> {
    let n = dataset.num_qubits;
    let dim = 1usize << n;

    // index the dataset by setting and validate completeness
    let mut by_setting: BTreeMap<&MeasurementSetting, &Vec<u64>> = BTreeMap::new();
    for (s, c) in &dataset.entries {
        by_setting.insert(s, c);
    }
    let settings = all_settings(n);
    for s in &settings {
        if !by_setting.contains_key(s) {
            return Err(Error::MissingSetting(s.to_string()));
        }
    }
    if dataset.total_counts() == 0 {
        return Err(Error::EmptyDataset);
    }
    let totals: BTreeMap<&MeasurementSetting, f64> = by_setting
        .iter()
        .map(|(s, c)| (*s, c.iter().sum::<u64>() as f64))
        .collect();

    // expectation of every Pauli string, averaged over covering settings
    let num_strings = 4usize.pow(n as u32);
    let mut rho = vec![Complex64::new(0.0, 0.0); dim * dim];
    for p in 0..num_strings {
        let digits: Vec<usize> = (0..n)
            .map(|q| (p / 4usize.pow((n - 1 - q) as u32)) % 4)
            .collect();
        let expectation = if p == 0 {
            1.0
        } else {
            let mask: usize = digits
                .iter()
                .enumerate()
                .filter(|(_, &d)| d != 0)
                .map(|(q, _)| 1usize << (n - 1 - q))
                .sum();
            let mut acc = 0.0;
            let mut used = 0usize;
            for s in &settings {
                let covers = digits
                    .iter()
                    .zip(s.bases())
                    .all(|(&d, &b)| pauli_basis_of(d).is_none_or(|needed| needed == b));
                if !covers {
                    continue;
                }
                let total = totals[s];
                if total == 0.0 {
                    continue;
                }
                let counts = by_setting[s];
                let mut signed = 0.0;
                for (z, &c) in counts.iter().enumerate() {
                    let parity = (z & mask).count_ones() & 1;
                    let sign = if parity == 0 { 1.0 } else { -1.0 };
                    signed += sign * c as f64;
                }
                acc += signed / total;
                used += 1;
            }
            if used == 0 {
                return Err(Error::EmptyDataset);
            }
            acc / used as f64
        };

        // accumulate expectation * sigma_p / 2^n
        let weight = expectation / dim as f64;
        if weight == 0.0 {
            continue;
        }
        // build sigma_p by iterated Kronecker product
        let mut sigma = vec![Complex64::new(1.0, 0.0)];
        let mut size = 1usize;
        for &d in &digits {
            let m = pauli_matrix(d);
            let mut next = vec![Complex64::new(0.0, 0.0); (size * 2) * (size * 2)];
            for i in 0..size {
                for j in 0..size {
                    let v = sigma[i * size + j];
                    if v != Complex64::new(0.0, 0.0) {
                        for a in 0..2 {
                            for b in 0..2 {
                                next[(i * 2 + a) * (size * 2) + (j * 2 + b)] = v * m[a * 2 + b];
                            }
                        }
                    }
                }
            }
            sigma = next;
            size *= 2;
        }
        for (r, s) in rho.iter_mut().zip(&sigma) {
            *r += s * weight;
        }
    }

    let linear = DensityMatrix::new(dim, rho)?;
    Ok(project_to_density(&linear))
}

/// Nearest density matrix in Frobenius norm: eigendecompose and project the
/// spectrum onto the probability simplex.
pub fn project_to_density(m: &DensityMatrix) -> DensityMatrix {
    let dim = m.dim();
    let (w, v) = m.eigen();
    let projected = project_to_simplex(&w);
    let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..dim {
                if projected[k] != 0.0 {
                    acc += v[i * dim + k] * projected[k] * v[j * dim + k].conj();
                }
            }
            entries[i * dim + j] = acc;
        }
    }
    DensityMatrix::new(dim, entries).expect("projection preserves shape")
}

/// Euclidean projection of a vector onto {x >= 0, sum x = 1}.
fn project_to_simplex(values: &[f64]) -> Vec<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut acc = 0.0;
    let mut theta = 0.0;
    let mut rho = 0;
    for (j, &v) in sorted.iter().enumerate() {
        acc += v;
        let candidate = (1.0 - acc) / (j + 1) as f64;
        if v + candidate > 0.0 {
            rho = j + 1;
            theta = candidate;
        }
    }
    debug_assert!(rho > 0);
    values.iter().map(|&v| (v + theta).max(0.0)).collect()
}

/// Bootstrap summary of a tomography dataset.
#[derive(Debug, Clone)]
pub struct TomoResult {
    /// Reconstruction from the original dataset.
    pub rho: DensityMatrix,
    pub spectra_mean: SpectraPoint,
    pub spectra_std: Vec<f64>,
    /// Discriminating value over the bootstrap; present for 3 and 4 qubits
    /// (a three-qubit register is treated as qubits 2..4 with lambda_1 = 1).
    pub f_mean: Option<f64>,
    pub f_std: Option<f64>,
    pub bootstrap_steps: usize,
}

impl TomoResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&serde_json::json!({
            "spectra_mean": self.spectra_mean.values(),
            "spectra_std": self.spectra_std,
            "f_mean": self.f_mean,
            "f_std": self.f_std,
            "bootstrap_steps": self.bootstrap_steps,
        }))
        .expect("result serialization cannot fail")
    }
}

fn f_of_spectra(values: &[f64]) -> Option<f64> {
    match values.len() {
        4 => {
            let sp = SpectraPoint::new_unchecked(values.to_vec());
            polytope::f_value(&sp, 1).ok()
        }
        3 => Some(values.iter().sum::<f64>() - 1.0),
        _ => None,
    }
}

/// Parametric bootstrap: every count is resampled Poisson with the observed
/// mean, the state re-reconstructed, and spectra statistics accumulated.
/// Step `t` uses generator stream `(seed, t)`.
pub fn bootstrap_spectra(dataset: &TomoDataset, steps: usize, seed: u64) -> Result<TomoResult> {
    if steps < 2 {
        return Err(Error::BootstrapSteps(steps));
    }
    let rho = reconstruct(dataset)?;
    let n = dataset.num_qubits;

    let mut spectra_samples: Vec<Vec<f64>> = Vec::with_capacity(steps);
    let mut f_samples: Vec<f64> = Vec::with_capacity(steps);
    for t in 0..steps {
        let mut stream = PhiloxStream::new(seed, t as u64);
        let entries = dataset
            .entries
            .iter()
            .map(|(s, counts)| {
                let resampled = counts.iter().map(|&c| stream.poisson(c as f64)).collect();
                (s.clone(), resampled)
            })
            .collect();
        let resampled = TomoDataset::new(n, dataset.n_set, entries)?;
        let rho_t = reconstruct(&resampled)?;
        let spectra: Vec<f64> = (1..=n)
            .map(|q| {
                let r = rho_t.reduced_single(q).expect("qubit in range");
                eig2_hermitian(r.get(0, 0).re, r.get(0, 1), r.get(1, 1).re).0
            })
            .collect();
        if let Some(f) = f_of_spectra(&spectra) {
            f_samples.push(f);
        }
        spectra_samples.push(spectra);
    }

    let mean_std = |samples: &[f64]| -> (f64, f64) {
        let k = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / k;
        let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (k - 1.0);
        (mean, var.sqrt())
    };

    let mut spectra_mean = Vec::with_capacity(n);
    let mut spectra_std = Vec::with_capacity(n);
    for q in 0..n {
        let coord: Vec<f64> = spectra_samples.iter().map(|s| s[q]).collect();
        let (m, s) = mean_std(&coord);
        spectra_mean.push(m);
        spectra_std.push(s);
    }
    let (f_mean, f_std) = if f_samples.is_empty() {
        (None, None)
    } else {
        let (m, s) = mean_std(&f_samples);
        (Some(m), Some(s))
    };

    Ok(TomoResult {
        rho,
        spectra_mean: SpectraPoint::new_unchecked(spectra_mean),
        spectra_std,
        f_mean,
        f_std,
        bootstrap_steps: steps,
    })
}
