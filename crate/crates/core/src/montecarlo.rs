//! Haar-random sampling of polytope occupation fractions.
//!
//! Each sample draws an n-qubit pure state from the Haar measure (complex
//! Gaussian amplitudes, normalized), computes its local spectra, and tests
//! membership in every catalog polytope. Membership runs on facet systems:
//! the explicit ones for P4/P7 (and GHZ3/W3 in three dimensions), and
//! systems enumerated exactly from the vertex sets for the remaining
//! variants, derived once at startup. The test suite proves the derived
//! systems equivalent to the exact-rational LP membership.
//!
//! Sample `j` of a run with seed `s` consumes the generator stream
//! `(seed = s, stream id = j)` and nothing else, so a run may be split into
//! any number of shards without changing a single count.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::polytope::{self, FacetSystem, Family, PolytopeId};
use crate::qcore::StateVector;
use crate::rng::PhiloxStream;

/// Facet tolerance used in the sampling loop, matching the LP default.
const MEMBER_TOL: f64 = 1e-9;

/// Membership counts from one batch of Haar samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleTally {
    pub num_qubits: usize,
    pub num_samples: u64,
    /// Seeds that produced the samples (one entry per merged run).
    pub seeds: Vec<u64>,
    counts: BTreeMap<PolytopeId, u64>,
    family_unions: BTreeMap<Family, u64>,
}

impl SampleTally {
    fn empty(num_qubits: usize, seed: u64) -> Self {
        let ids = match num_qubits {
            3 => PolytopeId::all_3d(),
            _ => PolytopeId::all_4d(),
        };
        let mut counts = BTreeMap::new();
        for id in ids {
            counts.insert(id, 0);
        }
        let mut family_unions = BTreeMap::new();
        if num_qubits == 4 {
            for fam in [Family::P1, Family::P2, Family::P3, Family::P6] {
                family_unions.insert(fam, 0);
            }
        }
        SampleTally {
            num_qubits,
            num_samples: 0,
            seeds: vec![seed],
            counts,
            family_unions,
        }
    }

    pub fn count(&self, id: &PolytopeId) -> u64 {
        self.counts.get(id).copied().unwrap_or(0)
    }

    pub fn union_count(&self, family: Family) -> u64 {
        self.family_unions.get(&family).copied().unwrap_or(0)
    }

    pub fn fraction(&self, id: &PolytopeId) -> f64 {
        self.count(id) as f64 / self.num_samples as f64
    }

    pub fn union_fraction(&self, family: Family) -> f64 {
        self.union_count(family) as f64 / self.num_samples as f64
    }

    pub fn counts(&self) -> &BTreeMap<PolytopeId, u64> {
        &self.counts
    }

    /// Structured report mirroring the per-variant / family-union table
    /// layout, with binomial standard errors.
    pub fn to_report(&self) -> serde_json::Value {
        let n = self.num_samples as f64;
        let frac = |c: u64| c as f64 / n;
        let se = |c: u64| {
            let p = frac(c);
            (p * (1.0 - p) / n).sqrt()
        };
        let polytopes: Vec<serde_json::Value> = self
            .counts
            .iter()
            .map(|(id, &c)| {
                serde_json::json!({
                    "id": id.to_string(),
                    "count": c,
                    "fraction": frac(c),
                    "std_error": se(c),
                })
            })
            .collect();
        let unions: Vec<serde_json::Value> = self
            .family_unions
            .iter()
            .map(|(fam, &c)| {
                serde_json::json!({
                    "family": fam.name(),
                    "count": c,
                    "fraction": frac(c),
                    "std_error": se(c),
                })
            })
            .collect();
        serde_json::json!({
            "num_qubits": self.num_qubits,
            "num_samples": self.num_samples,
            "seeds": self.seeds,
            "polytopes": polytopes,
            "family_unions": unions,
        })
    }
}

/// Adds two tallies over distinct sample partitions.
pub fn tally_merge(a: &SampleTally, b: &SampleTally) -> Result<SampleTally> {
    if a.num_qubits != b.num_qubits {
        return Err(Error::TallyMismatch(a.num_qubits, b.num_qubits));
    }
    let mut out = a.clone();
    out.num_samples += b.num_samples;
    for (id, &c) in &b.counts {
        *out.counts.entry(id.clone()).or_insert(0) += c;
    }
    for (fam, &c) in &b.family_unions {
        *out.family_unions.entry(*fam).or_insert(0) += c;
    }
    for &s in &b.seeds {
        if !out.seeds.contains(&s) {
            out.seeds.push(s);
        }
    }
    Ok(out)
}

/// Draws an n-qubit pure state from the Haar measure: 2^n independent
/// standard complex Gaussians, normalized.
pub fn haar_state(num_qubits: usize, stream: &mut PhiloxStream) -> Result<StateVector> {
    if num_qubits == 0 || num_qubits > crate::qcore::MAX_QUBITS {
        return Err(Error::QubitCount(num_qubits));
    }
    let dim = 1usize << num_qubits;
    let amps: Vec<num_complex::Complex64> = (0..dim)
        .map(|_| {
            let re = stream.gaussian();
            let im = stream.gaussian();
            num_complex::Complex64::new(re, im)
        })
        .collect();
    StateVector::from_amplitudes(num_qubits, amps)
}

fn membership_systems(dim: usize) -> &'static [(PolytopeId, FacetSystem)] {
    static SYS4: OnceLock<Vec<(PolytopeId, FacetSystem)>> = OnceLock::new();
    static SYS3: OnceLock<Vec<(PolytopeId, FacetSystem)>> = OnceLock::new();
    let build = move |d: usize| {
        polytope::catalog_ref(d)
            .expect("dimension 3 or 4")
            .iter()
            .map(|p| {
                let fs = polytope::facet_system(p.id()).unwrap_or_else(|_| p.derived_facets());
                (p.id().clone(), fs)
            })
            .collect()
    };
    match dim {
        4 => SYS4.get_or_init(|| build(4)),
        3 => SYS3.get_or_init(|| build(3)),
        _ => panic!("membership systems exist for dimensions 3 and 4"),
    }
}

fn tally_range(num_qubits: usize, seed: u64, from: u64, to: u64) -> SampleTally {
    let systems = membership_systems(num_qubits);
    let mut tally = SampleTally::empty(num_qubits, seed);
    let mut in_family: BTreeMap<Family, bool> = BTreeMap::new();
    for sample in from..to {
        let mut stream = PhiloxStream::new(seed, sample);
        let state = haar_state(num_qubits, &mut stream).expect("register size validated");
        let spectra = state.local_spectra();
        let point = spectra.values();
        in_family.clear();
        for (id, fs) in systems {
            if fs.contains(point, MEMBER_TOL) {
                *tally.counts.get_mut(id).expect("catalog id") += 1;
                if matches!(
                    id.family(),
                    Family::P1 | Family::P2 | Family::P3 | Family::P6
                ) {
                    in_family.insert(id.family(), true);
                }
            }
        }
        for (fam, _) in in_family.iter().filter(|(_, &v)| v) {
            if let Some(u) = tally.family_unions.get_mut(fam) {
                *u += 1;
            }
        }
        tally.num_samples += 1;
    }
    tally
}

/// Samples `num_samples` Haar states and tallies polytope membership.
pub fn volume_estimate(num_qubits: usize, num_samples: u64, seed: u64) -> Result<SampleTally> {
    volume_estimate_sharded(num_qubits, num_samples, seed, 1)
}

/// Sharded variant; the result is identical for every shard count.
pub fn volume_estimate_sharded(
    num_qubits: usize,
    num_samples: u64,
    seed: u64,
    shards: usize,
) -> Result<SampleTally> {
    if !(num_qubits == 3 || num_qubits == 4) {
        return Err(Error::QubitCount(num_qubits));
    }
    if num_samples == 0 {
        return Err(Error::EmptySampleCount);
    }
    let shards = shards.clamp(1, 64).min(num_samples as usize);
    let chunk = num_samples.div_ceil(shards as u64);
    let partials: Vec<SampleTally> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..shards)
            .map(|i| {
                let from = i as u64 * chunk;
                let to = ((i as u64 + 1) * chunk).min(num_samples);
                scope.spawn(move || tally_range(num_qubits, seed, from, to))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("shard panicked"))
            .collect()
    });
    let mut merged = partials[0].clone();
    for t in &partials[1..] {
        merged = tally_merge(&merged, t)?;
    }
    Ok(merged)
}

/// Draws Haar four-qubit states, post-selects qubit 1 on outcome 0, and
/// returns the fraction of residual three-qubit spectra outside the W
/// polytope. Zero-probability branches are resampled, not counted.
pub fn postmeasure_experiment(num_samples: u64, seed: u64) -> Result<f64> {
    if num_samples == 0 {
        return Err(Error::EmptySampleCount);
    }
    let w3 = polytope::facet_system(&PolytopeId::new(Family::W3, None)?)?;
    let mut outside = 0u64;
    for sample in 0..num_samples {
        let mut stream = PhiloxStream::new(seed, sample);
        let residual = loop {
            let state = haar_state(4, &mut stream)?;
            match state.postselect(1, 0) {
                Ok((r, _)) => break r,
                Err(Error::Annihilated(_)) => continue,
                Err(e) => return Err(e),
            }
        };
        let spectra = residual.local_spectra();
        if !w3.contains(spectra.values(), MEMBER_TOL) {
            outside += 1;
        }
    }
    Ok(outside as f64 / num_samples as f64)
}
