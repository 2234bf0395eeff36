//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (visible with `cargo test --test acceptance -- --nocapture`). Tolerances
//! are pinned in the assertions.

use entpoly::filter::{self, FilterSetting};
use entpoly::montecarlo;
use entpoly::polytope::{self, Family, PolytopeId};
use entpoly::qcore::{CanonicalState, SpectraPoint, StateVector};
use entpoly::rng::PhiloxStream;
use entpoly::tomo;

const SEED: u64 = 0;

fn criterion(name: &str, ok: bool, detail: &str) {
    println!(
        "acceptance {name}: {} ({detail})",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "{name}: {detail}");
}

fn psi1() -> StateVector {
    StateVector::canonical(CanonicalState::Psi1).unwrap()
}

fn psi2() -> StateVector {
    StateVector::canonical(CanonicalState::Psi2).unwrap()
}

/// Reference settings a..f: (state, theta1, gamma, expected success).
fn reference_settings() -> Vec<(StateVector, f64, f64, f64)> {
    let pi = std::f64::consts::PI;
    vec![
        (psi1(), pi / 8.0, 1.0 / 2f64.sqrt(), 0.2917),
        (psi1(), pi / 8.0, 1.0 / 3f64.sqrt(), 0.2222),
        (psi1(), pi / 8.0, 1.0 / 5f64.sqrt(), 0.1667),
        (psi1(), 3.0 * pi / 32.0, 1.0 / 5f64.sqrt(), 0.1768),
        (psi1(), 0.0, 1.0, 0.5),
        (psi2(), 0.0, 1.0, 0.5),
    ]
}

#[test]
fn criterion_01_exact_spectra() {
    let mut worst: f64 = 0.0;
    for state in [psi1(), psi2()] {
        for &v in state.local_spectra().values() {
            worst = worst.max((v - 0.5).abs());
        }
    }
    criterion(
        "01 exact-spectra",
        worst < 1e-12,
        &format!("max |lambda - 1/2| = {worst:.2e}"),
    );
}

#[test]
fn criterion_02_success_probabilities() {
    let mut worst: f64 = 0.0;
    for (state, theta1, gamma, want) in reference_settings() {
        let r = filter::run_protocol(&state, &FilterSetting::new(theta1, gamma)).unwrap();
        worst = worst.max((r.success - want).abs());
    }
    criterion(
        "02 success-probabilities",
        worst < 5e-4,
        &format!("max |success - reference| = {worst:.2e}"),
    );
}

#[test]
fn criterion_03_polytope_discrimination() {
    let p4 = polytope::facet_system(&"P4".parse::<PolytopeId>().unwrap()).unwrap();
    let mut ok = true;
    let mut detail = String::new();
    for (state, theta1, gamma, _) in reference_settings().into_iter().take(5) {
        let r = filter::run_protocol(&state, &FilterSetting::new(theta1, gamma)).unwrap();
        let slack = p4.min_slack(r.full_spectra.values());
        if r.f < 1.0 - 1e-9 || slack < -1e-9 {
            ok = false;
        }
        detail.push_str(&format!("f={:.4} ", r.f));
    }
    let rf = filter::run_protocol(&psi2(), &FilterSetting::new(0.0, 1.0)).unwrap();
    let violation_ok = (rf.f - 0.5).abs() <= 1e-9 && rf.f < 1.0;
    if !violation_ok {
        ok = false;
    }
    detail.push_str(&format!("| ghz f={:.4}", rf.f));
    criterion("03 polytope-discrimination", ok, &detail);
}

#[test]
fn criterion_04_monte_carlo_three_qubits() {
    let tally = montecarlo::volume_estimate(3, 100_000, SEED).unwrap();
    let w3: PolytopeId = "W3".parse().unwrap();
    let frac = tally.fraction(&w3);
    criterion(
        "04 volume-3q",
        (frac - 0.9398).abs() <= 0.004,
        &format!("W3 fraction {frac:.4} vs 203/216 = 0.9398"),
    );
}

#[test]
fn criterion_05_monte_carlo_four_qubits() {
    let n = 100_000u64;
    let tally = montecarlo::volume_estimate(4, n, SEED).unwrap();
    let frac = |name: &str| tally.fraction(&name.parse::<PolytopeId>().unwrap());

    let p4 = frac("P4");
    let p5 = frac("P5");
    let p6_union = tally.union_fraction(Family::P6);
    let p7 = frac("P7");
    let p3_counts: Vec<u64> = ('a'..='f')
        .map(|v| tally.count(&format!("P3{v}").parse::<PolytopeId>().unwrap()))
        .collect();
    let p3_spread = p3_counts.iter().max().unwrap() - p3_counts.iter().min().unwrap();

    let ok = (p4 - 0.9905).abs() <= 0.004
        && (p5 - 0.1302).abs() <= 0.005
        && p6_union >= 0.9999
        && p7 == 1.0
        && (p3_spread as f64) <= 5.0 * (n as f64).sqrt();
    criterion(
        "05 volume-4q",
        ok,
        &format!("P4 {p4:.4}, P5 {p5:.4}, P6-union {p6_union:.5}, P7 {p7}, P3 spread {p3_spread}"),
    );
}

#[test]
fn criterion_06_postmeasurement_boost() {
    let n = 100_000u64;
    let boosted = montecarlo::postmeasure_experiment(n, SEED).unwrap();
    let tally = montecarlo::volume_estimate(4, n, SEED).unwrap();
    let outside_p4 = 1.0 - tally.fraction(&"P4".parse::<PolytopeId>().unwrap());
    let ok = (boosted - 0.0602).abs() <= 0.005 && (outside_p4 - 0.0095).abs() <= 0.004;
    criterion(
        "06 postmeasure-boost",
        ok,
        &format!("outside-W3 after measurement {boosted:.4} vs direct outside-P4 {outside_p4:.4}"),
    );
}

#[test]
fn criterion_07_membership_oracle_equivalence() {
    let mut checked = 0usize;
    let mut agreed = 0usize;
    for (name, seed) in [("P4", 41u64), ("P7", 42), ("GHZ3", 43), ("W3", 44)] {
        let id: PolytopeId = name.parse().unwrap();
        let p = polytope::by_id(&id);
        let facets = polytope::facet_system(&id).unwrap();
        let dim = p.dimension();
        let mut rng = PhiloxStream::new(seed, 0);
        for _ in 0..10_000 {
            let v: Vec<f64> = (0..dim).map(|_| 0.5 + 0.5 * rng.uniform()).collect();
            let slack = facets.min_slack(&v);
            if slack.abs() <= 1e-7 {
                continue;
            }
            checked += 1;
            let lp = p.contains_lp(&SpectraPoint::new(v).unwrap(), 1e-9).unwrap();
            if lp == (slack > 0.0) {
                agreed += 1;
            }
        }
    }
    criterion(
        "07 oracle-equivalence",
        agreed == checked,
        &format!("{agreed}/{checked} points agree"),
    );
}

#[test]
fn criterion_08_lattice_verification() {
    let report = polytope::verify_lattice();
    criterion(
        "08 lattice",
        report.ok(),
        &format!(
            "{} edges, {} violations, P5 universal: {}",
            report.edges_checked,
            report.violations.len(),
            report.p5_universal
        ),
    );
}

#[test]
fn criterion_09_tomography_pipeline() {
    let target = psi2();
    let mut good = 0;
    for seed in 0..20u64 {
        let ds = tomo::simulate_counts_pure(&target, 10_000, seed).unwrap();
        let rho = tomo::reconstruct(&ds).unwrap();
        if rho.fidelity_pure(&target).unwrap() >= 0.99 {
            good += 1;
        }
    }

    // bootstrap std scaling: quadrupling N_set should shrink the per-lambda
    // std by about 2 (averaged over coordinates and a few dataset seeds)
    let mut ratios = Vec::new();
    for seed in 0..3u64 {
        let small = tomo::simulate_counts_pure(&target, 2_500, 50 + seed).unwrap();
        let large = tomo::simulate_counts_pure(&target, 10_000, 60 + seed).unwrap();
        let rs = tomo::bootstrap_spectra(&small, 300, seed).unwrap();
        let rl = tomo::bootstrap_spectra(&large, 300, seed).unwrap();
        for (s, l) in rs.spectra_std.iter().zip(&rl.spectra_std) {
            ratios.push(s / l);
        }
    }
    let mean_ratio: f64 = ratios.iter().sum::<f64>() / ratios.len() as f64;

    let ok = good >= 18 && (1.6..=2.4).contains(&mean_ratio);
    criterion(
        "09 tomography",
        ok,
        &format!("fidelity >= 0.99 on {good}/20 seeds, std shrink ratio {mean_ratio:.2}"),
    );
}

#[test]
fn criterion_10_determinism() {
    let n = 20_000u64;
    let a = montecarlo::volume_estimate_sharded(4, n, SEED, 4).unwrap();
    let b = montecarlo::volume_estimate_sharded(4, n, SEED, 4).unwrap();
    let single = montecarlo::volume_estimate(4, n, SEED).unwrap();
    let eight = montecarlo::volume_estimate_sharded(4, n, SEED, 8).unwrap();
    let repeat_identical = serde_json::to_string(&a.to_report()).unwrap()
        == serde_json::to_string(&b.to_report()).unwrap();
    let shard_invariant = single == eight && single == a;
    criterion(
        "10 determinism",
        repeat_identical && shard_invariant,
        &format!("repeat identical: {repeat_identical}, shard invariant: {shard_invariant}"),
    );
}
