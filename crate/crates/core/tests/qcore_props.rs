//! Property tests for the state-algebra invariants.

use num_complex::Complex64;
use proptest::prelude::*;

use entpoly::montecarlo::haar_state;
use entpoly::qcore::{CanonicalState, LocalOperator, StateVector};
use entpoly::rng::PhiloxStream;

fn random_unitary(rng: &mut PhiloxStream) -> LocalOperator {
    let theta = rng.uniform() * std::f64::consts::PI;
    let alpha = rng.uniform() * std::f64::consts::TAU;
    let beta = rng.uniform() * std::f64::consts::TAU;
    let (c, s) = (theta.cos(), theta.sin());
    let ea = Complex64::from_polar(1.0, alpha);
    let eb = Complex64::from_polar(1.0, beta);
    LocalOperator::from_rows([ea * c, eb * s], [-eb.conj() * s, ea.conj() * c])
}

#[test]
fn local_unitaries_leave_spectra_unchanged() {
    for (name, state) in [
        (
            "psi1",
            StateVector::canonical(CanonicalState::Psi1).unwrap(),
        ),
        (
            "psi2",
            StateVector::canonical(CanonicalState::Psi2).unwrap(),
        ),
        ("w4", StateVector::canonical(CanonicalState::WN(4)).unwrap()),
        (
            "haar",
            haar_state(4, &mut PhiloxStream::new(77, 0)).unwrap(),
        ),
    ] {
        let reference = state.local_spectra();
        let mut rng = PhiloxStream::new(123, 0);
        for trial in 0..100 {
            let qubit = (rng.next_u64() % 4 + 1) as usize;
            let u = random_unitary(&mut rng);
            let (rotated, p) = state.apply_local(&[(qubit, u)]).unwrap();
            assert!(
                (p - 1.0).abs() < 1e-10,
                "{name} trial {trial}: unitary changed the norm"
            );
            let got = rotated.local_spectra();
            for (a, b) in reference.values().iter().zip(got.values()) {
                assert!(
                    (a - b).abs() < 1e-10,
                    "{name} trial {trial}: spectra moved under a local unitary"
                );
            }
        }
    }
}

fn arb_state(num_qubits: usize) -> impl Strategy<Value = StateVector> {
    let dim = 1usize << num_qubits;
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim).prop_filter_map(
        "norm too small",
        move |pairs| {
            let amps: Vec<Complex64> = pairs
                .iter()
                .map(|&(re, im)| Complex64::new(re, im))
                .collect();
            StateVector::from_amplitudes(num_qubits, amps).ok()
        },
    )
}

proptest! {
    #[test]
    fn operations_preserve_normalization(state in arb_state(3), outcome in 0u8..2, gamma in 0.05f64..1.0) {
        prop_assert!((state.norm_sqr() - 1.0).abs() < 1e-12);
        let filt = LocalOperator::diag(1.0.into(), gamma.into());
        let (after, _) = state.apply_local(&[(2, filt)]).unwrap();
        prop_assert!((after.norm_sqr() - 1.0).abs() < 1e-12);
        if let Ok((post, _)) = after.postselect(1, outcome) {
            prop_assert!((post.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn marginal_eigenvalues_sum_to_one(state in arb_state(4), qubit in 1usize..5) {
        let rho = state.reduced_density(qubit).unwrap();
        let eigs = rho.eigenvalues();
        prop_assert!((eigs[0] + eigs[1] - 1.0).abs() < 1e-10);
        prop_assert!(eigs[0] >= 0.5 - 1e-12);
    }

    #[test]
    fn schmidt_matches_marginal_spectrum(state in arb_state(2)) {
        let (l0, l1) = state.schmidt_coefficients().unwrap();
        prop_assert!(l0 >= l1 && l1 >= 0.0);
        prop_assert!((l0 * l0 + l1 * l1 - 1.0).abs() < 1e-10);
        let eigs = state.reduced_density(1).unwrap().eigenvalues();
        prop_assert!((l0 * l0 - eigs[0]).abs() < 1e-10);
        prop_assert!((l1 * l1 - eigs[1]).abs() < 1e-10);
    }

    #[test]
    fn success_chain_rule(state in arb_state(3), gamma in 0.1f64..1.0, theta in -1.6f64..1.6) {
        // applying the operators one call at a time multiplies the successes
        let u = entpoly::filter::u_theta(theta);
        let a = LocalOperator::diag(1.0.into(), gamma.into());
        let combined = state.apply_local(&[(1, u), (3, a)]);
        prop_assume!(combined.is_ok());
        let (both, p_both) = combined.unwrap();
        let (step, p1) = state.apply_local(&[(1, u)]).unwrap();
        let (two, p2) = step.apply_local(&[(3, a)]).unwrap();
        prop_assert!((p_both - p1 * p2).abs() < 1e-10);
        for (x, y) in both.amplitudes().iter().zip(two.amplitudes()) {
            prop_assert!((x - y).norm() < 1e-10);
        }
        // and post-selection extends the chain
        if let (Ok((_, q_direct)), Ok((_, q_two))) = (both.postselect(2, 0), two.postselect(2, 0)) {
            prop_assert!((q_direct - q_two).abs() < 1e-10);
        }
    }

    #[test]
    fn haar_spectra_points_always_classify(seed in 0u64..5000) {
        let state = haar_state(3, &mut PhiloxStream::new(991, seed)).unwrap();
        let spectra = state.local_spectra();
        let c = entpoly::polytope::classify(&spectra).unwrap();
        // GHZ3 is the full three-qubit polytope: nothing escapes it
        prop_assert!(c.containing.iter().any(|id| id.to_string() == "GHZ3"));
        prop_assert!(!c.minimal.is_empty());
    }
}
