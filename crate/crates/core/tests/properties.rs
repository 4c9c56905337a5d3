use num_complex::Complex64;
use proptest::prelude::*;

use symsep::cli::format::{parse_state, state_to_string, LoadedState};
use symsep::concurrence::{multipartite_concurrence, multipartite_concurrence_purity};
use symsep::linalg::{random_unitary, seeded_rng, DimSpec};
use symsep::separability::{
    hollowizing_unitary, pure_state_check, s_matrix, trial_witness, witness_test, HollowOptions, PreparedState,
    ViolationTolerance,
};
use symsep::states::{random_mixed, random_product_pure, random_pure, random_separable_mixture, PureState};

fn dims_strategy() -> impl Strategy<Value = Vec<usize>> {
    prop_oneof![
        Just(vec![2, 2]),
        Just(vec![2, 3]),
        Just(vec![3, 2]),
        Just(vec![3, 3]),
        Just(vec![2, 2, 2]),
        Just(vec![2, 3, 2]),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn concurrence_is_local_unitary_invariant(d in dims_strategy(), seed in any::<u64>()) {
        let ds = DimSpec::new(d.clone()).unwrap();
        let mut rng = seeded_rng(seed);
        let psi = random_pure(&ds, &mut rng);
        let us: Vec<_> = d.iter().map(|&k| random_unitary(k, &mut rng)).collect();
        let rotated = psi.apply_local_unitary(&us).unwrap();
        let a = multipartite_concurrence(&psi).unwrap();
        let b = multipartite_concurrence(&rotated).unwrap();
        prop_assert!((a - b).abs() < 1e-10);
        prop_assert!((a - multipartite_concurrence_purity(&psi).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn products_have_zero_concurrence(d in dims_strategy(), seed in any::<u64>()) {
        let ds = DimSpec::new(d).unwrap();
        let psi = random_product_pure(&ds, &mut seeded_rng(seed));
        prop_assert!(multipartite_concurrence(&psi).unwrap() < 1e-7);
        prop_assert!(pure_state_check(&psi).unwrap().separable);
    }

    #[test]
    fn separable_mixtures_never_violate(d in dims_strategy(), seed in any::<u64>(), terms in 1usize..8, trial in 1usize..100) {
        let ds = DimSpec::new(d).unwrap();
        let rho = random_separable_mixture(&ds, terms, &mut seeded_rng(seed)).unwrap();
        let o = trial_witness(&ds, seed, trial).unwrap();
        prop_assert!(!witness_test(&rho, &o, &ViolationTolerance::default()).unwrap().violated);
    }

    #[test]
    fn singular_values_scale_with_witness(seed in any::<u64>(), c in 0.01f64..100.0) {
        let ds = DimSpec::new(vec![2, 3]).unwrap();
        let rho = random_mixed(&ds, 3, &mut seeded_rng(seed)).unwrap();
        let o = trial_witness(&ds, seed, 1).unwrap();
        let prep = PreparedState::new(&rho).unwrap();
        let tol = ViolationTolerance::default();
        let a = prep.witness_test(&o, &tol).unwrap();
        let b = prep.witness_test(&o.scaled(Complex64::new(0.0, c)), &tol).unwrap();
        prop_assert_eq!(a.violated, b.violated);
        for (x, y) in a.singular_values.iter().zip(&b.singular_values) {
            prop_assert!((c * x - y).abs() < 1e-9 * c.max(1.0));
        }
    }

    #[test]
    fn hollow_certificate_matches_condition(seed in any::<u64>(), rank in 1usize..=4) {
        let ds = DimSpec::new(vec![2, 2]).unwrap();
        let rho = random_mixed(&ds, rank, &mut seeded_rng(seed)).unwrap();
        let o = trial_witness(&ds, seed, 1).unwrap();
        let s = s_matrix(&rho, &o).unwrap();
        let cert = hollowizing_unitary(&s, &HollowOptions::default()).unwrap();
        prop_assert_eq!(cert.converged, cert.condition_holds);
        prop_assert!(cert.max_abs_diagonal + 1e-12 >= cert.diagonal_floor);
    }

    #[test]
    fn state_files_round_trip(d in dims_strategy(), seed in any::<u64>(), mixed in any::<bool>()) {
        let ds = DimSpec::new(d).unwrap();
        let mut rng = seeded_rng(seed);
        let state: LoadedState = if mixed {
            random_mixed(&ds, 2, &mut rng).unwrap().into()
        } else {
            random_pure(&ds, &mut rng).into()
        };
        let back = parse_state(&state_to_string(&state).unwrap()).unwrap();
        prop_assert_eq!(back, state);
    }

    #[test]
    fn normalization_is_idempotent(re in prop::collection::vec(-1.0f64..1.0, 6), im in prop::collection::vec(-1.0f64..1.0, 6)) {
        prop_assume!(re.iter().chain(&im).any(|x| x.abs() > 1e-3));
        let ds = DimSpec::new(vec![2, 3]).unwrap();
        let coeffs: Vec<Complex64> = re.iter().zip(&im).map(|(&a, &b)| Complex64::new(a, b)).collect();
        let psi = PureState::from_coeffs(ds.clone(), coeffs).unwrap();
        let again = PureState::from_normalized(ds, psi.amplitudes().to_vec()).unwrap();
        prop_assert_eq!(again, psi);
    }
}
