use proptest::prelude::*;
use qbound_core::channel::outcome_table;
use qbound_core::info::{avg_entropy_reduction, mutual_information};
use qbound_core::linalg::{
    haar_unitary, random_density, shannon_entropy, ComplexMatrix, DensityMatrix, ProbVector,
};
use qbound_core::majorization::*;
use qbound_core::sampling::{random_ensemble, random_measurement, random_prior, random_pure_ensemble};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rank_one_seed(d: usize) -> ComplexMatrix {
    let mut diag = vec![0.0; d];
    diag[0] = 1.0;
    ComplexMatrix::from_real_diagonal(&diag)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn majorization_is_a_preorder(seed in any::<u64>(), d in 2usize..6) {
        let mut r = rng(seed);
        let (p, q) = random_majorized_pair(d, &mut r).unwrap();
        prop_assert!(majorizes(&p, &p));
        prop_assert!(majorizes(&p, &q));
        // Mixing q again stays below q, hence below p.
        let perms: Vec<Vec<usize>> = vec![(0..d).rev().collect(), (0..d).collect()];
        let s = mix_permutations(&q, &perms, &ProbVector::new(vec![0.3, 0.7]).unwrap()).unwrap();
        prop_assert!(majorizes(&q, &s));
        prop_assert!(majorizes(&p, &s));
        prop_assert!(shannon_entropy(&s) >= shannon_entropy(&q) - 1e-12);
        prop_assert!(shannon_entropy(&q) >= shannon_entropy(&p) - 1e-12);
    }

    #[test]
    fn mutual_majorization_means_same_sorted_vector(seed in any::<u64>(), d in 2usize..6) {
        let mut r = rng(seed);
        let p = random_prior(d, &mut r).unwrap();
        let q = random_prior(d, &mut r).unwrap();
        if majorizes(&p, &q) && majorizes(&q, &p) {
            let mut a = p.as_slice().to_vec();
            let mut b = q.as_slice().to_vec();
            a.sort_by(f64::total_cmp);
            b.sort_by(f64::total_cmp);
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn mixed_measurement_is_linear(seed in any::<u64>(), d in 2usize..4) {
        let mut r = rng(seed);
        let m1 = random_measurement(d, 3, 2, &mut r).unwrap();
        let m2 = random_measurement(d, 2, 2, &mut r).unwrap();
        let w = random_prior(2, &mut r).unwrap();
        let mixed = mix_measurements(&[m1.clone(), m2.clone()], &w).unwrap();
        prop_assert!(mixed.completeness_residual() < 1e-10);
        let rho = random_density(d, &mut r).unwrap();
        let ds = |m| avg_entropy_reduction(&rho, m).unwrap();
        let expected = w[0] * ds(&m1) + w[1] * ds(&m2);
        prop_assert!((ds(&mixed) - expected).abs() < 1e-10);

        let eps = random_ensemble(d, 3, &mut r).unwrap();
        let t_mixed = outcome_table(&eps, &mixed).unwrap();
        let t1 = outcome_table(&eps, &m1).unwrap();
        let t2 = outcome_table(&eps, &m2).unwrap();
        let avg: Vec<f64> = t1.p_j().iter().map(|p| w[0] * p).chain(t2.p_j().iter().map(|p| w[1] * p)).collect();
        for (a, b) in t_mixed.p_j().iter().zip(&avg) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        // Group labels record which part fired, so information is additive over parts.
        let mi = |t| mutual_information(t, eps.probs());
        prop_assert!((mi(&t_mixed) - (w[0] * mi(&t1) + w[1] * mi(&t2))).abs() < 1e-10);
    }

    #[test]
    fn eigen_ensemble_reconstructs_state(seed in any::<u64>(), d in 1usize..6) {
        let mut r = rng(seed);
        let rho = random_density(d, &mut r).unwrap();
        let eps = eigen_ensemble(&rho).unwrap();
        prop_assert!(eps.state().matrix().max_abs_diff(rho.matrix()) < 1e-10);
        for s in eps.states() {
            prop_assert!(s.rank(1e-9) == 1);
        }
    }
}

#[test]
fn symmetric_classical_measurement_has_no_violations() {
    let mut r = rng(11);
    for d in 2..=5 {
        let kernel = random_prior(d, &mut r).unwrap();
        let meas = symmetric_classical_measurement(&kernel, d).unwrap();
        assert!(meas.completeness_residual() < 1e-10);
        for quantity in [ProbeQuantity::EntropyReduction, ProbeQuantity::PureEnsembleMutualInfo] {
            let rep = schur_probe(&meas, quantity, Embedding::Classical, 500, 1e-9, &mut r).unwrap();
            assert_eq!(rep.pairs_tested, 500);
            assert_eq!(rep.violations, 0, "d={d} {quantity:?} worst {}", rep.worst_violation);
        }
    }
}

#[test]
fn symmetric_classical_kernel_with_ties_is_complete() {
    let kernel = ProbVector::new(vec![0.5, 0.25, 0.25]).unwrap();
    let meas = symmetric_classical_measurement(&kernel, 3).unwrap();
    assert_eq!(meas.n_operators(), 3);
    assert!(meas.completeness_residual() < 1e-12);
}

#[test]
fn uc_measurement_is_complete() {
    let mut r = rng(12);
    for (d, n) in [(2, 4), (2, 64), (3, 9), (3, 100), (4, 200)] {
        let meas = uc_measurement_approx(&rank_one_seed(d), n, &mut r).unwrap();
        assert_eq!(meas.n_operators(), n);
        assert!(meas.completeness_residual() < 1e-10, "d={d} n={n}");
    }
    assert!(uc_measurement_approx(&rank_one_seed(3), 8, &mut r).is_err());
}

#[test]
fn uc_measurement_from_unitary_seed_is_uninformative() {
    let mut r = rng(13);
    let d = 3;
    let n = 50;
    let seed_op = haar_unitary(d, &mut r).unwrap();
    let meas = uc_measurement_approx(&seed_op, n, &mut r).unwrap();
    let eps = random_ensemble(d, 3, &mut r).unwrap();
    let table = outcome_table(&eps, &meas).unwrap();
    for row in table.p_j_given_i() {
        for &p in row {
            assert!((p - 1.0 / n as f64).abs() < 1e-10);
        }
    }
    assert!(mutual_information(&table, eps.probs()) < 1e-10);
}

#[test]
fn uc_entropy_reduction_is_covariant_for_rank_one_seed() {
    let mut r = rng(14);
    for d in [2, 3] {
        let meas = uc_measurement_approx(&rank_one_seed(d), UC_SAMPLES, &mut r).unwrap();
        for _ in 0..5 {
            let rho = random_density(d, &mut r).unwrap();
            let res = covariance_residual(&meas, ProbeQuantity::EntropyReduction, &rho, 10, &mut r).unwrap();
            assert!(res < 1e-10, "d={d} residual {res}");
        }
    }
}

/// Re-measures the covariance residual behind the frozen mutual information
/// tolerance on fresh seeds.
#[test]
fn uc_mutual_info_residual_stays_within_frozen_tolerance() {
    let mut r = rng(15);
    for d in [2, 3] {
        for _ in 0..2 {
            let meas = uc_measurement_approx(&rank_one_seed(d), UC_SAMPLES, &mut r).unwrap();
            for _ in 0..5 {
                let rho = random_density(d, &mut r).unwrap();
                let res =
                    covariance_residual(&meas, ProbeQuantity::PureEnsembleMutualInfo, &rho, 10, &mut r).unwrap();
                assert!(res <= UC_MUTUAL_INFO_TOL, "d={d} residual {res}");
                let eps = random_pure_ensemble(d, 3, &mut r).unwrap();
                let drift = rotation_drift_mi(&meas, &eps, 10, &mut r).unwrap();
                assert!(drift <= UC_MUTUAL_INFO_TOL, "d={d} drift {drift}");
            }
        }
    }
}

#[test]
fn classical_embedding_is_exact_for_diagonal_states() {
    let d = 3;
    let p = ProbVector::new(vec![0.6, 0.3, 0.1]).unwrap();
    let rho = DensityMatrix::diagonal(&p).unwrap();
    let kernel = ProbVector::new(vec![0.7, 0.2, 0.1]).unwrap();
    let meas = symmetric_classical_measurement(&kernel, d).unwrap();
    let ds = spectral_quantity(&meas, ProbeQuantity::EntropyReduction, &rho).unwrap();
    let mi = spectral_quantity(&meas, ProbeQuantity::PureEnsembleMutualInfo, &rho).unwrap();
    // Diagonal states and diagonal Kraus operators: the two quantities coincide.
    assert!((ds - mi).abs() < 1e-10);
}
