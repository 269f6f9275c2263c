use proptest::prelude::*;
use qbound_core::channel::{outcome_table, Ensemble};
use qbound_core::dilation::*;
use qbound_core::info::holevo_chi;
use qbound_core::linalg::{haar_unitary, random_density, ComplexMatrix};
use qbound_core::sampling::{random_ensemble, random_measurement, random_prior};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_joint_ensemble(dims: &[usize], r: &mut ChaCha8Rng) -> JointEnsemble {
    let total: usize = dims.iter().product();
    let n = r.random_range(2..=4);
    JointEnsemble::new(random_ensemble(total, n, r).unwrap(), dims.to_vec()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dilation_is_an_isometry(seed in any::<u64>(), d in 1usize..5, n_ops in 1usize..6) {
        let mut r = rng(seed);
        let n_groups = r.random_range(1..=n_ops);
        let meas = random_measurement(d, n_ops, n_groups, &mut r).unwrap();
        let v = dilate(&meas);
        prop_assert_eq!(v.rows(), n_ops * d);
        let gram = &v.adjoint() * &v;
        prop_assert!(gram.max_abs_diff(&ComplexMatrix::identity(d)) < 1e-10);
    }

    #[test]
    fn chi_is_unitarily_invariant(seed in any::<u64>(), d in 2usize..5) {
        let mut r = rng(seed);
        let eps = random_ensemble(d, 3, &mut r).unwrap();
        let u = haar_unitary(d, &mut r).unwrap();
        let states = eps.states().iter().map(|s| s.conjugate(&u).unwrap()).collect();
        let rotated = Ensemble::new(eps.probs().clone(), states).unwrap();
        prop_assert!((holevo_chi(&eps) - holevo_chi(&rotated)).abs() < 1e-10);
    }
}

#[test]
fn ancilla_probabilities_match_outcome_table() {
    let mut r = rng(31);
    let meas = random_measurement(3, 4, 2, &mut r).unwrap();
    let v = dilate(&meas);
    let eps = random_ensemble(3, 3, &mut r).unwrap();
    let table = outcome_table(&eps, &meas.refine()).unwrap();
    for (state, row) in eps.states().iter().zip(table.p_j_given_i()) {
        let probs = ancilla_probabilities(&v, state).unwrap();
        assert_eq!(probs.len(), 4);
        for (a, b) in probs.iter().zip(row) {
            assert!((a - b).abs() < 1e-12);
        }
    }
    let rho = random_density(2, &mut r).unwrap();
    assert!(ancilla_probabilities(&v, &rho).is_err());
}

#[test]
fn discarding_a_subsystem_never_raises_chi() {
    let mut r = rng(32);
    let mut worst = f64::INFINITY;
    for k in 0..200 {
        let dims = if k % 2 == 0 { [2, 2] } else { [2, 3] };
        let je = random_joint_ensemble(&dims, &mut r);
        for traced in 0..2 {
            let (before, after) = chi_partial_trace_check(&je, traced).unwrap();
            worst = worst.min(before - after);
        }
    }
    assert!(worst >= -MONOTONE_TOL, "worst {worst}");
}

#[test]
fn product_with_fixed_ancilla_keeps_chi() {
    let mut r = rng(33);
    let eps = random_ensemble(2, 3, &mut r).unwrap();
    let anc = random_density(3, &mut r).unwrap();
    let states = eps.states().iter().map(|s| s.tensor(&anc).unwrap()).collect();
    let je = JointEnsemble::new(Ensemble::new(eps.probs().clone(), states).unwrap(), vec![2, 3]).unwrap();
    let (before, after) = chi_partial_trace_check(&je, 1).unwrap();
    assert!((before - after).abs() < 1e-10);
    assert!((after - holevo_chi(&eps)).abs() < 1e-10);
}

#[test]
fn certificate_holds_on_random_inefficient_instances() {
    let mut r = rng(34);
    let mut checked = 0;
    while checked < 100 {
        let d = r.random_range(2..=3);
        let n_ops = r.random_range(2..=5);
        let n_groups = r.random_range(1..n_ops);
        let meas = random_measurement(d, n_ops, n_groups, &mut r).unwrap();
        assert!(!meas.is_efficient());
        let n = r.random_range(2..=4);
        let prior = random_prior(n, &mut r).unwrap();
        let eps = random_ensemble(d, n, &mut r).unwrap().with_probs(prior).unwrap();
        let cert = theorem1_trace(&eps, &meas).unwrap();
        assert!(cert.identity_holds, "{cert:?}");
        assert!(cert.monotone_holds, "{cert:?}");
        assert!(cert.dilation_probability_residual < 1e-10);
        checked += 1;
    }
}
