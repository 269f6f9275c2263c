use proptest::prelude::*;
use qbound_core::channel::{
    classical_channel, ensemble_state, outcome_table, post_state, posterior_ensemble,
    receiver_state, GroupedMeasurement,
};
use qbound_core::info::{mutual_information, mutual_information_standard};
use qbound_core::linalg::{random_kraus_set, ComplexMatrix, ProbVector};
use qbound_core::sampling::{random_ensemble, random_measurement, random_prior};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Classical mutual information straight from the joint distribution.
fn classical_mi_oracle(prior: &[f64], kernel: &[Vec<f64>]) -> f64 {
    let n_out = kernel[0].len();
    let mut mi = 0.0;
    for j in 0..n_out {
        let pj: f64 = prior.iter().zip(kernel).map(|(p, row)| p * row[j]).sum();
        for (pi, row) in prior.iter().zip(kernel) {
            let joint = pi * row[j];
            if joint > 0.0 {
                mi += joint * (joint / (pi * pj)).log2();
            }
        }
    }
    mi
}

fn random_kernel(n_in: usize, n_out: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    (0..n_in)
        .map(|_| random_prior(n_out, rng).unwrap().into_inner())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn non_selective_channel_consistency(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let d = rng.random_range(2..=4);
        let n_ops = rng.random_range(2..=6);
        let n_groups = rng.random_range(1..=n_ops);
        let eps = random_ensemble(d, rng.random_range(1..=4), &mut rng).unwrap();
        let meas = random_measurement(d, n_ops, n_groups, &mut rng).unwrap();
        let rho = ensemble_state(&eps);
        let table = outcome_table(&eps, &meas).unwrap();
        let mut acc = ComplexMatrix::zeros(d, d);
        for j in 0..meas.n_groups() {
            let sigma = receiver_state(&eps, &meas, j).unwrap();
            acc = &acc + &sigma.matrix().scale(table.p_j()[j]);
        }
        prop_assert!(acc.max_abs_diff(&meas.apply(rho.matrix())) <= 1e-10);
        // coarse-graining leaves the non-selective output unchanged
        let merged = meas.coarse_grain();
        let single = receiver_state(&eps, &merged, 0).unwrap();
        prop_assert!(single.matrix().max_abs_diff(&acc) <= 1e-10);
    }

    #[test]
    fn bayes_identity_and_normalization(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let d = rng.random_range(2..=4);
        let n_ops = rng.random_range(2..=6);
        let eps = random_ensemble(d, rng.random_range(1..=4), &mut rng).unwrap();
        let meas = random_measurement(d, n_ops, rng.random_range(1..=n_ops), &mut rng).unwrap();
        let t = outcome_table(&eps, &meas).unwrap();
        prop_assert!(t.bayes_residual() <= 1e-10);
        prop_assert!((t.p_j().iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        for row in t.p_j_given_i() {
            prop_assert!((row.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        }
        for j in 0..t.n_groups() {
            prop_assert!((t.p_i_given_j()[j].iter().sum::<f64>() - 1.0).abs() <= 1e-9);
            let ik: f64 = t.p_ik_given_j()[j].iter().flatten().sum();
            prop_assert!((ik - 1.0).abs() <= 1e-9);
            for row in &t.p_k_given_ji()[j] {
                prop_assert!((row.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
            }
        }
        let all = t.p_j_given_i().iter().flatten()
            .chain(t.p_ik_given_j().iter().flatten().flatten());
        for &p in all {
            prop_assert!(p >= 0.0);
        }
    }

    #[test]
    fn receiver_state_is_posterior_mixture(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let d = rng.random_range(2..=4);
        let n_ops = rng.random_range(2..=6);
        let eps = random_ensemble(d, rng.random_range(2..=4), &mut rng).unwrap();
        let meas = random_measurement(d, n_ops, rng.random_range(1..=n_ops), &mut rng).unwrap();
        let t = outcome_table(&eps, &meas).unwrap();
        for j in 0..meas.n_groups() {
            let sigma = receiver_state(&eps, &meas, j).unwrap();
            let mut mix = ComplexMatrix::zeros(d, d);
            for i in 0..eps.len() {
                let s = post_state(&eps, &meas, i, j).unwrap();
                mix = &mix + &s.matrix().scale(t.p_i_given_j()[j][i]);
            }
            prop_assert!(sigma.matrix().max_abs_diff(&mix) <= 1e-10);
            let post = posterior_ensemble(&eps, &meas, j).unwrap();
            prop_assert!((post.probs().as_slice().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn efficient_post_state_rank_bounded_by_operator_rank(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let d = rng.random_range(2..=4);
        let eps = random_ensemble(d, 2, &mut rng).unwrap();
        // rank-r operators: Kraus set on d, then projected onto r random basis directions
        let r = rng.random_range(1..d);
        let ops = random_kraus_set(d, 3, &mut rng).unwrap();
        let mut diag = vec![0.0; d];
        diag[..r].iter_mut().for_each(|x| *x = 1.0);
        let proj = ComplexMatrix::from_real_diagonal(&diag);
        let mut comp = vec![0.0; d];
        comp[r..].iter_mut().for_each(|x| *x = 1.0);
        let comp = ComplexMatrix::from_real_diagonal(&comp);
        let mut truncated: Vec<ComplexMatrix> = ops.iter().map(|a| &proj * a).collect();
        truncated.extend(ops.iter().map(|a| &comp * a));
        let meas = GroupedMeasurement::efficient(truncated).unwrap();
        for j in 0..3 {
            for i in 0..2 {
                let s = post_state(&eps, &meas, i, j).unwrap();
                prop_assert!(s.rank(1e-9) <= r);
            }
        }
    }

    #[test]
    fn classical_embedding_matches_classical_mi(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let n_in = rng.random_range(2..=5);
        let n_out = rng.random_range(2..=5);
        let prior = random_prior(n_in, &mut rng).unwrap();
        let kernel = random_kernel(n_in, n_out, &mut rng);
        let (eps, meas) = classical_channel(&prior, &kernel).unwrap();
        let t = outcome_table(&eps, &meas).unwrap();
        let m = mutual_information(&t, &prior);
        prop_assert!((m - classical_mi_oracle(prior.as_slice(), &kernel)).abs() <= 1e-10);
        prop_assert!((m - mutual_information_standard(&t, &prior)).abs() <= 1e-10);
    }
}

#[test]
fn classical_channel_examples() {
    let prior = ProbVector::uniform(2).unwrap();
    let m = |kernel: &[Vec<f64>]| {
        let (eps, meas) = classical_channel(&prior, kernel).unwrap();
        mutual_information(&outcome_table(&eps, &meas).unwrap(), &prior)
    };
    assert!((m(&[vec![1.0, 0.0], vec![0.0, 1.0]]) - 1.0).abs() < 1e-12);
    assert!(m(&[vec![0.3, 0.7], vec![0.3, 0.7]]).abs() < 1e-12);
    let f = 0.11;
    let bsc = m(&[vec![1.0 - f, f], vec![f, 1.0 - f]]);
    assert!((bsc - 0.500084041835472).abs() < 1e-10);
}
