mod common;

use pairsim::scaling::{bt_log_likelihood, fit_bt_default, laplace_posterior};
use pairsim::{fit_hodgerank, Pcm};
use proptest::prelude::*;

#[test]
fn bt_matches_brute_force_on_random_matrices() {
    for seed in 0..20 {
        let pcm = common::random_pcm(4, 1, 20, seed);
        let fit = fit_bt_default(&pcm).unwrap();
        let oracle = common::brute_force_bt(&pcm);
        let ours = common::oracle_log_likelihood(&pcm, &fit.values);
        let best = common::oracle_log_likelihood(&pcm, &oracle);
        assert!(ours >= best - 1e-6, "seed {seed}: {ours} < {best}");
        for (a, b) in fit.values.iter().zip(&oracle) {
            assert!((a - b).abs() <= 1e-3, "seed {seed}: {a} vs {b}");
        }
        assert!((bt_log_likelihood(&pcm, &fit.values) - ours).abs() < 1e-9);
    }
}

#[test]
fn hodgerank_and_bt_agree_on_ordering_for_transitive_data() {
    let pcm = Pcm::from_rows(&[
        vec![0.0, 12.0, 14.0, 15.0],
        vec![3.0, 0.0, 11.0, 13.0],
        vec![1.0, 4.0, 0.0, 10.0],
        vec![0.0, 2.0, 5.0, 0.0],
    ])
    .unwrap();
    let bt = fit_bt_default(&pcm).unwrap().values;
    let hr = fit_hodgerank(&pcm).unwrap().values;
    for w in 0..3 {
        assert!(bt[w] > bt[w + 1]);
        assert!(hr[w] > hr[w + 1]);
    }
}

fn arb_case() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<usize>)> {
    (3usize..7).prop_flat_map(|n| {
        let rows = prop::collection::vec(prop::collection::vec(1u32..25, n), n).prop_map(
            |raw| {
                raw.iter()
                    .enumerate()
                    .map(|(i, row)| {
                        row.iter()
                            .enumerate()
                            .map(|(j, v)| if i == j { 0.0 } else { *v as f64 })
                            .collect()
                    })
                    .collect::<Vec<Vec<f64>>>()
            },
        );
        let perm = Just((0..n).collect::<Vec<usize>>()).prop_shuffle();
        (rows, perm)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scores_follow_relabelling((rows, perm) in arb_case()) {
        let pcm = Pcm::from_rows(&rows).unwrap();
        let moved = pcm.permuted(&perm);
        let bt = fit_bt_default(&pcm).unwrap().values;
        let bt_moved = fit_bt_default(&moved).unwrap().values;
        let hr = fit_hodgerank(&pcm).unwrap().values;
        let hr_moved = fit_hodgerank(&moved).unwrap().values;
        for i in 0..perm.len() {
            prop_assert!((bt[i] - bt_moved[perm[i]]).abs() < 1e-6);
            prop_assert!((hr[i] - hr_moved[perm[i]]).abs() < 1e-9);
        }
    }

    #[test]
    fn scores_ignore_uniform_count_scaling((rows, _perm) in arb_case(), factor in 0.25f64..8.0) {
        let pcm = Pcm::from_rows(&rows).unwrap();
        let bt = fit_bt_default(&pcm).unwrap().values;
        let bt_scaled = fit_bt_default(&pcm.scaled(factor)).unwrap().values;
        let hr = fit_hodgerank(&pcm).unwrap().values;
        let hr_scaled = fit_hodgerank(&pcm.scaled(factor)).unwrap().values;
        for i in 0..bt.len() {
            prop_assert!((bt[i] - bt_scaled[i]).abs() < 1e-6);
            prop_assert!((hr[i] - hr_scaled[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn posterior_is_centred_and_psd((rows, _perm) in arb_case()) {
        let pcm = Pcm::from_rows(&rows).unwrap();
        let post = laplace_posterior(&pcm, 1.0).unwrap();
        prop_assert!(post.mean.sum().abs() < 1e-9);
        let eig = nalgebra::SymmetricEigen::new(post.cov.clone()).eigenvalues;
        prop_assert!(eig.iter().all(|v| *v >= -1e-9));
        for i in 0..post.n() {
            prop_assert!(post.cov.row(i).sum().abs() < 1e-9);
        }
    }
}
