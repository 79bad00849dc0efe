#![allow(dead_code)]

use pairsim::Pcm;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Bradley-Terry log-likelihood written out cell by cell.
pub fn oracle_log_likelihood(pcm: &Pcm, s: &[f64]) -> f64 {
    let n = pcm.n();
    let mut ll = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let d = s[i] - s[j];
                ll -= pcm.count(i, j) * (1.0 + (-d).exp()).ln();
            }
        }
    }
    ll
}

/// Maximizes the likelihood over the free scores `s[1..]` with `s[0] = 0`
/// by cyclic one-dimensional Newton steps, then centres the result.
pub fn brute_force_bt(pcm: &Pcm) -> Vec<f64> {
    let n = pcm.n();
    let mut s = vec![0.0f64; n];
    for _ in 0..1_000_000 {
        let mut worst: f64 = 0.0;
        for i in 1..n {
            let (mut g, mut h) = (0.0, 0.0);
            for j in (0..n).filter(|&j| j != i) {
                let p = 1.0 / (1.0 + (s[j] - s[i]).exp());
                g += pcm.count(i, j) * (1.0 - p) - pcm.count(j, i) * p;
                h += (pcm.count(i, j) + pcm.count(j, i)) * p * (1.0 - p);
            }
            worst = worst.max(g.abs());
            if h > 0.0 {
                s[i] += g / h;
            }
        }
        if worst < 1e-11 {
            break;
        }
    }
    let mean = s.iter().sum::<f64>() / n as f64;
    s.iter().map(|v| v - mean).collect()
}

/// Random `n × n` matrix with off-diagonal integer counts in `[lo, hi]`.
pub fn random_pcm(n: usize, lo: u32, hi: u32, seed: u64) -> Pcm {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { 0.0 } else { rng.random_range(lo..=hi) as f64 })
                .collect()
        })
        .collect();
    Pcm::from_rows(&rows).unwrap()
}
