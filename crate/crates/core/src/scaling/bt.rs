use crate::error::{Error, Result};
use crate::linalg::{center, is_strongly_connected, log_logistic};
use crate::pcm::Pcm;

use super::QualityScores;

pub const BT_TOL: f64 = 1e-9;
pub const BT_MAX_ITER: usize = 10_000;

/// `Σ_{i≠j} c_ij · ln σ(s_i − s_j)` for log-strengths `s`.
pub fn bt_log_likelihood(pcm: &Pcm, scores: &[f64]) -> f64 {
    let n = pcm.n();
    let mut ll = 0.0;
    for i in 0..n {
        for j in 0..n {
            let c = pcm.count(i, j);
            if i != j && c > 0.0 {
                ll += c * log_logistic(scores[i] - scores[j]);
            }
        }
    }
    ll
}

pub fn fit_bt_default(pcm: &Pcm) -> Result<QualityScores> {
    fit_bt(pcm, BT_TOL, BT_MAX_ITER)
}

/// Bradley-Terry maximum likelihood by minorization-maximization.
///
/// Each sweep sets `π_i ← W_i / Σ_j n_ij / (π_i + π_j)` from the previous
/// strengths, then re-centres the log-strengths. Stops when the largest
/// log-strength change drops below `tol`.
pub fn fit_bt(pcm: &Pcm, tol: f64, max_iter: usize) -> Result<QualityScores> {
    if !is_strongly_connected(pcm) {
        return Err(Error::IllPosed(
            "win graph is not strongly connected; the BT maximum likelihood estimate does not exist"
                .into(),
        ));
    }
    let n = pcm.n();
    let wins: Vec<f64> = (0..n).map(|i| pcm.wins(i)).collect();
    let mut log_strength = vec![0.0; n];
    let mut strength = vec![1.0; n];
    let mut next = vec![0.0; n];
    let mut change = f64::INFINITY;

    for iteration in 1..=max_iter {
        for i in 0..n {
            let denom: f64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| pcm.pair_total(i, j) / (strength[i] + strength[j]))
                .sum();
            next[i] = (wins[i] / denom).ln();
        }
        center(&mut next);
        change = next
            .iter()
            .zip(&log_strength)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        log_strength.copy_from_slice(&next);
        for (p, s) in strength.iter_mut().zip(&log_strength) {
            *p = s.exp();
        }
        if !change.is_finite() {
            break;
        }
        if change < tol {
            return Ok(QualityScores {
                values: log_strength,
                iterations: iteration,
                residual: change,
            });
        }
    }
    Err(Error::NonConvergence {
        iterations: max_iter,
        residual: change,
    })
}
