use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::{center, is_connected, laplacian, symmetric_pinv};
use crate::pcm::{Pair, Pcm};

use super::QualityScores;

/// Edge flow fed to the least-squares problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HodgeFlow {
    /// `(c_ij − c_ji) / n_ij`, in [−1, 1].
    #[default]
    WinRateDifference,
    /// `ln(c_ij / c_ji)`; needs votes in both directions on every compared pair.
    LogOdds,
}

pub fn fit_hodgerank(pcm: &Pcm) -> Result<QualityScores> {
    fit_hodgerank_with(pcm, HodgeFlow::WinRateDifference)
}

/// Weighted least squares `min Σ n_ij (s_i − s_j − y_ij)²` solved through the
/// Laplacian pseudo-inverse, anchored to zero mean.
pub fn fit_hodgerank_with(pcm: &Pcm, flow: HodgeFlow) -> Result<QualityScores> {
    if !is_connected(pcm) {
        return Err(Error::IllPosed("comparison graph is disconnected".into()));
    }
    let n = pcm.n();
    let mut edges = Vec::new();
    let mut divergence = DVector::zeros(n);
    for p in Pair::all(n) {
        let (i, j) = (p.a(), p.b());
        let w = pcm.pair_total(i, j);
        if w <= 0.0 {
            continue;
        }
        let y = match flow {
            HodgeFlow::WinRateDifference => (pcm.count(i, j) - pcm.count(j, i)) / w,
            HodgeFlow::LogOdds => {
                if pcm.count(i, j) <= 0.0 || pcm.count(j, i) <= 0.0 {
                    return Err(Error::IllPosed(format!(
                        "log-odds flow undefined on one-sided pair {p}"
                    )));
                }
                (pcm.count(i, j) / pcm.count(j, i)).ln()
            }
        };
        divergence[i] += w * y;
        divergence[j] -= w * y;
        edges.push((i, j, w, y));
    }
    let solution = symmetric_pinv(&laplacian(pcm)) * divergence;
    let mut values: Vec<f64> = solution.iter().copied().collect();
    center(&mut values);
    let residual = edges
        .iter()
        .map(|&(i, j, w, y)| w * (values[i] - values[j] - y).powi(2))
        .sum();
    Ok(QualityScores {
        values,
        iterations: 1,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ones_init_is_zero() {
        let s = fit_hodgerank(&Pcm::new(7, 1.0).unwrap()).unwrap();
        assert!(s.values.iter().all(|v| v.abs() < 1e-12));
        assert!(s.residual < 1e-20);
    }

    #[test]
    fn single_edge_reproduces_flow() {
        let pcm = Pcm::from_rows(&[vec![0.0, 3.0], vec![1.0, 0.0]]).unwrap();
        let s = fit_hodgerank(&pcm).unwrap();
        assert!((s.values[0] - 0.25).abs() < 1e-12);
        assert!((s.values[1] + 0.25).abs() < 1e-12);
    }

    #[test]
    fn consistent_cycle_has_zero_residual() {
        // flows y01 = 0.5, y12 = 0.25, y20 = -0.75 sum to zero around the cycle
        let pcm = Pcm::from_rows(&[
            vec![0.0, 3.0, 7.0],
            vec![1.0, 0.0, 5.0],
            vec![1.0, 3.0, 0.0],
        ])
        .unwrap();
        let s = fit_hodgerank(&pcm).unwrap();
        assert!(s.residual < 1e-20, "residual {}", s.residual);
        assert!((s.values[0] - s.values[1] - 0.5).abs() < 1e-12);
        assert!((s.values[1] - s.values[2] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn inconsistent_cycle_keeps_a_residual() {
        let pcm = Pcm::from_rows(&[
            vec![0.0, 3.0, 1.0],
            vec![1.0, 0.0, 3.0],
            vec![3.0, 1.0, 0.0],
        ])
        .unwrap();
        let s = fit_hodgerank(&pcm).unwrap();
        assert!(s.values.iter().all(|v| v.abs() < 1e-12));
        assert!(s.residual > 0.1);
    }

    #[test]
    fn disconnected_graph_is_ill_posed() {
        let pcm = Pcm::from_rows(&[
            vec![0.0, 1.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap();
        assert!(matches!(fit_hodgerank(&pcm), Err(Error::IllPosed(_))));
    }

    #[test]
    fn log_odds_flow() {
        let pcm = Pcm::from_rows(&[vec![0.0, 3.0], vec![1.0, 0.0]]).unwrap();
        let s = fit_hodgerank_with(&pcm, HodgeFlow::LogOdds).unwrap();
        assert!((s.values[0] - s.values[1] - 3f64.ln()).abs() < 1e-12);
        let one_sided = Pcm::from_rows(&[vec![0.0, 3.0], vec![0.0, 0.0]]).unwrap();
        assert!(fit_hodgerank_with(&one_sided, HodgeFlow::LogOdds).is_err());
    }
}
