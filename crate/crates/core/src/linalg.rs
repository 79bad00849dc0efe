//! Graph helpers shared by the scaling code and the samplers.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::pcm::Pcm;

/// Relative eigenvalue cutoff for the Laplacian pseudo-inverse.
pub const PINV_TOL: f64 = 1e-10;

#[inline]
pub fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `ln σ(x)` without overflow.
#[inline]
pub fn log_logistic(x: f64) -> f64 {
    if x >= 0.0 {
        -(-x).exp().ln_1p()
    } else {
        x - x.exp().ln_1p()
    }
}

/// Undirected connectivity of the comparison graph (edge where any vote exists).
pub fn is_connected(pcm: &Pcm) -> bool {
    reachable_from_zero(pcm.n(), |i, j| pcm.pair_total(i, j) > 0.0)
}

/// Strong connectivity of the directed win graph (edge `i -> j` when `i` beat `j`).
pub fn is_strongly_connected(pcm: &Pcm) -> bool {
    let n = pcm.n();
    reachable_from_zero(n, |i, j| pcm.count(i, j) > 0.0)
        && reachable_from_zero(n, |i, j| pcm.count(j, i) > 0.0)
}

fn reachable_from_zero(n: usize, edge: impl Fn(usize, usize) -> bool) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for (j, s) in seen.iter_mut().enumerate() {
            if !*s && i != j && edge(i, j) {
                *s = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Weighted graph Laplacian with `w_ij = n_ij`.
pub fn laplacian(pcm: &Pcm) -> DMatrix<f64> {
    let n = pcm.n();
    let mut l = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let w = pcm.pair_total(i, j);
            l[(i, j)] -= w;
            l[(j, i)] -= w;
            l[(i, i)] += w;
            l[(j, j)] += w;
        }
    }
    l
}

/// Moore-Penrose pseudo-inverse of a symmetric PSD matrix.
pub fn symmetric_pinv(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let eig = SymmetricEigen::new(m.clone());
    let max = eig.eigenvalues.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()));
    let cutoff = PINV_TOL * max.max(f64::MIN_POSITIVE);
    let mut out = DMatrix::zeros(n, n);
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda > cutoff {
            let v = eig.eigenvectors.column(k);
            out += (v * v.transpose()) / lambda;
        }
    }
    out
}

/// Projector onto the zero-sum subspace, `I - 11ᵀ/n`.
pub fn centering(n: usize) -> DMatrix<f64> {
    DMatrix::identity(n, n) - DMatrix::from_element(n, n, 1.0 / n as f64)
}

pub fn center(values: &mut [f64]) {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    for v in values.iter_mut() {
        *v -= mean;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pinv_of_path_laplacian_gives_series_resistance() {
        let pcm = Pcm::from_rows(&[
            vec![0.0, 0.5, 0.0],
            vec![0.5, 0.0, 0.5],
            vec![0.0, 0.5, 0.0],
        ])
        .unwrap();
        let lp = symmetric_pinv(&laplacian(&pcm));
        let r = |i: usize, j: usize| lp[(i, i)] + lp[(j, j)] - 2.0 * lp[(i, j)];
        assert!((r(0, 1) - 1.0).abs() < 1e-12);
        assert!((r(0, 2) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn connectivity_checks() {
        let path = Pcm::from_rows(&[
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap();
        assert!(is_connected(&path));
        assert!(!is_strongly_connected(&path));
        let split = Pcm::from_rows(&[
            vec![0.0, 1.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![0.0, 0.0, 1.0, 0.0],
        ])
        .unwrap();
        assert!(!is_connected(&split));
    }

    #[test]
    fn log_logistic_is_stable() {
        assert!((log_logistic(0.0) - 0.5f64.ln()).abs() < 1e-15);
        assert!(log_logistic(800.0).abs() < 1e-300);
        assert!((log_logistic(-800.0) + 800.0).abs() < 1e-9);
        assert!((logistic(2.0) + logistic(-2.0) - 1.0).abs() < 1e-15);
    }
}
