use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{centering, log_logistic, logistic};
use crate::pcm::Pcm;

pub const DEFAULT_PRIOR_VAR: f64 = 1.0;
const NEWTON_TOL: f64 = 1e-8;
const NEWTON_MAX_ITER: usize = 200;

/// Gaussian approximation of the score posterior.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianPosterior {
    pub mean: DVector<f64>,
    pub cov: DMatrix<f64>,
}

impl GaussianPosterior {
    pub fn n(&self) -> usize {
        self.mean.len()
    }

    /// Mean and variance of `s_i − s_j`.
    pub fn difference(&self, i: usize, j: usize) -> (f64, f64) {
        let mu = self.mean[i] - self.mean[j];
        let var = self.cov[(i, i)] + self.cov[(j, j)] - 2.0 * self.cov[(i, j)];
        (mu, var)
    }
}

/// Negative BT log-likelihood plus an independent `N(0, prior_var)` prior per score.
pub fn neg_log_posterior(pcm: &Pcm, scores: &[f64], prior_var: f64) -> f64 {
    let n = pcm.n();
    let mut f = scores.iter().map(|s| s * s).sum::<f64>() / (2.0 * prior_var);
    for i in 0..n {
        for j in 0..n {
            let c = pcm.count(i, j);
            if i != j && c > 0.0 {
                f -= c * log_logistic(scores[i] - scores[j]);
            }
        }
    }
    f
}

fn gradient(pcm: &Pcm, s: &DVector<f64>, prior_var: f64) -> DVector<f64> {
    let n = pcm.n();
    let mut g = s / prior_var;
    for i in 0..n {
        for j in (i + 1)..n {
            let p = logistic(s[i] - s[j]);
            // d/ds_i of −[c_ij ln p + c_ji ln(1−p)]
            let d = -(pcm.count(i, j) * (1.0 - p) - pcm.count(j, i) * p);
            g[i] += d;
            g[j] -= d;
        }
    }
    g
}

/// Hessian of [`neg_log_posterior`].
pub fn neg_log_posterior_hessian(pcm: &Pcm, scores: &[f64], prior_var: f64) -> DMatrix<f64> {
    let n = pcm.n();
    let mut h = DMatrix::identity(n, n) / prior_var;
    for i in 0..n {
        for j in (i + 1)..n {
            let p = logistic(scores[i] - scores[j]);
            let w = pcm.pair_total(i, j) * p * (1.0 - p);
            h[(i, i)] += w;
            h[(j, j)] += w;
            h[(i, j)] -= w;
            h[(j, i)] -= w;
        }
    }
    h
}

/// Laplace approximation around the MAP of the regularized BT model.
pub fn laplace_posterior(pcm: &Pcm, prior_var: f64) -> Result<GaussianPosterior> {
    if !(prior_var.is_finite() && prior_var > 0.0) {
        return Err(Error::InvalidPosterior(format!(
            "prior variance {prior_var} must be positive"
        )));
    }
    let n = pcm.n();
    let mut s = DVector::zeros(n);
    let mut f = neg_log_posterior(pcm, s.as_slice(), prior_var);
    let mut converged = false;
    for _ in 0..NEWTON_MAX_ITER {
        let g = gradient(pcm, &s, prior_var);
        let h = neg_log_posterior_hessian(pcm, s.as_slice(), prior_var);
        let step = h
            .cholesky()
            .ok_or_else(|| Error::IllPosed("posterior Hessian is not positive definite".into()))?
            .solve(&g);
        // backtracking keeps the convex objective monotone far from the optimum
        let mut t = 1.0;
        let mut candidate = &s - &step * t;
        let mut f_new = neg_log_posterior(pcm, candidate.as_slice(), prior_var);
        while f_new > f + 1e-12 * f.abs().max(1.0) && t > 1e-8 {
            t *= 0.5;
            candidate = &s - &step * t;
            f_new = neg_log_posterior(pcm, candidate.as_slice(), prior_var);
        }
        let delta = (&step * t).amax();
        s = candidate;
        f = f_new;
        if delta < NEWTON_TOL {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            iterations: NEWTON_MAX_ITER,
            residual: gradient(pcm, &s, prior_var).amax(),
        });
    }

    let h = neg_log_posterior_hessian(pcm, s.as_slice(), prior_var);
    let inv = h
        .try_inverse()
        .ok_or_else(|| Error::IllPosed("posterior Hessian is singular".into()))?;
    let proj = centering(n);
    let mut cov = &proj * inv * &proj;
    cov = (&cov + cov.transpose()) * 0.5;
    let mean = &proj * s;
    Ok(GaussianPosterior { mean, cov })
}
