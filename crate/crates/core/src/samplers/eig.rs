use crate::error::{Error, Result};
use crate::linalg::logistic;
use crate::pcm::Pair;
use crate::scaling::GaussianPosterior;

/// Physicists' Gauss-Hermite rule with 9 nodes: `(node, weight)`, weights sum to √π.
pub const GAUSS_HERMITE_9: [(f64, f64); 9] = [
    (-3.190_993_201_781_527_6, 3.960_697_726_326_438e-5),
    (-2.266_580_584_531_843, 4.943_624_275_536_947e-3),
    (-1.468_553_289_216_668, 8.847_452_739_437_657e-2),
    (-0.723_551_018_752_837_6, 4.326_515_590_025_557_5e-1),
    (0.0, 7.202_352_156_060_51e-1),
    (0.723_551_018_752_837_6, 4.326_515_590_025_557_5e-1),
    (1.468_553_289_216_668, 8.847_452_739_437_657e-2),
    (2.266_580_584_531_843, 4.943_624_275_536_947e-3),
    (3.190_993_201_781_527_6, 3.960_697_726_326_438e-5),
];

const VAR_TOL: f64 = 1e-9;

fn binary_entropy(p: f64) -> f64 {
    let mut h = 0.0;
    if p > 0.0 {
        h -= p * p.ln();
    }
    if p < 1.0 {
        h -= (1.0 - p) * (1.0 - p).ln();
    }
    h
}

/// Mutual information (nats) between a logistic comparison outcome and a
/// Gaussian score difference `d ~ N(mean, var)`.
pub fn eig_from_moments(mean: f64, var: f64) -> Result<f64> {
    if var < -VAR_TOL || !var.is_finite() || !mean.is_finite() {
        return Err(Error::InvalidPosterior(format!(
            "score-difference variance {var} is negative"
        )));
    }
    let var = var.max(0.0);
    if var == 0.0 {
        return Ok(0.0);
    }
    let scale = (2.0 * var).sqrt();
    let norm = std::f64::consts::PI.sqrt();
    let (mut p_mean, mut h_mean) = (0.0, 0.0);
    for &(x, w) in &GAUSS_HERMITE_9 {
        let p = logistic(mean + scale * x);
        p_mean += w * p;
        h_mean += w * binary_entropy(p);
    }
    p_mean /= norm;
    h_mean /= norm;
    Ok((binary_entropy(p_mean) - h_mean).clamp(0.0, std::f64::consts::LN_2))
}

/// Expected information gain of comparing `i` with `j` under `posterior`.
pub fn pair_eig(posterior: &GaussianPosterior, i: usize, j: usize) -> Result<f64> {
    // the gain is symmetric; evaluating one orientation keeps it bitwise so
    let (mean, var) = posterior.difference(i.min(j), i.max(j));
    eig_from_moments(mean, var)
}

/// Symmetric table of pairwise expected information gains.
#[derive(Debug, Clone, PartialEq)]
pub struct EigTable {
    n: usize,
    values: Vec<f64>,
}

impl EigTable {
    pub fn from_posterior(posterior: &GaussianPosterior) -> Result<Self> {
        let n = posterior.n();
        let mut values = vec![0.0; n * n];
        for p in Pair::all(n) {
            let g = pair_eig(posterior, p.a(), p.b())?;
            values[p.a() * n + p.b()] = g;
            values[p.b() * n + p.a()] = g;
        }
        Ok(EigTable { n, values })
    }

    /// Table from explicit per-pair utilities; missing pairs are 0.
    pub fn from_pairs(n: usize, entries: &[(Pair, f64)]) -> Self {
        let mut values = vec![0.0; n * n];
        for &(p, g) in entries {
            values[p.a() * n + p.b()] = g;
            values[p.b() * n + p.a()] = g;
        }
        EigTable { n, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn entries(&self) -> Vec<(Pair, f64)> {
        Pair::all(self.n).map(|p| (p, self.get(p.a(), p.b()))).collect()
    }
}
