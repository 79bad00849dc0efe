//! Crowd-BT: online Bradley-Terry with an annotator-reliability belief.
//!
//! Items carry Gaussian beliefs `N(mu_i, var_i)`. A single virtual annotator
//! is correct with probability `η ~ Beta(alpha, beta)`, so an observed
//! `i ≻ j` has probability `η̄·σ(mu_i − mu_j) + (1 − η̄)·σ(mu_j − mu_i)`.

use rand::Rng;
use statrs::function::beta::ln_beta;
use statrs::function::gamma::digamma;

use crate::error::Result;
use crate::linalg::logistic;
use crate::pcm::{Judgment, Pair, Pcm};

use super::{random_next, Sampler, SimRng, TIE_TOL};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrowdBtConfig {
    pub prior_mean: f64,
    pub prior_var: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Probability of ignoring the utility and picking a uniform pair.
    pub epsilon: f64,
    /// Lower bound on the multiplicative variance factor.
    pub kappa: f64,
    pub var_floor: f64,
}

impl Default for CrowdBtConfig {
    fn default() -> Self {
        CrowdBtConfig {
            prior_mean: 0.0,
            prior_var: 1.0,
            alpha: 10.0,
            beta: 1.0,
            epsilon: 0.1,
            kappa: 1e-4,
            var_floor: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrowdBtState {
    pub mu: Vec<f64>,
    pub var: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
}

/// Beliefs after one hypothetical or real observation.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Update {
    mu_winner: f64,
    var_winner: f64,
    mu_loser: f64,
    var_loser: f64,
    alpha: f64,
    beta: f64,
}

/// `KL(N(m1, v1) ‖ N(m0, v0))`.
pub fn gaussian_kl(m1: f64, v1: f64, m0: f64, v0: f64) -> f64 {
    0.5 * ((v0 / v1).ln() + (v1 + (m1 - m0).powi(2)) / v0 - 1.0)
}

/// `KL(Beta(a1, b1) ‖ Beta(a0, b0))`.
pub fn beta_kl(a1: f64, b1: f64, a0: f64, b0: f64) -> f64 {
    ln_beta(a0, b0) - ln_beta(a1, b1)
        + (a1 - a0) * digamma(a1)
        + (b1 - b0) * digamma(b1)
        + (a0 - a1 + b0 - b1) * digamma(a1 + b1)
}

impl CrowdBtState {
    pub fn new(n: usize, config: &CrowdBtConfig) -> Self {
        CrowdBtState {
            mu: vec![config.prior_mean; n],
            var: vec![config.prior_var; n],
            alpha: config.alpha,
            beta: config.beta,
        }
    }

    pub fn reliability(&self) -> f64 {
        self.alpha / (self.alpha + self.beta)
    }

    /// Probability that the annotator reports `winner ≻ loser`.
    pub fn outcome_probability(&self, winner: usize, loser: usize) -> f64 {
        let eta = self.reliability();
        let a = logistic(self.mu[winner] - self.mu[loser]);
        eta * a + (1.0 - eta) * (1.0 - a)
    }

    fn update(&self, winner: usize, loser: usize, config: &CrowdBtConfig) -> Update {
        let eta = self.reliability();
        let a = logistic(self.mu[winner] - self.mu[loser]);
        let p = eta * a + (1.0 - eta) * (1.0 - a);
        let dp = (2.0 * eta - 1.0) * a * (1.0 - a);
        let d2p = dp * (1.0 - 2.0 * a);
        // derivatives of ln P with respect to mu_winner; mu_loser flips the first sign
        let grad = dp / p;
        let curv = (d2p * p - dp * dp) / (p * p);

        let shrink = |v: f64| (v * (1.0 + v * curv).max(config.kappa)).max(config.var_floor);
        let (vw, vl) = (self.var[winner], self.var[loser]);

        let s = self.alpha + self.beta;
        let e1 = self.alpha / s;
        let e2 = e1 * (self.alpha + 1.0) / (s + 1.0);
        let e3 = e2 * (self.alpha + 2.0) / (s + 2.0);
        let m1 = (a * e2 + (1.0 - a) * (e1 - e2)) / p;
        let m2 = (a * e3 + (1.0 - a) * (e2 - e3)) / p;
        let spread = m2 - m1 * m1;
        let common = m1 * (1.0 - m1) / spread - 1.0;
        let (alpha, beta) = if spread > 0.0 && common > 0.0 {
            (m1 * common, (1.0 - m1) * common)
        } else {
            (self.alpha, self.beta)
        };

        Update {
            mu_winner: self.mu[winner] + vw * grad,
            var_winner: shrink(vw),
            mu_loser: self.mu[loser] - vl * grad,
            var_loser: shrink(vl),
            alpha,
            beta,
        }
    }

    /// Applies the observation `judgment` to the beliefs.
    pub fn observe(&mut self, judgment: Judgment, config: &CrowdBtConfig) {
        let u = self.update(judgment.winner, judgment.loser, config);
        self.mu[judgment.winner] = u.mu_winner;
        self.var[judgment.winner] = u.var_winner;
        self.mu[judgment.loser] = u.mu_loser;
        self.var[judgment.loser] = u.var_loser;
        self.alpha = u.alpha;
        self.beta = u.beta;
    }

    /// Expected total KL from current to updated beliefs over both outcomes.
    pub fn utility(&self, i: usize, j: usize, config: &CrowdBtConfig) -> f64 {
        [(i, j), (j, i)]
            .into_iter()
            .map(|(w, l)| {
                let u = self.update(w, l, config);
                let kl = gaussian_kl(u.mu_winner, u.var_winner, self.mu[w], self.var[w])
                    + gaussian_kl(u.mu_loser, u.var_loser, self.mu[l], self.var[l])
                    + beta_kl(u.alpha, u.beta, self.alpha, self.beta);
                self.outcome_probability(w, l) * kl
            })
            .sum()
    }
}

/// Sequential Crowd-BT sampler.
#[derive(Debug, Clone)]
pub struct CrowdBt {
    config: CrowdBtConfig,
    state: CrowdBtState,
}

impl CrowdBt {
    pub fn new(n: usize, config: CrowdBtConfig) -> Self {
        CrowdBt {
            state: CrowdBtState::new(n, &config),
            config,
        }
    }

    pub fn state(&self) -> &CrowdBtState {
        &self.state
    }

    /// Next pair: exploration with probability epsilon, otherwise the
    /// highest-utility pair with ties drawn uniformly.
    pub fn next_pair(&self, rng: &mut SimRng) -> Pair {
        let n = self.state.mu.len();
        if rng.random::<f64>() < self.config.epsilon {
            return random_next(n, 1, rng)[0];
        }
        let mut best: Vec<Pair> = Vec::new();
        let mut best_gain = f64::NEG_INFINITY;
        for p in Pair::all(n) {
            let g = self.state.utility(p.a(), p.b(), &self.config);
            if g > best_gain + TIE_TOL {
                best_gain = g;
                best.clear();
                best.push(p);
            } else if (g - best_gain).abs() <= TIE_TOL {
                best.push(p);
            }
        }
        best[rng.random_range(0..best.len())]
    }
}

impl Sampler for CrowdBt {
    fn name(&self) -> &str {
        "crowd-bt"
    }

    fn batch_size(&self, _n: usize) -> usize {
        1
    }

    fn next_batch(&mut self, _pcm: &Pcm, _max_pairs: usize, rng: &mut SimRng) -> Result<Vec<Pair>> {
        Ok(vec![self.next_pair(rng)])
    }

    fn observe(&mut self, judgment: Judgment) {
        self.state.observe(judgment, &self.config);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use std::collections::HashMap;

    #[test]
    fn kl_identities() {
        assert_eq!(gaussian_kl(0.0, 1.0, 0.0, 1.0), 0.0);
        assert!(beta_kl(10.0, 1.0, 10.0, 1.0).abs() < 1e-12);
        assert!(gaussian_kl(0.5, 0.8, 0.0, 1.0) > 0.0);
        assert!(beta_kl(9.0, 2.0, 10.0, 1.0) > 0.0);
    }

    #[test]
    fn observe_moves_means_apart() {
        let config = CrowdBtConfig::default();
        let mut state = CrowdBtState::new(4, &config);
        assert!(state.reliability() > 0.5);
        state.observe(Judgment::new(2, 1).unwrap(), &config);
        assert!(state.mu[2] > 0.0);
        assert!(state.mu[1] < 0.0);
        assert!(state.var[2] < 1.0 && state.var[2] >= config.var_floor);
        assert_eq!(state.mu[0], 0.0);
    }

    #[test]
    fn gradient_sign_matches_finite_difference() {
        let config = CrowdBtConfig::default();
        let mut state = CrowdBtState::new(3, &config);
        state.mu = vec![0.4, -0.3, 0.1];
        let h = 1e-6;
        let log_p = |s: &CrowdBtState| s.outcome_probability(0, 1).ln();
        let mut up = state.clone();
        up.mu[0] += h;
        let fd_winner = (log_p(&up) - log_p(&state)) / h;
        let mut up = state.clone();
        up.mu[1] += h;
        let fd_loser = (log_p(&up) - log_p(&state)) / h;
        assert!(fd_winner > 0.0 && fd_loser < 0.0);

        let u = state.update(0, 1, &config);
        let step_w = (u.mu_winner - state.mu[0]) / state.var[0];
        let step_l = (u.mu_loser - state.mu[1]) / state.var[1];
        assert!((step_w - fd_winner).abs() < 1e-5);
        assert!((step_l - fd_loser).abs() < 1e-5);
    }

    #[test]
    fn reliability_tracks_surprises() {
        let config = CrowdBtConfig::default();
        let mut state = CrowdBtState::new(2, &config);
        state.mu = vec![3.0, -3.0];
        let before = state.reliability();
        state.observe(Judgment::new(1, 0).unwrap(), &config);
        assert!(state.reliability() < before);
    }

    #[test]
    fn fresh_state_ties_are_broken_uniformly() {
        let sampler = CrowdBt::new(4, CrowdBtConfig::default());
        let u = sampler.state.utility(0, 1, &sampler.config);
        for p in Pair::all(4) {
            assert!((sampler.state.utility(p.a(), p.b(), &sampler.config) - u).abs() < TIE_TOL);
        }
        let mut counts: HashMap<Pair, usize> = HashMap::new();
        let mut rng = SimRng::seed_from_u64(4);
        for _ in 0..6000 {
            *counts.entry(sampler.next_pair(&mut rng)).or_default() += 1;
        }
        assert_eq!(counts.len(), 6);
        assert!(counts.values().all(|&c| (c as f64 - 1000.0).abs() < 150.0));
    }

    #[test]
    fn prefers_uncertain_close_pairs() {
        let config = CrowdBtConfig::default();
        let mut state = CrowdBtState::new(3, &config);
        state.mu = vec![4.0, 0.0, 0.1];
        state.var = vec![0.2, 0.2, 0.2];
        assert!(state.utility(1, 2, &config) > state.utility(0, 1, &config));
    }
}
