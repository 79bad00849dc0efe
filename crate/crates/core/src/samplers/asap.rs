use std::collections::BTreeSet;

use crate::error::Result;
use crate::pcm::{Pair, Pcm};
use crate::scaling::laplace_posterior;

use super::{pair_eig, top_by_gain, Sampler, SimRng};

/// Pairs within `window` positions of each other in the ranking by
/// decreasing `mean` (ties by index), plus the `previous` batch.
pub fn asap_candidates(mean: &[f64], window: usize, previous: &[Pair]) -> Vec<Pair> {
    let mut order: Vec<usize> = (0..mean.len()).collect();
    order.sort_by(|&x, &y| mean[y].total_cmp(&mean[x]));
    let mut set: BTreeSet<Pair> = previous.iter().copied().collect();
    for (r, &a) in order.iter().enumerate() {
        for &b in order.iter().skip(r + 1).take(window) {
            set.insert(Pair::new(a, b).expect("distinct indices"));
        }
    }
    set.into_iter().collect()
}

/// Batch sampler scoring only rank-local candidate pairs under a posterior
/// refit on every comparison so far.
#[derive(Debug, Clone)]
pub struct Asap {
    prior_var: f64,
    window: Option<usize>,
    previous: Vec<Pair>,
}

impl Asap {
    pub fn new(prior_var: f64) -> Self {
        Asap {
            prior_var,
            window: None,
            previous: Vec::new(),
        }
    }

    /// Overrides the default window `⌈n/4⌉`.
    pub fn with_window(mut self, window: usize) -> Self {
        self.window = Some(window);
        self
    }
}

impl Sampler for Asap {
    fn name(&self) -> &str {
        "asap"
    }

    fn batch_size(&self, n: usize) -> usize {
        n - 1
    }

    fn next_batch(&mut self, pcm: &Pcm, max_pairs: usize, _rng: &mut SimRng) -> Result<Vec<Pair>> {
        let n = pcm.n();
        let posterior = laplace_posterior(pcm, self.prior_var)?;
        let window = self.window.unwrap_or(n.div_ceil(4)).max(1);
        let candidates = asap_candidates(posterior.mean.as_slice(), window, &self.previous);
        let scored = candidates
            .into_iter()
            .map(|p| Ok((p, pair_eig(&posterior, p.a(), p.b())?)))
            .collect::<Result<Vec<_>>>()?;
        let batch: Vec<Pair> = top_by_gain(scored, max_pairs.max(1))
            .into_iter()
            .map(|(p, _)| p)
            .collect();
        self.previous = batch.clone();
        Ok(batch)
    }
}
