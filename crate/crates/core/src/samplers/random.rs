use rand::Rng;

use crate::error::Result;
use crate::pcm::{Pair, Pcm};

use super::{Sampler, SimRng};

/// `max_pairs` pairs drawn uniformly (with replacement) from all unordered pairs.
pub fn random_next(n: usize, max_pairs: usize, rng: &mut SimRng) -> Vec<Pair> {
    let m = n * (n - 1) / 2;
    (0..max_pairs)
        .map(|_| {
            let k = rng.random_range(0..m);
            Pair::all(n).nth(k).expect("index below pair count")
        })
        .collect()
}

/// Erdős-Rényi style uniform pair sampling.
#[derive(Debug, Clone, Copy, Default)]
pub struct HrRandom;

impl Sampler for HrRandom {
    fn name(&self) -> &str {
        "hr-random"
    }

    fn batch_size(&self, _n: usize) -> usize {
        1
    }

    fn next_batch(&mut self, pcm: &Pcm, max_pairs: usize, rng: &mut SimRng) -> Result<Vec<Pair>> {
        Ok(random_next(pcm.n(), max_pairs.max(1), rng))
    }
}
