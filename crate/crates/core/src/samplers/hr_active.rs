use crate::error::{Error, Result};
use crate::linalg::{is_connected, laplacian, symmetric_pinv};
use crate::pcm::{Pair, Pcm};

use super::{top_by_gain, Sampler, SimRng};

/// Effective resistance of every pair on the vote-weighted comparison graph.
pub fn effective_resistances(pcm: &Pcm) -> Result<Vec<(Pair, f64)>> {
    if !is_connected(pcm) {
        return Err(Error::IllPosed("comparison graph is disconnected".into()));
    }
    let lp = symmetric_pinv(&laplacian(pcm));
    Ok(Pair::all(pcm.n())
        .map(|p| {
            let (i, j) = (p.a(), p.b());
            (p, lp[(i, i)] + lp[(j, j)] - 2.0 * lp[(i, j)])
        })
        .collect())
}

/// Sequential HodgeRank sampler: picks the edge whose extra unit observation
/// gains the most information, `ln(1 + r_ij)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct HrActive;

impl Sampler for HrActive {
    fn name(&self) -> &str {
        "hr-active"
    }

    fn batch_size(&self, _n: usize) -> usize {
        1
    }

    fn next_batch(&mut self, pcm: &Pcm, max_pairs: usize, _rng: &mut SimRng) -> Result<Vec<Pair>> {
        let gains = effective_resistances(pcm)?
            .into_iter()
            .map(|(p, r)| (p, r.ln_1p()))
            .collect();
        Ok(top_by_gain(gains, max_pairs.max(1))
            .into_iter()
            .map(|(p, _)| p)
            .collect())
    }
}
