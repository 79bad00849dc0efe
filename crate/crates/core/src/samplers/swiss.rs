use std::collections::HashMap;

use rand::seq::SliceRandom;

use crate::error::Result;
use crate::pcm::{Pair, Pcm};

use super::{Sampler, SimRng};

/// One Swiss round.
///
/// The first round is a uniformly random matching. Later rounds sort by
/// standing (descending; equal standings in random order) and pair each
/// unmatched entry with the first later unmatched entry it has played the
/// fewest times, so an unplayed partner always wins over a repeat. With an
/// odd count the last entry sits out.
pub fn swiss_next_round(
    standings: &[f64],
    history: &HashMap<Pair, u32>,
    first_round: bool,
    rng: &mut SimRng,
) -> Vec<Pair> {
    let n = standings.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    if first_round {
        return order
            .chunks_exact(2)
            .map(|c| Pair::new(c[0], c[1]).expect("distinct indices"))
            .collect();
    }
    order.sort_by(|&x, &y| standings[y].total_cmp(&standings[x]));

    let mut taken = vec![false; n];
    let mut pairs = Vec::with_capacity(n / 2);
    for pos in 0..n {
        let p = order[pos];
        if taken[p] {
            continue;
        }
        let partner = order[pos + 1..]
            .iter()
            .copied()
            .filter(|&q| !taken[q])
            .min_by_key(|&q| {
                history
                    .get(&Pair::new(p, q).expect("distinct indices"))
                    .copied()
                    .unwrap_or(0)
            });
        if let Some(q) = partner {
            taken[p] = true;
            taken[q] = true;
            pairs.push(Pair::new(p, q).expect("distinct indices"));
        }
    }
    pairs
}

/// Swiss-system tournament pairing with win-count standings.
#[derive(Debug, Clone, Default)]
pub struct Swiss {
    rounds: usize,
    history: HashMap<Pair, u32>,
}

impl Swiss {
    pub fn new() -> Self {
        Self::default()
    }
}

impl Sampler for Swiss {
    fn name(&self) -> &str {
        "swiss"
    }

    fn batch_size(&self, n: usize) -> usize {
        n / 2
    }

    fn next_batch(&mut self, pcm: &Pcm, max_pairs: usize, rng: &mut SimRng) -> Result<Vec<Pair>> {
        let standings: Vec<f64> = (0..pcm.n()).map(|i| pcm.wins(i)).collect();
        let mut round = swiss_next_round(&standings, &self.history, self.rounds == 0, rng);
        self.rounds += 1;
        round.truncate(max_pairs.max(1));
        for p in &round {
            *self.history.entry(*p).or_default() += 1;
        }
        Ok(round)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use std::collections::HashSet;

    fn as_set(pairs: &[Pair]) -> HashSet<(usize, usize)> {
        pairs.iter().map(|p| (p.a(), p.b())).collect()
    }

    #[test]
    fn first_round_is_a_uniform_perfect_matching() {
        let mut counts: HashMap<Vec<(usize, usize)>, usize> = HashMap::new();
        for seed in 0..3000 {
            let mut rng = SimRng::seed_from_u64(seed);
            let mut round = swiss_next_round(&[0.0; 4], &HashMap::new(), true, &mut rng);
            round.sort();
            assert_eq!(round.len(), 2);
            let covered: HashSet<usize> = round.iter().flat_map(|p| [p.a(), p.b()]).collect();
            assert_eq!(covered.len(), 4);
            *counts.entry(round.iter().map(|p| (p.a(), p.b())).collect()).or_default() += 1;
        }
        assert_eq!(counts.len(), 3);
        // binomial sd for p = 1/3, N = 3000 is about 26
        assert!(counts.values().all(|&c| (c as f64 - 1000.0).abs() < 130.0));
    }

    #[test]
    fn adjacent_standings_are_paired() {
        let mut rng = SimRng::seed_from_u64(0);
        let round = swiss_next_round(&[3.0, 2.0, 1.0, 0.0], &HashMap::new(), false, &mut rng);
        assert_eq!(as_set(&round), HashSet::from([(0, 1), (2, 3)]));
    }

    #[test]
    fn played_pairing_is_skipped() {
        let mut rng = SimRng::seed_from_u64(0);
        let history = HashMap::from([(Pair::new(0, 1).unwrap(), 1)]);
        let round = swiss_next_round(&[3.0, 2.0, 1.0, 0.0], &history, false, &mut rng);
        assert_eq!(as_set(&round), HashSet::from([(0, 2), (1, 3)]));
    }

    #[test]
    fn repeat_only_when_forced() {
        let mut rng = SimRng::seed_from_u64(0);
        let history = HashMap::from([
            (Pair::new(0, 1).unwrap(), 1),
            (Pair::new(0, 2).unwrap(), 1),
            (Pair::new(0, 3).unwrap(), 1),
        ]);
        let round = swiss_next_round(&[3.0, 2.0, 1.0, 0.0], &history, false, &mut rng);
        assert_eq!(as_set(&round), HashSet::from([(0, 1), (2, 3)]));
    }

    #[test]
    fn odd_count_leaves_one_out() {
        let mut rng = SimRng::seed_from_u64(5);
        let round = swiss_next_round(&[4.0, 3.0, 2.0, 1.0, 0.0], &HashMap::new(), false, &mut rng);
        assert_eq!(round.len(), 2);
    }

    #[test]
    fn sampler_truncates_to_budget() {
        let mut s = Swiss::new();
        let pcm = Pcm::new(8, 1.0).unwrap();
        let mut rng = SimRng::seed_from_u64(9);
        assert_eq!(s.next_batch(&pcm, 100, &mut rng).unwrap().len(), 4);
        assert_eq!(s.next_batch(&pcm, 3, &mut rng).unwrap().len(), 3);
    }
}
