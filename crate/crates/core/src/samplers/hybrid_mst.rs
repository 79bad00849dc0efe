use crate::error::Result;
use crate::pcm::{Pair, Pcm};
use crate::scaling::laplace_posterior;

use super::{top_by_gain, EigTable, Sampler, SimRng};

/// Spanning tree of maximum total gain (Kruskal on negated weights).
///
/// Edges come back in the order Kruskal accepted them: decreasing gain,
/// lexicographic among ties.
pub fn max_spanning_tree(table: &EigTable) -> Vec<Pair> {
    let n = table.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let ordered = top_by_gain(table.entries(), usize::MAX);
    let mut tree = Vec::with_capacity(n.saturating_sub(1));
    for (p, _) in ordered {
        let (ra, rb) = (find(&mut parent, p.a()), find(&mut parent, p.b()));
        if ra != rb {
            parent[ra] = rb;
            tree.push(p);
            if tree.len() + 1 == n {
                break;
            }
        }
    }
    tree
}

/// Batch sampler: the information-maximizing spanning tree of the current posterior.
#[derive(Debug, Clone)]
pub struct HybridMst {
    prior_var: f64,
}

impl HybridMst {
    pub fn new(prior_var: f64) -> Self {
        HybridMst { prior_var }
    }
}

impl Sampler for HybridMst {
    fn name(&self) -> &str {
        "hybrid-mst"
    }

    fn batch_size(&self, n: usize) -> usize {
        n - 1
    }

    fn next_batch(&mut self, pcm: &Pcm, max_pairs: usize, _rng: &mut SimRng) -> Result<Vec<Pair>> {
        let posterior = laplace_posterior(pcm, self.prior_var)?;
        let table = EigTable::from_posterior(&posterior)?;
        let mut tree = max_spanning_tree(&table);
        tree.truncate(max_pairs.max(1));
        Ok(tree)
    }
}
