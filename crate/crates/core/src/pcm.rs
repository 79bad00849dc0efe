//! Pairwise comparison matrix and the small value types around it.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Unordered pair of distinct stimuli, stored with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pair {
    a: usize,
    b: usize,
}

impl Pair {
    pub fn new(x: usize, y: usize) -> Result<Self> {
        match x.cmp(&y) {
            std::cmp::Ordering::Less => Ok(Pair { a: x, b: y }),
            std::cmp::Ordering::Greater => Ok(Pair { a: y, b: x }),
            std::cmp::Ordering::Equal => Err(Error::InvalidPair(x)),
        }
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    /// Index of this pair in the lexicographic enumeration of all pairs of `n` stimuli.
    pub fn linear_index(&self, n: usize) -> usize {
        self.a * (2 * n - self.a - 1) / 2 + (self.b - self.a - 1)
    }

    /// All `n(n-1)/2` pairs in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = Pair> {
        (0..n).flat_map(move |a| (a + 1..n).map(move |b| Pair { a, b }))
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// One binary decision: `winner` was preferred over `loser`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Judgment {
    pub winner: usize,
    pub loser: usize,
}

impl Judgment {
    pub fn new(winner: usize, loser: usize) -> Result<Self> {
        if winner == loser {
            return Err(Error::InvalidJudgment(winner));
        }
        Ok(Judgment { winner, loser })
    }

    pub fn pair(&self) -> Pair {
        Pair {
            a: self.winner.min(self.loser),
            b: self.winner.max(self.loser),
        }
    }
}

/// Square count matrix; `count(i, j)` is how often `i` was preferred over `j`.
///
/// Counts are real-valued so that expected (fractional) matrices share the
/// type with simulated ones. The diagonal is always zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Pcm {
    n: usize,
    counts: Vec<f64>,
    init_value: f64,
}

impl Pcm {
    /// Matrix with every off-diagonal cell set to `init_value`.
    pub fn new(n: usize, init_value: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension(n));
        }
        if !init_value.is_finite() || init_value < 0.0 {
            return Err(Error::InvalidInitValue(init_value));
        }
        let mut counts = vec![init_value; n * n];
        for i in 0..n {
            counts[i * n + i] = 0.0;
        }
        Ok(Pcm {
            n,
            counts,
            init_value,
        })
    }

    /// Builds a matrix from rows, checking shape, sign and the zero diagonal.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::InvalidDimension(n));
        }
        let mut counts = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidDataset(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidDataset(format!(
                        "cell [{i}][{j}] = {v} is not a finite nonnegative count"
                    )));
                }
                if i == j && v != 0.0 {
                    return Err(Error::InvalidDataset(format!(
                        "diagonal cell [{i}][{i}] = {v} must be zero"
                    )));
                }
                counts.push(v);
            }
        }
        Ok(Pcm {
            n,
            counts,
            init_value: 0.0,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn count(&self, i: usize, j: usize) -> f64 {
        self.counts[i * self.n + j]
    }

    /// Comparisons recorded on the pair in either direction.
    #[inline]
    pub fn pair_total(&self, i: usize, j: usize) -> f64 {
        self.count(i, j) + self.count(j, i)
    }

    /// Total wins of stimulus `i`.
    pub fn wins(&self, i: usize) -> f64 {
        self.counts[i * self.n..(i + 1) * self.n].iter().sum()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.counts.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.n {
            return Err(Error::IndexOutOfRange { index, n: self.n });
        }
        Ok(())
    }

    /// Adds one vote for `judgment.winner` over `judgment.loser`.
    pub fn record(&mut self, judgment: Judgment) -> Result<()> {
        self.add(judgment, 1.0)
    }

    /// Adds `weight` votes for the judged direction.
    pub fn add(&mut self, judgment: Judgment, weight: f64) -> Result<()> {
        self.check_index(judgment.winner)?;
        self.check_index(judgment.loser)?;
        if judgment.winner == judgment.loser {
            return Err(Error::InvalidJudgment(judgment.winner));
        }
        self.counts[judgment.winner * self.n + judgment.loser] += weight;
        Ok(())
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, value: f64) {
        debug_assert!(i != j && value >= 0.0);
        self.counts[i * self.n + j] = value;
    }

    /// Empirical rate at which `i` beats `j`.
    pub fn preference_probability(&self, i: usize, j: usize) -> Result<f64> {
        self.check_index(i)?;
        self.check_index(j)?;
        let total = if i == j { 0.0 } else { self.pair_total(i, j) };
        if total <= 0.0 {
            return Err(Error::UndefinedPreference { i, j });
        }
        Ok(self.count(i, j) / total)
    }

    pub fn init_value(&self) -> f64 {
        self.init_value
    }

    /// Number of comparisons the matrix represents.
    ///
    /// Initialization counts as `init_value` comparisons per unordered pair
    /// (one tied evaluation per pair for ones-initialization); every recorded
    /// judgment adds one.
    pub fn total_comparisons(&self) -> f64 {
        let pairs = (self.n * (self.n - 1)) as f64;
        let raw: f64 = self.counts.iter().sum();
        raw - pairs * self.init_value + 0.5 * pairs * self.init_value
    }

    /// Returns a copy with every cell multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Pcm {
        Pcm {
            n: self.n,
            counts: self.counts.iter().map(|c| c * factor).collect(),
            init_value: self.init_value * factor,
        }
    }

    /// Relabels stimuli: stimulus `i` of `self` becomes `perm[i]` in the result.
    pub fn permuted(&self, perm: &[usize]) -> Pcm {
        assert_eq!(perm.len(), self.n, "permutation length must match dimension");
        let mut counts = vec![0.0; self.n * self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                counts[perm[i] * self.n + perm[j]] = self.count(i, j);
            }
        }
        Pcm {
            n: self.n,
            counts,
            init_value: self.init_value,
        }
    }

    /// True when every pair has at least one comparison in some direction.
    pub fn is_complete(&self) -> bool {
        Pair::all(self.n).all(|p| self.pair_total(p.a, p.b) > 0.0)
    }
}
