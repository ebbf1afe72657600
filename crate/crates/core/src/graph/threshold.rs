//! Threshold graphs, neighbourhood inclusion and degree-sequence conjugates.

use std::collections::BTreeSet;

use super::Graph;
use crate::{Error, Result};

/// How a node joins a threshold graph under construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CreationStep {
    Isolated,
    Dominating,
}

/// Builds the threshold graph for a creation sequence.
///
/// Node `k` is joined to every earlier node iff `steps[k]` is
/// [`CreationStep::Dominating`]. The entry for node 0 is irrelevant. The
/// result is connected iff the last step is dominating.
pub fn threshold_graph(steps: &[CreationStep]) -> Result<Graph> {
    if steps.len() < 2 {
        return Err(Error::TooFewNodes {
            what: "threshold graph",
            need: 2,
            got: steps.len(),
        });
    }
    if steps[steps.len() - 1] != CreationStep::Dominating {
        return Err(Error::Disconnected);
    }
    let mut edges = Vec::new();
    for (k, step) in steps.iter().enumerate().skip(1) {
        if *step == CreationStep::Dominating {
            edges.extend((0..k).map(|j| (j, k)));
        }
    }
    Graph::from_unweighted_edges(steps.len(), &edges)
}

/// Ordered pairs `(i, j)` where `i` dominates `j` in the vicinal preorder:
/// `N(j) \ {i}` is a subset of `N(i)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DominanceRelation {
    pairs: BTreeSet<(usize, usize)>,
}

impl DominanceRelation {
    pub fn dominates(&self, i: usize, j: usize) -> bool {
        self.pairs.contains(&(i, j))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Whether every pair of distinct nodes is comparable.
    pub fn is_total(&self, n: usize) -> bool {
        (0..n).all(|i| (i + 1..n).all(|j| self.dominates(i, j) || self.dominates(j, i)))
    }
}

pub fn dominance_pairs(g: &Graph) -> DominanceRelation {
    let n = g.node_count();
    let mut pairs = BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let covered = g
                .neighbor_indices(j)
                .filter(|&k| k != i)
                .all(|k| g.has_edge(i, k));
            if covered {
                pairs.insert((i, j));
            }
        }
    }
    DominanceRelation { pairs }
}

/// Non-increasing degree sequence with its corrected conjugate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSequence {
    pub degrees: Vec<usize>,
    pub conjugate: Vec<usize>,
}

impl DegreeSequence {
    pub fn new(mut degrees: Vec<usize>) -> Self {
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        let n = degrees.len();
        // 1-based position k: earlier entries count when >= k-1, later when >= k
        let conjugate = (1..=n)
            .map(|k| {
                let before = degrees[..k - 1].iter().filter(|&&d| d >= k - 1).count();
                let after = degrees[k..].iter().filter(|&&d| d >= k).count();
                before + after
            })
            .collect();
        DegreeSequence { degrees, conjugate }
    }

    /// Half the positive excess of the conjugate over the degrees.
    pub fn raw_gap(&self) -> f64 {
        let excess: usize = self
            .conjugate
            .iter()
            .zip(&self.degrees)
            .map(|(&c, &d)| c.saturating_sub(d))
            .sum();
        excess as f64 / 2.0
    }
}
