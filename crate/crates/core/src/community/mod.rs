//! Modularity, Louvain community detection and consensus clustering.

mod louvain;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{seed, Error, Graph, Result};

use louvain::Network;

/// Relabels ids to `0..k` in order of first appearance.
pub fn canonical_labels(ids: &[usize]) -> Vec<usize> {
    louvain::canonicalize(ids)
}

/// Upper bound on consensus outer iterations.
pub const MAX_CONSENSUS_ITERATIONS: usize = 100;

/// Node-to-module assignment with its modularity on the source graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    /// Module id per node; ids are contiguous and numbered in order of first
    /// appearance.
    pub assignment: Vec<usize>,
    pub q: f64,
    pub seed: u64,
    /// Louvain levels for a single run, outer iterations for a consensus.
    pub iterations: usize,
}

impl Partition {
    pub fn module_count(&self) -> usize {
        self.assignment.iter().max().map_or(0, |m| m + 1)
    }

    /// `{q, modules: {label: module_id}}`.
    pub fn to_json(&self, g: &Graph) -> serde_json::Value {
        let modules: BTreeMap<&str, usize> = g
            .labels()
            .iter()
            .map(String::as_str)
            .zip(self.assignment.iter().copied())
            .collect();
        serde_json::json!({ "q": self.q, "modules": modules })
    }
}

fn network(g: &Graph) -> Network {
    Network::from_adjacency((0..g.node_count()).map(|i| g.neighbors(i).to_vec()).collect())
}

/// Newman-Girvan modularity; weighted graphs use strengths and total weight.
pub fn modularity_q(g: &Graph, assignment: &[usize]) -> Result<f64> {
    if assignment.len() != g.node_count() {
        return Err(Error::PartitionMismatch {
            expected: g.node_count(),
            got: assignment.len(),
        });
    }
    Ok(network(g).modularity(assignment))
}

pub fn louvain(g: &Graph, seed: u64) -> Partition {
    let net = network(g);
    let (assignment, levels) = louvain::run(&net, seed);
    let q = net.modularity(&assignment);
    Partition {
        assignment,
        q,
        seed,
        iterations: levels,
    }
}

/// Repeated Louvain with a modularity-weighted co-assignment matrix,
/// thresholded at `tau` and re-clustered until every node pair is either
/// always or never placed together.
pub fn consensus_partition(g: &Graph, runs: usize, tau: f64, seed_value: u64) -> Result<Partition> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::InvalidParameter(format!("tau must lie in (0, 1), got {tau}")));
    }
    if runs == 0 {
        return Err(Error::InvalidParameter("runs must be positive".into()));
    }
    let n = g.node_count();
    let mut net = network(g);
    for outer in 1..=MAX_CONSENSUS_ITERATIONS {
        let results: Vec<(Vec<usize>, f64)> = (0..runs)
            .into_par_iter()
            .map(|r| {
                let (a, _) = louvain::run(&net, seed::derive(seed_value, outer as u64, r as u64));
                let q = net.modularity(&a);
                (a, q)
            })
            .collect();
        let agreement = coassignment(&results, n);
        if is_binary(&agreement) {
            let assignment = blocks(&agreement);
            let q = modularity_q(g, &assignment)?;
            return Ok(Partition {
                assignment,
                q,
                seed: seed_value,
                iterations: outer,
            });
        }
        net = Network::from_adjacency(
            (0..n)
                .map(|i| {
                    (0..n)
                        .filter(|&j| j != i && agreement[i][j] >= tau)
                        .map(|j| (j, agreement[i][j]))
                        .collect()
                })
                .collect(),
        );
    }
    Err(Error::ConsensusNoConvergence(MAX_CONSENSUS_ITERATIONS))
}

/// Fraction of (modularity-weighted) runs placing each pair together. Runs
/// are weighted by `Q / sum Q`; when no run has positive modularity they
/// count equally.
fn coassignment(results: &[(Vec<usize>, f64)], n: usize) -> Vec<Vec<f64>> {
    let total_q: f64 = results.iter().map(|(_, q)| q.max(0.0)).sum();
    let weights: Vec<f64> = if total_q > 0.0 {
        results.iter().map(|(_, q)| q.max(0.0) / total_q).collect()
    } else {
        vec![1.0 / results.len() as f64; results.len()]
    };
    let mut d = vec![vec![0.0; n]; n];
    for ((a, _), w) in results.iter().zip(weights) {
        if w == 0.0 {
            continue;
        }
        for i in 0..n {
            for j in 0..n {
                if a[i] == a[j] {
                    d[i][j] += w;
                }
            }
        }
    }
    d
}

const BINARY_TOL: f64 = 1e-9;

fn is_binary(d: &[Vec<f64>]) -> bool {
    d.iter()
        .flatten()
        .all(|x| !(BINARY_TOL..=1.0 - BINARY_TOL).contains(x))
}

/// Modules of a binary co-assignment matrix.
fn blocks(d: &[Vec<f64>]) -> Vec<usize> {
    let n = d.len();
    let mut out = vec![usize::MAX; n];
    let mut next = 0;
    for i in 0..n {
        if out[i] != usize::MAX {
            continue;
        }
        for j in i..n {
            if out[j] == usize::MAX && d[i][j] > 0.5 {
                out[j] = next;
            }
        }
        out[i] = next;
        next += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centrality::test_graphs::*;

    /// Two 4-cliques {0..3} and {4..7} joined by the edge 3-4.
    pub(crate) fn two_cliques() -> Graph {
        let mut edges = Vec::new();
        for base in [0, 4] {
            for i in 0..4 {
                for j in i + 1..4 {
                    edges.push((base + i, base + j));
                }
            }
        }
        edges.push((3, 4));
        Graph::from_unweighted_edges(8, &edges).unwrap()
    }

    fn brute_force_q(g: &Graph, a: &[usize]) -> f64 {
        let n = g.node_count();
        let k = g.strengths();
        let two_m: f64 = k.iter().sum();
        let mut q = 0.0;
        for i in 0..n {
            for j in 0..n {
                if a[i] == a[j] {
                    q += g.weight(i, j).unwrap_or(0.0) - k[i] * k[j] / two_m;
                }
            }
        }
        q / two_m
    }

    #[test]
    fn single_module_has_zero_q() {
        for g in [two_cliques(), star5(), cycle(7)] {
            let q = modularity_q(&g, &vec![0; g.node_count()]).unwrap();
            assert!(q.abs() < 1e-12);
        }
    }

    #[test]
    fn planted_two_cliques_q() {
        let g = two_cliques();
        let q = modularity_q(&g, &[0, 0, 0, 0, 1, 1, 1, 1]).unwrap();
        let expected = 12.0 / 13.0 - 2.0 * 0.25;
        assert!((q - expected).abs() < 1e-12);
        assert!((q - 0.42308).abs() < 1e-5);
    }

    #[test]
    fn singletons_of_complete_graph_negative() {
        let g = complete(5);
        let q = modularity_q(&g, &[0, 1, 2, 3, 4]).unwrap();
        assert!((q - brute_force_q(&g, &[0, 1, 2, 3, 4])).abs() < 1e-12);
        assert!((q + 0.2).abs() < 1e-12);
    }

    #[test]
    fn weighted_modularity_matches_double_sum() {
        let labels = (0..4).map(|i| i.to_string()).collect();
        let g = Graph::from_edges(labels, [(0, 1, 3.0), (1, 2, 0.5), (2, 3, 2.0), (3, 0, 0.25)], true)
            .unwrap();
        let a = [0, 0, 1, 1];
        assert!((modularity_q(&g, &a).unwrap() - brute_force_q(&g, &a)).abs() < 1e-12);
    }

    #[test]
    fn louvain_recovers_two_cliques() {
        // exhaustive oracle: the planted split maximises Q over all 2^7 bipartitions
        let g = two_cliques();
        let planted = modularity_q(&g, &[0, 0, 0, 0, 1, 1, 1, 1]).unwrap();
        for mask in 0u32..128 {
            let a: Vec<usize> = (0..8).map(|i| ((mask << 1) >> i & 1) as usize).collect();
            assert!(modularity_q(&g, &a).unwrap() <= planted + 1e-12);
        }
        for s in 0..20 {
            let p = louvain(&g, s);
            assert_eq!(p.assignment, vec![0, 0, 0, 0, 1, 1, 1, 1]);
            assert!((p.q - planted).abs() < 1e-12);
        }
    }

    #[test]
    fn louvain_on_complete_graph_is_one_module() {
        let p = louvain(&complete(6), 3);
        assert_eq!(p.module_count(), 1);
        assert!(p.q.abs() < 1e-12);
    }

    #[test]
    fn louvain_nonnegative_on_c4() {
        for s in 0..10 {
            assert!(louvain(&cycle(4), s).q >= -1e-12);
        }
    }

    #[test]
    fn louvain_deterministic_for_seed() {
        let g = cycle(12);
        assert_eq!(louvain(&g, 5), louvain(&g, 5));
    }

    #[test]
    fn consensus_on_two_cliques() {
        let g = two_cliques();
        let p = consensus_partition(&g, 50, 0.4, 1).unwrap();
        assert_eq!(p.assignment, vec![0, 0, 0, 0, 1, 1, 1, 1]);
        assert!((p.q - 0.42308).abs() < 1e-4);
    }

    #[test]
    fn consensus_on_k5_single_pass() {
        let p = consensus_partition(&complete(5), 50, 0.4, 9).unwrap();
        assert_eq!(p.assignment, vec![0; 5]);
        assert_eq!(p.iterations, 1);
    }

    #[test]
    fn consensus_ring_of_cliques() {
        // four 4-cliques in a ring, one bridge between consecutive cliques
        let mut edges = Vec::new();
        for c in 0..4 {
            let base = 4 * c;
            for i in 0..4 {
                for j in i + 1..4 {
                    edges.push((base + i, base + j));
                }
            }
            edges.push((base + 3, (base + 4) % 16));
        }
        let g = Graph::from_unweighted_edges(16, &edges).unwrap();
        let p = consensus_partition(&g, 50, 0.4, 2).unwrap();
        let expected: Vec<usize> = (0..16).map(|i| i / 4).collect();
        assert_eq!(p.assignment, expected);
        // Q oracle: the planted split beats merging neighbouring cliques
        let merged: Vec<usize> = (0..16).map(|i| i / 8).collect();
        assert!(p.q > modularity_q(&g, &merged).unwrap());
    }

    #[test]
    fn consensus_is_idempotent() {
        let g = two_cliques();
        let p = consensus_partition(&g, 20, 0.4, 4).unwrap();
        // co-assignment graph of the result: disjoint cliques
        let n = g.node_count();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if p.assignment[i] == p.assignment[j] {
                    edges.push((i, j));
                }
            }
        }
        let blocks = Graph::from_unweighted_edges(n, &edges).unwrap();
        let again = consensus_partition(&blocks, 20, 0.4, 11).unwrap();
        assert_eq!(again.assignment, p.assignment);
    }

    #[test]
    fn consensus_rejects_bad_tau() {
        assert!(consensus_partition(&cycle(4), 10, 1.0, 0).is_err());
        assert!(consensus_partition(&cycle(4), 10, 0.0, 0).is_err());
    }

    #[test]
    fn partition_json_shape() {
        let g = two_cliques();
        let p = consensus_partition(&g, 10, 0.4, 0).unwrap();
        let v = p.to_json(&g);
        assert_eq!(v["modules"]["7"], 1);
        assert!(v["q"].as_f64().unwrap() > 0.4);
    }
}
