//! Null-model surrogates: connected random graphs of fixed size and
//! density, and degree-preserving rewirings.

use std::collections::{BinaryHeap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{seed, Error, Graph, Result};

/// Default successful swaps per edge for degree-preserving rewiring.
pub const DEFAULT_REWIRES_PER_EDGE: usize = 10;

/// Attempt cap, as a multiple of the swap target.
const ATTEMPTS_PER_SWAP: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SurrogateKind {
    Unconstrained,
    Constrained,
}

impl SurrogateKind {
    pub fn name(self) -> &'static str {
        match self {
            SurrogateKind::Unconstrained => "unconstrained",
            SurrogateKind::Constrained => "constrained",
        }
    }
}

/// Connected random graph with `n` nodes and `e` edges.
///
/// A uniform random spanning tree is grown by a random walk on the complete
/// graph, adding an edge each time the walk discovers a node. The remaining
/// `e - (n - 1)` edges are drawn uniformly from the absent pairs. Weights,
/// when given, are shuffled onto the edges.
pub fn unconstrained_surrogate(
    n: usize,
    e: usize,
    weights: Option<&[f64]>,
    seed_value: u64,
) -> Result<Graph> {
    let max_edges = n * n.saturating_sub(1) / 2;
    if n < 2 || e + 1 < n || e > max_edges {
        return Err(Error::InvalidParameter(format!(
            "{e} edges cannot form a connected simple graph on {n} nodes"
        )));
    }
    if let Some(w) = weights {
        if w.len() != e {
            return Err(Error::InvalidParameter(format!("{} weights for {e} edges", w.len())));
        }
    }
    let mut rng = seed::rng(seed_value);
    let mut present: HashSet<(usize, usize)> = HashSet::with_capacity(e);
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(e);

    let mut discovered = vec![false; n];
    let mut current = rng.gen_range(0..n);
    discovered[current] = true;
    let mut remaining = n - 1;
    while remaining > 0 {
        // uniform step to any other node
        let mut next = rng.gen_range(0..n - 1);
        if next >= current {
            next += 1;
        }
        if !discovered[next] {
            discovered[next] = true;
            remaining -= 1;
            let key = (current.min(next), current.max(next));
            present.insert(key);
            edges.push(key);
        }
        current = next;
    }

    let extra = e - (n - 1);
    if extra > 0 {
        if 2 * e > max_edges {
            // dense target: sample from the explicit complement
            let mut absent: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|k| !present.contains(k))
                .collect();
            absent.shuffle(&mut rng);
            edges.extend(absent.into_iter().take(extra));
        } else {
            while edges.len() < e {
                let u = rng.gen_range(0..n);
                let v = rng.gen_range(0..n);
                if u == v {
                    continue;
                }
                let key = (u.min(v), u.max(v));
                if present.insert(key) {
                    edges.push(key);
                }
            }
        }
    }

    let weighted = weights.is_some();
    let mut ws: Vec<f64> = weights.map_or_else(|| vec![1.0; e], <[f64]>::to_vec);
    if weighted {
        ws.shuffle(&mut rng);
    }
    let labels = (0..n).map(|i| i.to_string()).collect();
    Graph::from_edges(
        labels,
        edges.into_iter().zip(ws).map(|((u, v), w)| (u, v, w)),
        weighted,
    )
}

/// Result of degree-preserving rewiring.
#[derive(Debug, Clone, PartialEq)]
pub struct Rewired {
    pub graph: Graph,
    /// Swaps accepted.
    pub achieved: usize,
    /// Swaps requested (`rewires_per_edge * E`).
    pub target: usize,
    pub attempts: usize,
}

impl Rewired {
    pub fn completion(&self) -> f64 {
        if self.target == 0 {
            1.0
        } else {
            self.achieved as f64 / self.target as f64
        }
    }
}

/// Rewires topology by double-edge swaps: `(a, b), (c, d)` becomes
/// `(a, d), (c, b)`. Swaps that would create a self-loop, a multi-edge or a
/// disconnected graph are rejected. Degree sequence, labels and the edge
/// weights' multiset are unchanged; a swapped edge keeps the weight of the
/// edge it replaced.
///
/// Stops after `rewires_per_edge * E` accepted swaps or
/// `50 *` that many attempts, whichever comes first; a graph with a unique
/// realisation of its degree sequence (a star, say) is returned unchanged.
pub fn constrained_surrogate(g: &Graph, rewires_per_edge: usize, seed_value: u64) -> Result<Rewired> {
    g.require_connected()?;
    let n = g.node_count();
    let mut edges: Vec<(usize, usize, f64)> = g.edges();
    let e = edges.len();
    let target = rewires_per_edge * e;
    let max_attempts = ATTEMPTS_PER_SWAP * target;
    let mut rng = seed::rng(seed_value);
    let mut present: HashSet<(usize, usize)> = edges.iter().map(|&(u, v, _)| (u, v)).collect();
    let mut adj: Vec<Vec<usize>> = (0..n).map(|i| g.neighbor_indices(i).collect()).collect();

    let key = |u: usize, v: usize| (u.min(v), u.max(v));
    let mut achieved = 0;
    let mut attempts = 0;
    while achieved < target && attempts < max_attempts && e >= 2 {
        attempts += 1;
        let i = rng.gen_range(0..e);
        let mut j = rng.gen_range(0..e - 1);
        if j >= i {
            j += 1;
        }
        let (a, b, wi) = edges[i];
        let (mut c, mut d, wj) = edges[j];
        if rng.gen::<bool>() {
            std::mem::swap(&mut c, &mut d);
        }
        // new edges: a-d and c-b
        if a == d || c == b || a == c || b == d {
            continue;
        }
        let (ad, cb) = (key(a, d), key(c, b));
        if present.contains(&ad) || present.contains(&cb) {
            continue;
        }
        remove(&mut adj[a], b);
        remove(&mut adj[b], a);
        remove(&mut adj[c], d);
        remove(&mut adj[d], c);
        adj[a].push(d);
        adj[d].push(a);
        adj[c].push(b);
        adj[b].push(c);
        if !connected(&adj) {
            remove(&mut adj[a], d);
            remove(&mut adj[d], a);
            remove(&mut adj[c], b);
            remove(&mut adj[b], c);
            adj[a].push(b);
            adj[b].push(a);
            adj[c].push(d);
            adj[d].push(c);
            continue;
        }
        present.remove(&key(a, b));
        present.remove(&key(c, d));
        present.insert(ad);
        present.insert(cb);
        edges[i] = (ad.0, ad.1, wi);
        edges[j] = (cb.0, cb.1, wj);
        achieved += 1;
    }
    let graph = Graph::from_edges(g.labels().to_vec(), edges, g.is_weighted())?;
    Ok(Rewired {
        graph,
        achieved,
        target,
        attempts,
    })
}

fn remove(list: &mut Vec<usize>, x: usize) {
    if let Some(p) = list.iter().position(|&y| y == x) {
        list.swap_remove(p);
    }
}

fn connected(adj: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                stack.push(v);
            }
        }
    }
    count == adj.len()
}

/// Degree-preserving rewiring followed by a greedy weight placement that
/// tracks the original strengths: weights are placed in decreasing order,
/// each on the free edge whose endpoints have the largest combined
/// remaining strength.
pub fn weighted_constrained_surrogate(g: &Graph, rewires_per_edge: usize, seed_value: u64) -> Result<Rewired> {
    if !g.is_weighted() {
        return Err(Error::InvalidParameter(
            "weighted surrogate needs a weighted graph".into(),
        ));
    }
    let mut out = constrained_surrogate(g, rewires_per_edge, seed_value)?;
    let edges = out.graph.edges();
    let mut weights: Vec<f64> = g.edges().iter().map(|&(_, _, w)| w).collect();
    weights.sort_by(|a, b| b.total_cmp(a));
    let mut residual = g.strengths();

    #[derive(PartialEq)]
    struct Slot {
        key: f64,
        edge: usize,
    }
    impl Eq for Slot {}
    impl Ord for Slot {
        fn cmp(&self, o: &Self) -> std::cmp::Ordering {
            self.key.total_cmp(&o.key).then_with(|| o.edge.cmp(&self.edge))
        }
    }
    impl PartialOrd for Slot {
        fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(o))
        }
    }

    // keys only decrease, so a popped slot whose key is still current is the max
    let mut heap: BinaryHeap<Slot> = edges
        .iter()
        .enumerate()
        .map(|(k, &(u, v, _))| Slot {
            key: residual[u] + residual[v],
            edge: k,
        })
        .collect();
    let mut assigned = vec![f64::NAN; edges.len()];
    let mut next = 0;
    while let Some(slot) = heap.pop() {
        let (u, v, _) = edges[slot.edge];
        let key = residual[u] + residual[v];
        if key < slot.key {
            heap.push(Slot { key, edge: slot.edge });
            continue;
        }
        let w = weights[next];
        next += 1;
        assigned[slot.edge] = w;
        residual[u] -= w;
        residual[v] -= w;
    }
    out.graph = out.graph.with_weights(&assigned)?;
    Ok(out)
}

/// `empirical - mean(surrogates)`, accumulated as deviations from the
/// empirical value so that an ensemble matching it exactly gives 0.
pub fn ensemble_difference(empirical: f64, surrogates: &[f64]) -> Result<f64> {
    if surrogates.is_empty() {
        return Err(Error::InvalidParameter("empty surrogate list".into()));
    }
    let excess: f64 = surrogates.iter().map(|s| s - empirical).sum();
    Ok(0.0 - excess / surrogates.len() as f64)
}

/// A set of surrogates generated from one source graph.
#[derive(Debug, Clone)]
pub struct SurrogateEnsemble {
    pub kind: SurrogateKind,
    pub source: String,
    pub seeds: Vec<u64>,
    pub graphs: Vec<Graph>,
}

impl SurrogateEnsemble {
    /// Generates `count` members in parallel, member `k` seeded with
    /// `seed::derive(master_seed, kind, k)`.
    pub fn generate(
        g: &Graph,
        source: impl Into<String>,
        kind: SurrogateKind,
        count: usize,
        master_seed: u64,
    ) -> Result<Self> {
        let stage = match kind {
            SurrogateKind::Unconstrained => 1,
            SurrogateKind::Constrained => 2,
        };
        let seeds: Vec<u64> = (0..count as u64)
            .map(|k| seed::derive(master_seed, stage, k))
            .collect();
        let weights: Option<Vec<f64>> = g
            .is_weighted()
            .then(|| g.edges().iter().map(|&(_, _, w)| w).collect());
        let graphs = seeds
            .par_iter()
            .map(|&s| match kind {
                SurrogateKind::Unconstrained => unconstrained_surrogate(
                    g.node_count(),
                    g.edge_count(),
                    weights.as_deref(),
                    s,
                ),
                SurrogateKind::Constrained if g.is_weighted() => {
                    weighted_constrained_surrogate(g, DEFAULT_REWIRES_PER_EDGE, s).map(|r| r.graph)
                }
                SurrogateKind::Constrained => {
                    constrained_surrogate(g, DEFAULT_REWIRES_PER_EDGE, s).map(|r| r.graph)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SurrogateEnsemble {
            kind,
            source: source.into(),
            seeds,
            graphs,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centrality::test_graphs::*;

    fn sorted_degrees(g: &Graph) -> Vec<usize> {
        let mut d = g.degrees();
        d.sort_unstable();
        d
    }

    #[test]
    fn spanning_tree_when_no_extra_edges() {
        let g = unconstrained_surrogate(5, 4, None, 1).unwrap();
        assert_eq!(g.edge_count(), 4);
        assert!(g.is_connected());
    }

    #[test]
    fn forced_complete_graph() {
        let g = unconstrained_surrogate(4, 6, None, 3).unwrap();
        assert_eq!(g.edge_count(), 6);
        assert!(g.degrees().iter().all(|&d| d == 3));
    }

    #[test]
    fn unconstrained_many_seeds() {
        for s in 0..100 {
            let g = unconstrained_surrogate(100, 150, None, s).unwrap();
            assert_eq!(g.edge_count(), 150);
            assert!(g.is_connected());
        }
    }

    #[test]
    fn unconstrained_rejects_bad_counts() {
        assert!(unconstrained_surrogate(5, 3, None, 0).is_err());
        assert!(unconstrained_surrogate(5, 11, None, 0).is_err());
        assert!(unconstrained_surrogate(3, 2, Some(&[1.0]), 0).is_err());
    }

    #[test]
    fn unconstrained_keeps_weight_multiset() {
        let w = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let g = unconstrained_surrogate(5, 6, Some(&w), 8).unwrap();
        let mut got: Vec<f64> = g.edges().iter().map(|e| e.2).collect();
        got.sort_by(f64::total_cmp);
        assert_eq!(got, w);
    }

    #[test]
    fn constrained_cycle_keeps_degrees() {
        let r = constrained_surrogate(&cycle(4), 10, 0).unwrap();
        assert_eq!(r.graph.degrees(), vec![2; 4]);
    }

    #[test]
    fn constrained_star_unchanged() {
        let r = constrained_surrogate(&star5(), 10, 0).unwrap();
        assert_eq!(r.graph, star5());
        assert_eq!(r.achieved, 0);
    }

    #[test]
    fn constrained_random_graph_budget() {
        let base = unconstrained_surrogate(50, 120, None, 42).unwrap();
        let r = constrained_surrogate(&base, 10, 7).unwrap();
        assert_eq!(r.graph.degrees(), base.degrees());
        assert!(r.graph.is_connected());
        assert!(r.completion() >= 0.9, "completion {}", r.completion());
        assert_ne!(r.graph.edges(), base.edges());
    }

    #[test]
    fn weighted_star_unchanged() {
        let g = star5().with_weights(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        let r = weighted_constrained_surrogate(&g, 10, 1).unwrap();
        assert_eq!(r.graph, g);
    }

    #[test]
    fn uniform_weights_reduce_to_unweighted() {
        let base = unconstrained_surrogate(20, 40, None, 5).unwrap();
        let g = base.with_weights(&vec![2.0; 40]).unwrap();
        let w = weighted_constrained_surrogate(&g, 10, 9).unwrap();
        let u = constrained_surrogate(&base, 10, 9).unwrap();
        assert_eq!(w.graph.binarize(), u.graph);
        assert!(w.graph.edges().iter().all(|e| e.2 == 2.0));
    }

    #[test]
    fn weighted_strengths_track_original() {
        let base = unconstrained_surrogate(60, 200, None, 11).unwrap();
        let mut rng = seed::rng(3);
        let weights: Vec<f64> = (0..200).map(|_| rng.gen_range(0.1..5.0)).collect();
        let g = base.with_weights(&weights).unwrap();
        let r = weighted_constrained_surrogate(&g, 10, 2).unwrap();
        assert_eq!(sorted_degrees(&r.graph), sorted_degrees(&g));
        let rho = crate::cmc::spearman(&g.strengths(), &r.graph.strengths()).unwrap();
        assert!(rho > 0.9, "rho = {rho}");
    }

    #[test]
    fn ensemble_difference_examples() {
        assert!((ensemble_difference(0.7, &[0.6, 0.6]).unwrap() - 0.1).abs() < 1e-12);
        assert_eq!(ensemble_difference(0.5, &[0.5]).unwrap(), 0.0);
        // a naive mean of 100 copies of 0.1 is not exactly 0.1
        assert_eq!(ensemble_difference(0.1, &[0.1; 100]).unwrap(), 0.0);
        assert!(ensemble_difference(0.5, &[]).is_err());
    }

    #[test]
    fn ensemble_reproducible() {
        let g = unconstrained_surrogate(30, 60, None, 0).unwrap();
        let a = SurrogateEnsemble::generate(&g, "g", SurrogateKind::Constrained, 5, 77).unwrap();
        let b = SurrogateEnsemble::generate(&g, "g", SurrogateKind::Constrained, 5, 77).unwrap();
        assert_eq!(a.seeds, b.seeds);
        for (x, y) in a.graphs.iter().zip(&b.graphs) {
            assert_eq!(x.edges(), y.edges());
        }
    }
}
