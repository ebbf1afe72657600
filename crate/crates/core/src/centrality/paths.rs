//! Shortest-path measures. Weighted graphs use edge length `1 / w`.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use rayon::prelude::*;

use crate::{Graph, Result};

/// Relative tolerance for treating two weighted path lengths as equal.
const PATH_EPS: f64 = 1e-12;

#[derive(Copy, Clone, PartialEq)]
struct Entry {
    dist: f64,
    node: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Single-source shortest paths: visit order, distances, path counts and
/// predecessor lists.
struct ShortestPaths {
    order: Vec<usize>,
    dist: Vec<f64>,
    sigma: Vec<f64>,
    preds: Vec<Vec<usize>>,
}

fn single_source(g: &Graph, s: usize) -> ShortestPaths {
    let n = g.node_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut sigma = vec![0.0; n];
    let mut preds = vec![Vec::new(); n];
    let mut order = Vec::with_capacity(n);
    dist[s] = 0.0;
    sigma[s] = 1.0;
    if !g.is_weighted() {
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for v in g.neighbor_indices(u) {
                if dist[v].is_infinite() {
                    dist[v] = dist[u] + 1.0;
                    queue.push_back(v);
                }
                if dist[v] == dist[u] + 1.0 {
                    sigma[v] += sigma[u];
                    preds[v].push(u);
                }
            }
        }
    } else {
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::from([Entry { dist: 0.0, node: s }]);
        while let Some(Entry { dist: d, node: u }) = heap.pop() {
            if done[u] || d > dist[u] {
                continue;
            }
            done[u] = true;
            order.push(u);
            for &(v, w) in g.neighbors(u) {
                if done[v] {
                    continue;
                }
                let alt = d + 1.0 / w;
                let tol = PATH_EPS * alt.max(1.0);
                if alt < dist[v] - tol {
                    dist[v] = alt;
                    sigma[v] = sigma[u];
                    preds[v].clear();
                    preds[v].push(u);
                    heap.push(Entry { dist: alt, node: v });
                } else if (alt - dist[v]).abs() <= tol {
                    sigma[v] += sigma[u];
                    preds[v].push(u);
                }
            }
        }
    }
    ShortestPaths {
        order,
        dist,
        sigma,
        preds,
    }
}

/// Shortest-path distances from `s` (hops, or summed inverse weights).
pub fn distances_from(g: &Graph, s: usize) -> Vec<f64> {
    single_source(g, s).dist
}

/// `CC_i = N / sum_j l_ij`.
pub fn closeness(g: &Graph) -> Result<Vec<f64>> {
    g.require_connected()?;
    let n = g.node_count() as f64;
    Ok((0..g.node_count())
        .into_par_iter()
        .map(|i| {
            let total: f64 = distances_from(g, i).iter().sum();
            if total == 0.0 {
                0.0
            } else {
                n / total
            }
        })
        .collect())
}

/// Brandes accumulation over unordered source-target pairs, endpoints
/// excluded.
pub fn betweenness(g: &Graph) -> Result<Vec<f64>> {
    g.require_connected()?;
    let n = g.node_count();
    let partial: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|s| {
            let sp = single_source(g, s);
            let mut delta = vec![0.0; n];
            let mut out = vec![0.0; n];
            for &w in sp.order.iter().rev() {
                for &v in &sp.preds[w] {
                    delta[v] += sp.sigma[v] / sp.sigma[w] * (1.0 + delta[w]);
                }
                if w != s {
                    out[w] = delta[w];
                }
            }
            out
        })
        .collect();
    let mut bc = vec![0.0; n];
    for row in partial {
        for (b, x) in bc.iter_mut().zip(row) {
            *b += x;
        }
    }
    // each unordered pair was counted from both ends
    Ok(bc.into_iter().map(|x| x / 2.0).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centrality::test_graphs::*;

    #[test]
    fn closeness_examples() {
        let k5 = closeness(&complete(5)).unwrap();
        assert!(k5.iter().all(|&x| (x - 5.0 / 4.0).abs() < 1e-12));
        let star = closeness(&star5()).unwrap();
        assert!((star[0] - 1.25).abs() < 1e-12);
        assert!((star[1] - 5.0 / 7.0).abs() < 1e-12);
    }

    #[test]
    fn closeness_rejects_disconnected() {
        let g = Graph::from_unweighted_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(closeness(&g).is_err());
    }

    #[test]
    fn betweenness_examples() {
        assert_eq!(betweenness(&path3()).unwrap(), vec![0.0, 1.0, 0.0]);
        let star = betweenness(&star5()).unwrap();
        assert_eq!(star, vec![6.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn weighted_paths_use_inverse_weights() {
        // triangle where the heavy two-hop route beats the light direct edge
        let labels = (0..3).map(|i| i.to_string()).collect();
        let g = Graph::from_edges(labels, [(0, 1, 10.0), (1, 2, 10.0), (0, 2, 1.0)], true).unwrap();
        let d = distances_from(&g, 0);
        assert!((d[2] - 0.2).abs() < 1e-12);
        assert_eq!(betweenness(&g).unwrap(), vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn weighted_ties_split_paths() {
        let labels = (0..4).map(|i| i.to_string()).collect();
        let g = Graph::from_edges(
            labels,
            [(0, 1, 0.1), (1, 3, 0.1), (0, 2, 0.1), (2, 3, 0.1)],
            true,
        )
        .unwrap();
        let bc = betweenness(&g).unwrap();
        assert!((bc[1] - 0.5).abs() < 1e-12 && (bc[2] - 0.5).abs() < 1e-12);
    }
}
