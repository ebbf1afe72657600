//! Measures computed from a node's immediate neighbourhood.

use crate::{Error, Graph, Result};

/// Degree, or strength on weighted graphs.
pub fn degree(g: &Graph) -> Vec<f64> {
    g.strengths()
}

pub fn leverage(g: &Graph) -> Vec<f64> {
    let s = g.strengths();
    (0..g.node_count())
        .map(|i| {
            if g.degree(i) == 0 {
                return 0.0;
            }
            let sum: f64 = g
                .neighbor_indices(i)
                .map(|j| (s[i] - s[j]) / (s[i] + s[j]))
                .sum();
            sum / s[i]
        })
        .collect()
}

/// Largest `h <= d_i` such that at least `h` neighbours have degree (or
/// strength, when weighted) of at least `h`.
pub fn h_index(g: &Graph) -> Vec<f64> {
    let s = g.strengths();
    (0..g.node_count())
        .map(|i| {
            let mut neigh: Vec<f64> = g.neighbor_indices(i).map(|j| s[j]).collect();
            neigh.sort_by(|a, b| b.total_cmp(a));
            let mut best = 0;
            for h in 1..=neigh.len() {
                let count = neigh.iter().take_while(|&&x| x >= h as f64).count();
                best = best.max(count.min(h));
            }
            best as f64
        })
        .collect()
}

/// Laplacian-energy drop on removing each node, from its 2-walk census:
/// `4 NW2C + 2 NW2E + 2 NW2M`. Reduces to `d^2 + d + 2 sum_j d_j` on
/// unweighted graphs.
pub fn laplacian_centrality(g: &Graph) -> Vec<f64> {
    let s = g.strengths();
    (0..g.node_count())
        .map(|i| {
            let squares: f64 = g.neighbors(i).iter().map(|&(_, w)| w * w).sum();
            let closed = squares;
            let end: f64 = g.neighbors(i).iter().map(|&(j, w)| w * (s[j] - w)).sum();
            let middle = 0.5 * (s[i] * s[i] - squares);
            4.0 * closed + 2.0 * end + 2.0 * middle
        })
        .collect()
}

/// `Bc_i = s_i^-1 / sum_{j in N(i)} s_j^-1`.
pub fn bridging_coefficient(g: &Graph) -> Vec<f64> {
    let s = g.strengths();
    (0..g.node_count())
        .map(|i| {
            let denom: f64 = g.neighbor_indices(i).map(|j| 1.0 / s[j]).sum();
            if denom == 0.0 {
                0.0
            } else {
                (1.0 / s[i]) / denom
            }
        })
        .collect()
}

/// `1 - sum_m (k_i(m) / k_i)^2` for the module assignment `modules`.
pub fn participation_coefficient(g: &Graph, modules: &[usize]) -> Result<Vec<f64>> {
    let n = g.node_count();
    if modules.len() != n {
        return Err(Error::PartitionMismatch {
            expected: n,
            got: modules.len(),
        });
    }
    let m = modules.iter().copied().max().map_or(0, |x| x + 1);
    let mut per_module = vec![0.0; m];
    Ok((0..n)
        .map(|i| {
            let k = g.strength(i);
            if k == 0.0 {
                return 0.0;
            }
            per_module.iter_mut().for_each(|x| *x = 0.0);
            for &(j, w) in g.neighbors(i) {
                per_module[modules[j]] += w;
            }
            1.0 - per_module.iter().map(|x| (x / k) * (x / k)).sum::<f64>()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centrality::test_graphs::*;

    #[test]
    fn degree_examples() {
        assert_eq!(degree(&star5())[0], 4.0);
        assert_eq!(degree(&path3())[1], 2.0);
        assert_eq!(degree(&weighted_k2(2.5)), vec![2.5, 2.5]);
    }

    #[test]
    fn leverage_examples() {
        assert!(leverage(&cycle(6)).iter().all(|&x| x == 0.0));
        let lc = leverage(&star5());
        assert!((lc[0] - 0.6).abs() < 1e-12);
        assert!((lc[1] + 0.6).abs() < 1e-12);
    }

    #[test]
    fn h_index_examples() {
        assert_eq!(h_index(&star5()), vec![1.0; 5]);
        assert_eq!(h_index(&complete(3)), vec![2.0; 3]);
        assert_eq!(h_index(&cycle(4)), vec![2.0; 4]);
    }

    #[test]
    fn h_index_weighted_compares_strengths() {
        // neighbour strengths below 1 never reach h = 1
        let g = weighted_k2(0.5);
        assert_eq!(h_index(&g), vec![0.0, 0.0]);
        let g = weighted_k2(3.0);
        assert_eq!(h_index(&g), vec![1.0, 1.0]);
    }

    #[test]
    fn laplacian_examples() {
        assert_eq!(laplacian_centrality(&complete(2)), vec![4.0, 4.0]);
        let lap = laplacian_centrality(&star5());
        assert_eq!(lap[0], 28.0);
        assert_eq!(lap[1], 10.0);
    }

    #[test]
    fn laplacian_weighted_matches_unweighted_on_unit_weights() {
        let g = star5();
        let w = g.with_weights(&vec![1.0; g.edge_count()]).unwrap();
        assert_eq!(laplacian_centrality(&w), laplacian_centrality(&g));
    }

    #[test]
    fn participation_examples() {
        let g = cycle(4);
        assert_eq!(participation_coefficient(&g, &[0; 4]).unwrap(), vec![0.0; 4]);
        // node 0 has neighbours 1 and 3 in different modules
        let pc = participation_coefficient(&g, &[0, 0, 1, 1]).unwrap();
        assert!((pc[0] - 0.5).abs() < 1e-12);
        let pc = participation_coefficient(&star5(), &[0, 0, 1, 2, 3]).unwrap();
        assert!((pc[0] - 0.75).abs() < 1e-12);
        assert!(participation_coefficient(&g, &[0, 0]).is_err());
    }
}
