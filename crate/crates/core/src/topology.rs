//! Global topology descriptors.

use serde::{Deserialize, Serialize};

use crate::centrality::{distances_from, mean_first_passage_times};
use crate::linalg;
use crate::{Error, Graph, Result};

/// The eight global descriptors. `None` marks a value that is undefined for
/// the input (serialised as JSON `null`).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TopologySummary {
    pub density: Option<f64>,
    pub assortativity: Option<f64>,
    pub clustering: Option<f64>,
    pub global_efficiency: Option<f64>,
    pub diffusion_efficiency: Option<f64>,
    pub modularity: Option<f64>,
    pub majorization_gap: Option<f64>,
    pub spectral_gap: Option<f64>,
}

impl TopologySummary {
    /// `(name, value)` in a fixed order.
    pub fn fields(&self) -> [(&'static str, Option<f64>); 8] {
        [
            ("density", self.density),
            ("assortativity", self.assortativity),
            ("clustering", self.clustering),
            ("global_efficiency", self.global_efficiency),
            ("diffusion_efficiency", self.diffusion_efficiency),
            ("modularity", self.modularity),
            ("majorization_gap", self.majorization_gap),
            ("spectral_gap", self.spectral_gap),
        ]
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.fields().into_iter().find(|(k, _)| *k == name).and_then(|(_, v)| v)
    }
}

/// `2E / (N (N - 1))`.
pub fn density(g: &Graph) -> Result<f64> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::TooFewNodes {
            what: "density",
            need: 2,
            got: n,
        });
    }
    Ok(2.0 * g.edge_count() as f64 / (n * (n - 1)) as f64)
}

/// Pearson correlation of the degrees (strengths) at either end of each
/// edge. `None` when that variance vanishes, e.g. on regular graphs.
pub fn assortativity(g: &Graph) -> Option<f64> {
    let s = g.strengths();
    let edges = g.edges();
    let m = edges.len() as f64;
    if m == 0.0 {
        return None;
    }
    let (mut prod, mut mean, mut sq) = (0.0, 0.0, 0.0);
    for &(u, v, _) in &edges {
        prod += s[u] * s[v];
        mean += 0.5 * (s[u] + s[v]);
        sq += 0.5 * (s[u] * s[u] + s[v] * s[v]);
    }
    let (prod, mean, sq) = (prod / m, mean / m, sq / m);
    let var = sq - mean * mean;
    if var.abs() <= 1e-12 * sq.max(1.0) {
        return None;
    }
    Some((prod - mean * mean) / var)
}

/// Local clustering of each node. Nodes of degree below 2 score 0. Weighted
/// graphs use the geometric mean of max-normalised triangle weights.
pub fn local_clustering(g: &Graph) -> Vec<f64> {
    let max_w = g
        .edges()
        .iter()
        .map(|&(_, _, w)| w)
        .fold(0.0f64, f64::max);
    (0..g.node_count())
        .map(|i| {
            let nb = g.neighbors(i);
            let d = nb.len();
            if d < 2 {
                return 0.0;
            }
            let mut sum = 0.0;
            for (a, &(j, wij)) in nb.iter().enumerate() {
                for &(k, wik) in &nb[a + 1..] {
                    if let Some(wjk) = g.weight(j, k) {
                        sum += if g.is_weighted() {
                            (wij * wik * wjk / (max_w * max_w * max_w)).cbrt()
                        } else {
                            1.0
                        };
                    }
                }
            }
            2.0 * sum / (d * (d - 1)) as f64
        })
        .collect()
}

pub fn clustering(g: &Graph) -> f64 {
    let c = local_clustering(g);
    c.iter().sum::<f64>() / c.len() as f64
}

/// Mean shortest-path length over unordered pairs.
pub fn characteristic_path_length(g: &Graph) -> Result<f64> {
    g.require_connected()?;
    let n = g.node_count();
    if n < 2 {
        return Err(Error::TooFewNodes {
            what: "path length",
            need: 2,
            got: n,
        });
    }
    let total: f64 = (0..n).map(|i| distances_from(g, i).iter().sum::<f64>()).sum();
    Ok(total / (n * (n - 1)) as f64)
}

/// `1 / L`.
pub fn global_efficiency(g: &Graph) -> Result<f64> {
    Ok(1.0 / characteristic_path_length(g)?)
}

/// Mean of `1 / H_ij` over ordered pairs of distinct nodes.
pub fn diffusion_efficiency(g: &Graph) -> Result<f64> {
    let h = mean_first_passage_times(g)?;
    let n = g.node_count();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                total += 1.0 / h[(i, j)];
            }
        }
    }
    Ok(total / (n * (n - 1)) as f64)
}

/// Majorization gap of the degree sequence, divided by the edge count.
pub fn majorization_gap(g: &Graph) -> f64 {
    g.degree_sequence().raw_gap() / g.edge_count() as f64
}

/// `1 - lambda_2 / lambda_1` of the (weighted) adjacency spectrum.
pub fn spectral_gap(g: &Graph) -> Result<f64> {
    g.require_connected()?;
    if g.node_count() < 2 {
        return Err(Error::TooFewNodes {
            what: "spectral gap",
            need: 2,
            got: g.node_count(),
        });
    }
    let spec = linalg::symmetric_spectrum(&linalg::adjacency(g))?;
    Ok(1.0 - spec.values[1] / spec.values[0])
}

/// All eight descriptors; `modularity` is the Q of a partition computed
/// elsewhere (usually the consensus partition).
pub fn summarize(g: &Graph, modularity: Option<f64>) -> Result<TopologySummary> {
    g.require_connected()?;
    Ok(TopologySummary {
        density: density(g).ok(),
        assortativity: assortativity(g),
        clustering: (g.node_count() >= 3).then(|| clustering(g)),
        global_efficiency: global_efficiency(g).ok(),
        diffusion_efficiency: diffusion_efficiency(g).ok(),
        modularity,
        majorization_gap: Some(majorization_gap(g)),
        spectral_gap: spectral_gap(g).ok(),
    })
}
