//! Multi-level Louvain modularity optimisation on a weighted network.

use rand::seq::SliceRandom;

use crate::seed;

/// Weighted undirected network with self-loops, the working form of the
/// Louvain aggregation. `self_loops[i]` holds twice the internal weight so
/// that `degree[i] = sum_j w_ij + self_loops[i]`.
#[derive(Debug, Clone)]
pub(crate) struct Network {
    pub adj: Vec<Vec<(usize, f64)>>,
    pub self_loops: Vec<f64>,
}

impl Network {
    pub fn from_adjacency(adj: Vec<Vec<(usize, f64)>>) -> Self {
        let n = adj.len();
        Network {
            adj,
            self_loops: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    fn degrees(&self) -> Vec<f64> {
        self.adj
            .iter()
            .zip(&self.self_loops)
            .map(|(l, s)| l.iter().map(|&(_, w)| w).sum::<f64>() + s)
            .collect()
    }

    /// Newman-Girvan modularity of `assignment`.
    pub fn modularity(&self, assignment: &[usize]) -> f64 {
        let k = self.degrees();
        let two_m: f64 = k.iter().sum();
        if two_m == 0.0 {
            return 0.0;
        }
        let c = assignment.iter().copied().max().map_or(0, |x| x + 1);
        let mut inside = vec![0.0; c];
        let mut total = vec![0.0; c];
        for i in 0..self.len() {
            total[assignment[i]] += k[i];
            inside[assignment[i]] += self.self_loops[i];
            for &(j, w) in &self.adj[i] {
                if assignment[j] == assignment[i] {
                    inside[assignment[i]] += w;
                }
            }
        }
        inside
            .iter()
            .zip(&total)
            .map(|(a, t)| a / two_m - (t / two_m).powi(2))
            .sum()
    }

    fn aggregate(&self, community: &[usize], count: usize) -> Network {
        let mut self_loops = vec![0.0; count];
        let mut acc: Vec<std::collections::BTreeMap<usize, f64>> = vec![Default::default(); count];
        for i in 0..self.len() {
            let ci = community[i];
            self_loops[ci] += self.self_loops[i];
            for &(j, w) in &self.adj[i] {
                let cj = community[j];
                if ci == cj {
                    self_loops[ci] += w;
                } else {
                    *acc[ci].entry(cj).or_insert(0.0) += w;
                }
            }
        }
        Network {
            adj: acc.into_iter().map(|m| m.into_iter().collect()).collect(),
            self_loops,
        }
    }
}

/// Relabels ids to `0..k` in order of first appearance.
pub(crate) fn canonicalize(assignment: &[usize]) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    assignment
        .iter()
        .map(|&c| {
            let next = map.len();
            *map.entry(c).or_insert(next)
        })
        .collect()
}

const MIN_GAIN: f64 = 1e-12;

/// One level of local moves. Returns the community of every node and
/// whether any node moved.
fn local_moves(net: &Network, rng: &mut impl rand::Rng) -> (Vec<usize>, bool) {
    let n = net.len();
    let k = net.degrees();
    let two_m: f64 = k.iter().sum();
    let mut community: Vec<usize> = (0..n).collect();
    let mut total = k.clone();
    let mut order: Vec<usize> = (0..n).collect();
    let mut link = vec![0.0; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut any_move = false;
    if two_m == 0.0 {
        return (community, false);
    }
    loop {
        order.shuffle(rng);
        let mut moved = false;
        for &i in &order {
            let own = community[i];
            touched.clear();
            touched.push(own);
            link[own] = 0.0;
            for &(j, w) in &net.adj[i] {
                let c = community[j];
                if link[c] == 0.0 && !touched.contains(&c) {
                    touched.push(c);
                }
                link[c] += w;
            }
            total[own] -= k[i];
            let gain = |c: usize| link[c] - total[c] * k[i] / two_m;
            let mut best = own;
            let mut best_gain = gain(own);
            for &c in &touched[1..] {
                let g = gain(c);
                if g > best_gain + MIN_GAIN {
                    best = c;
                    best_gain = g;
                }
            }
            total[best] += k[i];
            community[i] = best;
            if best != own {
                moved = true;
                any_move = true;
            }
            for &c in &touched {
                link[c] = 0.0;
            }
        }
        if !moved {
            break;
        }
    }
    (community, any_move)
}

/// Runs Louvain to convergence; node visit order is drawn from `seed`.
/// Returns a canonical assignment and the number of levels.
pub(crate) fn run(net: &Network, seed_value: u64) -> (Vec<usize>, usize) {
    let mut rng = seed::rng(seed_value);
    let mut assignment: Vec<usize> = (0..net.len()).collect();
    let mut current = net.clone();
    let mut levels = 0;
    loop {
        let (community, moved) = local_moves(&current, &mut rng);
        if !moved {
            break;
        }
        levels += 1;
        let community = canonicalize(&community);
        let count = community.iter().max().map_or(0, |x| x + 1);
        for a in assignment.iter_mut() {
            *a = community[*a];
        }
        if count == current.len() {
            break;
        }
        current = current.aggregate(&community, count);
    }
    (canonicalize(&assignment), levels)
}
