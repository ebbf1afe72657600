//! Undirected simple graphs with optional positive edge weights.

mod io;
mod threshold;

use std::collections::{BTreeMap, VecDeque};

use crate::{Error, Result};

pub use io::{parse_edge_list, GraphJson};
pub use threshold::{
    dominance_pairs, threshold_graph, CreationStep, DegreeSequence, DominanceRelation,
};

/// An immutable undirected simple graph.
///
/// Nodes are indexed `0..n` and carry external string labels. Adjacency
/// lists are sorted by neighbour index. Unweighted graphs report a weight of
/// 1 on every edge.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    labels: Vec<String>,
    adj: Vec<Vec<(usize, f64)>>,
    edge_count: usize,
    weighted: bool,
}

impl Graph {
    /// Builds a graph from labels and an edge list of `(u, v, w)` triples.
    ///
    /// Self-loops are dropped. A repeated pair keeps the weight of its first
    /// occurrence. For unweighted graphs the weights are ignored.
    pub fn from_edges(
        labels: Vec<String>,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
        weighted: bool,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut seen = BTreeMap::new();
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for {n} nodes"
                )));
            }
            if u == v {
                continue;
            }
            let w = if weighted { w } else { 1.0 };
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) has non-positive weight {w}"
                )));
            }
            let key = (u.min(v), u.max(v));
            match seen.get(&key) {
                Some(&prev) if prev != w => {
                    log::warn!(
                        "conflicting weights for edge {}-{}: keeping {prev}, dropping {w}",
                        labels[key.0],
                        labels[key.1]
                    );
                }
                Some(_) => {}
                None => {
                    seen.insert(key, w);
                }
            }
        }
        let mut adj = vec![Vec::new(); n];
        for (&(u, v), &w) in &seen {
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        for list in &mut adj {
            list.sort_by_key(|&(v, _)| v);
        }
        Ok(Graph {
            labels,
            adj,
            edge_count: seen.len(),
            weighted,
        })
    }

    /// Unweighted graph with labels `"0".."n-1"`.
    pub fn from_unweighted_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let labels = (0..n).map(|i| i.to_string()).collect();
        Graph::from_edges(labels, edges.iter().map(|&(u, v)| (u, v, 1.0)), false)
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Neighbours of `i` with edge weights, sorted by neighbour index.
    pub fn neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.adj[i]
    }

    pub fn neighbor_indices(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[i].iter().map(|&(j, _)| j)
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    /// Sum of incident weights; equals the degree on unweighted graphs.
    pub fn strength(&self, i: usize) -> f64 {
        self.adj[i].iter().map(|&(_, w)| w).sum()
    }

    pub fn strengths(&self) -> Vec<f64> {
        (0..self.node_count()).map(|i| self.strength(i)).collect()
    }

    pub fn weight(&self, i: usize, j: usize) -> Option<f64> {
        self.adj[i]
            .binary_search_by_key(&j, |&(v, _)| v)
            .ok()
            .map(|k| self.adj[i][k].1)
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.weight(i, j).is_some()
    }

    /// Edges as `(u, v, w)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (u, list) in self.adj.iter().enumerate() {
            for &(v, w) in list {
                if u < v {
                    out.push((u, v, w));
                }
            }
        }
        out
    }

    pub fn total_weight(&self) -> f64 {
        self.edges().iter().map(|&(_, _, w)| w).sum()
    }

    /// Connected components as sorted node lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.node_count();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for v in self.neighbor_indices(u) {
                    if comp[v] == usize::MAX {
                        comp[v] = id;
                        members.push(v);
                        queue.push_back(v);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        let n = self.node_count();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut count = 1;
        let mut stack = vec![0];
        while let Some(u) = stack.pop() {
            for v in self.neighbor_indices(u) {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == n
    }

    pub(crate) fn require_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    /// Subgraph induced by `nodes`, relabelled in the given order.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.node_count()];
        for (k, &v) in nodes.iter().enumerate() {
            index[v] = k;
        }
        let labels = nodes.iter().map(|&v| self.labels[v].clone()).collect();
        let mut adj = vec![Vec::new(); nodes.len()];
        let mut edge_count = 0;
        for (k, &v) in nodes.iter().enumerate() {
            for &(u, w) in &self.adj[v] {
                if index[u] != usize::MAX {
                    adj[k].push((index[u], w));
                    if index[u] > k {
                        edge_count += 1;
                    }
                }
            }
            adj[k].sort_by_key(|&(u, _)| u);
        }
        Graph {
            labels,
            adj,
            edge_count,
            weighted: self.weighted,
        }
    }

    /// Induced subgraph on the largest connected component.
    ///
    /// Ties between equally large components go to the one holding the
    /// smallest node index.
    pub fn largest_component(&self) -> Graph {
        let comps = self.components();
        let mut best = &comps[0];
        for c in &comps[1..] {
            if c.len() > best.len() {
                best = c;
            }
        }
        if best.len() == self.node_count() {
            return self.clone();
        }
        self.induced_subgraph(best)
    }

    /// Same edge set with weights dropped.
    pub fn binarize(&self) -> Graph {
        Graph {
            labels: self.labels.clone(),
            adj: self
                .adj
                .iter()
                .map(|l| l.iter().map(|&(v, _)| (v, 1.0)).collect())
                .collect(),
            edge_count: self.edge_count,
            weighted: false,
        }
    }

    /// Copy of this graph with the given weights attached, one per entry of
    /// [`Graph::edges`].
    pub fn with_weights(&self, weights: &[f64]) -> Result<Graph> {
        let edges = self.edges();
        if edges.len() != weights.len() {
            return Err(Error::InvalidParameter(format!(
                "{} weights for {} edges",
                weights.len(),
                edges.len()
            )));
        }
        Graph::from_edges(
            self.labels.clone(),
            edges.iter().zip(weights).map(|(&(u, v, _), &w)| (u, v, w)),
            true,
        )
    }

    /// Sorted degree sequence paired with its corrected conjugate.
    pub fn degree_sequence(&self) -> DegreeSequence {
        DegreeSequence::new(self.degrees())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::from_unweighted_edges(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn builds_simple_graph() {
        let g = Graph::from_unweighted_edges(4, &[(0, 1), (1, 0), (1, 2), (2, 2), (2, 3)]).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.degrees(), vec![1, 2, 2, 1]);
        assert!(g.has_edge(1, 0));
        assert!(!g.has_edge(2, 2));
        assert!(g.is_connected());
    }

    #[test]
    fn largest_component_picks_biggest() {
        let g =
            Graph::from_unweighted_edges(6, &[(0, 1), (2, 3), (3, 4), (4, 5), (5, 2)]).unwrap();
        let lc = g.largest_component();
        assert_eq!(lc.node_count(), 4);
        assert_eq!(lc.labels(), &["2", "3", "4", "5"]);
        assert!(lc.is_connected());
    }

    #[test]
    fn largest_component_identity_on_connected() {
        let g = path3();
        assert_eq!(g.largest_component(), g);
    }

    #[test]
    fn largest_component_tie_goes_to_node_zero() {
        let g = Graph::from_unweighted_edges(4, &[(2, 3), (0, 1)]).unwrap();
        assert_eq!(g.largest_component().labels(), &["0", "1"]);
    }

    #[test]
    fn binarize_drops_weights() {
        let labels = vec!["a".to_string(), "b".to_string()];
        let g = Graph::from_edges(labels, [(0, 1, 2.5)], true).unwrap();
        assert_eq!(g.strength(0), 2.5);
        let b = g.binarize();
        assert!(!b.is_weighted());
        assert_eq!(b.strength(0), 1.0);
        assert_eq!(b.binarize(), b);
    }

    #[test]
    fn binarize_star_with_mixed_weights() {
        let labels = (0..4).map(|i| i.to_string()).collect();
        let g = Graph::from_edges(labels, [(0, 1, 0.5), (0, 2, 3.0), (0, 3, 7.0)], true).unwrap();
        let b = g.binarize();
        assert_eq!(b.degrees(), vec![3, 1, 1, 1]);
        assert_eq!(b.strengths(), vec![3.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn rejects_bad_weight() {
        let labels = vec!["a".to_string(), "b".to_string()];
        assert!(Graph::from_edges(labels, [(0, 1, -1.0)], true).is_err());
    }
}
