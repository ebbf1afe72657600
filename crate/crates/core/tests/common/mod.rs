#![allow(dead_code)]

use centrakit::{seed, Graph};
use rand::Rng;

/// Connected G(n, p): a random spanning path plus independent extra edges.
pub fn random_connected(n: usize, p: f64, seed_value: u64) -> Graph {
    let mut rng = seed::rng(seed_value);
    let mut order: Vec<usize> = (0..n).collect();
    rand::seq::SliceRandom::shuffle(order.as_mut_slice(), &mut rng);
    let mut edges: Vec<(usize, usize)> = order.windows(2).map(|w| (w[0], w[1])).collect();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    Graph::from_unweighted_edges(n, &edges).unwrap()
}

/// Connected Erdos-Renyi graph: redraws until connected.
pub fn connected_er(n: usize, mean_degree: f64, seed_value: u64) -> Graph {
    let p = mean_degree / (n - 1) as f64;
    for attempt in 0.. {
        let mut rng = seed::rng(seed::derive(seed_value, 0, attempt));
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen::<f64>() < p {
                    edges.push((i, j));
                }
            }
        }
        if let Ok(g) = Graph::from_unweighted_edges(n, &edges) {
            if g.node_count() == n && g.is_connected() {
                return g;
            }
        }
    }
    unreachable!()
}

pub fn cycle(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_unweighted_edges(n, &edges).unwrap()
}

pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j));
        }
    }
    Graph::from_unweighted_edges(n, &edges).unwrap()
}

pub fn assert_close(a: &[f64], b: &[f64], tol: f64, what: &str) {
    assert_eq!(a.len(), b.len(), "{what}: length");
    for (i, (x, y)) in a.iter().zip(b).enumerate() {
        let scale = 1.0f64.max(x.abs()).max(y.abs());
        assert!((x - y).abs() <= tol * scale, "{what}[{i}]: {x} vs {y}");
    }
}
