//! Walk-counting measures built on the matrix exponential.
//!
//! Weighted graphs use the reduced adjacency `S^(-1/2) W S^(-1/2)`.

use rayon::prelude::*;

use crate::linalg;
use crate::{Error, Graph, Result};

/// `SC_i = [e^A]_ii`.
pub fn subgraph(g: &Graph) -> Result<Vec<f64>> {
    let e = linalg::symmetric_exp(&linalg::walk_matrix(g))?;
    Ok(e.diagonal().iter().copied().collect())
}

/// `TCC_i = sum_j [e^A]_ji`.
pub fn total_communicability(g: &Graph) -> Result<Vec<f64>> {
    let e = linalg::symmetric_exp(&linalg::walk_matrix(g))?;
    Ok(e.column_iter().map(|c| c.sum()).collect())
}

/// Normalised sum over ordered pairs `p != q`, both distinct from `i`, of
/// the fraction of weighted walks from `p` to `q` that visit `i`.
pub fn communicability_betweenness(g: &Graph) -> Result<Vec<f64>> {
    let n = g.node_count();
    if n < 3 {
        return Err(Error::TooFewNodes {
            what: "communicability betweenness",
            need: 3,
            got: n,
        });
    }
    let a = linalg::walk_matrix(g);
    let full = linalg::symmetric_exp(&a)?;
    let norm = ((n - 1) * (n - 1) - (n - 1)) as f64;
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut cut = a.clone();
            cut.row_mut(i).fill(0.0);
            cut.column_mut(i).fill(0.0);
            let without = linalg::symmetric_exp(&cut)?;
            let mut total = 0.0;
            for p in (0..n).filter(|&p| p != i) {
                for q in (0..n).filter(|&q| q != i && q != p) {
                    total += (full[(p, q)] - without[(p, q)]) / full[(p, q)];
                }
            }
            Ok(total / norm)
        })
        .collect()
}
