//! Random-walk and current-flow measures.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::linalg;
use crate::{Error, Graph, Result};

/// `C = (L + J)^-1`, `IC_i = (C_ii + (tr C - 2 sum_j C_ij) / N)^-1`.
pub fn information(g: &Graph) -> Result<Vec<f64>> {
    g.require_connected()?;
    let n = g.node_count();
    let lj = linalg::laplacian(g).add_scalar(1.0);
    let c = linalg::inverse(lj, "information centrality (L + J)")?;
    let trace = c.trace();
    Ok((0..n)
        .map(|i| {
            let row: f64 = c.row(i).sum();
            1.0 / (c[(i, i)] + (trace - 2.0 * row) / n as f64)
        })
        .collect())
}

/// Mean first-passage times `H[(i, j)]` of the simple (or strength-biased)
/// random walk, via the fundamental matrix `Z = (I - P + Pi)^-1`.
pub fn mean_first_passage_times(g: &Graph) -> Result<DMatrix<f64>> {
    g.require_connected()?;
    let n = g.node_count();
    if n < 2 {
        return Err(Error::TooFewNodes {
            what: "mean first-passage times",
            need: 2,
            got: n,
        });
    }
    let s = g.strengths();
    let total: f64 = s.iter().sum();
    // reversible chain: the stationary distribution is proportional to strength
    let pi: Vec<f64> = s.iter().map(|x| x / total).collect();
    let mut m = DMatrix::identity(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] += pi[j];
        }
        for &(j, w) in g.neighbors(i) {
            m[(i, j)] -= w / s[i];
        }
    }
    let z = linalg::inverse(m, "fundamental matrix")?;
    Ok(DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else {
            (z[(j, j)] - z[(i, j)]) / pi[j]
        }
    }))
}

/// `RWCC_i = N / sum_j H_ji`.
pub fn random_walk_closeness(g: &Graph) -> Result<Vec<f64>> {
    let h = mean_first_passage_times(g)?;
    let n = g.node_count() as f64;
    Ok(h.column_iter().map(|c| n / c.sum()).collect())
}

/// Average current through each node over all unit source-sink pairs,
/// endpoints counted as carrying the full unit.
pub fn random_walk_betweenness(g: &Graph) -> Result<Vec<f64>> {
    g.require_connected()?;
    let n = g.node_count();
    if n < 2 {
        return Err(Error::TooFewNodes {
            what: "random-walk betweenness",
            need: 2,
            got: n,
        });
    }
    // ground node 0: invert the reduced Laplacian, pad row/column 0 with zeros
    let l = linalg::laplacian(g);
    let reduced = l.view((1, 1), (n - 1, n - 1)).into_owned();
    let inv = linalg::inverse(reduced, "grounded Laplacian")?;
    let mut t = DMatrix::zeros(n, n);
    t.view_mut((1, 1), (n - 1, n - 1)).copy_from(&inv);

    let pairs = (n * (n - 1) / 2) as f64;
    let scores = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut total = 0.0;
            for p in 0..n {
                for q in p + 1..n {
                    if i == p || i == q {
                        total += 1.0;
                        continue;
                    }
                    let vi = t[(i, p)] - t[(i, q)];
                    let flow: f64 = g
                        .neighbors(i)
                        .iter()
                        .map(|&(j, w)| w * (vi - t[(j, p)] + t[(j, q)]).abs())
                        .sum();
                    total += 0.5 * flow;
                }
            }
            total / pairs
        })
        .collect();
    Ok(scores)
}
