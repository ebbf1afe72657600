use nalgebra::{DMatrix, DVector};

use super::CentralityConfig;
use crate::linalg::{self, Spectrum};
use crate::{Error, Graph, Result};

fn perron_vector(spec: &Spectrum) -> Vec<f64> {
    let v = spec.vectors.column(0);
    let sign = if v.sum() < 0.0 { -1.0 } else { 1.0 };
    let norm = v.norm();
    // clamp roundoff-level negatives so the vector is exactly non-negative
    v.iter().map(|x| (sign * x / norm).max(0.0)).collect()
}

/// Leading eigenvector of the (weighted) adjacency matrix, non-negative with
/// unit Euclidean norm.
pub fn eigenvector(g: &Graph) -> Result<Vec<f64>> {
    let spec = linalg::symmetric_spectrum(&linalg::adjacency(g))?;
    Ok(perron_vector(&spec))
}

/// Solves `(I - alpha A) x = beta 1` with `alpha = rule / lambda_1`.
pub fn katz(g: &Graph, config: &CentralityConfig) -> Result<Vec<f64>> {
    let a = linalg::adjacency(g);
    let lambda = linalg::symmetric_spectrum(&a)?.leading();
    let alpha = config.katz_alpha_rule / lambda;
    if config.katz_alpha_rule >= 1.0 || !alpha.is_finite() {
        return Err(Error::DivergentKatz {
            alpha,
            limit: 1.0 / lambda,
        });
    }
    let n = g.node_count();
    let m = DMatrix::identity(n, n) - a * alpha;
    let x = linalg::solve(m, &DVector::from_element(n, config.katz_beta), "katz")?;
    Ok(x.iter().copied().collect())
}

/// Solves `x_i = alpha sum_j A_ji x_j / s_j + beta` exactly.
pub fn pagerank(g: &Graph, config: &CentralityConfig) -> Result<Vec<f64>> {
    let n = g.node_count();
    let s = g.strengths();
    if s.contains(&0.0) {
        return Err(Error::Singular("pagerank (isolated node)"));
    }
    let mut m = DMatrix::identity(n, n);
    for i in 0..n {
        for &(j, w) in g.neighbors(i) {
            m[(i, j)] -= config.pagerank_alpha * w / s[j];
        }
    }
    let x = linalg::solve(m, &DVector::from_element(n, config.pagerank_beta), "pagerank")?;
    Ok(x.iter().copied().collect())
}
