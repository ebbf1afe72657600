//! Dense linear-algebra kernels shared by the spectral and walk-based code.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::{Error, Graph, Result};

/// Largest exponent accepted before `exp` leaves the f64 range.
const MAX_EXPONENT: f64 = 700.0;

/// Weighted adjacency matrix (plain 0/1 adjacency for unweighted graphs).
pub fn adjacency(g: &Graph) -> DMatrix<f64> {
    let n = g.node_count();
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        for &(j, w) in g.neighbors(i) {
            a[(i, j)] = w;
        }
    }
    a
}

/// `S^(-1/2) W S^(-1/2)` for weighted graphs, `A` otherwise.
pub fn walk_matrix(g: &Graph) -> DMatrix<f64> {
    let mut a = adjacency(g);
    if g.is_weighted() {
        let inv_sqrt: Vec<f64> = g.strengths().iter().map(|s| 1.0 / s.sqrt()).collect();
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                a[(i, j)] *= inv_sqrt[i] * inv_sqrt[j];
            }
        }
    }
    a
}

pub fn laplacian(g: &Graph) -> DMatrix<f64> {
    let mut l = -adjacency(g);
    for i in 0..g.node_count() {
        l[(i, i)] = g.strength(i);
    }
    l
}

/// Eigen-decomposition of a symmetric matrix, eigenvalues sorted descending.
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

impl Spectrum {
    pub fn leading(&self) -> f64 {
        self.values[0]
    }
}

pub fn symmetric_spectrum(m: &DMatrix<f64>) -> Result<Spectrum> {
    let n = m.nrows();
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, 1000 * n.max(1))
        .ok_or(Error::EigenNoConvergence)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, c| eig.eigenvectors[(i, order[c])]);
    Ok(Spectrum { values, vectors })
}

/// `exp(M)` for symmetric `M` through its eigen-decomposition.
pub fn symmetric_exp(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let spec = symmetric_spectrum(m)?;
    exp_from_spectrum(&spec)
}

pub fn exp_from_spectrum(spec: &Spectrum) -> Result<DMatrix<f64>> {
    let top = spec.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top > MAX_EXPONENT {
        return Err(Error::ExponentialOverflow(top));
    }
    let scaled = DMatrix::from_fn(spec.vectors.nrows(), spec.vectors.ncols(), |i, c| {
        spec.vectors[(i, c)] * spec.values[c].exp()
    });
    Ok(scaled * spec.vectors.transpose())
}

pub fn solve(m: DMatrix<f64>, b: &DVector<f64>, what: &'static str) -> Result<DVector<f64>> {
    let lu = m.lu();
    let x = lu.solve(b).ok_or(Error::Singular(what))?;
    if x.iter().all(|v| v.is_finite()) {
        Ok(x)
    } else {
        Err(Error::Singular(what))
    }
}

pub fn inverse(m: DMatrix<f64>, what: &'static str) -> Result<DMatrix<f64>> {
    let inv = m.try_inverse().ok_or(Error::Singular(what))?;
    if inv.iter().all(|v| v.is_finite()) {
        Ok(inv)
    } else {
        Err(Error::Singular(what))
    }
}
