//! Centrality measure correlations: Spearman matrices, their within- and
//! between-network aggregates, and the regression of topology onto them.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::centrality::{csv_field, CentralityProfile, Measure};
use crate::{linalg, Error, Result};

/// Mid-ranks (1-based, ties share the mean of their positions).
pub fn mid_ranks(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && x[order[end]] == x[order[start]] {
            end += 1;
        }
        let rank = (start + end + 1) as f64 / 2.0;
        for &k in &order[start..end] {
            ranks[k] = rank;
        }
        start = end;
    }
    ranks
}

pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Spearman's rho with average ranks for ties. `None` when either input is
/// constant, shorter than 3, or the lengths differ.
pub fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 3 {
        return None;
    }
    pearson(&mid_ranks(x), &mid_ranks(y))
}

/// Symmetric matrix of pairwise Spearman correlations between measures.
/// Undefined cells hold NaN.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CmcMatrix {
    pub measures: Vec<Measure>,
    pub rho: Vec<Vec<f64>>,
    pub defined: Vec<Vec<bool>>,
}

impl CmcMatrix {
    pub fn len(&self) -> usize {
        self.measures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.measures.is_empty()
    }

    pub fn get(&self, a: Measure, b: Measure) -> Option<f64> {
        let i = self.measures.iter().position(|&m| m == a)?;
        let j = self.measures.iter().position(|&m| m == b)?;
        self.defined[i][j].then_some(self.rho[i][j])
    }

    /// Square CSV with measure names as header row and first column.
    pub fn to_csv(&self, fmt_value: impl Fn(f64) -> String) -> String {
        let mut out = String::from("measure");
        for m in &self.measures {
            out.push(',');
            out.push_str(m.name());
        }
        out.push('\n');
        for (i, m) in self.measures.iter().enumerate() {
            out.push_str(&csv_field(m.name()));
            for j in 0..self.len() {
                out.push(',');
                if self.defined[i][j] {
                    out.push_str(&fmt_value(self.rho[i][j]));
                }
            }
            out.push('\n');
        }
        out
    }
}

pub fn cmc_matrix(profile: &CentralityProfile) -> CmcMatrix {
    let k = profile.measures.len();
    let ranks: Vec<Option<Vec<f64>>> = (0..k)
        .map(|c| profile.defined[c].then(|| mid_ranks(&profile.scores[c])))
        .collect();
    let mut rho = vec![vec![f64::NAN; k]; k];
    let mut defined = vec![vec![false; k]; k];
    let n = profile.node_count();
    for i in 0..k {
        for j in i..k {
            let value = match (&ranks[i], &ranks[j]) {
                (Some(a), Some(b)) if n >= 3 => pearson(a, b),
                _ => None,
            };
            if let Some(r) = value {
                let r = if i == j { 1.0 } else { r };
                rho[i][j] = r;
                rho[j][i] = r;
                defined[i][j] = true;
                defined[j][i] = true;
            }
        }
    }
    CmcMatrix {
        measures: profile.measures.clone(),
        rho,
        defined,
    }
}

/// Mean over defined off-diagonal cells, with the number of cells used.
pub fn mean_within(cmc: &CmcMatrix) -> Option<(f64, usize)> {
    let mut sum = 0.0;
    let mut count = 0;
    for i in 0..cmc.len() {
        for j in i + 1..cmc.len() {
            if cmc.defined[i][j] {
                sum += cmc.rho[i][j];
                count += 1;
            }
        }
    }
    (count > 0).then(|| (sum / count as f64, count))
}

/// Per-pair mean and population standard deviation across networks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CmcAggregates {
    pub measures: Vec<Measure>,
    pub between_mean: Vec<Vec<Option<f64>>>,
    pub between_std: Vec<Vec<Option<f64>>>,
    /// Networks contributing a defined value to each cell.
    pub counts: Vec<Vec<usize>>,
}

pub fn between_network_stats(cmcs: &[CmcMatrix]) -> Result<CmcAggregates> {
    let first = cmcs
        .first()
        .ok_or_else(|| Error::InvalidParameter("no CMC matrices".into()))?;
    if cmcs.iter().any(|c| c.measures != first.measures) {
        return Err(Error::InvalidParameter(
            "CMC matrices use different measure sets".into(),
        ));
    }
    let k = first.len();
    let mut mean = vec![vec![None; k]; k];
    let mut std = vec![vec![None; k]; k];
    let mut counts = vec![vec![0; k]; k];
    for i in 0..k {
        for j in 0..k {
            let values: Vec<f64> = cmcs
                .iter()
                .filter(|c| c.defined[i][j])
                .map(|c| c.rho[i][j])
                .collect();
            counts[i][j] = values.len();
            if values.is_empty() {
                continue;
            }
            let m = values.iter().sum::<f64>() / values.len() as f64;
            let v = values.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / values.len() as f64;
            mean[i][j] = Some(m);
            std[i][j] = Some(v.sqrt());
        }
    }
    Ok(CmcAggregates {
        measures: first.measures.clone(),
        between_mean: mean,
        between_std: std,
        counts,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub name: String,
    /// Standardised coefficient.
    pub beta: f64,
    pub std_error: f64,
    pub t: f64,
    /// Squared semi-partial correlation.
    pub variance_share: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionReport {
    pub coefficients: Vec<Coefficient>,
    pub r_squared: f64,
    pub residual_df: usize,
    pub observations: usize,
}

fn zscore(x: &[f64]) -> Option<Vec<f64>> {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    let sd = (x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1.0)).sqrt();
    (sd > 0.0 && sd.is_finite()).then(|| x.iter().map(|v| (v - m) / sd).collect())
}

/// Relative tolerance on residual norms when checking column independence.
const RANK_TOL: f64 = 1e-8;

/// Ordinary least squares of the z-scored response on z-scored predictors.
///
/// `predictors` are `(name, column)` pairs. Rank-deficient designs are
/// rejected with the offending columns named.
pub fn regress_cmc(y: &[f64], predictors: &[(String, Vec<f64>)]) -> Result<RegressionReport> {
    let n = y.len();
    let p = predictors.len();
    if p == 0 {
        return Err(Error::InvalidParameter("no predictors".into()));
    }
    if n < p + 2 {
        return Err(Error::InvalidParameter(format!(
            "{n} observations cannot support {p} predictors"
        )));
    }
    if let Some((name, _)) = predictors.iter().find(|(_, c)| c.len() != n) {
        return Err(Error::InvalidParameter(format!("predictor {name} has wrong length")));
    }
    let zy = zscore(y).ok_or_else(|| Error::InvalidParameter("response is constant".into()))?;
    let mut columns = Vec::with_capacity(p);
    for (name, c) in predictors {
        let z = zscore(c).ok_or_else(|| Error::Collinear(format!("{name} is constant")))?;
        columns.push(z);
    }
    check_rank(&columns, predictors)?;

    let x = DMatrix::from_fn(n, p, |i, j| columns[j][i]);
    let yv = DVector::from_vec(zy);
    let xtx = x.transpose() * &x;
    let xtx_inv = linalg::inverse(xtx, "normal equations")?;
    let beta = &xtx_inv * x.transpose() * &yv;
    let resid = &yv - &x * &beta;
    let rss = resid.norm_squared();
    let tss = yv.norm_squared();
    let r_squared = (1.0 - rss / tss).clamp(0.0, 1.0);
    let df = n - p - 1;
    let sigma2 = rss / df as f64;
    let coefficients = predictors
        .iter()
        .enumerate()
        .map(|(j, (name, _))| {
            let se = (sigma2 * xtx_inv[(j, j)]).sqrt();
            let t = if se > 0.0 { beta[j] / se } else { f64::INFINITY };
            // sr^2 = beta^2 / [(X'X)^-1]_jj / TSS
            let share = beta[j] * beta[j] / xtx_inv[(j, j)] / tss;
            Coefficient {
                name: name.clone(),
                beta: beta[j],
                std_error: se,
                t,
                variance_share: share,
            }
        })
        .collect();
    Ok(RegressionReport {
        coefficients,
        r_squared,
        residual_df: df,
        observations: n,
    })
}

/// Gram-Schmidt sweep; a column whose residual vanishes lies in the span of
/// the earlier ones.
fn check_rank(columns: &[Vec<f64>], predictors: &[(String, Vec<f64>)]) -> Result<()> {
    let mut basis: Vec<DVector<f64>> = Vec::new();
    let mut kept: Vec<usize> = Vec::new();
    for (j, c) in columns.iter().enumerate() {
        let orig = DVector::from_column_slice(c);
        let mut r = orig.clone();
        for b in &basis {
            let proj = r.dot(b);
            r -= b * proj;
        }
        if r.norm() <= RANK_TOL * orig.norm() {
            let names: Vec<&str> = kept
                .iter()
                .map(|&k| predictors[k].0.as_str())
                .collect();
            return Err(Error::Collinear(format!(
                "{} is a linear combination of [{}]",
                predictors[j].0,
                names.join(", ")
            )));
        }
        let norm = r.norm();
        basis.push(r / norm);
        kept.push(j);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spearman_examples() {
        assert_eq!(spearman(&[1.0, 2.0, 3.0, 4.0], &[2.0, 5.0, 7.0, 100.0]), Some(1.0));
        assert_eq!(spearman(&[1.0, 2.0, 3.0, 4.0], &[4.0, 3.0, 2.0, 1.0]), Some(-1.0));
        let r = spearman(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]).unwrap();
        assert!((r - 0.8).abs() < 1e-12);
        assert_eq!(spearman(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]), None);
        assert_eq!(spearman(&[1.0, 2.0], &[1.0, 2.0]), None);
    }

    #[test]
    fn mid_ranks_average_ties() {
        assert_eq!(mid_ranks(&[1.0, 2.0, 2.0]), vec![1.0, 2.5, 2.5]);
        assert_eq!(mid_ranks(&[3.0, 1.0, 3.0, 3.0]), vec![3.0, 1.0, 3.0, 3.0]);
    }

    fn profile(cols: Vec<Vec<f64>>) -> CentralityProfile {
        let k = cols.len();
        let n = cols[0].len();
        CentralityProfile {
            labels: (0..n).map(|i| i.to_string()).collect(),
            measures: Measure::ALL[..k].to_vec(),
            weighted: false,
            defined: vec![true; k],
            notes: vec![None; k],
            scores: cols,
        }
    }

    #[test]
    fn constant_columns_are_undefined() {
        let p = profile(vec![vec![1.0; 3], vec![2.0; 3]]);
        let c = cmc_matrix(&p);
        assert!(c.defined.iter().flatten().all(|&d| !d));
        assert_eq!(mean_within(&c), None);
    }

    #[test]
    fn duplicate_column_correlates_perfectly() {
        let x = vec![0.3, 1.0, 0.1, 0.7];
        let p = profile(vec![x.clone(), x, vec![4.0, 1.0, 2.0, 3.0]]);
        let c = cmc_matrix(&p);
        assert_eq!(c.rho[0][1], 1.0);
        assert_eq!(c.rho[0][0], 1.0);
        let csv = c.to_csv(|v| format!("{v}"));
        assert!(csv.starts_with("measure,DC,EC,KC\nDC,1,1,"));
    }

    fn matrix(values: &[f64], k: usize) -> CmcMatrix {
        let mut rho = vec![vec![1.0; k]; k];
        let mut it = values.iter();
        for i in 0..k {
            for j in i + 1..k {
                let v = *it.next().unwrap();
                rho[i][j] = v;
                rho[j][i] = v;
            }
        }
        CmcMatrix {
            measures: Measure::ALL[..k].to_vec(),
            defined: rho.iter().map(|r| r.iter().map(|x| !x.is_nan()).collect()).collect(),
            rho,
        }
    }

    #[test]
    fn mean_within_examples() {
        assert_eq!(mean_within(&matrix(&[0.5; 6], 4)), Some((0.5, 6)));
        assert_eq!(mean_within(&matrix(&[1.0, 1.0, 1.0, 0.0, 0.0, 0.0], 4)), Some((0.5, 6)));
        let mut vals = vec![0.2; 136];
        vals[5] = f64::NAN;
        vals[0] = 0.2 + 135.0;
        let (m, count) = mean_within(&matrix(&vals, 17)).unwrap();
        assert_eq!(count, 135);
        assert!((m - (0.2 * 135.0 + 135.0) / 135.0).abs() < 1e-12);
    }

    #[test]
    fn between_examples() {
        let a = matrix(&[0.0, 1.0, 0.5], 3);
        let agg = between_network_stats(&[a.clone(), a.clone()]).unwrap();
        assert!(agg.between_std.iter().flatten().all(|s| *s == Some(0.0)));
        let b = matrix(&[1.0, 0.0, 0.5], 3);
        let agg = between_network_stats(&[a.clone(), b]).unwrap();
        assert_eq!(agg.between_mean[0][1], Some(0.5));
        assert_eq!(agg.between_std[0][1], Some(0.5));
        let single = between_network_stats(&[a]).unwrap();
        assert!(single.between_std.iter().flatten().all(|s| *s == Some(0.0)));
        assert!(between_network_stats(&[]).is_err());
    }

    #[test]
    fn regression_exact_single_predictor() {
        let x: Vec<f64> = (0..10).map(|i| i as f64 * 0.7 - 2.0).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v + 1.0).collect();
        let r = regress_cmc(&y, &[("x".into(), x)]).unwrap();
        assert!((r.r_squared - 1.0).abs() < 1e-12);
        assert!((r.coefficients[0].beta - 1.0).abs() < 1e-12);
        assert_eq!(r.residual_df, 8);
    }

    #[test]
    fn regression_orthogonal_noise() {
        // y is orthogonal to both centred predictors by construction
        let x1 = vec![1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0];
        let x2 = vec![1.0, 1.0, -1.0, -1.0, 1.0, 1.0, -1.0, -1.0];
        let y = vec![1.0, -1.0, -1.0, 1.0, 1.0, -1.0, -1.0, 1.0];
        let r = regress_cmc(&y, &[("a".into(), x1), ("b".into(), x2)]).unwrap();
        assert!(r.r_squared.abs() < 1e-12);
        assert!(r.coefficients.iter().all(|c| c.beta.abs() < 1e-12));
    }

    #[test]
    fn regression_duplicate_predictor_rejected() {
        let x: Vec<f64> = (0..8).map(|i| (i * i) as f64).collect();
        let y: Vec<f64> = (0..8).map(|i| i as f64).collect();
        let err = regress_cmc(&y, &[("mod".into(), x.clone()), ("gap".into(), x)]).unwrap_err();
        match err {
            Error::Collinear(msg) => assert!(msg.contains("gap") && msg.contains("mod")),
            other => panic!("unexpected {other:?}"),
        }
    }
}
