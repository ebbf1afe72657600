//! Clustering nodes by their centrality profiles.
//!
//! Scores are turned into per-measure normalised ranks, agglomerated with
//! Ward's criterion and the number of clusters is chosen by the
//! Davies-Bouldin index. A force-directed layout supplies plot coordinates.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::centrality::{CentralityProfile, Measure};
use crate::cmc::mid_ranks;
use crate::{seed, Error, Graph, Result};

/// Node-by-measure matrix of ranks scaled to `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankProfile {
    pub labels: Vec<String>,
    pub measures: Vec<Measure>,
    /// One row per node.
    pub rows: Vec<Vec<f64>>,
    pub excluded: Vec<Measure>,
    /// Included measures with no variation (mapped to 0.5).
    pub constant: Vec<Measure>,
}

/// Measures left out of rank profiles by default; RWCC duplicates IC.
pub const DEFAULT_EXCLUDE: [Measure; 1] = [Measure::RWCC];

/// Mid-ranks mapped so rank 1 becomes 0 and rank `n` becomes 1. Measures in
/// `exclude` and undefined columns are dropped.
pub fn rank_normalize(profile: &CentralityProfile, exclude: &[Measure]) -> Result<RankProfile> {
    let n = profile.node_count();
    if n < 2 {
        return Err(Error::TooFewNodes {
            what: "rank profile",
            need: 2,
            got: n,
        });
    }
    let mut measures = Vec::new();
    let mut excluded = Vec::new();
    let mut constant = Vec::new();
    let mut columns = Vec::new();
    for (k, &m) in profile.measures.iter().enumerate() {
        if exclude.contains(&m) || !profile.defined[k] {
            excluded.push(m);
            continue;
        }
        let col = &profile.scores[k];
        if col.iter().all(|&x| x == col[0]) {
            constant.push(m);
            columns.push(vec![0.5; n]);
        } else {
            columns.push(
                mid_ranks(col)
                    .into_iter()
                    .map(|r| (r - 1.0) / (n - 1) as f64)
                    .collect(),
            );
        }
        measures.push(m);
    }
    let rows = (0..n).map(|i| columns.iter().map(|c| c[i]).collect()).collect();
    Ok(RankProfile {
        labels: profile.labels.clone(),
        measures,
        rows,
        excluded,
        constant,
    })
}

/// One agglomeration step: clusters `a` and `b` (scipy-style ids, leaves
/// `0..n`, merged clusters `n + step`) joined at `height`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub a: usize,
    pub b: usize,
    pub height: f64,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringResult {
    pub merges: Vec<Merge>,
    /// `labels_per_k[k - 1]` cuts the tree into `k` clusters.
    pub labels_per_k: Vec<Vec<usize>>,
    /// `(k, DB index)`; undefined values are omitted.
    pub db_curve: Vec<(usize, f64)>,
    pub selected_k: Option<usize>,
}

impl ClusteringResult {
    pub fn labels(&self, k: usize) -> Option<&[usize]> {
        self.labels_per_k.get(k.checked_sub(1)?).map(Vec::as_slice)
    }

    /// Leaf order of the dendrogram, left to right.
    pub fn leaf_order(&self) -> Vec<usize> {
        let n = self.merges.len() + 1;
        let mut stack = match self.merges.last() {
            Some(_) => vec![2 * n - 2],
            None => vec![0],
        };
        let mut out = Vec::with_capacity(n);
        while let Some(c) = stack.pop() {
            if c < n {
                out.push(c);
            } else {
                let m = self.merges[c - n];
                stack.push(m.b);
                stack.push(m.a);
            }
        }
        out
    }
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Ward agglomeration with the Lance-Williams update on squared Euclidean
/// distances. Heights are the square roots of the merge costs (the
/// `ward.D2` convention). Ties go to the lexicographically smallest pair of
/// cluster slots.
pub fn ward_linkage(rows: &[Vec<f64>]) -> Vec<Merge> {
    let n = rows.len();
    if n < 2 {
        return Vec::new();
    }
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = squared_distance(&rows[i], &rows[j]);
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    let mut active = vec![true; n];
    let mut size = vec![1usize; n];
    let mut id: Vec<usize> = (0..n).collect();
    // nearest active neighbour with a larger slot index
    let nearest = |d: &Vec<Vec<f64>>, active: &Vec<bool>, i: usize| -> (f64, usize) {
        let mut best = (f64::INFINITY, usize::MAX);
        for j in i + 1..n {
            if active[j] && d[i][j] < best.0 {
                best = (d[i][j], j);
            }
        }
        best
    };
    let mut nn: Vec<(f64, usize)> = (0..n).map(|i| nearest(&d, &active, i)).collect();
    let mut merges = Vec::with_capacity(n - 1);
    for step in 0..n - 1 {
        let mut a = usize::MAX;
        for i in 0..n {
            if active[i] && nn[i].1 != usize::MAX && (a == usize::MAX || nn[i].0 < nn[a].0) {
                a = i;
            }
        }
        let (cost, b) = nn[a];
        let (sa, sb) = (size[a] as f64, size[b] as f64);
        for k in 0..n {
            if !active[k] || k == a || k == b {
                continue;
            }
            let sk = size[k] as f64;
            let v = ((sa + sk) * d[a][k] + (sb + sk) * d[b][k] - sk * cost) / (sa + sb + sk);
            d[a][k] = v;
            d[k][a] = v;
        }
        active[b] = false;
        size[a] += size[b];
        merges.push(Merge {
            a: id[a].min(id[b]),
            b: id[a].max(id[b]),
            height: cost.max(0.0).sqrt(),
            size: size[a],
        });
        id[a] = n + step;
        for i in 0..n {
            if active[i] && (i == a || nn[i].1 == a || nn[i].1 == b || (i < a && d[i][a] <= nn[i].0)) {
                nn[i] = nearest(&d, &active, i);
            }
        }
    }
    merges
}

/// Labels for a `k`-cluster cut: undo the last `k - 1` merges. Labels are
/// numbered by smallest member.
pub fn cut(merges: &[Merge], k: usize) -> Vec<usize> {
    let n = merges.len() + 1;
    let k = k.clamp(1, n);
    let mut parent: Vec<usize> = (0..2 * n - 1).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (step, m) in merges.iter().take(n - k).enumerate() {
        let c = n + step;
        let ra = find(&mut parent, m.a);
        let rb = find(&mut parent, m.b);
        parent[ra] = c;
        parent[rb] = c;
    }
    let roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
    crate::community::canonical_labels(&roots)
}

/// Mean over clusters of the worst `(s_i + s_j) / d(c_i, c_j)` ratio, with
/// `s` the mean distance to the centroid. Pairs with coincident centroids
/// are skipped; `None` when nothing is defined.
pub fn davies_bouldin(rows: &[Vec<f64>], labels: &[usize]) -> Option<f64> {
    let k = labels.iter().max().map_or(0, |x| x + 1);
    if k < 2 {
        return None;
    }
    let dim = rows.first().map_or(0, Vec::len);
    let mut centroids = vec![vec![0.0; dim]; k];
    let mut counts = vec![0usize; k];
    for (row, &l) in rows.iter().zip(labels) {
        counts[l] += 1;
        for (c, x) in centroids[l].iter_mut().zip(row) {
            *c += x;
        }
    }
    if counts.contains(&0) {
        return None;
    }
    for (c, &m) in centroids.iter_mut().zip(&counts) {
        c.iter_mut().for_each(|x| *x /= m as f64);
    }
    let mut spread = vec![0.0; k];
    for (row, &l) in rows.iter().zip(labels) {
        spread[l] += squared_distance(row, &centroids[l]).sqrt();
    }
    for (s, &m) in spread.iter_mut().zip(&counts) {
        *s /= m as f64;
    }
    let mut total = 0.0;
    let mut used = 0;
    for i in 0..k {
        let worst = (0..k)
            .filter(|&j| j != i)
            .filter_map(|j| {
                let sep = squared_distance(&centroids[i], &centroids[j]).sqrt();
                (sep > 0.0).then(|| (spread[i] + spread[j]) / sep)
            })
            .fold(None, |acc: Option<f64>, r| Some(acc.map_or(r, |a| a.max(r))));
        if let Some(w) = worst {
            total += w;
            used += 1;
        }
    }
    (used > 0).then(|| total / used as f64)
}

/// Smallest `k` in `2..=min(k_max, n - 1)` minimising the DB index.
pub fn select_k(result: &ClusteringResult, k_max: usize) -> Option<usize> {
    let n = result.merges.len() + 1;
    let upper = k_max.min(n.saturating_sub(1));
    result
        .db_curve
        .iter()
        .filter(|&&(k, _)| (2..=upper).contains(&k))
        .fold(None, |best: Option<(usize, f64)>, &(k, v)| match best {
            Some((_, b)) if b <= v => best,
            _ => Some((k, v)),
        })
        .map(|(k, _)| k)
}

/// Ward tree, cuts for `k = 1..=k_max` (bounded by `n`), DB curve and the
/// selected `k`.
pub fn ward_cluster(rp: &RankProfile, k_max: usize) -> Result<ClusteringResult> {
    let n = rp.rows.len();
    if n < 3 {
        return Err(Error::TooFewNodes {
            what: "Ward clustering",
            need: 3,
            got: n,
        });
    }
    let merges = ward_linkage(&rp.rows);
    let k_top = k_max.max(1).min(n);
    let labels_per_k: Vec<Vec<usize>> = (1..=k_top).map(|k| cut(&merges, k)).collect();
    let db_curve = labels_per_k
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(k, _)| k + 1 < n)
        .filter_map(|(k, l)| davies_bouldin(&rp.rows, l).map(|v| (k + 1, v)))
        .collect();
    let mut result = ClusteringResult {
        merges,
        labels_per_k,
        db_curve,
        selected_k: None,
    };
    result.selected_k = select_k(&result, k_max);
    Ok(result)
}

/// Fruchterman-Reingold placement in the unit square, seeded random start.
pub fn layout(g: &Graph, seed_value: u64) -> Vec<(f64, f64)> {
    const ITERATIONS: usize = 300;
    let n = g.node_count();
    let mut rng = seed::rng(seed_value);
    let mut pos: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect();
    if n == 1 {
        return vec![(0.5, 0.5)];
    }
    let k = (1.0 / n as f64).sqrt();
    let mut temperature = 0.1;
    let cooling = temperature / (ITERATIONS as f64 + 1.0);
    let edges = g.edges();
    for _ in 0..ITERATIONS {
        let mut disp = vec![(0.0, 0.0); n];
        for i in 0..n {
            for j in i + 1..n {
                let (mut dx, mut dy) = (pos[i].0 - pos[j].0, pos[i].1 - pos[j].1);
                let mut dist = (dx * dx + dy * dy).sqrt();
                if dist < 1e-9 {
                    // separate coincident points along a fixed direction
                    dx = 1e-3 * ((i + 1) as f64);
                    dy = 1e-3 * ((j + 1) as f64);
                    dist = (dx * dx + dy * dy).sqrt();
                }
                let f = k * k / dist;
                disp[i].0 += dx / dist * f;
                disp[i].1 += dy / dist * f;
                disp[j].0 -= dx / dist * f;
                disp[j].1 -= dy / dist * f;
            }
        }
        for &(u, v, w) in &edges {
            let (dx, dy) = (pos[u].0 - pos[v].0, pos[u].1 - pos[v].1);
            let dist = (dx * dx + dy * dy).sqrt().max(1e-9);
            let f = w * dist * dist / k;
            disp[u].0 -= dx / dist * f;
            disp[u].1 -= dy / dist * f;
            disp[v].0 += dx / dist * f;
            disp[v].1 += dy / dist * f;
        }
        for i in 0..n {
            let len = (disp[i].0 * disp[i].0 + disp[i].1 * disp[i].1).sqrt();
            if len > 0.0 {
                let step = len.min(temperature);
                pos[i].0 += disp[i].0 / len * step;
                pos[i].1 += disp[i].1 / len * step;
            }
        }
        temperature -= cooling;
    }
    pos
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centrality::test_graphs::*;

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
    fn rank_normalize_examples() {
        let rp = rank_normalize(
            &profile(vec![vec![10.0, 20.0, 30.0], vec![5.0; 3], vec![1.0, 2.0, 2.0]]),
            &[],
        )
        .unwrap();
        let col = |k: usize| rp.rows.iter().map(|r| r[k]).collect::<Vec<_>>();
        assert_eq!(col(0), vec![0.0, 0.5, 1.0]);
        assert_eq!(col(1), vec![0.5; 3]);
        assert_eq!(col(2), vec![0.0, 0.75, 0.75]);
        assert_eq!(rp.constant, vec![Measure::EC]);
    }

    #[test]
    fn rank_normalize_excludes() {
        let mut p = profile(vec![vec![1.0, 2.0, 3.0]; 12]);
        p.defined[3] = false;
        let rp = rank_normalize(&p, &[Measure::RWCC]).unwrap();
        assert_eq!(rp.excluded, vec![Measure::PR, Measure::RWCC]);
        assert_eq!(rp.measures.len(), 10);
    }

    #[test]
    fn identical_rows_merge_first_at_zero() {
        let rows = vec![vec![0.0, 0.0], vec![5.0, 5.0], vec![1.0, 2.0], vec![1.0, 2.0]];
        let m = ward_linkage(&rows);
        assert_eq!((m[0].a, m[0].b), (2, 3));
        assert_eq!(m[0].height, 0.0);
    }

    #[test]
    fn equidistant_tie_takes_smallest_pair() {
        // unit square: four pairs at distance 1
        let rows = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]];
        let m = ward_linkage(&rows);
        assert_eq!((m[0].a, m[0].b), (0, 1));
    }

    #[test]
    fn ward_matches_known_heights() {
        // 1-D points 0, 1, 5: first merge cost 2*(1/2)^2.. height = |0-1| = 1;
        // second: sqrt(2 * 1*2/3 * 4.5^2) per ward.D2
        let rows = vec![vec![0.0], vec![1.0], vec![5.0]];
        let m = ward_linkage(&rows);
        assert!((m[0].height - 1.0).abs() < 1e-12);
        let want = (2.0 * (2.0 / 3.0) * 4.5f64.powi(2)).sqrt();
        assert!((m[1].height - want).abs() < 1e-12);
        assert_eq!((m[1].a, m[1].b), (2, 3));
    }

    fn blobs(centres: &[(f64, f64)], per: usize, seed_value: u64, r: f64) -> Vec<Vec<f64>> {
        let mut rng = seed::rng(seed_value);
        centres
            .iter()
            .flat_map(|&(x, y)| {
                (0..per)
                    .map(|_| vec![x + rng.gen_range(-r..r), y + rng.gen_range(-r..r)])
                    .collect::<Vec<_>>()
            })
            .collect()
    }

    fn rank_profile(rows: Vec<Vec<f64>>) -> RankProfile {
        RankProfile {
            labels: (0..rows.len()).map(|i| i.to_string()).collect(),
            measures: vec![Measure::DC, Measure::EC],
            rows,
            excluded: vec![],
            constant: vec![],
        }
    }

    #[test]
    fn two_blob_top_split() {
        // ten measures; near k = n - 1 the index is dominated by the closest
        // pair, so the blobs need several dimensions to keep that pair apart
        let mut rng = seed::rng(1);
        let rows: Vec<Vec<f64>> = (0..40)
            .map(|i| {
                let c = if i < 20 { 0.2 } else { 0.8 };
                (0..10).map(|_| c + rng.gen_range(-0.02..0.02)).collect()
            })
            .collect();
        let res = ward_cluster(&rank_profile(rows.clone()), 50).unwrap();
        let two = res.labels(2).unwrap();
        let expected: Vec<usize> = (0..40).map(|i| i / 20).collect();
        assert_eq!(two, expected.as_slice());
        assert_eq!(res.selected_k, Some(2));
        // exhaustive-style check: the planted split has lower within-cluster
        // variance than moving any single point across
        let sse = |l: &[usize]| -> f64 {
            (0..2)
                .map(|c| {
                    let pts: Vec<&Vec<f64>> = rows.iter().zip(l).filter(|(_, x)| **x == c).map(|(r, _)| r).collect();
                    let m: Vec<f64> = (0..10).map(|d| pts.iter().map(|p| p[d]).sum::<f64>() / pts.len() as f64).collect();
                    pts.iter().map(|p| squared_distance(p, &m)).sum::<f64>()
                })
                .sum()
        };
        let base = sse(&expected);
        for i in 0..40 {
            let mut l = expected.clone();
            l[i] = 1 - l[i];
            assert!(sse(&l) > base);
        }
    }

    #[test]
    fn three_blobs_select_three() {
        let rows = blobs(&[(0.1, 0.1), (0.9, 0.1), (0.5, 0.9)], 12, 4, 0.005);
        let res = ward_cluster(&rank_profile(rows), 50).unwrap();
        assert_eq!(res.selected_k, Some(3));
    }

    #[test]
    fn heights_monotone_and_cuts_nested() {
        let rows = blobs(&[(0.2, 0.3), (0.6, 0.6), (0.3, 0.9), (0.9, 0.2)], 8, 9, 0.05);
        let res = ward_cluster(&rank_profile(rows), 50).unwrap();
        for w in res.merges.windows(2) {
            assert!(w[1].height >= w[0].height - 1e-12);
        }
        for k in 2..=res.labels_per_k.len() {
            let fine = res.labels(k).unwrap();
            let coarse = res.labels(k - 1).unwrap();
            assert_eq!(fine.iter().max().unwrap() + 1, k);
            for i in 0..fine.len() {
                for j in 0..fine.len() {
                    if fine[i] == fine[j] {
                        assert_eq!(coarse[i], coarse[j]);
                    }
                }
            }
        }
        let order = res.leaf_order();
        let mut sorted = order.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..32).collect::<Vec<_>>());
    }

    #[test]
    fn small_n_caps_search() {
        let rows = vec![vec![0.0], vec![0.1], vec![0.9], vec![1.0]];
        let res = ward_cluster(&rank_profile(rows), 50).unwrap();
        assert!(res.db_curve.iter().all(|&(k, _)| k <= 3));
        assert_eq!(res.labels_per_k.len(), 4);
        // k = 2: spreads 0.05 each, centroids 0.9 apart
        assert!((res.db_curve[0].1 - 0.1 / 0.9).abs() < 1e-12);
        // k = 3: {0, 0.1}, {0.9}, {1.0}
        let want = (0.05 / 0.85 + 0.05 / 0.85 + 0.05 / 0.95) / 3.0;
        assert!((res.db_curve[1].1 - want).abs() < 1e-12);
        assert_eq!(res.selected_k, Some(3));
    }

    #[test]
    fn davies_bouldin_examples() {
        let rows = blobs(&[(0.1, 0.1), (0.9, 0.9)], 10, 2, 0.02);
        let two: Vec<usize> = (0..20).map(|i| i / 10).collect();
        let three: Vec<usize> = (0..20).map(|i| if i < 10 { 0 } else if i < 15 { 1 } else { 2 }).collect();
        assert!(davies_bouldin(&rows, &two).unwrap() < davies_bouldin(&rows, &three).unwrap());
        // a blob split in two has nearly coincident halves
        let split: Vec<usize> = (0..20).map(|i| if i < 10 { i % 2 } else { 2 }).collect();
        assert!(davies_bouldin(&rows, &split).unwrap() > 1.0);
        let points = vec![vec![0.0], vec![1.0], vec![3.0]];
        assert_eq!(davies_bouldin(&points, &[0, 1, 2]), Some(0.0));
        assert_eq!(davies_bouldin(&points, &[0, 0, 0]), None);
    }

    #[test]
    fn layout_examples() {
        let a = layout(&complete(2), 3);
        assert_ne!(a[0], a[1]);
        assert_eq!(layout(&cycle(6), 11), layout(&cycle(6), 11));
        let c4 = layout(&cycle(4), 5);
        for i in 0..4 {
            for j in i + 1..4 {
                let d = ((c4[i].0 - c4[j].0).powi(2) + (c4[i].1 - c4[j].1).powi(2)).sqrt();
                assert!(d.is_finite() && d > 0.0);
            }
        }
    }
}
