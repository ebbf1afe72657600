//! Seventeen node centrality measures and the per-network score profile.
//!
//! Every measure is a pure function of a connected [`Graph`]. On weighted
//! graphs degree becomes strength, path lengths become inverse weights and
//! exponential-walk measures use the strength-normalised reduced adjacency.

mod flow;
mod local;
mod paths;
mod spectral;
mod walks;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Error, Graph, Result};

pub use flow::{information, mean_first_passage_times, random_walk_betweenness, random_walk_closeness};
pub use local::{
    bridging_coefficient, degree, h_index, laplacian_centrality, leverage,
    participation_coefficient,
};
pub use paths::{betweenness, closeness, distances_from};
pub use spectral::{eigenvector, katz, pagerank};
pub use walks::{communicability_betweenness, subgraph, total_communicability};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Measure {
    DC,
    EC,
    KC,
    PR,
    LC,
    HC,
    LAPC,
    CC,
    SC,
    PC,
    TCC,
    RWCC,
    IC,
    BC,
    CBC,
    RWBC,
    BridC,
}

impl Measure {
    pub const ALL: [Measure; 17] = [
        Measure::DC,
        Measure::EC,
        Measure::KC,
        Measure::PR,
        Measure::LC,
        Measure::HC,
        Measure::LAPC,
        Measure::CC,
        Measure::SC,
        Measure::PC,
        Measure::TCC,
        Measure::RWCC,
        Measure::IC,
        Measure::BC,
        Measure::CBC,
        Measure::RWBC,
        Measure::BridC,
    ];

    /// Measures whose cost makes them optional on large inputs.
    pub fn is_expensive(self) -> bool {
        matches!(self, Measure::CBC | Measure::RWBC)
    }

    pub fn name(self) -> &'static str {
        match self {
            Measure::DC => "DC",
            Measure::EC => "EC",
            Measure::KC => "KC",
            Measure::PR => "PR",
            Measure::LC => "LC",
            Measure::HC => "HC",
            Measure::LAPC => "LAPC",
            Measure::CC => "CC",
            Measure::SC => "SC",
            Measure::PC => "PC",
            Measure::TCC => "TCC",
            Measure::RWCC => "RWCC",
            Measure::IC => "IC",
            Measure::BC => "BC",
            Measure::CBC => "CBC",
            Measure::RWBC => "RWBC",
            Measure::BridC => "BridC",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown measure {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CentralityConfig {
    /// Katz attenuation as a fraction of `1 / lambda_1`.
    pub katz_alpha_rule: f64,
    pub katz_beta: f64,
    pub pagerank_alpha: f64,
    pub pagerank_beta: f64,
}

impl Default for CentralityConfig {
    fn default() -> Self {
        CentralityConfig {
            katz_alpha_rule: 0.9,
            katz_beta: 1.0,
            pagerank_alpha: 0.85,
            pagerank_beta: 1.0,
        }
    }
}

impl CentralityConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.katz_alpha_rule > 0.0 && self.katz_alpha_rule < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "katz_alpha_rule must lie in (0, 1), got {}",
                self.katz_alpha_rule
            )));
        }
        if !(self.pagerank_alpha > 0.0 && self.pagerank_alpha < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "pagerank_alpha must lie in (0, 1), got {}",
                self.pagerank_alpha
            )));
        }
        Ok(())
    }
}

/// Which columns [`compute_profile`] fills.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileOptions {
    pub measures: Vec<Measure>,
    pub skip_expensive: bool,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        ProfileOptions {
            measures: Measure::ALL.to_vec(),
            skip_expensive: false,
        }
    }
}

/// Node-by-measure score matrix. Columns that could not be computed are
/// filled with NaN and carry the reason in `notes`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralityProfile {
    pub labels: Vec<String>,
    pub measures: Vec<Measure>,
    pub weighted: bool,
    /// One score vector per measure.
    pub scores: Vec<Vec<f64>>,
    pub defined: Vec<bool>,
    pub notes: Vec<Option<String>>,
}

impl CentralityProfile {
    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn position(&self, m: Measure) -> Option<usize> {
        self.measures.iter().position(|&x| x == m)
    }

    /// Scores for `m`, if that column is present and defined.
    pub fn column(&self, m: Measure) -> Option<&[f64]> {
        let k = self.position(m)?;
        self.defined[k].then(|| self.scores[k].as_slice())
    }

    /// CSV with a `node` column followed by one column per measure;
    /// undefined columns are empty cells.
    pub fn to_csv(&self, fmt_value: impl Fn(f64) -> String) -> String {
        let mut out = String::from("node");
        for m in &self.measures {
            out.push(',');
            out.push_str(m.name());
        }
        out.push('\n');
        for (i, label) in self.labels.iter().enumerate() {
            out.push_str(&csv_field(label));
            for (k, col) in self.scores.iter().enumerate() {
                out.push(',');
                if self.defined[k] {
                    out.push_str(&fmt_value(col[i]));
                }
            }
            out.push('\n');
        }
        out
    }
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Computes one measure. `modules` is only consulted for [`Measure::PC`].
pub fn compute(
    g: &Graph,
    measure: Measure,
    config: &CentralityConfig,
    modules: Option<&[usize]>,
) -> Result<Vec<f64>> {
    match measure {
        Measure::DC => Ok(degree(g)),
        Measure::EC => eigenvector(g),
        Measure::KC => katz(g, config),
        Measure::PR => pagerank(g, config),
        Measure::LC => Ok(leverage(g)),
        Measure::HC => Ok(h_index(g)),
        Measure::LAPC => Ok(laplacian_centrality(g)),
        Measure::CC => closeness(g),
        Measure::SC => subgraph(g),
        Measure::PC => match modules {
            Some(m) => participation_coefficient(g, m),
            None => Err(Error::InvalidParameter(
                "participation coefficient needs a partition".into(),
            )),
        },
        Measure::TCC => total_communicability(g),
        Measure::RWCC => random_walk_closeness(g),
        Measure::IC => information(g),
        Measure::BC => betweenness(g),
        Measure::CBC => communicability_betweenness(g),
        Measure::RWBC => random_walk_betweenness(g),
        Measure::BridC => {
            let bc = betweenness(g)?;
            Ok(bc
                .iter()
                .zip(bridging_coefficient(g))
                .map(|(b, c)| b * c)
                .collect())
        }
    }
}

/// Computes every requested measure. Per-measure failures do not abort the
/// profile; they leave the column undefined with the error recorded.
pub fn compute_profile(
    g: &Graph,
    config: &CentralityConfig,
    modules: Option<&[usize]>,
    options: &ProfileOptions,
) -> Result<CentralityProfile> {
    g.require_connected()?;
    config.validate()?;
    let results: Vec<std::result::Result<Vec<f64>, String>> = options
        .measures
        .par_iter()
        .map(|&m| {
            if options.skip_expensive && m.is_expensive() {
                return Err("skipped (expensive)".to_string());
            }
            match compute(g, m, config, modules) {
                Ok(v) if v.iter().all(|x| x.is_finite()) => Ok(v),
                Ok(_) => Err("non-finite scores".to_string()),
                Err(e) => Err(e.to_string()),
            }
        })
        .collect();
    let n = g.node_count();
    let mut scores = Vec::with_capacity(results.len());
    let mut defined = Vec::with_capacity(results.len());
    let mut notes = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Ok(v) => {
                scores.push(v);
                defined.push(true);
                notes.push(None);
            }
            Err(e) => {
                scores.push(vec![f64::NAN; n]);
                defined.push(false);
                notes.push(Some(e));
            }
        }
    }
    Ok(CentralityProfile {
        labels: g.labels().to_vec(),
        measures: options.measures.clone(),
        weighted: g.is_weighted(),
        scores,
        defined,
        notes,
    })
}

#[cfg(test)]
pub(crate) mod test_graphs {
    use crate::Graph;

    pub fn complete(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Graph::from_unweighted_edges(n, &edges).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_unweighted_edges(n, &edges).unwrap()
    }

    /// Star with centre 0 and four leaves.
    pub fn star5() -> Graph {
        Graph::from_unweighted_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap()
    }

    pub fn path3() -> Graph {
        Graph::from_unweighted_edges(3, &[(0, 1), (1, 2)]).unwrap()
    }

    pub fn weighted_k2(w: f64) -> Graph {
        Graph::from_edges(vec!["a".into(), "b".into()], [(0, 1, w)], true).unwrap()
    }
}
