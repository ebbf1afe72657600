use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::{Error, Result};

/// Parses a whitespace-separated edge list.
///
/// Each non-empty line is `u v` or `u v w`; everything after a `#` is a
/// comment. Labels are assigned indices in order of first appearance.
/// Self-loops are dropped and repeated pairs keep their first weight. When
/// `weighted` is false the weight column is ignored; when it is true a
/// missing weight defaults to 1.
pub fn parse_edge_list(text: &str, weighted: bool) -> Result<Graph> {
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    let mut intern = |s: &str, labels: &mut Vec<String>| -> usize {
        if let Some(&i) = index.get(s) {
            return i;
        }
        let i = labels.len();
        labels.push(s.to_string());
        index.insert(s.to_string(), i);
        i
    };
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("");
        let cols: Vec<&str> = content.split_whitespace().collect();
        if cols.is_empty() {
            continue;
        }
        if cols.len() < 2 || cols.len() > 3 {
            return Err(Error::MalformedLine {
                line,
                reason: format!("expected 2 or 3 columns, found {}", cols.len()),
            });
        }
        let w = match cols.get(2) {
            Some(tok) if weighted => {
                let w: f64 = tok.parse().map_err(|_| Error::MalformedLine {
                    line,
                    reason: format!("weight {tok:?} is not a number"),
                })?;
                if !(w.is_finite() && w > 0.0) {
                    return Err(Error::InvalidWeight { line, weight: w });
                }
                w
            }
            _ => 1.0,
        };
        if cols[0] == cols[1] {
            continue;
        }
        let u = intern(cols[0], &mut labels);
        let v = intern(cols[1], &mut labels);
        edges.push((u, v, w));
    }
    if edges.is_empty() {
        return Err(Error::EmptyGraph);
    }
    Graph::from_edges(labels, edges, weighted)
}

impl Graph {
    /// Edge list text readable by [`parse_edge_list`].
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v, w) in self.edges() {
            if self.weighted {
                let _ = writeln!(out, "{} {} {}", self.labels[u], self.labels[v], w);
            } else {
                let _ = writeln!(out, "{} {}", self.labels[u], self.labels[v]);
            }
        }
        out
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            nodes: self.labels.clone(),
            edges: self.edges(),
            weighted: self.weighted,
        }
    }
}

/// JSON form of a graph: node labels plus `[u, v, w]` triples indexing into
/// `nodes`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphJson {
    pub nodes: Vec<String>,
    pub edges: Vec<(usize, usize, f64)>,
    #[serde(default)]
    pub weighted: bool,
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(j: GraphJson) -> Result<Graph> {
        Graph::from_edges(j.nodes, j.edges, j.weighted)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_path() {
        let g = parse_edge_list("a b\nb c", false).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.labels(), &["a", "b", "c"]);
        assert_eq!(g.degrees(), vec![1, 2, 1]);
    }

    #[test]
    fn parses_weight() {
        let g = parse_edge_list("a b 2.5", true).unwrap();
        assert!(g.is_weighted());
        assert_eq!(g.weight(0, 1), Some(2.5));
    }

    #[test]
    fn self_loop_only_is_empty() {
        assert_eq!(parse_edge_list("a a", false), Err(Error::EmptyGraph));
        assert_eq!(parse_edge_list("# nothing\n\n", false), Err(Error::EmptyGraph));
    }

    #[test]
    fn comments_and_reciprocal_edges() {
        let g = parse_edge_list("# header\na b 1 # trailing\nb a 1\n\nb c 3", true).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.weight(1, 2), Some(3.0));
    }

    #[test]
    fn duplicate_keeps_first_weight() {
        let g = parse_edge_list("a b 1\nb a 4", true).unwrap();
        assert_eq!(g.weight(0, 1), Some(1.0));
    }

    #[test]
    fn malformed_line_reports_number() {
        let err = parse_edge_list("a b\nc\n", false).unwrap_err();
        assert!(matches!(err, Error::MalformedLine { line: 2, .. }));
        let err = parse_edge_list("a b x", true).unwrap_err();
        assert!(matches!(err, Error::MalformedLine { line: 1, .. }));
    }

    #[test]
    fn non_positive_weight_rejected() {
        assert_eq!(
            parse_edge_list("a b 1\nb c 0", true),
            Err(Error::InvalidWeight { line: 2, weight: 0.0 })
        );
    }

    #[test]
    fn json_roundtrip() {
        let g = parse_edge_list("x y 2\ny z 0.5", true).unwrap();
        let text = serde_json::to_string(&g.to_json()).unwrap();
        let back: GraphJson = serde_json::from_str(&text).unwrap();
        assert_eq!(Graph::try_from(back).unwrap(), g);
    }
}
