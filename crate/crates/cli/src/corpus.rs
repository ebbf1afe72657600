//! Corpus mode: the per-network pipeline over many inputs plus
//! between-network aggregates, the topology regression and surrogate
//! difference tables.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use centrakit::cmc::{self, CmcAggregates, RegressionReport};
use centrakit::topology::TopologySummary;

use crate::format::{fmt_opt, write_csv, write_json};
use crate::pipeline::{descriptor_cells, run_network_into, NetworkBundle, PipelineConfig, SurrogateSummary, REGRESSION_EXCLUDED};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkRow {
    pub name: String,
    pub input: String,
    pub dir: String,
    pub nodes: usize,
    pub edges: usize,
    pub mean_cmc: Option<f64>,
    pub complete: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub input: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionOutcome {
    pub response: String,
    pub predictors: Vec<String>,
    pub excluded_predictors: Vec<String>,
    /// Networks entering the fit.
    pub networks: Vec<String>,
    /// Networks dropped for an undefined response or predictor.
    pub dropped: Vec<String>,
    pub report: Option<RegressionReport>,
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct CorpusReport {
    pub networks: Vec<NetworkRow>,
    pub failures: Vec<Failure>,
    pub aggregates: Option<CmcAggregates>,
    pub regression: RegressionOutcome,
    pub bundles: Vec<NetworkBundle>,
}

/// Distinct output directory names: file stems, suffixed with the input
/// position when two stems collide.
fn directory_names(paths: &[PathBuf]) -> Vec<String> {
    let stems: Vec<String> = paths
        .iter()
        .map(|p| {
            p.file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "network".into())
        })
        .collect();
    let mut seen: HashMap<&str, usize> = HashMap::new();
    for s in &stems {
        *seen.entry(s.as_str()).or_default() += 1;
    }
    stems
        .iter()
        .enumerate()
        .map(|(i, s)| if seen[s.as_str()] > 1 { format!("{s}_{i}") } else { s.clone() })
        .collect()
}

/// Runs every network (concurrently) under `config.out/networks/` and
/// writes the corpus tables to `config.out`.
pub fn run_corpus(config: &PipelineConfig, paths: &[PathBuf]) -> Result<CorpusReport> {
    if paths.is_empty() {
        bail!("corpus needs at least one input");
    }
    config.validate()?;
    let names = directory_names(paths);
    let root = config.out.join("networks");
    let results: Vec<Result<NetworkBundle>> = paths
        .par_iter()
        .zip(names.par_iter())
        .enumerate()
        .map(|(i, (path, name))| run_network_into(config, path, i as u64, &root.join(name)))
        .collect();

    let mut bundles = Vec::new();
    let mut failures = Vec::new();
    for (path, r) in paths.iter().zip(results) {
        match r {
            Ok(b) => bundles.push(b),
            Err(e) => {
                log::warn!("skipping {}: {e:#}", path.display());
                failures.push(Failure {
                    input: path.display().to_string(),
                    error: format!("{e:#}"),
                });
            }
        }
    }
    fs::create_dir_all(&config.out).with_context(|| format!("creating {}", config.out.display()))?;

    let networks: Vec<NetworkRow> = bundles
        .iter()
        .map(|b| NetworkRow {
            name: b.name.clone(),
            input: b.manifest.input.clone(),
            dir: b.dir.display().to_string(),
            nodes: b.graph.node_count(),
            edges: b.graph.edge_count(),
            mean_cmc: b.mean_cmc,
            complete: b.manifest.complete,
        })
        .collect();

    let cmcs: Vec<_> = bundles.iter().filter_map(|b| b.cmc.clone()).collect();
    let aggregates = if cmcs.is_empty() {
        None
    } else {
        Some(cmc::between_network_stats(&cmcs)?)
    };
    let regression = regression(&bundles);

    write_json(
        &config.out.join("corpus.json"),
        &serde_json::json!({
            "tool": "centrakit",
            "version": env!("CARGO_PKG_VERSION"),
            "seed": config.seed,
            "networks": networks,
            "failures": failures,
        }),
    )?;
    if let Some(a) = &aggregates {
        write_json(&config.out.join("aggregates.json"), a)?;
        write_matrix(&config.out.join("between_mean.csv"), a, &a.between_mean)?;
        write_matrix(&config.out.join("between_std.csv"), a, &a.between_std)?;
    }
    write_json(&config.out.join("regression.json"), &regression)?;
    write_topology_table(&config.out.join("topology.csv"), &bundles)?;
    write_surrogate_table(&config.out.join("surrogate_differences.csv"), &bundles)?;

    Ok(CorpusReport {
        networks,
        failures,
        aggregates,
        regression,
        bundles,
    })
}

fn write_matrix(path: &Path, a: &CmcAggregates, cells: &[Vec<Option<f64>>]) -> Result<()> {
    let mut header = vec!["measure".to_string()];
    header.extend(a.measures.iter().map(|m| m.name().to_string()));
    let rows: Vec<Vec<String>> = a
        .measures
        .iter()
        .zip(cells)
        .map(|(m, row)| {
            let mut r = vec![m.name().to_string()];
            r.extend(row.iter().map(|&x| fmt_opt(x)));
            r
        })
        .collect();
    write_csv(path, &header, &rows)
}

fn write_topology_table(path: &Path, bundles: &[NetworkBundle]) -> Result<()> {
    let mut header: Vec<String> = ["network", "nodes", "edges", "mean_cmc"].map(String::from).to_vec();
    header.extend(descriptor_cells(None).into_iter().map(|(k, _)| k));
    let rows: Vec<Vec<String>> = bundles
        .iter()
        .map(|b| {
            let mut r = vec![
                b.name.clone(),
                b.graph.node_count().to_string(),
                b.graph.edge_count().to_string(),
                fmt_opt(b.mean_cmc),
            ];
            r.extend(descriptor_cells(b.topology.as_ref()).into_iter().map(|(_, v)| v));
            r
        })
        .collect();
    write_csv(path, &header, &rows)
}

/// One row per network and surrogate kind: empirical minus ensemble mean.
fn write_surrogate_table(path: &Path, bundles: &[NetworkBundle]) -> Result<()> {
    let keys: Vec<String> = {
        let mut k: Vec<String> = descriptor_cells(None).into_iter().map(|(k, _)| k).collect();
        k.insert(0, "mean_cmc".into());
        k
    };
    let mut header = vec!["network".to_string(), "kind".to_string()];
    header.extend(keys.iter().cloned());
    let mut rows = Vec::new();
    for b in bundles {
        let Some(s) = &b.surrogates else { continue };
        for (kind, summary) in [("unconstrained", &s.unconstrained), ("constrained", &s.constrained)] {
            rows.push(difference_row(&b.name, kind, summary, &keys));
        }
    }
    write_csv(path, &header, &rows)
}

fn difference_row(name: &str, kind: &str, s: &SurrogateSummary, keys: &[String]) -> Vec<String> {
    let mut r = vec![name.to_string(), kind.to_string()];
    r.extend(keys.iter().map(|k| fmt_opt(s.difference.get(k).copied().flatten())));
    r
}

fn regression_predictors() -> Vec<String> {
    TopologySummary::default()
        .fields()
        .into_iter()
        .map(|(k, _)| k.to_string())
        .filter(|k| !REGRESSION_EXCLUDED.contains(&k.as_str()))
        .collect()
}

/// Mean within-network CMC regressed on the topology descriptors, with
/// listwise deletion of networks missing any value.
fn regression(bundles: &[NetworkBundle]) -> RegressionOutcome {
    let predictors = regression_predictors();
    let mut used = Vec::new();
    let mut dropped = Vec::new();
    let mut y = Vec::new();
    let mut columns: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for b in bundles {
        let values: Option<Vec<f64>> = b
            .topology
            .as_ref()
            .and_then(|t| predictors.iter().map(|p| t.get(p)).collect());
        match (b.mean_cmc, values) {
            (Some(m), Some(v)) => {
                used.push(b.name.clone());
                y.push(m);
                for (p, x) in predictors.iter().zip(v) {
                    columns.entry(p).or_default().push(x);
                }
            }
            _ => dropped.push(b.name.clone()),
        }
    }
    let design: Vec<(String, Vec<f64>)> = predictors
        .iter()
        .map(|p| (p.clone(), columns.get(p.as_str()).cloned().unwrap_or_default()))
        .collect();
    let (report, error) = match cmc::regress_cmc(&y, &design) {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e.to_string())),
    };
    RegressionOutcome {
        response: "mean_cmc".into(),
        predictors,
        excluded_predictors: REGRESSION_EXCLUDED.iter().map(|s| s.to_string()).collect(),
        networks: used,
        dropped,
        report,
        error,
    }
}
