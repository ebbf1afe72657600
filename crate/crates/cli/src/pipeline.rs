//! Single-network pipeline: ingest, preprocess, communities, centrality,
//! CMC, topology, surrogates and profiling, each persisted as flat files.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use centrakit::centrality::{self, CentralityConfig, CentralityProfile, Measure, ProfileOptions};
use centrakit::cmc::{self, CmcMatrix};
use centrakit::community::{self, Partition};
use centrakit::graph::parse_edge_list;
use centrakit::profiling::{self, ClusteringResult, RankProfile};
use centrakit::surrogate::{ensemble_difference, SurrogateEnsemble, SurrogateKind};
use centrakit::topology::{self, TopologySummary};
use centrakit::{seed, Graph};

use crate::format::{fmt_float, fmt_opt, write_csv, write_json};

/// Seed stage ids; a network's seed for a stage is
/// `seed::derive(master, network_index, stage)`.
pub mod stage {
    pub const CONSENSUS: u64 = 1;
    pub const SURROGATES: u64 = 2;
    pub const LAYOUT: u64 = 3;
    pub const SURROGATE_CONSENSUS: u64 = 4;
}

/// Measures left out of surrogate profiles; their cost is cubic per node.
pub const SURROGATE_SKIPPED: [Measure; 2] = [Measure::CBC, Measure::RWBC];

/// Descriptors left out of the corpus regression as nonlinear in the
/// others.
pub const REGRESSION_EXCLUDED: [&str; 2] = ["density", "diffusion_efficiency"];

pub const ARTIFACTS: [&str; 6] = [
    "centrality.csv",
    "cmc.csv",
    "topology.json",
    "clusters.json",
    "layout.csv",
    "surrogate_diffs.json",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub weighted: bool,
    pub measures: Vec<Measure>,
    pub skip_expensive: bool,
    /// Members per surrogate kind.
    pub surrogates: usize,
    pub seed: u64,
    pub louvain_runs: usize,
    pub tau: f64,
    pub k_max: usize,
    pub out: PathBuf,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            weighted: false,
            measures: Measure::ALL.to_vec(),
            skip_expensive: false,
            surrogates: 100,
            seed: 1,
            louvain_runs: 50,
            tau: 0.4,
            k_max: 50,
            out: PathBuf::from("centrakit-out"),
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.measures.is_empty() {
            bail!("no measures selected");
        }
        if !(self.tau > 0.0 && self.tau < 1.0) {
            bail!("tau must lie in (0, 1), got {}", self.tau);
        }
        if self.louvain_runs == 0 {
            bail!("louvain runs must be positive");
        }
        if self.k_max < 2 {
            bail!("kmax must be at least 2");
        }
        Ok(())
    }

    fn profile_options(&self) -> ProfileOptions {
        ProfileOptions {
            measures: self.measures.clone(),
            skip_expensive: self.skip_expensive,
        }
    }

    fn surrogate_measures(&self) -> Vec<Measure> {
        self.measures
            .iter()
            .copied()
            .filter(|m| !SURROGATE_SKIPPED.contains(m))
            .collect()
    }
}

/// Reads an edge list and keeps its largest connected component.
pub fn load_graph(path: &Path, weighted: bool) -> Result<(Graph, Preprocessing)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let raw = parse_edge_list(&text, weighted).with_context(|| format!("parsing {}", path.display()))?;
    let g = raw.largest_component();
    let info = Preprocessing {
        input_nodes: raw.node_count(),
        input_edges: raw.edge_count(),
        nodes: g.node_count(),
        edges: g.edge_count(),
    };
    if info.nodes < info.input_nodes {
        log::warn!(
            "{}: kept largest component, {} of {} nodes",
            path.display(),
            info.nodes,
            info.input_nodes
        );
    }
    Ok((g, info))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Preprocessing {
    pub input_nodes: usize,
    pub input_edges: usize,
    pub nodes: usize,
    pub edges: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageStatus {
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub network: String,
    pub input: String,
    pub seeds: BTreeMap<String, u64>,
    pub config: ManifestConfig,
    pub preprocessing: Preprocessing,
    pub artifacts: Vec<String>,
    pub stages: BTreeMap<String, StageStatus>,
    /// Measure name to the reason its column is empty.
    pub undefined_measures: BTreeMap<String, String>,
    pub complete: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestConfig {
    pub weighted: bool,
    pub measures: Vec<Measure>,
    pub skip_expensive: bool,
    pub surrogates: usize,
    pub louvain_runs: usize,
    pub tau: f64,
    pub k_max: usize,
}

impl Manifest {
    fn record<T>(&mut self, name: &str, result: Result<T>) -> Option<T> {
        match result {
            Ok(v) => {
                self.stages.insert(name.into(), StageStatus { status: "ok".into(), detail: None });
                Some(v)
            }
            Err(e) => {
                log::warn!("{}: stage {name} failed: {e:#}", self.network);
                self.stages.insert(
                    name.into(),
                    StageStatus {
                        status: "failed".into(),
                        detail: Some(format!("{e:#}")),
                    },
                );
                None
            }
        }
    }

    fn skip(&mut self, name: &str, why: &str) {
        self.stages.insert(
            name.into(),
            StageStatus {
                status: "skipped".into(),
                detail: Some(why.into()),
            },
        );
    }
}

/// Per-kind summary of a surrogate ensemble against the empirical network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurrogateSummary {
    pub count: usize,
    pub seeds: Vec<u64>,
    /// Ensemble mean of each descriptor (and `mean_cmc`).
    pub mean: BTreeMap<String, Option<f64>>,
    /// Empirical minus ensemble mean.
    pub difference: BTreeMap<String, Option<f64>>,
    /// Members with a defined value, per descriptor.
    pub defined_members: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurrogateReport {
    /// Measures used for every CMC in this report.
    pub measures: Vec<Measure>,
    pub empirical: BTreeMap<String, Option<f64>>,
    pub unconstrained: SurrogateSummary,
    pub constrained: SurrogateSummary,
}

/// Everything computed for one network.
#[derive(Debug, Clone)]
pub struct NetworkBundle {
    pub name: String,
    pub dir: PathBuf,
    pub graph: Graph,
    pub partition: Option<Partition>,
    pub profile: Option<CentralityProfile>,
    pub cmc: Option<CmcMatrix>,
    pub mean_cmc: Option<f64>,
    pub topology: Option<TopologySummary>,
    pub surrogates: Option<SurrogateReport>,
    pub clustering: Option<ClusteringResult>,
    pub manifest: Manifest,
}

/// Runs the pipeline on `path`, writing into `config.out`.
pub fn run_network(config: &PipelineConfig, path: &Path) -> Result<NetworkBundle> {
    run_network_into(config, path, 0, &config.out)
}

fn network_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "network".into())
}

/// Runs the pipeline for network number `index` of a run, writing into
/// `dir`. Fails without writing anything when the input cannot be read;
/// later stage failures are recorded in the manifest instead.
pub fn run_network_into(config: &PipelineConfig, path: &Path, index: u64, dir: &Path) -> Result<NetworkBundle> {
    config.validate()?;
    let (g, pre) = load_graph(path, config.weighted)?;
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;

    let master = config.seed;
    let seeds: BTreeMap<String, u64> = [
        ("master", master),
        ("consensus", seed::derive(master, index, stage::CONSENSUS)),
        ("surrogates", seed::derive(master, index, stage::SURROGATES)),
        ("layout", seed::derive(master, index, stage::LAYOUT)),
        ("surrogate_consensus", seed::derive(master, index, stage::SURROGATE_CONSENSUS)),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();

    let mut manifest = Manifest {
        tool: "centrakit".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        network: network_name(path),
        input: path.display().to_string(),
        seeds: seeds.clone(),
        config: ManifestConfig {
            weighted: config.weighted,
            measures: config.measures.clone(),
            skip_expensive: config.skip_expensive,
            surrogates: config.surrogates,
            louvain_runs: config.louvain_runs,
            tau: config.tau,
            k_max: config.k_max,
        },
        preprocessing: pre,
        artifacts: Vec::new(),
        stages: BTreeMap::new(),
        undefined_measures: BTreeMap::new(),
        complete: false,
    };
    manifest.record::<()>("ingest", Ok(()));
    let mut artifacts: Vec<String> = Vec::new();
    let mut put = |name: &str, r: Result<()>, m: &mut Manifest| {
        if m.record(&format!("write:{name}"), r).is_some() {
            artifacts.push(name.to_string());
        }
    };

    // communities
    let partition = manifest.record(
        "community",
        community::consensus_partition(&g, config.louvain_runs, config.tau, seeds["consensus"])
            .map_err(Into::into),
    );
    if let Some(p) = &partition {
        put("partition.json", write_json(&dir.join("partition.json"), &partition_json(&g, p)), &mut manifest);
    }
    let modules = partition.as_ref().map(|p| p.assignment.as_slice());

    // centrality
    let cfg = CentralityConfig::default();
    let profile = manifest.record(
        "centrality",
        centrality::compute_profile(&g, &cfg, modules, &config.profile_options()).map_err(Into::into),
    );
    if let Some(p) = &profile {
        for (k, m) in p.measures.iter().enumerate() {
            if let Some(note) = &p.notes[k] {
                manifest.undefined_measures.insert(m.name().into(), note.clone());
            }
        }
        put(
            "centrality.csv",
            fs::write(dir.join("centrality.csv"), p.to_csv(fmt_float)).map_err(Into::into),
            &mut manifest,
        );
    }

    // cmc
    let cmc_matrix = match &profile {
        Some(p) => manifest.record("cmc", Ok(cmc::cmc_matrix(p))),
        None => {
            manifest.skip("cmc", "no centrality profile");
            None
        }
    };
    let mean_cmc = cmc_matrix.as_ref().and_then(cmc::mean_within).map(|(m, _)| m);
    if let Some(c) = &cmc_matrix {
        put(
            "cmc.csv",
            fs::write(dir.join("cmc.csv"), c.to_csv(fmt_float)).map_err(Into::into),
            &mut manifest,
        );
    }

    // topology
    let topo = manifest.record(
        "topology",
        topology::summarize(&g, partition.as_ref().map(|p| p.q)).map_err(Into::into),
    );
    if let Some(t) = &topo {
        put("topology.json", write_json(&dir.join("topology.json"), t), &mut manifest);
    }

    // surrogates
    let surrogates = if config.surrogates == 0 {
        manifest.skip("surrogates", "surrogate count is zero");
        None
    } else {
        match (&profile, &topo) {
            (Some(p), Some(t)) => manifest.record(
                "surrogates",
                surrogate_report(&g, p, t, config, seeds["surrogates"], seeds["surrogate_consensus"]),
            ),
            _ => {
                manifest.skip("surrogates", "empirical profile or topology unavailable");
                None
            }
        }
    };
    let diffs = serde_json::to_value(&surrogates)?;
    put("surrogate_diffs.json", write_json(&dir.join("surrogate_diffs.json"), &diffs), &mut manifest);

    // profiling
    let ranked = match &profile {
        Some(p) => manifest.record("rank_profile", profiling::rank_normalize(p, &profiling::DEFAULT_EXCLUDE).map_err(Into::into)),
        None => {
            manifest.skip("rank_profile", "no centrality profile");
            None
        }
    };
    let clustering = match &ranked {
        Some(rp) => manifest.record("clustering", profiling::ward_cluster(rp, config.k_max).map_err(Into::into)),
        None => {
            manifest.skip("clustering", "no rank profile");
            None
        }
    };
    if let (Some(rp), Some(c)) = (&ranked, &clustering) {
        put("clusters.json", write_json(&dir.join("clusters.json"), &clusters_json(rp, c)), &mut manifest);
        put("dendrogram.json", write_json(&dir.join("dendrogram.json"), &dendrogram_json(rp, c)), &mut manifest);
        put("ranks.csv", write_ranks(&dir.join("ranks.csv"), rp, c), &mut manifest);
    }
    let coords = manifest.record("layout", Ok(profiling::layout(&g, seeds["layout"])));
    if let Some(xy) = &coords {
        let cluster = clustering
            .as_ref()
            .and_then(|c| c.selected_k.and_then(|k| c.labels(k)).map(<[usize]>::to_vec));
        put(
            "layout.csv",
            write_layout(&dir.join("layout.csv"), &g, xy, modules, cluster.as_deref()),
            &mut manifest,
        );
    }

    artifacts.sort();
    manifest.artifacts = artifacts;
    let stages_ok = manifest.stages.values().all(|s| s.status != "failed");
    manifest.complete = stages_ok && ARTIFACTS.iter().all(|a| manifest.artifacts.iter().any(|x| x == a));
    write_json(&dir.join("manifest.json"), &manifest)?;

    Ok(NetworkBundle {
        name: manifest.network.clone(),
        dir: dir.to_path_buf(),
        graph: g,
        partition,
        profile,
        cmc: cmc_matrix,
        mean_cmc,
        topology: topo,
        surrogates,
        clustering,
        manifest,
    })
}

pub fn partition_json(g: &Graph, p: &Partition) -> serde_json::Value {
    let mut v = p.to_json(g);
    v["module_count"] = p.module_count().into();
    v["iterations"] = p.iterations.into();
    v["seed"] = p.seed.into();
    v
}

/// Profile restricted to `measures`, in that order.
fn restrict(p: &CentralityProfile, measures: &[Measure]) -> CentralityProfile {
    let keep: Vec<usize> = measures.iter().filter_map(|&m| p.position(m)).collect();
    CentralityProfile {
        labels: p.labels.clone(),
        measures: keep.iter().map(|&k| p.measures[k]).collect(),
        weighted: p.weighted,
        scores: keep.iter().map(|&k| p.scores[k].clone()).collect(),
        defined: keep.iter().map(|&k| p.defined[k]).collect(),
        notes: keep.iter().map(|&k| p.notes[k].clone()).collect(),
    }
}

fn descriptors(t: &TopologySummary, mean_cmc: Option<f64>) -> BTreeMap<String, Option<f64>> {
    let mut out: BTreeMap<String, Option<f64>> =
        t.fields().into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    out.insert("mean_cmc".into(), mean_cmc);
    out
}

/// Descriptors of one surrogate: topology with consensus modularity and the
/// mean CMC over the surrogate measure set.
fn describe_member(g: &Graph, config: &PipelineConfig, measures: &[Measure], seed_value: u64) -> BTreeMap<String, Option<f64>> {
    let partition = community::consensus_partition(g, config.louvain_runs, config.tau, seed_value).ok();
    let t = topology::summarize(g, partition.as_ref().map(|p| p.q)).ok();
    let options = ProfileOptions {
        measures: measures.to_vec(),
        skip_expensive: false,
    };
    let modules = partition.as_ref().map(|p| p.assignment.as_slice());
    let mean = centrality::compute_profile(g, &CentralityConfig::default(), modules, &options)
        .ok()
        .and_then(|p| cmc::mean_within(&cmc::cmc_matrix(&p)))
        .map(|(m, _)| m);
    descriptors(&t.unwrap_or_default(), mean)
}

fn summarize_ensemble(
    ens: &SurrogateEnsemble,
    empirical: &BTreeMap<String, Option<f64>>,
    config: &PipelineConfig,
    measures: &[Measure],
    consensus_master: u64,
) -> Result<SurrogateSummary> {
    let kind_index = match ens.kind {
        SurrogateKind::Unconstrained => 0,
        SurrogateKind::Constrained => 1,
    };
    let members: Vec<BTreeMap<String, Option<f64>>> = ens
        .graphs
        .par_iter()
        .enumerate()
        .map(|(k, g)| describe_member(g, config, measures, seed::derive(consensus_master, kind_index, k as u64)))
        .collect();
    let mut mean = BTreeMap::new();
    let mut difference = BTreeMap::new();
    let mut defined_members = BTreeMap::new();
    for (name, emp) in empirical {
        let values: Vec<f64> = members.iter().filter_map(|m| m.get(name).copied().flatten()).collect();
        defined_members.insert(name.clone(), values.len());
        let avg = (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64);
        mean.insert(name.clone(), avg);
        let diff = match emp {
            Some(e) if !values.is_empty() => Some(ensemble_difference(*e, &values)?),
            _ => None,
        };
        difference.insert(name.clone(), diff);
    }
    Ok(SurrogateSummary {
        count: ens.graphs.len(),
        seeds: ens.seeds.clone(),
        mean,
        difference,
        defined_members,
    })
}

fn surrogate_report(
    g: &Graph,
    profile: &CentralityProfile,
    topo: &TopologySummary,
    config: &PipelineConfig,
    ensemble_seed: u64,
    consensus_seed: u64,
) -> Result<SurrogateReport> {
    let measures = config.surrogate_measures();
    if measures.is_empty() {
        bail!("no measures left for surrogate profiles");
    }
    let emp_mean = cmc::mean_within(&cmc::cmc_matrix(&restrict(profile, &measures))).map(|(m, _)| m);
    let empirical = descriptors(topo, emp_mean);
    let mut summaries = Vec::new();
    for kind in [SurrogateKind::Unconstrained, SurrogateKind::Constrained] {
        let ens = SurrogateEnsemble::generate(g, "empirical", kind, config.surrogates, ensemble_seed)
            .map_err(|e| anyhow!("{} surrogates: {e}", kind.name()))?;
        summaries.push(summarize_ensemble(&ens, &empirical, config, &measures, consensus_seed)?);
    }
    let constrained = summaries.pop().expect("two kinds");
    let unconstrained = summaries.pop().expect("two kinds");
    Ok(SurrogateReport {
        measures,
        empirical,
        unconstrained,
        constrained,
    })
}

pub fn clusters_json(rp: &RankProfile, c: &ClusteringResult) -> serde_json::Value {
    let selected: Option<BTreeMap<&str, usize>> = c.selected_k.and_then(|k| c.labels(k)).map(|l| {
        rp.labels.iter().map(String::as_str).zip(l.iter().copied()).collect()
    });
    serde_json::json!({
        "selected_k": c.selected_k,
        "db_curve": c.db_curve.iter().map(|&(k, v)| serde_json::json!({"k": k, "db": v})).collect::<Vec<_>>(),
        "labels": selected,
        "nodes": rp.labels,
        "cuts": c.labels_per_k,
    })
}

pub fn dendrogram_json(rp: &RankProfile, c: &ClusteringResult) -> serde_json::Value {
    serde_json::json!({
        "nodes": rp.labels,
        "measures": rp.measures,
        "excluded_measures": rp.excluded,
        "constant_measures": rp.constant,
        "merges": c.merges,
        "leaf_order": c.leaf_order(),
    })
}

/// Rank matrix ordered by dendrogram leaves, for heatmaps.
pub fn write_ranks(path: &Path, rp: &RankProfile, c: &ClusteringResult) -> Result<()> {
    let selected = c.selected_k.and_then(|k| c.labels(k));
    let mut header = vec!["node".to_string(), "cluster".to_string()];
    header.extend(rp.measures.iter().map(|m| m.name().to_string()));
    let rows: Vec<Vec<String>> = c
        .leaf_order()
        .into_iter()
        .map(|i| {
            let mut row = vec![
                rp.labels[i].clone(),
                selected.map(|l| l[i].to_string()).unwrap_or_default(),
            ];
            row.extend(rp.rows[i].iter().map(|&x| fmt_float(x)));
            row
        })
        .collect();
    write_csv(path, &header, &rows)
}

pub fn write_layout(
    path: &Path,
    g: &Graph,
    xy: &[(f64, f64)],
    modules: Option<&[usize]>,
    clusters: Option<&[usize]>,
) -> Result<()> {
    let header: Vec<String> = ["node", "x", "y", "module", "cluster"].map(String::from).to_vec();
    let rows: Vec<Vec<String>> = (0..g.node_count())
        .map(|i| {
            vec![
                g.label(i).to_string(),
                fmt_float(xy[i].0),
                fmt_float(xy[i].1),
                modules.map(|m| m[i].to_string()).unwrap_or_default(),
                clusters.map(|c| c[i].to_string()).unwrap_or_default(),
            ]
        })
        .collect();
    write_csv(path, &header, &rows)
}

/// Topology descriptors as `name -> formatted value` cells.
pub fn descriptor_cells(t: Option<&TopologySummary>) -> Vec<(String, String)> {
    let t = t.cloned().unwrap_or_default();
    t.fields().into_iter().map(|(k, v)| (k.to_string(), fmt_opt(v))).collect()
}
