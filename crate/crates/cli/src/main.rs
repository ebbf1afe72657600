use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};

use centrakit::centrality::{self, CentralityConfig, Measure, ProfileOptions};
use centrakit::community::{self, Partition};
use centrakit::surrogate::{SurrogateEnsemble, SurrogateKind};
use centrakit::{cmc, profiling, seed, topology, Graph};
use centrakit_cli::pipeline::{self, stage};
use centrakit_cli::{format, load_graph, run_corpus, run_network, write_ensemble, PipelineConfig};

#[derive(Parser, Debug)]
#[command(name = "centrakit", version, about = "Node centrality, topology and null-model analysis of undirected networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Score every node under the selected measures (centrality.csv).
    Centrality(Common),
    /// Global topology descriptors (topology.json).
    Topology(Common),
    /// Spearman correlations between measures (cmc.csv).
    Cmc(Common),
    /// Write unconstrained and constrained surrogate ensembles as edge lists.
    Surrogate(Common),
    /// Rank profiles, Ward clustering and layout coordinates.
    Profile(Common),
    /// Full single-network pipeline.
    Pipeline(Common),
    /// Pipeline over several networks plus corpus-level tables.
    Corpus(Common),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Edge list(s): `u v` or `u v w` per line, `#` comments.
    #[arg(long, short, required = true, num_args = 1..)]
    input: Vec<PathBuf>,

    /// Read the third column as edge weights.
    #[arg(long)]
    weighted: bool,

    /// Comma-separated measure names, or `all`.
    #[arg(long, default_value = "all", value_parser = parse_measures)]
    measures: MeasureList,

    /// Leave CBC and RWBC empty.
    #[arg(long)]
    skip_expensive: bool,

    /// Master seed; every stochastic stage derives its seed from it.
    #[arg(long, default_value_t = 1)]
    seed: u64,

    /// Surrogates per kind.
    #[arg(long, default_value_t = 100)]
    surrogates: usize,

    /// Consensus threshold.
    #[arg(long, default_value_t = 0.4)]
    tau: f64,

    /// Louvain runs per consensus iteration.
    #[arg(long, default_value_t = 50)]
    louvain_runs: usize,

    /// Largest number of clusters considered.
    #[arg(long, default_value_t = 50)]
    kmax: usize,

    /// Output directory; single-artifact commands print to stdout without it.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone)]
struct MeasureList(Vec<Measure>);

fn parse_measures(s: &str) -> std::result::Result<MeasureList, String> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(MeasureList(Measure::ALL.to_vec()));
    }
    let mut out = Vec::new();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        let m: Measure = part.parse().map_err(|e: centrakit::Error| e.to_string())?;
        if !out.contains(&m) {
            out.push(m);
        }
    }
    if out.is_empty() {
        return Err("no measures given".into());
    }
    Ok(MeasureList(out))
}

impl Common {
    fn config(&self) -> PipelineConfig {
        PipelineConfig {
            weighted: self.weighted,
            measures: self.measures.0.clone(),
            skip_expensive: self.skip_expensive,
            surrogates: self.surrogates,
            seed: self.seed,
            louvain_runs: self.louvain_runs,
            tau: self.tau,
            k_max: self.kmax,
            out: self.out.clone().unwrap_or_else(|| PipelineConfig::default().out),
        }
    }

    fn single_input(&self) -> Result<&Path> {
        match self.input.as_slice() {
            [p] => Ok(p),
            _ => bail!("this command takes exactly one --input"),
        }
    }

    fn graph(&self) -> Result<Graph> {
        Ok(load_graph(self.single_input()?, self.weighted)?.0)
    }

    fn partition(&self, g: &Graph) -> Result<Partition> {
        let s = seed::derive(self.seed, 0, stage::CONSENSUS);
        Ok(community::consensus_partition(g, self.louvain_runs, self.tau, s)?)
    }

    fn profile(&self, g: &Graph) -> Result<centrality::CentralityProfile> {
        let partition = if self.measures.0.contains(&Measure::PC) {
            Some(self.partition(g)?)
        } else {
            None
        };
        let options = ProfileOptions {
            measures: self.measures.0.clone(),
            skip_expensive: self.skip_expensive,
        };
        Ok(centrality::compute_profile(
            g,
            &CentralityConfig::default(),
            partition.as_ref().map(|p| p.assignment.as_slice()),
            &options,
        )?)
    }

    /// Writes `text` to `out/name`, or stdout without `--out`.
    fn emit(&self, name: &str, text: &str) -> Result<()> {
        match &self.out {
            Some(dir) => {
                fs::create_dir_all(dir)?;
                fs::write(dir.join(name), text)?;
                log::info!("wrote {}", dir.join(name).display());
            }
            None => std::io::stdout().lock().write_all(text.as_bytes())?,
        }
        Ok(())
    }

    fn out_dir(&self) -> PathBuf {
        self.config().out
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Centrality(c) => {
            let p = c.profile(&c.graph()?)?;
            c.emit("centrality.csv", &p.to_csv(format::fmt_float))
        }
        Command::Topology(c) => {
            let g = c.graph()?;
            let q = c.partition(&g)?.q;
            let t = topology::summarize(&g, Some(q))?;
            c.emit("topology.json", &format::to_json_text(&t)?)
        }
        Command::Cmc(c) => {
            let p = c.profile(&c.graph()?)?;
            c.emit("cmc.csv", &cmc::cmc_matrix(&p).to_csv(format::fmt_float))
        }
        Command::Surrogate(c) => {
            let g = c.graph()?;
            let master = seed::derive(c.seed, 0, stage::SURROGATES);
            let source = c.single_input()?.display().to_string();
            let out = c.out_dir();
            for kind in [SurrogateKind::Unconstrained, SurrogateKind::Constrained] {
                let ens = SurrogateEnsemble::generate(&g, source.clone(), kind, c.surrogates, master)?;
                write_ensemble(&ens, &out.join(kind.name()))?;
            }
            Ok(())
        }
        Command::Profile(c) => {
            let g = c.graph()?;
            let partition = c.partition(&g)?;
            let p = c.profile(&g)?;
            let rp = profiling::rank_normalize(&p, &profiling::DEFAULT_EXCLUDE)?;
            let res = profiling::ward_cluster(&rp, c.kmax)?;
            let xy = profiling::layout(&g, seed::derive(c.seed, 0, stage::LAYOUT));
            let out = c.out_dir();
            fs::create_dir_all(&out)?;
            format::write_json(&out.join("clusters.json"), &pipeline::clusters_json(&rp, &res))?;
            format::write_json(&out.join("dendrogram.json"), &pipeline::dendrogram_json(&rp, &res))?;
            pipeline::write_ranks(&out.join("ranks.csv"), &rp, &res)?;
            let selected = res.selected_k.and_then(|k| res.labels(k));
            pipeline::write_layout(&out.join("layout.csv"), &g, &xy, Some(&partition.assignment), selected)
        }
        Command::Pipeline(c) => {
            let b = run_network(&c.config(), c.single_input()?)?;
            if !b.manifest.complete {
                log::warn!("pipeline finished with failed stages; see {}", b.dir.join("manifest.json").display());
            }
            Ok(())
        }
        Command::Corpus(c) => {
            let report = run_corpus(&c.config(), &c.input)?;
            log::info!(
                "{} networks processed, {} failed",
                report.networks.len(),
                report.failures.len()
            );
            if report.networks.is_empty() {
                bail!("every network failed");
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = centrakit_cli::configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
