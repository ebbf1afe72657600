//! Batch pipeline over [`centrakit`]: every stage persisted as flat CSV or
//! JSON for external plotting, single networks or whole corpora.

pub mod corpus;
pub mod format;
pub mod pipeline;

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};

use centrakit::surrogate::SurrogateEnsemble;

pub use corpus::{run_corpus, CorpusReport};
pub use pipeline::{load_graph, run_network, NetworkBundle, PipelineConfig};

/// Environment variable capping worker threads.
pub const THREADS_VAR: &str = "CENTRAKIT_THREADS";

/// Sizes the global worker pool from `CENTRAKIT_THREADS`, if set.
pub fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .with_context(|| format!("{THREADS_VAR}={raw:?} is not a thread count"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .context("configuring worker pool")?;
    Ok(())
}

/// Writes each member as an edge list plus `ensemble.json`
/// (`{kind, source, seeds, files}`) into `dir`.
pub fn write_ensemble(ens: &SurrogateEnsemble, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let width = ens.graphs.len().saturating_sub(1).to_string().len().max(3);
    let mut files = Vec::with_capacity(ens.graphs.len());
    for (k, g) in ens.graphs.iter().enumerate() {
        let name = format!("member_{k:0width$}.txt");
        fs::write(dir.join(&name), g.to_edge_list())?;
        files.push(name);
    }
    format::write_json(
        &dir.join("ensemble.json"),
        &serde_json::json!({
            "kind": ens.kind,
            "source": ens.source,
            "seeds": ens.seeds,
            "files": files,
        }),
    )
}
