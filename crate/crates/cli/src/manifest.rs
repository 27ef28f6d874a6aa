use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::Context;
use mlzeros::solver::{SolveConfig, SolveStats};
use serde::Serialize;

/// Everything needed to rerun a command. Timestamps live only here so that
/// the other artifacts are byte-identical across reruns.
#[derive(Serialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    pub tool_version: &'static str,
    pub model_hash: Option<String>,
    pub seeds: BTreeMap<String, u64>,
    pub config: SolveConfig,
    pub started_unix: u64,
    pub wall_seconds: f64,
    pub stages: Vec<(String, f64)>,
    pub stats: Vec<(String, SolveStats)>,
    pub outputs: Vec<String>,
}

pub struct Recorder {
    manifest: RunManifest,
    start: Instant,
    out_dir: PathBuf,
}

impl Recorder {
    pub fn new(out_dir: &Path, config: &SolveConfig) -> anyhow::Result<Self> {
        std::fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
        let started_unix = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Ok(Self {
            manifest: RunManifest {
                command_line: std::env::args().collect(),
                tool_version: env!("CARGO_PKG_VERSION"),
                model_hash: None,
                seeds: BTreeMap::new(),
                config: config.clone(),
                started_unix,
                wall_seconds: 0.0,
                stages: Vec::new(),
                stats: Vec::new(),
                outputs: Vec::new(),
            },
            start: Instant::now(),
            out_dir: out_dir.to_path_buf(),
        })
    }

    pub fn model_hash(&mut self, hash: String) {
        self.manifest.model_hash = Some(hash);
    }

    pub fn seed(&mut self, name: &str, value: u64) {
        self.manifest.seeds.insert(name.to_string(), value);
    }

    pub fn stage<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        self.manifest.stages.push((name.to_string(), t.elapsed().as_secs_f64()));
        out
    }

    pub fn stats(&mut self, name: &str, stats: &SolveStats) {
        self.manifest.stats.push((name.to_string(), stats.clone()));
    }

    pub fn write(&mut self, name: &str, contents: &str) -> anyhow::Result<PathBuf> {
        let path = self.out_dir.join(name);
        std::fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        self.manifest.outputs.push(name.to_string());
        Ok(path)
    }

    pub fn finish(mut self) -> anyhow::Result<()> {
        self.manifest.wall_seconds = self.start.elapsed().as_secs_f64();
        let text = serde_json::to_string_pretty(&self.manifest)?;
        let path = self.out_dir.join("manifest.json");
        std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}
