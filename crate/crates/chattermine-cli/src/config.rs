//! Pipeline configuration: one TOML file, per-command flag overrides.
//!
//! Relative paths resolve against the config file's directory, so a config
//! checked in next to its data keeps working from any working directory.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    /// Root seed; every stochastic stage derives its own salted seed.
    pub seed: u64,
    pub input: InputConfig,
    #[serde(default)]
    pub grammar: Option<GrammarConfig>,
    #[serde(default)]
    pub wordlists: Option<WordlistConfig>,
    #[serde(default)]
    pub lda: Option<LdaConfig>,
    #[serde(default)]
    pub classifier: Option<ClassifierConfig>,
    #[serde(default)]
    pub aggregate: Option<AggregateConfig>,
    #[serde(default)]
    pub events: Option<EventsConfig>,
    pub output: OutputConfig,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputConfig {
    pub posts: PathBuf,
    #[serde(default = "default_format")]
    pub format: String,
}

fn default_format() -> String {
    "jsonl".to_string()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrammarConfig {
    pub path: PathBuf,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WordlistConfig {
    pub dale: PathBuf,
    pub spache: PathBuf,
    pub stopwords: PathBuf,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LdaConfig {
    pub k_list: Vec<usize>,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default = "default_iterations")]
    pub iterations: usize,
    #[serde(default = "default_min_count")]
    pub min_count: usize,
    #[serde(default = "default_holdout_fraction")]
    pub holdout_fraction: f64,
    #[serde(default = "default_top_terms")]
    pub top_terms: usize,
}

fn default_beta() -> f64 {
    chattermine::topics::DEFAULT_BETA
}

fn default_iterations() -> usize {
    200
}

fn default_min_count() -> usize {
    50
}

fn default_holdout_fraction() -> f64 {
    0.2
}

fn default_top_terms() -> usize {
    10
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifierConfig {
    /// `train` fits the linear baseline on `labeled`; `import` joins
    /// `scores` onto posts by id.
    pub mode: String,
    #[serde(default)]
    pub labeled: Option<PathBuf>,
    #[serde(default)]
    pub scores: Option<PathBuf>,
    #[serde(default = "default_eval_fraction")]
    pub eval_fraction: f64,
    #[serde(default = "default_learning_rate")]
    pub learning_rate: f64,
    #[serde(default = "default_epochs")]
    pub epochs: usize,
    #[serde(default = "default_l2")]
    pub l2: f64,
    #[serde(default = "default_batch_size")]
    pub batch_size: usize,
}

fn default_eval_fraction() -> f64 {
    0.2
}

fn default_learning_rate() -> f64 {
    0.1
}

fn default_epochs() -> usize {
    30
}

fn default_l2() -> f64 {
    1e-4
}

fn default_batch_size() -> usize {
    16
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AggregateConfig {
    pub metrics: Vec<String>,
    #[serde(default)]
    pub regions: Vec<String>,
    #[serde(default)]
    pub zero_fill: bool,
    #[serde(default = "default_readability_mode")]
    pub readability_mode: String,
    #[serde(default = "default_half_window")]
    pub half_window: u32,
    #[serde(default)]
    pub rolling_window: Option<usize>,
    #[serde(default = "default_change_window")]
    pub change_window: usize,
    #[serde(default = "default_change_threshold")]
    pub change_threshold: f64,
}

fn default_readability_mode() -> String {
    "per_post".to_string()
}

fn default_half_window() -> u32 {
    30
}

fn default_change_window() -> usize {
    10
}

fn default_change_threshold() -> f64 {
    2.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventsConfig {
    pub path: PathBuf,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<PipelineConfig, CliError> {
        let raw = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
        let mut config: PipelineConfig = toml::from_str(&raw)
            .map_err(|e| CliError::config(format!("config {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        config.resolve_paths(base);
        Ok(config)
    }

    fn resolve_paths(&mut self, base: &Path) {
        let resolve = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        resolve(&mut self.input.posts);
        if let Some(g) = &mut self.grammar {
            resolve(&mut g.path);
        }
        if let Some(w) = &mut self.wordlists {
            resolve(&mut w.dale);
            resolve(&mut w.spache);
            resolve(&mut w.stopwords);
        }
        if let Some(c) = &mut self.classifier {
            if let Some(p) = &mut c.labeled {
                resolve(p);
            }
            if let Some(p) = &mut c.scores {
                resolve(p);
            }
        }
        if let Some(e) = &mut self.events {
            resolve(&mut e.path);
        }
        resolve(&mut self.output.dir);
    }

    /// Check that a configured path exists, naming the field on failure.
    pub fn require_file(field: &str, path: &Path) -> Result<(), CliError> {
        if path.is_file() {
            Ok(())
        } else {
            Err(CliError::config(format!(
                "{field}: file not found: {}",
                path.display()
            )))
        }
    }
}
