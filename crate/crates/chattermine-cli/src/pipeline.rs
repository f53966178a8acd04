//! Shared command context: validated config, loaded corpus, and lazy
//! accessors for the heavier resources (grammar, word lists, scorer).

use std::path::PathBuf;

use chattermine::aggregate::RegionFilter;
use chattermine::classify::{self, Hyper, LabelDistribution};
use chattermine::corpus::{self, InputFormat, PostCollection};
use chattermine::rtn::{parse_grammar_file, Grammar};
use chattermine::seeding::stage_seed;
use chattermine::wordlist::WordList;
use chrono::NaiveDate;

use crate::config::PipelineConfig;
use crate::CliError;

pub struct Context {
    pub config: PipelineConfig,
    pub posts: PostCollection,
    pub region_filter: RegionFilter,
    pub out_dir: PathBuf,
}

impl Context {
    /// Validate the config, load the corpus, and create the output dir.
    pub fn prepare(
        config: PipelineConfig,
        region_flags: &[String],
        from_date: Option<NaiveDate>,
        to_date: Option<NaiveDate>,
    ) -> Result<Context, CliError> {
        PipelineConfig::require_file("input.posts", &config.input.posts)?;
        let format: InputFormat = config.input.format.parse().map_err(CliError::Config)?;

        let outcome = corpus::load_posts(&config.input.posts, format)
            .map_err(|e| CliError::runtime(e.to_string()))?;
        if !outcome.skipped.is_empty() {
            log::warn!("skipped {} malformed post record(s)", outcome.skipped.len());
        }
        let posts = outcome.collection.filter_by_date(from_date, to_date);

        // Flags win over the config's aggregate.regions.
        let mut regions: Vec<String> = region_flags.to_vec();
        if regions.is_empty() {
            if let Some(agg) = &config.aggregate {
                regions = agg.regions.clone();
            }
        }
        let region_filter = if regions.is_empty() {
            RegionFilter::all()
        } else {
            RegionFilter::only(regions)
        };

        let out_dir = config.output.dir.clone();
        std::fs::create_dir_all(&out_dir)
            .map_err(|e| CliError::runtime(format!("cannot create {}: {e}", out_dir.display())))?;

        Ok(Context {
            config,
            posts,
            region_filter,
            out_dir,
        })
    }

    pub fn grammar(&self) -> Result<Grammar, CliError> {
        let grammar = self
            .config
            .grammar
            .as_ref()
            .ok_or_else(|| CliError::config("grammar.path: missing [grammar] section"))?;
        PipelineConfig::require_file("grammar.path", &grammar.path)?;
        parse_grammar_file(&grammar.path).map_err(|e| CliError::runtime(e.to_string()))
    }

    pub fn wordlists(&self) -> Result<(WordList, WordList, WordList), CliError> {
        let lists = self
            .config
            .wordlists
            .as_ref()
            .ok_or_else(|| CliError::config("wordlists: missing [wordlists] section"))?;
        PipelineConfig::require_file("wordlists.dale", &lists.dale)?;
        PipelineConfig::require_file("wordlists.spache", &lists.spache)?;
        PipelineConfig::require_file("wordlists.stopwords", &lists.stopwords)?;
        let load = |p: &std::path::Path| {
            WordList::load(p).map_err(|e| CliError::runtime(format!("{}: {e}", p.display())))
        };
        Ok((load(&lists.dale)?, load(&lists.spache)?, load(&lists.stopwords)?))
    }

    pub fn hyper(&self) -> Result<Hyper, CliError> {
        let c = self
            .config
            .classifier
            .as_ref()
            .ok_or_else(|| CliError::config("classifier: missing [classifier] section"))?;
        Ok(Hyper {
            learning_rate: c.learning_rate,
            epochs: c.epochs,
            l2: c.l2,
            batch_size: c.batch_size,
            seed: stage_seed(self.config.seed, "train", 0),
        })
    }

    /// Per-post label distributions in collection order, by the configured
    /// route (trained baseline or imported score file). Posts an import
    /// file does not cover are `None`.
    pub fn label_distributions(&self) -> Result<Vec<Option<LabelDistribution>>, CliError> {
        let c = self
            .config
            .classifier
            .as_ref()
            .ok_or_else(|| CliError::config("classifier: missing [classifier] section"))?;
        match c.mode.as_str() {
            "train" => {
                let labeled_path = c.labeled.as_ref().ok_or_else(|| {
                    CliError::config("classifier.labeled: required in train mode")
                })?;
                PipelineConfig::require_file("classifier.labeled", labeled_path)?;
                let (labeled, skipped) = classify::load_labeled(labeled_path)
                    .map_err(|e| CliError::runtime(e.to_string()))?;
                if skipped > 0 {
                    log::warn!("skipped {skipped} labeled record(s)");
                }
                let scorer = classify::train(&labeled, self.hyper()?)
                    .map_err(|e| CliError::runtime(e.to_string()))?;
                Ok(self
                    .posts
                    .iter()
                    .map(|p| Some(scorer.predict(&p.text)))
                    .collect())
            }
            "import" => {
                let scores_path = c.scores.as_ref().ok_or_else(|| {
                    CliError::config("classifier.scores: required in import mode")
                })?;
                PipelineConfig::require_file("classifier.scores", scores_path)?;
                let outcome = classify::import_scores(scores_path, &self.posts)
                    .map_err(|e| CliError::runtime(e.to_string()))?;
                if outcome.unknown_ids > 0 || outcome.malformed > 0 {
                    log::warn!(
                        "score import: {} unknown id(s), {} malformed row(s)",
                        outcome.unknown_ids,
                        outcome.malformed
                    );
                }
                let mut by_id: std::collections::HashMap<&str, LabelDistribution> = outcome
                    .scored
                    .iter()
                    .map(|s| (s.id.as_str(), s.dist))
                    .collect();
                Ok(self
                    .posts
                    .iter()
                    .map(|p| by_id.remove(p.id.as_str()))
                    .collect())
            }
            other => Err(CliError::config(format!(
                "classifier.mode: expected train or import, got {other:?}"
            ))),
        }
    }
}
