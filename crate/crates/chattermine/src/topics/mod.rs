//! Topic discovery: LDA fitted by collapsed Gibbs sampling, evaluated by
//! held-out perplexity, swept over candidate topic counts.

mod gibbs;
mod lemma;
mod model;
mod vocab;

pub use gibbs::{fold_in_doc, GibbsState, ScriptedUnits, UnitSource};
pub use lemma::lemmatize;
pub use model::{
    default_alpha, fit_lda, fold_in, perplexity, top_terms, LdaModel, DEFAULT_BETA,
};
pub use vocab::{build_vocabulary, doc_term_ids, docs_from_posts, Vocabulary};

use thiserror::Error;

use crate::corpus::CorpusSplit;
use crate::seeding::stage_seed;
use crate::wordlist::WordList;

#[derive(Debug, Error)]
pub enum TopicsError {
    #[error("vocabulary is empty at min_count {min_count}")]
    EmptyVocabulary { min_count: usize },
    #[error("no documents to fit (all posts had zero in-vocabulary tokens?)")]
    EmptyDocs,
    #[error("topic count must be at least 1")]
    ZeroTopics,
    #[error("k = {k} exceeds the {distinct_terms} distinct terms in the documents")]
    TooManyTopics { k: usize, distinct_terms: usize },
    #[error("held-out document has zero in-vocabulary tokens; exclude it upstream")]
    EmptyHeldoutDoc,
    #[error("held-out set is empty")]
    EmptyHoldout,
    #[error("topic {topic} out of range for a {k}-topic model")]
    TopicOutOfRange { topic: usize, k: usize },
    #[error("model io failed for {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("model file line {line}: {message}")]
    ModelFormat { line: usize, message: String },
}

/// Settings for a topic-count sweep.
#[derive(Debug, Clone)]
pub struct SweepSettings {
    /// Override for the document-topic concentration; `None` uses `50/k`.
    pub alpha: Option<f64>,
    pub beta: f64,
    pub iterations: usize,
    pub min_count: usize,
    pub seed: u64,
}

/// Output of [`sweep_topics`]: the perplexity curve plus the artifacts of
/// the best-scoring topic count.
#[derive(Debug)]
pub struct SweepOutcome {
    /// `(k, held-out perplexity)` rows in the requested order.
    pub rows: Vec<(usize, f64)>,
    /// Model with the lowest perplexity (first such k on ties).
    pub best: LdaModel,
    pub vocabulary: Vocabulary,
    pub dropped_train: usize,
    pub dropped_holdout: usize,
}

/// Fit each candidate topic count on the train half of an author-disjoint
/// split and evaluate held-out perplexity on the other half.
///
/// The vocabulary is built from the train posts only; held-out documents
/// with no in-vocabulary tokens are dropped (counted in the outcome).
pub fn sweep_topics(
    split: &CorpusSplit,
    stopwords: &WordList,
    k_list: &[usize],
    settings: &SweepSettings,
) -> Result<SweepOutcome, TopicsError> {
    let vocabulary = build_vocabulary(&split.train, stopwords, settings.min_count)?;
    let (train_docs, dropped_train) = docs_from_posts(&vocabulary, &split.train, stopwords);
    let (holdout_docs, dropped_holdout) = docs_from_posts(&vocabulary, &split.holdout, stopwords);
    if train_docs.is_empty() {
        return Err(TopicsError::EmptyDocs);
    }
    if holdout_docs.is_empty() {
        return Err(TopicsError::EmptyHoldout);
    }

    let mut rows = Vec::with_capacity(k_list.len());
    let mut best: Option<(f64, LdaModel)> = None;
    for &k in k_list {
        let alpha = settings.alpha.unwrap_or_else(|| default_alpha(k.max(1)));
        let model = fit_lda(
            &train_docs,
            vocabulary.clone(),
            k,
            alpha,
            settings.beta,
            settings.iterations,
            stage_seed(settings.seed, "lda", k as u64),
        )?;
        let score = perplexity(&model, &holdout_docs)?;
        rows.push((k, score));
        if best.as_ref().is_none_or(|(s, _)| score < *s) {
            best = Some((score, model));
        }
    }
    let (_, best) = best.expect("k_list validated non-empty by fit_lda loop");
    Ok(SweepOutcome {
        rows,
        best,
        vocabulary,
        dropped_train,
        dropped_holdout,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{split_by_author, Platform, Post, PostCollection};
    use chrono::TimeZone;

    fn word_corpus() -> PostCollection {
        // 12 authors; half of the posts talk about masks, half about tests.
        let texts = [
            "mask mask mandate mandate store",
            "test test result result lab",
            "mask store mandate mask mask",
            "lab test result test test",
            "mandate mask mask store store",
            "result lab lab test result",
            "mask mandate store mask mandate",
            "test lab result result lab",
            "store mask mask mandate mask",
            "lab result test test lab",
            "mask store store mandate mask",
            "test result lab result test",
        ];
        let posts = texts
            .iter()
            .enumerate()
            .map(|(i, t)| Post {
                id: format!("p{i}"),
                author_id: format!("a{i}"),
                timestamp: chrono::Utc.with_ymd_and_hms(2020, 6, 1, 0, 0, 0).unwrap(),
                region: "CA".to_string(),
                platform: Platform::Twitter,
                text: t.to_string(),
            })
            .collect();
        PostCollection::new(posts)
    }

    #[test]
    fn single_k_sweep_has_one_row() {
        let split = split_by_author(&word_corpus(), 0.25, 3).unwrap();
        let settings = SweepSettings {
            alpha: None,
            beta: 0.01,
            iterations: 20,
            min_count: 1,
            seed: 42,
        };
        let out = sweep_topics(&split, &WordList::default(), &[1], &settings).unwrap();
        assert_eq!(out.rows.len(), 1);
        assert_eq!(out.rows[0].0, 1);
        assert!(out.rows[0].1 > 0.0);
        assert_eq!(out.best.k, 1);
    }

    #[test]
    fn sweep_is_deterministic() {
        let split = split_by_author(&word_corpus(), 0.25, 3).unwrap();
        let settings = SweepSettings {
            alpha: None,
            beta: 0.01,
            iterations: 30,
            min_count: 1,
            seed: 7,
        };
        let a = sweep_topics(&split, &WordList::default(), &[1, 2, 3], &settings).unwrap();
        let b = sweep_topics(&split, &WordList::default(), &[1, 2, 3], &settings).unwrap();
        assert_eq!(a.rows, b.rows);
        assert_eq!(a.best.phi, b.best.phi);
    }
}
