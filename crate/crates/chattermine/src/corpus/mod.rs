//! Post ingestion and text preparation.
//!
//! A [`Post`] is one social-media document (tweet or Reddit comment) with
//! region, timestamp, and author metadata. This module loads archives from
//! disk, normalizes raw text into token streams, splits sentences, counts
//! syllables, and produces author-disjoint train/hold-out splits.

mod load;
mod normalize;
mod sentences;
mod syllables;

pub use load::{load_posts, InputFormat, LoadOutcome, SkippedRecord};
pub use normalize::{normalize, NormalizedText};
pub use sentences::split_sentences;
pub use syllables::count_syllables;

use std::collections::BTreeSet;

use chrono::{DateTime, NaiveDate, Utc};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("duplicate post id {id:?} (line {line})")]
    DuplicateId { id: String, line: usize },
    #[error("hold-out fraction must be in (0, 1), got {0}")]
    InvalidFraction(f64),
    #[error("author split needs at least 2 distinct authors, found {0}")]
    TooFewAuthors(usize),
    #[error("syllable counting expects a non-empty alphabetic word, got {0:?}")]
    NonAlphabeticWord(String),
}

/// Source platform of a post.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Platform {
    Twitter,
    Reddit,
}

impl std::fmt::Display for Platform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Platform::Twitter => f.write_str("twitter"),
            Platform::Reddit => f.write_str("reddit"),
        }
    }
}

/// One social-media document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Post {
    pub id: String,
    pub author_id: String,
    pub timestamp: DateTime<Utc>,
    /// Region code (e.g. a two-letter US state) or `"unknown"`.
    pub region: String,
    pub platform: Platform,
    pub text: String,
}

impl Post {
    /// Calendar day of the post in UTC.
    pub fn date(&self) -> NaiveDate {
        self.timestamp.date_naive()
    }
}

/// An in-memory collection of posts with unique ids.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PostCollection {
    pub posts: Vec<Post>,
}

impl PostCollection {
    pub fn new(posts: Vec<Post>) -> Self {
        Self { posts }
    }

    pub fn len(&self) -> usize {
        self.posts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.posts.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Post> {
        self.posts.iter()
    }

    /// Distinct author ids in lexicographic order.
    pub fn authors(&self) -> Vec<&str> {
        let set: BTreeSet<&str> = self.posts.iter().map(|p| p.author_id.as_str()).collect();
        set.into_iter().collect()
    }

    /// Keep only posts whose UTC date falls inside `[from, to]`.
    /// `None` bounds are open.
    pub fn filter_by_date(&self, from: Option<NaiveDate>, to: Option<NaiveDate>) -> PostCollection {
        let posts = self
            .posts
            .iter()
            .filter(|p| {
                let d = p.date();
                from.is_none_or(|f| d >= f) && to.is_none_or(|t| d <= t)
            })
            .cloned()
            .collect();
        PostCollection { posts }
    }
}

/// Author-disjoint train/hold-out partition of a collection.
#[derive(Debug, Clone)]
pub struct CorpusSplit {
    pub train: PostCollection,
    pub holdout: PostCollection,
    pub seed: u64,
    pub holdout_fraction: f64,
}

/// Partition posts so that no author appears in both halves.
///
/// Distinct author ids are shuffled with a seeded generator; the first
/// `ceil(fraction * n_authors)` authors' posts become the hold-out.
/// Identical `(posts, fraction, seed)` always yields the identical split.
pub fn split_by_author(
    posts: &PostCollection,
    fraction: f64,
    seed: u64,
) -> Result<CorpusSplit, CorpusError> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(CorpusError::InvalidFraction(fraction));
    }
    let mut authors = posts.authors();
    if authors.len() < 2 {
        return Err(CorpusError::TooFewAuthors(authors.len()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    authors.shuffle(&mut rng);
    let n_holdout = (fraction * authors.len() as f64).ceil() as usize;
    let holdout_authors: BTreeSet<&str> = authors[..n_holdout].iter().copied().collect();

    let mut train = Vec::new();
    let mut holdout = Vec::new();
    for post in &posts.posts {
        if holdout_authors.contains(post.author_id.as_str()) {
            holdout.push(post.clone());
        } else {
            train.push(post.clone());
        }
    }
    Ok(CorpusSplit {
        train: PostCollection::new(train),
        holdout: PostCollection::new(holdout),
        seed,
        holdout_fraction: fraction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    fn post(id: &str, author: &str) -> Post {
        Post {
            id: id.to_string(),
            author_id: author.to_string(),
            timestamp: Utc.with_ymd_and_hms(2020, 3, 15, 12, 0, 0).unwrap(),
            region: "NY".to_string(),
            platform: Platform::Twitter,
            text: "hello".to_string(),
        }
    }

    fn corpus(n_posts: usize, n_authors: usize) -> PostCollection {
        let posts = (0..n_posts)
            .map(|i| post(&format!("p{i:03}"), &format!("a{:02}", i % n_authors)))
            .collect();
        PostCollection::new(posts)
    }

    #[test]
    fn split_respects_ceiling_and_disjointness() {
        let c = corpus(10, 10);
        let split = split_by_author(&c, 0.2, 7).unwrap();
        assert_eq!(split.holdout.authors().len(), 2);
        let train_authors: BTreeSet<_> = split.train.authors().into_iter().collect();
        let holdout_authors: BTreeSet<_> = split.holdout.authors().into_iter().collect();
        assert!(train_authors.is_disjoint(&holdout_authors));
    }

    #[test]
    fn split_is_deterministic() {
        let c = corpus(40, 10);
        let a = split_by_author(&c, 0.3, 99).unwrap();
        let b = split_by_author(&c, 0.3, 99).unwrap();
        assert_eq!(a.train.posts, b.train.posts);
        assert_eq!(a.holdout.posts, b.holdout.posts);
    }

    #[test]
    fn split_partitions_all_posts() {
        let c = corpus(100, 10);
        let split = split_by_author(&c, 0.25, 3).unwrap();
        assert_eq!(split.train.len() + split.holdout.len(), 100);
        // Multiset preservation: every id lands in exactly one half.
        let mut ids: Vec<&str> = split
            .train
            .iter()
            .chain(split.holdout.iter())
            .map(|p| p.id.as_str())
            .collect();
        ids.sort_unstable();
        let mut expected: Vec<&str> = c.iter().map(|p| p.id.as_str()).collect();
        expected.sort_unstable();
        assert_eq!(ids, expected);
    }

    #[test]
    fn split_rejects_single_author() {
        let c = corpus(5, 1);
        assert!(matches!(
            split_by_author(&c, 0.5, 0),
            Err(CorpusError::TooFewAuthors(1))
        ));
    }

    #[test]
    fn split_rejects_bad_fraction() {
        let c = corpus(4, 4);
        assert!(split_by_author(&c, 0.0, 0).is_err());
        assert!(split_by_author(&c, 1.0, 0).is_err());
    }

    #[test]
    fn date_filter_is_inclusive() {
        let mut c = corpus(3, 3);
        c.posts[0].timestamp = Utc.with_ymd_and_hms(2020, 1, 1, 0, 0, 0).unwrap();
        c.posts[1].timestamp = Utc.with_ymd_and_hms(2020, 6, 1, 0, 0, 0).unwrap();
        c.posts[2].timestamp = Utc.with_ymd_and_hms(2020, 9, 30, 23, 59, 59).unwrap();
        let from = NaiveDate::from_ymd_opt(2020, 1, 1).unwrap();
        let to = NaiveDate::from_ymd_opt(2020, 6, 1).unwrap();
        assert_eq!(c.filter_by_date(Some(from), Some(to)).len(), 2);
        assert_eq!(c.filter_by_date(None, None).len(), 3);
    }
}
