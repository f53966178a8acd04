//! Vocabulary construction: lemmatized, stopword-filtered terms above a
//! corpus-frequency threshold.

use std::collections::{BTreeMap, HashMap};

use super::lemma::lemmatize;
use super::TopicsError;
use crate::corpus::{normalize, PostCollection};
use crate::wordlist::WordList;

/// Dense term index over the modeling vocabulary.
#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    terms: Vec<String>,
    term_ids: HashMap<String, usize>,
    pub min_count: usize,
}

impl Vocabulary {
    pub fn from_terms(terms: Vec<String>, min_count: usize) -> Self {
        let term_ids = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Vocabulary {
            terms,
            term_ids,
            min_count,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(&self, id: usize) -> &str {
        &self.terms[id]
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn id(&self, term: &str) -> Option<usize> {
        self.term_ids.get(term).copied()
    }

    pub fn contains(&self, term: &str) -> bool {
        self.term_ids.contains_key(term)
    }
}

/// Normalize, lemmatize, and stopword-filter one text into candidate terms.
fn candidate_terms(text: &str, stopwords: &WordList) -> Vec<String> {
    normalize(text)
        .tokens
        .into_iter()
        .filter(|t| !stopwords.contains(t))
        .map(|t| lemmatize(&t))
        .filter(|l| !stopwords.contains(l))
        .collect()
}

/// Build the vocabulary from a corpus: terms occurring at least
/// `min_count` times, ids dense and lexicographically ordered.
pub fn build_vocabulary(
    posts: &PostCollection,
    stopwords: &WordList,
    min_count: usize,
) -> Result<Vocabulary, TopicsError> {
    let min_count = min_count.max(1);
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for post in posts.iter() {
        for term in candidate_terms(&post.text, stopwords) {
            *counts.entry(term).or_insert(0) += 1;
        }
    }
    let terms: Vec<String> = counts
        .into_iter()
        .filter(|(_, n)| *n >= min_count)
        .map(|(t, _)| t)
        .collect();
    if terms.is_empty() {
        return Err(TopicsError::EmptyVocabulary { min_count });
    }
    Ok(Vocabulary::from_terms(terms, min_count))
}

/// Term-id sequence of one text under a fixed vocabulary.
pub fn doc_term_ids(vocab: &Vocabulary, text: &str, stopwords: &WordList) -> Vec<usize> {
    candidate_terms(text, stopwords)
        .into_iter()
        .filter_map(|t| vocab.id(&t))
        .collect()
}

/// Convert posts to term-id documents, dropping those with no in-vocabulary
/// tokens. Returns the kept docs and the dropped-post count.
pub fn docs_from_posts(
    vocab: &Vocabulary,
    posts: &PostCollection,
    stopwords: &WordList,
) -> (Vec<Vec<usize>>, usize) {
    let mut docs = Vec::new();
    let mut dropped = 0;
    for post in posts.iter() {
        let ids = doc_term_ids(vocab, &post.text, stopwords);
        if ids.is_empty() {
            dropped += 1;
        } else {
            docs.push(ids);
        }
    }
    (docs, dropped)
}
