//! Raw counting units consumed by every readability formula.

use serde::Serialize;

use crate::corpus::{count_syllables, normalize, split_sentences};
use crate::wordlist::WordList;

/// Which words count as "complex" for the Gunning Fog index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ComplexWordRule {
    /// Strictly more than three syllables (the default).
    #[default]
    MoreThanThree,
    /// Three syllables or more (the conventional variant).
    ThreeOrMore,
}

impl ComplexWordRule {
    fn is_complex(self, syllables: usize) -> bool {
        match self {
            ComplexWordRule::MoreThanThree => syllables > 3,
            ComplexWordRule::ThreeOrMore => syllables >= 3,
        }
    }
}

/// Counting units for one text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct TextCounts {
    pub words: usize,
    pub sentences: usize,
    /// Alphabetic characters across words.
    pub letters: usize,
    /// Alphanumeric characters across words.
    pub characters: usize,
    pub syllables: usize,
    /// Words of three or more syllables.
    pub polysyllables: usize,
    /// Words counted complex under the configured rule.
    pub complex_words: usize,
    /// Word occurrences missing from the familiar-word list.
    pub difficult_words: usize,
    /// Distinct words missing from the primary-age familiar list,
    /// each counted once.
    pub unfamiliar_unique: usize,
    /// Point sum: 1 per word of at most two syllables, 3 otherwise.
    pub per_word_points: usize,
}

/// Count a raw text against the familiar-word lists.
pub fn text_counts(text: &str, dale_list: &WordList, spache_list: &WordList) -> TextCounts {
    text_counts_with(text, dale_list, spache_list, ComplexWordRule::default())
}

pub fn text_counts_with(
    text: &str,
    dale_list: &WordList,
    spache_list: &WordList,
    complex_rule: ComplexWordRule,
) -> TextCounts {
    let tokens = normalize(text).tokens;
    let mut counts = TextCounts {
        words: tokens.len(),
        sentences: split_sentences(text).len(),
        ..TextCounts::default()
    };
    let mut unfamiliar = std::collections::HashSet::new();
    for token in &tokens {
        counts.letters += token.chars().filter(|c| c.is_alphabetic()).count();
        counts.characters += token.chars().filter(|c| c.is_alphanumeric()).count();
        // Normalized tokens are alphabetic, so the heuristic cannot fail.
        let syllables = count_syllables(token).unwrap_or(1);
        counts.syllables += syllables;
        if syllables >= 3 {
            counts.polysyllables += 1;
        }
        if complex_rule.is_complex(syllables) {
            counts.complex_words += 1;
        }
        if !dale_list.contains(token) {
            counts.difficult_words += 1;
        }
        if !spache_list.contains(token) && unfamiliar.insert(token.clone()) {
            counts.unfamiliar_unique += 1;
        }
        counts.per_word_points += if syllables <= 2 { 1 } else { 3 };
    }
    counts
}
