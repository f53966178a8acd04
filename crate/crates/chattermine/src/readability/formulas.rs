//! The eight readability formulas.
//!
//! Scores are pure functions of [`TextCounts`]; the familiar-word lists
//! influence the counts, never the formulas. All scores are invariant
//! under exact k-fold replication of the counting units.

use serde::Serialize;

use super::counts::{text_counts_with, ComplexWordRule, TextCounts};
use crate::wordlist::WordList;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReadabilityError {
    #[error("readability needs at least one word")]
    NoWords,
    #[error("readability needs at least one sentence")]
    NoSentences,
}

fn need_words(c: &TextCounts) -> Result<(), ReadabilityError> {
    if c.words == 0 {
        Err(ReadabilityError::NoWords)
    } else {
        Ok(())
    }
}

fn need_sentences(c: &TextCounts) -> Result<(), ReadabilityError> {
    if c.sentences == 0 {
        Err(ReadabilityError::NoSentences)
    } else {
        Ok(())
    }
}

/// Flesch reading-ease: `206.835 − 1.015·W/S − 84.6·Syll/W`.
pub fn flesch_reading_ease(c: &TextCounts) -> Result<f64, ReadabilityError> {
    need_words(c)?;
    need_sentences(c)?;
    let w = c.words as f64;
    let s = c.sentences as f64;
    Ok(206.835 - 1.015 * (w / s) - 84.6 * (c.syllables as f64 / w))
}

/// Flesch-Kincaid grade: `0.39·W/S + 11.8·Syll/W − 15.59`.
pub fn flesch_kincaid_grade(c: &TextCounts) -> Result<f64, ReadabilityError> {
    need_words(c)?;
    need_sentences(c)?;
    let w = c.words as f64;
    let s = c.sentences as f64;
    Ok(0.39 * (w / s) + 11.8 * (c.syllables as f64 / w) - 15.59)
}

/// Coleman-Liau index: `5.88·L/W − 29.6·S/W − 15.8`.
pub fn coleman_liau(c: &TextCounts) -> Result<f64, ReadabilityError> {
    need_words(c)?;
    let w = c.words as f64;
    Ok(5.88 * (c.letters as f64 / w) - 29.6 * (c.sentences as f64 / w) - 15.8)
}

/// Automated readability index: `4.71·C/W + 0.5·W/S − 21.43`.
pub fn automated_readability_index(c: &TextCounts) -> Result<f64, ReadabilityError> {
    need_words(c)?;
    need_sentences(c)?;
    let w = c.words as f64;
    let s = c.sentences as f64;
    Ok(4.71 * (c.characters as f64 / w) + 0.5 * (w / s) - 21.43)
}

/// Grade estimate from ARI: the index rounded up to an integer.
pub fn ari_grade(c: &TextCounts) -> Result<i64, ReadabilityError> {
    Ok(automated_readability_index(c)?.ceil() as i64)
}

/// SMOG grade: `3.1291 + 1.0430·sqrt(Poly·30/S)`.
pub fn smog(c: &TextCounts) -> Result<f64, ReadabilityError> {
    need_sentences(c)?;
    let poly = c.polysyllables as f64;
    let s = c.sentences as f64;
    Ok(3.1291 + 1.0430 * (poly * 30.0 / s).sqrt())
}

/// Gunning Fog index: `0.4·(W/S + 100·Complex/W)`.
pub fn gunning_fog(c: &TextCounts) -> Result<f64, ReadabilityError> {
    need_words(c)?;
    need_sentences(c)?;
    let w = c.words as f64;
    let s = c.sentences as f64;
    Ok(0.4 * (w / s + 100.0 * c.complex_words as f64 / w))
}

/// Dale-Chall: `0.0496·W/S + 0.1579·D/W`, with `D/W` a plain ratio.
pub fn dale_chall(c: &TextCounts) -> Result<f64, ReadabilityError> {
    need_words(c)?;
    need_sentences(c)?;
    let w = c.words as f64;
    let s = c.sentences as f64;
    Ok(0.0496 * (w / s) + 0.1579 * (c.difficult_words as f64 / w))
}

/// Spache: `0.121·W/S + 0.082·(100·U/W) + 0.659` with U the distinct
/// unfamiliar words.
pub fn spache(c: &TextCounts) -> Result<f64, ReadabilityError> {
    need_words(c)?;
    need_sentences(c)?;
    let w = c.words as f64;
    let s = c.sentences as f64;
    Ok(0.121 * (w / s) + 0.082 * (100.0 * c.unfamiliar_unique as f64 / w) + 0.659)
}

/// Linsear Write from pre-computed counting units.
///
/// The provisional ratio is the point sum over sentences; the final score
/// halves it, subtracting one first when the ratio is 20 or below.
pub fn linsear_write_from_counts(c: &TextCounts) -> Result<f64, ReadabilityError> {
    need_words(c)?;
    need_sentences(c)?;
    let ratio = c.per_word_points as f64 / c.sentences as f64;
    Ok(if ratio > 20.0 { ratio / 2.0 } else { ratio / 2.0 - 1.0 })
}

/// Linsear Write straight from raw text.
pub fn linsear_write(text: &str) -> Result<f64, ReadabilityError> {
    let empty = WordList::default();
    let counts = text_counts_with(text, &empty, &empty, ComplexWordRule::default());
    linsear_write_from_counts(&counts)
}

/// All nine scores of the report (the Flesch pair counts as two).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReadabilityReport {
    pub fres: f64,
    pub fk_grade: f64,
    pub coleman_liau: f64,
    pub ari: f64,
    pub smog: f64,
    pub gunning_fog: f64,
    pub dale_chall: f64,
    pub spache: f64,
    pub linsear_write: f64,
}

impl ReadabilityReport {
    /// Scores in a fixed order: Coleman-Liau, Flesch-Kincaid, Dale-Chall,
    /// Gunning Fog, SMOG, Spache, Linsear Write, ARI, then reading ease.
    pub fn as_row(&self) -> [f64; 9] {
        [
            self.coleman_liau,
            self.fk_grade,
            self.dale_chall,
            self.gunning_fog,
            self.smog,
            self.spache,
            self.linsear_write,
            self.ari,
            self.fres,
        ]
    }

    pub const COLUMN_NAMES: [&'static str; 9] = [
        "coleman_liau",
        "flesch_kincaid",
        "dale_chall",
        "gunning_fog",
        "smog",
        "spache",
        "linsear_write",
        "ari",
        "fres",
    ];

    pub fn from_row(row: [f64; 9]) -> Self {
        ReadabilityReport {
            coleman_liau: row[0],
            fk_grade: row[1],
            dale_chall: row[2],
            gunning_fog: row[3],
            smog: row[4],
            spache: row[5],
            linsear_write: row[6],
            ari: row[7],
            fres: row[8],
        }
    }
}

/// Evaluate every score from pre-computed counts.
pub fn report_from_counts(c: &TextCounts) -> Result<ReadabilityReport, ReadabilityError> {
    Ok(ReadabilityReport {
        fres: flesch_reading_ease(c)?,
        fk_grade: flesch_kincaid_grade(c)?,
        coleman_liau: coleman_liau(c)?,
        ari: automated_readability_index(c)?,
        smog: smog(c)?,
        gunning_fog: gunning_fog(c)?,
        dale_chall: dale_chall(c)?,
        spache: spache(c)?,
        linsear_write: linsear_write_from_counts(c)?,
    })
}

/// Count a text once and evaluate all scores.
pub fn readability_report(
    text: &str,
    dale_list: &WordList,
    spache_list: &WordList,
) -> Result<ReadabilityReport, ReadabilityError> {
    report_from_counts(&super::counts::text_counts(text, dale_list, spache_list))
}
