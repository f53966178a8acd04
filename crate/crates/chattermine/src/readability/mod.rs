//! Readability measures over raw counting units.
//!
//! [`text_counts`] turns a text into words, sentences, letters, syllables,
//! and list-based difficulty counts; the formula functions and
//! [`readability_report`] derive the nine scores from them.

mod counts;
mod formulas;

pub use counts::{text_counts, text_counts_with, ComplexWordRule, TextCounts};
pub use formulas::{
    ari_grade, automated_readability_index, coleman_liau, dale_chall, flesch_kincaid_grade,
    flesch_reading_ease, gunning_fog, linsear_write, linsear_write_from_counts,
    readability_report, report_from_counts, smog, spache, ReadabilityError, ReadabilityReport,
};
