//! Corpus analytics for geo-tagged social-media conversations.
//!
//! The library covers the full batch pipeline:
//!
//! * [`corpus`] — post ingestion, normalization, sentence/syllable counting,
//!   author-disjoint splits
//! * [`rtn`] — recursive-transition-network grammars for entity tagging
//!   (symptoms, infection reports, body/activity impacts)
//! * [`readability`] — the eight classic readability formulas
//! * [`topics`] — LDA via collapsed Gibbs sampling with held-out perplexity
//! * [`classify`] — pluggable 3-class post scoring (trainable linear
//!   baseline or imported probabilities) plus the evaluation suite
//! * [`aggregate`] — per-region daily trajectories, event windows, monthly
//!   summaries, change-point detection
//!
//! Per-post work (tagging, scoring, held-out evaluation) is data-parallel
//! via rayon when the `parallel` feature is enabled (the default); outputs
//! are bit-identical to the sequential build.

pub mod aggregate;
pub mod classify;
pub mod corpus;
pub mod exec;
pub mod readability;
pub mod rtn;
pub mod seeding;
pub mod topics;
pub mod wordlist;

pub use corpus::{NormalizedText, Platform, Post, PostCollection};
pub use rtn::{Grammar, TagCategory, TagSpan};
