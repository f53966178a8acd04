//! Recursive-transition-network entity tagging.
//!
//! Declarative grammar files compile into networks of finite-state graphs
//! whose transitions consume literal tokens, lexicon phrases, or subgraph
//! yields. Tagging scans normalized token streams and emits flat,
//! non-overlapping spans for four categories: symptoms, infection reports,
//! body impacts, and activity impacts.

mod frequency;
mod grammar;
mod matcher;
mod parse;

pub use frequency::{frequency_table, symptom_frequency_table};
pub use grammar::{Grammar, GrammarError, Graph, GraphSpec, Label, Lexicon, TagCategory, TagSpan};
pub use matcher::{render_tagged, strip_tags, tag_collection, tag_post, TaggedPost};
pub use parse::{parse_grammar, parse_grammar_file};
