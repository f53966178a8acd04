//! Grammar file format.
//!
//! Grammars are TOML documents with three sections (full reference with a
//! worked example in `docs/grammar_format.md`):
//!
//! ```toml
//! [lexicons]
//! symptoms = ["fever", "shortness of breath"]   # inline entries
//! body_parts = { file = "lexicons/body_parts.txt" }  # one entry per line
//!
//! [graphs.symptom]
//! states = ["s0", "s1"]
//! start = "s0"
//! accepting = ["s1"]
//! transitions = [["s0", "lex:symptoms", "s1"]]
//!
//! [[top_level]]
//! graph = "symptom"
//! category = "symptom"
//! ```
//!
//! `top_level` order matters: it breaks ties between equal-length matches.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use super::grammar::{Grammar, GrammarError, GraphSpec};

#[derive(Debug, Deserialize)]
struct GrammarDoc {
    #[serde(default)]
    lexicons: BTreeMap<String, LexiconSource>,
    #[serde(default)]
    graphs: BTreeMap<String, GraphDoc>,
    #[serde(default)]
    top_level: Vec<TopLevelDoc>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum LexiconSource {
    Inline(Vec<String>),
    File { file: String },
}

#[derive(Debug, Deserialize)]
struct GraphDoc {
    states: Vec<String>,
    start: String,
    accepting: Vec<String>,
    transitions: Vec<(String, String, String)>,
}

#[derive(Debug, Deserialize)]
struct TopLevelDoc {
    graph: String,
    category: String,
}

/// Parse and validate a grammar document.
///
/// `base_dir` resolves relative lexicon file references; pass `None` when
/// the document uses only inline lexicons.
pub fn parse_grammar(document: &str, base_dir: Option<&Path>) -> Result<Grammar, GrammarError> {
    let doc: GrammarDoc = toml::from_str(document)?;

    let mut lexicons = BTreeMap::new();
    for (name, source) in doc.lexicons {
        let entries = match source {
            LexiconSource::Inline(entries) => entries,
            LexiconSource::File { file } => {
                let dir = base_dir.ok_or_else(|| GrammarError::NoBaseDir {
                    lexicon: name.clone(),
                    path: file.clone(),
                })?;
                read_word_file(&dir.join(&file))?
            }
        };
        lexicons.insert(name, entries);
    }

    let graph_specs = doc
        .graphs
        .into_iter()
        .map(|(name, g)| GraphSpec {
            name,
            states: g.states,
            start: g.start,
            accepting: g.accepting,
            transitions: g.transitions,
        })
        .collect();

    let top_level = doc
        .top_level
        .into_iter()
        .map(|t| (t.graph, t.category))
        .collect();

    Grammar::build(graph_specs, lexicons, top_level)
}

/// Parse a grammar from a file; lexicon file references resolve relative to
/// the grammar file's directory.
pub fn parse_grammar_file(path: &Path) -> Result<Grammar, GrammarError> {
    let document = std::fs::read_to_string(path).map_err(|source| GrammarError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_grammar(&document, path.parent())
}

/// One entry per line; blank lines and `#` comments are ignored.
fn read_word_file(path: &Path) -> Result<Vec<String>, GrammarError> {
    let raw = std::fs::read_to_string(path).map_err(|source| GrammarError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(raw
        .lines()
        .map(|line| line.split('#').next().unwrap_or("").trim())
        .filter(|line| !line.is_empty())
        .map(String::from)
        .collect())
}
