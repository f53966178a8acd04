//! Recursive-transition-network grammars: types and validation.
//!
//! A grammar is a set of named graphs whose transitions consume a literal
//! token, any phrase from a lexicon class, or the yield of another graph
//! (a subgraph call, possibly recursive). Validation guarantees the
//! matcher terminates: no top-level graph accepts the empty sequence, and
//! every cycle — within a graph or through calls — consumes at least one
//! token.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GrammarError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("grammar file is not valid TOML: {0}")]
    Syntax(#[from] toml::de::Error),
    #[error("unknown graph: {0}")]
    UnknownGraph(String),
    #[error("unknown lexicon: {0}")]
    UnknownLexicon(String),
    #[error("unknown state {state:?} in graph {graph:?}")]
    UnknownState { graph: String, state: String },
    #[error("graph {graph:?}: transition label {label:?} must start with lit:, lex:, or call:")]
    BadLabel { graph: String, label: String },
    #[error("unknown tag category {0:?} (expected symptom, covid_report, impact_body, or impact_activity)")]
    UnknownCategory(String),
    #[error("graph {0:?} has no accepting states")]
    NoAcceptingStates(String),
    #[error("duplicate graph name {0:?}")]
    DuplicateGraph(String),
    #[error("lexicon {lexicon:?}: entry {entry:?} normalizes to no tokens")]
    EmptyLexiconEntry { lexicon: String, entry: String },
    #[error("top-level graph {0:?} accepts the empty token sequence")]
    EmptyMatchTopLevel(String),
    #[error("token-free cycle through {0:?}: matching could loop without consuming input")]
    TokenFreeCycle(String),
    #[error("grammar declares no top_level graphs")]
    NoTopLevel,
    #[error("lexicon {lexicon:?} references file {path:?} but the grammar was parsed without a base directory")]
    NoBaseDir { lexicon: String, path: String },
}

/// The four tag categories emitted by the shipped grammars.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TagCategory {
    Symptom,
    CovidReport,
    ImpactBody,
    ImpactActivity,
}

impl TagCategory {
    pub fn parse(s: &str) -> Result<Self, GrammarError> {
        match s {
            "symptom" => Ok(TagCategory::Symptom),
            "covid_report" => Ok(TagCategory::CovidReport),
            "impact_body" => Ok(TagCategory::ImpactBody),
            "impact_activity" => Ok(TagCategory::ImpactActivity),
            other => Err(GrammarError::UnknownCategory(other.to_string())),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            TagCategory::Symptom => "symptom",
            TagCategory::CovidReport => "covid_report",
            TagCategory::ImpactBody => "impact_body",
            TagCategory::ImpactActivity => "impact_activity",
        }
    }
}

impl std::fmt::Display for TagCategory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A tagged token range, half-open over token indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TagSpan {
    pub category: TagCategory,
    pub token_start: usize,
    pub token_end: usize,
    /// Matched tokens joined with single spaces.
    pub surface: String,
}

/// Transition label with references resolved to indices.
#[derive(Debug, Clone, PartialEq)]
pub enum Label {
    /// Consume exactly this token.
    Literal(String),
    /// Consume any phrase of the lexicon (index into `Grammar::lexicons`).
    LexClass(usize),
    /// Consume whatever the called graph accepts (index into `Grammar::graphs`).
    Call(usize),
}

/// One finite-state graph of the network.
#[derive(Debug, Clone)]
pub struct Graph {
    pub name: String,
    pub n_states: usize,
    pub start: usize,
    pub accepting: BTreeSet<usize>,
    /// Outgoing transitions per state.
    pub outgoing: Vec<Vec<(Label, usize)>>,
}

/// A named set of phrases; multi-word entries match contiguous token runs.
#[derive(Debug, Clone)]
pub struct Lexicon {
    pub name: String,
    /// Normalized phrases, each a non-empty token sequence.
    pub phrases: Vec<Vec<String>>,
}

impl Lexicon {
    /// Lengths of phrases matching `tokens[pos..]` as a prefix, ascending
    /// and deduplicated.
    pub fn match_lengths(&self, tokens: &[&str], pos: usize) -> Vec<usize> {
        let mut lengths = BTreeSet::new();
        'phrase: for phrase in &self.phrases {
            if pos + phrase.len() > tokens.len() {
                continue;
            }
            for (k, word) in phrase.iter().enumerate() {
                if tokens[pos + k] != word {
                    continue 'phrase;
                }
            }
            lengths.insert(phrase.len());
        }
        lengths.into_iter().collect()
    }
}

/// A compiled, validated recursive transition network.
#[derive(Debug, Clone)]
pub struct Grammar {
    pub graphs: Vec<Graph>,
    pub lexicons: Vec<Lexicon>,
    /// Ordered (graph index, category) pairs; order breaks match-length ties.
    pub top_level: Vec<(usize, TagCategory)>,
    graph_names: HashMap<String, usize>,
}

/// Unresolved inputs for building a [`Grammar`] programmatically.
#[derive(Debug, Clone)]
pub struct GraphSpec {
    pub name: String,
    pub states: Vec<String>,
    pub start: String,
    pub accepting: Vec<String>,
    /// `(from_state, label, to_state)` with labels `lit:…`, `lex:…`, `call:…`.
    pub transitions: Vec<(String, String, String)>,
}

impl Grammar {
    /// Resolve names, compile, and validate a grammar.
    ///
    /// `lexicons` maps a lexicon name to its raw entries; entries are
    /// normalized with [`crate::corpus::normalize`], so `"Shortness of
    /// breath"` becomes the token phrase `shortness of breath`.
    pub fn build(
        graph_specs: Vec<GraphSpec>,
        lexicons: BTreeMap<String, Vec<String>>,
        top_level: Vec<(String, String)>,
    ) -> Result<Grammar, GrammarError> {
        let mut lexicon_names = HashMap::new();
        let mut compiled_lexicons = Vec::new();
        for (name, entries) in lexicons {
            let mut phrases = Vec::new();
            for entry in entries {
                let norm = crate::corpus::normalize(&entry);
                if norm.is_empty() {
                    return Err(GrammarError::EmptyLexiconEntry {
                        lexicon: name.clone(),
                        entry,
                    });
                }
                phrases.push(norm.tokens);
            }
            lexicon_names.insert(name.clone(), compiled_lexicons.len());
            compiled_lexicons.push(Lexicon { name, phrases });
        }

        let mut graph_names = HashMap::new();
        for (idx, spec) in graph_specs.iter().enumerate() {
            if graph_names.insert(spec.name.clone(), idx).is_some() {
                return Err(GrammarError::DuplicateGraph(spec.name.clone()));
            }
        }

        let mut graphs = Vec::new();
        for spec in &graph_specs {
            graphs.push(compile_graph(spec, &graph_names, &lexicon_names)?);
        }

        if top_level.is_empty() {
            return Err(GrammarError::NoTopLevel);
        }
        let mut resolved_top = Vec::new();
        for (graph_name, category) in top_level {
            let idx = *graph_names
                .get(&graph_name)
                .ok_or(GrammarError::UnknownGraph(graph_name))?;
            resolved_top.push((idx, TagCategory::parse(&category)?));
        }

        let grammar = Grammar {
            graphs,
            lexicons: compiled_lexicons,
            top_level: resolved_top,
            graph_names,
        };
        grammar.validate()?;
        Ok(grammar)
    }

    pub fn graph_index(&self, name: &str) -> Option<usize> {
        self.graph_names.get(name).copied()
    }

    /// Whether each graph can accept the empty token sequence.
    ///
    /// Fixpoint over subgraph calls: a call edge is zero-consuming exactly
    /// when its target is itself nullable.
    fn nullability(&self) -> Vec<bool> {
        let mut nullable = vec![false; self.graphs.len()];
        loop {
            let mut changed = false;
            for (gi, graph) in self.graphs.iter().enumerate() {
                if nullable[gi] {
                    continue;
                }
                let closure = eps_closure(graph, &nullable);
                if closure.iter().any(|s| graph.accepting.contains(s)) {
                    nullable[gi] = true;
                    changed = true;
                }
            }
            if !changed {
                return nullable;
            }
        }
    }

    fn validate(&self) -> Result<(), GrammarError> {
        let nullable = self.nullability();

        for &(gi, _) in &self.top_level {
            if nullable[gi] {
                return Err(GrammarError::EmptyMatchTopLevel(self.graphs[gi].name.clone()));
            }
        }

        // Intra-graph cycles of zero-consuming edges.
        for graph in &self.graphs {
            if has_eps_cycle(graph, &nullable) {
                return Err(GrammarError::TokenFreeCycle(graph.name.clone()));
            }
        }

        // Call cycles reachable without consuming: graph g relates to h when
        // a call edge to h sits in the zero-consumption closure of g's start.
        let mut calls_at_entry: Vec<BTreeSet<usize>> = Vec::new();
        for graph in &self.graphs {
            let closure = eps_closure(graph, &nullable);
            let mut targets = BTreeSet::new();
            for &s in &closure {
                for (label, _) in &graph.outgoing[s] {
                    if let Label::Call(h) = label {
                        targets.insert(*h);
                    }
                }
            }
            calls_at_entry.push(targets);
        }
        if let Some(gi) = find_cycle(&calls_at_entry) {
            return Err(GrammarError::TokenFreeCycle(self.graphs[gi].name.clone()));
        }
        Ok(())
    }
}

fn compile_graph(
    spec: &GraphSpec,
    graph_names: &HashMap<String, usize>,
    lexicon_names: &HashMap<String, usize>,
) -> Result<Graph, GrammarError> {
    let mut state_ids = HashMap::new();
    for (i, s) in spec.states.iter().enumerate() {
        state_ids.insert(s.as_str(), i);
    }
    let state = |name: &str| -> Result<usize, GrammarError> {
        state_ids
            .get(name)
            .copied()
            .ok_or_else(|| GrammarError::UnknownState {
                graph: spec.name.clone(),
                state: name.to_string(),
            })
    };

    let start = state(&spec.start)?;
    let mut accepting = BTreeSet::new();
    for s in &spec.accepting {
        accepting.insert(state(s)?);
    }
    if accepting.is_empty() {
        return Err(GrammarError::NoAcceptingStates(spec.name.clone()));
    }

    let mut outgoing = vec![Vec::new(); spec.states.len()];
    for (from, label, to) in &spec.transitions {
        let from = state(from)?;
        let to = state(to)?;
        let label = if let Some(word) = label.strip_prefix("lit:") {
            Label::Literal(word.trim().to_lowercase())
        } else if let Some(lex) = label.strip_prefix("lex:") {
            let idx = lexicon_names
                .get(lex.trim())
                .copied()
                .ok_or_else(|| GrammarError::UnknownLexicon(lex.trim().to_string()))?;
            Label::LexClass(idx)
        } else if let Some(graph) = label.strip_prefix("call:") {
            let idx = graph_names
                .get(graph.trim())
                .copied()
                .ok_or_else(|| GrammarError::UnknownGraph(graph.trim().to_string()))?;
            Label::Call(idx)
        } else {
            return Err(GrammarError::BadLabel {
                graph: spec.name.clone(),
                label: label.clone(),
            });
        };
        outgoing[from].push((label, to));
    }

    Ok(Graph {
        name: spec.name.clone(),
        n_states: spec.states.len(),
        start,
        accepting,
        outgoing,
    })
}

/// States reachable from the start without consuming a token, given current
/// graph nullability.
fn eps_closure(graph: &Graph, nullable: &[bool]) -> BTreeSet<usize> {
    let mut closure = BTreeSet::new();
    let mut stack = vec![graph.start];
    while let Some(s) = stack.pop() {
        if !closure.insert(s) {
            continue;
        }
        for (label, to) in &graph.outgoing[s] {
            if let Label::Call(h) = label {
                if nullable[*h] {
                    stack.push(*to);
                }
            }
        }
    }
    closure
}

/// Detect a cycle among zero-consuming edges inside one graph.
fn has_eps_cycle(graph: &Graph, nullable: &[bool]) -> bool {
    let mut adjacency: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); graph.n_states];
    for (s, edges) in graph.outgoing.iter().enumerate() {
        for (label, to) in edges {
            if let Label::Call(h) = label {
                if nullable[*h] {
                    adjacency[s].insert(*to);
                }
            }
        }
    }
    find_cycle(&adjacency).is_some()
}

/// Return any node on a directed cycle, if one exists.
fn find_cycle(adjacency: &[BTreeSet<usize>]) -> Option<usize> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        White,
        Gray,
        Black,
    }
    fn visit(n: usize, adjacency: &[BTreeSet<usize>], marks: &mut [Mark]) -> Option<usize> {
        marks[n] = Mark::Gray;
        for &next in &adjacency[n] {
            match marks[next] {
                Mark::Gray => return Some(next),
                Mark::White => {
                    if let Some(c) = visit(next, adjacency, marks) {
                        return Some(c);
                    }
                }
                Mark::Black => {}
            }
        }
        marks[n] = Mark::Black;
        None
    }
    let mut marks = vec![Mark::White; adjacency.len()];
    for n in 0..adjacency.len() {
        if marks[n] == Mark::White {
            if let Some(c) = visit(n, adjacency, &mut marks) {
                return Some(c);
            }
        }
    }
    None
}
