//! Leftmost-longest span matching.
//!
//! The scan moves left to right. At each position every top-level graph is
//! tried depth-first (subgraph calls included); the longest match wins,
//! with ties going to the earlier `top_level` declaration. A match emits a
//! span and the scan resumes at its end, so spans are flat and
//! non-overlapping. No match advances the scan by one token.

use std::collections::{HashMap, HashSet};
use std::rc::Rc;

use serde::Serialize;

use super::grammar::{Grammar, Label, TagSpan};
use crate::corpus::{normalize, NormalizedText, Post, PostCollection};
use crate::exec;

/// All end positions (ascending) at which `graph` accepts a prefix of
/// `tokens[pos..]`. Memoized per (graph, position); validated grammars
/// guarantee the recursion bottoms out.
fn graph_ends(
    grammar: &Grammar,
    tokens: &[&str],
    graph_idx: usize,
    pos: usize,
    memo: &mut HashMap<(usize, usize), Rc<Vec<usize>>>,
) -> Rc<Vec<usize>> {
    if let Some(cached) = memo.get(&(graph_idx, pos)) {
        return Rc::clone(cached);
    }
    let graph = &grammar.graphs[graph_idx];
    let mut ends = std::collections::BTreeSet::new();
    let mut visited: HashSet<(usize, usize)> = HashSet::new();
    let mut stack = vec![(graph.start, pos)];
    while let Some((state, p)) = stack.pop() {
        if !visited.insert((state, p)) {
            continue;
        }
        if graph.accepting.contains(&state) {
            ends.insert(p);
        }
        for (label, to) in &graph.outgoing[state] {
            match label {
                Label::Literal(word) => {
                    if p < tokens.len() && tokens[p] == word {
                        stack.push((*to, p + 1));
                    }
                }
                Label::LexClass(lex) => {
                    for len in grammar.lexicons[*lex].match_lengths(tokens, p) {
                        stack.push((*to, p + len));
                    }
                }
                Label::Call(callee) => {
                    let sub_ends = graph_ends(grammar, tokens, *callee, p, memo);
                    for &end in sub_ends.iter() {
                        stack.push((*to, end));
                    }
                }
            }
        }
    }
    let result = Rc::new(ends.into_iter().collect::<Vec<usize>>());
    memo.insert((graph_idx, pos), Rc::clone(&result));
    result
}

/// Tag a normalized token stream with entity spans.
pub fn tag_post(grammar: &Grammar, text: &NormalizedText) -> Vec<TagSpan> {
    let tokens = text.token_strs();
    let mut spans = Vec::new();
    let mut memo = HashMap::new();
    let mut pos = 0;
    while pos < tokens.len() {
        let mut best: Option<(usize, super::grammar::TagCategory)> = None;
        for &(graph_idx, category) in &grammar.top_level {
            let ends = graph_ends(grammar, &tokens, graph_idx, pos, &mut memo);
            // Top-level graphs never match empty, so any end is > pos.
            if let Some(&longest) = ends.last() {
                debug_assert!(longest > pos);
                if best.is_none_or(|(e, _)| longest > e) {
                    best = Some((longest, category));
                }
            }
        }
        match best {
            Some((end, category)) => {
                spans.push(TagSpan {
                    category,
                    token_start: pos,
                    token_end: end,
                    surface: tokens[pos..end].join(" "),
                });
                pos = end;
            }
            None => pos += 1,
        }
    }
    spans
}

/// A post together with its entity spans.
#[derive(Debug, Clone, Serialize)]
pub struct TaggedPost {
    #[serde(flatten)]
    pub post: Post,
    pub spans: Vec<TagSpan>,
}

/// Normalize and tag every post; order-preserving and deterministic.
pub fn tag_collection(grammar: &Grammar, posts: &PostCollection) -> Vec<TaggedPost> {
    exec::map_ordered(&posts.posts, |post| {
        let text = normalize(&post.text);
        TaggedPost {
            post: post.clone(),
            spans: tag_post(grammar, &text),
        }
    })
}

/// Render tokens with paper-style tag markers: `<symptom>fever<symptom>`.
pub fn render_tagged(text: &NormalizedText, spans: &[TagSpan]) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut span_iter = spans.iter().peekable();
    let mut idx = 0;
    while idx < text.tokens.len() {
        if let Some(span) = span_iter.peek() {
            if span.token_start == idx {
                let tag = span.category.as_str();
                parts.push(format!("<{tag}>{}<{tag}>", span.surface));
                idx = span.token_end;
                span_iter.next();
                continue;
            }
        }
        parts.push(text.tokens[idx].clone());
        idx += 1;
    }
    parts.join(" ")
}

/// Strip `<…>` markers from a tagged rendering, recovering the token stream.
pub fn strip_tags(rendered: &str) -> Vec<String> {
    let mut out = String::with_capacity(rendered.len());
    let mut in_tag = false;
    for ch in rendered.chars() {
        match ch {
            '<' => in_tag = true,
            '>' => in_tag = false,
            c if !in_tag => out.push(c),
            _ => {}
        }
    }
    out.split_whitespace().map(String::from).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rtn::grammar::{GraphSpec, TagCategory};
    use std::collections::BTreeMap;

    fn tr(from: &str, label: &str, to: &str) -> (String, String, String) {
        (from.to_string(), label.to_string(), to.to_string())
    }

    /// symptom lexicon grammar plus a two-graph pattern with a call.
    fn test_grammar() -> Grammar {
        let mut lexicons = BTreeMap::new();
        lexicons.insert(
            "symptoms".to_string(),
            vec![
                "fever".to_string(),
                "cough".to_string(),
                "shortness of breath".to_string(),
            ],
        );
        lexicons.insert(
            "body_parts".to_string(),
            vec!["neck".to_string(), "hand".to_string()],
        );
        let symptom = GraphSpec {
            name: "symptom".to_string(),
            states: vec!["s0".into(), "s1".into()],
            start: "s0".into(),
            accepting: vec!["s1".into()],
            transitions: vec![tr("s0", "lex:symptoms", "s1")],
        };
        let body_ref = GraphSpec {
            name: "body_ref".to_string(),
            states: vec!["b0".into(), "b1".into(), "b2".into()],
            start: "b0".into(),
            accepting: vec!["b2".into()],
            transitions: vec![tr("b0", "lit:my", "b1"), tr("b1", "lex:body_parts", "b2")],
        };
        let impact = GraphSpec {
            name: "impact".to_string(),
            states: vec!["i0".into(), "i1".into(), "i2".into()],
            start: "i0".into(),
            accepting: vec!["i2".into()],
            transitions: vec![tr("i0", "lit:pain", "i1"), tr("i1", "lit:in", "i1"), tr("i1", "call:body_ref", "i2")],
        };
        Grammar::build(
            vec![symptom, body_ref, impact],
            lexicons,
            vec![
                ("symptom".to_string(), "symptom".to_string()),
                ("impact".to_string(), "impact_body".to_string()),
            ],
        )
        .unwrap()
    }

    fn tag(text: &str) -> Vec<TagSpan> {
        tag_post(&test_grammar(), &normalize(text))
    }

    #[test]
    fn empty_stream_tags_nothing() {
        assert!(tag("").is_empty());
    }

    #[test]
    fn multiword_lexicon_match_is_longest() {
        let spans = tag("fever and shortness of breath today");
        let surfaces: Vec<&str> = spans.iter().map(|s| s.surface.as_str()).collect();
        assert_eq!(surfaces, ["fever", "shortness of breath"]);
        assert_eq!(spans[1].token_start, 2);
        assert_eq!(spans[1].token_end, 5);
    }

    #[test]
    fn subgraph_call_matches() {
        let spans = tag("i have pain in my neck");
        assert_eq!(spans.len(), 1);
        assert_eq!(spans[0].category, TagCategory::ImpactBody);
        assert_eq!(spans[0].surface, "pain in my neck");
    }

    #[test]
    fn spans_are_sorted_and_disjoint() {
        let spans = tag("cough fever cough pain in my hand cough");
        for pair in spans.windows(2) {
            assert!(pair[0].token_end <= pair[1].token_start);
        }
        assert_eq!(spans.len(), 5);
    }

    #[test]
    fn declaration_order_breaks_ties() {
        // Both graphs match the single token "fever": symptom is declared
        // first and must win.
        let mut lexicons = BTreeMap::new();
        lexicons.insert("a".to_string(), vec!["fever".to_string()]);
        lexicons.insert("b".to_string(), vec!["fever".to_string()]);
        let mk = |name: &str, lex: &str| GraphSpec {
            name: name.to_string(),
            states: vec!["s0".into(), "s1".into()],
            start: "s0".into(),
            accepting: vec!["s1".into()],
            transitions: vec![tr("s0", &format!("lex:{lex}"), "s1")],
        };
        let grammar = Grammar::build(
            vec![mk("first", "a"), mk("second", "b")],
            lexicons,
            vec![
                ("first".to_string(), "symptom".to_string()),
                ("second".to_string(), "covid_report".to_string()),
            ],
        )
        .unwrap();
        let spans = tag_post(&grammar, &normalize("fever"));
        assert_eq!(spans[0].category, TagCategory::Symptom);
    }

    #[test]
    fn longer_match_beats_earlier_declaration() {
        let mut lexicons = BTreeMap::new();
        lexicons.insert("short".to_string(), vec!["loss".to_string()]);
        lexicons.insert("long".to_string(), vec!["loss of taste".to_string()]);
        let mk = |name: &str, lex: &str| GraphSpec {
            name: name.to_string(),
            states: vec!["s0".into(), "s1".into()],
            start: "s0".into(),
            accepting: vec!["s1".into()],
            transitions: vec![tr("s0", &format!("lex:{lex}"), "s1")],
        };
        let grammar = Grammar::build(
            vec![mk("short_g", "short"), mk("long_g", "long")],
            lexicons,
            vec![
                ("short_g".to_string(), "symptom".to_string()),
                ("long_g".to_string(), "impact_body".to_string()),
            ],
        )
        .unwrap();
        let spans = tag_post(&grammar, &normalize("loss of taste"));
        assert_eq!(spans.len(), 1);
        assert_eq!(spans[0].surface, "loss of taste");
        assert_eq!(spans[0].category, TagCategory::ImpactBody);
    }

    #[test]
    fn recursive_grammar_consumes_and_terminates() {
        // tired | very <g>
        let spec = GraphSpec {
            name: "g".to_string(),
            states: vec!["s0".into(), "s1".into(), "s2".into()],
            start: "s0".into(),
            accepting: vec!["s2".into()],
            transitions: vec![
                tr("s0", "lit:very", "s1"),
                tr("s1", "call:g", "s2"),
                tr("s0", "lit:tired", "s2"),
            ],
        };
        let grammar = Grammar::build(
            vec![spec],
            BTreeMap::new(),
            vec![("g".to_string(), "symptom".to_string())],
        )
        .unwrap();
        let spans = tag_post(&grammar, &normalize("very very very tired ok"));
        assert_eq!(spans.len(), 1);
        assert_eq!(spans[0].surface, "very very very tired");
    }

    #[test]
    fn tagging_twice_is_identical() {
        let text = normalize("fever cough pain in my neck shortness of breath");
        let grammar = test_grammar();
        assert_eq!(tag_post(&grammar, &text), tag_post(&grammar, &text));
    }

    #[test]
    fn collection_tagging_preserves_order_and_handles_no_match() {
        use crate::corpus::Platform;
        use chrono::TimeZone;
        let make = |id: &str, text: &str| Post {
            id: id.to_string(),
            author_id: "a".to_string(),
            timestamp: chrono::Utc.with_ymd_and_hms(2020, 4, 1, 0, 0, 0).unwrap(),
            region: "NY".to_string(),
            platform: Platform::Twitter,
            text: text.to_string(),
        };
        let posts = PostCollection::new(vec![
            make("p1", "fever again"),
            make("p2", "nothing to report"),
        ]);
        let tagged = tag_collection(&test_grammar(), &posts);
        assert_eq!(tagged.len(), 2);
        assert_eq!(tagged[0].post.id, "p1");
        assert_eq!(tagged[0].spans.len(), 1);
        assert!(tagged[1].spans.is_empty());
    }

    #[test]
    fn render_then_strip_recovers_tokens() {
        let text = normalize("i have pain in my neck and fever");
        let spans = tag_post(&test_grammar(), &text);
        let rendered = render_tagged(&text, &spans);
        assert!(rendered.contains("<impact_body>pain in my neck<impact_body>"));
        assert_eq!(strip_tags(&rendered), text.tokens);
    }
}
