//! Import of externally computed per-post label probabilities and loading
//! of labeled training data.

use std::collections::{HashMap, HashSet};
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::Deserialize;

use super::linear::{Label, LabelDistribution};
use super::ClassifyError;
use crate::corpus::PostCollection;

/// One externally scored post.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredPost {
    pub id: String,
    pub dist: LabelDistribution,
}

/// Result of joining an external score file onto a collection.
#[derive(Debug)]
pub struct ImportOutcome {
    /// Scores joined by post id, in collection order.
    pub scored: Vec<ScoredPost>,
    /// Score rows whose id matched no post.
    pub unknown_ids: usize,
    /// Rows that failed to parse or had a non-positive probability mass.
    pub malformed: usize,
}

#[derive(Debug, Deserialize)]
struct ScoreRow {
    id: String,
    p_neutral: f64,
    p_hate: f64,
    p_counterhate: f64,
    #[serde(default)]
    p_other: Option<f64>,
}

impl ScoreRow {
    /// Validate and renormalize so components sum to exactly 1.
    fn into_distribution(self) -> Option<(String, LabelDistribution)> {
        let components = [
            self.p_neutral,
            self.p_hate,
            self.p_counterhate,
            self.p_other.unwrap_or(0.0),
        ];
        if components.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return None;
        }
        let sum: f64 = components.iter().sum();
        if sum <= 0.0 {
            return None;
        }
        Some((
            self.id,
            LabelDistribution {
                p_neutral: self.p_neutral / sum,
                p_hate: self.p_hate / sum,
                p_counterhate: self.p_counterhate / sum,
                p_other: self.p_other.map(|p| p / sum),
            },
        ))
    }
}

/// Read a line-delimited score file and join it onto posts by id.
pub fn import_scores(path: &Path, posts: &PostCollection) -> Result<ImportOutcome, ClassifyError> {
    let file = std::fs::File::open(path).map_err(|source| ClassifyError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let reader = BufReader::new(file);
    let known_ids: HashSet<&str> = posts.iter().map(|p| p.id.as_str()).collect();
    let mut by_id: HashMap<String, LabelDistribution> = HashMap::new();
    let mut unknown_ids = 0usize;
    let mut malformed = 0usize;
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| ClassifyError::Io {
            path: path.display().to_string(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let row: ScoreRow = match serde_json::from_str(&line) {
            Ok(r) => r,
            Err(e) => {
                log::warn!("score row {}: {e}", idx + 1);
                malformed += 1;
                continue;
            }
        };
        match row.into_distribution() {
            Some((id, dist)) => {
                if known_ids.contains(id.as_str()) {
                    by_id.insert(id, dist);
                } else {
                    log::warn!("score row {}: unknown post id {id:?}", idx + 1);
                    unknown_ids += 1;
                }
            }
            None => {
                log::warn!("score row {}: non-positive or non-finite probabilities", idx + 1);
                malformed += 1;
            }
        }
    }
    let scored = posts
        .iter()
        .filter_map(|p| {
            by_id.get(&p.id).map(|dist| ScoredPost {
                id: p.id.clone(),
                dist: *dist,
            })
        })
        .collect();
    Ok(ImportOutcome {
        scored,
        unknown_ids,
        malformed,
    })
}

#[derive(Debug, Deserialize)]
struct LabeledRow {
    #[serde(default)]
    id: Option<String>,
    text: String,
    label: String,
}

/// Load line-delimited `(text, label)` training data.
///
/// Rows with unknown labels or empty text are skipped with a count.
pub fn load_labeled(path: &Path) -> Result<(Vec<(String, Label)>, usize), ClassifyError> {
    let file = std::fs::File::open(path).map_err(|source| ClassifyError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let reader = BufReader::new(file);
    let mut rows = Vec::new();
    let mut skipped = 0usize;
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| ClassifyError::Io {
            path: path.display().to_string(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let row: LabeledRow = match serde_json::from_str(&line) {
            Ok(r) => r,
            Err(e) => {
                log::warn!("labeled row {}: {e}", idx + 1);
                skipped += 1;
                continue;
            }
        };
        let _ = row.id;
        match Label::parse(&row.label) {
            Ok(label) if !row.text.trim().is_empty() => rows.push((row.text, label)),
            _ => skipped += 1,
        }
    }
    Ok((rows, skipped))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Platform, Post};
    use chrono::TimeZone;
    use std::io::Write;

    fn posts(ids: &[&str]) -> PostCollection {
        PostCollection::new(
            ids.iter()
                .map(|id| Post {
                    id: id.to_string(),
                    author_id: "a".to_string(),
                    timestamp: chrono::Utc.with_ymd_and_hms(2020, 4, 1, 0, 0, 0).unwrap(),
                    region: "NY".to_string(),
                    platform: Platform::Twitter,
                    text: "text".to_string(),
                })
                .collect(),
        )
    }

    fn temp(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn full_match_scores_everything() {
        let f = temp(concat!(
            r#"{"id":"p1","p_neutral":0.8,"p_hate":0.1,"p_counterhate":0.1}"#,
            "\n",
            r#"{"id":"p2","p_neutral":0.2,"p_hate":0.3,"p_counterhate":0.5}"#,
            "\n",
        ));
        let out = import_scores(f.path(), &posts(&["p1", "p2"])).unwrap();
        assert_eq!(out.scored.len(), 2);
        assert_eq!(out.unknown_ids, 0);
        assert_eq!(out.malformed, 0);
        assert_eq!(out.scored[1].dist.argmax(), Label::CounterHate);
    }

    #[test]
    fn empty_file_scores_nothing() {
        let f = temp("");
        let out = import_scores(f.path(), &posts(&["p1"])).unwrap();
        assert!(out.scored.is_empty());
    }

    #[test]
    fn under_unity_rows_are_renormalized() {
        let f = temp(concat!(
            r#"{"id":"p1","p_neutral":0.49,"p_hate":0.245,"p_counterhate":0.245}"#,
            "\n"
        ));
        let out = import_scores(f.path(), &posts(&["p1"])).unwrap();
        let d = out.scored[0].dist;
        assert!((d.sum() - 1.0).abs() < 1e-12);
        assert!((d.p_neutral - 0.5).abs() < 1e-12);
    }

    #[test]
    fn unknown_ids_and_malformed_rows_counted() {
        let f = temp(concat!(
            r#"{"id":"ghost","p_neutral":1.0,"p_hate":0.0,"p_counterhate":0.0}"#,
            "\n",
            "not json\n",
            r#"{"id":"p1","p_neutral":0.0,"p_hate":0.0,"p_counterhate":0.0}"#,
            "\n",
        ));
        let out = import_scores(f.path(), &posts(&["p1"])).unwrap();
        assert_eq!(out.scored.len(), 0);
        assert_eq!(out.unknown_ids, 1);
        assert_eq!(out.malformed, 2);
    }

    #[test]
    fn four_component_rows_keep_other() {
        let f = temp(concat!(
            r#"{"id":"p1","p_neutral":0.2,"p_hate":0.1,"p_counterhate":0.6,"p_other":0.1}"#,
            "\n"
        ));
        let out = import_scores(f.path(), &posts(&["p1"])).unwrap();
        assert_eq!(out.scored[0].dist.p_other, Some(0.1));
    }

    #[test]
    fn labeled_rows_parse_and_skip() {
        let f = temp(concat!(
            r#"{"id":"c1","text":"stop the hate","label":"counter-hate"}"#,
            "\n",
            r#"{"text":"ordinary day","label":"neutral"}"#,
            "\n",
            r#"{"text":"???","label":"confused"}"#,
            "\n",
        ));
        let (rows, skipped) = load_labeled(f.path()).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].1, Label::CounterHate);
        assert_eq!(skipped, 1);
    }
}
