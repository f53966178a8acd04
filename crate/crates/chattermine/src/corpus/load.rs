//! Post archive ingestion (JSONL or CSV with a header row).

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use chrono::{DateTime, Utc};
use serde::Deserialize;

use super::{CorpusError, Platform, Post, PostCollection};

/// On-disk archive layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    /// One JSON object per line.
    Jsonl,
    /// Delimited table with a header row.
    Csv,
}

impl std::str::FromStr for InputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "jsonl" => Ok(InputFormat::Jsonl),
            "csv" => Ok(InputFormat::Csv),
            other => Err(format!("unknown input format {other:?} (expected jsonl or csv)")),
        }
    }
}

/// A record rejected during ingestion.
#[derive(Debug, Clone)]
pub struct SkippedRecord {
    /// 1-based line number in the source file.
    pub line: usize,
    pub reason: String,
}

/// Result of loading an archive: the valid posts plus skip diagnostics.
#[derive(Debug)]
pub struct LoadOutcome {
    pub collection: PostCollection,
    pub skipped: Vec<SkippedRecord>,
}

#[derive(Debug, Deserialize)]
struct RawRecord {
    id: String,
    author_id: String,
    timestamp: String,
    region: String,
    platform: String,
    text: String,
}

impl RawRecord {
    fn into_post(self) -> Result<Post, String> {
        if self.id.trim().is_empty() {
            return Err("empty id".to_string());
        }
        if self.author_id.trim().is_empty() {
            return Err("empty author_id".to_string());
        }
        if self.text.trim().is_empty() {
            return Err("empty text".to_string());
        }
        let timestamp: DateTime<Utc> = self
            .timestamp
            .parse::<DateTime<Utc>>()
            .map_err(|e| format!("bad timestamp {:?}: {e}", self.timestamp))?;
        let platform: Platform = match self.platform.to_ascii_lowercase().as_str() {
            "twitter" => Platform::Twitter,
            "reddit" => Platform::Reddit,
            other => return Err(format!("unknown platform {other:?}")),
        };
        let region = if self.region.trim().is_empty() {
            "unknown".to_string()
        } else {
            self.region
        };
        Ok(Post {
            id: self.id,
            author_id: self.author_id,
            timestamp,
            region,
            platform,
            text: self.text,
        })
    }
}

/// Load a post archive.
///
/// Malformed records are skipped (returned in [`LoadOutcome::skipped`] with
/// their line numbers and logged as warnings); an unreadable file or a
/// duplicate post id is fatal.
pub fn load_posts(path: &Path, format: InputFormat) -> Result<LoadOutcome, CorpusError> {
    let file = File::open(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let reader = BufReader::new(file);
    match format {
        InputFormat::Jsonl => load_jsonl(path, reader),
        InputFormat::Csv => load_csv(path, reader),
    }
}

fn load_jsonl(path: &Path, reader: impl BufRead) -> Result<LoadOutcome, CorpusError> {
    let mut posts = Vec::new();
    let mut skipped = Vec::new();
    let mut seen_ids = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|source| CorpusError::Io {
            path: path.display().to_string(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let record: RawRecord = match serde_json::from_str(&line) {
            Ok(r) => r,
            Err(e) => {
                skip(&mut skipped, line_no, format!("invalid record: {e}"));
                continue;
            }
        };
        match record.into_post() {
            Ok(post) => {
                if !seen_ids.insert(post.id.clone()) {
                    return Err(CorpusError::DuplicateId {
                        id: post.id,
                        line: line_no,
                    });
                }
                posts.push(post);
            }
            Err(reason) => skip(&mut skipped, line_no, reason),
        }
    }
    Ok(LoadOutcome {
        collection: PostCollection::new(posts),
        skipped,
    })
}

fn load_csv(path: &Path, reader: impl std::io::Read) -> Result<LoadOutcome, CorpusError> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);
    let io_err = |source: csv::Error, line: usize| CorpusError::Io {
        path: format!("{} (line {line})", path.display()),
        source: std::io::Error::other(source),
    };
    let headers = csv_reader
        .headers()
        .map_err(|e| io_err(e, 1))?
        .clone();
    let mut posts = Vec::new();
    let mut skipped = Vec::new();
    let mut seen_ids = HashSet::new();
    let mut record = csv::StringRecord::new();
    loop {
        let more = match csv_reader.read_record(&mut record) {
            Ok(more) => more,
            Err(e) => {
                let line_no = e.position().map(|p| p.line() as usize).unwrap_or(0);
                skip(&mut skipped, line_no, format!("invalid record: {e}"));
                continue;
            }
        };
        if !more {
            break;
        }
        let line_no = record.position().map(|p| p.line() as usize).unwrap_or(0);
        let raw: RawRecord = match record.deserialize(Some(&headers)) {
            Ok(r) => r,
            Err(e) => {
                skip(&mut skipped, line_no, format!("invalid record: {e}"));
                continue;
            }
        };
        match raw.into_post() {
            Ok(post) => {
                if !seen_ids.insert(post.id.clone()) {
                    return Err(CorpusError::DuplicateId {
                        id: post.id,
                        line: line_no,
                    });
                }
                posts.push(post);
            }
            Err(reason) => skip(&mut skipped, line_no, reason),
        }
    }
    Ok(LoadOutcome {
        collection: PostCollection::new(posts),
        skipped,
    })
}

fn skip(skipped: &mut Vec<SkippedRecord>, line: usize, reason: String) {
    log::warn!("skipping record at line {line}: {reason}");
    skipped.push(SkippedRecord { line, reason });
}
