//! Tweet-style text normalization.
//!
//! Lowercases, drops URLs, @-mentions and digit-bearing tokens, deletes
//! apostrophes in place (`can't` → `cant`), strips hashtag markers keeping
//! the word part, and treats all other punctuation as token separators.

/// A normalized token stream with byte offsets into the raw text.
///
/// Each offset pair `(start, end)` indexes the raw substring the token came
/// from; normalizing that substring yields exactly the token again.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NormalizedText {
    pub tokens: Vec<String>,
    pub token_offsets: Vec<(usize, usize)>,
}

impl NormalizedText {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Tokens as `&str` slices, convenient for matching.
    pub fn token_strs(&self) -> Vec<&str> {
        self.tokens.iter().map(String::as_str).collect()
    }
}

fn is_url(chunk: &str) -> bool {
    let lower = chunk.to_lowercase();
    lower.starts_with("http://") || lower.starts_with("https://") || lower.starts_with("www.")
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

/// Normalize raw post text into a lowercase token stream.
///
/// Total function: empty or all-noise input yields an empty stream.
pub fn normalize(text: &str) -> NormalizedText {
    let mut out = NormalizedText::default();

    for (chunk_start, chunk) in whitespace_chunks(text) {
        if is_url(chunk) || chunk.starts_with('@') {
            continue;
        }
        let mut token = String::new();
        let mut start = 0usize;
        let mut end = 0usize;
        let mut has_digit = false;
        let mut flush = |token: &mut String, has_digit: &mut bool, start: usize, end: usize| {
            if !token.is_empty() && !*has_digit {
                out.tokens.push(std::mem::take(token));
                out.token_offsets.push((start, end));
            } else {
                token.clear();
            }
            *has_digit = false;
        };
        for (rel, ch) in chunk.char_indices() {
            if ch.is_alphanumeric() {
                if token.is_empty() {
                    start = chunk_start + rel;
                }
                for lc in ch.to_lowercase() {
                    // Lowercase expansions can emit combining marks; keep
                    // only alphanumerics so re-normalizing is a fixed point.
                    if lc.is_alphanumeric() {
                        token.push(lc);
                    }
                }
                if ch.is_numeric() {
                    has_digit = true;
                }
                end = chunk_start + rel + ch.len_utf8();
            } else if is_apostrophe(ch) {
                // deleted in place; does not break the token
            } else {
                flush(&mut token, &mut has_digit, start, end);
            }
        }
        flush(&mut token, &mut has_digit, start, end);
    }
    out
}

/// Whitespace-separated chunks with their byte offsets.
fn whitespace_chunks(text: &str) -> Vec<(usize, &str)> {
    let mut chunks = Vec::new();
    let mut start = None;
    for (i, ch) in text.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                chunks.push((s, &text[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        chunks.push((s, &text[s..]));
    }
    chunks
}
