//! Ranked relative-frequency tables over tagged spans.

use std::collections::BTreeMap;

use super::grammar::TagCategory;
use super::matcher::TaggedPost;

/// Rank surfaces of one category by relative frequency.
///
/// Frequency = span count / total span count of that category; ordering is
/// descending frequency, ties broken lexicographically. Frequencies sum to
/// 1 (±1e-9) whenever the table is non-empty.
pub fn frequency_table(tagged: &[TaggedPost], category: TagCategory) -> Vec<(String, f64)> {
    let mut counts: BTreeMap<&str, u64> = BTreeMap::new();
    let mut total = 0u64;
    for post in tagged {
        for span in &post.spans {
            if span.category == category {
                *counts.entry(span.surface.as_str()).or_insert(0) += 1;
                total += 1;
            }
        }
    }
    if total == 0 {
        return Vec::new();
    }
    let mut table: Vec<(String, f64)> = counts
        .into_iter()
        .map(|(term, n)| (term.to_string(), n as f64 / total as f64))
        .collect();
    table.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
    table
}

/// The symptom table of the pipeline outputs.
pub fn symptom_frequency_table(tagged: &[TaggedPost]) -> Vec<(String, f64)> {
    frequency_table(tagged, TagCategory::Symptom)
}
