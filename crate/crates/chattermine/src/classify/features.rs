//! Unigram + bigram count features over normalized tokens.

use std::collections::BTreeMap;

use crate::corpus::normalize;

/// Sparse n-gram counts for one text. Bigram keys join the two tokens with
/// a single space; tokens themselves never contain spaces.
pub fn featurize(text: &str) -> BTreeMap<String, f64> {
    let tokens = normalize(text).tokens;
    let mut counts: BTreeMap<String, f64> = BTreeMap::new();
    for token in &tokens {
        *counts.entry(token.clone()).or_insert(0.0) += 1.0;
    }
    for pair in tokens.windows(2) {
        *counts.entry(format!("{} {}", pair[0], pair[1])).or_insert(0.0) += 1.0;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unigrams_and_bigram() {
        let f = featurize("stop racist");
        assert_eq!(f.get("stop"), Some(&1.0));
        assert_eq!(f.get("racist"), Some(&1.0));
        assert_eq!(f.get("stop racist"), Some(&1.0));
        assert_eq!(f.len(), 3);
    }

    #[test]
    fn empty_text_is_empty_vector() {
        assert!(featurize("").is_empty());
        assert!(featurize("123 !!!").is_empty());
    }

    #[test]
    fn repetition_scales_counts() {
        let f = featurize("stop racist stop racist");
        assert_eq!(f.get("stop"), Some(&2.0));
        assert_eq!(f.get("racist"), Some(&2.0));
        assert_eq!(f.get("stop racist"), Some(&2.0));
        // The seam between the two copies adds one extra bigram.
        assert_eq!(f.get("racist stop"), Some(&1.0));
    }

    #[test]
    fn normalization_applies() {
        let f = featurize("Stop RACIST!");
        assert_eq!(f.get("stop racist"), Some(&1.0));
    }
}
