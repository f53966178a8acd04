//! Vowel-group syllable heuristic.

use super::CorpusError;

/// Count syllables in a single alphabetic word.
///
/// The count is the number of maximal vowel groups (`a e i o u y`), minus
/// one for a terminal silent `e` that is not preceded by `l`, with a floor
/// of 1.
pub fn count_syllables(word: &str) -> Result<usize, CorpusError> {
    if word.is_empty() || !word.chars().all(char::is_alphabetic) {
        return Err(CorpusError::NonAlphabeticWord(word.to_string()));
    }
    let letters: Vec<char> = word.to_lowercase().chars().collect();
    let mut groups = 0usize;
    let mut in_group = false;
    for &c in &letters {
        if is_vowel(c) {
            if !in_group {
                groups += 1;
                in_group = true;
            }
        } else {
            in_group = false;
        }
    }
    let n = letters.len();
    if n >= 2 && letters[n - 1] == 'e' {
        let prev = letters[n - 2];
        // A silent final 'e' needs a consonant before it; after 'l'
        // ("people", "table") the 'e' stays audible in this heuristic.
        if !is_vowel(prev) && prev != 'l' {
            groups = groups.saturating_sub(1);
        }
    }
    Ok(groups.max(1))
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y')
}
