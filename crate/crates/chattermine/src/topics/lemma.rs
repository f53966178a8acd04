//! Rule-based lemmatization: plural, -ing, and -ed stripping with
//! doubled-consonant and silent-e restoration, plus a small exceptions
//! table for common irregulars. Deterministic and idempotent; a documented
//! approximation, not a full morphological analyzer.

/// Irregulars and words the suffix rules would mangle.
const EXCEPTIONS: &[(&str, &str)] = &[
    ("am", "be"),
    ("are", "be"),
    ("been", "be"),
    ("being", "be"),
    ("children", "child"),
    ("did", "do"),
    ("died", "die"),
    ("does", "do"),
    ("doing", "do"),
    ("done", "do"),
    ("dying", "die"),
    ("feet", "foot"),
    ("goes", "go"),
    ("gone", "go"),
    ("had", "have"),
    ("has", "have"),
    ("having", "have"),
    ("is", "be"),
    ("lying", "lie"),
    ("men", "man"),
    ("mice", "mouse"),
    ("movies", "movie"),
    ("news", "news"),
    ("people", "people"),
    ("series", "series"),
    ("species", "species"),
    ("teeth", "tooth"),
    ("viruses", "virus"),
    ("was", "be"),
    ("went", "go"),
    ("were", "be"),
    ("women", "woman"),
];

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y')
}

/// Consonant-vowel-consonant ending (last consonant not w/x/y): the
/// classic cue that a stripped suffix removed a silent 'e'.
fn ends_cvc(stem: &str) -> bool {
    let chars: Vec<char> = stem.chars().collect();
    let n = chars.len();
    if n < 3 {
        return false;
    }
    let (c1, c2, c3) = (chars[n - 3], chars[n - 2], chars[n - 1]);
    !is_vowel(c1) && is_vowel(c2) && c2 != 'y' && !is_vowel(c3) && !matches!(c3, 'w' | 'x' | 'y')
}

fn undouble(stem: &str) -> Option<&str> {
    let chars: Vec<char> = stem.chars().collect();
    let n = chars.len();
    if n >= 2 && chars[n - 1] == chars[n - 2] {
        let c = chars[n - 1];
        if matches!(c, 'b' | 'd' | 'g' | 'm' | 'n' | 'p' | 'r' | 't') {
            return Some(&stem[..stem.len() - c.len_utf8()]);
        }
    }
    None
}

fn restore(stem: String) -> String {
    if let Some(shorter) = undouble(&stem) {
        return shorter.to_string();
    }
    if ends_cvc(&stem) {
        let mut s = stem;
        s.push('e');
        return s;
    }
    stem
}

fn strip_plural(word: &str) -> String {
    if word.len() >= 5 {
        if let Some(stem) = word.strip_suffix("ies") {
            return format!("{stem}y");
        }
    }
    for sibilant in ["sses", "xes", "zes"] {
        if word.len() >= sibilant.len() + 1 && word.ends_with(sibilant) {
            return word[..word.len() - 2].to_string();
        }
    }
    // -ches/-shes take es only after a consonant (churches, not aches).
    for sibilant in ["ches", "shes"] {
        if word.len() >= sibilant.len() + 2 && word.ends_with(sibilant) {
            let before = word.as_bytes()[word.len() - sibilant.len() - 1] as char;
            if !is_vowel(before) {
                return word[..word.len() - 2].to_string();
            }
        }
    }
    if word.len() >= 4
        && word.ends_with('s')
        && !word.ends_with("ss")
        && !word.ends_with("us")
        && !word.ends_with("is")
    {
        return word[..word.len() - 1].to_string();
    }
    word.to_string()
}

fn strip_ing(word: String) -> String {
    if word.len() >= 6 {
        if let Some(stem) = word.strip_suffix("ing") {
            if stem.contains(is_vowel) {
                return restore(stem.to_string());
            }
        }
    }
    word
}

fn strip_ed(word: String) -> String {
    if word.len() >= 5 {
        if let Some(stem) = word.strip_suffix("ied") {
            return format!("{stem}y");
        }
        if word.ends_with("eed") {
            return word[..word.len() - 1].to_string();
        }
        if let Some(stem) = word.strip_suffix("ed") {
            if stem.contains(is_vowel) {
                return restore(stem.to_string());
            }
        }
    }
    word
}

/// Lemmatize one lowercase alphabetic word.
pub fn lemmatize(word: &str) -> String {
    if let Ok(hit) = EXCEPTIONS.binary_search_by_key(&word, |(w, _)| w) {
        return EXCEPTIONS[hit].1.to_string();
    }
    strip_ed(strip_ing(strip_plural(word)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exceptions_table_is_sorted_for_binary_search() {
        for pair in EXCEPTIONS.windows(2) {
            assert!(pair[0].0 < pair[1].0, "{:?} out of order", pair[1].0);
        }
    }

    #[test]
    fn progressive_forms() {
        assert_eq!(lemmatize("coughing"), "cough");
        assert_eq!(lemmatize("running"), "run");
        assert_eq!(lemmatize("taking"), "take");
        assert_eq!(lemmatize("feeling"), "feel");
    }

    #[test]
    fn fixed_points() {
        assert_eq!(lemmatize("cough"), "cough");
        assert_eq!(lemmatize("mask"), "mask");
        assert_eq!(lemmatize("virus"), "virus");
    }

    #[test]
    fn plurals() {
        assert_eq!(lemmatize("studies"), "study");
        assert_eq!(lemmatize("masks"), "mask");
        assert_eq!(lemmatize("glasses"), "glass");
        assert_eq!(lemmatize("boxes"), "box");
        assert_eq!(lemmatize("cases"), "case");
        assert_eq!(lemmatize("symptoms"), "symptom");
        assert_eq!(lemmatize("viruses"), "virus");
        assert_eq!(lemmatize("churches"), "church");
        assert_eq!(lemmatize("aches"), "ache");
    }

    #[test]
    fn past_forms() {
        assert_eq!(lemmatize("coughed"), "cough");
        assert_eq!(lemmatize("stopped"), "stop");
        assert_eq!(lemmatize("cared"), "care");
        assert_eq!(lemmatize("studied"), "study");
        assert_eq!(lemmatize("agreed"), "agree");
        assert_eq!(lemmatize("needed"), "need");
    }

    #[test]
    fn cascade_handles_stacked_suffixes() {
        assert_eq!(lemmatize("meetings"), "meet");
    }

    #[test]
    fn irregulars() {
        assert_eq!(lemmatize("was"), "be");
        assert_eq!(lemmatize("children"), "child");
        assert_eq!(lemmatize("news"), "news");
    }

    proptest! {
        #[test]
        fn idempotent(word in "[a-z]{1,15}") {
            let once = lemmatize(&word);
            prop_assert_eq!(lemmatize(&once), once.clone());
        }

        #[test]
        fn never_empty(word in "[a-z]{1,15}") {
            prop_assert!(!lemmatize(&word).is_empty());
        }
    }
}
