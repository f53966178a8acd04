//! Terminator-based sentence splitting.

/// Split text into sentences on `.`, `!`, `?` runs followed by whitespace
/// or end of input. Non-empty text containing no terminator yields exactly
/// one sentence (short posts often skip punctuation entirely).
pub fn split_sentences(text: &str) -> Vec<String> {
    let mut sentences = Vec::new();
    let mut saw_boundary = false;
    let mut seg_start = 0usize;
    let mut chars = text.char_indices().peekable();

    while let Some((i, ch)) = chars.next() {
        if !is_terminator(ch) {
            continue;
        }
        let mut run_end = i + ch.len_utf8();
        while let Some(&(j, c2)) = chars.peek() {
            if is_terminator(c2) {
                run_end = j + c2.len_utf8();
                chars.next();
            } else {
                break;
            }
        }
        let at_boundary = match chars.peek() {
            None => true,
            Some(&(_, c2)) => c2.is_whitespace(),
        };
        if at_boundary {
            saw_boundary = true;
            let seg = text[seg_start..i].trim();
            if !seg.is_empty() {
                sentences.push(seg.to_string());
            }
            seg_start = run_end;
        }
    }
    let tail = text[seg_start..].trim();
    if !tail.is_empty() {
        sentences.push(tail.to_string());
    }
    if sentences.is_empty() && !saw_boundary && !text.trim().is_empty() {
        sentences.push(text.trim().to_string());
    }
    sentences
}

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_terminators() {
        assert_eq!(split_sentences("It sucked. Mostly for me."), ["It sucked", "Mostly for me"]);
    }

    #[test]
    fn no_terminator_yields_one_sentence() {
        assert_eq!(split_sentences("no punctuation here"), ["no punctuation here"]);
    }

    #[test]
    fn terminator_runs_collapse() {
        assert_eq!(split_sentences("Wow!!! Really?"), ["Wow", "Really"]);
    }

    #[test]
    fn interior_dot_is_not_a_boundary() {
        assert_eq!(split_sentences("over 3.5 million tweets"), ["over 3.5 million tweets"]);
    }

    #[test]
    fn empty_and_noise() {
        assert!(split_sentences("").is_empty());
        assert!(split_sentences("   ").is_empty());
        assert!(split_sentences("...").is_empty());
    }

    #[test]
    fn trailing_text_without_terminator_counts() {
        assert_eq!(split_sentences("One. Two"), ["One", "Two"]);
    }
}
