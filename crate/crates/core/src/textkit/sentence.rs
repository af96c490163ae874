use serde::{Deserialize, Serialize};

use super::tokenize::is_abbreviation;

/// A sentence with byte offsets into its parent text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub text: String,
    pub span: (usize, usize),
    pub index: usize,
}

const TERMINATORS: [char; 3] = ['.', '!', '?'];
const CLOSERS: [char; 6] = ['"', '\'', '\u{201d}', '\u{2019}', ')', ']'];
const OPENERS: [char; 6] = ['"', '\'', '\u{201c}', '\u{2018}', '(', '['];

/// Splits text into sentences.
///
/// A boundary is a run of `.`, `!` or `?` (optionally followed by closing
/// quotes or brackets) followed by whitespace and then an uppercase letter or
/// digit, possibly behind an opening quote. A period after a known
/// abbreviation or an initial is not a boundary. Newlines always split.
pub fn split_sentences(text: &str) -> Vec<Sentence> {
    let mut out = Vec::new();
    let bytes_len = text.len();
    let mut start = 0usize;
    let mut i = 0usize;
    while i < bytes_len {
        let c = text[i..].chars().next().unwrap();
        if c == '\n' {
            emit(text, start, i, &mut out);
            start = i + 1;
            i += 1;
            continue;
        }
        if TERMINATORS.contains(&c) {
            let mut j = i;
            let mut only_period = true;
            for ch in text[i..].chars() {
                if TERMINATORS.contains(&ch) || CLOSERS.contains(&ch) {
                    if ch == '!' || ch == '?' {
                        only_period = false;
                    }
                    j += ch.len_utf8();
                } else {
                    break;
                }
            }
            let rest = &text[j..];
            let after_ws = rest.trim_start_matches(|ch: char| ch.is_whitespace() && ch != '\n');
            let has_ws = after_ws.len() < rest.len();
            if has_ws && starts_sentence(after_ws) && !(only_period && text[i..j].starts_with('.') && after_abbreviation(text, i)) {
                emit(text, start, j, &mut out);
                start = j;
            }
            i = j;
            continue;
        }
        i += c.len_utf8();
    }
    emit(text, start, bytes_len, &mut out);
    out
}

fn starts_sentence(s: &str) -> bool {
    let s = s.trim_start_matches(OPENERS);
    s.chars().next().is_some_and(|c| c.is_uppercase() || c.is_ascii_digit())
}

/// True when the period at `dot` closes an abbreviation or initial.
fn after_abbreviation(text: &str, dot: usize) -> bool {
    let word_start = text[..dot]
        .char_indices()
        .rev()
        .find(|(_, c)| c.is_whitespace())
        .map(|(k, c)| k + c.len_utf8())
        .unwrap_or(0);
    let word = text[word_start..=dot].trim_start_matches(|c: char| !c.is_alphanumeric());
    !word.is_empty() && is_abbreviation(word)
}

fn emit(text: &str, start: usize, end: usize, out: &mut Vec<Sentence>) {
    let slice = &text[start..end];
    let trimmed_start = start + (slice.len() - slice.trim_start().len());
    let trimmed_end = start + slice.trim_end().len();
    if trimmed_start < trimmed_end {
        out.push(Sentence {
            text: text[trimmed_start..trimmed_end].to_string(),
            span: (trimmed_start, trimmed_end),
            index: out.len(),
        });
    }
}
