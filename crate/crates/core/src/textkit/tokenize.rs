use serde::{Deserialize, Serialize};

/// A token with byte offsets into the string it was cut from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub text: String,
    pub start: usize,
    pub end: usize,
}

/// Lowercase abbreviations (without the final period) that keep their period
/// attached and never end a sentence.
pub(crate) const ABBREVIATIONS: &[&str] = &[
    "mr", "mrs", "ms", "dr", "prof", "sr", "jr", "st", "mt", "vs", "etc", "inc", "ltd", "corp", "co",
    "gen", "gov", "sen", "rep", "capt", "col", "lt", "sgt", "rev", "hon", "fig", "approx", "dept",
    "est", "e.g", "i.e", "u.s", "u.k", "a.m", "p.m", "jan", "feb", "mar", "apr", "jun", "jul", "aug",
    "sep", "sept", "oct", "nov", "dec", "ave", "blvd",
];

pub(crate) fn is_abbreviation(word_with_period: &str) -> bool {
    let Some(core) = word_with_period.strip_suffix('.') else {
        return false;
    };
    let lower = core.to_lowercase();
    if ABBREVIATIONS.contains(&lower.as_str()) {
        return true;
    }
    // initials: "J." and dotted initialisms such as "U.N."
    let mut chars = core.chars();
    if let (Some(c), None) = (chars.next(), chars.next()) {
        return c.is_uppercase();
    }
    core.contains('.') && core.split('.').all(|seg| seg.chars().count() == 1 && seg.chars().all(char::is_alphabetic))
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

/// Whitespace and punctuation tokenizer with an `n't` clitic split.
///
/// Leading and trailing punctuation is cut into separate tokens (runs of
/// periods stay together); word-internal punctuation such as hyphens and
/// apostrophes is kept.
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut out = Vec::new();
    let mut chunk_start = None;
    for (i, c) in text.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = chunk_start.take() {
                split_chunk(text, s, i, &mut out);
            }
        } else if chunk_start.is_none() {
            chunk_start = Some(i);
        }
    }
    if let Some(s) = chunk_start {
        split_chunk(text, s, text.len(), &mut out);
    }
    out
}

fn push(text: &str, start: usize, end: usize, out: &mut Vec<Token>) {
    out.push(Token {
        text: text[start..end].to_string(),
        start,
        end,
    });
}

fn split_chunk(text: &str, start: usize, end: usize, out: &mut Vec<Token>) {
    let chunk = &text[start..end];
    // leading punctuation
    let mut lead = 0;
    for (i, c) in chunk.char_indices() {
        if is_word_char(c) {
            break;
        }
        lead = i + c.len_utf8();
    }
    if lead == chunk.len() {
        push_punct_run(text, start, end, out);
        return;
    }
    let mut idx = 0;
    for (i, c) in chunk[..lead].char_indices() {
        push(text, start + i, start + i + c.len_utf8(), out);
        idx = i + c.len_utf8();
    }
    debug_assert_eq!(idx, lead);
    // trailing punctuation
    let body = &chunk[lead..];
    let mut core_end = body.len();
    for (i, c) in body.char_indices().rev() {
        if is_word_char(c) {
            break;
        }
        core_end = i;
    }
    let mut core = &body[..core_end];
    let mut tail_start = core_end;
    if body[core_end..].starts_with('.') && is_abbreviation(&body[..core_end + 1]) {
        core = &body[..core_end + 1];
        tail_start = core_end + 1;
    }
    let core_abs = start + lead;
    let lower = core.to_lowercase();
    let clitic = ["n't", "n\u{2019}t"].iter().find(|cl| lower.ends_with(*cl) && core.len() > cl.len());
    match clitic {
        Some(cl) => {
            let split = core.len() - cl.len();
            push(text, core_abs, core_abs + split, out);
            push(text, core_abs + split, core_abs + core.len(), out);
        }
        None => push(text, core_abs, core_abs + core.len(), out),
    }
    if tail_start < body.len() {
        push_punct_run(text, core_abs + tail_start, end, out);
    }
}

/// Emits a run of punctuation, grouping consecutive periods.
fn push_punct_run(text: &str, start: usize, end: usize, out: &mut Vec<Token>) {
    let run = &text[start..end];
    let mut iter = run.char_indices().peekable();
    while let Some((i, c)) = iter.next() {
        let mut j = i + c.len_utf8();
        if c == '.' {
            while let Some(&(k, '.')) = iter.peek() {
                j = k + 1;
                iter.next();
            }
        }
        push(text, start + i, start + j, out);
    }
}

/// Lowercased alphanumeric tokens, used by metrics.
pub fn words_lower(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
        .collect()
}
