use serde::{Deserialize, Serialize};

use super::lexicon::Lexicons;
use super::pos::{is_capitalized, Pos, TaggedToken};
use super::sentence::Sentence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EntityKind {
    PersonLike,
    PlaceLike,
    OrgLike,
    Number,
    DateLike,
    OtherProper,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntitySpan {
    pub text: String,
    /// Byte offsets into the sentence text.
    pub span: (usize, usize),
    pub kind: EntityKind,
}

const MONTHS: &[&str] = &[
    "january", "february", "march", "april", "may", "june", "july", "august", "september", "october",
    "november", "december",
];
const WEEKDAYS: &[&str] = &["monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday"];
const HONORIFICS: &[&str] = &["mr.", "mrs.", "ms.", "dr.", "prof.", "sir", "mr", "mrs", "ms", "dr", "lady", "lord"];
const PLACE_HEADS: &[&str] = &[
    "lake", "city", "province", "river", "mountain", "mountains", "county", "island", "islands", "street",
    "avenue", "valley", "bay", "sea", "ocean", "park", "state", "republic", "kingdom", "village", "town",
    "district", "region", "desert", "forest", "coast", "peninsula", "road", "square", "airport", "harbor",
];
const PLACE_CONTEXT: &[&str] = &["in", "at", "near", "from", "capital", "city", "town", "village", "across"];
const DIRECTIONS: &[&str] = &[
    "north", "south", "east", "west", "north-east", "north-west", "south-east", "south-west", "northeast",
    "northwest", "southeast", "southwest", "northern", "southern", "eastern", "western",
];
const ORG_HEADS: &[&str] = &[
    "inc.", "inc", "corp.", "corp", "corporation", "company", "co.", "university", "college", "ltd.", "ltd",
    "association", "institute", "agency", "department", "bank", "group", "foundation", "party", "council",
    "committee", "club", "school", "ministry", "press", "society",
];

fn lower(t: &TaggedToken) -> String {
    t.surface.to_lowercase()
}

fn is_date_anchor(t: &TaggedToken) -> bool {
    is_capitalized(&t.surface) && {
        let l = lower(t);
        MONTHS.contains(&l.as_str()) || WEEKDAYS.contains(&l.as_str())
    }
}

/// Capitalized tokens that may start or extend a proper-noun run.
fn is_proper_candidate(lex: &Lexicons, t: &TaggedToken) -> bool {
    if !is_capitalized(&t.surface) || t.surface == "I" || t.pos == Pos::Punct {
        return false;
    }
    !matches!(
        lex.pos(&t.surface),
        Some(Pos::Pron | Pos::Det | Pos::Prep | Pos::Conj)
    )
}

/// Finds proper-name runs, numbers and dates in one sentence.
///
/// `tagged` must come from tagging the sentence's own tokens, so their
/// offsets index into `sentence.text`.
pub fn detect_entities(lex: &Lexicons, sentence: &Sentence, tagged: &[TaggedToken]) -> Vec<EntitySpan> {
    let text = sentence.text.as_str();
    let first_word = tagged.iter().position(|t| t.pos != Pos::Punct);
    let mut out = Vec::new();
    let mut i = 0;
    while i < tagged.len() {
        let t = &tagged[i];
        if is_date_anchor(t) {
            let mut j = i + 1;
            while j < tagged.len() {
                let next = &tagged[j];
                if next.pos == Pos::Num || is_date_anchor(next) {
                    j += 1;
                } else if next.surface == "," && tagged.get(j + 1).is_some_and(|n| n.pos == Pos::Num) {
                    j += 2;
                } else {
                    break;
                }
            }
            out.push(make(text, &tagged[i..j], EntityKind::DateLike));
            i = j;
        } else if t.pos == Pos::Num {
            let mut j = i + 1;
            while j < tagged.len() && tagged[j].pos == Pos::Num {
                j += 1;
            }
            out.push(make(text, &tagged[i..j], EntityKind::Number));
            i = j;
        } else if Some(i) != first_word && HONORIFICS.contains(&lower(t).as_str()) {
            // the honorific itself is a cue, not part of the name
            let mut j = i + 1;
            while j < tagged.len() && is_proper_candidate(lex, &tagged[j]) && !is_date_anchor(&tagged[j]) {
                j += 1;
            }
            if j > i + 1 {
                out.push(make(text, &tagged[i + 1..j], EntityKind::PersonLike));
            }
            i = j.max(i + 1);
        } else if Some(i) != first_word && is_proper_candidate(lex, t) && !HONORIFICS.contains(&lower(t).as_str()) {
            let mut j = i + 1;
            while j < tagged.len() && is_proper_candidate(lex, &tagged[j]) && !is_date_anchor(&tagged[j]) {
                j += 1;
            }
            let kind = classify(&tagged[..i], &tagged[i..j]);
            out.push(make(text, &tagged[i..j], kind));
            i = j;
        } else {
            i += 1;
        }
    }
    out
}

fn make(text: &str, run: &[TaggedToken], kind: EntityKind) -> EntitySpan {
    let span = (run[0].start, run[run.len() - 1].end);
    EntitySpan {
        text: text[span.0..span.1].to_string(),
        span,
        kind,
    }
}

fn classify(before: &[TaggedToken], run: &[TaggedToken]) -> EntityKind {
    let words: Vec<String> = run.iter().map(lower).collect();
    if words.iter().any(|w| ORG_HEADS.contains(&w.as_str())) {
        return EntityKind::OrgLike;
    }
    if words.iter().any(|w| PLACE_HEADS.contains(&w.as_str())) {
        return EntityKind::PlaceLike;
    }
    let prev: Vec<String> = before.iter().rev().take(2).map(lower).collect();
    match prev.as_slice() {
        [p, ..] if HONORIFICS.contains(&p.as_str()) => EntityKind::PersonLike,
        [p, ..] if PLACE_CONTEXT.contains(&p.as_str()) => EntityKind::PlaceLike,
        [of, dir, ..] if of == "of" && DIRECTIONS.contains(&dir.as_str()) => EntityKind::PlaceLike,
        [p, ..] if DIRECTIONS.contains(&p.as_str()) => EntityKind::PlaceLike,
        _ => EntityKind::OtherProper,
    }
}
