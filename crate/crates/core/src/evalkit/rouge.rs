use crate::textkit::{lcs_length, words_lower};

/// Rouge-L F1 over lowercased alphanumeric tokens.
pub fn rouge_l(candidate: &str, reference: &str) -> f64 {
    rouge_l_tokens(&words_lower(candidate), &words_lower(reference))
}

/// Rouge-L F1 over pre-tokenized sequences.
pub fn rouge_l_tokens<T: PartialEq>(candidate: &[T], reference: &[T]) -> f64 {
    if candidate.is_empty() || reference.is_empty() {
        return 0.0;
    }
    let l = lcs_length(candidate, reference);
    if l == 0 {
        return 0.0;
    }
    // 2PR / (P + R) with P = l/|c|, R = l/|r|
    (2 * l) as f64 / (candidate.len() + reference.len()) as f64
}
