use std::collections::HashMap;

/// Unigram F1 between two token multisets. Zero when either side is empty.
pub fn unigram_f1<S: AsRef<str>>(candidate: &[S], reference: &[S]) -> f64 {
    if candidate.is_empty() || reference.is_empty() {
        return 0.0;
    }
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for w in reference {
        *counts.entry(w.as_ref()).or_default() += 1;
    }
    let mut matches = 0usize;
    for w in candidate {
        if let Some(c) = counts.get_mut(w.as_ref()) {
            if *c > 0 {
                *c -= 1;
                matches += 1;
            }
        }
    }
    if matches == 0 {
        return 0.0;
    }
    // 2PR / (P + R) reduces to 2m / (|c| + |r|); one rounding, so equal
    // ratios compare equal
    (2 * matches) as f64 / (candidate.len() + reference.len()) as f64
}

/// Longest common subsequence length, two-row dynamic programming.
pub fn lcs_length<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for x in a {
        for (j, y) in b.iter().enumerate() {
            cur[j + 1] = if x == y { prev[j] + 1 } else { prev[j + 1].max(cur[j]) };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn f1_examples() {
        assert_eq!(unigram_f1(&["a", "b"], &["a", "b"]), 1.0);
        assert_eq!(unigram_f1(&["a", "b"], &["c", "d"]), 0.0);
        // P = 1/2, R = 1/3, F1 = 2 * (1/6) / (5/6) = 0.4
        assert!((unigram_f1(&["a", "b"], &["a", "c", "d"]) - 0.4).abs() < 1e-15);
        assert_eq!(unigram_f1::<&str>(&[], &["a"]), 0.0);
    }

    #[test]
    fn lcs_examples() {
        assert_eq!(lcs_length(&["a", "b", "c"], &["a", "b", "c"]), 3);
        assert_eq!(lcs_length(&["a", "b", "c"], &["a", "x", "c"]), 2);
        assert_eq!(lcs_length::<&str>(&[], &["a"]), 0);
    }

    proptest! {
        #[test]
        fn lcs_properties(a in prop::collection::vec(0u8..4, 0..10), b in prop::collection::vec(0u8..4, 0..10), s in prop::collection::vec(0u8..4, 0..4)) {
            prop_assert_eq!(lcs_length(&a, &b), lcs_length(&b, &a));
            prop_assert_eq!(lcs_length(&a, &a), a.len());
            let (mut a2, mut b2) = (a.clone(), b.clone());
            a2.extend(&s);
            b2.extend(&s);
            prop_assert!(lcs_length(&a2, &b2) >= lcs_length(&a, &b));
        }
    }
}
