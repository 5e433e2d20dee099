use super::{Letter, Word};

/// All reduced words of exactly `len` letters, in shortlex order.
pub fn reduced_words_of_length(rank: u8, len: usize) -> Vec<Word> {
    let mut layer = vec![Vec::<Letter>::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(layer.len() * (2 * rank as usize));
        for w in &layer {
            for l in Letter::all(rank) {
                if w.last() == Some(&l.inverse()) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        layer = next;
    }
    layer
        .into_iter()
        .map(|l| Word::from_reduced_unchecked(rank, l))
        .collect()
}

/// All reduced words of length at most `max_len`, in shortlex order.
pub fn reduced_words(rank: u8, max_len: usize) -> Vec<Word> {
    (0..=max_len)
        .flat_map(|len| reduced_words_of_length(rank, len))
        .collect()
}

/// One cyclically reduced representative per conjugacy class, for every
/// class whose cyclic length is at most `max_len`. Each representative is
/// the least rotation of its core; the identity comes first.
pub fn canonical_cyclic_words(rank: u8, max_len: usize) -> Vec<Word> {
    reduced_words(rank, max_len)
        .into_iter()
        .filter(|w| w.is_cyclically_reduced() && super::cyclic::is_least_rotation(w.letters()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn counts_match_formula() {
        // 2r(2r-1)^(n-1) reduced words of length n.
        for rank in 1..=3u8 {
            for n in 1..=5usize {
                let expected = 2 * rank as usize * (2 * rank as usize - 1).pow(n as u32 - 1);
                assert_eq!(reduced_words_of_length(rank, n).len(), expected);
            }
        }
    }

    #[test]
    fn shortlex_sorted() {
        let ws = reduced_words(2, 4);
        assert!(ws.windows(2).all(|p| p[0] < p[1]));
        assert_eq!(ws[1].to_string(), "a");
        assert_eq!(ws[2].to_string(), "A");
    }

    #[test]
    fn canonical_words_are_one_per_class() {
        let reps = canonical_cyclic_words(2, 5);
        let classes: HashSet<_> = reduced_words(2, 5)
            .iter()
            .map(super::super::CyclicWord::from_word)
            .collect();
        assert_eq!(reps.len(), classes.len());
    }
}
