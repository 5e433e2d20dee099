use std::hash::{Hash, Hasher};

use super::{Letter, Word, WordError};

/// A cyclically reduced word considered up to rotation.
///
/// `letters` keeps the core exactly as produced by [`cyclic_reduce`], so
/// `g = conjugator · core · conjugator⁻¹` holds literally. Equality and
/// hashing use the lexicographically least rotation.
#[derive(Clone, Debug)]
pub struct CyclicWord {
    rank: u8,
    letters: Vec<Letter>,
    canonical: Vec<Letter>,
}

fn least_rotation(letters: &[Letter]) -> usize {
    let n = letters.len();
    let mut best = 0;
    for start in 1..n {
        let cmp = (0..n)
            .map(|i| letters[(start + i) % n].cmp(&letters[(best + i) % n]))
            .find(|o| o.is_ne());
        if cmp == Some(std::cmp::Ordering::Less) {
            best = start;
        }
    }
    best
}

pub(crate) fn is_least_rotation(letters: &[Letter]) -> bool {
    least_rotation(letters) == 0
}

pub(crate) fn rotate(letters: &[Letter], by: usize) -> Vec<Letter> {
    let n = letters.len();
    if n == 0 {
        return Vec::new();
    }
    (0..n).map(|i| letters[(by + i) % n]).collect()
}

impl CyclicWord {
    /// Cyclically reduces `g` and forgets the conjugator.
    pub fn from_word(g: &Word) -> CyclicWord {
        cyclic_reduce(g).0
    }

    fn from_core(rank: u8, letters: Vec<Letter>) -> CyclicWord {
        let canonical = rotate(&letters, least_rotation(&letters));
        CyclicWord {
            rank,
            letters,
            canonical,
        }
    }

    pub fn rank(&self) -> u8 {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// The core as an ordinary word.
    pub fn as_word(&self) -> Word {
        Word::from_reduced_unchecked(self.rank, self.letters.clone())
    }

    /// The least rotation as an ordinary word.
    pub fn canonical_word(&self) -> Word {
        Word::from_reduced_unchecked(self.rank, self.canonical.clone())
    }

    /// Whether the stored core is already the least rotation.
    pub fn is_canonical(&self) -> bool {
        self.letters == self.canonical
    }
}

impl PartialEq for CyclicWord {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.canonical == other.canonical
    }
}

impl Eq for CyclicWord {}

impl Hash for CyclicWord {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rank.hash(state);
        self.canonical.hash(state);
    }
}

/// Splits `g = conjugator · core · conjugator⁻¹` with `core` cyclically reduced.
pub fn cyclic_reduce(g: &Word) -> (CyclicWord, Word) {
    let l = g.letters();
    let mut lo = 0;
    let mut hi = l.len();
    while hi - lo >= 2 && l[lo] == l[hi - 1].inverse() {
        lo += 1;
        hi -= 1;
    }
    let core = CyclicWord::from_core(g.rank(), l[lo..hi].to_vec());
    (core, g.subword(0, lo))
}

/// Returns `x` with `x · u · x⁻¹ = v` when `u` and `v` are conjugate.
///
/// Among the conjugators obtained from rotations of the cyclic cores the
/// shortest one is returned (shortlex on ties).
pub fn are_conjugate(u: &Word, v: &Word) -> Result<Option<Word>, WordError> {
    u.same_rank(v)?;
    let (cu, p) = cyclic_reduce(u);
    let (cv, q) = cyclic_reduce(v);
    if cu.len() != cv.len() || cu.canonical != cv.canonical {
        return Ok(None);
    }
    let n = cu.len();
    let p_inv = p.inverse();
    let mut best: Option<Word> = None;
    for offset in 0..n.max(1) {
        if n > 0 && rotate(cu.letters(), offset) != cv.letters() {
            continue;
        }
        // cu = s t and cv = t s = s⁻¹ cu s, so x = q s⁻¹ p⁻¹.
        let s = Word::from_reduced_unchecked(u.rank(), cu.letters()[..offset].to_vec());
        let x = &q * &s.inverse() * &p_inv;
        if best.as_ref().is_none_or(|b| x < *b) {
            best = Some(x);
        }
    }
    if let Some(x) = &best {
        debug_assert_eq!(&(x * u * &x.inverse()), v);
    }
    Ok(best)
}

/// Writes `g = root^exponent` with `root` not a proper power.
///
/// For a word that is not cyclically reduced the root is conjugated back,
/// so the identity holds literally rather than up to conjugacy.
pub fn primitive_root(g: &Word) -> Result<(Word, u32), WordError> {
    if g.is_identity() {
        return Err(WordError::Identity);
    }
    let (core, conj) = cyclic_reduce(g);
    let c = core.letters();
    let n = c.len();
    let period = (1..=n)
        .filter(|d| n % d == 0)
        .find(|&d| (d..n).all(|i| c[i] == c[i - d]))
        .unwrap_or(n);
    let base = Word::from_reduced_unchecked(g.rank(), c[..period].to_vec());
    let root = &conj * &base * &conj.inverse();
    Ok((root, (n / period) as u32))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::from_str_letters(2, s).unwrap()
    }

    #[test]
    fn cyclic_reduce_examples() {
        let (core, conj) = cyclic_reduce(&w("baaB"));
        assert_eq!(core.as_word(), w("aa"));
        assert_eq!(conj, w("b"));
        let (core, conj) = cyclic_reduce(&w("abAB"));
        assert_eq!(core.as_word(), w("abAB"));
        assert!(conj.is_identity());
        let (core, conj) = cyclic_reduce(&w(""));
        assert!(core.is_empty() && conj.is_identity());
    }

    #[test]
    fn single_letter_is_cyclically_reduced() {
        let (core, conj) = cyclic_reduce(&w("bAB"));
        assert_eq!(core.as_word(), w("A"));
        assert_eq!(conj, w("b"));
    }

    #[test]
    fn canonical_rotation_equality() {
        assert_eq!(CyclicWord::from_word(&w("ab")), CyclicWord::from_word(&w("ba")));
        assert_eq!(CyclicWord::from_word(&w("bABa")).canonical_word(), w("abAB"));
        assert_ne!(CyclicWord::from_word(&w("ab")), CyclicWord::from_word(&w("aB")));
    }

    #[test]
    fn conjugacy_examples() {
        let x = are_conjugate(&w("ab"), &w("ba")).unwrap().unwrap();
        assert_eq!(&x * &w("ab") * &x.inverse(), w("ba"));
        assert!(are_conjugate(&w("a"), &w("b")).unwrap().is_none());
        let x = are_conjugate(&w("abAB"), &w("bABa")).unwrap().unwrap();
        assert_eq!(&x * &w("abAB") * &x.inverse(), w("bABa"));
        assert_eq!(are_conjugate(&w(""), &w("")).unwrap(), Some(w("")));
    }

    #[test]
    fn conjugacy_witness_direction() {
        // b · a · B = baB
        assert_eq!(are_conjugate(&w("a"), &w("baB")).unwrap(), Some(w("b")));
    }

    #[test]
    fn primitive_root_examples() {
        assert_eq!(primitive_root(&w("aaaaaa")).unwrap(), (w("a"), 6));
        assert_eq!(primitive_root(&w("abab")).unwrap(), (w("ab"), 2));
        assert_eq!(primitive_root(&w("baaB")).unwrap(), (w("baB"), 2));
        assert_eq!(primitive_root(&w("")), Err(WordError::Identity));
    }

    #[test]
    fn primitive_root_brute_force() {
        use std::collections::HashMap;
        // Largest exponent by enumerating every power r^e of length <= 7.
        let mut best: HashMap<Word, u32> = HashMap::new();
        for r in crate::words::reduced_words(2, 7) {
            if r.is_identity() {
                continue;
            }
            for e in 2..=7u32 {
                let p = r.pow(e as i64);
                if p.len() > 7 {
                    break;
                }
                let slot = best.entry(p).or_insert(1);
                *slot = (*slot).max(e);
            }
        }
        for g in crate::words::reduced_words(2, 7) {
            if g.is_identity() {
                continue;
            }
            let (root, k) = primitive_root(&g).unwrap();
            assert_eq!(root.pow(k as i64), g);
            assert_eq!(k, best.get(&g).copied().unwrap_or(1), "{g}");
            assert_eq!(primitive_root(&root).unwrap(), (root.clone(), 1));
        }
    }
}
