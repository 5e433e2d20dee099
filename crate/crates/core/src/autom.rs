//! Automorphisms of `F_n`, exact innerness, and non-innerness certificates
//! built from counting quasimorphisms.

use serde_json::json;
use thiserror::Error;

use crate::qm::{find_additivity_violation, CountingQM, QMValue, QmError};
use crate::words::{
    are_conjugate, are_strongly_commensurable, reduced_words, Word, WordError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutError {
    #[error("expected {expected} generator images, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("images and inverse images are not mutually inverse (generator {generator})")]
    NotInverse { generator: u8 },
    #[error("Nielsen generators need rank at least 2, got {0}")]
    RankTooSmall(u8),
    #[error("automorphism is inner (conjugation by {0})")]
    Inner(Word),
    #[error("budget must be at least 1")]
    InvalidBudget,
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Qm(#[from] QmError),
}

/// An automorphism given by generator images together with the images of
/// its inverse. Construction verifies both compositions are the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automorphism {
    rank: u8,
    images: Vec<Word>,
    inverse_images: Vec<Word>,
}

fn substitute(images: &[Word], rank: u8, g: &Word) -> Word {
    let mut out = Word::identity(rank);
    for l in g.letters() {
        let img = &images[l.generator() as usize - 1];
        out = if l.is_inverse() {
            &out * &img.inverse()
        } else {
            &out * img
        };
    }
    out
}

impl Automorphism {
    pub fn new(images: Vec<Word>, inverse_images: Vec<Word>) -> Result<Automorphism, AutError> {
        let rank = images
            .first()
            .map(Word::rank)
            .ok_or(AutError::WrongArity {
                expected: 1,
                got: 0,
            })?;
        for seq in [&images, &inverse_images] {
            if seq.len() != rank as usize {
                return Err(AutError::WrongArity {
                    expected: rank as usize,
                    got: seq.len(),
                });
            }
            for w in seq.iter() {
                if w.rank() != rank {
                    return Err(WordError::RankMismatch {
                        left: rank,
                        right: w.rank(),
                    }
                    .into());
                }
            }
        }
        for i in 1..=rank {
            let x = Word::generator(rank, i)?;
            let there_and_back =
                substitute(&images, rank, &substitute(&inverse_images, rank, &x));
            let back_and_there =
                substitute(&inverse_images, rank, &substitute(&images, rank, &x));
            if there_and_back != x || back_and_there != x {
                return Err(AutError::NotInverse { generator: i });
            }
        }
        Ok(Automorphism {
            rank,
            images,
            inverse_images,
        })
    }

    pub fn identity(rank: u8) -> Automorphism {
        let gens: Vec<Word> = (1..=rank)
            .map(|i| Word::generator(rank, i).expect("rank checked by Word::identity"))
            .collect();
        Automorphism {
            rank,
            images: gens.clone(),
            inverse_images: gens,
        }
    }

    /// `g ↦ w g w⁻¹`.
    pub fn conjugation(w: &Word) -> Automorphism {
        let rank = w.rank();
        let winv = w.inverse();
        let gens = (1..=rank).map(|i| Word::generator(rank, i).unwrap());
        let (images, inverse_images) = gens
            .map(|x| (&(w * &x) * &winv, &(&winv * &x) * w))
            .unzip();
        Automorphism {
            rank,
            images,
            inverse_images,
        }
    }

    pub fn rank(&self) -> u8 {
        self.rank
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn inverse_images(&self) -> &[Word] {
        &self.inverse_images
    }

    pub fn apply(&self, g: &Word) -> Result<Word, WordError> {
        if g.rank() != self.rank {
            return Err(WordError::RankMismatch {
                left: self.rank,
                right: g.rank(),
            });
        }
        Ok(self.apply_unchecked(g))
    }

    pub(crate) fn apply_unchecked(&self, g: &Word) -> Word {
        substitute(&self.images, self.rank, g)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Automorphism) -> Result<Automorphism, AutError> {
        if self.rank != other.rank {
            return Err(WordError::RankMismatch {
                left: self.rank,
                right: other.rank,
            }
            .into());
        }
        let images = other.images.iter().map(|w| self.apply_unchecked(w)).collect();
        let inverse_images = self
            .inverse_images
            .iter()
            .map(|w| substitute(&other.inverse_images, self.rank, w))
            .collect();
        Ok(Automorphism {
            rank: self.rank,
            images,
            inverse_images,
        })
    }

    pub fn invert(&self) -> Automorphism {
        Automorphism {
            rank: self.rank,
            images: self.inverse_images.clone(),
            inverse_images: self.images.clone(),
        }
    }

    /// Whether the induced map on `Z^rank` is the identity matrix.
    pub fn acts_trivially_on_abelianization(&self) -> bool {
        self.images.iter().enumerate().all(|(i, w)| {
            w.exponent_sums()
                .iter()
                .enumerate()
                .all(|(j, &e)| e == i64::from(i == j))
        })
    }
}

/// Builds an automorphism, verifying the supplied inverse.
pub fn make_automorphism(
    images: Vec<Word>,
    inverse_images: Vec<Word>,
) -> Result<Automorphism, AutError> {
    Automorphism::new(images, inverse_images)
}

/// Transpositions of generators, inversions `x_i ↦ x_i⁻¹`, and transvections
/// `x_i ↦ x_i x_j^±1` and `x_i ↦ x_j^±1 x_i` for `i ≠ j`.
pub fn nielsen_generators(rank: u8) -> Result<Vec<Automorphism>, AutError> {
    if rank < 2 {
        return Err(AutError::RankTooSmall(rank));
    }
    let gens: Vec<Word> = (1..=rank)
        .map(|i| Word::generator(rank, i))
        .collect::<Result<_, _>>()?;
    let with = |i: usize, w: Word| {
        let mut v = gens.clone();
        v[i] = w;
        v
    };
    let mut out = Vec::new();
    let n = rank as usize;
    for i in 0..n {
        for j in i + 1..n {
            let mut v = gens.clone();
            v.swap(i, j);
            out.push(Automorphism::new(v.clone(), v)?);
        }
    }
    for (i, x) in gens.iter().enumerate() {
        let v = with(i, x.inverse());
        out.push(Automorphism::new(v.clone(), v)?);
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for s in [1i64, -1] {
                let xj = gens[j].pow(s);
                let right = with(i, &gens[i] * &xj);
                let right_inv = with(i, &gens[i] * &xj.inverse());
                out.push(Automorphism::new(right, right_inv)?);
                let left = with(i, &xj * &gens[i]);
                let left_inv = with(i, &xj.inverse() * &gens[i]);
                out.push(Automorphism::new(left, left_inv)?);
            }
        }
    }
    Ok(out)
}

/// `φ = (g ↦ w g w⁻¹)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InnerWitness {
    pub conjugator: Word,
}

impl InnerWitness {
    pub fn verify(&self, phi: &Automorphism) -> bool {
        (1..=phi.rank()).all(|i| {
            let x = Word::generator(phi.rank(), i).unwrap();
            x.conjugate_by(&self.conjugator).ok().as_ref() == Some(&phi.images()[i as usize - 1])
        })
    }
}

/// Exact innerness decision.
///
/// The abelianization must be trivial; then `w x₁ w⁻¹ = φ(x₁)` pins `w` to a
/// coset `w₀⟨x₁⟩`, and each remaining generator leaves finitely many
/// exponents `t` with `w₀ x₁ᵗ` a solution.
pub fn is_inner(phi: &Automorphism) -> Option<InnerWitness> {
    if !phi.acts_trivially_on_abelianization() {
        return None;
    }
    let rank = phi.rank();
    let x1 = Word::generator(rank, 1).unwrap();
    let w0 = are_conjugate(&x1, &phi.images()[0]).ok()??;
    let candidates: Vec<Word> = if rank == 1 {
        vec![w0.clone()]
    } else {
        let x2 = Word::generator(rank, 2).unwrap();
        let target = &phi.images()[1];
        // |w₀ x₁ᵗ x₂ x₁⁻ᵗ w₀⁻¹| ≥ 2|t| + 1 - 2|w₀|.
        let bound = (target.len() + x2.len() + 2 * w0.len()) as i64 / 2 + 1;
        (-bound..=bound)
            .map(|t| &w0 * &x1.pow(t))
            .filter(|w| x2.conjugate_by(w).ok().as_ref() == Some(target))
            .collect()
    };
    candidates
        .into_iter()
        .map(|conjugator| InnerWitness { conjugator })
        .find(|wit| wit.verify(phi))
}

/// Per-word result of the bounded strong-commensuration check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommensurationWitness {
    pub word: Word,
    /// `(m, h)` with `φ(g^m) = h g^m h⁻¹`, if found within budget.
    pub witness: Option<(u32, Word)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommensurationReport {
    pub all_pass: bool,
    pub words: Vec<CommensurationWitness>,
}

/// For each test word `g`, searches `1 ≤ m ≤ exponent_budget` for `h` with
/// `φ(g^m) = h g^m h⁻¹`.
pub fn is_strongly_commensurating_bounded(
    phi: &Automorphism,
    test_words: &[Word],
    exponent_budget: u32,
) -> Result<CommensurationReport, AutError> {
    if exponent_budget == 0 {
        return Err(AutError::InvalidBudget);
    }
    let mut words = Vec::with_capacity(test_words.len());
    for g in test_words {
        let mut witness = None;
        for m in 1..=exponent_budget {
            let gm = g.pow(m as i64);
            let image = phi.apply(&gm)?;
            if let Some(s) = are_strongly_commensurable(&gm, &image)? {
                // n = 1 always for free groups.
                debug_assert_eq!(s.n, 1);
                witness = Some((m, s.conjugator));
                break;
            }
        }
        words.push(CommensurationWitness {
            word: g.clone(),
            witness,
        });
    }
    Ok(CommensurationReport {
        all_pass: words.iter().all(|w| w.witness.is_some()),
        words,
    })
}

/// Exact evidence that `φ` moves a homogeneous quasimorphism, hence is not
/// strongly commensurating and in particular not inner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonInnerCertificate {
    pub pattern: Word,
    pub g: Word,
    pub value: QMValue,
    pub value_phi: QMValue,
    pub violation_pair: Option<(Word, Word)>,
}

impl NonInnerCertificate {
    /// Re-evaluates every claim exactly.
    pub fn verify(&self, phi: &Automorphism) -> bool {
        let Ok(q) = CountingQM::new(self.pattern.clone()) else {
            return false;
        };
        let Ok(image) = phi.apply(&self.g) else {
            return false;
        };
        let (Ok(v), Ok(vp)) = (q.homogenize_exact(&self.g), q.homogenize_exact(&image)) else {
            return false;
        };
        if v != self.value || vp != self.value_phi || v == vp {
            return false;
        }
        match &self.violation_pair {
            None => true,
            Some((x, y)) => {
                let r = |g: &Word| -> Option<QMValue> {
                    Some(q.homogenize_exact(g).ok()? - q.homogenize_exact(&phi.apply(g).ok()?).ok()?)
                };
                match (r(x), r(y), x.try_multiply(y).ok().and_then(|xy| r(&xy))) {
                    (Some(rx), Some(ry), Some(rxy)) => rxy != rx + ry,
                    _ => false,
                }
            }
        }
    }

    /// Whether the certificate meets the strict form: `ψ(g) ≠ 0`,
    /// `ψ(φ(g)) = 0` and a violation pair is attached.
    pub fn is_strict(&self) -> bool {
        self.value != QMValue::from_integer(0)
            && self.value_phi == QMValue::from_integer(0)
            && self.violation_pair.is_some()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "pattern": self.pattern.to_string(),
            "g": self.g.to_string(),
            "value": self.value.to_string(),
            "value_phi": self.value_phi.to_string(),
            "violation_pair": self
                .violation_pair
                .as_ref()
                .map(|(x, y)| json!([x.to_string(), y.to_string()])),
        })
    }
}

/// Search budgets for [`find_noninner_witness`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WitnessSearch {
    pub pattern_max_len: usize,
    pub g_max_len: usize,
    pub pair_budget: usize,
    pub strict: bool,
}

impl Default for WitnessSearch {
    fn default() -> Self {
        WitnessSearch {
            pattern_max_len: 3,
            g_max_len: 3,
            pair_budget: 3,
            strict: false,
        }
    }
}

/// Budgeted search for a counting quasimorphism separating `g` from `φ(g)`.
///
/// Patterns are tried in shortlex order, and for each pattern the words `g`
/// in shortlex order; the first admissible `(pattern, g)` wins. In strict
/// mode a pattern is admissible only if `ψ - ψ∘φ` has an additivity
/// violation within `pair_budget`, and `g` only if `ψ(g) ≠ 0 = ψ(φ(g))`.
pub fn find_noninner_witness(
    phi: &Automorphism,
    search: WitnessSearch,
) -> Result<Option<NonInnerCertificate>, AutError> {
    if let Some(w) = is_inner(phi) {
        return Err(AutError::Inner(w.conjugator));
    }
    if search.pattern_max_len == 0 || search.g_max_len == 0 || search.pair_budget == 0 {
        return Err(AutError::InvalidBudget);
    }
    let rank = phi.rank();
    let candidates: Vec<(Word, Word)> = reduced_words(rank, search.g_max_len)
        .into_iter()
        .skip(1)
        .map(|g| {
            let fg = phi.apply_unchecked(&g);
            (g, fg)
        })
        .collect();
    for pattern in reduced_words(rank, search.pattern_max_len).into_iter().skip(1) {
        let q = CountingQM::new(pattern.clone())?;
        let hit = candidates.iter().find(|(g, fg)| {
            let (v, vp) = (q.psi(g), q.psi(fg));
            if search.strict {
                v != 0 && vp == 0
            } else {
                v != vp
            }
        });
        let Some((g, fg)) = hit else { continue };
        let violation_pair = if search.strict {
            match find_additivity_violation(&q, phi, search.pair_budget)? {
                Some(pair) => Some(pair),
                None => continue,
            }
        } else {
            None
        };
        let cert = NonInnerCertificate {
            value: QMValue::from_integer(q.psi(g)),
            value_phi: QMValue::from_integer(q.psi(fg)),
            pattern,
            g: g.clone(),
            violation_pair,
        };
        debug_assert!(cert.verify(phi));
        return Ok(Some(cert));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qm::compose_with_aut;

    fn w(rank: u8, s: &str) -> Word {
        Word::from_str_letters(rank, s).unwrap()
    }

    fn aut(rank: u8, imgs: &[&str], inv: &[&str]) -> Result<Automorphism, AutError> {
        make_automorphism(
            imgs.iter().map(|s| w(rank, s)).collect(),
            inv.iter().map(|s| w(rank, s)).collect(),
        )
    }

    fn swap() -> Automorphism {
        aut(2, &["b", "a"], &["b", "a"]).unwrap()
    }

    fn transvection() -> Automorphism {
        aut(2, &["ab", "b"], &["aB", "b"]).unwrap()
    }

    #[test]
    fn construction() {
        assert!(aut(2, &["a", "b"], &["a", "b"]).is_ok());
        assert!(aut(2, &["b", "a"], &["b", "a"]).is_ok());
        assert!(matches!(
            aut(2, &["a", "a"], &["a", "b"]),
            Err(AutError::NotInverse { .. })
        ));
        assert!(matches!(
            aut(2, &["ab", "b"], &["ab", "b"]),
            Err(AutError::NotInverse { .. })
        ));
        assert!(matches!(
            aut(2, &["a"], &["a"]),
            Err(AutError::WrongArity { .. })
        ));
    }

    #[test]
    fn nielsen_contents() {
        let gens = nielsen_generators(2).unwrap();
        assert!(gens.contains(&swap()));
        assert!(gens.contains(&transvection()));
        assert_eq!(nielsen_generators(1), Err(AutError::RankTooSmall(1)));
        for phi in nielsen_generators(3).unwrap() {
            assert!(Automorphism::new(phi.images().to_vec(), phi.inverse_images().to_vec()).is_ok());
        }
    }

    #[test]
    fn apply_compose_invert() {
        assert_eq!(swap().apply(&w(2, "abAB")).unwrap(), w(2, "baBA"));
        assert_eq!(transvection().apply(&w(2, "aa")).unwrap(), w(2, "abab"));
        let t = transvection();
        let id = t.compose(&t.invert()).unwrap();
        assert_eq!(id, Automorphism::identity(2));
        let s = swap();
        let st = s.compose(&t).unwrap();
        let g = w(2, "aBBa");
        assert_eq!(st.apply(&g).unwrap(), s.apply(&t.apply(&g).unwrap()).unwrap());
        assert!(Automorphism::new(st.images().to_vec(), st.inverse_images().to_vec()).is_ok());
    }

    #[test]
    fn apply_is_a_homomorphism() {
        let phi = transvection().compose(&swap()).unwrap();
        let ws = reduced_words(2, 3);
        for u in &ws {
            for v in &ws {
                assert_eq!(
                    phi.apply(&(u * v)).unwrap(),
                    &phi.apply(u).unwrap() * &phi.apply(v).unwrap()
                );
            }
        }
    }

    #[test]
    fn inner_examples() {
        let conj_a = aut(2, &["a", "abA"], &["a", "Aba"]).unwrap();
        assert_eq!(is_inner(&conj_a).unwrap().conjugator, w(2, "a"));
        assert!(is_inner(&swap()).is_none());
        assert!(is_inner(&transvection()).is_none());
        let ia = aut(3, &["a", "b", "cabAB"], &["a", "b", "cbaBA"]).unwrap();
        assert!(is_inner(&ia).is_none());
        assert_eq!(
            is_inner(&Automorphism::identity(2)).unwrap().conjugator,
            Word::identity(2)
        );
    }

    #[test]
    fn inner_recovers_conjugator_up_to_center() {
        for c in reduced_words(3, 3) {
            let phi = Automorphism::conjugation(&c);
            let wit = is_inner(&phi).expect("conjugation is inner");
            assert!(wit.verify(&phi));
            // F_n has trivial center, so the conjugator is unique.
            assert_eq!(wit.conjugator, c);
        }
    }

    #[test]
    fn strong_commensuration() {
        let tests = reduced_words(2, 3);
        let inner = Automorphism::conjugation(&w(2, "abA"));
        let rep = is_strongly_commensurating_bounded(&inner, &tests, 1).unwrap();
        assert!(rep.all_pass);
        let rep = is_strongly_commensurating_bounded(&Automorphism::identity(2), &tests, 2).unwrap();
        assert!(rep.all_pass);
        let rep = is_strongly_commensurating_bounded(&swap(), &[w(2, "a")], 6).unwrap();
        assert!(!rep.all_pass);
        assert_eq!(rep.words[0].witness, None);
    }

    #[test]
    fn compose_with_aut_examples() {
        let q = CountingQM::new(w(2, "aa")).unwrap();
        assert_eq!(compose_with_aut(&q, &swap(), &w(2, "a")).unwrap(), QMValue::from_integer(0));
        let g = w(2, "aaBab");
        let id = Automorphism::identity(2);
        assert_eq!(compose_with_aut(&q, &id, &g).unwrap(), q.homogenize_exact(&g).unwrap());
        let inner = Automorphism::conjugation(&w(2, "bA"));
        assert_eq!(compose_with_aut(&q, &inner, &g).unwrap(), q.homogenize_exact(&g).unwrap());
    }

    #[test]
    fn additivity_violation() {
        let q = CountingQM::new(w(2, "aa")).unwrap();
        let (x, y) = find_additivity_violation(&q, &swap(), 4).unwrap().unwrap();
        let r = |g: &Word| {
            q.homogenize_exact(g).unwrap() - compose_with_aut(&q, &swap(), g).unwrap()
        };
        assert_ne!(r(&(&x * &y)), r(&x) + r(&y));
        // Shortlex-first pair: r(a) = r(B) = 1 but aB has no `aa`, `bb`
        // windows, so r(aB) = 0.
        assert_eq!((x.to_string(), y.to_string()), ("a".into(), "B".into()));
        // The pair (a, baB) also violates additivity.
        let (a, bab) = (w(2, "a"), w(2, "baB"));
        assert_eq!(r(&a), QMValue::from_integer(1));
        assert_eq!(r(&bab), QMValue::from_integer(1));
        assert_eq!(r(&(&a * &bab)), QMValue::from_integer(0));

        let id = Automorphism::identity(2);
        assert_eq!(find_additivity_violation(&q, &id, 3).unwrap(), None);
        let lin = CountingQM::new(w(2, "a")).unwrap();
        assert_eq!(find_additivity_violation(&lin, &transvection(), 3).unwrap(), None);
        assert_eq!(find_additivity_violation(&lin, &swap(), 3).unwrap(), None);
    }

    #[test]
    fn swap_witness() {
        let search = WitnessSearch {
            pattern_max_len: 2,
            g_max_len: 2,
            pair_budget: 4,
            strict: true,
        };
        let cert = find_noninner_witness(&swap(), search).unwrap().unwrap();
        assert_eq!(cert.pattern, w(2, "aa"));
        assert_eq!(cert.g, w(2, "a"));
        assert!(cert.is_strict() && cert.verify(&swap()));

        let plain = find_noninner_witness(&swap(), WitnessSearch::default()).unwrap().unwrap();
        assert_eq!((plain.pattern.to_string(), plain.g.to_string()), ("a".into(), "a".into()));
    }

    #[test]
    fn transvection_witness() {
        let search = WitnessSearch {
            pattern_max_len: 3,
            g_max_len: 2,
            ..WitnessSearch::default()
        };
        let cert = find_noninner_witness(&transvection(), search).unwrap().unwrap();
        assert!(cert.verify(&transvection()));
    }

    #[test]
    fn witness_refuses_inner() {
        let inner = Automorphism::conjugation(&w(2, "ab"));
        assert!(matches!(
            find_noninner_witness(&inner, WitnessSearch::default()),
            Err(AutError::Inner(_))
        ));
    }

    #[test]
    fn forged_certificate_fails() {
        let cert = NonInnerCertificate {
            pattern: w(2, "aa"),
            g: w(2, "a"),
            value: QMValue::from_integer(1),
            value_phi: QMValue::from_integer(1),
            violation_pair: None,
        };
        assert!(!cert.verify(&swap()));
    }
}
