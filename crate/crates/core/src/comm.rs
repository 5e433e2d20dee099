//! Commutator calculus on `[F_n, F_n]`.
//!
//! Single commutators are recognised exactly through genus-one Wicks forms:
//! a cyclically reduced word is a commutator iff some rotation of it reads
//! `α β γ α⁻¹ β⁻¹ γ⁻¹` letter for letter. Longer products are handled by
//! rewriting bi-invariant norm certificates into commutators and by a
//! bounded search for two-commutator expressions.

use num_traits::Signed;
use thiserror::Error;

use crate::binorm::{binorm, verify_certificate, NormCertificate};
use crate::par;
use crate::qm::{CountingQM, QMValue};
use crate::words::{commutator, cyclic_reduce, reduced_words, Letter, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CommError {
    #[error("{0} is not in the commutator subgroup")]
    NotInCommutatorSubgroup(Word),
    #[error("norm certificate does not verify for {0}")]
    InvalidCertificate(Word),
    #[error("commutator length of {word} not decided within budget ({lower} <= cl <= {upper})")]
    NotExact {
        word: Word,
        lower: usize,
        upper: usize,
    },
    #[error(transparent)]
    Word(#[from] WordError),
}

/// `g = ∏ [uᵢ, vᵢ]`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CommutatorDecomposition {
    pub pairs: Vec<(Word, Word)>,
}

impl CommutatorDecomposition {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn product(&self, rank: u8) -> Result<Word, WordError> {
        let mut acc = Word::identity(rank);
        for (u, v) in &self.pairs {
            acc = acc.try_multiply(&commutator(u, v)?)?;
        }
        Ok(acc)
    }

    pub fn verify(&self, g: &Word) -> bool {
        self.product(g.rank()).as_ref() == Ok(g)
    }
}

/// Every generator has exponent sum zero.
pub fn in_commutator_subgroup(g: &Word) -> bool {
    g.exponent_sums().iter().all(|&e| e == 0)
}

/// Matches the rotation `r` against `α β γ α⁻¹ β⁻¹ γ⁻¹` with the given
/// piece lengths.
fn wicks_match(r: &[Letter], a: usize, b: usize) -> bool {
    let m = r.len() / 2;
    let c = m - a - b;
    let mirrored = |start: usize, len: usize, target: usize| {
        (0..len).all(|t| r[target + t] == r[start + len - 1 - t].inverse())
    };
    mirrored(0, a, m) && mirrored(a, b, m + a) && mirrored(a + b, c, m + a + b)
}

/// `Some((u, v))` with `[u, v] = g` iff `g` is a single commutator.
pub fn is_commutator(g: &Word) -> Option<(Word, Word)> {
    let rank = g.rank();
    if g.is_identity() {
        return Some((Word::identity(rank), Word::identity(rank)));
    }
    if !in_commutator_subgroup(g) {
        return None;
    }
    let (core, p) = cyclic_reduce(g);
    let c = core.letters();
    let n = c.len();
    let m = n / 2;
    let mut r = Vec::with_capacity(n);
    for offset in 0..n {
        r.clear();
        r.extend_from_slice(&c[offset..]);
        r.extend_from_slice(&c[..offset]);
        for a in 0..=m {
            for b in 0..=m - a {
                if !wicks_match(&r, a, b) {
                    continue;
                }
                let piece = |s: usize, e: usize| Word::from_reduced_unchecked(rank, r[s..e].to_vec());
                let (alpha, beta, gamma) = (piece(0, a), piece(a, a + b), piece(a + b, m));
                // α β γ α⁻¹ β⁻¹ γ⁻¹ = [αβ, γα⁻¹]
                let u = &alpha * &beta;
                let v = &gamma * &alpha.inverse();
                // c = s · rot · s⁻¹ with s = c[..offset], and g = p c p⁻¹.
                let s = Word::from_reduced_unchecked(rank, c[..offset].to_vec());
                let x = &p * &s;
                let xi = x.inverse();
                let (u, v) = (&x * &u * &xi, &x * &v * &xi);
                debug_assert_eq!(commutator(&u, &v).ok().as_ref(), Some(g));
                return Some((u, v));
            }
        }
    }
    None
}

/// Rewrites a norm certificate into at most `k / 2` commutators by
/// repeatedly pairing the first conjugate `s^{h₁}` with a later `(s⁻¹)^{h_j}`:
/// `s^{h₁} x (s⁻¹)^{h_j} y = [s^{h₁}, x h_j h₁⁻¹] · x y`.
pub fn bw_to_commutators(
    g: &Word,
    cert: &NormCertificate,
) -> Result<CommutatorDecomposition, CommError> {
    if !in_commutator_subgroup(g) {
        return Err(CommError::NotInCommutatorSubgroup(g.clone()));
    }
    if !verify_certificate(g, cert) {
        return Err(CommError::InvalidCertificate(g.clone()));
    }
    let rank = g.rank();
    let mut factors: Vec<(Letter, Word)> = cert.factors.clone();
    let conj = |(s, h): &(Letter, Word)| {
        let h_inv = h.inverse();
        h * &Word::from_reduced_unchecked(rank, vec![*s]) * &h_inv
    };
    let mut pairs = Vec::with_capacity(factors.len() / 2);
    while !factors.is_empty() {
        let (s1, h1) = factors[0].clone();
        let j = factors
            .iter()
            .position(|(s, _)| *s == s1.inverse())
            .ok_or_else(|| CommError::NotInCommutatorSubgroup(g.clone()))?;
        let x = factors[1..j]
            .iter()
            .fold(Word::identity(rank), |acc, f| &acc * &conj(f));
        let first = conj(&factors[0]);
        let second = &x * &factors[j].1 * &h1.inverse();
        pairs.push((first, second));
        factors.remove(j);
        factors.remove(0);
    }
    let decomposition = CommutatorDecomposition { pairs };
    debug_assert!(decomposition.verify(g));
    Ok(decomposition)
}

/// Budget and pattern family for [`cl_bounds`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClConfig {
    /// Maximum length of the entries of the first commutator when
    /// searching for `g = [u₁, v₁][u₂, v₂]`.
    pub budget: usize,
    /// Quasimorphisms feeding the conditional lower bound.
    pub patterns: Vec<CountingQM>,
}

impl ClConfig {
    pub fn new(budget: usize) -> ClConfig {
        ClConfig {
            budget,
            patterns: Vec::new(),
        }
    }

    pub fn with_patterns(mut self, patterns: Vec<CountingQM>) -> ClConfig {
        self.patterns = patterns;
        self
    }
}

/// Bounds on the commutator length.
///
/// `lower` and `upper` are unconditional. `conditional_lower` additionally
/// uses `|ψ(g)| ≤ (2c - 1)·D` with the configured defect bounds standing in
/// for `D`, so it is only as trustworthy as those bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClBounds {
    pub lower: usize,
    pub upper: usize,
    pub exact: Option<usize>,
    pub conditional_lower: usize,
    /// Shortest decomposition found; its length is `upper`.
    pub decomposition: CommutatorDecomposition,
    /// Number of commutators produced by rewriting the norm certificate.
    pub from_norm: usize,
}

/// `⌈|ψ(g)| / (2D) + 1/2⌉`.
fn bavard_bound(value: QMValue, defect: QMValue) -> usize {
    if defect <= QMValue::from_integer(0) {
        return 0;
    }
    let x = value.abs() / (defect * 2) + QMValue::new(1, 2);
    x.ceil().to_integer().max(0) as usize
}

/// First `g = [u₁, v₁][u₂, v₂]` with `|u₁|, |v₁| ≤ budget`; the second
/// commutator is decided exactly.
pub fn two_commutator_search(g: &Word, budget: usize) -> Option<CommutatorDecomposition> {
    let words: Vec<Word> = reduced_words(g.rank(), budget).into_iter().skip(1).collect();
    par::find_map_first(&words, |u| {
        words.iter().find_map(|v| {
            let c = commutator(u, v).ok()?;
            if c.is_identity() {
                return None;
            }
            let rest = &c.inverse() * g;
            let (u2, v2) = is_commutator(&rest)?;
            Some(CommutatorDecomposition {
                pairs: vec![(u.clone(), v.clone()), (u2, v2)],
            })
        })
    })
}

pub fn cl_bounds(g: &Word, config: &ClConfig) -> Result<ClBounds, CommError> {
    if !in_commutator_subgroup(g) {
        return Err(CommError::NotInCommutatorSubgroup(g.clone()));
    }
    let cert = binorm(g);
    let mut decomposition = bw_to_commutators(g, &cert)?;
    let from_norm = decomposition.len();

    let conditional = if g.is_identity() {
        0
    } else {
        config
            .patterns
            .iter()
            .map(|q| bavard_bound(q.homogenize_exact(g).unwrap_or_default(), q.defect_bound()))
            .max()
            .unwrap_or(0)
    };

    let (lower, exact) = if g.is_identity() {
        (0, Some(0))
    } else if let Some((u, v)) = is_commutator(g) {
        decomposition = CommutatorDecomposition { pairs: vec![(u, v)] };
        (1, Some(1))
    } else if decomposition.len() == 2 {
        (2, Some(2))
    } else if let Some(d) = two_commutator_search(g, config.budget) {
        decomposition = d;
        (2, Some(2))
    } else {
        (2, None)
    };
    let upper = decomposition.len();
    debug_assert!(decomposition.verify(g));
    Ok(ClBounds {
        lower,
        upper,
        exact,
        conditional_lower: conditional.max(lower),
        decomposition,
        from_norm,
    })
}

/// `|g|_ab` on `[F_n, F_n]`, which coincides with the commutator length.
pub fn ab_length(g: &Word, config: &ClConfig) -> Result<usize, CommError> {
    let b = cl_bounds(g, config)?;
    b.exact.ok_or(CommError::NotExact {
        word: g.clone(),
        lower: b.lower,
        upper: b.upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::from_str_letters(2, s).unwrap()
    }

    #[test]
    fn subgroup_membership() {
        assert!(in_commutator_subgroup(&w("abAB")));
        assert!(!in_commutator_subgroup(&w("aa")));
        assert!(in_commutator_subgroup(&w("")));
    }

    #[test]
    fn commutator_examples() {
        let (u, v) = is_commutator(&w("abAB")).unwrap();
        assert_eq!((u, v), (w("a"), w("b")));
        assert!(is_commutator(&w("aa")).is_none());
        assert!(is_commutator(&w("abABabAB")).is_none());
        assert_eq!(is_commutator(&w("")), Some((w(""), w(""))));
    }

    #[test]
    fn commutator_witness_after_conjugation() {
        let g = w("abAB").conjugate_by(&w("bba")).unwrap();
        let (u, v) = is_commutator(&g).unwrap();
        assert_eq!(commutator(&u, &v).unwrap(), g);
        let g = w("abAB").conjugate_by(&w("Ab")).unwrap();
        let (u, v) = is_commutator(&g).unwrap();
        assert_eq!(commutator(&u, &v).unwrap(), g);
    }

    #[test]
    fn rewriting_examples() {
        let g = w("abAB");
        let d = bw_to_commutators(&g, &binorm(&g)).unwrap();
        assert_eq!(d.len(), 1);
        assert!(d.verify(&g));

        let e = w("");
        assert!(bw_to_commutators(&e, &binorm(&e)).unwrap().is_empty());

        let g = w("abABabAB");
        let cert = binorm(&g);
        let d = bw_to_commutators(&g, &cert).unwrap();
        assert!(d.len() <= cert.k / 2);
        assert!(d.verify(&g));
    }

    #[test]
    fn rewriting_errors() {
        assert!(matches!(
            bw_to_commutators(&w("a"), &binorm(&w("a"))),
            Err(CommError::NotInCommutatorSubgroup(_))
        ));
        assert!(matches!(
            bw_to_commutators(&w("abAB"), &binorm(&w("baBA"))),
            Err(CommError::InvalidCertificate(_))
        ));
    }

    #[test]
    fn bounds_examples() {
        let cfg = ClConfig::new(4);
        assert_eq!(cl_bounds(&w("abAB"), &cfg).unwrap().exact, Some(1));
        assert_eq!(cl_bounds(&w(""), &cfg).unwrap().exact, Some(0));
        let b = cl_bounds(&w("abABabAB"), &cfg).unwrap();
        assert_eq!(b.exact, Some(2));
        assert!(b.decomposition.verify(&w("abABabAB")));
        assert!(matches!(
            cl_bounds(&w("ab"), &cfg),
            Err(CommError::NotInCommutatorSubgroup(_))
        ));
    }

    #[test]
    fn ab_length_examples() {
        let cfg = ClConfig::new(4);
        assert_eq!(ab_length(&w("abAB"), &cfg).unwrap(), 1);
        assert_eq!(ab_length(&w(""), &cfg).unwrap(), 0);
        assert_eq!(ab_length(&w("abABabAB"), &cfg).unwrap(), 2);
    }

    #[test]
    fn bavard_rounding() {
        let d = QMValue::from_integer(4);
        assert_eq!(bavard_bound(QMValue::from_integer(0), d), 1);
        assert_eq!(bavard_bound(QMValue::from_integer(4), d), 1);
        assert_eq!(bavard_bound(QMValue::from_integer(5), d), 2);
        assert_eq!(bavard_bound(QMValue::from_integer(-12), d), 2);
        assert_eq!(bavard_bound(QMValue::from_integer(13), d), 3);
    }

    #[test]
    fn two_commutator_search_finds_product() {
        let g = w("abABabAB");
        let d = two_commutator_search(&g, 1).unwrap();
        assert_eq!(d.pairs[0], (w("a"), w("b")));
        assert!(d.verify(&g));
    }
}
