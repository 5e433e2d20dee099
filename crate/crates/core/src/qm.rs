//! Brooks counting quasimorphisms and their homogenizations.
//!
//! `q_w(g)` counts overlapping occurrences of the pattern `w` in the reduced
//! word `g` minus occurrences of `w⁻¹`. The homogenization `ψ_w(g)` is the
//! same count taken over one period of the bi-infinite word `c^∞`, where `c`
//! is the cyclic core of `g`; it is exactly homogeneous and conjugation
//! invariant.

use num_rational::Rational64;
use thiserror::Error;

use crate::autom::Automorphism;
use crate::par;
use crate::words::{cyclic_reduce, reduced_words, Letter, Word, WordError};

/// Exact rational value of a quasimorphism.
pub type QMValue = Rational64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QmError {
    #[error("counting pattern must be a nonempty word")]
    EmptyPattern,
    #[error("defect bound must be nonnegative, got {0}")]
    NegativeDefectBound(QMValue),
    #[error("budget must be at least 1")]
    InvalidBudget,
    #[error("configured defect bound {bound} is below the observed defect {observed}")]
    DefectBoundExceeded { observed: QMValue, bound: QMValue },
    #[error(transparent)]
    Word(#[from] WordError),
}

/// A Brooks counting quasimorphism with a configured upper bound for its
/// defect. The bound is configuration, checked by [`empirical_defect`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountingQM {
    pattern: Word,
    inverse: Word,
    defect_bound: QMValue,
}

/// `2(|w| - 1) + 2`.
pub fn default_defect_bound(pattern_len: usize) -> QMValue {
    QMValue::from_integer(2 * (pattern_len as i64 - 1) + 2)
}

fn count_linear(text: &[Letter], pat: &[Letter]) -> i64 {
    if pat.len() > text.len() {
        return 0;
    }
    text.windows(pat.len()).filter(|w| *w == pat).count() as i64
}

fn count_cyclic(core: &[Letter], pat: &[Letter]) -> i64 {
    let n = core.len();
    if n == 0 {
        return 0;
    }
    (0..n)
        .filter(|&i| pat.iter().enumerate().all(|(t, l)| core[(i + t) % n] == *l))
        .count() as i64
}

impl CountingQM {
    pub fn new(pattern: Word) -> Result<CountingQM, QmError> {
        if pattern.is_identity() {
            return Err(QmError::EmptyPattern);
        }
        let defect_bound = default_defect_bound(pattern.len());
        Ok(CountingQM {
            inverse: pattern.inverse(),
            pattern,
            defect_bound,
        })
    }

    pub fn with_defect_bound(mut self, bound: QMValue) -> Result<CountingQM, QmError> {
        if bound < QMValue::from_integer(0) {
            return Err(QmError::NegativeDefectBound(bound));
        }
        self.defect_bound = bound;
        Ok(self)
    }

    pub fn pattern(&self) -> &Word {
        &self.pattern
    }

    pub fn defect_bound(&self) -> QMValue {
        self.defect_bound
    }

    pub fn rank(&self) -> u8 {
        self.pattern.rank()
    }

    pub(crate) fn count(&self, g: &Word) -> i64 {
        count_linear(g.letters(), self.pattern.letters())
            - count_linear(g.letters(), self.inverse.letters())
    }

    /// Integer value of the homogenization. Counting quasimorphisms have
    /// integral homogenizations because the cyclic count is per period.
    pub(crate) fn psi(&self, g: &Word) -> i64 {
        let (core, _) = cyclic_reduce(g);
        count_cyclic(core.letters(), self.pattern.letters())
            - count_cyclic(core.letters(), self.inverse.letters())
    }

    pub fn evaluate(&self, g: &Word) -> Result<QMValue, QmError> {
        self.pattern.same_rank(g)?;
        Ok(QMValue::from_integer(self.count(g)))
    }

    /// `q(gⁿ) / n`, within `defect_bound / n` of the homogenization.
    pub fn homogenize_numeric(&self, g: &Word, n: u32) -> Result<QMValue, QmError> {
        if n == 0 {
            return Err(QmError::InvalidBudget);
        }
        self.pattern.same_rank(g)?;
        let power = g.pow(n as i64);
        Ok(QMValue::new(self.count(&power), n as i64))
    }

    pub fn homogenize_exact(&self, g: &Word) -> Result<QMValue, QmError> {
        self.pattern.same_rank(g)?;
        Ok(QMValue::from_integer(self.psi(g)))
    }

    pub fn homogeneous(&self) -> HomogeneousQM {
        HomogeneousQM { base: self.clone() }
    }
}

/// The homogenization of a [`CountingQM`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousQM {
    base: CountingQM,
}

impl HomogeneousQM {
    pub fn base(&self) -> &CountingQM {
        &self.base
    }

    pub fn value(&self, g: &Word) -> Result<QMValue, QmError> {
        self.base.homogenize_exact(g)
    }
}

/// Largest `|q(gh) - q(g) - q(h)|` over reduced `g`, `h` of length at most
/// `budget`. A lower bound for the true defect.
pub fn empirical_defect(q: &CountingQM, budget: usize) -> Result<QMValue, QmError> {
    if budget == 0 {
        return Err(QmError::InvalidBudget);
    }
    let words = reduced_words(q.rank(), budget);
    let values: Vec<i64> = words.iter().map(|w| q.count(w)).collect();
    let indexed: Vec<(usize, &Word)> = words.iter().enumerate().collect();
    let max = par::max_by_key(&indexed, |&(i, g)| {
        words
            .iter()
            .zip(&values)
            .map(|(h, qh)| (q.count(&(g * h)) - values[i] - qh).abs())
            .max()
            .unwrap_or(0)
    })
    .unwrap_or(0);
    Ok(QMValue::from_integer(max))
}

/// Fails when the sampled defect exceeds the configured bound.
pub fn check_defect_bound(q: &CountingQM, budget: usize) -> Result<QMValue, QmError> {
    let observed = empirical_defect(q, budget)?;
    if observed > q.defect_bound() {
        return Err(QmError::DefectBoundExceeded {
            observed,
            bound: q.defect_bound(),
        });
    }
    Ok(observed)
}

/// `ψ_w(φ(g))`, the homogenization precomposed with `φ`.
pub fn compose_with_aut(
    q: &CountingQM,
    phi: &Automorphism,
    g: &Word,
) -> Result<QMValue, QmError> {
    q.pattern.same_rank(g)?;
    let image = phi.apply(g)?;
    Ok(QMValue::from_integer(q.psi(&image)))
}

/// First pair `(x, y)` in shortlex order (by `x`, then `y`) of words of
/// length at most `budget` with `r(xy) ≠ r(x) + r(y)`, where
/// `r = ψ - ψ∘φ`.
pub fn find_additivity_violation(
    q: &CountingQM,
    phi: &Automorphism,
    budget: usize,
) -> Result<Option<(Word, Word)>, QmError> {
    if budget == 0 {
        return Err(QmError::InvalidBudget);
    }
    if q.rank() != phi.rank() {
        return Err(WordError::RankMismatch {
            left: q.rank(),
            right: phi.rank(),
        }
        .into());
    }
    let words = reduced_words(q.rank(), budget);
    let images: Vec<Word> = words.iter().map(|w| phi.apply_unchecked(w)).collect();
    let r: Vec<i64> = words
        .iter()
        .zip(&images)
        .map(|(w, fw)| q.psi(w) - q.psi(fw))
        .collect();
    let indexed: Vec<usize> = (0..words.len()).collect();
    Ok(par::find_map_first(&indexed, |&i| {
        (0..words.len()).find_map(|j| {
            let rxy = q.psi(&(&words[i] * &words[j])) - q.psi(&(&images[i] * &images[j]));
            (rxy != r[i] + r[j]).then(|| (words[i].clone(), words[j].clone()))
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn w(s: &str) -> Word {
        Word::from_str_letters(2, s).unwrap()
    }

    fn q(s: &str) -> CountingQM {
        CountingQM::new(w(s)).unwrap()
    }

    fn int(k: i64) -> QMValue {
        QMValue::from_integer(k)
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(q("ab").evaluate(&w("ab")).unwrap(), int(1));
        assert_eq!(q("ab").evaluate(&w("BA")).unwrap(), int(-1));
        assert_eq!(q("aa").evaluate(&w("aaaa")).unwrap(), int(3));
    }

    #[test]
    fn rejects_empty_pattern_and_rank_mismatch() {
        assert_eq!(CountingQM::new(w("")), Err(QmError::EmptyPattern));
        let g3 = Word::from_str_letters(3, "a").unwrap();
        assert!(matches!(
            q("a").evaluate(&g3),
            Err(QmError::Word(WordError::RankMismatch { .. }))
        ));
        assert!(q("a").with_defect_bound(int(-1)).is_err());
    }

    #[test]
    fn default_bound() {
        assert_eq!(q("a").defect_bound(), int(2));
        assert_eq!(q("aab").defect_bound(), int(6));
    }

    /// Independent oracle: exhaustive pair enumeration with naive counting.
    fn naive_count(text: &str, pat: &str) -> i64 {
        let t: Vec<char> = text.chars().collect();
        let p: Vec<char> = pat.chars().collect();
        if p.len() > t.len() {
            return 0;
        }
        (0..=t.len() - p.len()).filter(|&i| t[i..i + p.len()] == p[..]).count() as i64
    }

    fn oracle_defect(pattern: &str, budget: usize) -> i64 {
        let inv = w(pattern).inverse().to_string();
        let qv = |x: &Word| {
            let s = x.to_string();
            let s = if x.is_identity() { String::new() } else { s };
            naive_count(&s, pattern) - naive_count(&s, &inv)
        };
        let ws = reduced_words(2, budget);
        let mut best = 0;
        for g in &ws {
            for h in &ws {
                best = best.max((qv(&(g * h)) - qv(g) - qv(h)).abs());
            }
        }
        best
    }

    #[test]
    fn empirical_defect_examples() {
        assert_eq!(empirical_defect(&q("a"), 3).unwrap(), int(0));
        assert!(empirical_defect(&q("aa"), 1).unwrap() >= int(1));
        assert_eq!(empirical_defect(&q("aa"), 1).unwrap(), int(oracle_defect("aa", 1)));
        assert_eq!(empirical_defect(&q("ab"), 2).unwrap(), int(oracle_defect("ab", 2)));
        assert_eq!(empirical_defect(&q("aB"), 3).unwrap(), int(oracle_defect("aB", 3)));
        assert_eq!(empirical_defect(&q("a"), 0), Err(QmError::InvalidBudget));
    }

    #[test]
    fn empirical_defect_is_monotone_and_within_bound() {
        for p in ["a", "aa", "ab", "aB", "aab", "abA"] {
            let qm = q(p);
            let mut prev = int(0);
            for budget in 1..=4 {
                let d = check_defect_bound(&qm, budget).unwrap();
                assert!(d >= prev, "{p}");
                prev = d;
            }
        }
    }

    #[test]
    fn understated_bound_is_flagged() {
        let qm = q("aa").with_defect_bound(int(0)).unwrap();
        assert!(matches!(
            check_defect_bound(&qm, 2),
            Err(QmError::DefectBoundExceeded { .. })
        ));
    }

    #[test]
    fn numeric_homogenization() {
        assert_eq!(q("aa").homogenize_numeric(&w("a"), 8).unwrap(), QMValue::new(7, 8));
        assert_eq!(q("ab").homogenize_numeric(&w(""), 5).unwrap(), int(0));
        for n in 1..10 {
            assert_eq!(q("a").homogenize_numeric(&w("a"), n).unwrap(), int(1));
        }
        assert_eq!(q("a").homogenize_numeric(&w("a"), 0), Err(QmError::InvalidBudget));
    }

    #[test]
    fn exact_homogenization() {
        let exact = q("aa").homogenize_exact(&w("a")).unwrap();
        assert_eq!(exact, int(1));
        let approx = q("aa").homogenize_numeric(&w("a"), 64).unwrap();
        assert!((approx - exact).abs() <= q("aa").defect_bound() / 64);
        assert_eq!(q("ab").homogenize_exact(&w("abAB")).unwrap(), int(1));
        assert_eq!(q("aa").homogenize_exact(&w("b")).unwrap(), int(0));
        assert_eq!(q("aa").homogenize_exact(&w("")).unwrap(), int(0));
    }

    #[test]
    fn short_core_wraps() {
        // Pattern longer than the core: windows wrap several times.
        assert_eq!(q("aaa").homogenize_exact(&w("a")).unwrap(), int(1));
        assert_eq!(q("abab").homogenize_exact(&w("ab")).unwrap(), int(1));
    }

    #[test]
    fn homogeneity_and_conjugation_invariance() {
        let patterns = ["a", "ab", "aa", "aB", "abA"];
        let ws = reduced_words(2, 4);
        for p in patterns {
            let qm = q(p);
            for g in &ws {
                let v = qm.homogenize_exact(g).unwrap();
                for k in -8..=8i64 {
                    assert_eq!(qm.homogenize_exact(&g.pow(k)).unwrap(), v * k);
                }
                for h in ws.iter().take(40) {
                    let c = g.conjugate_by(h).unwrap();
                    assert_eq!(qm.homogenize_exact(&c).unwrap(), v);
                }
            }
        }
    }

    #[test]
    fn quasimorphism_property_length_five() {
        let ws = reduced_words(2, 5);
        for p in ["aa", "ab", "aBa"] {
            let qm = q(p);
            let bound = qm.defect_bound();
            let vals: Vec<QMValue> = ws.iter().map(|g| qm.evaluate(g).unwrap()).collect();
            for (g, qg) in ws.iter().zip(&vals) {
                for (h, qh) in ws.iter().zip(&vals) {
                    let d = qm.evaluate(&(g * h)).unwrap() - qg - qh;
                    assert!(d.abs() <= bound, "{p} {g} {h}");
                }
            }
        }
    }

    #[test]
    fn closeness_to_homogenization() {
        for p in ["aa", "ab", "abA"] {
            let qm = q(p);
            let two_d = qm.defect_bound() * 2;
            for g in reduced_words(2, 9) {
                let gap = qm.evaluate(&g).unwrap() - qm.homogenize_exact(&g).unwrap();
                assert!(gap.abs() <= two_d);
            }
        }
    }

    #[test]
    fn convergence_rate() {
        for p in ["aa", "ab", "aBB"] {
            let qm = q(p);
            for g in reduced_words(2, 3) {
                let exact = qm.homogenize_exact(&g).unwrap();
                for n in 1..=32 {
                    let approx = qm.homogenize_numeric(&g, n).unwrap();
                    assert!((approx - exact).abs() <= qm.defect_bound() / n as i64);
                }
            }
        }
    }
}
