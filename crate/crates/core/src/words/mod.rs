//! Exact word algebra in the free group `F_n`.
//!
//! Words are always stored freely reduced and carry the rank they were
//! built in. Mixing ranks is an error rather than a silent embedding.

mod commensurable;
mod cyclic;
mod enumerate;

pub use commensurable::{
    are_commensurable, are_strongly_commensurable, Commensurability, StrongCommensurability,
};
pub use cyclic::{are_conjugate, cyclic_reduce, primitive_root, CyclicWord};
pub use enumerate::{canonical_cyclic_words, reduced_words, reduced_words_of_length};

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

/// Largest supported rank; generators are named `a`..`z`.
pub const MAX_RANK: u8 = 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("generator {generator} is outside rank {rank}")]
    LetterOutOfRank { generator: u8, rank: u8 },
    #[error("rank {0} is not in 1..=26")]
    InvalidRank(u8),
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: u8, right: u8 },
    #[error("operation is undefined on the identity")]
    Identity,
}

/// A generator or its inverse. Stored as a signed generator index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Letter(i8);

impl Letter {
    /// `generator` is 1-based.
    pub fn new(generator: u8, inverse: bool) -> Option<Letter> {
        if generator == 0 || generator > MAX_RANK {
            return None;
        }
        let g = generator as i8;
        Some(Letter(if inverse { -g } else { g }))
    }

    pub fn generator(self) -> u8 {
        self.0.unsigned_abs()
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    /// Exponent contribution: +1 or -1.
    pub fn sign(self) -> i64 {
        self.0.signum() as i64
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'a'..='z' => Letter::new(c as u8 - b'a' + 1, false),
            'A'..='Z' => Letter::new(c as u8 - b'A' + 1, true),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        let base = if self.is_inverse() { b'A' } else { b'a' };
        (base + self.generator() - 1) as char
    }

    /// Position in the fixed letter order `a < A < b < B < ...`.
    pub fn order_key(self) -> u8 {
        (self.generator() - 1) * 2 + u8::from(self.is_inverse())
    }

    /// All `2 * rank` letters in the fixed order.
    pub fn all(rank: u8) -> impl Iterator<Item = Letter> {
        (1..=rank).flat_map(|g| [Letter(g as i8), Letter(-(g as i8))])
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// A freely reduced word in `F_rank`.
///
/// Ordering is shortlex on the letters (length first, then the letter order
/// of [`Letter::order_key`]); words of different rank compare by rank last.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word {
    rank: u8,
    letters: Vec<Letter>,
}

fn check_rank(rank: u8) -> Result<(), WordError> {
    if rank == 0 || rank > MAX_RANK {
        Err(WordError::InvalidRank(rank))
    } else {
        Ok(())
    }
}

/// Stack-based free reduction.
fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&l.inverse()) {
        out.pop();
    } else {
        out.push(l);
    }
}

/// Freely reduces `raw` in `F_rank`.
pub fn reduce<I>(rank: u8, raw: I) -> Result<Word, WordError>
where
    I: IntoIterator<Item = Letter>,
{
    check_rank(rank)?;
    let mut letters = Vec::new();
    for l in raw {
        if l.generator() > rank {
            return Err(WordError::LetterOutOfRank {
                generator: l.generator(),
                rank,
            });
        }
        push_reduced(&mut letters, l);
    }
    Ok(Word { rank, letters })
}

impl Word {
    pub fn identity(rank: u8) -> Word {
        assert!((1..=MAX_RANK).contains(&rank), "invalid rank {rank}");
        Word {
            rank,
            letters: Vec::new(),
        }
    }

    /// The 1-based generator `index` of `F_rank`.
    pub fn generator(rank: u8, index: u8) -> Result<Word, WordError> {
        let l = Letter::new(index, false).ok_or(WordError::LetterOutOfRank {
            generator: index,
            rank,
        })?;
        reduce(rank, [l])
    }

    pub fn from_letter(rank: u8, letter: Letter) -> Result<Word, WordError> {
        reduce(rank, [letter])
    }

    /// Parses a plain letter string such as `abAB` (no powers or brackets).
    /// See [`crate::syntax::parse_word`] for the full grammar.
    pub fn from_str_letters(rank: u8, s: &str) -> Result<Word, WordError> {
        let letters = s.chars().filter(|c| !c.is_whitespace()).map(|c| {
            Letter::from_char(c).ok_or(WordError::LetterOutOfRank {
                generator: 0,
                rank,
            })
        });
        let letters: Result<Vec<_>, _> = letters.collect();
        reduce(rank, letters?)
    }

    /// Builds a word from letters already known to be reduced and in range.
    pub(crate) fn from_reduced_unchecked(rank: u8, letters: Vec<Letter>) -> Word {
        debug_assert!(letters.windows(2).all(|w| w[0] != w[1].inverse()));
        debug_assert!(letters.iter().all(|l| l.generator() <= rank));
        Word { rank, letters }
    }

    pub fn rank(&self) -> u8 {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    pub fn inverse(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn same_rank(&self, other: &Word) -> Result<(), WordError> {
        if self.rank == other.rank {
            Ok(())
        } else {
            Err(WordError::RankMismatch {
                left: self.rank,
                right: other.rank,
            })
        }
    }

    pub fn try_multiply(&self, other: &Word) -> Result<Word, WordError> {
        self.same_rank(other)?;
        Ok(self.mul_same_rank(other))
    }

    fn mul_same_rank(&self, other: &Word) -> Word {
        let mut out = Vec::with_capacity(self.len() + other.len());
        out.extend_from_slice(&self.letters);
        for &l in &other.letters {
            push_reduced(&mut out, l);
        }
        Word {
            rank: self.rank,
            letters: out,
        }
    }

    /// `self^k` for any integer `k`.
    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity(self.rank);
        for _ in 0..k.unsigned_abs() {
            out = out.mul_same_rank(&base);
        }
        out
    }

    /// `h · self · h⁻¹`.
    pub fn conjugate_by(&self, h: &Word) -> Result<Word, WordError> {
        self.same_rank(h)?;
        Ok(h.mul_same_rank(self).mul_same_rank(&h.inverse()))
    }

    /// Exponent sum of each generator, indexed from 0.
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut sums = vec![0i64; self.rank as usize];
        for l in &self.letters {
            sums[l.generator() as usize - 1] += l.sign();
        }
        sums
    }

    /// Sum of absolute exponent sums, the `ℓ¹` norm of the abelianization.
    pub fn abelian_l1(&self) -> u64 {
        self.exponent_sums().iter().map(|s| s.unsigned_abs()).sum()
    }

    /// Whether the word remains freely reduced when read cyclically.
    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(f), Some(l)) => self.len() == 1 || f != l.inverse(),
            _ => true,
        }
    }

    /// Subword `[start, end)`; always reduced.
    pub fn subword(&self, start: usize, end: usize) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters[start..end].to_vec(),
        }
    }

    /// Same letters read in a larger rank.
    pub fn embed(&self, rank: u8) -> Result<Word, WordError> {
        reduce(rank, self.letters.iter().copied())
    }
}

/// `g` conjugated by `h`, that is `h g h⁻¹`.
pub fn conjugate(g: &Word, h: &Word) -> Result<Word, WordError> {
    g.conjugate_by(h)
}

pub fn multiply(u: &Word, v: &Word) -> Result<Word, WordError> {
    u.try_multiply(v)
}

/// `[u, v] = u v u⁻¹ v⁻¹`.
pub fn commutator(u: &Word, v: &Word) -> Result<Word, WordError> {
    u.same_rank(v)?;
    Ok(u * v * &u.inverse() * &v.inverse())
}

/// Panics on rank mismatch; use [`Word::try_multiply`] when ranks may differ.
impl std::ops::Mul<&Word> for &Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        assert_eq!(self.rank, rhs.rank, "rank mismatch in word product");
        self.mul_same_rank(rhs)
    }
}

impl std::ops::Mul<&Word> for Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        &self * rhs
    }
}

impl std::ops::Mul<Word> for Word {
    type Output = Word;

    fn mul(self, rhs: Word) -> Word {
        &self * &rhs
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.cmp(&other.letters))
            .then_with(|| self.rank.cmp(&other.rank))
    }
}

/// Renders letters, with the identity shown as `1`.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for l in &self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}
