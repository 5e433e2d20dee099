use num_integer::Integer;

use super::{are_conjugate, primitive_root, Word, WordError};

/// Witness that `x · g^n · x⁻¹ = h^m` with `n > 0` and `m ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Commensurability {
    pub n: i64,
    pub m: i64,
    pub conjugator: Word,
}

/// Witness that `x · g^n · x⁻¹ = h^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrongCommensurability {
    pub n: i64,
    pub conjugator: Word,
}

fn identity_case(g: &Word, h: &Word) -> Result<Option<Word>, WordError> {
    g.same_rank(h)?;
    match (g.is_identity(), h.is_identity()) {
        (true, true) => Ok(Some(Word::identity(g.rank()))),
        (false, false) => Ok(None),
        _ => Err(WordError::Identity),
    }
}

/// Decides commensurability through primitive roots: `g = r^a`, `h = s^b`
/// are commensurable iff `r` is conjugate to `s` or to `s⁻¹`. The returned
/// `n` is the least positive choice.
pub fn are_commensurable(g: &Word, h: &Word) -> Result<Option<Commensurability>, WordError> {
    if let Some(e) = identity_case(g, h)? {
        return Ok(Some(Commensurability {
            n: 1,
            m: 1,
            conjugator: e,
        }));
    }
    let (r, a) = primitive_root(g)?;
    let (s, b) = primitive_root(h)?;
    let (a, b) = (a as i64, b as i64);
    let d = a.gcd(&b);
    let found = if let Some(x) = are_conjugate(&r, &s)? {
        Some((b / d, a / d, x))
    } else {
        are_conjugate(&r, &s.inverse())?.map(|x| (b / d, -(a / d), x))
    };
    Ok(found.map(|(n, m, conjugator)| {
        debug_assert_eq!(
            &conjugator * &g.pow(n) * &conjugator.inverse(),
            h.pow(m)
        );
        Commensurability { n, m, conjugator }
    }))
}

/// Strong commensurability: `g^n` conjugate to `h^n`. With `g = r^a` and
/// `h = s^b` this forces `r ~ s` and `a = b`, so the witness always has
/// `n = 1`.
pub fn are_strongly_commensurable(
    g: &Word,
    h: &Word,
) -> Result<Option<StrongCommensurability>, WordError> {
    if let Some(e) = identity_case(g, h)? {
        return Ok(Some(StrongCommensurability {
            n: 1,
            conjugator: e,
        }));
    }
    let (r, a) = primitive_root(g)?;
    let (s, b) = primitive_root(h)?;
    if a != b || are_conjugate(&r, &s)?.is_none() {
        return Ok(None);
    }
    // Conjugating the roots conjugates the powers; re-derive on g itself so
    // the witness is the shortest one for g and h.
    Ok(are_conjugate(g, h)?.map(|conjugator| StrongCommensurability { n: 1, conjugator }))
}
