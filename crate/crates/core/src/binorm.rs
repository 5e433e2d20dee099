//! Bi-invariant word norm with respect to all conjugates of the standard
//! generators.
//!
//! In a free group the norm equals the cancellation length: the fewest
//! letters whose deletion leaves a word that freely reduces to the
//! identity. It is computed by an `O(n³)` interval DP over the reduced word.
//! The surviving letters form a non-crossing matching of inverse pairs.

use crate::par;
use crate::words::{Letter, Word, WordError};

/// `|g|_bw = k` together with an explicit decomposition
/// `g = s_1^{h_1} ⋯ s_k^{h_k}`, where `s^h = h s h⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormCertificate {
    pub k: usize,
    pub crossed_positions: Vec<usize>,
    pub factors: Vec<(Letter, Word)>,
}

impl NormCertificate {
    /// `s^h` factors separated by `;`. An empty conjugator prints as `s`.
    pub fn render_factors(&self) -> String {
        self.factors
            .iter()
            .map(|(s, h)| {
                if h.is_identity() {
                    s.to_string()
                } else {
                    format!("{s}^{h}")
                }
            })
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Product of the conjugates, in order.
    pub fn product(&self, rank: u8) -> Result<Word, WordError> {
        let mut acc = Word::identity(rank);
        for (s, h) in &self.factors {
            let s = Word::from_letter(rank, *s)?;
            acc = acc.try_multiply(&s.conjugate_by(h)?)?;
        }
        Ok(acc)
    }
}

/// DP table: `cost[i][j]` for the half-open interval `[i, j)`.
struct Table {
    n: usize,
    cost: Vec<u16>,
}

impl Table {
    fn get(&self, i: usize, j: usize) -> u16 {
        self.cost[i * (self.n + 1) + j]
    }

    fn build(letters: &[Letter]) -> Table {
        let n = letters.len();
        let mut t = Table {
            n,
            cost: vec![0; (n + 1) * (n + 1)],
        };
        for len in 1..=n {
            for i in 0..=n - len {
                let j = i + len;
                let mut best = 1 + t.get(i + 1, j);
                let inv = letters[i].inverse();
                for (p, l) in letters.iter().enumerate().take(j).skip(i + 1) {
                    if *l == inv {
                        best = best.min(t.get(i + 1, p) + t.get(p + 1, j));
                    }
                }
                t.cost[i * (n + 1) + j] = best;
            }
        }
        t
    }

    /// Crossed positions of an optimal solution on `[i, j)`. Pairing with
    /// the leftmost admissible partner is preferred over crossing out.
    fn crossed(&self, letters: &[Letter], i: usize, j: usize, out: &mut Vec<usize>) {
        let mut stack = vec![(i, j)];
        while let Some((i, j)) = stack.pop() {
            if i >= j {
                continue;
            }
            let best = self.get(i, j);
            let inv = letters[i].inverse();
            let pair = (i + 1..j)
                .find(|&p| letters[p] == inv && self.get(i + 1, p) + self.get(p + 1, j) == best);
            match pair {
                Some(p) => {
                    stack.push((i + 1, p));
                    stack.push((p + 1, j));
                }
                None => {
                    out.push(i);
                    stack.push((i + 1, j));
                }
            }
        }
    }
}

/// Cancellation length only, without reconstructing a certificate.
pub fn bw_length(g: &Word) -> usize {
    if g.is_identity() {
        return 0;
    }
    Table::build(g.letters()).get(0, g.len()) as usize
}

/// Computes `|g|_bw` with a re-multipliable certificate.
pub fn binorm(g: &Word) -> NormCertificate {
    let letters = g.letters();
    let n = letters.len();
    if n == 0 {
        return NormCertificate {
            k: 0,
            crossed_positions: Vec::new(),
            factors: Vec::new(),
        };
    }
    let table = Table::build(letters);
    let mut crossed = Vec::new();
    table.crossed(letters, 0, n, &mut crossed);
    crossed.sort_unstable();
    debug_assert_eq!(crossed.len(), table.get(0, n) as usize);

    // g = x_0 s_1 x_1 ⋯ s_k x_k with x_0 ⋯ x_k = 1, hence
    // g = ∏ s_i^{x_0 ⋯ x_{i-1}}.
    let rank = g.rank();
    let mut prefix = Word::identity(rank);
    let mut start = 0;
    let mut factors = Vec::with_capacity(crossed.len());
    for &p in &crossed {
        prefix = &prefix * &g.subword(start, p);
        factors.push((letters[p], prefix.clone()));
        start = p + 1;
    }
    NormCertificate {
        k: crossed.len(),
        crossed_positions: crossed,
        factors,
    }
}

/// Norms of many words, computed in parallel, in input order.
pub fn binorm_batch(words: &[Word]) -> Vec<NormCertificate> {
    par::map(words, binorm)
}

/// `d_bw(g, h) = |g⁻¹ h|_bw`.
pub fn bw_distance(g: &Word, h: &Word) -> Result<usize, WordError> {
    g.same_rank(h)?;
    Ok(bw_length(&(&g.inverse() * h)))
}

/// Checks the factors re-multiply to `g` and that deleting the crossed
/// letters leaves a word reducing to the identity.
pub fn verify_certificate(g: &Word, c: &NormCertificate) -> bool {
    if c.k != c.crossed_positions.len() || c.k != c.factors.len() {
        return false;
    }
    if !c.crossed_positions.windows(2).all(|p| p[0] < p[1])
        || c.crossed_positions.last().is_some_and(|&p| p >= g.len())
    {
        return false;
    }
    let mut crossed = c.crossed_positions.iter().peekable();
    let mut remainder = Vec::with_capacity(g.len());
    for (i, l) in g.letters().iter().enumerate() {
        if crossed.peek() == Some(&&i) {
            crossed.next();
        } else {
            remainder.push(*l);
        }
    }
    let Ok(rest) = crate::words::reduce(g.rank(), remainder) else {
        return false;
    };
    rest.is_identity() && c.product(g.rank()).as_ref() == Ok(g)
}
