//! Desk-scale experiments on `[F_n, F_n]`: sweeps comparing the norm with
//! commutator length, the search for elements whose square is a single
//! commutator, and boundedness reports for homogeneous quasimorphisms.
//!
//! Rows are computed in parallel and emitted in enumeration order. Every
//! decomposition and certificate in a row has been re-multiplied exactly.

use std::fmt::Write as _;

use num_traits::Signed;
use serde_json::{Map, Value};
use thiserror::Error;

use crate::binorm::{binorm, verify_certificate};
use crate::comm::{bw_to_commutators, cl_bounds, in_commutator_subgroup, is_commutator, ClBounds, ClConfig, CommError};
use crate::par;
use crate::qm::{CountingQM, QMValue};
use crate::words::{canonical_cyclic_words, commutator, reduced_words, Word};

/// Longest cyclic length accepted by the enumerating experiments.
pub const MAX_LEN_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabError {
    #[error("max length {max_len} exceeds the cap {cap}")]
    CapExceeded { max_len: usize, cap: usize },
    #[error("invariant violated on {word}: {detail}")]
    InvariantViolated { word: Word, detail: String },
    #[error(transparent)]
    Comm(#[from] CommError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

/// Conjugacy-class representatives in `[F_n, F_n]` of cyclic length at
/// most `max_len`: least rotations of cyclically reduced words.
pub fn commutator_subgroup_classes(rank: u8, max_len: usize) -> Vec<Word> {
    canonical_cyclic_words(rank, max_len)
        .into_iter()
        .filter(in_commutator_subgroup)
        .collect()
}

fn check_cap(max_len: usize) -> Result<(), LabError> {
    if max_len > MAX_LEN_CAP {
        Err(LabError::CapExceeded {
            max_len,
            cap: MAX_LEN_CAP,
        })
    } else {
        Ok(())
    }
}

fn violated(word: &Word, detail: impl Into<String>) -> LabError {
    LabError::InvariantViolated {
        word: word.clone(),
        detail: detail.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub word: Word,
    pub bw: usize,
    pub cl: ClBounds,
    pub ab_length: Option<usize>,
    pub psi: Vec<QMValue>,
}

fn sweep_row(g: &Word, config: &ClConfig) -> Result<SweepRow, LabError> {
    let cert = binorm(g);
    if !verify_certificate(g, &cert) {
        return Err(violated(g, "norm certificate does not verify"));
    }
    let lemma = bw_to_commutators(g, &cert)?;
    if !lemma.verify(g) {
        return Err(violated(g, "rewritten commutators do not multiply to the word"));
    }
    if 2 * lemma.len() > cert.k {
        return Err(violated(
            g,
            format!("2 * {} commutators exceeds bw = {}", lemma.len(), cert.k),
        ));
    }
    let cl = cl_bounds(g, config)?;
    if cl.lower > cl.upper || !cl.decomposition.verify(g) {
        return Err(violated(g, "inconsistent commutator length bounds"));
    }
    let psi = config
        .patterns
        .iter()
        .map(|q| q.homogenize_exact(g).unwrap_or_default())
        .collect();
    Ok(SweepRow {
        word: g.clone(),
        bw: cert.k,
        ab_length: cl.exact,
        cl,
        psi,
    })
}

/// One row per conjugacy class of `[F_n, F_n]` up to cyclic length
/// `max_len`. Aborts with the first row (in enumeration order) whose
/// invariants fail.
pub fn inequality_sweep(
    rank: u8,
    max_len: usize,
    config: &ClConfig,
) -> Result<Vec<SweepRow>, LabError> {
    check_cap(max_len)?;
    let classes = commutator_subgroup_classes(rank, max_len);
    par::map(&classes, |g| sweep_row(g, config))
        .into_iter()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareCommutatorHit {
    pub g: Word,
    pub square_witness: (Word, Word),
    pub cl: ClBounds,
    pub psi: Vec<QMValue>,
}

/// Class representatives `g ≠ 1` of cyclic length at most `max_len` whose
/// square is a single commutator.
///
/// For such `g` every homogeneous `ψ` satisfies `|ψ(g)| = |ψ(g²)|/2`, and
/// the configured bound is checked in the form `|ψ_w(g)| ≤ D(w)/2`.
///
/// In a free group no nontrivial proper power is a commutator, so an empty
/// result is the expected outcome; the search is a consistency probe.
pub fn square_commutator_search(
    rank: u8,
    max_len: usize,
    config: &ClConfig,
) -> Result<Vec<SquareCommutatorHit>, LabError> {
    check_cap(max_len)?;
    // g² ∈ [F, F] forces g ∈ [F, F] since the abelianization is torsion-free.
    let classes: Vec<Word> = commutator_subgroup_classes(rank, max_len)
        .into_iter()
        .skip(1)
        .collect();
    let found: Vec<Option<Result<SquareCommutatorHit, LabError>>> = par::map(&classes, |g| {
        let square = g.pow(2);
        let (u, v) = is_commutator(&square)?;
        Some(square_hit(g, &square, u, v, config))
    });
    found.into_iter().flatten().collect()
}

fn square_hit(
    g: &Word,
    square: &Word,
    u: Word,
    v: Word,
    config: &ClConfig,
) -> Result<SquareCommutatorHit, LabError> {
    if commutator(&u, &v).ok().as_ref() != Some(square) {
        return Err(violated(g, "square witness does not re-multiply"));
    }
    let mut psi = Vec::with_capacity(config.patterns.len());
    for q in &config.patterns {
        let value = q.homogenize_exact(g).unwrap_or_default();
        if value.abs() > q.defect_bound() / 2 {
            return Err(violated(
                g,
                format!(
                    "|psi_{}| = {} exceeds half the defect bound {}",
                    q.pattern(),
                    value.abs(),
                    q.defect_bound()
                ),
            ));
        }
        psi.push(value);
    }
    Ok(SquareCommutatorHit {
        g: g.clone(),
        square_witness: (u, v),
        cl: cl_bounds(g, config)?,
        psi,
    })
}

/// One-sided evidence: a finite pattern family can show a set is unbounded
/// for some quasimorphism but never that it is bounded for all of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundRow {
    pub pattern: Word,
    pub sup: QMValue,
    pub defect_bound: QMValue,
    /// Words in the set where `ψ` does not vanish. By homogeneity `ψ` is
    /// unbounded on the cyclic subgroup of any of them.
    pub nonvanishing: usize,
}

impl BoundRow {
    pub fn unbounded_on_powers(&self) -> bool {
        self.nonvanishing > 0
    }
}

pub fn qm_boundedness_report(patterns: &[CountingQM], words: &[Word]) -> Vec<BoundRow> {
    patterns
        .iter()
        .map(|q| {
            let values = par::map(words, |g| q.homogenize_exact(g).unwrap_or_default().abs());
            BoundRow {
                pattern: q.pattern().clone(),
                sup: values.iter().copied().max().unwrap_or_default(),
                defect_bound: q.defect_bound(),
                nonvanishing: values.iter().filter(|v| **v != QMValue::default()).count(),
            }
        })
        .collect()
}

/// All commutators `[u, v]` with `|u|, |v| ≤ max_len`, deduplicated, in
/// shortlex order.
pub fn small_commutators(rank: u8, max_len: usize) -> Vec<Word> {
    let ws = reduced_words(rank, max_len);
    let mut out: Vec<Word> = ws
        .iter()
        .flat_map(|u| ws.iter().map(move |v| commutator(u, v).expect("same rank")))
        .collect();
    out.sort();
    out.dedup();
    out
}

fn opt(v: Option<usize>) -> Value {
    v.map(Value::from).unwrap_or(Value::Null)
}

fn text(v: impl ToString) -> Value {
    Value::String(v.to_string())
}

fn pattern_columns(patterns: &[CountingQM]) -> Vec<String> {
    patterns.iter().map(|q| format!("psi_{}", q.pattern())).collect()
}

/// Header plus typed cells, rendered either as CSV or as JSON lines keyed
/// by the header. Nulls are empty CSV cells.
struct Table {
    header: Vec<String>,
    rows: Vec<Vec<Value>>,
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl Table {
    fn render(self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Csv => {
                out.push_str(&self.header.join(","));
                out.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(csv_cell).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
            }
            Format::Jsonl => {
                for row in self.rows {
                    let obj: Map<String, Value> = self.header.iter().cloned().zip(row).collect();
                    let _ = writeln!(out, "{}", Value::Object(obj));
                }
            }
        }
        out
    }
}

pub const SWEEP_COLUMNS: [&str; 7] = [
    "word",
    "bw",
    "cl_lower",
    "cl_upper",
    "cl_exact",
    "ab_length",
    "cl_lower_conditional",
];

pub fn render_sweep(rows: &[SweepRow], patterns: &[CountingQM], format: Format) -> String {
    let mut header: Vec<String> = SWEEP_COLUMNS.iter().map(|s| s.to_string()).collect();
    header.extend(pattern_columns(patterns));
    let rows = rows
        .iter()
        .map(|r| {
            let mut cells = vec![
                text(&r.word),
                r.bw.into(),
                r.cl.lower.into(),
                r.cl.upper.into(),
                opt(r.cl.exact),
                opt(r.ab_length),
                r.cl.conditional_lower.into(),
            ];
            cells.extend(r.psi.iter().map(text));
            cells
        })
        .collect();
    Table { header, rows }.render(format)
}

pub const SQUARE_COLUMNS: [&str; 6] = ["g", "square_u", "square_v", "cl_lower", "cl_upper", "cl_exact"];

pub fn render_squares(hits: &[SquareCommutatorHit], patterns: &[CountingQM], format: Format) -> String {
    let mut header: Vec<String> = SQUARE_COLUMNS.iter().map(|s| s.to_string()).collect();
    header.extend(pattern_columns(patterns));
    let rows = hits
        .iter()
        .map(|h| {
            let mut cells = vec![
                text(&h.g),
                text(&h.square_witness.0),
                text(&h.square_witness.1),
                h.cl.lower.into(),
                h.cl.upper.into(),
                opt(h.cl.exact),
            ];
            cells.extend(h.psi.iter().map(text));
            cells
        })
        .collect();
    Table { header, rows }.render(format)
}

pub const BOUND_COLUMNS: [&str; 6] = [
    "pattern",
    "sup_abs_psi",
    "defect_bound",
    "nonvanishing",
    "unbounded_on_powers",
    "evidence",
];

pub fn render_bounds(rows: &[BoundRow], format: Format) -> String {
    let header = BOUND_COLUMNS.iter().map(|s| s.to_string()).collect();
    let rows = rows
        .iter()
        .map(|r| {
            vec![
                text(&r.pattern),
                text(r.sup),
                text(r.defect_bound),
                r.nonvanishing.into(),
                r.unbounded_on_powers().into(),
                text("one-sided"),
            ]
        })
        .collect();
    Table { header, rows }.render(format)
}
