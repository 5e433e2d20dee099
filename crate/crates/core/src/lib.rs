//! Counting quasimorphisms, bi-invariant word norms and commutator length
//! on free groups of rank at most 26.
//!
//! Words are written with `a`–`z` for generators and `A`–`Z` for their
//! inverses; see [`syntax`] for the full grammar. Every answer that comes
//! with a certificate (a conjugator, a decomposition, a violating pair) has
//! been re-multiplied exactly before it is returned.

pub mod autom;
pub mod binorm;
pub mod coarse_lab;
pub mod comm;
pub mod par;
pub mod qm;
pub mod syntax;
pub mod words;

pub use autom::{find_noninner_witness, is_inner, Automorphism, NonInnerCertificate, WitnessSearch};
pub use binorm::{binorm, bw_distance, NormCertificate};
pub use comm::{cl_bounds, is_commutator, ClBounds, ClConfig};
pub use qm::{CountingQM, QMValue};
pub use syntax::{parse_word, ParseError};
pub use words::{Letter, Word, WordError};
