//! Core library for virtual knot concordance computations.
//!
//! A virtual knot is represented by a Gauss diagram: one or more oriented
//! circles together with signed, directed chords.  Each chord records one
//! classical crossing; the chord points from the over-pass to the under-pass
//! and carries the handedness of the crossing.  Everything in this crate is
//! exact integer combinatorics — no floating point, no randomness.
//!
//! The crate is `no_std` (with `alloc`) so the invariant machinery can be
//! embedded anywhere; file formats, parallelism and the command line live in
//! the companion `vknot-cli` crate.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

#[cfg(feature = "std")]
extern crate std;

pub mod cobordism;
pub mod diagram;
pub mod graded;
pub mod invariants;
pub mod laurent;
pub mod moves;

pub use diagram::{ChordId, End, Endpoint, Gap, GaussDiagram, Sign, SymmetryElement};
pub use laurent::LaurentPoly;

use alloc::string::String;

/// Errors produced by diagram construction, moves and invariant computations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed Gauss code text; byte offset of the offending token.
    Parse { offset: usize, msg: String },
    /// A chord id that does not occur in the diagram.
    ChordNotFound(ChordId),
    /// A circle index or gap/endpoint position out of range.
    InvalidPosition { circle: usize, index: usize },
    /// The operation needs a single-circle diagram.
    NotSingleCircle,
    /// The requested local move does not apply at the given site.
    IllegalMove(String),
    /// The operation needs all chords to carry the same sign.
    MixedSigns,
    /// A movie event failed to verify; `step` is the 1-based event index.
    MovieStep { step: usize, msg: String },
    /// Exact integer arithmetic exceeded 128 bits.
    Overflow,
}

impl core::fmt::Display for Error {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Error::Parse { offset, msg } => write!(f, "parse error at byte {offset}: {msg}"),
            Error::ChordNotFound(id) => write!(f, "no chord labelled {id}"),
            Error::InvalidPosition { circle, index } => {
                write!(f, "position {index} out of range on circle {circle}")
            }
            Error::NotSingleCircle => write!(f, "operation requires a single-circle diagram"),
            Error::IllegalMove(msg) => write!(f, "illegal move: {msg}"),
            Error::MixedSigns => write!(f, "operation requires a one-signed diagram"),
            Error::MovieStep { step, msg } => write!(f, "movie event {step}: {msg}"),
            Error::Overflow => write!(f, "exact arithmetic overflowed 128 bits"),
        }
    }
}

#[cfg(any(test, feature = "std"))]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
