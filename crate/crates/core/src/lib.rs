//! Certified upper bounds for normalized, conjugacy-invariant pseudo-length
//! functions on the free group on two generators.
//!
//! The crate computes bounds `L(g)` valid for every such length function
//! (optionally constrained by homogeneity-derived elementary bounds), emits
//! a proof certificate for each bound, re-evaluates certificates in exact
//! rational arithmetic, and independently verifies them. The headline
//! pipeline derives `|abAB| <= 328/405` for the commutator.
//!
//! Module map:
//!
//! * [`freegroup`] — reduced words and their algebra.
//! * [`bounds`] — the memoized bound engine and its context.
//! * [`proofs`] — certificates: evaluation, rendering, serialization, and
//!   the independent verifier.
//! * [`homogeneity`] — schedules of homogeneity pairs and the headline
//!   pipeline.
//! * [`exploration`] — symmetry-reduced enumeration and family scoring.

pub mod bounds;
pub mod exploration;
pub mod freegroup;
pub mod homogeneity;
pub mod proofs;

pub use bounds::BoundContext;
pub use freegroup::{Letter, Word};
pub use homogeneity::{commutator_bound, ScheduleConfig};
pub use proofs::{ElementaryBound, EvalMode, ProofTree};

#[cfg(test)]
pub(crate) mod testutil {
    use crate::freegroup::{Letter, Word};
    use proptest::prelude::*;

    /// Parses a word literal; panics on bad input (test convenience).
    pub fn word(text: &str) -> Word {
        Word::parse(text).expect("valid word literal")
    }

    pub fn arb_letter() -> impl Strategy<Value = Letter> {
        prop_oneof![
            Just(Letter::Alpha),
            Just(Letter::Beta),
            Just(Letter::AlphaInv),
            Just(Letter::BetaInv),
        ]
    }

    /// An arbitrary raw letter sequence (not necessarily reduced).
    pub fn arb_raw_letters(max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
        prop::collection::vec(arb_letter(), 0..=max_len)
    }

    /// An arbitrary reduced word of length at most `max_len`.
    pub fn arb_word(max_len: usize) -> impl Strategy<Value = Word> {
        arb_raw_letters(max_len).prop_map(Word::from_letters)
    }
}
