//! Reduced words over the free group on two generators.
//!
//! Elements of the group are represented by their unique reduced word, so
//! structural equality of [`Word`]s is equality of group elements and words
//! can key memo tables directly. Every constructor reduces eagerly; all
//! operations are pure and words are immutable once built.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// One of the two free generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    Alpha,
    Beta,
}

/// A formal symbol: a generator or the inverse of one.
///
/// Exactly four values exist. The variant order gives the letter order
/// `a < b < A < B` used when picking canonical orbit representatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Alpha,
    Beta,
    AlphaInv,
    BetaInv,
}

impl Letter {
    pub const ALL: [Letter; 4] = [
        Letter::Alpha,
        Letter::Beta,
        Letter::AlphaInv,
        Letter::BetaInv,
    ];

    pub fn new(generator: Generator, inverted: bool) -> Letter {
        match (generator, inverted) {
            (Generator::Alpha, false) => Letter::Alpha,
            (Generator::Alpha, true) => Letter::AlphaInv,
            (Generator::Beta, false) => Letter::Beta,
            (Generator::Beta, true) => Letter::BetaInv,
        }
    }

    pub fn generator(self) -> Generator {
        match self {
            Letter::Alpha | Letter::AlphaInv => Generator::Alpha,
            Letter::Beta | Letter::BetaInv => Generator::Beta,
        }
    }

    pub fn is_inverted(self) -> bool {
        matches!(self, Letter::AlphaInv | Letter::BetaInv)
    }

    pub fn inverse(self) -> Letter {
        match self {
            Letter::Alpha => Letter::AlphaInv,
            Letter::AlphaInv => Letter::Alpha,
            Letter::Beta => Letter::BetaInv,
            Letter::BetaInv => Letter::Beta,
        }
    }

    /// ASCII form: `a`, `b` for generators, `A`, `B` for their inverses.
    pub fn to_char(self) -> char {
        match self {
            Letter::Alpha => 'a',
            Letter::Beta => 'b',
            Letter::AlphaInv => 'A',
            Letter::BetaInv => 'B',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'a' => Some(Letter::Alpha),
            'b' => Some(Letter::Beta),
            'A' => Some(Letter::AlphaInv),
            'B' => Some(Letter::BetaInv),
            _ => None,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// Rejected input to [`Word::from_str`] / [`Word::parse`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unexpected character {found:?} at index {position} (expected one of a, b, A, B)")]
pub struct WordParseError {
    pub position: usize,
    pub found: char,
}

/// A reduced word in the generators; the empty word is the identity.
///
/// The letter sequence never contains an adjacent cancelling pair, so two
/// `Word`s are equal exactly when they name the same group element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    /// The identity element `e`.
    pub fn identity() -> Word {
        Word { letters: Vec::new() }
    }

    /// The one-letter word for `letter`.
    pub fn letter(letter: Letter) -> Word {
        Word {
            letters: vec![letter],
        }
    }

    /// Reduces an arbitrary letter sequence to its canonical word.
    ///
    /// Single left-to-right stack pass: push each letter, cancelling it
    /// against the top of the stack when the two are inverse.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
        let iter = letters.into_iter();
        let mut reduced: Vec<Letter> = Vec::with_capacity(iter.size_hint().0);
        for letter in iter {
            if reduced.last() == Some(&letter.inverse()) {
                reduced.pop();
            } else {
                reduced.push(letter);
            }
        }
        Word { letters: reduced }
    }

    /// Parses the ASCII grammar `(a|b|A|B)*`; the empty string is `e`.
    pub fn parse(text: &str) -> Result<Word, WordParseError> {
        let mut letters = Vec::with_capacity(text.len());
        for (position, c) in text.chars().enumerate() {
            match Letter::from_char(c) {
                Some(letter) => letters.push(letter),
                None => return Err(WordParseError { position, found: c }),
            }
        }
        Ok(Word::from_letters(letters))
    }

    /// Wraps an already-reduced letter sequence without re-scanning it.
    pub(crate) fn from_reduced(letters: Vec<Letter>) -> Word {
        debug_assert!(
            letters.windows(2).all(|w| w[0] != w[1].inverse()),
            "from_reduced called with a cancelling pair"
        );
        Word { letters }
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

    /// The contiguous subword at `start..end`.
    ///
    /// A contiguous slice of a reduced word is itself reduced, so no
    /// rescanning is needed.
    pub fn subword(&self, start: usize, end: usize) -> Word {
        Word::from_reduced(self.letters[start..end].to_vec())
    }

    /// Group multiplication: concatenate and reduce.
    pub fn concat(&self, other: &Word) -> Word {
        // Cancellation can only happen at the seam.
        let mut letters = self.letters.clone();
        let mut skip = 0;
        while skip < other.letters.len() {
            match letters.last() {
                Some(&last) if last == other.letters[skip].inverse() => {
                    letters.pop();
                    skip += 1;
                }
                _ => break,
            }
        }
        letters.extend_from_slice(&other.letters[skip..]);
        Word { letters }
    }

    /// Group inverse: invert letters and reverse their order.
    pub fn invert(&self) -> Word {
        let letters = self.letters.iter().rev().map(|l| l.inverse()).collect();
        Word::from_reduced(letters)
    }

    /// `self` raised to a nonnegative power; `power(g, 0) = e`.
    pub fn power(&self, exponent: u32) -> Word {
        let mut letters = Vec::with_capacity(self.letters.len() * exponent as usize);
        for _ in 0..exponent {
            letters.extend_from_slice(&self.letters);
        }
        Word::from_letters(letters)
    }

    /// Conjugation `by · self · by⁻¹`.
    pub fn conjugated_by(&self, by: &Word) -> Word {
        by.concat(self).concat(&by.invert())
    }

    /// Strips matching first/last letter pairs until none remain.
    ///
    /// The result is conjugate to `self` and is the word whose cyclic
    /// rotations are all reduced.
    pub fn cyclically_reduce(&self) -> Word {
        let mut start = 0;
        let mut end = self.letters.len();
        while end - start >= 2 && self.letters[start] == self.letters[end - 1].inverse() {
            start += 1;
            end -= 1;
        }
        self.subword(start, end)
    }

    /// Whether no rotation of the word has a cancelling pair.
    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(&first), Some(&last)) => first != last.inverse(),
            _ => true,
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for letter in &self.letters {
            write!(f, "{}", letter)?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = WordParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Word::parse(s)
    }
}
