//! Letters and reduced words of a free group.
//!
//! The free group on `r` generators is written over the alphabet
//! `a, b, c, ...` with capital letters denoting inverses, so `aBa` is the
//! word a b^-1 a and `1` is the identity. Words are kept freely reduced at
//! all times: every constructor and operation cancels adjacent inverse
//! pairs, so two [`Word`]s are equal as group elements iff they are equal
//! as values.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// A letter `x` or `x^-1` of the free group alphabet.
///
/// Letters are encoded as `2 * index + inverse_bit`, so the derived order
/// interleaves each generator with its inverse: `a < a^-1 < b < b^-1 < ...`.
/// This order drives every canonical traversal in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter(pub u32);

impl Letter {
    /// The positive letter with the given generator index (0 is `a`).
    pub fn positive(index: u32) -> Self {
        Letter(2 * index)
    }

    /// The inverse letter with the given generator index (0 is `a^-1`).
    pub fn negative(index: u32) -> Self {
        Letter(2 * index + 1)
    }

    /// Generator index, ignoring the inverse bit.
    pub fn index(self) -> u32 {
        self.0 / 2
    }

    /// Whether this is the inverse of a generator.
    pub fn is_inverse(self) -> bool {
        self.0 % 2 == 1
    }

    /// The formal inverse of this letter.
    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    /// ASCII rendering for the first 26 generators.
    pub fn to_char(self) -> Option<char> {
        let index = self.index();
        if index >= 26 {
            return None;
        }
        let base = if self.is_inverse() { b'A' } else { b'a' };
        Some((base + index as u8) as char)
    }

    /// Parse a single ASCII letter: lowercase is a generator, uppercase its
    /// inverse.
    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'a'..='z' => Some(Letter::positive(c as u32 - 'a' as u32)),
            'A'..='Z' => Some(Letter::negative(c as u32 - 'A' as u32)),
            _ => None,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_char() {
            Some(c) => write!(f, "{c}"),
            None if self.is_inverse() => write!(f, "<{}>'", self.index()),
            None => write!(f, "<{}>", self.index()),
        }
    }
}

/// A freely reduced word, the normal form of a free group element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    /// The identity element.
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    /// The one-letter word.
    pub fn from_letter(letter: Letter) -> Self {
        Word(vec![letter])
    }

    /// Build a word from letters, freely reducing.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut word = Word::identity();
        for letter in letters {
            word.push(letter);
        }
        word
    }

    /// Append one letter, cancelling against the current last letter.
    pub fn push(&mut self, letter: Letter) {
        if self.0.last() == Some(&letter.inverse()) {
            self.0.pop();
        } else {
            self.0.push(letter);
        }
    }

    /// Number of letters of the reduced word.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Whether this is the identity.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The letters of the reduced word, in order.
    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// The inverse word.
    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Largest generator index used, or `None` for the identity.
    pub fn max_index(&self) -> Option<u32> {
        self.0.iter().map(|l| l.index()).max()
    }

    /// `self` raised to an integer power.
    pub fn pow(&self, exponent: i64) -> Self {
        let base = if exponent < 0 { self.inverse() } else { self.clone() };
        let mut result = Word::identity();
        for _ in 0..exponent.unsigned_abs() {
            result = &result * &base;
        }
        result
    }
}

impl Mul for &Word {
    type Output = Word;

    /// Concatenation with free reduction at the seam.
    fn mul(self, rhs: &Word) -> Word {
        let mut product = self.clone();
        for &letter in rhs.letters() {
            product.push(letter);
        }
        product
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parse `1` (identity) or a string of ASCII letters, e.g. `aBa`.
    fn from_str(s: &str) -> Result<Self, Error> {
        if s.is_empty() {
            return Err(Error::ParseWord {
                position: 0,
                message: "empty input; write 1 for the identity".into(),
            });
        }
        if s == "1" {
            return Ok(Word::identity());
        }
        let mut word = Word::identity();
        for (position, c) in s.char_indices() {
            match Letter::from_char(c) {
                Some(letter) => word.push(letter),
                None => {
                    return Err(Error::ParseWord {
                        position,
                        message: format!("unexpected character {c:?}"),
                    });
                }
            }
        }
        Ok(word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for letter in &self.0 {
            write!(f, "{letter}")?;
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub mod endomorphism;
pub mod whitehead;

pub use endomorphism::Endomorphism;
pub use whitehead::{enumerate_bases, whitehead_generators, WhiteheadAutomorphism};
