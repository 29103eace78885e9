//! Binary strings over {B, W}, cyclic equivalence classes, and string
//! compositions: the index language for the `g`- and `f`-type indeterminates.
//!
//! Conventions:
//! - `B` (black) sorts before `W` (white).
//! - Symbol positions are 1-based (`get(1)` is the first symbol), matching the
//!   subscript convention used throughout the operator definitions.
//! - A cyclic string is stored as its canonical representative, the
//!   lexicographically least rotation.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::AtlasError;

/// A face-corner mark: black (`B`) or white (`W`).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Symbol {
    Black,
    White,
}

impl Symbol {
    pub fn as_char(self) -> char {
        match self {
            Symbol::Black => 'B',
            Symbol::White => 'W',
        }
    }

    pub fn from_char(c: char) -> Option<Symbol> {
        match c {
            'B' => Some(Symbol::Black),
            'W' => Some(Symbol::White),
            _ => None,
        }
    }

    pub fn is_black(self) -> bool {
        self == Symbol::Black
    }
}

/// A finite word over {B, W}. The empty word is written `""`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BinaryString(Vec<Symbol>);

impl BinaryString {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        BinaryString(symbols)
    }

    pub fn empty() -> Self {
        BinaryString(Vec::new())
    }

    /// Parse from text such as `"BWW"`. The empty string parses to ε.
    pub fn parse(text: &str) -> Result<Self, AtlasError> {
        let mut symbols = Vec::with_capacity(text.len());
        for c in text.chars() {
            symbols.push(
                Symbol::from_char(c)
                    .ok_or_else(|| AtlasError::invalid(format!("bad symbol {c:?} in string")))?,
            );
        }
        Ok(BinaryString(symbols))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// 1-based indexing: `get(1)` is the first symbol. Panics out of range.
    pub fn get(&self, i: usize) -> Symbol {
        assert!(i >= 1 && i <= self.len(), "1-based index {i} out of range");
        self.0[i - 1]
    }

    pub fn first(&self) -> Option<Symbol> {
        self.0.first().copied()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s);
    }

    /// Concatenation of `self` followed by `other`.
    pub fn concat(&self, other: &BinaryString) -> BinaryString {
        let mut out = self.0.clone();
        out.extend_from_slice(&other.0);
        BinaryString(out)
    }

    /// Substring of 1-based positions `lo..=hi` (empty when `lo > hi`).
    pub fn slice(&self, lo: usize, hi: usize) -> BinaryString {
        if lo > hi {
            return BinaryString::empty();
        }
        BinaryString(self.0[lo - 1..hi].to_vec())
    }

    /// Rotation moving the first `k` symbols to the end.
    pub fn rotate_left(&self, k: usize) -> BinaryString {
        if self.is_empty() {
            return self.clone();
        }
        let k = k % self.len();
        let mut out = self.0[k..].to_vec();
        out.extend_from_slice(&self.0[..k]);
        BinaryString(out)
    }

    /// All `len()` rotations, with multiplicity (the multiset of cyclic shifts).
    pub fn rotations(&self) -> Vec<BinaryString> {
        (0..self.len()).map(|k| self.rotate_left(k)).collect()
    }

    pub fn count_white(&self) -> usize {
        self.0.iter().filter(|s| **s == Symbol::White).count()
    }

    pub fn count_black(&self) -> usize {
        self.0.iter().filter(|s| **s == Symbol::Black).count()
    }

    /// The all-white word of length `n` (indexes the face classes of the
    /// central initial condition).
    pub fn whites(n: usize) -> BinaryString {
        BinaryString(vec![Symbol::White; n])
    }

    /// The all-black word of length `n` (used to encode length-only shadows).
    pub fn blacks(n: usize) -> BinaryString {
        BinaryString(vec![Symbol::Black; n])
    }
}

impl fmt::Display for BinaryString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl Serialize for BinaryString {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BinaryString {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let text = String::deserialize(de)?;
        BinaryString::parse(&text).map_err(serde::de::Error::custom)
    }
}

/// A rotation class of a binary string, stored canonically as the
/// lexicographically least rotation (B < W). Equality of cyclic strings is
/// equality of representatives.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CyclicString {
    repr: BinaryString,
}

impl CyclicString {
    pub fn representative(&self) -> &BinaryString {
        &self.repr
    }

    pub fn len(&self) -> usize {
        self.repr.len()
    }

    pub fn is_empty(&self) -> bool {
        self.repr.is_empty()
    }

    pub fn count_white(&self) -> usize {
        self.repr.count_white()
    }

    pub fn count_black(&self) -> usize {
        self.repr.count_black()
    }

    /// The multiset of rotations of the class (each of the `len()` shifts of
    /// the representative, duplicates included).
    pub fn rotations(&self) -> Vec<BinaryString> {
        self.repr.rotations()
    }

    /// Parse the `"(BWW)"` text form.
    pub fn parse(text: &str) -> Result<Self, AtlasError> {
        let inner = text
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| AtlasError::invalid(format!("cyclic string {text:?} not in (..) form")))?;
        Ok(canonicalize(&BinaryString::parse(inner)?))
    }
}

impl fmt::Display for CyclicString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.repr)
    }
}

impl fmt::Debug for CyclicString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl Serialize for CyclicString {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CyclicString {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let text = String::deserialize(de)?;
        CyclicString::parse(&text).map_err(serde::de::Error::custom)
    }
}

/// Canonical form of the rotation class of `word`: the lexicographically
/// least rotation. All rotations of a word canonicalize identically.
pub fn canonicalize(word: &BinaryString) -> CyclicString {
    let repr = word
        .rotations()
        .into_iter()
        .min()
        .unwrap_or_else(BinaryString::empty);
    CyclicString { repr }
}

/// Shorthand: canonical cyclic class of a slice of symbols.
pub fn cyclic(symbols: &[Symbol]) -> CyclicString {
    canonicalize(&BinaryString::new(symbols.to_vec()))
}

/// An ordered split of a nonempty string into nonempty parts whose
/// concatenation is the original string.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StringComposition {
    parts: Vec<BinaryString>,
}

impl StringComposition {
    pub fn parts(&self) -> &[BinaryString] {
        &self.parts
    }

    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    pub fn concat(&self) -> BinaryString {
        let mut out = BinaryString::empty();
        for p in &self.parts {
            out = out.concat(p);
        }
        out
    }
}

/// All compositions of `word` into exactly `num_parts` nonempty parts, in
/// lexicographic order of cut positions. The count is
/// binomial(len - 1, num_parts - 1).
pub fn string_compositions(
    word: &BinaryString,
    num_parts: usize,
) -> Result<Vec<StringComposition>, AtlasError> {
    if word.is_empty() {
        return Err(AtlasError::invalid("cannot compose the empty string"));
    }
    let n = word.len();
    let mut out = Vec::new();
    if num_parts == 0 || num_parts > n {
        return Ok(out);
    }
    // Cut positions are chosen among the n-1 gaps; recurse on the first cut.
    let mut cuts = Vec::with_capacity(num_parts - 1);
    fn rec(
        word: &BinaryString,
        num_parts: usize,
        start: usize,
        cuts: &mut Vec<usize>,
        out: &mut Vec<StringComposition>,
    ) {
        if cuts.len() == num_parts - 1 {
            let n = word.len();
            let mut parts = Vec::with_capacity(num_parts);
            let mut lo = 1;
            for &c in cuts.iter() {
                parts.push(word.slice(lo, c));
                lo = c + 1;
            }
            parts.push(word.slice(lo, n));
            out.push(StringComposition { parts });
            return;
        }
        let remaining = num_parts - 1 - cuts.len();
        // Leave room for the remaining cuts.
        for c in start..=(word.len() - 1 - (remaining - 1)) {
            cuts.push(c);
            rec(word, num_parts, c + 1, cuts, out);
            cuts.pop();
        }
    }
    rec(word, num_parts, 1, &mut cuts, &mut out);
    Ok(out)
}

/// All compositions of `word` into any number of parts.
pub fn all_string_compositions(word: &BinaryString) -> Result<Vec<StringComposition>, AtlasError> {
    let mut out = Vec::new();
    for i in 1..=word.len() {
        out.extend(string_compositions(word, i)?);
    }
    Ok(out)
}

/// Number of parts beyond the first whose leading symbol is black:
/// `|{2 <= j <= k : first symbol of part j is B}|`.
pub fn iota(comp: &StringComposition) -> usize {
    comp.parts[1..]
        .iter()
        .filter(|p| p.first() == Some(Symbol::Black))
        .count()
}
