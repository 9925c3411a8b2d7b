//! Exact calculus of words, cylinder intervals, and the self-similar measure.
//!
//! The measure is the unique Borel probability `P` on the line satisfying
//! `P = p1·P∘S1⁻¹ + p2·P∘S2⁻¹` for the two contractions `S1(x) = r1·x` and
//! `S2(x) = r2·x + (1 - r2)`. The fixed instance studied by the rest of the
//! crate uses `p = (1/4, 3/4)` and `r = (1/4, 1/2)`; every quantity it needs
//! (cylinder endpoints, masses, conditional means, second moments) has an
//! exact rational value computed here.
//!
//! A word over `{1, 2}` addresses the cylinder obtained by composing the two
//! maps in word order, leftmost symbol outermost: the word `21` addresses
//! `S2(S1([0,1]))`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_traits::{One, Zero};
use serde::de;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::rational::{int, rat, Rational};

/// Symbols are packed into a `u64`, one bit per symbol: bit value 0 encodes
/// symbol `1`, bit value 1 encodes symbol `2`. Bit `i` holds the `i`-th
/// symbol of the word, so the representation is cheap to hash and extend.
pub const MAX_WORD_LEN: usize = 64;

/// A finite string over the alphabet `{1, 2}`. The empty word addresses the
/// whole unit interval.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Word {
    len: u8,
    bits: u64,
}

impl Word {
    pub const fn empty() -> Self {
        Word { len: 0, bits: 0 }
    }

    pub fn from_symbols(symbols: &[u8]) -> Result<Self, Error> {
        let mut w = Word::empty();
        if symbols.len() > MAX_WORD_LEN {
            return Err(Error::BadWord(format!("{} symbols", symbols.len())));
        }
        for &s in symbols {
            if s != 1 && s != 2 {
                return Err(Error::BadWord(format!("symbol {s}")));
            }
            w = w.child(s);
        }
        Ok(w)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of `1` symbols, written `c(σ)`.
    pub fn ones_count(&self) -> usize {
        let mask = if self.len == 64 {
            u64::MAX
        } else {
            (1u64 << self.len) - 1
        };
        self.len() - (self.bits & mask).count_ones() as usize
    }

    /// Symbol at position `i` (0-based), as 1 or 2.
    pub fn symbol(&self, i: usize) -> u8 {
        debug_assert!(i < self.len());
        if self.bits >> i & 1 == 0 {
            1
        } else {
            2
        }
    }

    pub fn symbols(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.len()).map(|i| self.symbol(i))
    }

    /// The word extended by one symbol. Panics past [`MAX_WORD_LEN`]; all
    /// callers bound word growth well below it.
    pub fn child(&self, symbol: u8) -> Word {
        assert!(self.len() < MAX_WORD_LEN, "word length limit exceeded");
        assert!(symbol == 1 || symbol == 2);
        let bit = u64::from(symbol == 2) << self.len;
        Word {
            len: self.len + 1,
            bits: self.bits | bit,
        }
    }

    pub fn parent(&self) -> Option<Word> {
        if self.is_empty() {
            return None;
        }
        let len = self.len - 1;
        Some(Word {
            len,
            bits: self.bits & ((1u64 << len) - 1),
        })
    }

    /// True when `self` is a (not necessarily proper) prefix of `other`.
    pub fn is_prefix_of(&self, other: &Word) -> bool {
        if self.len > other.len {
            return false;
        }
        let mask = if self.len == 0 {
            0
        } else {
            (1u64 << self.len) - 1
        };
        (other.bits ^ self.bits) & mask == 0
    }
}

impl Ord for Word {
    /// Lexicographic order with `1 < 2`; a proper prefix sorts before its
    /// extensions. For prefix-free sets this coincides with the left-to-right
    /// order of the addressed cylinders on the line.
    fn cmp(&self, other: &Self) -> Ordering {
        let common = self.len().min(other.len());
        for i in 0..common {
            match self.symbol(i).cmp(&other.symbol(i)) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "∅");
        }
        for s in self.symbols() {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        if s.is_empty() || s == "∅" {
            return Ok(Word::empty());
        }
        let mut symbols = Vec::with_capacity(s.len());
        for ch in s.chars() {
            match ch {
                '1' => symbols.push(1),
                '2' => symbols.push(2),
                _ => return Err(Error::BadWord(s.into())),
            }
        }
        Word::from_symbols(&symbols)
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
        s.parse().map_err(de::Error::custom)
    }
}

/// The two-map iterated function system together with its probability
/// vector. `S1(x) = r1·x` fixes 0 and `S2(x) = r2·x + (1 - r2)` fixes 1, so
/// the attractor always sits inside `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IfsParams {
    pub p1: Rational,
    pub p2: Rational,
    pub r1: Rational,
    pub r2: Rational,
}

impl IfsParams {
    /// The fixed nonhomogeneous instance the engine is built for.
    pub fn standard() -> &'static IfsParams {
        static STANDARD: OnceLock<IfsParams> = OnceLock::new();
        STANDARD.get_or_init(|| IfsParams {
            p1: rat(1, 4),
            p2: rat(3, 4),
            r1: rat(1, 4),
            r2: rat(1, 2),
        })
    }

    /// General parameters for the heuristic oracle mode. Requires
    /// `0 < p1 < 1`, `0 < r1`, `0 < r2` and `r1 + r2 < 1` (disjoint images).
    pub fn general(p1: Rational, r1: Rational, r2: Rational) -> Result<IfsParams, Error> {
        let zero = Rational::zero();
        let one = Rational::one();
        if p1 <= zero || p1 >= one {
            return Err(Error::BadParams(format!("p1 = {p1} not in (0, 1)")));
        }
        if r1 <= zero || r2 <= zero || &r1 + &r2 >= one {
            return Err(Error::BadParams(format!(
                "ratios r1 = {r1}, r2 = {r2} must be positive with r1 + r2 < 1"
            )));
        }
        let p2 = &one - &p1;
        Ok(IfsParams { p1, p2, r1, r2 })
    }

    pub fn is_standard(&self) -> bool {
        self == Self::standard()
    }

    fn ratio(&self, symbol: u8) -> &Rational {
        if symbol == 1 {
            &self.r1
        } else {
            &self.r2
        }
    }

    fn offset(&self, symbol: u8) -> Rational {
        if symbol == 1 {
            Rational::zero()
        } else {
            Rational::one() - &self.r2
        }
    }

    fn prob_symbol(&self, symbol: u8) -> &Rational {
        if symbol == 1 {
            &self.p1
        } else {
            &self.p2
        }
    }

    /// The affine form `(scale, offset)` of the composed map, leftmost symbol
    /// outermost: appending a symbol composes on the inside.
    pub fn affine(&self, word: &Word) -> (Rational, Rational) {
        let mut scale = Rational::one();
        let mut offset = Rational::zero();
        for s in word.symbols() {
            // (a, b) ∘ (c, d) = (a·c, a·d + b)
            offset = &offset + &scale * self.offset(s);
            scale = &scale * self.ratio(s);
        }
        (scale, offset)
    }

    /// Applies the composed map to a point.
    pub fn map_point(&self, word: &Word, x: &Rational) -> Rational {
        let (scale, offset) = self.affine(word);
        scale * x + offset
    }

    /// Mass of the cylinder addressed by `word`: the product of branch
    /// probabilities.
    pub fn prob(&self, word: &Word) -> Rational {
        word.symbols()
            .fold(Rational::one(), |acc, s| acc * self.prob_symbol(s))
    }

    /// Length of the cylinder interval (the composed contraction ratio).
    pub fn length(&self, word: &Word) -> Rational {
        word.symbols()
            .fold(Rational::one(), |acc, s| acc * self.ratio(s))
    }

    /// `mass · length²`, the quantity whose maximum over the frontier picks
    /// the next cylinder to split.
    pub fn weight(&self, word: &Word) -> Rational {
        let len = self.length(word);
        self.prob(word) * &len * &len
    }

    pub fn cylinder(&self, word: &Word) -> Cylinder {
        let (scale, offset) = self.affine(word);
        Cylinder {
            word: *word,
            right: &scale + &offset,
            left: offset,
            prob: self.prob(word),
            length: scale,
        }
    }

    /// Conditional mean of the measure on the cylinder: the composed map
    /// applied to the global mean.
    pub fn centroid(&self, word: &Word) -> Rational {
        self.map_point(word, &self.moments().mean)
    }

    /// Mean, second moment, and variance, obtained by solving the linear
    /// fixed-point equations the self-similarity induces on `E(X)` and
    /// `E(X²)` rather than by hardcoding the known values.
    pub fn moments(&self) -> Moments {
        let t1 = self.offset(1);
        let t2 = self.offset(2);
        // E = Σ pᵢ (rᵢ E + tᵢ)
        let mean_num = &self.p1 * &t1 + &self.p2 * &t2;
        let mean_den = Rational::one() - (&self.p1 * &self.r1 + &self.p2 * &self.r2);
        let mean = mean_num / mean_den;
        // E₂ = Σ pᵢ (rᵢ² E₂ + 2 rᵢ tᵢ E + tᵢ²)
        let two = int(2);
        let second_num = &self.p1 * (&two * &self.r1 * &t1 * &mean + &t1 * &t1)
            + &self.p2 * (&two * &self.r2 * &t2 * &mean + &t2 * &t2);
        let second_den = Rational::one() - self.contraction_factor();
        let second_moment = second_num / second_den;
        let variance = &second_moment - &mean * &mean;
        Moments {
            mean,
            second_moment,
            variance,
        }
    }

    /// `Σ pᵢ rᵢ²`: the factor by which one full level of splitting scales the
    /// total frontier weight (13/64 for the standard parameters).
    pub fn contraction_factor(&self) -> Rational {
        &self.p1 * &self.r1 * &self.r1 + &self.p2 * &self.r2 * &self.r2
    }

    /// `1 − Σ pᵢ rᵢ²`: the fraction of a cylinder's weight removed by
    /// splitting it (51/64 for the standard parameters).
    pub fn split_removal_factor(&self) -> Rational {
        Rational::one() - self.contraction_factor()
    }

    /// Exact distortion of serving the cylinder `J_word` with the single
    /// point `a`: `mass · (length²·V + (centroid − a)²)`.
    pub fn interval_distortion(&self, word: &Word, a: &Rational) -> Rational {
        let variance = self.moments().variance;
        let scale = self.length(word);
        let d = self.centroid(word) - a;
        self.prob(word) * (&scale * &scale * variance + &d * &d)
    }
}

/// Exact moments of the measure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Moments {
    pub mean: Rational,
    pub second_moment: Rational,
    pub variance: Rational,
}

/// A cylinder interval with its exact endpoints, mass, and length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cylinder {
    pub word: Word,
    pub left: Rational,
    pub right: Rational,
    pub prob: Rational,
    pub length: Rational,
}

// Convenience wrappers for the fixed standard measure; the rest of the crate
// works in terms of these.

pub fn map_point(word: &Word, x: &Rational) -> Rational {
    IfsParams::standard().map_point(word, x)
}

pub fn cylinder(word: &Word) -> Cylinder {
    IfsParams::standard().cylinder(word)
}

pub fn centroid(word: &Word) -> Rational {
    IfsParams::standard().centroid(word)
}

pub fn prob(word: &Word) -> Rational {
    IfsParams::standard().prob(word)
}

pub fn weight(word: &Word) -> Rational {
    IfsParams::standard().weight(word)
}

pub fn moments() -> Moments {
    IfsParams::standard().moments()
}

pub fn variance() -> Rational {
    moments().variance
}

pub fn interval_distortion(word: &Word, a: &Rational) -> Rational {
    IfsParams::standard().interval_distortion(word, a)
}

/// Conditional mean over the union of two disjoint cylinders. Rejects
/// prefix-related words, whose cylinders are nested rather than disjoint.
pub fn pair_centroid(word_a: &Word, word_b: &Word) -> Result<Rational, Error> {
    if word_a.is_prefix_of(word_b) || word_b.is_prefix_of(word_a) {
        return Err(Error::PrefixRelated(*word_a, *word_b));
    }
    let pa = prob(word_a);
    let pb = prob(word_b);
    Ok((&pa * centroid(word_a) + &pb * centroid(word_b)) / (pa + pb))
}

/// Parses a word from its `{1,2}` string form.
pub fn word(s: &str) -> Word {
    s.parse().expect("literal word")
}
