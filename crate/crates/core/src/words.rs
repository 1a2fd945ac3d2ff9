//! Plain words over `x1..xn`, reduced words in the free group on `{a, b}`,
//! the binary encoding `x_k -> a^k b`, and the exponent-negating transforms.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::num::NonZeroUsize;
use core::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WordError {
    /// Letter index 0 or above the alphabet size.
    LetterOutOfRange { index: usize, alphabet: usize },
    Parse(String),
}

impl fmt::Display for WordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordError::LetterOutOfRange { index, alphabet } => {
                write!(f, "letter x{index} outside alphabet of size {alphabet}")
            }
            WordError::Parse(s) => write!(f, "cannot parse word {s:?}"),
        }
    }
}

impl core::error::Error for WordError {}

/// A letter `x_k` of the alphabet `x1..xn`, stored by its 1-based index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(NonZeroUsize);

impl Letter {
    pub fn new(index: usize, alphabet: usize) -> Result<Self, WordError> {
        match NonZeroUsize::new(index) {
            Some(i) if index <= alphabet => Ok(Letter(i)),
            _ => Err(WordError::LetterOutOfRange { index, alphabet }),
        }
    }

    pub fn index(self) -> usize {
        self.0.get()
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// A word over `x1..xn`. Text form: `"x1 x3 x2"`; the empty word prints as
/// `ε` and parses from `""` or `"ε"`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_indices(indices: &[usize], alphabet: usize) -> Result<Self, WordError> {
        indices
            .iter()
            .map(|&i| Letter::new(i, alphabet))
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    pub fn parse(s: &str, alphabet: usize) -> Result<Self, WordError> {
        let t = s.trim();
        if t.is_empty() || t == "ε" {
            return Ok(Word::empty());
        }
        let mut out = Vec::new();
        for tok in t.split_whitespace() {
            let idx = tok
                .strip_prefix('x')
                .and_then(|d| d.parse::<usize>().ok())
                .ok_or_else(|| WordError::Parse(s.to_string()))?;
            out.push(Letter::new(idx, alphabet)?);
        }
        Ok(Word(out))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// All words of length exactly `len` over `x1..xn` in lexicographic order.
    pub fn all_of_length(alphabet: usize, len: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut idx = alloc::vec![1usize; len];
        if alphabet == 0 {
            if len == 0 {
                out.push(Word::empty());
            }
            return out;
        }
        loop {
            out.push(Word::from_indices(&idx, alphabet).expect("indices in range"));
            let mut pos = len;
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                if idx[pos] < alphabet {
                    idx[pos] += 1;
                    for later in idx.iter_mut().skip(pos + 1) {
                        *later = 1;
                    }
                    break;
                }
            }
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// A free generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Syllable {
    pub base: Gen,
    /// Never zero inside a [`FreeWord`].
    pub exp: i64,
}

/// The exponent-negating transforms and reversal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Transform {
    Reverse,
    NegA,
    NegB,
    NegAB,
}

impl Transform {
    pub const ALL: [Transform; 4] = [Transform::Reverse, Transform::NegA, Transform::NegB, Transform::NegAB];
}

/// A reduced word in the free group on `{a, b}` as an alternating list of
/// syllables `g^k`, `k != 0`. Construction always reduces, so adjacent
/// syllables have distinct bases.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FreeWord {
    syllables: Vec<Syllable>,
}

/// Fully reduces a raw syllable list: zero exponents vanish and runs over the
/// same base merge, cascading through any cancellations.
pub fn free_reduce<I>(raw: I) -> FreeWord
where
    I: IntoIterator<Item = (Gen, i64)>,
{
    let mut stack: Vec<Syllable> = Vec::new();
    for (base, exp) in raw {
        if exp == 0 {
            continue;
        }
        match stack.last_mut() {
            Some(top) if top.base == base => {
                top.exp += exp;
                if top.exp == 0 {
                    stack.pop();
                }
            }
            _ => stack.push(Syllable { base, exp }),
        }
    }
    FreeWord { syllables: stack }
}

/// Encodes `x_k` as `a^k b`; homomorphic over concatenation.
pub fn gamma1(word: &Word) -> FreeWord {
    free_reduce(
        word.letters()
            .iter()
            .flat_map(|l| [(Gen::A, l.index() as i64), (Gen::B, 1)]),
    )
}

pub fn word_transform(w: &FreeWord, variant: Transform) -> FreeWord {
    let flip = |s: &Syllable| -> (Gen, i64) {
        let negate = match variant {
            Transform::Reverse => false,
            Transform::NegA => s.base == Gen::A,
            Transform::NegB => s.base == Gen::B,
            Transform::NegAB => true,
        };
        (s.base, if negate { -s.exp } else { s.exp })
    };
    match variant {
        Transform::Reverse => free_reduce(w.syllables.iter().rev().map(flip)),
        _ => free_reduce(w.syllables.iter().map(flip)),
    }
}

impl FreeWord {
    pub fn empty() -> Self {
        FreeWord::default()
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Group product, reduced.
    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        free_reduce(
            self.syllables
                .iter()
                .chain(other.syllables.iter())
                .map(|s| (s.base, s.exp)),
        )
    }

    pub fn inverse(&self) -> FreeWord {
        free_reduce(self.syllables.iter().rev().map(|s| (s.base, -s.exp)))
    }

    /// Total number of generator letters, `sum |k|`.
    pub fn letter_len(&self) -> u64 {
        self.syllables.iter().map(|s| s.exp.unsigned_abs()).sum()
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return f.write_str("ε");
        }
        for (i, s) in self.syllables.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            let g = match s.base {
                Gen::A => "a",
                Gen::B => "b",
            };
            if s.exp == 1 {
                f.write_str(g)?;
            } else {
                write!(f, "{g}^{}", s.exp)?;
            }
        }
        Ok(())
    }
}

impl FromStr for FreeWord {
    type Err = WordError;

    /// Parses `"a^3 b^2 a^-4 b"`; the input need not be reduced.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.is_empty() || t == "ε" {
            return Ok(FreeWord::empty());
        }
        let bad = || WordError::Parse(s.to_string());
        let mut raw = Vec::new();
        for tok in t.split_whitespace() {
            let mut chars = tok.chars();
            let base = match chars.next() {
                Some('a') => Gen::A,
                Some('b') => Gen::B,
                _ => return Err(bad()),
            };
            let rest = chars.as_str();
            let exp = if rest.is_empty() {
                1
            } else {
                rest.strip_prefix('^')
                    .and_then(|e| e.parse::<i64>().ok())
                    .ok_or_else(bad)?
            };
            raw.push((base, exp));
        }
        Ok(free_reduce(raw))
    }
}
