//! Mixed-modification Post correspondence instances and a bounded solver.
//!
//! A mixed solution is a nonempty word `w1 ... wk` over the source alphabet
//! with two selector sequences, each choosing `h` or `g` per position, that
//! differ somewhere and produce the same concatenated image.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

/// Longest word [`brute_search`] accepts without an explicit cap.
pub const DEFAULT_MAX_LEN_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MmpcpError {
    /// Malformed instance (duplicate names, overlapping alphabets, missing
    /// images, unknown target letters).
    Instance(String),
    UnknownLetter(usize),
    /// Selector sequences must have the word's length.
    LengthMismatch { word: usize, sel_a: usize, sel_b: usize },
    /// Empty word, or selector sequences that agree everywhere.
    IllFormed(&'static str),
    MaxLenAboveCap { max_len: usize, cap: usize },
}

impl fmt::Display for MmpcpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MmpcpError::Instance(s) => write!(f, "invalid instance: {s}"),
            MmpcpError::UnknownLetter(i) => write!(f, "source letter index {i} out of range"),
            MmpcpError::LengthMismatch { word, sel_a, sel_b } => write!(
                f,
                "selector lengths {sel_a} and {sel_b} do not match word length {word}"
            ),
            MmpcpError::IllFormed(why) => write!(f, "ill-formed solution: {why}"),
            MmpcpError::MaxLenAboveCap { max_len, cap } => {
                write!(f, "max_len {max_len} exceeds the search cap {cap}")
            }
        }
    }
}

impl core::error::Error for MmpcpError {}

/// Which of the two morphisms a position uses. `H` sorts before `G`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Selector {
    H,
    G,
}

impl Selector {
    pub fn as_str(self) -> &'static str {
        match self {
            Selector::H => "H",
            Selector::G => "G",
        }
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Instance over named alphabets. Letters are stored as 0-based indices into
/// `sigma` and `delta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MmpcpInstance {
    sigma: Vec<String>,
    delta: Vec<String>,
    h: Vec<Vec<usize>>,
    g: Vec<Vec<usize>>,
    claus: bool,
}

fn unique(names: &[String], what: &str) -> Result<(), MmpcpError> {
    let set: BTreeSet<&String> = names.iter().collect();
    if set.len() != names.len() {
        return Err(MmpcpError::Instance(alloc::format!("duplicate {what} letter")));
    }
    Ok(())
}

impl MmpcpInstance {
    pub fn new(
        sigma: Vec<String>,
        delta: Vec<String>,
        h: Vec<Vec<usize>>,
        g: Vec<Vec<usize>>,
        claus: bool,
    ) -> Result<Self, MmpcpError> {
        unique(&sigma, "source")?;
        unique(&delta, "target")?;
        if let Some(s) = sigma.iter().find(|s| delta.contains(s)) {
            return Err(MmpcpError::Instance(alloc::format!("{s} is in both alphabets")));
        }
        if h.len() != sigma.len() || g.len() != sigma.len() {
            return Err(MmpcpError::Instance("h and g need one image per source letter".into()));
        }
        if h.iter().chain(&g).flatten().any(|&d| d >= delta.len()) {
            return Err(MmpcpError::Instance("image uses an unknown target letter".into()));
        }
        Ok(MmpcpInstance { sigma, delta, h, g, claus })
    }

    /// Builds an instance from images written as space-separated target
    /// letter names, e.g. `("s1", "d1 d1")`. An empty string is the empty
    /// image.
    pub fn from_named(
        sigma: Vec<String>,
        delta: Vec<String>,
        h: &[(String, String)],
        g: &[(String, String)],
        claus: bool,
    ) -> Result<Self, MmpcpError> {
        let image = |map: &[(String, String)], s: &String| -> Result<Vec<usize>, MmpcpError> {
            let (_, text) = map
                .iter()
                .find(|(k, _)| k == s)
                .ok_or_else(|| MmpcpError::Instance(alloc::format!("no image for {s}")))?;
            text.split_whitespace()
                .map(|d| {
                    delta
                        .iter()
                        .position(|x| x == d)
                        .ok_or_else(|| MmpcpError::Instance(alloc::format!("unknown target letter {d}")))
                })
                .collect()
        };
        for (k, _) in h.iter().chain(g) {
            if !sigma.contains(k) {
                return Err(MmpcpError::Instance(alloc::format!("image given for unknown letter {k}")));
            }
        }
        let hs = sigma.iter().map(|s| image(h, s)).collect::<Result<Vec<_>, _>>()?;
        let gs = sigma.iter().map(|s| image(g, s)).collect::<Result<Vec<_>, _>>()?;
        MmpcpInstance::new(sigma, delta, hs, gs, claus)
    }

    pub fn sigma(&self) -> &[String] {
        &self.sigma
    }

    pub fn delta(&self) -> &[String] {
        &self.delta
    }

    pub fn is_claus(&self) -> bool {
        self.claus
    }

    pub fn h(&self) -> &[Vec<usize>] {
        &self.h
    }

    pub fn g(&self) -> &[Vec<usize>] {
        &self.g
    }

    /// Image of source letter `i` under the chosen morphism.
    pub fn image(&self, i: usize, sel: Selector) -> &[usize] {
        match sel {
            Selector::H => &self.h[i],
            Selector::G => &self.g[i],
        }
    }

    /// Space-separated names of a target word.
    pub fn target_text(&self, word: &[usize]) -> String {
        let names: Vec<&str> = word.iter().map(|&d| self.delta[d].as_str()).collect();
        names.join(" ")
    }

    /// Concatenated image of `word` with one selector per position.
    pub fn apply(&self, word: &[usize], sel: &[Selector]) -> Vec<usize> {
        word.iter().zip(sel).flat_map(|(&i, &s)| self.image(i, s).iter().copied()).collect()
    }

    /// Whether `word` has the shape a solution of a Claus instance must
    /// have: first letter first, last letter last, and neither inside.
    pub fn has_claus_shape(&self, word: &[usize]) -> bool {
        let n = self.sigma.len();
        match word {
            [] => false,
            [only] => n == 1 && *only == 0,
            [first, mid @ .., last] => {
                *first == 0 && *last == n - 1 && mid.iter().all(|&x| x != 0 && x != n - 1)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MixedSolution {
    /// 0-based source letter indices.
    pub word: Vec<usize>,
    pub sel_a: Vec<Selector>,
    pub sel_b: Vec<Selector>,
}

impl MixedSolution {
    fn well_formed(&self, inst: &MmpcpInstance) -> Result<(), MmpcpError> {
        if self.sel_a.len() != self.word.len() || self.sel_b.len() != self.word.len() {
            return Err(MmpcpError::LengthMismatch {
                word: self.word.len(),
                sel_a: self.sel_a.len(),
                sel_b: self.sel_b.len(),
            });
        }
        if let Some(&bad) = self.word.iter().find(|&&i| i >= inst.sigma.len()) {
            return Err(MmpcpError::UnknownLetter(bad));
        }
        if self.word.is_empty() {
            return Err(MmpcpError::IllFormed("empty word"));
        }
        if self.sel_a == self.sel_b {
            return Err(MmpcpError::IllFormed("selectors agree at every position"));
        }
        Ok(())
    }
}

impl fmt::Display for MixedSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |v: &[Selector]| v.iter().map(|x| x.as_str()).collect::<String>();
        let w: Vec<String> = self.word.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "[{}] {} / {}", w.join(" "), s(&self.sel_a), s(&self.sel_b))
    }
}

/// Whether `sol` is a mixed solution of `inst`. Malformed solutions are
/// errors, not `false`.
pub fn check_solution(inst: &MmpcpInstance, sol: &MixedSolution) -> Result<bool, MmpcpError> {
    sol.well_formed(inst)?;
    Ok(inst.apply(&sol.word, &sol.sel_a) == inst.apply(&sol.word, &sol.sel_b))
}

/// [`brute_search_capped`] with [`DEFAULT_MAX_LEN_CAP`].
pub fn brute_search(inst: &MmpcpInstance, max_len: usize) -> Result<Option<MixedSolution>, MmpcpError> {
    brute_search_capped(inst, max_len, DEFAULT_MAX_LEN_CAP)
}

/// Exhaustive search for the canonical least solution with a word of length
/// at most `max_len`: shortest word first, then the lexicographically least
/// word, then the least `(sel_a, sel_b)` with `H < G`.
pub fn brute_search_capped(
    inst: &MmpcpInstance,
    max_len: usize,
    cap: usize,
) -> Result<Option<MixedSolution>, MmpcpError> {
    if max_len > cap {
        return Err(MmpcpError::MaxLenAboveCap { max_len, cap });
    }
    let n = inst.sigma.len();
    if n == 0 {
        return Ok(None);
    }
    for len in 1..=max_len {
        let mut word = alloc::vec![0usize; len];
        loop {
            if !inst.claus || inst.has_claus_shape(&word) {
                if let Some(sol) = least_selectors(inst, &word) {
                    return Ok(Some(sol));
                }
            }
            if !next_word(&mut word, n) {
                break;
            }
        }
    }
    Ok(None)
}

/// Advances `word` to its lexicographic successor; false after the last.
fn next_word(word: &mut [usize], n: usize) -> bool {
    for slot in word.iter_mut().rev() {
        *slot += 1;
        if *slot < n {
            return true;
        }
        *slot = 0;
    }
    false
}

const PAIRS: [(Selector, Selector); 4] = [
    (Selector::H, Selector::H),
    (Selector::H, Selector::G),
    (Selector::G, Selector::H),
    (Selector::G, Selector::G),
];

/// All selector pairs for a fixed word, pruned whenever neither partial
/// image is a prefix of the other; returns the least by `(sel_a, sel_b)`.
fn least_selectors(inst: &MmpcpInstance, word: &[usize]) -> Option<MixedSolution> {
    struct Search<'a> {
        inst: &'a MmpcpInstance,
        word: &'a [usize],
        sel_a: Vec<Selector>,
        sel_b: Vec<Selector>,
        best: Option<(Vec<Selector>, Vec<Selector>)>,
    }

    impl Search<'_> {
        fn go(&mut self, pos: usize, top: &[usize], bottom: &[usize], differs: bool) {
            let common = top.len().min(bottom.len());
            if top[..common] != bottom[..common] {
                return;
            }
            if pos == self.word.len() {
                if differs && top.len() == bottom.len() {
                    let cand = (self.sel_a.clone(), self.sel_b.clone());
                    if self.best.as_ref().is_none_or(|b| cand < *b) {
                        self.best = Some(cand);
                    }
                }
                return;
            }
            let letter = self.word[pos];
            for (a, b) in PAIRS {
                let mut t = top.to_vec();
                t.extend_from_slice(self.inst.image(letter, a));
                let mut u = bottom.to_vec();
                u.extend_from_slice(self.inst.image(letter, b));
                self.sel_a.push(a);
                self.sel_b.push(b);
                self.go(pos + 1, &t, &u, differs || a != b);
                self.sel_a.pop();
                self.sel_b.pop();
            }
        }
    }

    let mut s = Search { inst, word, sel_a: Vec::new(), sel_b: Vec::new(), best: None };
    s.go(0, &[], &[], false);
    s.best.map(|(sel_a, sel_b)| MixedSolution { word: word.to_vec(), sel_a, sel_b })
}
