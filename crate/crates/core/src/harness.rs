//! Bounded verification: exhaustive collision search over automaton
//! acceptance values, the quaternion sign and uniqueness suites, freeness of
//! the generator semigroup and reduction soundness checks.
//!
//! Enumeration is single-threaded here. [`enumerate_values`] can be run on
//! each [`Partition`] separately and the pieces fed to
//! [`report_from_values`], which is how the `qfalab` front end spreads work
//! over threads.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactnum::{RadicalSignature, Rational};
use crate::mmpcp::{brute_search, check_solution, MixedSolution, MmpcpError, MmpcpInstance, Selector};
use crate::qfa::{Qfa, QfaError, RadicalQfa};
use crate::quaternion::{gamma2, QuatRat};
use crate::ratmatrix::{abs_key, gamma, generator_a, generator_b, matmul, RatMatrix};
use crate::reduction::{
    compile_ambiguity, compile_injectivity, solution_to_words, words_to_solution, GeneratorTag, ReductionError,
};
use crate::words::{free_reduce, word_transform, FreeWord, Gen, Transform, Word, WordError};

/// Default cap on the number of words one search may visit.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Cap for [`enumerate_uniqueness`].
pub const UNIQUENESS_BUDGET: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HarnessError {
    /// The search would visit `words` words, more than `budget`.
    Budget { words: u128, budget: u64 },
    /// Two words grouped together disagree on recomputation.
    Reverify { first: Word, second: Word },
    Qfa(QfaError),
    Word(WordError),
    Mmpcp(MmpcpError),
    Reduction(ReductionError),
}

impl fmt::Display for HarnessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HarnessError::Budget { words, budget } => {
                write!(f, "search needs {words} words, budget is {budget}")
            }
            HarnessError::Reverify { first, second } => {
                write!(f, "collision {first} / {second} failed recomputation")
            }
            HarnessError::Qfa(e) => write!(f, "{e}"),
            HarnessError::Word(e) => write!(f, "{e}"),
            HarnessError::Mmpcp(e) => write!(f, "{e}"),
            HarnessError::Reduction(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for HarnessError {}

impl From<QfaError> for HarnessError {
    fn from(e: QfaError) -> Self {
        HarnessError::Qfa(e)
    }
}

impl From<WordError> for HarnessError {
    fn from(e: WordError) -> Self {
        HarnessError::Word(e)
    }
}

impl From<MmpcpError> for HarnessError {
    fn from(e: MmpcpError) -> Self {
        HarnessError::Mmpcp(e)
    }
}

impl From<ReductionError> for HarnessError {
    fn from(e: ReductionError) -> Self {
        HarnessError::Reduction(e)
    }
}

/// FNV-1a over everything written to it.
struct Fnv(u64);

impl Fnv {
    fn new() -> Self {
        Fnv(0xcbf2_9ce4_8422_2325)
    }
}

impl Write for Fnv {
    fn write_str(&mut self, s: &str) -> fmt::Result {
        for b in s.bytes() {
            self.0 ^= u64::from(b);
            self.0 = self.0.wrapping_mul(0x0100_0000_01b3);
        }
        Ok(())
    }
}

fn write_matrix(h: &mut Fnv, m: &RatMatrix) {
    let _ = write!(h, "[{}x{}", m.rows(), m.cols());
    for e in m.entries() {
        let _ = write!(h, " {e}");
    }
    let _ = h.write_str("]");
}

/// Something that reads words letter by letter and yields an exactly
/// comparable acceptance value.
pub trait Automaton {
    type State: Clone;
    type Value: Ord + Clone;

    fn letters(&self) -> usize;
    fn start(&self) -> Self::State;
    /// State after additionally reading the 1-based `letter`.
    fn step(&self, state: &Self::State, letter: usize) -> Result<Self::State, HarnessError>;
    fn value(&self, state: &Self::State) -> Result<Self::Value, HarnessError>;
    /// Value of `w` computed along a different route than `step`, used to
    /// re-check every reported collision.
    fn evaluate(&self, w: &Word) -> Result<Self::Value, HarnessError>;
    /// Stable fingerprint of the automaton's data.
    fn digest(&self) -> u64;
}

impl Automaton for Qfa {
    type State = Vec<Rational>;
    type Value = Rational;

    fn letters(&self) -> usize {
        self.alphabet_size()
    }

    fn start(&self) -> Vec<Rational> {
        self.initial().to_vec()
    }

    fn step(&self, state: &Vec<Rational>, letter: usize) -> Result<Vec<Rational>, HarnessError> {
        Ok(self.generator(letter)?.mul_vec(state).map_err(QfaError::Matrix)?)
    }

    fn value(&self, state: &Vec<Rational>) -> Result<Rational, HarnessError> {
        Ok(self.acceptance_of_state(state)?)
    }

    fn evaluate(&self, w: &Word) -> Result<Rational, HarnessError> {
        let mut m = RatMatrix::identity(self.dimension());
        for l in w.letters() {
            m = matmul(self.generator(l.index())?, &m).map_err(QfaError::Matrix)?;
        }
        let v = m.mul_vec(self.initial()).map_err(QfaError::Matrix)?;
        Ok(self.acceptance_of_state(&v)?)
    }

    fn digest(&self) -> u64 {
        let mut h = Fnv::new();
        let _ = h.write_str("qfa");
        write_matrix(&mut h, self.projection());
        for (name, g) in self.generators() {
            let _ = write!(h, "{name}");
            write_matrix(&mut h, g);
        }
        for x in self.initial() {
            let _ = write!(h, " {x}");
        }
        h.0
    }
}

impl Automaton for RadicalQfa {
    type State = crate::qfa::BlockProduct;
    type Value = RadicalSignature;

    fn letters(&self) -> usize {
        self.alphabet_size()
    }

    fn start(&self) -> Self::State {
        crate::qfa::BlockProduct::identity()
    }

    fn step(&self, state: &Self::State, letter: usize) -> Result<Self::State, HarnessError> {
        Ok(RadicalQfa::step(self, state, letter)?)
    }

    fn value(&self, state: &Self::State) -> Result<RadicalSignature, HarnessError> {
        Ok(self.signature_of(state))
    }

    /// Multiplies the full 8x8 (or 9x9) generator matrices and reads the
    /// blocks back out.
    fn evaluate(&self, w: &Word) -> Result<RadicalSignature, HarnessError> {
        let mut m = RatMatrix::identity(self.dimension());
        for l in w.letters() {
            m = matmul(&self.generator(l.index())?.matrix(), &m).map_err(QfaError::Matrix)?;
        }
        let block = |off: usize| RatMatrix::from_fn(4, 4, |i, j| m.get(off + i, off + j).clone());
        let corner = if self.is_ambiguity_extended() { if m.get(8, 8).is_one() { 1 } else { -1 } } else { 1 };
        Ok(self.signature_of(&crate::qfa::BlockProduct { left: block(0), right: block(4), corner }))
    }

    fn digest(&self) -> u64 {
        let mut h = Fnv::new();
        let _ = write!(h, "radical {}", self.is_ambiguity_extended());
        for g in self.generators() {
            let _ = write!(h, "{} {:?}", g.name, g.corner);
            write_matrix(&mut h, &g.left);
            write_matrix(&mut h, &g.right);
        }
        if let Some(fold) = self.initial_fold() {
            let _ = h.write_str("fold");
            write_matrix(&mut h, &fold.left);
            write_matrix(&mut h, &fold.right);
        }
        h.0
    }
}

/// Number of words of length at most `max_len` over `letters` letters.
pub fn word_count(letters: usize, max_len: usize) -> u128 {
    let mut total: u128 = 0;
    let mut layer: u128 = 1;
    for _ in 0..=max_len {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(letters as u128);
    }
    total
}

fn check_budget(letters: usize, max_len: usize, budget: u64) -> Result<u128, HarnessError> {
    let words = word_count(letters, max_len);
    if words > u128::from(budget) {
        return Err(HarnessError::Budget { words, budget });
    }
    Ok(words)
}

/// Slice of the word space: the empty word, or all nonempty words starting
/// with one letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Partition {
    All,
    Empty,
    FirstLetter(usize),
}

impl Partition {
    /// `Empty` followed by every first letter; together they cover `All`.
    pub fn split(letters: usize) -> Vec<Partition> {
        core::iter::once(Partition::Empty).chain((1..=letters).map(Partition::FirstLetter)).collect()
    }
}

/// Value of every word of length at most `max_len` in `part`, by depth-first
/// extension of the running state.
pub fn enumerate_values<A: Automaton>(
    aut: &A,
    max_len: usize,
    part: Partition,
) -> Result<Vec<(A::Value, Word)>, HarnessError> {
    let n = aut.letters();
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<usize>, A::State)> = Vec::new();
    match part {
        Partition::All => stack.push((Vec::new(), aut.start())),
        Partition::Empty => {
            out.push((aut.value(&aut.start())?, Word::empty()));
            return Ok(out);
        }
        Partition::FirstLetter(l) => {
            if max_len == 0 {
                return Ok(out);
            }
            let s = aut.step(&aut.start(), l)?;
            stack.push((vec![l], s));
        }
    }
    while let Some((ix, state)) = stack.pop() {
        if ix.len() < max_len {
            for l in (1..=n).rev() {
                let next = aut.step(&state, l)?;
                let mut w = ix.clone();
                w.push(l);
                stack.push((w, next));
            }
        }
        out.push((aut.value(&state)?, Word::from_indices(&ix, n)?));
    }
    Ok(out)
}

/// Two distinct words with the same value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollisionPair<V> {
    pub first: Word,
    pub second: Word,
    pub value: V,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollisionReport<V> {
    /// Sorted by `(first, second)` in length-lexicographic order.
    pub pairs: Vec<CollisionPair<V>>,
    pub max_len: usize,
    pub words_checked: u64,
    pub digest: u64,
}

impl<V> CollisionReport<V> {
    /// No collision up to `max_len`.
    pub fn is_injective(&self) -> bool {
        self.pairs.is_empty()
    }
}

fn len_lex(w: &Word) -> (usize, &[crate::words::Letter]) {
    (w.len(), w.letters())
}

/// Groups values exactly, recomputes every colliding word with
/// [`Automaton::evaluate`] and lists every colliding pair.
pub fn report_from_values<A: Automaton>(
    aut: &A,
    max_len: usize,
    values: Vec<(A::Value, Word)>,
) -> Result<CollisionReport<A::Value>, HarnessError> {
    let words_checked = values.len() as u64;
    let mut groups: BTreeMap<A::Value, Vec<Word>> = BTreeMap::new();
    for (v, w) in values {
        groups.entry(v).or_default().push(w);
    }
    let mut pairs = Vec::new();
    for (value, mut words) in groups {
        if words.len() < 2 {
            continue;
        }
        words.sort_by(|a, b| len_lex(a).cmp(&len_lex(b)));
        // Every member is recomputed once; a pair is emitted only when both
        // of its words recomputed to the shared value.
        for w in &words {
            if aut.evaluate(w)? != value {
                let other = if w == &words[0] { &words[1] } else { &words[0] };
                return Err(HarnessError::Reverify { first: other.clone(), second: w.clone() });
            }
        }
        for i in 0..words.len() {
            for j in i + 1..words.len() {
                pairs.push(CollisionPair { first: words[i].clone(), second: words[j].clone(), value: value.clone() });
            }
        }
    }
    pairs.sort_by(|a, b| (len_lex(&a.first), len_lex(&a.second)).cmp(&(len_lex(&b.first), len_lex(&b.second))));
    Ok(CollisionReport { pairs, max_len, words_checked, digest: aut.digest() })
}

/// All collisions among words of length at most `max_len`, refusing to start
/// if that is more than `budget` words.
pub fn collision_search<A: Automaton>(
    aut: &A,
    max_len: usize,
    budget: u64,
) -> Result<CollisionReport<A::Value>, HarnessError> {
    check_budget(aut.letters(), max_len, budget)?;
    let values = enumerate_values(aut, max_len, Partition::All)?;
    report_from_values(aut, max_len, values)
}

/// Exposes the budget check to callers that enumerate partitions themselves.
pub fn precheck_budget(letters: usize, max_len: usize, budget: u64) -> Result<u128, HarnessError> {
    check_budget(letters, max_len, budget)
}

/// A word and transform whose image breaks the expected sign pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaCounterexample {
    pub word: FreeWord,
    pub transform: Transform,
    pub expected: QuatRat,
    pub actual: QuatRat,
}

/// Image of `w` under `t` predicted from the components of `w`'s image.
pub fn expected_transform(q: &QuatRat, t: Transform) -> QuatRat {
    let QuatRat { a: r, b: x, c: y, d: z } = q.clone();
    match t {
        Transform::Reverse => QuatRat::new(r, x, y, -&z),
        Transform::NegA => QuatRat::new(r, -&x, y, -&z),
        Transform::NegB => QuatRat::new(r, x, -&y, -&z),
        Transform::NegAB => QuatRat::new(r, -&x, -&y, z),
    }
}

/// Checks all four transforms on one word.
pub fn check_lemma_identities(w: &FreeWord) -> Result<(), Box<LemmaCounterexample>> {
    let q = gamma2(w);
    for t in Transform::ALL {
        let expected = expected_transform(&q, t);
        let actual = gamma2(&word_transform(w, t));
        if actual != expected {
            return Err(Box::new(LemmaCounterexample { word: w.clone(), transform: t, expected, actual }));
        }
    }
    Ok(())
}

/// Random reduced word with up to `max_syllables` syllables and exponents
/// in `-5..=5`.
pub fn random_free_word(rng: &mut impl Rng, max_syllables: usize) -> FreeWord {
    let count = rng.gen_range(0..=max_syllables);
    let mut base = if rng.gen_bool(0.5) { Gen::A } else { Gen::B };
    let mut raw = Vec::with_capacity(count);
    for _ in 0..count {
        let mut e = rng.gen_range(1..=5i64);
        if rng.gen_bool(0.5) {
            e = -e;
        }
        raw.push((base, e));
        base = if base == Gen::A { Gen::B } else { Gen::A };
    }
    free_reduce(raw)
}

/// Runs [`check_lemma_identities`] on `ε`, `a`, `b` and `samples` random
/// words. Returns the number of words checked.
pub fn verify_lemma_identities(samples: usize, max_syllables: usize, seed: u64) -> Result<usize, Box<LemmaCounterexample>> {
    let fixed = [FreeWord::empty(), free_reduce([(Gen::A, 1)]), free_reduce([(Gen::B, 1)])];
    for w in &fixed {
        check_lemma_identities(w)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        check_lemma_identities(&random_free_word(&mut rng, max_syllables))?;
    }
    Ok(fixed.len() + samples)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UniquenessFailure {
    Budget { words: u128 },
    SameKey(Word, Word),
    NotUnit(Word),
}

impl fmt::Display for UniquenessFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UniquenessFailure::Budget { words } => write!(f, "{words} words exceed {UNIQUENESS_BUDGET}"),
            UniquenessFailure::SameKey(a, b) => write!(f, "{a} and {b} share a key"),
            UniquenessFailure::NotUnit(w) => write!(f, "top row of {w} is not a unit vector"),
        }
    }
}

/// Checks that nonempty words of length at most `max_len` over `n` letters
/// have pairwise different `abs_key`s and unit top rows. Returns the number
/// of words checked.
pub fn enumerate_uniqueness(n: usize, max_len: usize) -> Result<usize, UniquenessFailure> {
    let words = word_count(n, max_len) - 1;
    if words > u128::from(UNIQUENESS_BUDGET) {
        return Err(UniquenessFailure::Budget { words });
    }
    let mut seen: BTreeMap<[Rational; 3], Word> = BTreeMap::new();
    for len in 1..=max_len {
        for w in Word::all_of_length(n, len) {
            let m = gamma(&w);
            let top: Rational = (0..4).map(|j| m.get(0, j).square()).sum();
            if !top.is_one() {
                return Err(UniquenessFailure::NotUnit(w));
            }
            if let Some(prev) = seen.insert(abs_key(&m), w.clone()) {
                return Err(UniquenessFailure::SameKey(prev, w));
            }
        }
    }
    Ok(seen.len())
}

/// Number of distinct products among the nonempty words of length at most
/// `max_len` over the two generator matrices, and the number of words.
pub fn freeness_enumeration(max_len: usize) -> (usize, usize) {
    let gens = [generator_a(), generator_b()];
    let mut seen = BTreeSet::new();
    let mut words = 0;
    let mut layer = vec![RatMatrix::identity(4)];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * 2);
        for m in &layer {
            for g in &gens {
                let p = matmul(m, g).expect("4x4");
                seen.insert(p.clone());
                words += 1;
                next.push(p);
            }
        }
        layer = next;
    }
    (seen.len(), words)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Consistent,
    Inconsistent,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Consistent => "CONSISTENT",
            Verdict::Inconsistent => "INCONSISTENT",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndToEndReport {
    pub verdict: Verdict,
    pub solution: Option<MixedSolution>,
    /// Automaton words of `solution`.
    pub solution_words: Option<(Word, Word)>,
    pub collisions: CollisionReport<RadicalSignature>,
    /// Collision pairs read back as mixed solutions and checked.
    pub converse_checked: usize,
    pub issues: Vec<String>,
}

/// Runs the bounded solver and the bounded collision search on the compiled
/// automaton and cross-checks them in both directions.
pub fn end_to_end(inst: &MmpcpInstance, max_len: usize, budget: u64) -> Result<EndToEndReport, HarnessError> {
    let solution = brute_search(inst, max_len)?;
    let q = compile_injectivity(inst)?;
    let collisions = collision_search(&q, max_len, budget)?;
    let mut issues = Vec::new();

    if solution.is_some() == collisions.is_injective() {
        issues.push(format!(
            "solver {} a solution but the search found {} collisions",
            if solution.is_some() { "found" } else { "found no" },
            collisions.pairs.len()
        ));
    }

    let mut solution_words = None;
    if let Some(sol) = &solution {
        let (a, b) = solution_to_words(inst, sol)?;
        if q.evaluate(&a)? != q.evaluate(&b)? {
            issues.push(format!("solution {sol} maps to words {a} / {b} with different signatures"));
        }
        solution_words = Some((a, b));
    }

    let mut converse_checked = 0;
    for p in &collisions.pairs {
        if p.first.len() != p.second.len() {
            continue;
        }
        if let Some(ms) = words_to_solution(&p.first, &p.second) {
            converse_checked += 1;
            if check_solution(inst, &ms) != Ok(true) {
                issues.push(format!("collision {} / {} is not a solution", p.first, p.second));
            }
        }
    }

    let verdict = if issues.is_empty() { Verdict::Consistent } else { Verdict::Inconsistent };
    Ok(EndToEndReport { verdict, solution, solution_words, collisions, converse_checked, issues })
}

/// Outcome of comparing full 9x9 products on collisions of the ambiguity
/// automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmbiguityReport {
    pub pairs: usize,
    /// Pairs whose counts of the corner generator differ in parity.
    pub parity_differing: usize,
    /// Of those, pairs with distinct matrices (should equal `parity_differing`).
    pub distinct_matrices: usize,
}

fn corner_count(w: &Word) -> usize {
    let corner = GeneratorTag { source: 0, selector: Selector::H }.letter();
    w.letters().iter().filter(|l| l.index() == corner).count()
}

/// Collision search on the ambiguity automaton; for every pair whose corner
/// generator counts differ in parity, checks that the two products differ
/// as matrices even though their values agree.
pub fn ambiguity_check(inst: &MmpcpInstance, max_len: usize, budget: u64) -> Result<AmbiguityReport, HarnessError> {
    let q = compile_ambiguity(inst)?;
    let report = collision_search(&q, max_len, budget)?;
    let mut parity_differing = 0;
    let mut distinct_matrices = 0;
    for p in &report.pairs {
        if corner_count(&p.first) % 2 != corner_count(&p.second) % 2 {
            parity_differing += 1;
            if q.product_matrix(&p.first)? != q.product_matrix(&p.second)? {
                distinct_matrices += 1;
            }
        }
    }
    Ok(AmbiguityReport { pairs: report.pairs.len(), parity_differing, distinct_matrices })
}

/// Indices `(i, j)`, `i < j`, of the first repeated value among the
/// acceptance values of `a^0, ..., a^k_max` on a one-letter automaton.
pub fn power_distinctness(q: &Qfa, k_max: usize) -> Result<Option<(usize, usize)>, HarnessError> {
    let mut seen: BTreeMap<Rational, usize> = BTreeMap::new();
    let mut state = q.start();
    for k in 0..=k_max {
        if k > 0 {
            state = q.step(&state, 1)?;
        }
        if let Some(i) = seen.insert(q.value(&state)?, k) {
            return Ok(Some((i, k)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mmpcp::tests::{inst, negative, positive};
    use crate::qfa::{accept_rational, accept_signature, example_one};
    use crate::reduction::claus_trim;
    use alloc::string::ToString;

    fn w(ix: &[usize], n: usize) -> Word {
        Word::from_indices(ix, n).unwrap()
    }

    #[test]
    fn word_counts() {
        assert_eq!(word_count(2, 3), 15);
        assert_eq!(word_count(1, 1000), 1001);
        assert_eq!(word_count(0, 5), 1);
        assert_eq!(word_count(usize::MAX, 100), u128::MAX);
    }

    #[test]
    fn partitions_cover_everything() {
        let q = compile_injectivity(&positive()).unwrap();
        let mut all: Vec<Word> = enumerate_values(&q, 3, Partition::All).unwrap().into_iter().map(|p| p.1).collect();
        let mut parts: Vec<Word> = Partition::split(2)
            .into_iter()
            .flat_map(|p| enumerate_values(&q, 3, p).unwrap())
            .map(|p| p.1)
            .collect();
        all.sort();
        parts.sort();
        assert_eq!(all.len(), 15);
        assert_eq!(all, parts);
    }

    #[test]
    fn positive_instance_collides_at_length_two() {
        let q = compile_injectivity(&positive()).unwrap();
        let r = collision_search(&q, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.pairs.len(), 1);
        assert_eq!((r.pairs[0].first.to_string(), r.pairs[0].second.to_string()), ("x1 x2".into(), "x2 x1".into()));
        assert_eq!(accept_signature(&q, &r.pairs[0].first).unwrap(), r.pairs[0].value);
        assert_eq!(r.words_checked, 7);
        assert_eq!(r.digest, q.digest());
    }

    #[test]
    fn negative_instance_is_injective_to_length_six() {
        let q = compile_injectivity(&negative()).unwrap();
        let r = collision_search(&q, 6, DEFAULT_BUDGET).unwrap();
        assert!(r.is_injective());
        assert_eq!(r.words_checked, 127);
    }

    #[test]
    fn budget_is_checked_before_searching() {
        let q = compile_injectivity(&negative()).unwrap();
        assert_eq!(collision_search(&q, 20, DEFAULT_BUDGET), Err(HarnessError::Budget { words: (1 << 21) - 1, budget: DEFAULT_BUDGET }));
    }

    #[test]
    fn rational_search_and_powers() {
        let q = example_one();
        assert!(collision_search(&q, 200, DEFAULT_BUDGET).unwrap().is_injective());
        assert_eq!(power_distinctness(&q, 300).unwrap(), None);
        assert_eq!(q.evaluate(&w(&[1, 1], 1)).unwrap(), accept_rational(&q, &w(&[1, 1], 1)).unwrap());
    }

    #[test]
    fn trimmed_automaton_evaluates_consistently() {
        let claus = MmpcpInstance::new(
            vec!["s1".into(), "s2".into()],
            vec!["d1".into(), "d2".into()],
            vec![vec![0, 1], vec![1]],
            vec![vec![0], vec![1, 1]],
            true,
        )
        .unwrap();
        let q = claus_trim(&claus).unwrap();
        for p in enumerate_values(&q, 3, Partition::All).unwrap() {
            assert_eq!(q.evaluate(&p.1).unwrap(), p.0);
        }
    }

    #[test]
    fn lemma_identities() {
        assert_eq!(verify_lemma_identities(200, 20, 7), Ok(203));
        assert_eq!(check_lemma_identities(&FreeWord::empty()), Ok(()));
    }

    #[test]
    fn uniqueness_examples() {
        assert_eq!(enumerate_uniqueness(3, 4), Ok(120));
        assert_eq!(enumerate_uniqueness(1, 1), Ok(1));
        assert!(matches!(enumerate_uniqueness(10, 6), Err(UniquenessFailure::Budget { .. })));
    }

    #[test]
    fn freeness_small() {
        assert_eq!(freeness_enumeration(6), (126, 126));
    }

    #[test]
    fn end_to_end_examples() {
        let r = end_to_end(&positive(), 4, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.verdict, Verdict::Consistent, "{:?}", r.issues);
        assert!(r.solution.is_some() && !r.collisions.is_injective());
        assert!(r.converse_checked > 0);

        let r = end_to_end(&negative(), 6, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.verdict, Verdict::Consistent);
        assert!(r.solution.is_none() && r.collisions.is_injective());

        let same = inst(vec![vec![0, 1], vec![1]], vec![vec![0, 1], vec![1]], 2);
        let r = end_to_end(&same, 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.verdict, Verdict::Consistent);
        assert_eq!(r.collisions.pairs.len(), 2);
    }

    #[test]
    fn ambiguity_corner_separates_matrices() {
        let same = inst(vec![vec![0]], vec![vec![0]], 1);
        let r = ambiguity_check(&same, 3, DEFAULT_BUDGET).unwrap();
        assert!(r.parity_differing > 0);
        assert_eq!(r.distinct_matrices, r.parity_differing);
        let r = ambiguity_check(&positive(), 4, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.distinct_matrices, r.parity_differing);
    }
}
