//! Compiles MMPCP instances into radical automata.
//!
//! Source letters take encoding indices `1..=|sigma|` and target letters the
//! following `|delta|` indices, so one word encoding covers both alphabets.
//! Each pair (source letter `s`, selector `f`) becomes the generator
//! `gamma(s) ⊕ gamma(f(s))`, named `L:<s>:<H|G>`, listed letter by letter
//! with `H` before `G`.
//!
//! Automata read the first letter first, so the product of a QFA word
//! `v1 ... vk` is `X_vk ... X_v1`. A solution word `w1 ... wk` with selectors
//! therefore corresponds to the QFA word listing its positions from last to
//! first, whose product is `gamma(w) ⊕ gamma(f1(w1) ... fk(wk))`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::mmpcp::{MixedSolution, MmpcpError, MmpcpInstance, Selector};
use crate::qfa::{InitialFold, QfaError, RadicalGenerator, RadicalQfa};
use crate::ratmatrix::{gamma, RatMatrix};
use crate::words::{Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionError {
    EmptyAlphabet,
    NotClaus,
    /// Neither image of the last source letter is a proper suffix of the
    /// other.
    NoProperSuffix,
    /// A QFA word whose length or letters do not describe a selection.
    BadWord(String),
    Qfa(QfaError),
    Mmpcp(MmpcpError),
}

impl fmt::Display for ReductionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionError::EmptyAlphabet => f.write_str("source and target alphabets must be nonempty"),
            ReductionError::NotClaus => f.write_str("instance is not marked as a Claus instance"),
            ReductionError::NoProperSuffix => {
                f.write_str("neither image of the last source letter is a proper suffix of the other")
            }
            ReductionError::BadWord(s) => write!(f, "{s}"),
            ReductionError::Qfa(e) => write!(f, "{e}"),
            ReductionError::Mmpcp(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for ReductionError {}

impl From<QfaError> for ReductionError {
    fn from(e: QfaError) -> Self {
        ReductionError::Qfa(e)
    }
}

impl From<MmpcpError> for ReductionError {
    fn from(e: MmpcpError) -> Self {
        ReductionError::Mmpcp(e)
    }
}

/// The (source letter, selector) pair a generator stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeneratorTag {
    /// 0-based source letter.
    pub source: usize,
    pub selector: Selector,
}

impl GeneratorTag {
    /// 1-based QFA letter of this tag in an untrimmed compiled automaton.
    pub fn letter(self) -> usize {
        2 * self.source + if self.selector == Selector::H { 1 } else { 2 }
    }

    pub fn from_letter(letter: usize) -> Option<Self> {
        let i = letter.checked_sub(1)?;
        let selector = if i % 2 == 0 { Selector::H } else { Selector::G };
        Some(GeneratorTag { source: i / 2, selector })
    }
}

pub fn generator_name(inst: &MmpcpInstance, tag: GeneratorTag) -> String {
    alloc::format!("L:{}:{}", inst.sigma()[tag.source], tag.selector)
}

fn encoding_size(inst: &MmpcpInstance) -> usize {
    inst.sigma().len() + inst.delta().len()
}

fn word(ix: impl IntoIterator<Item = usize>, n: usize) -> Word {
    let ix: Vec<usize> = ix.into_iter().collect();
    Word::from_indices(&ix, n).expect("indices come from a validated instance")
}

/// Encoding of a source letter (0-based).
pub fn source_image(inst: &MmpcpInstance, i: usize) -> RatMatrix {
    gamma(&word([i + 1], encoding_size(inst)))
}

/// Encoding of a target word (0-based target indices).
pub fn target_image(inst: &MmpcpInstance, t: &[usize]) -> RatMatrix {
    let off = inst.sigma().len() + 1;
    gamma(&word(t.iter().map(|d| d + off), encoding_size(inst)))
}

fn check_nonempty(inst: &MmpcpInstance) -> Result<(), ReductionError> {
    if inst.sigma().is_empty() || inst.delta().is_empty() {
        return Err(ReductionError::EmptyAlphabet);
    }
    Ok(())
}

fn generators(inst: &MmpcpInstance, corners: bool) -> Vec<RadicalGenerator> {
    let mut out = Vec::with_capacity(2 * inst.sigma().len());
    for source in 0..inst.sigma().len() {
        for selector in [Selector::H, Selector::G] {
            let tag = GeneratorTag { source, selector };
            let corner = corners.then_some(if source == 0 && selector == Selector::H { -1 } else { 1 });
            out.push(RadicalGenerator {
                name: generator_name(inst, tag),
                left: source_image(inst, source),
                right: target_image(inst, inst.image(source, selector)),
                corner,
            });
        }
    }
    out
}

/// The 8-state automaton with one generator per (source letter, selector).
pub fn compile_injectivity(inst: &MmpcpInstance) -> Result<RadicalQfa, ReductionError> {
    check_nonempty(inst)?;
    Ok(RadicalQfa::new(generators(inst, false), false, None)?)
}

/// The 9-state variant: every generator gains a `+1` corner except the one
/// for (first source letter, `H`), which gains `-1`.
pub fn compile_ambiguity(inst: &MmpcpInstance) -> Result<RadicalQfa, ReductionError> {
    check_nonempty(inst)?;
    Ok(RadicalQfa::new(generators(inst, true), true, None)?)
}

/// Drops one generator of the last source letter of a Claus instance.
///
/// Solutions of a Claus instance use the last letter exactly once, and it is
/// read first. If `f(last) = p s` and `f'(last) = s` with `p` nonempty, the
/// generator for `f'` is applied to the initial vector in advance, and the
/// generator for `f` becomes `I ⊕ gamma(p)`, which composed with the fold
/// gives back `gamma(last) ⊕ gamma(p s)`. The remaining `2|sigma| - 1`
/// generators keep their order and names.
pub fn claus_trim(inst: &MmpcpInstance) -> Result<RadicalQfa, ReductionError> {
    check_nonempty(inst)?;
    if !inst.is_claus() {
        return Err(ReductionError::NotClaus);
    }
    let last = inst.sigma().len() - 1;
    let (long_sel, short_sel) = trim_sides(inst)?;
    let long = inst.image(last, long_sel);
    let short = inst.image(last, short_sel);
    let prefix = &long[..long.len() - short.len()];

    let mut gens: Vec<RadicalGenerator> = generators(inst, false)
        .into_iter()
        .filter(|g| g.name != generator_name(inst, GeneratorTag { source: last, selector: short_sel }))
        .collect();
    let long_name = generator_name(inst, GeneratorTag { source: last, selector: long_sel });
    let slot = gens.iter_mut().find(|g| g.name == long_name).expect("generator present");
    slot.left = RatMatrix::identity(4);
    slot.right = target_image(inst, prefix);
    let fold = InitialFold { left: source_image(inst, last), right: target_image(inst, short) };
    Ok(RadicalQfa::new(gens, false, Some(fold))?)
}

/// `(long, short)` selectors for the last letter: the short image is a
/// proper suffix of the long one.
pub fn trim_sides(inst: &MmpcpInstance) -> Result<(Selector, Selector), ReductionError> {
    let last = inst.sigma().len().checked_sub(1).ok_or(ReductionError::EmptyAlphabet)?;
    let (h, g) = (inst.image(last, Selector::H), inst.image(last, Selector::G));
    let proper_suffix = |s: &[usize], of: &[usize]| s.len() < of.len() && of.ends_with(s);
    if proper_suffix(g, h) {
        Ok((Selector::H, Selector::G))
    } else if proper_suffix(h, g) {
        Ok((Selector::G, Selector::H))
    } else {
        Err(ReductionError::NoProperSuffix)
    }
}

/// QFA word over the untrimmed compiled alphabet for a word with selectors,
/// positions listed from last to first.
pub fn selection_to_word(inst: &MmpcpInstance, src: &[usize], sel: &[Selector]) -> Result<Word, ReductionError> {
    if src.len() != sel.len() {
        return Err(ReductionError::BadWord("selector count differs from word length".into()));
    }
    if let Some(&bad) = src.iter().find(|&&i| i >= inst.sigma().len()) {
        return Err(MmpcpError::UnknownLetter(bad).into());
    }
    let letters: Vec<usize> = src
        .iter()
        .zip(sel)
        .rev()
        .map(|(&source, &selector)| GeneratorTag { source, selector }.letter())
        .collect();
    Word::from_indices(&letters, 2 * inst.sigma().len())
        .map_err(|e: WordError| ReductionError::BadWord(alloc::format!("{e}")))
}

/// Inverse of [`selection_to_word`].
pub fn word_to_selection(w: &Word) -> (Vec<usize>, Vec<Selector>) {
    w.letters()
        .iter()
        .rev()
        .map(|l| {
            let t = GeneratorTag::from_letter(l.index()).expect("letters are 1-based");
            (t.source, t.selector)
        })
        .unzip()
}

/// The two QFA words a mixed solution describes.
pub fn solution_to_words(inst: &MmpcpInstance, sol: &MixedSolution) -> Result<(Word, Word), ReductionError> {
    Ok((selection_to_word(inst, &sol.word, &sol.sel_a)?, selection_to_word(inst, &sol.word, &sol.sel_b)?))
}

/// Reads a pair of QFA words as a candidate mixed solution, when both spell
/// the same source word.
pub fn words_to_solution(a: &Word, b: &Word) -> Option<MixedSolution> {
    let (wa, sel_a) = word_to_selection(a);
    let (wb, sel_b) = word_to_selection(b);
    (wa == wb && !wa.is_empty()).then_some(MixedSolution { word: wa, sel_a, sel_b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::Rational;
    use crate::mmpcp::tests::{inst, negative, positive};
    use crate::mmpcp::{brute_search, check_solution};
    use crate::qfa::{accept_signature, accept_signature_exact};
    use crate::ratmatrix::matmul;
    use alloc::string::ToString;
    use alloc::vec;
    use Selector::{G, H};

    fn claus_inst(h_last: Vec<usize>, g_last: Vec<usize>) -> MmpcpInstance {
        MmpcpInstance::new(
            vec!["s1".into(), "s2".into(), "s3".into()],
            vec!["d1".into(), "d2".into()],
            vec![vec![0], vec![1, 0], h_last],
            vec![vec![0, 1], vec![0], g_last],
            true,
        )
        .unwrap()
    }

    #[test]
    fn injectivity_structure() {
        let q = compile_injectivity(&positive()).unwrap();
        assert_eq!(q.alphabet_size(), 2);
        assert_eq!(q.dimension(), 8);
        for g in q.generators() {
            assert!(g.matrix().is_orthogonal());
            for block in [&g.left, &g.right] {
                let norm: Rational = block.row(0).iter().map(Rational::square).sum();
                assert!(norm.is_one());
            }
        }
        let i = positive();
        let h = &q.generators()[0];
        assert_eq!(h.name, "L:s1:H");
        assert_eq!(h.left, source_image(&i, 0));
        assert_eq!(h.right, target_image(&i, &[0]));
        assert_eq!(q.generators()[1].right, target_image(&i, &[0, 0]));

        let same = compile_injectivity(&inst(vec![vec![0, 1]], vec![vec![0, 1]], 2)).unwrap();
        assert_eq!(same.generators()[0].matrix(), same.generators()[1].matrix());
        let empty = MmpcpInstance::new(vec![], vec!["d".into()], vec![], vec![], false).unwrap();
        assert_eq!(compile_injectivity(&empty), Err(ReductionError::EmptyAlphabet));
    }

    #[test]
    fn ambiguity_structure() {
        let q = compile_ambiguity(&claus_inst(vec![0, 1], vec![1])).unwrap();
        assert_eq!(q.dimension(), 9);
        let corners: Vec<_> = q.generators().iter().map(|g| g.corner).collect();
        assert_eq!(corners, vec![Some(-1), Some(1), Some(1), Some(1), Some(1), Some(1)]);
        let w = Word::from_indices(&[1, 3, 1, 2, 1], 6).unwrap();
        assert_eq!(q.block_product(&w).unwrap().corner, -1);
        let plain = compile_injectivity(&claus_inst(vec![0, 1], vec![1])).unwrap();
        assert_eq!(accept_signature(&q, &w).unwrap(), accept_signature(&plain, &w).unwrap());
    }

    #[test]
    fn claus_trim_structure() {
        let i = claus_inst(vec![0, 1], vec![1]);
        let q = claus_trim(&i).unwrap();
        assert_eq!(q.alphabet_size(), 5);
        let long = q.generators().last().unwrap();
        assert_eq!(long.name, "L:s3:H");
        assert_eq!(long.left, RatMatrix::identity(4));
        assert_eq!(long.right, target_image(&i, &[0]));
        let fold = q.initial_fold().unwrap();
        assert_eq!(fold.right, target_image(&i, &[1]));

        assert_eq!(trim_sides(&claus_inst(vec![1], vec![0, 1])), Ok((G, H)));
        assert_eq!(claus_trim(&claus_inst(vec![0], vec![1])), Err(ReductionError::NoProperSuffix));
        assert_eq!(claus_trim(&claus_inst(vec![1], vec![1])), Err(ReductionError::NoProperSuffix));
        assert_eq!(claus_trim(&positive()), Err(ReductionError::NotClaus));
    }

    #[test]
    fn trimmed_values_match_the_full_automaton() {
        for (h_last, g_last) in [(vec![0, 1], vec![1]), (vec![1], vec![0, 0, 1]), (vec![1, 0], vec![])] {
            let i = claus_inst(h_last, g_last);
            let full = compile_injectivity(&i).unwrap();
            let trimmed = claus_trim(&i).unwrap();
            let (long_sel, short_sel) = trim_sides(&i).unwrap();
            let long_letter = GeneratorTag { source: 2, selector: long_sel }.letter();
            let short_letter = GeneratorTag { source: 2, selector: short_sel }.letter();
            // trimmed letters are the full ones with the short letter removed
            let to_full = |t: usize| if t >= short_letter { t + 1 } else { t };
            for len in 0..=3 {
                for v in Word::all_of_length(4, len) {
                    let rest: Vec<usize> = v.letters().iter().map(|l| l.index()).collect();
                    let tv = Word::from_indices(&rest, 5).unwrap();
                    let mut fv = vec![short_letter];
                    fv.extend(rest.iter().map(|&t| to_full(t)));
                    assert_eq!(
                        accept_signature(&trimmed, &tv).unwrap(),
                        accept_signature_exact(&full, &Word::from_indices(&fv, 6).unwrap()).unwrap()
                    );
                    let mut tl = vec![5];
                    tl.extend(&rest);
                    let mut fl = vec![long_letter];
                    fl.extend(rest.iter().map(|&t| to_full(t)));
                    assert_eq!(
                        accept_signature(&trimmed, &Word::from_indices(&tl, 5).unwrap()).unwrap(),
                        accept_signature_exact(&full, &Word::from_indices(&fl, 6).unwrap()).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn solution_words_have_the_expected_products() {
        let i = positive();
        let sol = brute_search(&i, 4).unwrap().unwrap();
        let (a, b) = solution_to_words(&i, &sol).unwrap();
        assert_eq!(a.to_string(), "x2 x1");
        assert_eq!(b.to_string(), "x1 x2");
        let q = compile_injectivity(&i).unwrap();
        let pa = q.block_product(&a).unwrap();
        assert_eq!(pa, q.block_product(&b).unwrap());
        assert_eq!(pa.left, matmul(&source_image(&i, 0), &source_image(&i, 0)).unwrap());
        assert_eq!(pa.right, target_image(&i, &[0, 0, 0]));
        assert_eq!(accept_signature(&q, &a).unwrap(), accept_signature(&q, &b).unwrap());
        assert_eq!(words_to_solution(&a, &b), Some(sol.clone()));
        assert_eq!(check_solution(&i, &sol), Ok(true));
    }

    #[test]
    fn asymmetric_solution_transports() {
        // s1 -> (d1 | d1 d2), s2 -> (d2 d1 | d1)
        let i = inst(vec![vec![0], vec![1, 0]], vec![vec![0, 1], vec![0]], 2);
        let sol = brute_search(&i, 4).unwrap().unwrap();
        assert_eq!(check_solution(&i, &sol), Ok(true));
        let (a, b) = solution_to_words(&i, &sol).unwrap();
        let q = compile_injectivity(&i).unwrap();
        assert_ne!(a, b);
        assert_eq!(accept_signature(&q, &a).unwrap(), accept_signature(&q, &b).unwrap());
        assert_eq!(accept_signature_exact(&q, &a).unwrap(), accept_signature_exact(&q, &b).unwrap());
        let nq = compile_injectivity(&negative()).unwrap();
        let one = Word::from_indices(&[1], 2).unwrap();
        assert_ne!(accept_signature(&nq, &one).unwrap(), accept_signature(&nq, &Word::empty()).unwrap());
    }

    #[test]
    fn tag_letters_round_trip() {
        for source in 0..5 {
            for selector in [H, G] {
                let t = GeneratorTag { source, selector };
                assert_eq!(GeneratorTag::from_letter(t.letter()), Some(t));
            }
        }
        assert_eq!(GeneratorTag::from_letter(0), None);
    }
}
