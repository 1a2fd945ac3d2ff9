//! Measure-once automata with exact rational data, and the block automata
//! whose initial vector has fourth-root entries.
//!
//! A word `w1 w2 ... wk` is read first letter first: the state after reading
//! it is `X_wk ... X_w2 X_w1 u`, and acceptance is the squared norm of its
//! projection. Letters are 1-based indices into the automaton's ordered
//! generator list.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::exactnum::{RadicalSignature, Rational};
use crate::ratmatrix::{block_diagonal, matmul, MatrixError, RatMatrix};
use crate::words::Word;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QfaError {
    /// Letter index outside the generator list.
    UnknownLetter { index: usize, alphabet: usize },
    /// A component has the wrong shape for the automaton's dimension.
    Shape(String),
    /// Corner entries must be `+1` or `-1` and present exactly when the
    /// automaton is ambiguity-extended.
    Corner(String),
    Matrix(MatrixError),
}

impl fmt::Display for QfaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QfaError::UnknownLetter { index, alphabet } => {
                write!(f, "letter {index} not in an alphabet of {alphabet} generators")
            }
            QfaError::Shape(s) => write!(f, "shape error: {s}"),
            QfaError::Corner(s) => write!(f, "corner error: {s}"),
            QfaError::Matrix(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for QfaError {}

impl From<MatrixError> for QfaError {
    fn from(e: MatrixError) -> Self {
        QfaError::Matrix(e)
    }
}

/// One failed invariant reported by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    ProjectionNotSymmetric,
    ProjectionNotIdempotent,
    GeneratorNotOrthogonal(String),
    /// Squared length of the initial vector, when it is not 1.
    InitialNotUnit(Rational),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ProjectionNotSymmetric => f.write_str("projection is not symmetric"),
            Violation::ProjectionNotIdempotent => f.write_str("projection is not idempotent"),
            Violation::GeneratorNotOrthogonal(name) => write!(f, "generator {name} is not orthogonal"),
            Violation::InitialNotUnit(n) => write!(f, "initial vector has squared length {n}"),
        }
    }
}

/// Automaton with rational projection, generators and initial vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Qfa {
    dimension: usize,
    projection: RatMatrix,
    generators: Vec<(String, RatMatrix)>,
    initial: Vec<Rational>,
}

impl Qfa {
    /// Checks shapes only; use [`validate`] for the algebraic invariants.
    pub fn new(
        projection: RatMatrix,
        generators: Vec<(String, RatMatrix)>,
        initial: Vec<Rational>,
    ) -> Result<Self, QfaError> {
        let n = initial.len();
        if projection.shape() != (n, n) {
            return Err(QfaError::Shape(alloc::format!(
                "projection is {}x{}, initial vector has length {n}",
                projection.rows(),
                projection.cols()
            )));
        }
        if let Some((name, _)) = generators.iter().find(|(_, m)| m.shape() != (n, n)) {
            return Err(QfaError::Shape(alloc::format!("generator {name} is not {n}x{n}")));
        }
        Ok(Qfa { dimension: n, projection, generators, initial })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn projection(&self) -> &RatMatrix {
        &self.projection
    }

    pub fn generators(&self) -> &[(String, RatMatrix)] {
        &self.generators
    }

    pub fn initial(&self) -> &[Rational] {
        &self.initial
    }

    pub fn alphabet_size(&self) -> usize {
        self.generators.len()
    }

    pub fn generator(&self, index: usize) -> Result<&RatMatrix, QfaError> {
        index
            .checked_sub(1)
            .and_then(|i| self.generators.get(i))
            .map(|(_, m)| m)
            .ok_or(QfaError::UnknownLetter { index, alphabet: self.generators.len() })
    }

    /// State vector after reading `w`.
    pub fn run(&self, w: &Word) -> Result<Vec<Rational>, QfaError> {
        let mut v = self.initial.clone();
        for l in w.letters() {
            v = self.generator(l.index())?.mul_vec(&v)?;
        }
        Ok(v)
    }

    /// Squared norm of the projected state.
    pub fn acceptance_of_state(&self, v: &[Rational]) -> Result<Rational, QfaError> {
        Ok(self.projection.mul_vec(v)?.iter().map(Rational::square).sum())
    }
}

pub fn validate(q: &Qfa) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    if !q.projection.is_symmetric() {
        out.push(Violation::ProjectionNotSymmetric);
    }
    if !q.projection.is_idempotent() {
        out.push(Violation::ProjectionNotIdempotent);
    }
    for (name, m) in &q.generators {
        if !m.is_orthogonal() {
            out.push(Violation::GeneratorNotOrthogonal(name.clone()));
        }
    }
    let norm: Rational = q.initial.iter().map(Rational::square).sum();
    if !norm.is_one() {
        out.push(Violation::InitialNotUnit(norm));
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// Exact acceptance probability of `w`.
pub fn accept_rational(q: &Qfa, w: &Word) -> Result<Rational, QfaError> {
    let v = q.run(w)?;
    q.acceptance_of_state(&v)
}

/// One-letter automaton rotating the plane by `arccos(3/5)`, projecting on
/// the first axis and starting from `e1`.
pub fn example_one() -> Qfa {
    let f = Rational::frac;
    let a = RatMatrix::from_rows(alloc::vec![
        alloc::vec![f(3, 5), f(4, 5)],
        alloc::vec![f(-4, 5), f(3, 5)],
    ])
    .expect("2x2 literal");
    let p = RatMatrix::diagonal(&[Rational::one(), Rational::zero()]);
    Qfa::new(p, alloc::vec![(String::from("a"), a)], alloc::vec![Rational::one(), Rational::zero()])
        .expect("shapes agree")
}

/// A generator `left ⊕ right`, or `left ⊕ right ⊕ corner` in the extended
/// variant. Both blocks are 4x4 word images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadicalGenerator {
    pub name: String,
    pub left: RatMatrix,
    pub right: RatMatrix,
    /// `+1` or `-1`; present exactly in ambiguity-extended automata.
    pub corner: Option<i8>,
}

impl RadicalGenerator {
    pub fn matrix(&self) -> RatMatrix {
        let mut blocks = alloc::vec![&self.left, &self.right];
        let c;
        if let Some(sign) = self.corner {
            c = RatMatrix::scalar(Rational::from(i64::from(sign)));
            blocks.push(&c);
        }
        block_diagonal(&blocks)
    }
}

/// Block pair applied to the fourth-root vector before any letter is read.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InitialFold {
    pub left: RatMatrix,
    pub right: RatMatrix,
}

/// Running product of a radical automaton, kept block by block.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockProduct {
    pub left: RatMatrix,
    pub right: RatMatrix,
    pub corner: i8,
}

impl BlockProduct {
    pub fn identity() -> Self {
        BlockProduct { left: RatMatrix::identity(4), right: RatMatrix::identity(4), corner: 1 }
    }
}

/// Automaton of dimension 8 (or 9 with the corner) with generators
/// `left ⊕ right [⊕ ±1]`, projection onto coordinates 1 and 5, and initial
/// vector
///
/// ```text
/// (2^(1/4), 3^(1/4), 5^(1/4), 0, 7^(1/4), 11^(1/4), 13^(1/4), 0 [, 0]) / sqrt(N)
/// ```
///
/// with `N = sqrt2 + sqrt3 + sqrt5 + sqrt7 + sqrt11 + sqrt13`. `N` is common
/// to every word, so signatures below leave it out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadicalQfa {
    generators: Vec<RadicalGenerator>,
    ambiguity_extended: bool,
    initial_fold: Option<InitialFold>,
}

fn check_block(name: &str, m: &RatMatrix) -> Result<(), QfaError> {
    if m.shape() != (4, 4) {
        return Err(QfaError::Shape(alloc::format!("block of {name} is not 4x4")));
    }
    if !m.is_orthogonal() {
        return Err(QfaError::Shape(alloc::format!("block of {name} is not orthogonal")));
    }
    Ok(())
}

impl RadicalQfa {
    pub fn new(
        generators: Vec<RadicalGenerator>,
        ambiguity_extended: bool,
        initial_fold: Option<InitialFold>,
    ) -> Result<Self, QfaError> {
        for g in &generators {
            check_block(&g.name, &g.left)?;
            check_block(&g.name, &g.right)?;
            match (ambiguity_extended, g.corner) {
                (true, Some(1 | -1)) | (false, None) => {}
                (true, _) => {
                    return Err(QfaError::Corner(alloc::format!("{} needs a corner of +1 or -1", g.name)))
                }
                (false, Some(_)) => {
                    return Err(QfaError::Corner(alloc::format!("{} has a corner but the automaton is 8-dimensional", g.name)))
                }
            }
        }
        if let Some(fold) = &initial_fold {
            check_block("initial fold", &fold.left)?;
            check_block("initial fold", &fold.right)?;
        }
        Ok(RadicalQfa { generators, ambiguity_extended, initial_fold })
    }

    pub fn dimension(&self) -> usize {
        if self.ambiguity_extended {
            9
        } else {
            8
        }
    }

    pub fn is_ambiguity_extended(&self) -> bool {
        self.ambiguity_extended
    }

    pub fn is_trimmed(&self) -> bool {
        self.initial_fold.is_some()
    }

    pub fn generators(&self) -> &[RadicalGenerator] {
        &self.generators
    }

    pub fn initial_fold(&self) -> Option<&InitialFold> {
        self.initial_fold.as_ref()
    }

    pub fn alphabet_size(&self) -> usize {
        self.generators.len()
    }

    pub fn generator(&self, index: usize) -> Result<&RadicalGenerator, QfaError> {
        index
            .checked_sub(1)
            .and_then(|i| self.generators.get(i))
            .ok_or(QfaError::UnknownLetter { index, alphabet: self.generators.len() })
    }

    /// 1-based index of the generator called `name`.
    pub fn letter_named(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name).map(|i| i + 1)
    }

    /// Product after additionally reading letter `index`.
    pub fn step(&self, prev: &BlockProduct, index: usize) -> Result<BlockProduct, QfaError> {
        let g = self.generator(index)?;
        Ok(BlockProduct {
            left: matmul(&g.left, &prev.left)?,
            right: matmul(&g.right, &prev.right)?,
            corner: prev.corner * g.corner.unwrap_or(1),
        })
    }

    /// `X_wk ... X_w1` in block form (the initial fold is not included).
    pub fn block_product(&self, w: &Word) -> Result<BlockProduct, QfaError> {
        w.letters()
            .iter()
            .try_fold(BlockProduct::identity(), |acc, l| self.step(&acc, l.index()))
    }

    /// Full 8x8 or 9x9 matrix of the word.
    pub fn product_matrix(&self, w: &Word) -> Result<RatMatrix, QfaError> {
        let b = self.block_product(w)?;
        Ok(self.assemble(&b))
    }

    pub fn assemble(&self, b: &BlockProduct) -> RatMatrix {
        let c = RatMatrix::scalar(Rational::from(i64::from(b.corner)));
        if self.ambiguity_extended {
            block_diagonal(&[&b.left, &b.right, &c])
        } else {
            block_diagonal(&[&b.left, &b.right])
        }
    }

    pub fn projection(&self) -> RatMatrix {
        let mut d = alloc::vec![Rational::zero(); self.dimension()];
        d[0] = Rational::one();
        d[4] = Rational::one();
        RatMatrix::diagonal(&d)
    }

    /// Signature of a block product, as used by [`accept_signature`].
    pub fn signature_of(&self, b: &BlockProduct) -> RadicalSignature {
        if self.initial_fold.is_some() {
            self.exact_signature_of(b)
        } else {
            diagonal_signature(&b.left, &b.right)
        }
    }

    /// Squared projected norm of the word's state, times `N`, in the
    /// fourth-root basis. Includes the initial fold when there is one.
    pub fn exact_signature_of(&self, b: &BlockProduct) -> RadicalSignature {
        match &self.initial_fold {
            Some(fold) => {
                let l = matmul(&b.left, &fold.left).expect("4x4 blocks");
                let r = matmul(&b.right, &fold.right).expect("4x4 blocks");
                cross_signature(&l, &r)
            }
            None => cross_signature(&b.left, &b.right),
        }
    }
}

/// `sum_j L[1][j]^2 sqrt(p_j) + sum_j R[1][j]^2 sqrt(p_{3+j})` for `j = 1..3`.
fn diagonal_signature(left: &RatMatrix, right: &RatMatrix) -> RadicalSignature {
    let mut s = RadicalSignature::new();
    for j in 0..3 {
        s = &s + &RadicalSignature::sqrt_prime(j, left.get(0, j).square());
        s = &s + &RadicalSignature::sqrt_prime(3 + j, right.get(0, j).square());
    }
    s
}

/// `(sum_j L[1][j] p_j^(1/4))^2 + (sum_j R[1][j] p_{3+j}^(1/4))^2`.
fn cross_signature(left: &RatMatrix, right: &RatMatrix) -> RadicalSignature {
    let row = |m: &RatMatrix, offset: usize| {
        (0..3).fold(RadicalSignature::new(), |acc, j| {
            &acc + &RadicalSignature::fourth_root_prime(offset + j, m.get(0, j).clone())
        })
    };
    let (l, r) = (row(left, 0), row(right, 3));
    &(&l * &l) + &(&r * &r)
}

/// Acceptance value of `w` scaled by the common constant `N`.
///
/// For untrimmed automata this keeps only the squared top-row entries of each
/// block against `sqrt(p_j)`. Two words get equal values here exactly when
/// their blocks have the same top row up to signs, which for word images is
/// the same relation as equality of [`accept_signature_exact`]. Trimmed
/// automata always use the exact form, since their folded initial vector
/// already mixes the fourth roots.
pub fn accept_signature(q: &RadicalQfa, w: &Word) -> Result<RadicalSignature, QfaError> {
    Ok(q.signature_of(&q.block_product(w)?))
}

/// Exact `N * ||P X_w u||^2` in the fourth-root basis, cross terms included.
pub fn accept_signature_exact(q: &RadicalQfa, w: &Word) -> Result<RadicalSignature, QfaError> {
    Ok(q.exact_signature_of(&q.block_product(w)?))
}

/// `N = sum_i sqrt(p_i)` as a signature.
pub fn normalizer() -> RadicalSignature {
    (0..6).fold(RadicalSignature::new(), |acc, j| &acc + &RadicalSignature::sqrt_prime(j, Rational::one()))
}
