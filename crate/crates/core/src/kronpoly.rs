//! Polynomials in squared matrix entries as acceptance probabilities.
//!
//! Given a polynomial `p` with positive integer coefficients in the squares
//! of some entries of an `n x n` matrix `Y`, each term `c * prod Y[pos]^(2e)`
//! of degree `i` is read off a single entry `(s, r)` of `Y^{⊗i}`. Writing
//! `c = d1^2 + d2^2 + d3^2 + d4^2`, four copies of `Y^{⊗i}` started on
//! `dk * e_r` and projected on `e_s` contribute exactly that term. Appending
//! four more coordinates with weights `δ1..δ4` makes the squared length of
//! the start vector `S + δ` a perfect square (`S` the coefficient sum), so the
//! normalized start vector is rational and
//!
//! ```text
//! acceptance(w) = p(Y_w[pos]^2 ...) / (S + δ),   Y_w = X_wk ... X_w1.
//! ```
//!
//! [`build_dense`] materializes this automaton for small plans;
//! [`eval_lazy`] computes the same value from the small product `Y_w`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{ToPrimitive, Zero};

use crate::exactnum::Rational;
use crate::polypack::{
    complete_square, decompose_poly, fk, fk_scale_exponent, four_squares, PolyError, Polynomial,
    FOUR_SQUARES_CAP,
};
use crate::qfa::Qfa;
use crate::ratmatrix::{block_diagonal, kron_power, matmul, MatrixError, RatMatrix};
use crate::words::Word;

/// Largest dimension [`build_dense`] will materialize.
pub const DENSE_DIMENSION_LIMIT: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KronError {
    UnknownLetter { index: usize, alphabet: usize },
    PositionOutOfRange { row: usize, col: usize, n: usize },
    /// The polynomial has no terms.
    EmptyPlan,
    /// A degree-0 term has no matrix entry to sit on.
    ConstantTerm,
    ArityMismatch { positions: usize, arity: usize },
    /// Bases must all be `n x n`.
    BaseShape { name: String, n: usize },
    DimensionGuard { dimension: usize, limit: usize },
    /// Mixed-radix index does not fit in `usize`.
    IndexOverflow,
    /// The plan has no term list (nested packing polynomial) or its `δ` is
    /// too large to split, so it cannot be materialized.
    NotMaterializable(&'static str),
    Poly(PolyError),
    Matrix(MatrixError),
}

impl fmt::Display for KronError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KronError::UnknownLetter { index, alphabet } => {
                write!(f, "letter {index} not in an alphabet of {alphabet} bases")
            }
            KronError::PositionOutOfRange { row, col, n } => {
                write!(f, "position ({row}, {col}) outside a {n}x{n} matrix")
            }
            KronError::EmptyPlan => f.write_str("polynomial has no terms"),
            KronError::ConstantTerm => f.write_str("constant terms are not supported"),
            KronError::ArityMismatch { positions, arity } => {
                write!(f, "{positions} positions for a polynomial in {arity} variables")
            }
            KronError::BaseShape { name, n } => write!(f, "base {name} is not {n}x{n}"),
            KronError::DimensionGuard { dimension, limit } => {
                write!(f, "dense dimension {dimension} exceeds {limit}")
            }
            KronError::IndexOverflow => f.write_str("Kronecker index overflows"),
            KronError::NotMaterializable(why) => write!(f, "plan cannot be materialized: {why}"),
            KronError::Poly(e) => write!(f, "{e}"),
            KronError::Matrix(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for KronError {}

impl From<PolyError> for KronError {
    fn from(e: PolyError) -> Self {
        KronError::Poly(e)
    }
}

impl From<MatrixError> for KronError {
    fn from(e: MatrixError) -> Self {
        KronError::Matrix(e)
    }
}

/// 1-based matrix position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position {
    pub row: usize,
    pub col: usize,
}

impl Position {
    pub fn new(row: usize, col: usize) -> Self {
        Position { row, col }
    }
}

/// Key entries of 8x8 block generators: the first three top-row entries of
/// each 4x4 block.
pub fn default_positions() -> Vec<Position> {
    [(1, 1), (1, 2), (1, 3), (5, 5), (5, 6), (5, 7)].iter().map(|&(r, c)| Position::new(r, c)).collect()
}

/// Entry of `Y^{⊗i}` equal to a monomial in entries of `Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KronIndex {
    /// One `(row, col)` digit per factor, sorted by position.
    pub digits: Vec<(usize, usize)>,
    /// 1-based row of `Y^{⊗i}`.
    pub s: usize,
    /// 1-based column of `Y^{⊗i}`.
    pub r: usize,
}

/// Digits and mixed-radix indices of the monomial `prod Y[p]^e` in
/// `Y^{⊗i}`, `i = sum e`: `s = sum (s_m - 1) n^(i-m) + 1`, likewise `r`.
pub fn monomial_index(factors: &[(Position, u32)], n: usize) -> Result<KronIndex, KronError> {
    let mut sorted: Vec<(Position, u32)> = factors.iter().copied().filter(|(_, e)| *e > 0).collect();
    sorted.sort();
    if sorted.is_empty() {
        return Err(KronError::ConstantTerm);
    }
    let mut digits = Vec::new();
    for (p, e) in sorted {
        if p.row == 0 || p.col == 0 || p.row > n || p.col > n {
            return Err(KronError::PositionOutOfRange { row: p.row, col: p.col, n });
        }
        digits.extend(core::iter::repeat_n((p.row, p.col), e as usize));
    }
    let encode = |pick: fn(&(usize, usize)) -> usize| -> Result<usize, KronError> {
        digits
            .iter()
            .try_fold(0usize, |acc, d| acc.checked_mul(n)?.checked_add(pick(d) - 1))
            .and_then(|v| v.checked_add(1))
            .ok_or(KronError::IndexOverflow)
    };
    let s = encode(|d| d.0)?;
    let r = encode(|d| d.1)?;
    Ok(KronIndex { digits, s, r })
}

/// One term `coeff * prod x_j^(e_j)` of a plan, with `x_j` the square of the
/// entry at `positions[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanTerm {
    pub coeff: BigUint,
    pub exponents: Vec<u32>,
    pub split: [u64; 4],
    pub index: KronIndex,
}

impl PlanTerm {
    /// Total degree in the matrix entries, i.e. the Kronecker power used.
    pub fn degree(&self) -> usize {
        self.index.digits.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlanPolynomial {
    Terms(Vec<PlanTerm>),
    /// `25^D f_arity`, never expanded.
    Nested { arity: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KronPlan {
    n: usize,
    positions: Vec<Position>,
    polynomial: PlanPolynomial,
    total_weight: BigUint,
    delta: BigUint,
    delta_split: Option<[u64; 4]>,
}

fn check_positions(n: usize, positions: &[Position]) -> Result<(), KronError> {
    for p in positions {
        if p.row == 0 || p.col == 0 || p.row > n || p.col > n {
            return Err(KronError::PositionOutOfRange { row: p.row, col: p.col, n });
        }
    }
    Ok(())
}

fn split_of(delta: &BigUint) -> Option<[u64; 4]> {
    delta.to_u64().filter(|&d| d <= FOUR_SQUARES_CAP).and_then(|d| four_squares(d).ok())
}

impl KronPlan {
    /// Plan for `poly(x_1, ..., x_m)` with `x_j` the squared entry at
    /// `positions[j]`. A term uses one Kronecker factor per unit of exponent;
    /// the squaring comes from the acceptance norm.
    pub fn from_polynomial(n: usize, positions: Vec<Position>, poly: &Polynomial) -> Result<Self, KronError> {
        if positions.len() != poly.arity() {
            return Err(KronError::ArityMismatch { positions: positions.len(), arity: poly.arity() });
        }
        check_positions(n, &positions)?;
        if poly.is_zero() {
            return Err(KronError::EmptyPlan);
        }
        let mut terms = Vec::new();
        for t in decompose_poly(poly)? {
            if t.degree == 0 {
                return Err(KronError::ConstantTerm);
            }
            let factors: Vec<(Position, u32)> =
                positions.iter().zip(&t.exponents).map(|(&p, &e)| (p, e)).collect();
            let index = monomial_index(&factors, n)?;
            terms.push(PlanTerm { coeff: t.coeff, exponents: t.exponents, split: t.split, index });
        }
        let total_weight = poly.coefficient_sum();
        let delta = complete_square(&total_weight);
        let delta_split = split_of(&delta);
        Ok(KronPlan { n, positions, polynomial: PlanPolynomial::Terms(terms), total_weight, delta, delta_split })
    }

    /// Plan for the nested packing polynomial scaled to integer
    /// coefficients, over `positions.len()` entries.
    pub fn nested(n: usize, positions: Vec<Position>) -> Result<Self, KronError> {
        check_positions(n, &positions)?;
        let arity = positions.len();
        let scale = nested_scale(arity)?;
        let ones = vec![Rational::one(); arity];
        let at_ones = fk(&ones)? * Rational::from_integer(BigInt::from_biguint(Sign::Plus, scale));
        debug_assert!(at_ones.is_integer());
        let total_weight = at_ones.numer().magnitude().clone();
        let delta = complete_square(&total_weight);
        let delta_split = split_of(&delta);
        Ok(KronPlan { n, positions, polynomial: PlanPolynomial::Nested { arity }, total_weight, delta, delta_split })
    }

    /// The six-argument nested plan over [`default_positions`] of 8x8 bases.
    pub fn f6() -> Self {
        KronPlan::nested(8, default_positions()).expect("default positions fit 8x8")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn positions(&self) -> &[Position] {
        &self.positions
    }

    pub fn polynomial(&self) -> &PlanPolynomial {
        &self.polynomial
    }

    pub fn terms(&self) -> &[PlanTerm] {
        match &self.polynomial {
            PlanPolynomial::Terms(t) => t,
            PlanPolynomial::Nested { .. } => &[],
        }
    }

    /// `S`, the coefficient sum.
    pub fn total_weight(&self) -> &BigUint {
        &self.total_weight
    }

    pub fn delta(&self) -> &BigUint {
        &self.delta
    }

    pub fn delta_split(&self) -> Option<[u64; 4]> {
        self.delta_split
    }

    /// `S + δ`, the squared length of the unnormalized start vector.
    pub fn normalizer(&self) -> BigUint {
        &self.total_weight + &self.delta
    }

    /// Dimension of the materialized automaton, if it fits in `usize`.
    pub fn dense_dimension(&self) -> Option<usize> {
        match &self.polynomial {
            PlanPolynomial::Nested { .. } => None,
            PlanPolynomial::Terms(ts) => ts.iter().try_fold(4usize, |acc, t| {
                let block = self.n.checked_pow(u32::try_from(t.degree()).ok()?)?;
                acc.checked_add(block.checked_mul(4)?)
            }),
        }
    }
}

fn nested_scale(arity: usize) -> Result<BigUint, KronError> {
    let d = fk_scale_exponent(arity)?;
    Ok(num_traits::pow(BigUint::from(25u32), d as usize))
}

/// Unnormalized integer start vector and its exact normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InitialVector {
    /// `u″`, integer entries.
    pub raw: Vec<BigUint>,
    /// `|u″|^2 = S + δ`.
    pub norm_sq: BigUint,
    /// `|u″|`, an integer.
    pub norm: BigUint,
    /// `u″ / |u″|`.
    pub unit: Vec<Rational>,
}

pub fn build_initial_vector(plan: &KronPlan) -> Result<InitialVector, KronError> {
    let terms = match &plan.polynomial {
        PlanPolynomial::Terms(t) if !t.is_empty() => t,
        PlanPolynomial::Terms(_) => return Err(KronError::EmptyPlan),
        PlanPolynomial::Nested { .. } => return Err(KronError::NotMaterializable("nested polynomial")),
    };
    let delta_split = plan.delta_split.ok_or(KronError::NotMaterializable("δ too large to split"))?;
    let dim = plan.dense_dimension().ok_or(KronError::IndexOverflow)?;
    let mut raw = vec![BigUint::zero(); dim];
    let mut offset = 0;
    for t in terms {
        let block = plan.n.pow(t.degree() as u32);
        for d in t.split {
            raw[offset + t.index.r - 1] = BigUint::from(d);
            offset += block;
        }
    }
    for d in delta_split {
        raw[offset] = BigUint::from(d);
        offset += 1;
    }
    let norm_sq: BigUint = raw.iter().map(|x| x * x).sum();
    let norm = norm_sq.sqrt();
    debug_assert_eq!(&norm * &norm, norm_sq);
    let den = BigInt::from_biguint(Sign::Plus, norm.clone());
    let unit = raw
        .iter()
        .map(|x| Rational::new(BigInt::from_biguint(Sign::Plus, x.clone()), den.clone()).expect("nonzero norm"))
        .collect();
    Ok(InitialVector { raw, norm_sq, norm, unit })
}

fn check_bases(bases: &[(String, RatMatrix)], n: usize) -> Result<(), KronError> {
    match bases.iter().find(|(_, m)| m.shape() != (n, n)) {
        Some((name, _)) => Err(KronError::BaseShape { name: name.clone(), n }),
        None => Ok(()),
    }
}

/// The materialized automaton: generators `(⊕ four copies of X^{⊗i} per
/// term) ⊕ I_4`, projection onto each term's row `s` in each copy, and the
/// normalized start vector.
pub fn build_dense(bases: &[(String, RatMatrix)], plan: &KronPlan) -> Result<Qfa, KronError> {
    check_bases(bases, plan.n)?;
    let dim = plan.dense_dimension().ok_or(KronError::NotMaterializable("nested polynomial"))?;
    if dim > DENSE_DIMENSION_LIMIT {
        return Err(KronError::DimensionGuard { dimension: dim, limit: DENSE_DIMENSION_LIMIT });
    }
    let u = build_initial_vector(plan)?;
    let terms = plan.terms();

    let mut proj = vec![Rational::zero(); dim];
    let mut offset = 0;
    for t in terms {
        let block = plan.n.pow(t.degree() as u32);
        for _ in 0..4 {
            proj[offset + t.index.s - 1] = Rational::one();
            offset += block;
        }
    }

    let id4 = RatMatrix::identity(4);
    let mut gens = Vec::with_capacity(bases.len());
    for (name, x) in bases {
        let mut powers: Vec<(usize, RatMatrix)> = Vec::new();
        for t in terms {
            if !powers.iter().any(|(d, _)| *d == t.degree()) {
                powers.push((t.degree(), kron_power(x, t.degree() as u32)));
            }
        }
        let mut blocks: Vec<&RatMatrix> = Vec::new();
        for t in terms {
            let p = &powers.iter().find(|(d, _)| *d == t.degree()).expect("computed above").1;
            blocks.extend([p, p, p, p]);
        }
        blocks.push(&id4);
        gens.push((name.clone(), block_diagonal(&blocks)));
    }
    Qfa::new(RatMatrix::diagonal(&proj), gens, u.unit).map_err(|e| match e {
        crate::qfa::QfaError::Matrix(m) => KronError::Matrix(m),
        _ => KronError::NotMaterializable("inconsistent shapes"),
    })
}

/// Result of [`eval_lazy`]: acceptance is `value * scale / normalizer`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LazyAcceptance {
    /// Polynomial value at the squared entries. For nested plans this is the
    /// unscaled packing value.
    pub value: Rational,
    /// `25^D` for nested plans, 1 otherwise.
    pub scale: BigUint,
    /// `S + δ`.
    pub normalizer: BigUint,
}

impl LazyAcceptance {
    pub fn probability(&self) -> Rational {
        let num = Rational::from_integer(BigInt::from_biguint(Sign::Plus, self.scale.clone()));
        let den = Rational::from_integer(BigInt::from_biguint(Sign::Plus, self.normalizer.clone()));
        (&self.value * num).checked_div(&den).expect("normalizer is positive")
    }
}

/// `X_wk ... X_w1` over the bases.
pub fn word_product(bases: &[(String, RatMatrix)], n: usize, w: &Word) -> Result<RatMatrix, KronError> {
    let mut y = RatMatrix::identity(n);
    for l in w.letters() {
        let x = bases
            .get(l.index() - 1)
            .ok_or(KronError::UnknownLetter { index: l.index(), alphabet: bases.len() })?;
        y = matmul(&x.1, &y)?;
    }
    Ok(y)
}

/// Squared entries of `y` at the plan positions.
pub fn squared_entries(plan: &KronPlan, y: &RatMatrix) -> Vec<Rational> {
    plan.positions.iter().map(|p| y.get(p.row - 1, p.col - 1).square()).collect()
}

/// Plan polynomial (unscaled for nested plans) at squared entries `xs`.
pub fn plan_value(plan: &KronPlan, xs: &[Rational]) -> Result<Rational, KronError> {
    match &plan.polynomial {
        PlanPolynomial::Nested { .. } => Ok(fk(xs)?),
        PlanPolynomial::Terms(ts) => {
            let mut total = Rational::zero();
            for t in ts {
                let mut v = Rational::from_integer(BigInt::from_biguint(Sign::Plus, t.coeff.clone()));
                for (x, &e) in xs.iter().zip(&t.exponents) {
                    if e > 0 {
                        v *= &x.pow(e);
                    }
                }
                total += &v;
            }
            Ok(total)
        }
    }
}

/// Acceptance of `w` by the (conceptual) dense automaton, computed from the
/// `n x n` product only.
pub fn eval_lazy(bases: &[(String, RatMatrix)], plan: &KronPlan, w: &Word) -> Result<LazyAcceptance, KronError> {
    check_bases(bases, plan.n)?;
    let y = word_product(bases, plan.n, w)?;
    let value = plan_value(plan, &squared_entries(plan, &y))?;
    let scale = match &plan.polynomial {
        PlanPolynomial::Nested { arity } => nested_scale(*arity)?,
        PlanPolynomial::Terms(_) => BigUint::from(1u32),
    };
    Ok(LazyAcceptance { value, scale, normalizer: plan.normalizer() })
}
