//! The packing polynomial `f(x, y) = (x^4 + y^4)^3 + x^4`, its nested n-ary
//! form, and the integer helpers used to turn polynomials into unit vectors:
//! four-square splits and perfect-square completion.
//!
//! `f` is injective on pairs from `Λ = { a / 5^k : a < 5^k }` and maps them
//! into `25 Λ`, so the nested form divides each inner value by 25 before
//! feeding it back in:
//!
//! ```text
//! f_2 = f,    f_k(x1, ..., xk) = f(x1, f_{k-1}(x2, ..., xk) / 25)
//! ```

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::exactnum::Rational;

/// Largest input accepted by [`four_squares`].
pub const FOUR_SQUARES_CAP: u64 = 1_000_000_000;

/// Largest `k_max` accepted by [`injectivity_scan`].
pub const SCAN_K_MAX: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyError {
    /// The nested polynomial needs at least two arguments.
    ArityTooSmall(usize),
    ArityMismatch { expected: usize, got: usize },
    NotInLambda(String),
    /// Input above [`FOUR_SQUARES_CAP`].
    AboveFourSquaresCap(String),
    KMaxTooLarge(u32),
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::ArityTooSmall(n) => write!(f, "nested packing needs at least 2 arguments, got {n}"),
            PolyError::ArityMismatch { expected, got } => {
                write!(f, "expected {expected} arguments, got {got}")
            }
            PolyError::NotInLambda(s) => write!(f, "{s} is not of the form a/5^k with a < 5^k"),
            PolyError::AboveFourSquaresCap(n) => {
                write!(f, "{n} exceeds the four-square search cap {FOUR_SQUARES_CAP}")
            }
            PolyError::KMaxTooLarge(k) => write!(f, "k_max {k} exceeds {SCAN_K_MAX}"),
        }
    }
}

impl core::error::Error for PolyError {}

/// `a / 5^k` with `a < 5^k`, stored with `5 ∤ a` (and `k = 0` for zero).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LambdaRational {
    a: BigUint,
    k: u32,
}

impl LambdaRational {
    pub fn new(a: impl Into<BigUint>, k: u32) -> Result<Self, PolyError> {
        let (mut a, mut k) = (a.into(), k);
        if a.is_zero() {
            return Ok(LambdaRational { a, k: 0 });
        }
        let five = BigUint::from(5u32);
        while k > 0 && (&a % &five).is_zero() {
            a /= &five;
            k -= 1;
        }
        if k == 0 || a >= five.pow(k) {
            return Err(PolyError::NotInLambda(alloc::format!("{a}/5^{k}")));
        }
        Ok(LambdaRational { a, k })
    }

    pub fn zero() -> Self {
        LambdaRational { a: BigUint::zero(), k: 0 }
    }

    pub fn from_rational(r: &Rational) -> Result<Self, PolyError> {
        let bad = || PolyError::NotInLambda(alloc::format!("{r}"));
        let q = Quinary::from_rational(r).ok_or_else(bad)?;
        let a = q.num.to_biguint().ok_or_else(bad)?;
        let k = u32::try_from(q.exp).map_err(|_| bad())?;
        LambdaRational::new(a, k)
    }

    pub fn numerator(&self) -> &BigUint {
        &self.a
    }

    pub fn exponent(&self) -> u32 {
        self.k
    }

    pub fn to_rational(&self) -> Rational {
        Rational::from_canonical_parts(
            BigInt::from_biguint(Sign::Plus, self.a.clone()),
            BigInt::from(5u32).pow(self.k),
        )
    }
}

impl fmt::Display for LambdaRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/5^{}", self.a, self.k)
    }
}

/// `num / 5^exp`, not reduced. Arithmetic on these skips the gcd work that
/// dominates exact evaluation of the nested polynomial.
#[derive(Debug, Clone)]
struct Quinary {
    num: BigInt,
    exp: u64,
}

impl Quinary {
    fn from_rational(r: &Rational) -> Option<Self> {
        let mut den = r.denom().clone();
        let five = BigInt::from(5u32);
        let mut exp = 0u64;
        while !den.is_one() {
            let (q, rem) = den.div_rem(&five);
            if !rem.is_zero() {
                return None;
            }
            den = q;
            exp += 1;
        }
        Some(Quinary { num: r.numer().clone(), exp })
    }

    fn to_rational(&self) -> Rational {
        if self.num.is_zero() {
            return Rational::zero();
        }
        let five = BigInt::from(5u32);
        let (mut num, mut exp) = (self.num.clone(), self.exp);
        while exp > 0 {
            let (q, rem) = num.div_rem(&five);
            if !rem.is_zero() {
                break;
            }
            num = q;
            exp -= 1;
        }
        let den = num_traits::pow(BigInt::from(5u32), exp as usize);
        Rational::from_canonical_parts(num, den)
    }

    fn add(&self, other: &Quinary) -> Quinary {
        let (lo, hi) = if self.exp <= other.exp { (self, other) } else { (other, self) };
        let lift = num_traits::pow(BigInt::from(5u32), (hi.exp - lo.exp) as usize);
        Quinary { num: &lo.num * lift + &hi.num, exp: hi.exp }
    }

    fn mul(&self, other: &Quinary) -> Quinary {
        Quinary { num: &self.num * &other.num, exp: self.exp + other.exp }
    }

    fn square(&self) -> Quinary {
        self.mul(self)
    }

    fn div25(self) -> Quinary {
        Quinary { num: self.num, exp: self.exp + 2 }
    }
}

fn f_quinary(x: &Quinary, y: &Quinary) -> Quinary {
    let x4 = x.square().square();
    let y4 = y.square().square();
    let s = x4.add(&y4);
    s.square().mul(&s).add(&x4)
}

fn f_rational(x: &Rational, y: &Rational) -> Rational {
    let x4 = x.square().square();
    let s = &x4 + y.square().square();
    s.square() * &s + x4
}

/// `(x^4 + y^4)^3 + x^4`.
pub fn f2(x: &Rational, y: &Rational) -> Rational {
    match (Quinary::from_rational(x), Quinary::from_rational(y)) {
        (Some(qx), Some(qy)) => f_quinary(&qx, &qy).to_rational(),
        _ => f_rational(x, y),
    }
}

/// The nested packing polynomial of arity `xs.len()`.
pub fn fk(xs: &[Rational]) -> Result<Rational, PolyError> {
    let n = xs.len();
    if n < 2 {
        return Err(PolyError::ArityTooSmall(n));
    }
    let quinary: Option<Vec<Quinary>> = xs.iter().map(Quinary::from_rational).collect();
    Ok(match quinary {
        Some(q) => {
            let mut acc = f_quinary(&q[n - 2], &q[n - 1]);
            for x in q[..n - 2].iter().rev() {
                acc = f_quinary(x, &acc.div25());
            }
            acc.to_rational()
        }
        None => {
            let mut acc = f_rational(&xs[n - 2], &xs[n - 1]);
            let inv25 = Rational::frac(1, 25);
            for x in xs[..n - 2].iter().rev() {
                acc = f_rational(x, &(acc * &inv25));
            }
            acc
        }
    })
}

/// [`fk`] on [`LambdaRational`] arguments.
pub fn fk_lambda(xs: &[LambdaRational]) -> Result<Rational, PolyError> {
    let rs: Vec<Rational> = xs.iter().map(LambdaRational::to_rational).collect();
    fk(&rs)
}

/// Total degree of the nested polynomial of the given arity.
pub fn fk_degree(arity: usize) -> Result<u64, PolyError> {
    if arity < 2 {
        return Err(PolyError::ArityTooSmall(arity));
    }
    // inner argument enters through y^12; x^12 is the other top term
    Ok((3..=arity).fold(12u64, |d, _| 12 * d))
}

/// `D` such that `25^D * f_k` has integer coefficients: `D_2 = 0` and
/// `D_k = 12 (D_{k-1} + 1)`.
pub fn fk_scale_exponent(arity: usize) -> Result<u64, PolyError> {
    if arity < 2 {
        return Err(PolyError::ArityTooSmall(arity));
    }
    Ok((3..=arity).fold(0u64, |d, _| 12 * (d + 1)))
}

/// Polynomial with positive integer coefficients, keyed by exponent vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    arity: usize,
    terms: BTreeMap<Vec<u32>, BigUint>,
}

impl Polynomial {
    pub fn zero(arity: usize) -> Self {
        Polynomial { arity, terms: BTreeMap::new() }
    }

    pub fn constant(arity: usize, c: impl Into<BigUint>) -> Self {
        let mut p = Polynomial::zero(arity);
        p.add_term(vec![0; arity], c.into());
        p
    }

    /// The variable `x_{i+1}` (0-based `i`).
    pub fn var(arity: usize, i: usize) -> Self {
        let mut e = vec![0; arity];
        e[i] = 1;
        let mut p = Polynomial::zero(arity);
        p.add_term(e, BigUint::one());
        p
    }

    /// Panics if `exponents` has the wrong length.
    pub fn add_term(&mut self, exponents: Vec<u32>, c: BigUint) {
        assert_eq!(exponents.len(), self.arity, "exponent vector length");
        if c.is_zero() {
            return;
        }
        *self.terms.entry(exponents).or_insert_with(BigUint::zero) += c;
    }

    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (Vec<u32>, BigUint)>) -> Result<Self, PolyError> {
        let mut p = Polynomial::zero(arity);
        for (e, c) in terms {
            if e.len() != arity {
                return Err(PolyError::ArityMismatch { expected: arity, got: e.len() });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigUint)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Sum of coefficients, i.e. the value at `(1, ..., 1)`.
    pub fn coefficient_sum(&self) -> BigUint {
        self.terms.values().sum()
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.arity);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        (0..k).fold(Polynomial::constant(self.arity, 1u32), |acc, _| acc.mul(self))
    }

    pub fn scale(&self, c: &BigUint) -> Polynomial {
        let mut out = Polynomial::zero(self.arity);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    /// Exact value at `xs`.
    pub fn evaluate(&self, xs: &[Rational]) -> Result<Rational, PolyError> {
        if xs.len() != self.arity {
            return Err(PolyError::ArityMismatch { expected: self.arity, got: xs.len() });
        }
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = Rational::from_integer(BigInt::from_biguint(Sign::Plus, c.clone()));
            for (x, &k) in xs.iter().zip(e) {
                if k > 0 {
                    t *= &x.pow(k);
                }
            }
            total += &t;
        }
        Ok(total)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}")?;
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    _ => write!(f, "*x{}^{k}", i + 1)?,
                }
            }
        }
        Ok(())
    }
}

/// `f` expanded over two variables.
pub fn f2_polynomial() -> Polynomial {
    let x4 = Polynomial::var(2, 0).pow(4);
    let y4 = Polynomial::var(2, 1).pow(4);
    x4.add(&y4).pow(3).add(&x4)
}

/// `25^D * f_k` expanded, with `D` from [`fk_scale_exponent`]. Only small
/// arities are practical: arity 3 already has hundreds of terms and the
/// term count grows like a tower beyond that.
pub fn fk_scaled_polynomial(arity: usize) -> Result<Polynomial, PolyError> {
    if arity < 2 {
        return Err(PolyError::ArityTooSmall(arity));
    }
    let lift = |p: &Polynomial, shift: usize| {
        let mut out = Polynomial::zero(arity);
        for (e, c) in p.terms() {
            let mut v = vec![0; arity];
            v[shift..shift + e.len()].copy_from_slice(e);
            out.add_term(v, c.clone());
        }
        out
    };
    let mut inner = lift(&f2_polynomial(), arity - 2);
    let mut d = 0u64;
    for pos in (0..arity - 2).rev() {
        // 25^{12 (d+1)} f(x, F / 25^{d+1}) = (c^4 x^4 + F^4)^3 + c^12 x^4, c = 25^{d+1}
        let c = num_traits::pow(BigUint::from(25u32), (d + 1) as usize);
        let x4 = Polynomial::var(arity, pos).pow(4);
        let cx4 = x4.scale(&num_traits::pow(c.clone(), 4));
        inner = cx4.add(&inner.pow(4)).pow(3).add(&x4.scale(&num_traits::pow(c, 12)));
        d = 12 * (d + 1);
    }
    Ok(inner)
}

/// Canonical Lagrange split: the lexicographically greatest descending
/// `(a1, a2, a3, a4)` with `a1^2 + a2^2 + a3^2 + a4^2 = n`.
pub fn four_squares(n: u64) -> Result<[u64; 4], PolyError> {
    if n > FOUR_SQUARES_CAP {
        return Err(PolyError::AboveFourSquaresCap(alloc::format!("{n}")));
    }
    let isqrt = |m: u64| num_integer::Roots::sqrt(&m);
    let mut a1 = isqrt(n);
    loop {
        let r1 = n - a1 * a1;
        let mut a2 = a1.min(isqrt(r1));
        while 3 * a2 * a2 >= r1 {
            let r2 = r1 - a2 * a2;
            let mut a3 = a2.min(isqrt(r2));
            while 2 * a3 * a3 >= r2 {
                let r3 = r2 - a3 * a3;
                let a4 = isqrt(r3);
                if a4 * a4 == r3 && a4 <= a3 {
                    return Ok([a1, a2, a3, a4]);
                }
                if a3 == 0 {
                    break;
                }
                a3 -= 1;
            }
            if a2 == 0 {
                break;
            }
            a2 -= 1;
        }
        // Lagrange guarantees a split before a1 drops below sqrt(n/4).
        a1 -= 1;
    }
}

/// Smallest `δ ≥ 0` such that `s + δ` is a perfect square.
pub fn complete_square(s: &BigUint) -> BigUint {
    let r = s.sqrt();
    if &(&r * &r) == s {
        BigUint::zero()
    } else {
        let up = r + 1u32;
        &up * &up - s
    }
}

/// `(x + y + 1)(x + y) / 2 + x`.
pub fn cantor_pair(x: &Rational, y: &Rational) -> Rational {
    let s = x + y;
    (&s + Rational::one()) * &s * Rational::frac(1, 2) + x
}

/// One monomial of a decomposed polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecomposedTerm {
    pub degree: u32,
    /// 1-based position among the terms of the same degree.
    pub index: usize,
    pub coeff: BigUint,
    pub exponents: Vec<u32>,
    pub split: [u64; 4],
}

/// Terms grouped by total degree (ascending), then by exponent vector,
/// each with its four-square split.
pub fn decompose_poly(p: &Polynomial) -> Result<Vec<DecomposedTerm>, PolyError> {
    let mut items: Vec<(u32, &Vec<u32>, &BigUint)> =
        p.terms().map(|(e, c)| (e.iter().sum::<u32>(), e, c)).collect();
    items.sort();
    let mut out: Vec<DecomposedTerm> = Vec::with_capacity(items.len());
    for (degree, e, c) in items {
        let n = c
            .to_u64()
            .ok_or_else(|| PolyError::AboveFourSquaresCap(alloc::format!("{c}")))?;
        let index = match out.last() {
            Some(t) if t.degree == degree => t.index + 1,
            _ => 1,
        };
        out.push(DecomposedTerm { degree, index, coeff: c.clone(), exponents: e.clone(), split: four_squares(n)? });
    }
    Ok(out)
}

/// Two grid inputs sharing a value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ScanCollision {
    pub value: Rational,
    pub first: (Rational, Rational),
    pub second: (Rational, Rational),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanReport {
    pub k_max: u32,
    /// Number of pairs evaluated.
    pub pairs: usize,
    /// Every colliding pair, ordered by value and then by grid order.
    pub collisions: Vec<ScanCollision>,
    /// Largest absolute value seen.
    pub max_abs: Rational,
}

impl ScanReport {
    pub fn is_injective(&self) -> bool {
        self.collisions.is_empty()
    }

    /// Number of distinct values hit more than once.
    pub fn colliding_values(&self) -> usize {
        let mut n = 0;
        let mut last: Option<&Rational> = None;
        for c in &self.collisions {
            if last != Some(&c.value) {
                n += 1;
                last = Some(&c.value);
            }
        }
        n
    }
}

/// The scan grid `{ a / 5^k_max : 0 ≤ a < 5^k_max }`, which is
/// `{ a/5^k : k ≤ k_max, a < 5^k }` written over a common denominator.
pub fn scan_grid(k_max: u32) -> Vec<Rational> {
    let den = 5i64.pow(k_max);
    (0..den).map(|a| Rational::frac(a, den)).collect()
}

/// Evaluates `eval` on every pair of grid points and groups equal values.
pub fn injectivity_scan(
    eval: impl Fn(&Rational, &Rational) -> Rational,
    k_max: u32,
) -> Result<ScanReport, PolyError> {
    if k_max > SCAN_K_MAX {
        return Err(PolyError::KMaxTooLarge(k_max));
    }
    let grid = scan_grid(k_max);
    let mut groups: BTreeMap<Rational, Vec<(usize, usize)>> = BTreeMap::new();
    let mut max_abs = Rational::zero();
    for i in 0..grid.len() {
        for j in 0..grid.len() {
            let v = eval(&grid[i], &grid[j]);
            if v.abs() > max_abs {
                max_abs = v.abs();
            }
            groups.entry(v).or_default().push((i, j));
        }
    }
    let pt = |(i, j): (usize, usize)| (grid[i].clone(), grid[j].clone());
    let mut collisions = Vec::new();
    for (value, ps) in groups {
        for a in 0..ps.len() {
            for b in a + 1..ps.len() {
                collisions.push(ScanCollision { value: value.clone(), first: pt(ps[a]), second: pt(ps[b]) });
            }
        }
    }
    Ok(ScanReport { k_max, pairs: grid.len() * grid.len(), collisions, max_abs })
}
