use alloc::collections::BTreeMap;
use alloc::string::String;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};

use super::{ExactError, Rational};

/// The fixed radical basis: fourth roots of monomials in these primes.
pub const PRIMES: [u32; 6] = [2, 3, 5, 7, 11, 13];

/// Quarter-exponents `(e1, .., e6)`, each in `0..=3`; the monomial is
/// `prod p_i^(e_i / 4)`.
pub type Exponents = [u8; 6];

/// A rational linear combination `sum c_e * prod p_i^(e_i/4)`.
///
/// Kept sparse: zero coefficients never appear in the map. Because the
/// monomials over distinct squarefree radicals are linearly independent over
/// the rationals, two signatures denote the same real number exactly when
/// their maps coincide. That is proven for square roots; for mixed fourth
/// roots componentwise equality is taken as the definition and callers can
/// check [`RadicalSignature::has_quarter_exponents`] to flag such comparisons.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RadicalSignature {
    terms: BTreeMap<Exponents, Rational>,
}

/// Exact equality of the represented values (see [`RadicalSignature`]).
pub fn radsig_equal(s1: &RadicalSignature, s2: &RadicalSignature) -> bool {
    s1 == s2
}

/// Decimal approximation with `precision_digits` places after the point.
pub fn radsig_to_float(s: &RadicalSignature, precision_digits: u32) -> String {
    s.to_decimal(precision_digits)
}

fn check_exponents(e: &Exponents) -> Result<(), ExactError> {
    match e.iter().find(|&&x| x > 3) {
        Some(&x) => Err(ExactError::ExponentOutOfRange(x)),
        None => Ok(()),
    }
}

fn radicand(e: &Exponents) -> BigUint {
    e.iter()
        .zip(PRIMES)
        .fold(BigUint::one(), |acc, (&k, p)| acc * BigUint::from(p).pow(k as u32))
}

impl RadicalSignature {
    pub fn new() -> Self {
        Self::default()
    }

    /// The rational constant `c`.
    pub fn constant(c: Rational) -> Self {
        let mut s = Self::new();
        s.add_term([0; 6], c);
        s
    }

    pub fn monomial(exponents: Exponents, coeff: Rational) -> Result<Self, ExactError> {
        check_exponents(&exponents)?;
        let mut s = Self::new();
        s.add_term(exponents, coeff);
        Ok(s)
    }

    /// `coeff * sqrt(p_j)` with `j` a 0-based index into [`PRIMES`].
    pub fn sqrt_prime(j: usize, coeff: Rational) -> Self {
        let mut e = [0u8; 6];
        e[j] = 2;
        let mut s = Self::new();
        s.add_term(e, coeff);
        s
    }

    /// `coeff * p_j^(1/4)` with `j` a 0-based index into [`PRIMES`].
    pub fn fourth_root_prime(j: usize, coeff: Rational) -> Self {
        let mut e = [0u8; 6];
        e[j] = 1;
        let mut s = Self::new();
        s.add_term(e, coeff);
        s
    }

    /// Adds `coeff` to the coefficient of the given monomial, dropping it if
    /// the sum cancels.
    ///
    /// Panics if an exponent exceeds 3; use [`RadicalSignature::monomial`] for
    /// untrusted input.
    pub fn add_term(&mut self, exponents: Exponents, coeff: Rational) {
        assert!(check_exponents(&exponents).is_ok(), "radical exponent above 3");
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exponents).or_insert_with(Rational::zero);
        *slot += &coeff;
        if slot.is_zero() {
            self.terms.remove(&exponents);
        }
    }

    pub fn coefficient(&self, exponents: &Exponents) -> Rational {
        self.terms.get(exponents).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
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

    /// Every monomial is a single square root `sqrt(p_j)` (or the constant).
    pub fn is_square_root_case(&self) -> bool {
        self.terms.keys().all(|e| {
            let nonzero: alloc::vec::Vec<_> = e.iter().filter(|&&x| x != 0).collect();
            nonzero.is_empty() || (nonzero.len() == 1 && *nonzero[0] == 2)
        })
    }

    /// Some monomial carries an odd quarter exponent.
    pub fn has_quarter_exponents(&self) -> bool {
        self.terms.keys().any(|e| e.iter().any(|&x| x % 2 == 1))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::new();
        }
        RadicalSignature {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Value times `10^digits`, rounded half away from zero.
    ///
    /// Each monomial's fourth root is extracted exactly as an integer floor at
    /// a guarded working precision, so the only error is the truncation at
    /// that precision, bounded by `sum |c_e|` units of the working scale.
    pub fn approx_scaled(&self, digits: u32) -> BigInt {
        if self.terms.is_empty() {
            return BigInt::zero();
        }
        let weight: Rational = self.terms.values().map(|c| c.abs()).sum();
        // guard digits so that the truncation error stays below 1/100 of a unit
        let weight_digits = weight.round_scaled(0).magnitude().to_str_radix(10).len() as u32;
        let guard = weight_digits + 4;
        let work = digits + guard;
        let ten = BigUint::from(10u32);
        let shift4 = ten.pow(4 * work);
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let root = (radicand(e) * &shift4).nth_root(4);
            total += &(c * &Rational::from_integer(BigInt::from_biguint(Sign::Plus, root)));
        }
        let denom = Rational::from_integer(BigInt::from_biguint(Sign::Plus, ten.pow(guard)));
        total.checked_div(&denom).expect("nonzero power of ten").round_scaled(0)
    }

    /// Fixed-point decimal string with `digits` places; `"0"` for the empty
    /// combination.
    pub fn to_decimal(&self, digits: u32) -> String {
        if self.terms.is_empty() {
            return String::from("0");
        }
        format_scaled(&self.approx_scaled(digits), digits)
    }
}

pub(crate) fn format_scaled(scaled: &BigInt, digits: u32) -> String {
    let mut out = String::new();
    if scaled.is_negative() {
        out.push('-');
    }
    let mag = scaled.magnitude().to_str_radix(10);
    let d = digits as usize;
    if d == 0 {
        out.push_str(&mag);
        return out;
    }
    let padded = if mag.len() <= d {
        let mut p = String::new();
        for _ in 0..(d + 1 - mag.len()) {
            p.push('0');
        }
        p.push_str(&mag);
        p
    } else {
        mag
    };
    let (int_part, frac_part) = padded.split_at(padded.len() - d);
    out.push_str(int_part);
    out.push('.');
    out.push_str(frac_part);
    out
}

impl Add for &RadicalSignature {
    type Output = RadicalSignature;
    fn add(self, rhs: &RadicalSignature) -> RadicalSignature {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Add for RadicalSignature {
    type Output = RadicalSignature;
    fn add(self, rhs: RadicalSignature) -> RadicalSignature {
        &self + &rhs
    }
}

impl Neg for &RadicalSignature {
    type Output = RadicalSignature;
    fn neg(self) -> RadicalSignature {
        RadicalSignature {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Sub for &RadicalSignature {
    type Output = RadicalSignature;
    fn sub(self, rhs: &RadicalSignature) -> RadicalSignature {
        self + &(-rhs)
    }
}

/// Product with quarter exponents reduced mod 4; each full power `p^(4/4)`
/// moves into the rational coefficient.
impl Mul for &RadicalSignature {
    type Output = RadicalSignature;
    fn mul(self, rhs: &RadicalSignature) -> RadicalSignature {
        let mut out = RadicalSignature::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let mut e = [0u8; 6];
                let mut c = c1 * c2;
                for i in 0..6 {
                    let s = e1[i] + e2[i];
                    if s >= 4 {
                        c = c * Rational::from(PRIMES[i] as i64);
                        e[i] = s - 4;
                    } else {
                        e[i] = s;
                    }
                }
                out.add_term(e, c);
            }
        }
        out
    }
}

impl fmt::Display for RadicalSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            let parts: alloc::vec::Vec<String> = e
                .iter()
                .zip(PRIMES)
                .filter(|(k, _)| **k != 0)
                .map(|(k, p)| alloc::format!("{p}^({k}/4)"))
                .collect();
            if !parts.is_empty() {
                write!(f, "*{}", parts.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RadicalSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RadicalSignature({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sqrt(j: usize, c: i64) -> RadicalSignature {
        RadicalSignature::sqrt_prime(j, Rational::from(c))
    }

    #[test]
    fn equality_examples() {
        assert!(radsig_equal(&sqrt(0, 1), &sqrt(0, 1)));
        assert!(!radsig_equal(&sqrt(0, 1), &sqrt(1, 1)));
    }

    // Reference digits were produced with a 60-digit mpmath evaluation.
    #[test]
    fn decimal_examples() {
        assert_eq!(radsig_to_float(&sqrt(0, 1), 9), "1.414213562");
        assert_eq!(radsig_to_float(&(&sqrt(0, 1) + &sqrt(1, 1)), 8), "3.14626437");
        assert_eq!(radsig_to_float(&RadicalSignature::new(), 12), "0");
        assert_eq!(
            radsig_to_float(&sqrt(0, 1), 40),
            "1.4142135623730950488016887242096980785697"
        );
    }

    #[test]
    fn decimal_with_mixed_quarter_exponents() {
        // 3/7*sqrt(5) - 2*30^(1/4) + 8^(1/4)
        let mut s = RadicalSignature::sqrt_prime(2, Rational::frac(3, 7));
        s.add_term([1, 1, 1, 0, 0, 0], Rational::from(-2));
        s.add_term([3, 0, 0, 0, 0, 0], Rational::one());
        assert_eq!(s.to_decimal(30), "-2.040586960634092920966385127139");
        assert!(s.has_quarter_exponents());
        assert!(!s.is_square_root_case());
    }

    #[test]
    fn small_values_keep_leading_zeros() {
        let s = RadicalSignature::constant(Rational::frac(-1, 1000));
        assert_eq!(s.to_decimal(4), "-0.0010");
    }

    #[test]
    fn fourth_roots_multiply_into_square_roots_and_integers() {
        let r2 = RadicalSignature::fourth_root_prime(0, Rational::one());
        let r3 = RadicalSignature::fourth_root_prime(1, Rational::one());
        assert_eq!(&r2 * &r2, sqrt(0, 1));
        let sq = &sqrt(0, 1) * &sqrt(0, 1);
        assert_eq!(sq, RadicalSignature::constant(Rational::from(2)));
        let mixed = &r2 * &r3;
        assert_eq!(mixed.coefficient(&[1, 1, 0, 0, 0, 0]), Rational::one());
        // (2^(1/4))^2 * (2^(1/4))^3 = 2 * 2^(1/4)
        let cube = &(&r2 * &r2) * &r2;
        let five = &cube * &(&r2 * &r2);
        assert_eq!(five, RadicalSignature::fourth_root_prime(0, Rational::from(2)));
    }

    #[test]
    fn rejects_out_of_range_exponents() {
        assert_eq!(
            RadicalSignature::monomial([4, 0, 0, 0, 0, 0], Rational::one()),
            Err(ExactError::ExponentOutOfRange(4))
        );
    }

    fn arb_sqrt_sig() -> impl Strategy<Value = RadicalSignature> {
        proptest::collection::vec((0usize..6, -100i64..=100, 1i64..=100), 0..6).prop_map(|ts| {
            let mut s = RadicalSignature::new();
            for (j, n, d) in ts {
                s = &s + &RadicalSignature::sqrt_prime(j, Rational::frac(n, d));
            }
            s
        })
    }

    proptest! {
        #[test]
        fn add_then_remove_restores(s in arb_sqrt_sig(), j in 0usize..6, n in -50i64..50) {
            let t = RadicalSignature::sqrt_prime(j, Rational::from(n));
            let back = &(&s + &t) - &t;
            prop_assert!(radsig_equal(&back, &s));
            prop_assert!(back.terms().all(|(_, c)| !c.is_zero()));
        }

        #[test]
        fn equality_is_symmetric_and_transitive(a in arb_sqrt_sig(), b in arb_sqrt_sig()) {
            let c = a.clone();
            prop_assert!(radsig_equal(&a, &a));
            prop_assert_eq!(radsig_equal(&a, &b), radsig_equal(&b, &a));
            if radsig_equal(&a, &b) {
                prop_assert!(radsig_equal(&b, &c));
            }
            prop_assert!(a.is_square_root_case());
        }
    }
}
