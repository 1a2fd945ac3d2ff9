//! Rational quaternions and the map sending free words over `{a, b}` to unit
//! quaternions, `a -> (3/5, 4/5, 0, 0)` and `b -> (3/5, 0, 4/5, 0)`.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Mul;
use core::str::FromStr;

use crate::exactnum::{ExactError, Rational};
use crate::words::{FreeWord, Gen};

/// `a + b i + c j + d k` with rational components.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuatRat {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

impl QuatRat {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        QuatRat { a, b, c, d }
    }

    pub fn identity() -> Self {
        QuatRat::new(Rational::one(), Rational::zero(), Rational::zero(), Rational::zero())
    }

    pub fn zero() -> Self {
        QuatRat::new(Rational::zero(), Rational::zero(), Rational::zero(), Rational::zero())
    }

    /// Image of a single generator.
    pub fn generator(g: Gen) -> Self {
        let (three, four, zero) = (Rational::frac(3, 5), Rational::frac(4, 5), Rational::zero());
        match g {
            Gen::A => QuatRat::new(three, four, zero.clone(), zero),
            Gen::B => QuatRat::new(three, zero.clone(), four, zero),
        }
    }

    pub fn components(&self) -> [&Rational; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    fn conjugate(&self) -> Self {
        QuatRat::new(self.a.clone(), -&self.b, -&self.c, -&self.d)
    }

    pub(crate) fn norm_sq(&self) -> Rational {
        self.a.square() + self.b.square() + self.c.square() + self.d.square()
    }

    pub fn is_unit(&self) -> bool {
        self.norm_sq().is_one()
    }

    fn scale(&self, s: &Rational) -> Self {
        QuatRat::new(&self.a * s, &self.b * s, &self.c * s, &self.d * s)
    }

    /// Integer power by repeated squaring; negative exponents invert first.
    pub fn pow(&self, exp: i64) -> Result<Self, ExactError> {
        let mut base = if exp < 0 { qinv(self)? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = QuatRat::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = qmul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = qmul(&base, &base);
            }
        }
        Ok(acc)
    }
}

/// Quaternion product with the orientation `i j = -k` (equivalently the
/// Hamilton product taken in the opposite order).
///
/// This is the orientation under which the 4x4 embedding in
/// [`crate::ratmatrix::gamma3`] is multiplicative, so `gamma2(ab)` has top row
/// `(9, 12, 12, -16) / 25`, the same as the matrix product `A B`.
pub fn qmul(p: &QuatRat, q: &QuatRat) -> QuatRat {
    let (a1, b1, c1, d1) = (&p.a, &p.b, &p.c, &p.d);
    let (a2, b2, c2, d2) = (&q.a, &q.b, &q.c, &q.d);
    QuatRat {
        a: a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        b: a1 * b2 + b1 * a2 - c1 * d2 + d1 * c2,
        c: a1 * c2 + b1 * d2 + c1 * a2 - d1 * b2,
        d: a1 * d2 - b1 * c2 + c1 * b2 + d1 * a2,
    }
}

/// Multiplicative inverse `conj(q) / |q|^2`.
pub fn qinv(q: &QuatRat) -> Result<QuatRat, ExactError> {
    let n = q.norm_sq();
    if n.is_zero() {
        return Err(ExactError::DivisionByZero);
    }
    Ok(q.conjugate().scale(&n.recip()?))
}

/// Left-to-right product of the generator powers of a reduced word; the
/// empty word maps to the identity quaternion.
pub fn gamma2(w: &FreeWord) -> QuatRat {
    w.syllables().iter().fold(QuatRat::identity(), |acc, s| {
        let p = QuatRat::generator(s.base)
            .pow(s.exp)
            .expect("generator images are invertible");
        qmul(&acc, &p)
    })
}

impl Mul for &QuatRat {
    type Output = QuatRat;
    fn mul(self, rhs: &QuatRat) -> QuatRat {
        qmul(self, rhs)
    }
}

impl fmt::Display for QuatRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.a, self.b, self.c, self.d)
    }
}

impl FromStr for QuatRat {
    type Err = ExactError;

    /// Parses `"(a, b, c, d)"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ExactError::Parse(s.to_string());
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(bad)?;
        let parts = inner
            .split(',')
            .map(|p| p.parse::<Rational>())
            .collect::<Result<Vec<_>, _>>()?;
        match <[Rational; 4]>::try_from(parts) {
            Ok([a, b, c, d]) => Ok(QuatRat::new(a, b, c, d)),
            Err(_) => Err(bad()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{free_reduce, word_transform, Transform};
    use alloc::collections::BTreeSet;
    use alloc::format;
    use proptest::prelude::*;

    fn q(a: i64, b: i64, c: i64, d: i64, den: i64) -> QuatRat {
        QuatRat::new(
            Rational::frac(a, den),
            Rational::frac(b, den),
            Rational::frac(c, den),
            Rational::frac(d, den),
        )
    }

    fn ga() -> QuatRat {
        gamma2(&"a".parse().unwrap())
    }

    fn gb() -> QuatRat {
        gamma2(&"b".parse().unwrap())
    }

    #[test]
    fn generator_images() {
        assert_eq!(ga(), q(3, 4, 0, 0, 5));
        assert_eq!(gb(), q(3, 0, 4, 0, 5));
        assert_eq!(gamma2(&FreeWord::empty()), QuatRat::identity());
    }

    #[test]
    fn products_of_generators() {
        assert_eq!(qmul(&ga(), &gb()), q(9, 12, 12, -16, 25));
        assert_eq!(qmul(&gb(), &ga()), q(9, 12, 12, 16, 25));
        let x = q(1, -2, 3, 7, 11);
        assert_eq!(qmul(&x, &QuatRat::identity()), x);
    }

    #[test]
    fn inverses() {
        assert_eq!(qinv(&ga()).unwrap(), q(3, -4, 0, 0, 5));
        assert_eq!(qinv(&gb()).unwrap(), q(3, 0, -4, 0, 5));
        assert_eq!(qinv(&QuatRat::identity()).unwrap(), QuatRat::identity());
        assert!(qinv(&QuatRat::zero()).is_err());
        let x = q(2, -1, 3, 5, 7);
        assert_eq!(qmul(&qinv(&x).unwrap(), &x), QuatRat::identity());
        assert_eq!(qmul(&x, &qinv(&x).unwrap()), QuatRat::identity());
    }

    #[test]
    fn text_round_trip() {
        let x = q(9, 12, 12, -16, 25);
        assert_eq!(format!("{x}"), "(9/25, 12/25, 12/25, -16/25)");
        assert_eq!(format!("{x}").parse::<QuatRat>().unwrap(), x);
        assert!("(1, 2, 3)".parse::<QuatRat>().is_err());
    }

    #[test]
    fn positive_words_up_to_length_eleven_have_distinct_images() {
        // 2 + 4 + ... + 2^11 nonempty words; the 2046 of length <= 10 are a prefix.
        let mut seen = BTreeSet::new();
        let mut frontier = alloc::vec![(FreeWord::empty(), QuatRat::identity())];
        let mut up_to_ten = 0;
        for len in 1..=11 {
            let mut next = alloc::vec::Vec::new();
            for (w, img) in &frontier {
                for g in [Gen::A, Gen::B] {
                    let w2 = w.concat(&free_reduce([(g, 1)]));
                    let img2 = qmul(img, &QuatRat::generator(g));
                    assert!(img2.is_unit());
                    assert!(seen.insert(img2.clone()), "collision at {w2}");
                    next.push((w2, img2));
                }
            }
            frontier = next;
            if len == 10 {
                up_to_ten = seen.len();
            }
        }
        assert_eq!(up_to_ten, 2046);
        assert_eq!(seen.len(), 4094);
    }

    fn arb_free_word() -> impl Strategy<Value = FreeWord> {
        proptest::collection::vec((any::<bool>(), -4i64..=4), 0..20).prop_map(|v| {
            free_reduce(v.into_iter().map(|(a, e)| (if a { Gen::A } else { Gen::B }, e)))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn sign_identities(w in arb_free_word()) {
            let QuatRat { a: r, b: x, c: y, d: z } = gamma2(&w);
            prop_assert_eq!(gamma2(&word_transform(&w, Transform::Reverse)),
                QuatRat::new(r.clone(), x.clone(), y.clone(), -&z));
            prop_assert_eq!(gamma2(&word_transform(&w, Transform::NegA)),
                QuatRat::new(r.clone(), -&x, y.clone(), -&z));
            prop_assert_eq!(gamma2(&word_transform(&w, Transform::NegB)),
                QuatRat::new(r.clone(), x.clone(), -&y, -&z));
            prop_assert_eq!(gamma2(&word_transform(&w, Transform::NegAB)),
                QuatRat::new(r, -&x, -&y, z));
        }

        #[test]
        fn gamma2_is_a_homomorphism_with_unit_images(u in arb_free_word(), v in arb_free_word()) {
            let uv = gamma2(&u.concat(&v));
            prop_assert_eq!(&uv, &qmul(&gamma2(&u), &gamma2(&v)));
            prop_assert!(uv.is_unit());
        }
    }
}
