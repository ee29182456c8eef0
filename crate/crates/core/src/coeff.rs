//! Fractions of exponential Laurent polynomials: the coefficient field for
//! forms and differential operators.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::gcd::poly_gcd;
use crate::laurent::{Axis, ExpMonomial, LaurentPoly};
use crate::scalar::FieldScalar;

/// `num / den` in canonical form.
///
/// Canonical means: numerator and denominator are coprime, the denominator
/// is a polynomial in `u`, `v` not divisible by `u` or `v` (monomial
/// factors live in the numerator), and its lex-leading coefficient is 1.
/// Zero is `0/1`. Two elements are equal iff their representations are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoeffElem {
    num: LaurentPoly,
    den: LaurentPoly,
}

/// Brings `num/den` into canonical form.
pub fn normalize(num: LaurentPoly, den: LaurentPoly) -> Result<CoeffElem> {
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if num.is_zero() {
        return Ok(CoeffElem::zero());
    }
    if let Some((m, c)) = den.as_monomial() {
        let inv = c.inv().ok_or(Error::DivisionByZero)?;
        return Ok(CoeffElem {
            num: num.shift(&m.inv()).scale(&inv),
            den: LaurentPoly::one(),
        });
    }
    let g = poly_gcd(&num, &den);
    let (mut num, mut den) = if g.is_one() {
        (num, den)
    } else {
        (
            num.exact_div(&g).expect("gcd divides numerator"),
            den.exact_div(&g).expect("gcd divides denominator"),
        )
    };
    let (lo, _) = den.exponent_box().expect("nonzero denominator");
    if !lo.is_one() {
        num = num.shift(&lo.inv());
        den = den.shift(&lo.inv());
    }
    let lc = den.leading().expect("nonzero").1.clone();
    if !lc.is_one() {
        let inv = lc.inv().expect("nonzero");
        num = num.scale(&inv);
        den = den.scale(&inv);
    }
    Ok(CoeffElem { num, den })
}

impl CoeffElem {
    pub fn zero() -> Self {
        CoeffElem {
            num: LaurentPoly::zero(),
            den: LaurentPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::scalar(FieldScalar::one())
    }

    pub fn scalar(c: FieldScalar) -> Self {
        CoeffElem {
            num: LaurentPoly::constant(c),
            den: LaurentPoly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::scalar(FieldScalar::from_int(n))
    }

    pub fn frac(p: i64, q: i64) -> Self {
        Self::scalar(FieldScalar::frac(p, q))
    }

    pub fn laurent(p: LaurentPoly) -> Self {
        CoeffElem {
            num: p,
            den: LaurentPoly::one(),
        }
    }

    /// `e^{rx+sy}`.
    pub fn exp(r: i64, s: i64) -> Self {
        Self::laurent(LaurentPoly::exp(r, s))
    }

    pub fn monomial(m: ExpMonomial) -> Self {
        Self::laurent(LaurentPoly::monomial(m, FieldScalar::one()))
    }

    /// `u = e^x`.
    pub fn u() -> Self {
        Self::exp(1, 0)
    }

    /// `v = e^y`.
    pub fn v() -> Self {
        Self::exp(0, 1)
    }

    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        normalize(num, den)
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    /// The ground-field value if this element does not depend on `x`, `y`.
    pub fn as_scalar(&self) -> Option<FieldScalar> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// Total number of stored monomials; the pivoting cost measure.
    pub fn size(&self) -> usize {
        self.num.len() + self.den.len()
    }

    pub fn scale(&self, c: &FieldScalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        CoeffElem {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        normalize(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        normalize(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(CoeffElem {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    /// Derivation `δ_axis`, extended from monomials by the quotient rule.
    pub fn derive(&self, axis: Axis) -> Self {
        if self.den.is_one() {
            return CoeffElem {
                num: self.num.derive(axis),
                den: LaurentPoly::one(),
            };
        }
        let dn = self.num.derive(axis);
        let dd = self.den.derive(axis);
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        normalize(num, &self.den * &self.den).expect("nonzero denominator")
    }

    /// Iterated derivative `δ_x^a δ_y^b`.
    pub fn derive_n(&self, a: u32, b: u32) -> Self {
        let mut out = self.clone();
        for _ in 0..a {
            out = out.derive(Axis::X);
        }
        for _ in 0..b {
            out = out.derive(Axis::Y);
        }
        out
    }

    pub fn render(&self, latex: bool) -> String {
        if self.den.is_one() {
            return self.num.render(latex);
        }
        let n = self.num.render(latex);
        let d = self.den.render(latex);
        if latex {
            format!("\\frac{{{n}}}{{{d}}}")
        } else {
            let wrap = |s: String, p: &LaurentPoly| if p.len() > 1 { format!("({s})") } else { s };
            format!("{}/{}", wrap(n, &self.num), wrap(d, &self.den))
        }
    }
}

impl Default for CoeffElem {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<FieldScalar> for CoeffElem {
    fn from(c: FieldScalar) -> Self {
        Self::scalar(c)
    }
}

impl From<i64> for CoeffElem {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl fmt::Display for CoeffElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

impl<'a> Add<&'a CoeffElem> for &'a CoeffElem {
    type Output = CoeffElem;
    fn add(self, rhs: &CoeffElem) -> CoeffElem {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            if self.den.is_one() {
                return CoeffElem::laurent(num);
            }
            return normalize(num, self.den.clone()).expect("nonzero denominator");
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        normalize(num, &self.den * &rhs.den).expect("nonzero denominator")
    }
}

impl<'a> Sub<&'a CoeffElem> for &'a CoeffElem {
    type Output = CoeffElem;
    fn sub(self, rhs: &CoeffElem) -> CoeffElem {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a CoeffElem> for &'a CoeffElem {
    type Output = CoeffElem;
    fn mul(self, rhs: &CoeffElem) -> CoeffElem {
        if self.is_zero() || rhs.is_zero() {
            return CoeffElem::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return CoeffElem::laurent(&self.num * &rhs.num);
        }
        normalize(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero denominator")
    }
}

impl Neg for &CoeffElem {
    type Output = CoeffElem;
    fn neg(self) -> CoeffElem {
        CoeffElem {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for CoeffElem {
    type Output = CoeffElem;
    fn neg(self) -> CoeffElem {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<CoeffElem> for CoeffElem {
            type Output = CoeffElem;
            fn $m(self, rhs: CoeffElem) -> CoeffElem {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a CoeffElem> for CoeffElem {
            type Output = CoeffElem;
            fn $m(self, rhs: &CoeffElem) -> CoeffElem {
                (&self).$m(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn u() -> CoeffElem {
        CoeffElem::u()
    }
    fn v() -> CoeffElem {
        CoeffElem::v()
    }

    #[test]
    fn cancels_common_factors() {
        let e = CoeffElem::from_int(2) * u();
        let d = CoeffElem::from_int(2) * v();
        let r = e.checked_div(&d).unwrap();
        assert_eq!(r, CoeffElem::exp(1, -1));
        assert!(r.denominator().is_one());

        let num = &(&u() * &u()) - &(&v() * &v());
        let den = &u() - &v();
        assert_eq!(num.checked_div(&den).unwrap(), &u() + &v());

        let z = CoeffElem::zero().checked_div(&(&u() + &v())).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.denominator(), &LaurentPoly::one());
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(
            normalize(LaurentPoly::one(), LaurentPoly::zero()),
            Err(Error::DivisionByZero)
        );
        assert_eq!(
            u().checked_div(&CoeffElem::zero()),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn denominator_canonical_shape() {
        // e^{x}/(3e^{2x} - 3e^{x+y}) = (1/3)·e^{-x}... up to monomial shift
        let den = (CoeffElem::exp(2, 0) - CoeffElem::exp(1, 1)).scale(&FieldScalar::from_int(3));
        let r = u().checked_div(&den).unwrap();
        assert_eq!(r.denominator(), (&u() - &v()).numerator());
        assert_eq!(
            r.numerator(),
            &LaurentPoly::constant(FieldScalar::frac(1, 3))
        );
    }

    #[test]
    fn derivations() {
        assert_eq!(CoeffElem::exp(1, -1).derive(Axis::X), CoeffElem::exp(1, -1));
        assert!(CoeffElem::from_int(7).derive(Axis::X).is_zero());
        assert_eq!(CoeffElem::exp(1, 1).derive(Axis::Y), CoeffElem::exp(1, 1));
        // δ_x (u/(u - v)) = -uv/(u-v)²
        let w = u().checked_div(&(&u() - &v())).unwrap();
        let expected = -(&u() * &v())
            .checked_div(&((&u() - &v()) * (&u() - &v())))
            .unwrap();
        assert_eq!(w.derive(Axis::X), expected);
    }

    fn small_laurent() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((-2i64..=2, -2i64..=2, -3i64..=3), 1..4).prop_map(|ts| {
            LaurentPoly::from_terms(
                ts.into_iter()
                    .map(|(a, b, c)| (ExpMonomial::int(a, b), FieldScalar::from_int(c))),
            )
        })
    }

    fn small_coeff() -> impl Strategy<Value = CoeffElem> {
        (small_laurent(), small_laurent()).prop_filter_map("nonzero den", |(n, d)| {
            if d.is_zero() {
                None
            } else {
                Some(normalize(n, d).unwrap())
            }
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ring_axioms(a in small_coeff(), b in small_coeff(), c in small_coeff()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn leibniz(a in small_coeff(), b in small_coeff()) {
            for axis in [Axis::X, Axis::Y] {
                let lhs = (&a * &b).derive(axis);
                let rhs = &(&a.derive(axis) * &b) + &(&a * &b.derive(axis));
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn normalize_idempotent(a in small_coeff(), b in small_coeff()) {
            let again = normalize(a.numerator().clone(), a.denominator().clone()).unwrap();
            prop_assert_eq!(&again, &a);
            prop_assert_eq!(a == b, (&a - &b).is_zero());
        }

        #[test]
        fn inverse(a in small_coeff()) {
            prop_assume!(!a.is_zero());
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }
}
