//! Exponential Laurent polynomials: finite sums `Σ c · e^{rx} e^{sy}` with
//! rational exponents and ground-field coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

use crate::scalar::FieldScalar;

/// Direction of differentiation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
}

/// `e^{rx} · e^{sy}`, i.e. `u^r v^s` with `u = e^x`, `v = e^y`.
///
/// Ordered lexicographically on `(r, s)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExpMonomial {
    pub x: Rational64,
    pub y: Rational64,
}

impl ExpMonomial {
    pub const ONE: ExpMonomial = ExpMonomial {
        x: Rational64::new_raw(0, 1),
        y: Rational64::new_raw(0, 1),
    };

    pub fn new(x: Rational64, y: Rational64) -> Self {
        ExpMonomial { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        ExpMonomial {
            x: Rational64::from_integer(x),
            y: Rational64::from_integer(y),
        }
    }

    pub fn is_one(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn exponent(&self, axis: Axis) -> Rational64 {
        match axis {
            Axis::X => self.x,
            Axis::Y => self.y,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        ExpMonomial {
            x: self.x + other.x,
            y: self.y + other.y,
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        ExpMonomial {
            x: self.x - other.x,
            y: self.y - other.y,
        }
    }

    pub fn inv(&self) -> Self {
        ExpMonomial {
            x: -self.x,
            y: -self.y,
        }
    }

    /// Exponent as a linear form, e.g. `2x-y`; `None` for the unit.
    pub fn linear_form(&self, latex: bool) -> Option<String> {
        fn part(c: Rational64, var: &str, first: bool, latex: bool) -> String {
            if c.is_zero() {
                return String::new();
            }
            let sign = if c.is_negative() {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let a = c.abs();
            let mag = if a.is_one() {
                String::new()
            } else if a.is_integer() {
                a.to_integer().to_string()
            } else if latex {
                format!("\\frac{{{}}}{{{}}}", a.numer(), a.denom())
            } else {
                format!("{}/{}*", a.numer(), a.denom())
            };
            format!("{sign}{mag}{var}")
        }
        if self.is_one() {
            return None;
        }
        let xs = part(self.x, "x", true, latex);
        let ys = part(self.y, "y", xs.is_empty(), latex);
        Some(format!("{xs}{ys}"))
    }
}

pub(crate) fn exponent_scalar(r: Rational64) -> FieldScalar {
    FieldScalar::from_rational(BigRational::new(
        BigInt::from(*r.numer()),
        BigInt::from(*r.denom()),
    ))
}

/// Sparse exponential Laurent polynomial. No stored coefficient is zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<ExpMonomial, FieldScalar>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(FieldScalar::one())
    }

    pub fn constant(c: FieldScalar) -> Self {
        Self::monomial(ExpMonomial::ONE, c)
    }

    pub fn monomial(m: ExpMonomial, c: FieldScalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LaurentPoly { terms }
    }

    /// `e^{rx+sy}` with integer exponents.
    pub fn exp(r: i64, s: i64) -> Self {
        Self::monomial(ExpMonomial::int(r, s), FieldScalar::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (ExpMonomial, FieldScalar)>>(iter: I) -> Self {
        let mut p = LaurentPoly::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: ExpMonomial, c: FieldScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = &*existing + &c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExpMonomial, &FieldScalar)> {
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

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn as_constant(&self) -> Option<FieldScalar> {
        match self.terms.len() {
            0 => Some(FieldScalar::zero()),
            1 => self
                .terms
                .iter()
                .next()
                .filter(|(m, _)| m.is_one())
                .map(|(_, c)| c.clone()),
            _ => None,
        }
    }

    pub fn as_monomial(&self) -> Option<(ExpMonomial, FieldScalar)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (*m, c.clone()))
        } else {
            None
        }
    }

    /// Lex-largest term.
    pub fn leading(&self) -> Option<(&ExpMonomial, &FieldScalar)> {
        self.terms.iter().next_back()
    }

    /// Lex-smallest term.
    pub fn trailing(&self) -> Option<(&ExpMonomial, &FieldScalar)> {
        self.terms.iter().next()
    }

    /// Componentwise minimum and maximum exponents.
    pub fn exponent_box(&self) -> Option<(ExpMonomial, ExpMonomial)> {
        let mut it = self.terms.keys();
        let first = *it.next()?;
        let (mut lo, mut hi) = (first, first);
        for m in it {
            lo.x = lo.x.min(m.x);
            lo.y = lo.y.min(m.y);
            hi.x = hi.x.max(m.x);
            hi.y = hi.y.max(m.y);
        }
        Some((lo, hi))
    }

    pub fn scale(&self, c: &FieldScalar) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    /// Multiplication by a monomial.
    pub fn shift(&self, by: &ExpMonomial) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.mul(by), a.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = LaurentPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `δ_x(u^r v^s) = r u^r v^s`, `δ_y(u^r v^s) = s u^r v^s`.
    pub fn derive(&self, axis: Axis) -> Self {
        LaurentPoly::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| (*m, c * &exponent_scalar(m.exponent(axis)))),
        )
    }

    /// Quotient when `divisor` divides `self` exactly, `None` otherwise.
    pub fn exact_div(&self, divisor: &LaurentPoly) -> Option<LaurentPoly> {
        let (dlead, dlc) = divisor.leading()?;
        let (dlead, dlc) = (*dlead, dlc.clone());
        if self.is_zero() {
            return Some(LaurentPoly::zero());
        }
        if divisor.len() == 1 {
            let inv = dlc.inv()?;
            return Some(self.shift(&dlead.inv()).scale(&inv));
        }
        // The Newton polytope of the quotient is bounded by the box
        // difference, which also guarantees termination.
        let (alo, ahi) = self.exponent_box()?;
        let (blo, bhi) = divisor.exponent_box()?;
        let (qlo, qhi) = (alo.div(&blo), ahi.div(&bhi));
        let dinv = dlc.inv()?;
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero();
        while let Some((rlead, rlc)) = rem.leading() {
            let qm = rlead.div(&dlead);
            if qm.x < qlo.x || qm.y < qlo.y || qm.x > qhi.x || qm.y > qhi.y {
                return None;
            }
            let qc = rlc * &dinv;
            rem = &rem - &divisor.shift(&qm).scale(&qc);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Render with `e^x`-style monomials.
    pub fn render(&self, latex: bool) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        // descending lex order reads more naturally
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let exp = m.linear_form(latex).map(|e| {
                if latex {
                    if e.len() == 1 {
                        format!("e^{e}")
                    } else {
                        format!("e^{{{e}}}")
                    }
                } else if e.len() == 1 {
                    format!("e^{e}")
                } else {
                    format!("e^({e})")
                }
            });
            let neg = matches!(c.real_sign(), Some(std::cmp::Ordering::Less)) && c.is_rational();
            let mag = if neg { -c } else { c.clone() };
            let coeff = if latex {
                mag.to_latex()
            } else {
                mag.to_string()
            };
            let coeff = if !mag.is_rational() {
                format!("({coeff})")
            } else {
                coeff
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match exp {
                Some(e) if mag.is_one() => out.push_str(&e),
                Some(e) if latex => out.push_str(&format!("{coeff}{e}")),
                Some(e) => out.push_str(&format!("{coeff}*{e}")),
                None => out.push_str(&coeff),
            }
        }
        if latex {
            out = out.replace(" ", "");
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}
