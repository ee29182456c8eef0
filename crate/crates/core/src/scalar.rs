//! Exact ground field: the rationals, or one quadratic extension `Q(√d)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Element of `Q` or of a quadratic extension `Q(√d)`.
///
/// The representation is canonical: a `QuadExt` never carries a zero
/// irrational part, so structural equality is field equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldScalar {
    Rational(BigRational),
    QuadExt(QuadSurd),
}

/// `a + b√d` with `b ≠ 0` and `d` square-free, `d ∉ {0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadSurd {
    a: BigRational,
    b: BigRational,
    d: i64,
}

impl QuadSurd {
    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn irrational_part(&self) -> &BigRational {
        &self.b
    }

    pub fn radicand(&self) -> i64 {
        self.d
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl FieldScalar {
    pub fn zero() -> Self {
        FieldScalar::Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        FieldScalar::Rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        FieldScalar::Rational(rat(n))
    }

    /// `p/q`, reduced. Panics if `q == 0`.
    pub fn frac(p: i64, q: i64) -> Self {
        FieldScalar::Rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        FieldScalar::Rational(r)
    }

    /// `a + b√d`; demoted to a rational when `b == 0`.
    ///
    /// `d` must be square-free and different from 0 and 1; use
    /// [`FieldScalar::try_quadratic`] for unchecked input.
    pub fn quadratic(a: BigRational, b: BigRational, d: i64) -> Self {
        debug_assert!(d != 0 && d != 1, "radicand must not be 0 or 1");
        if b.is_zero() {
            FieldScalar::Rational(a)
        } else {
            FieldScalar::QuadExt(QuadSurd { a, b, d })
        }
    }

    /// Validating constructor for `a + b√d` coming from user input.
    pub fn try_quadratic(a: BigRational, b: BigRational, d: i64) -> Result<Self, Error> {
        let (core, square) = squarefree_decompose(&BigInt::from(d));
        if d == 0 || core.is_one() || !square.is_one() {
            return Err(Error::InvalidRadicand(d));
        }
        Ok(Self::quadratic(a, b, d))
    }

    /// `√d` itself.
    pub fn sqrt_of(d: i64) -> Self {
        Self::quadratic(BigRational::zero(), BigRational::one(), d)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, FieldScalar::Rational(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, FieldScalar::Rational(r) if r.is_one())
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, FieldScalar::Rational(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldScalar::Rational(r) => Some(r),
            FieldScalar::QuadExt(_) => None,
        }
    }

    /// Radicand of the extension this element lives in, if irrational.
    pub fn extension(&self) -> Option<i64> {
        match self {
            FieldScalar::Rational(_) => None,
            FieldScalar::QuadExt(q) => Some(q.d),
        }
    }

    fn parts(&self) -> (BigRational, BigRational, Option<i64>) {
        match self {
            FieldScalar::Rational(r) => (r.clone(), BigRational::zero(), None),
            FieldScalar::QuadExt(q) => (q.a.clone(), q.b.clone(), Some(q.d)),
        }
    }

    fn common_ext(&self, other: &Self) -> Option<i64> {
        match (self.extension(), other.extension()) {
            (None, None) => None,
            (Some(d), None) | (None, Some(d)) => Some(d),
            (Some(d1), Some(d2)) => {
                assert_eq!(
                    d1, d2,
                    "mixing incompatible quadratic extensions Q(√{d1}) and Q(√{d2})"
                );
                Some(d1)
            }
        }
    }

    fn assemble(a: BigRational, b: BigRational, d: Option<i64>) -> Self {
        match d {
            Some(d) => Self::quadratic(a, b, d),
            None => FieldScalar::Rational(a),
        }
    }

    /// Galois conjugate `a − b√d`.
    pub fn conjugate(&self) -> Self {
        match self {
            FieldScalar::Rational(_) => self.clone(),
            FieldScalar::QuadExt(q) => Self::quadratic(q.a.clone(), -q.b.clone(), q.d),
        }
    }

    /// Field norm `a² − d b²`.
    pub fn norm(&self) -> BigRational {
        match self {
            FieldScalar::Rational(r) => r * r,
            FieldScalar::QuadExt(q) => &q.a * &q.a - rat(q.d) * &q.b * &q.b,
        }
    }

    pub fn inv(&self) -> Option<Self> {
        match self {
            FieldScalar::Rational(r) if r.is_zero() => None,
            FieldScalar::Rational(r) => Some(FieldScalar::Rational(r.recip())),
            FieldScalar::QuadExt(q) => {
                let n = self.norm();
                Some(Self::quadratic(&q.a / &n, -(&q.b / &n), q.d))
            }
        }
    }

    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self * &i)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// A square root, if one exists in `Q`, in `Q(√s)` for a rational
    /// radicand, or in this element's own extension.
    pub fn sqrt(&self) -> Option<Self> {
        match self {
            FieldScalar::Rational(r) => Some(rational_sqrt(r)?),
            FieldScalar::QuadExt(q) => {
                let n = rational_square_root(&self.norm())?;
                let two = rat(2);
                for cand in [(&q.a + &n) / &two, (&q.a - &n) / &two] {
                    if let Some(p) = rational_square_root(&cand) {
                        if p.is_zero() {
                            continue;
                        }
                        let s = &q.b / (&two * &p);
                        let root = Self::quadratic(p, s, q.d);
                        if &(&root * &root) == self {
                            return Some(root);
                        }
                    }
                }
                None
            }
        }
    }

    /// Sign under the real embedding with `√d > 0`. `None` for imaginary
    /// extensions.
    pub fn real_sign(&self) -> Option<Ordering> {
        match self {
            FieldScalar::Rational(r) => Some(r.cmp(&BigRational::zero())),
            FieldScalar::QuadExt(q) if q.d < 0 => None,
            FieldScalar::QuadExt(q) => {
                let sa = q.a.cmp(&BigRational::zero());
                let sb = q.b.cmp(&BigRational::zero());
                if sa == Ordering::Equal || sa == sb {
                    return Some(sb);
                }
                let a2 = &q.a * &q.a;
                let db2 = rat(q.d) * &q.b * &q.b;
                Some(if a2 > db2 { sa } else { sb })
            }
        }
    }

    /// Order under the real embedding with `√d > 0`.
    pub fn cmp_real(&self, other: &Self) -> Option<Ordering> {
        (self - other).real_sign()
    }

    /// Deterministic total order used for tie-breaking: rational part,
    /// then irrational part.
    pub fn cmp_lex(&self, other: &Self) -> Ordering {
        let (a1, b1, _) = self.parts();
        let (a2, b2, _) = other.parts();
        a1.cmp(&a2).then(b1.cmp(&b2))
    }

    /// LaTeX rendering, e.g. `-2-\sqrt{2}` or `\frac{1}{4}`.
    pub fn to_latex(&self) -> String {
        match self {
            FieldScalar::Rational(r) => rational_latex(r),
            FieldScalar::QuadExt(q) => {
                let mut s = String::new();
                if !q.a.is_zero() {
                    s.push_str(&rational_latex(&q.a));
                    s.push(if q.b.is_negative() { '-' } else { '+' });
                } else if q.b.is_negative() {
                    s.push('-');
                }
                let b = q.b.abs();
                if !b.is_one() {
                    s.push_str(&rational_latex(&b));
                }
                s.push_str(&format!("\\sqrt{{{}}}", q.d));
                s
            }
        }
    }
}

fn rational_latex(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        let sign = if r.is_negative() { "-" } else { "" };
        format!("{sign}\\frac{{{}}}{{{}}}", r.numer().abs(), r.denom())
    }
}

/// Writes `n = core · square²` with `core` square-free (sign kept in `core`).
pub fn squarefree_decompose(n: &BigInt) -> (BigInt, BigInt) {
    if n.is_zero() {
        return (BigInt::zero(), BigInt::one());
    }
    let sign = if n.is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    let mut rest = n.abs();
    let mut core = BigInt::one();
    let mut square = BigInt::one();
    let mut p = BigInt::from(2);
    // Trial division up to the cube root; what remains is then a prime,
    // a product of two distinct primes, or the square of a prime.
    while &p * &p * &p <= rest {
        let mut e = 0u32;
        while rest.is_multiple_of(&p) {
            rest /= &p;
            e += 1;
        }
        for _ in 0..e / 2 {
            square *= &p;
        }
        if e % 2 == 1 {
            core *= &p;
        }
        p += 1;
    }
    let r = rest.sqrt();
    if &r * &r == rest && !rest.is_one() {
        square *= r;
    } else {
        core *= rest;
    }
    (sign * core, square)
}

fn rational_square_root(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &n * &n == *r.numer() && &d * &d == *r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// `√r` in `Q` or in `Q(√s)` with `s` the square-free part of `r`.
fn rational_sqrt(r: &BigRational) -> Option<FieldScalar> {
    if r.is_zero() {
        return Some(FieldScalar::zero());
    }
    if let Some(q) = rational_square_root(r) {
        return Some(FieldScalar::Rational(q));
    }
    // √(p/q) = √(p·q)/q
    let pq = r.numer() * r.denom();
    let (core, square) = squarefree_decompose(&pq);
    let d = core.to_i64()?;
    let coeff = BigRational::new(square, r.denom().clone());
    Some(FieldScalar::quadratic(BigRational::zero(), coeff, d))
}

impl Default for FieldScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for FieldScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for FieldScalar {
    fn from(r: BigRational) -> Self {
        FieldScalar::Rational(r)
    }
}

impl FromStr for FieldScalar {
    type Err = Error;

    /// Parses `p`, `p/q` (optionally signed, whitespace tolerated).
    fn from_str(s: &str) -> Result<Self, Error> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("not a rational number: {s:?}"));
        let (p, q) = match t.split_once('/') {
            Some((p, q)) => (p, q),
            None => (t.as_str(), "1"),
        };
        let p: BigInt = p.parse().map_err(|_| bad())?;
        let q: BigInt = q.parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(FieldScalar::Rational(BigRational::new(p, q)))
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldScalar::Rational(r) => write!(f, "{r}"),
            FieldScalar::QuadExt(q) => {
                let b = q.b.abs();
                let sign = if q.b.is_negative() { "-" } else { "+" };
                let surd = if b.is_one() {
                    format!("sqrt({})", q.d)
                } else {
                    format!("{b}*sqrt({})", q.d)
                };
                if q.a.is_zero() {
                    if q.b.is_negative() {
                        write!(f, "-{surd}")
                    } else {
                        write!(f, "{surd}")
                    }
                } else {
                    write!(f, "{} {sign} {surd}", q.a)
                }
            }
        }
    }
}

impl<'a> Add<&'a FieldScalar> for &'a FieldScalar {
    type Output = FieldScalar;
    fn add(self, rhs: &FieldScalar) -> FieldScalar {
        if let (FieldScalar::Rational(a), FieldScalar::Rational(b)) = (self, rhs) {
            return FieldScalar::Rational(a + b);
        }
        let d = self.common_ext(rhs);
        let (a1, b1, _) = self.parts();
        let (a2, b2, _) = rhs.parts();
        FieldScalar::assemble(a1 + a2, b1 + b2, d)
    }
}

impl<'a> Sub<&'a FieldScalar> for &'a FieldScalar {
    type Output = FieldScalar;
    fn sub(self, rhs: &FieldScalar) -> FieldScalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a FieldScalar> for &'a FieldScalar {
    type Output = FieldScalar;
    fn mul(self, rhs: &FieldScalar) -> FieldScalar {
        if let (FieldScalar::Rational(a), FieldScalar::Rational(b)) = (self, rhs) {
            return FieldScalar::Rational(a * b);
        }
        let d = self.common_ext(rhs);
        let (a1, b1, _) = self.parts();
        let (a2, b2, _) = rhs.parts();
        let dd = rat(d.unwrap_or(0));
        let a = &a1 * &a2 + dd * &b1 * &b2;
        let b = a1 * b2 + a2 * b1;
        FieldScalar::assemble(a, b, d)
    }
}

impl<'a> Div<&'a FieldScalar> for &'a FieldScalar {
    type Output = FieldScalar;
    fn div(self, rhs: &FieldScalar) -> FieldScalar {
        self.checked_div(rhs)
            .expect("division by zero in ground field")
    }
}

impl Neg for &FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        match self {
            FieldScalar::Rational(r) => FieldScalar::Rational(-r.clone()),
            FieldScalar::QuadExt(q) => FieldScalar::QuadExt(QuadSurd {
                a: -q.a.clone(),
                b: -q.b.clone(),
                d: q.d,
            }),
        }
    }
}

impl Neg for FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<FieldScalar> for FieldScalar {
            type Output = FieldScalar;
            fn $m(self, rhs: FieldScalar) -> FieldScalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a FieldScalar> for FieldScalar {
            type Output = FieldScalar;
            fn $m(self, rhs: &FieldScalar) -> FieldScalar {
                (&self).$m(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);
