//! Bihomogeneous forms on `CP¹ × CP¹` and projective points.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::coeff::CoeffElem;
use crate::error::{Error, Result};
use crate::laurent::Axis;
use crate::scalar::FieldScalar;

/// Point `(a:b)` of `CP¹`, stored normalized: the last nonzero coordinate
/// is 1, so projective equality is plain equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    a: FieldScalar,
    b: FieldScalar,
}

impl ProjPoint {
    pub fn new(a: FieldScalar, b: FieldScalar) -> Result<Self> {
        if b.is_zero() {
            if a.is_zero() {
                return Err(Error::InvalidProjectivePoint);
            }
            return Ok(ProjPoint {
                a: FieldScalar::one(),
                b,
            });
        }
        let a = &a / &b;
        Ok(ProjPoint {
            a,
            b: FieldScalar::one(),
        })
    }

    pub fn from_ints(a: i64, b: i64) -> Result<Self> {
        Self::new(a.into(), b.into())
    }

    /// The point at infinity `(1:0)`.
    pub fn infinity() -> Self {
        ProjPoint {
            a: FieldScalar::one(),
            b: FieldScalar::zero(),
        }
    }

    /// Affine point `(a:1)`.
    pub fn affine(a: FieldScalar) -> Self {
        ProjPoint {
            a,
            b: FieldScalar::one(),
        }
    }

    pub fn a(&self) -> &FieldScalar {
        &self.a
    }

    pub fn b(&self) -> &FieldScalar {
        &self.b
    }

    /// `a₁b₂ − a₂b₁`; zero iff the points coincide.
    pub fn cross(&self, other: &Self) -> FieldScalar {
        &(&self.a * &other.b) - &(&other.a * &self.b)
    }

    /// Affine coordinate `a/b`, `None` at infinity.
    pub fn ratio(&self) -> Option<FieldScalar> {
        if self.b.is_zero() {
            None
        } else {
            Some(self.a.clone())
        }
    }

    pub fn to_latex(&self) -> String {
        format!("{}:{}", self.a.to_latex(), self.b.to_latex())
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} : {})", self.a, self.b)
    }
}

/// Which factor of `CP¹ × CP¹` a substitution acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Slot {
    First,
    Second,
}

/// `Σ c[k][l] z₁^k w₁^{n−k} z₂^l w₂^{n−l}`, bidegree `(n, n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BiForm {
    n: usize,
    c: Vec<Vec<CoeffElem>>,
}

impl BiForm {
    /// Builds a form from its `(n+1) × (n+1)` coefficient grid.
    pub fn new(c: Vec<Vec<CoeffElem>>) -> Result<Self> {
        let n = c.len().checked_sub(1).ok_or(Error::BidegreeMismatch {
            expected: 1,
            found: 0,
        })?;
        for row in &c {
            if row.len() != n + 1 {
                return Err(Error::BidegreeMismatch {
                    expected: n + 1,
                    found: row.len(),
                });
            }
        }
        Ok(BiForm { n, c })
    }

    pub fn zero(n: usize) -> Self {
        BiForm {
            n,
            c: vec![vec![CoeffElem::zero(); n + 1]; n + 1],
        }
    }

    pub fn one() -> Self {
        Self::constant(CoeffElem::one())
    }

    /// Bidegree `(0, 0)` form.
    pub fn constant(c: CoeffElem) -> Self {
        BiForm {
            n: 0,
            c: vec![vec![c]],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> CoeffElem) -> Self {
        BiForm {
            n,
            c: (0..=n)
                .map(|k| (0..=n).map(|l| f(k, l)).collect())
                .collect(),
        }
    }

    /// Single term `coeff · z₁^k w₁^{n−k} z₂^l w₂^{n−l}`.
    pub fn monomial(n: usize, k: usize, l: usize, coeff: CoeffElem) -> Self {
        assert!(k <= n && l <= n, "monomial exponent exceeds bidegree");
        let mut out = Self::zero(n);
        out.c[k][l] = coeff;
        out
    }

    /// `α z₁z₂ + β z₁w₂ + γ w₁z₂ + δ w₁w₂`.
    pub fn bilinear(alpha: CoeffElem, beta: CoeffElem, gamma: CoeffElem, delta: CoeffElem) -> Self {
        BiForm {
            n: 1,
            c: vec![vec![delta, gamma], vec![beta, alpha]],
        }
    }

    /// Constant-coefficient bilinear form.
    pub fn bilinear_const(
        alpha: FieldScalar,
        beta: FieldScalar,
        gamma: FieldScalar,
        delta: FieldScalar,
    ) -> Self {
        Self::bilinear(alpha.into(), beta.into(), gamma.into(), delta.into())
    }

    /// `(α, β, γ, δ)` of a bidegree (1,1) form.
    pub fn bilinear_coeffs(&self) -> Option<[&CoeffElem; 4]> {
        if self.n != 1 {
            return None;
        }
        Some([&self.c[1][1], &self.c[1][0], &self.c[0][1], &self.c[0][0]])
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, k: usize, l: usize) -> &CoeffElem {
        &self.c[k][l]
    }

    pub fn set_coeff(&mut self, k: usize, l: usize, value: CoeffElem) {
        self.c[k][l] = value;
    }

    /// Coefficients in `(k, l)` row-major order.
    pub fn coeffs(&self) -> impl Iterator<Item = (usize, usize, &CoeffElem)> {
        self.c
            .iter()
            .enumerate()
            .flat_map(|(k, row)| row.iter().enumerate().map(move |(l, c)| (k, l, c)))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs().all(|(_, _, c)| c.is_zero())
    }

    /// Number of nonzero coefficients.
    pub fn support(&self) -> usize {
        self.coeffs().filter(|(_, _, c)| !c.is_zero()).count()
    }

    /// True when every coefficient is a ground-field constant.
    pub fn is_constant(&self) -> bool {
        self.coeffs().all(|(_, _, c)| c.as_scalar().is_some())
    }

    /// Coefficient grid as ground-field constants.
    pub fn constant_coeffs(&self) -> Result<Vec<Vec<FieldScalar>>> {
        self.c
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| c.as_scalar().ok_or(Error::NonConstantForm))
                    .collect()
            })
            .collect()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self::from_fn(self.n, |k, l| &self.c[k][l] + &other.c[k][l]))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self::from_fn(self.n, |k, l| &self.c[k][l] - &other.c[k][l]))
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::BidegreeMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    pub fn scale(&self, s: &CoeffElem) -> Self {
        Self::from_fn(self.n, |k, l| &self.c[k][l] * s)
    }

    pub fn scale_scalar(&self, s: &FieldScalar) -> Self {
        Self::from_fn(self.n, |k, l| self.c[k][l].scale(s))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Coefficientwise derivation in `x` or `y`.
    pub fn derive(&self, axis: Axis) -> Self {
        Self::from_fn(self.n, |k, l| self.c[k][l].derive(axis))
    }

    /// Substitutes `(a:b)` into one slot. Entry `i` of the result is the
    /// coefficient of `t₁^i t₂^{n−i}` in the free slot.
    pub fn eval_line(
        &self,
        slot: Slot,
        point: (&FieldScalar, &FieldScalar),
    ) -> Result<Vec<CoeffElem>> {
        let (a, b) = point;
        if a.is_zero() && b.is_zero() {
            return Err(Error::InvalidProjectivePoint);
        }
        let n = self.n;
        let weights: Vec<FieldScalar> = (0..=n)
            .map(|k| &a.pow(k as u32) * &b.pow((n - k) as u32))
            .collect();
        let out = (0..=n)
            .map(|i| {
                let mut acc = CoeffElem::zero();
                for (j, w) in weights.iter().enumerate() {
                    if w.is_zero() {
                        continue;
                    }
                    let c = match slot {
                        Slot::First => &self.c[j][i],
                        Slot::Second => &self.c[i][j],
                    };
                    if !c.is_zero() {
                        acc = &acc + &c.scale(w);
                    }
                }
                acc
            })
            .collect();
        Ok(out)
    }

    /// [`BiForm::eval_line`] at a normalized projective point.
    pub fn restrict(&self, slot: Slot, p: &ProjPoint) -> Vec<CoeffElem> {
        self.eval_line(slot, (p.a(), p.b()))
            .expect("normalized point is never (0:0)")
    }

    /// Value at `(p, q)` in `CP¹ × CP¹` for the given representatives.
    pub fn eval(&self, p: &ProjPoint, q: &ProjPoint) -> CoeffElem {
        let line = self.restrict(Slot::First, p);
        let n = self.n;
        let mut acc = CoeffElem::zero();
        for (l, c) in line.iter().enumerate() {
            let w = &q.a().pow(l as u32) * &q.b().pow((n - l) as u32);
            if !w.is_zero() && !c.is_zero() {
                acc = &acc + &c.scale(&w);
            }
        }
        acc
    }

    /// Plain-text rendering such as `z1*z2 + (e^x)*w1*w2`.
    pub fn render(&self) -> String {
        let n = self.n;
        let mut parts = Vec::new();
        for k in (0..=n).rev() {
            for l in (0..=n).rev() {
                let c = &self.c[k][l];
                if c.is_zero() {
                    continue;
                }
                let mut vars = Vec::new();
                for (name, e) in [("z1", k), ("w1", n - k), ("z2", l), ("w2", n - l)] {
                    match e {
                        0 => {}
                        1 => vars.push(name.to_string()),
                        e => vars.push(format!("{name}^{e}")),
                    }
                }
                let vars = vars.join("*");
                let term = match (c.is_one(), vars.is_empty()) {
                    (true, true) => "1".to_string(),
                    (true, false) => vars,
                    (false, true) => format!("({c})"),
                    (false, false) => format!("({c})*{vars}"),
                };
                parts.push(term);
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for BiForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl<'a> Add<&'a BiForm> for &'a BiForm {
    type Output = BiForm;
    /// Panics on mismatched bidegrees; see [`BiForm::checked_add`].
    fn add(self, rhs: &BiForm) -> BiForm {
        self.checked_add(rhs)
            .expect("bidegree mismatch in BiForm addition")
    }
}

impl<'a> Sub<&'a BiForm> for &'a BiForm {
    type Output = BiForm;
    fn sub(self, rhs: &BiForm) -> BiForm {
        self.checked_sub(rhs)
            .expect("bidegree mismatch in BiForm subtraction")
    }
}

impl Neg for &BiForm {
    type Output = BiForm;
    fn neg(self) -> BiForm {
        BiForm::from_fn(self.n, |k, l| -&self.c[k][l])
    }
}

impl<'a> Mul<&'a BiForm> for &'a BiForm {
    type Output = BiForm;
    fn mul(self, rhs: &BiForm) -> BiForm {
        let n = self.n + rhs.n;
        let mut out = BiForm::zero(n);
        for (k1, l1, a) in self.coeffs() {
            if a.is_zero() {
                continue;
            }
            for (k2, l2, b) in rhs.coeffs() {
                if b.is_zero() {
                    continue;
                }
                let cell = &mut out.c[k1 + k2][l1 + l2];
                *cell = &*cell + &(a * b);
            }
        }
        out
    }
}
