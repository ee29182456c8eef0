//! Differential operators `Σ c_ab ∂x^a ∂y^b` with coefficients on the left,
//! and 2×2 matrices of them.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::coeff::CoeffElem;
use crate::error::Result;
use crate::module::BAElement;
use crate::scalar::FieldScalar;
use crate::surface::Session;

/// Map `(a, b) → c_ab`; never stores a zero coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DiffOp {
    terms: BTreeMap<(u32, u32), CoeffElem>,
}

impl DiffOp {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::coeff(CoeffElem::one())
    }

    /// Multiplication by a function.
    pub fn coeff(c: CoeffElem) -> Self {
        Self::term(0, 0, c)
    }

    /// `c·∂x^a ∂y^b`.
    pub fn term(a: u32, b: u32, c: CoeffElem) -> Self {
        let mut out = Self::zero();
        out.add_term(a, b, c);
        out
    }

    pub fn dx() -> Self {
        Self::term(1, 0, CoeffElem::one())
    }

    pub fn dy() -> Self {
        Self::term(0, 1, CoeffElem::one())
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), CoeffElem)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for ((a, b), c) in iter {
            out.add_term(a, b, c);
        }
        out
    }

    pub fn add_term(&mut self, a: u32, b: u32, c: CoeffElem) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&(a, b)) {
            Some(old) => {
                let sum = &*old + &c;
                if sum.is_zero() {
                    self.terms.remove(&(a, b));
                } else {
                    *old = sum;
                }
            }
            None => {
                self.terms.insert((a, b), c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &CoeffElem)> {
        self.terms.iter()
    }

    pub fn get(&self, a: u32, b: u32) -> CoeffElem {
        self.terms.get(&(a, b)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest `a + b`; 0 for the zero operator.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(|(a, b)| a + b).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &CoeffElem) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, v)| (*k, c * v)))
    }

    pub fn scale_scalar(&self, c: &FieldScalar) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, v)| (*k, v.scale(c))))
    }

    /// `self ∘ other`, moving derivatives past coefficients with the
    /// Leibniz rule.
    pub fn compose(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&(a, b), c) in &self.terms {
            for (&(p, q), e) in &other.terms {
                for i in 0..=a {
                    for j in 0..=b {
                        let de = e.derive_n(i, j);
                        if de.is_zero() {
                            continue;
                        }
                        let w = binomial(a, i) * binomial(b, j);
                        out.add_term(
                            a - i + p,
                            b - j + q,
                            (c * &de).scale(&FieldScalar::from_int(w)),
                        );
                    }
                }
            }
        }
        out
    }

    /// `[self, other]`.
    pub fn commutator(&self, other: &Self) -> Self {
        &self.compose(other) - &other.compose(self)
    }

    /// Left action on a module element: pole order grows by `order()`.
    pub fn apply(&self, e: &BAElement, session: &Session) -> Result<BAElement> {
        let target = e.order() + self.order() as usize;
        let mut acc = BAElement::zero(target);
        for (&(a, b), c) in &self.terms {
            let t = e.derive_n(a, b, session).lift(target, session)?.scale(c);
            acc = acc.add(&t, session)?;
        }
        Ok(acc)
    }

    /// Plain-text rendering, e.g. `(1/4)*dx + (1/4)*dy`.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut keys: Vec<&(u32, u32)> = self.terms.keys().collect();
        keys.sort_by(|x, y| display_order(x, y));
        keys.iter()
            .map(|k| {
                let c = &self.terms[k];
                let d = partial_text(k.0, k.1);
                match (d.is_empty(), c.is_one()) {
                    (true, _) => format!("({c})"),
                    (false, true) => d,
                    (false, false) => format!("({c})*{d}"),
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Total degree descending, then `∂x`-degree descending.
pub fn display_order(x: &(u32, u32), y: &(u32, u32)) -> std::cmp::Ordering {
    (y.0 + y.1).cmp(&(x.0 + x.1)).then(y.0.cmp(&x.0))
}

fn partial_text(a: u32, b: u32) -> String {
    let mut parts = Vec::new();
    match a {
        0 => {}
        1 => parts.push("dx".to_string()),
        a => parts.push(format!("dx^{a}")),
    }
    match b {
        0 => {}
        1 => parts.push("dy".to_string()),
        b => parts.push(format!("dy^{b}")),
    }
    parts.join("*")
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl<'a> Add<&'a DiffOp> for &'a DiffOp {
    type Output = DiffOp;
    fn add(self, rhs: &DiffOp) -> DiffOp {
        let mut out = self.clone();
        for (&(a, b), c) in &rhs.terms {
            out.add_term(a, b, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a DiffOp> for &'a DiffOp {
    type Output = DiffOp;
    fn sub(self, rhs: &DiffOp) -> DiffOp {
        self + &(-rhs)
    }
}

impl Neg for &DiffOp {
    type Output = DiffOp;
    fn neg(self) -> DiffOp {
        DiffOp {
            terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }
}

impl<'a> Mul<&'a DiffOp> for &'a DiffOp {
    type Output = DiffOp;
    fn mul(self, rhs: &DiffOp) -> DiffOp {
        self.compose(rhs)
    }
}

/// 2×2 matrix of differential operators, indexed from 0.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MatrixDiffOp {
    pub e: [[DiffOp; 2]; 2],
}

impl MatrixDiffOp {
    pub fn new(e: [[DiffOp; 2]; 2]) -> Self {
        MatrixDiffOp { e }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::diagonal(DiffOp::identity())
    }

    /// `d·I`.
    pub fn diagonal(d: DiffOp) -> Self {
        MatrixDiffOp {
            e: [[d.clone(), DiffOp::zero()], [DiffOp::zero(), d]],
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> &DiffOp {
        &self.e[i][j]
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().flatten().all(DiffOp::is_zero)
    }

    pub fn order(&self) -> u32 {
        self.e
            .iter()
            .flatten()
            .map(DiffOp::order)
            .max()
            .unwrap_or(0)
    }

    fn map(&self, f: impl Fn(&DiffOp) -> DiffOp) -> Self {
        MatrixDiffOp {
            e: [
                [f(&self.e[0][0]), f(&self.e[0][1])],
                [f(&self.e[1][0]), f(&self.e[1][1])],
            ],
        }
    }

    pub fn scale_scalar(&self, c: &FieldScalar) -> Self {
        self.map(|d| d.scale_scalar(c))
    }

    /// Matrix product with entries composed as operators.
    pub fn compose(&self, other: &Self) -> Self {
        let entry = |i: usize, j: usize| {
            &self.e[i][0].compose(&other.e[0][j]) + &self.e[i][1].compose(&other.e[1][j])
        };
        MatrixDiffOp {
            e: [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]],
        }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &self.compose(other) - &other.compose(self)
    }

    /// Row-wise action on a pair of module elements of equal pole order.
    pub fn apply(&self, psi: &[BAElement; 2], session: &Session) -> Result<[BAElement; 2]> {
        let n = psi[0].order().max(psi[1].order());
        let target = n + self.order() as usize;
        let row = |i: usize| -> Result<BAElement> {
            let a = self.e[i][0].apply(&psi[0], session)?;
            let b = self.e[i][1].apply(&psi[1], session)?;
            a.add(&b, session)?.lift(target, session)
        };
        Ok([row(0)?, row(1)?])
    }
}

impl<'a> Add<&'a MatrixDiffOp> for &'a MatrixDiffOp {
    type Output = MatrixDiffOp;
    fn add(self, rhs: &MatrixDiffOp) -> MatrixDiffOp {
        MatrixDiffOp {
            e: [
                [&self.e[0][0] + &rhs.e[0][0], &self.e[0][1] + &rhs.e[0][1]],
                [&self.e[1][0] + &rhs.e[1][0], &self.e[1][1] + &rhs.e[1][1]],
            ],
        }
    }
}

impl<'a> Sub<&'a MatrixDiffOp> for &'a MatrixDiffOp {
    type Output = MatrixDiffOp;
    fn sub(self, rhs: &MatrixDiffOp) -> MatrixDiffOp {
        MatrixDiffOp {
            e: [
                [&self.e[0][0] - &rhs.e[0][0], &self.e[0][1] - &rhs.e[0][1]],
                [&self.e[1][0] - &rhs.e[1][0], &self.e[1][1] - &rhs.e[1][1]],
            ],
        }
    }
}

impl<'a> Mul<&'a MatrixDiffOp> for &'a MatrixDiffOp {
    type Output = MatrixDiffOp;
    fn mul(self, rhs: &MatrixDiffOp) -> MatrixDiffOp {
        self.compose(rhs)
    }
}
