//! Elements `f̃ / fⁿ · exp(x F₁ + y F₂)` of the module over the coefficient
//! ring, stored by pole order and numerator form.

use std::cmp::Ordering;

use num_integer::Integer;
use num_rational::Rational64;

use crate::biform::BiForm;
use crate::coeff::CoeffElem;
use crate::error::{Error, Result};
use crate::laurent::{Axis, ExpMonomial, LaurentPoly};
use crate::linalg::{nullspace, rank};
use crate::scalar::FieldScalar;
use crate::surface::{constant_ratio, Session, SurfacePoint};

/// Outcome of the membership test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// Both edge restrictions vanish, so every eigenvalue tag fits.
    Any,
    Lambda(FieldScalar),
}

impl Membership {
    fn tag(self) -> Option<FieldScalar> {
        match self {
            Membership::Any => None,
            Membership::Lambda(l) => Some(l),
        }
    }
}

/// Tests `num(p₁,t) − Λ·Aⁿ·e^{−c₁x−c₂y}·num(t,p₂) ≡ 0` for a constant `Λ`,
/// where `n` is the bidegree of `num`.
pub fn membership_check(num: &BiForm, session: &Session) -> Option<Membership> {
    let g = session.gluing();
    let r1 = g.first_restriction(num);
    let r2 = g.second_restriction(num);
    let r1_zero = r1.iter().all(CoeffElem::is_zero);
    let r2_zero = r2.iter().all(CoeffElem::is_zero);
    match (r1_zero, r2_zero) {
        (true, true) => Some(Membership::Any),
        (true, false) | (false, true) => None,
        (false, false) => {
            let k = session.edge_factor(num.degree());
            let scaled: Vec<CoeffElem> = r2.iter().map(|c| c * &k).collect();
            constant_ratio(&r1, &scaled).map(Membership::Lambda)
        }
    }
}

/// Module element of pole order `n` with its eigenvalue tag (`None` when
/// both edge restrictions vanish).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BAElement {
    order: usize,
    numerator: BiForm,
    lambda: Option<FieldScalar>,
}

impl BAElement {
    /// Validates membership; the pole order is the numerator's bidegree.
    pub fn new(numerator: BiForm, session: &Session) -> Result<Self> {
        let m = membership_check(&numerator, session).ok_or(Error::NotAModuleElement)?;
        Ok(BAElement {
            order: numerator.degree(),
            numerator,
            lambda: m.tag(),
        })
    }

    pub fn zero(order: usize) -> Self {
        BAElement {
            order,
            numerator: BiForm::zero(order),
            lambda: None,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn numerator(&self) -> &BiForm {
        &self.numerator
    }

    pub fn lambda(&self) -> Option<&FieldScalar> {
        self.lambda.as_ref()
    }

    /// `∂_axis`: numerator becomes `f·δ(f̃) + f_axis·f̃` at order `n + 1`.
    pub fn derive(&self, axis: Axis, session: &Session) -> Self {
        let flow = match axis {
            Axis::X => &session.flow(1).form,
            Axis::Y => &session.flow(2).form,
        };
        let numerator = &(session.f() * &self.numerator.derive(axis)) + &(flow * &self.numerator);
        BAElement {
            order: self.order + 1,
            numerator,
            lambda: self.lambda.clone(),
        }
    }

    /// `∂x^a ∂y^b`.
    pub fn derive_n(&self, a: u32, b: u32, session: &Session) -> Self {
        let mut out = self.clone();
        for _ in 0..a {
            out = out.derive(Axis::X, session);
        }
        for _ in 0..b {
            out = out.derive(Axis::Y, session);
        }
        out
    }

    /// Same function written over `f^target`.
    pub fn lift(&self, target: usize, session: &Session) -> Result<Self> {
        if target < self.order {
            return Err(Error::InvalidLift {
                from: self.order,
                to: target,
            });
        }
        if target == self.order {
            return Ok(self.clone());
        }
        let fk = session.f().pow((target - self.order) as u32);
        Ok(BAElement {
            order: target,
            numerator: &fk * &self.numerator,
            lambda: self.lambda.clone(),
        })
    }

    /// Product with `g / f^m` where `g` has bidegree `(m, m)`.
    pub fn multiply_form(&self, g: &BiForm) -> Self {
        BAElement {
            order: self.order + g.degree(),
            numerator: g * &self.numerator,
            lambda: self.lambda.clone(),
        }
    }

    /// Product with a function of `x, y`.
    pub fn scale(&self, c: &CoeffElem) -> Self {
        if c.is_zero() {
            return Self::zero(self.order);
        }
        BAElement {
            order: self.order,
            numerator: self.numerator.scale(c),
            lambda: self.lambda.clone(),
        }
    }

    /// Sum after lifting both terms to a common pole order.
    pub fn add(&self, other: &Self, session: &Session) -> Result<Self> {
        let lambda = match (&self.lambda, &other.lambda) {
            (Some(a), Some(b)) if a != b => {
                if self.numerator.is_zero() {
                    Some(b.clone())
                } else if other.numerator.is_zero() {
                    Some(a.clone())
                } else {
                    return Err(Error::IncompatibleLambda);
                }
            }
            (Some(a), _) => Some(a.clone()),
            (None, b) => b.clone(),
        };
        let n = self.order.max(other.order);
        let a = self.lift(n, session)?;
        let b = other.lift(n, session)?;
        Ok(BAElement {
            order: n,
            numerator: &a.numerator + &b.numerator,
            lambda,
        })
    }

    /// Equality as functions, comparing at a common pole order.
    pub fn same_function(&self, other: &Self, session: &Session) -> bool {
        let n = self.order.max(other.order);
        let a = self.lift(n, session).expect("n is the max order");
        let b = other.lift(n, session).expect("n is the max order");
        a.numerator == b.numerator
    }
}

/// Constraint matrix of the membership identity at pole order `n` for the
/// given `Λ`: one row per `t`-coefficient, one column per coefficient
/// `(k, l)` of the numerator in row-major order.
pub fn membership_constraints(
    n: usize,
    session: &Session,
    lambda: &FieldScalar,
) -> Vec<Vec<CoeffElem>> {
    let g = session.gluing();
    let mu = session.edge_factor(n).scale(lambda);
    let cols = (n + 1) * (n + 1);
    let mut m = vec![vec![CoeffElem::zero(); cols]; n + 1];
    for k in 0..=n {
        for l in 0..=n {
            let unit = BiForm::monomial(n, k, l, CoeffElem::one());
            let r1 = g.first_restriction(&unit);
            let r2 = g.second_restriction(&unit);
            for i in 0..=n {
                m[i][k * (n + 1) + l] = &r1[i] - &(&r2[i] * &mu);
            }
        }
    }
    m
}

/// Rank of the pole-order-`n` piece: the nullity of the membership
/// constraints on the stratum `Λ = 1`.
pub fn rank_m(n: usize, session: &Session) -> usize {
    rank_m_at(n, session, &FieldScalar::one())
}

pub fn rank_m_at(n: usize, session: &Session, lambda: &FieldScalar) -> usize {
    let m = membership_constraints(n, session, lambda);
    (n + 1) * (n + 1) - rank(&m)
}

/// Two independent elements of pole order 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisPair {
    pub psi: [BAElement; 2],
}

impl BasisPair {
    pub fn new(h1: BiForm, h2: BiForm, session: &Session) -> Result<Self> {
        let psi = [BAElement::new(h1, session)?, BAElement::new(h2, session)?];
        if psi.iter().any(|p| p.order() != 1) {
            return Err(Error::DegenerateModule(
                "basis elements must have pole order 1".into(),
            ));
        }
        if numerator_rank(&[psi[0].numerator(), psi[1].numerator()]) != 2 {
            return Err(Error::DegenerateModule(
                "basis numerators are dependent".into(),
            ));
        }
        Ok(BasisPair { psi })
    }

    pub fn h1(&self) -> &BiForm {
        self.psi[0].numerator()
    }

    pub fn h2(&self) -> &BiForm {
        self.psi[1].numerator()
    }
}

fn numerator_rank(forms: &[&BiForm]) -> usize {
    let rows: Vec<Vec<CoeffElem>> = forms
        .iter()
        .map(|f| f.coeffs().map(|(_, _, c)| c.clone()).collect())
        .collect();
    rank(&rows)
}

/// Deterministic pair of independent pole-order-1 elements.
///
/// Candidates are the product of the two lines through the gluing points,
/// which vanishes on both edges, and the kernel vectors of the `Λ = 1`
/// constraints with denominators cleared and exponents centred. The two
/// independent candidates with the fewest monomials are taken, ties broken
/// by their rendering.
pub fn default_basis(session: &Session) -> Result<BasisPair> {
    let g = session.gluing();
    let (p1, p2) = (g.p1(), g.p2());
    let lines = product_of_lines(p1.a(), p1.b(), p2.a(), p2.b());

    let constraints = membership_constraints(1, session, &FieldScalar::one());
    let mut candidates = vec![lines];
    for v in nullspace(&constraints, 4) {
        let form = BiForm::from_fn(1, |k, l| v[k * 2 + l].clone());
        candidates.push(centre_exponents(&clear_denominators(&form)));
    }
    let mut keyed: Vec<(usize, String, BiForm)> = candidates
        .into_iter()
        .filter(|c| !c.is_zero())
        .map(|c| (monomial_count(&c), c.render(), c))
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));

    let mut chosen: Vec<BiForm> = Vec::new();
    for (_, _, c) in keyed {
        if membership_check(&c, session).is_none() {
            continue;
        }
        let mut trial: Vec<&BiForm> = chosen.iter().collect();
        trial.push(&c);
        if numerator_rank(&trial) == trial.len() {
            chosen.push(c);
            if chosen.len() == 2 {
                let h2 = chosen.pop().expect("two");
                let h1 = chosen.pop().expect("two");
                return BasisPair::new(h1, h2, session);
            }
        }
    }
    Err(Error::DegenerateModule(
        "fewer than two independent elements of pole order 1".into(),
    ))
}

/// `(a₁w₁ − b₁z₁)(b₂z₂ − a₂w₂)`, vanishing on both identified lines.
fn product_of_lines(
    a1: &FieldScalar,
    b1: &FieldScalar,
    a2: &FieldScalar,
    b2: &FieldScalar,
) -> BiForm {
    let l1 = [-b1, a1.clone()]; // (z1, w1)
    let l2 = [b2.clone(), -a2]; // (z2, w2)
    BiForm::bilinear_const(
        &l1[0] * &l2[0],
        &l1[0] * &l2[1],
        &l1[1] * &l2[0],
        &l1[1] * &l2[1],
    )
}

fn monomial_count(f: &BiForm) -> usize {
    f.coeffs()
        .filter(|(_, _, c)| !c.is_zero())
        .map(|(_, _, c)| c.numerator().len() + c.denominator().len() - 1)
        .sum()
}

/// Multiplies by the product of the distinct denominators.
fn clear_denominators(f: &BiForm) -> BiForm {
    let mut dens: Vec<LaurentPoly> = Vec::new();
    for (_, _, c) in f.coeffs() {
        let d = c.denominator();
        if !d.is_one() && !dens.contains(d) {
            dens.push(d.clone());
        }
    }
    let scale = dens.iter().fold(LaurentPoly::one(), |acc, d| &acc * d);
    f.scale(&CoeffElem::laurent(scale))
}

/// Shifts by a monomial so the exponent box of all coefficients is centred
/// at the origin (rounded down).
fn centre_exponents(f: &BiForm) -> BiForm {
    let mut lo: Option<ExpMonomial> = None;
    let mut hi: Option<ExpMonomial> = None;
    for (_, _, c) in f.coeffs() {
        if let Some((l, h)) = c.numerator().exponent_box() {
            lo = Some(lo.map_or(l, |o| componentwise(&o, &l, Ordering::Less)));
            hi = Some(hi.map_or(h, |o| componentwise(&o, &h, Ordering::Greater)));
        }
    }
    let (Some(lo), Some(hi)) = (lo, hi) else {
        return f.clone();
    };
    let mid = |a: Rational64, b: Rational64| -> Rational64 {
        let s = (a + b) / 2;
        if s.is_integer() || a.denom() != &1 || b.denom() != &1 {
            s
        } else {
            Rational64::from_integer(s.numer().div_floor(s.denom()))
        }
    };
    let centre = ExpMonomial::new(mid(lo.x, hi.x), mid(lo.y, hi.y));
    if centre.is_one() {
        return f.clone();
    }
    f.scale(&CoeffElem::monomial(centre.inv()))
}

fn componentwise(a: &ExpMonomial, b: &ExpMonomial, keep: Ordering) -> ExpMonomial {
    let pick = |x: Rational64, y: Rational64| if x.cmp(&y) == keep { x } else { y };
    ExpMonomial::new(pick(a.x, b.x), pick(a.y, b.y))
}

/// `h₁(P)/h₂(P)` as a function of `x, y`.
pub fn ratio_witness(basis: &BasisPair, p: &SurfacePoint) -> Result<CoeffElem> {
    let h1 = basis.h1().eval(&p.first, &p.second);
    let h2 = basis.h2().eval(&p.first, &p.second);
    if h2.is_zero() {
        return Err(Error::WitnessUndefined);
    }
    h1.checked_div(&h2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_biform, parse_coeff};
    use crate::surface::tests::session32;
    use proptest::prelude::*;

    fn form(s: &str) -> BiForm {
        parse_biform(s, 1).unwrap()
    }

    fn h2() -> BiForm {
        form("e^(y-x) z1 z2 + z1 w2 + e^(x-y) w1 w2")
    }

    #[test]
    fn membership_examples() {
        let s = session32();
        assert_eq!(
            membership_check(&h2(), &s),
            Some(Membership::Lambda(FieldScalar::one()))
        );
        assert_eq!(membership_check(&form("w1 z2"), &s), Some(Membership::Any));
        assert_eq!(membership_check(&form("z1 w2"), &s), None);
    }

    #[test]
    fn derivative_examples() {
        let s = session32();
        let psi1 = BAElement::new(form("w1 z2"), &s).unwrap();
        let dx = psi1.derive(Axis::X, &s);
        assert_eq!(dx.order(), 2);
        assert_eq!(dx.numerator(), &(&s.flow(1).form * &form("w1 z2")));
        let dy = psi1.derive(Axis::Y, &s);
        assert_eq!(dy.numerator(), &(&s.flow(2).form * &form("w1 z2")));
    }

    #[test]
    fn lift_examples() {
        let s = session32();
        let psi1 = BAElement::new(form("w1 z2"), &s).unwrap();
        assert_eq!(psi1.lift(1, &s).unwrap(), psi1);
        assert_eq!(
            psi1.lift(2, &s).unwrap().numerator(),
            &(s.f() * &form("w1 z2"))
        );
        assert_eq!(
            psi1.lift(2, &s).unwrap().lift(1, &s),
            Err(Error::InvalidLift { from: 2, to: 1 })
        );
        let psi2 = BAElement::new(h2(), &s).unwrap();
        for k in 1..4 {
            let l = psi2.lift(k, &s).unwrap();
            assert_eq!(
                membership_check(l.numerator(), &s),
                Some(Membership::Lambda(FieldScalar::one()))
            );
        }
    }

    #[test]
    fn multiplication_by_functions() {
        let s = session32();
        let psi1 = BAElement::new(form("w1 z2"), &s).unwrap();
        assert_eq!(psi1.multiply_form(&BiForm::one()), psi1);
        let sq = psi1.multiply_form(&form("w1 z2"));
        assert_eq!(sq.order(), 2);
        assert_eq!(sq.numerator(), &parse_biform("w1^2 z2^2", 2).unwrap());
        let psi2 = BAElement::new(h2(), &s).unwrap();
        let l2 = psi2.multiply_form(&form("w1 z2"));
        assert!(membership_check(l2.numerator(), &s).is_some());
    }

    #[test]
    fn rank_law() {
        let s = session32();
        for n in 1..=5 {
            assert_eq!(rank_m(n, &s), n * (n + 1), "n = {n}");
        }
    }

    #[test]
    fn rank_is_independent_of_nonzero_tag() {
        let s = session32();
        for lambda in [
            FieldScalar::from_int(-3),
            FieldScalar::frac(2, 7),
            FieldScalar::sqrt_of(2),
        ] {
            for n in 1..=3 {
                assert_eq!(
                    rank_m_at(n, &s, &lambda),
                    n * (n + 1),
                    "n = {n}, lambda = {lambda}"
                );
            }
        }
    }

    /// Independent rank oracle: substitute rational values for `e^x, e^y`
    /// and eliminate over Q with the constraint built by hand from the
    /// gluing points (1:0), (0:1): row i reads `c[n][i] − μ·c[i][0]`.
    #[test]
    fn rank_matches_numeric_oracle() {
        use num_rational::BigRational;
        use num_traits::{One, Zero};
        for (u, v) in [(2i64, 3i64), (5, 7)] {
            // μ = A^n e^{−x+y} = v/u
            let mu = BigRational::new(v.into(), u.into());
            for n in 1..=5usize {
                let cols = (n + 1) * (n + 1);
                let mut m = vec![vec![BigRational::zero(); cols]; n + 1];
                for (i, row) in m.iter_mut().enumerate() {
                    row[n * (n + 1) + i] += BigRational::one();
                    row[i * (n + 1)] -= mu.clone();
                }
                // plain Gaussian elimination
                let mut r = 0;
                for c in 0..cols {
                    let Some(p) = (r..=n).find(|&i| !m[i][c].is_zero()) else {
                        continue;
                    };
                    m.swap(r, p);
                    let pivot = m[r].clone();
                    for (i, row) in m.iter_mut().enumerate() {
                        if i != r && !row[c].is_zero() {
                            let f = &row[c] / &pivot[c];
                            for (x, p) in row.iter_mut().zip(&pivot) {
                                *x -= &f * p;
                            }
                        }
                    }
                    r += 1;
                }
                assert_eq!(cols - r, rank_m(n, &session32()));
            }
        }
    }

    #[test]
    fn default_basis_reproduces_printed_pair() {
        let s = session32();
        let b = default_basis(&s).unwrap();
        assert_eq!(b.h1(), &form("w1 z2"));
        assert_eq!(b.h2(), &h2());
        for psi in &b.psi {
            assert!(membership_check(psi.numerator(), &s).is_some());
        }
        assert_eq!(numerator_rank(&[b.h1(), b.h2()]), 2);
    }

    #[test]
    fn basis_pair_rejects_dependent_numerators() {
        let s = session32();
        assert!(matches!(
            BasisPair::new(form("w1 z2"), form("2 w1 z2"), &s),
            Err(Error::DegenerateModule(_))
        ));
    }

    #[test]
    fn ratio_witnesses() {
        let s = session32();
        let b = default_basis(&s).unwrap();
        let w = s.witnesses().unwrap();
        let r1 = ratio_witness(&b, &w.p.0).unwrap();
        let r2 = ratio_witness(&b, &w.p.1).unwrap();
        let e1 = parse_coeff("-e^(x+y)/(sqrt(2)*(e^y-e^x)*(-e^x+(1+sqrt(2))*e^y))").unwrap();
        let e2 = parse_coeff("-e^(x+y)/(sqrt(2)*(e^y-e^x)*(e^x+(-1+sqrt(2))*e^y))").unwrap();
        assert_eq!(r1, e1);
        assert_eq!(r2, e2);
        assert_ne!(r1, r2);
        assert!(!b.h1().eval(&w.p.0.first, &w.p.0.second).is_zero());
    }

    #[test]
    fn witness_undefined_where_h2_vanishes() {
        let s = session32();
        let b = default_basis(&s).unwrap();
        // at (0:1, 1:0) only the z2 w1 monomial survives, and h2 has none
        let p = SurfacePoint::new(
            crate::ProjPoint::from_ints(0, 1).unwrap(),
            crate::ProjPoint::from_ints(1, 0).unwrap(),
        );
        assert_eq!(ratio_witness(&b, &p), Err(Error::WitnessUndefined));
    }

    /// Random elements `Σ c·λ₁^k f^{n−1−k}·ψ_j` of pole order `n`.
    fn element_strategy(n: usize) -> impl Strategy<Value = BiForm> {
        prop::collection::vec((-2i64..=2, -1i64..=1, -1i64..=1), 2 * n).prop_map(move |cs| {
            let s = session32();
            let b = default_basis(&s).unwrap();
            let lam = form("w1 z2");
            let mut acc = BAElement::zero(n);
            for (idx, (c, r, q)) in cs.into_iter().enumerate() {
                let (psi, k) = (&b.psi[idx / n], (idx % n) as u32);
                let g = &lam.pow(k) * &s.f().pow(n as u32 - 1 - k);
                let coeff = CoeffElem::exp(r, q).scale(&FieldScalar::from_int(c));
                acc = acc.add(&psi.multiply_form(&g).scale(&coeff), &s).unwrap();
            }
            acc.numerator().clone()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn derivatives_stay_in_module(num in (1usize..=3).prop_flat_map(element_strategy)) {
            let s = session32();
            let e = BAElement::new(num, &s).unwrap();
            for axis in [Axis::X, Axis::Y] {
                let d = e.derive(axis, &s);
                prop_assert!(membership_check(d.numerator(), &s).is_some());
            }
            let xy = e.derive(Axis::X, &s).derive(Axis::Y, &s);
            let yx = e.derive(Axis::Y, &s).derive(Axis::X, &s);
            prop_assert_eq!(xy.numerator(), yx.numerator());
            let ld = e.lift(e.order() + 1, &s).unwrap().derive(Axis::X, &s);
            let dl = e.derive(Axis::X, &s).lift(e.order() + 2, &s).unwrap();
            prop_assert!(ld.same_function(&dl, &s));
        }
    }
}
