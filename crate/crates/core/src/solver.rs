//! Construction of the matrix operator `D(λ)` with `D(λ)Ψ = λΨ` for a
//! function `λ = g / f^m` on the glued surface, and its checks.

use crate::biform::BiForm;
use crate::coeff::CoeffElem;
use crate::error::{Error, Result};
use crate::linalg::solve_unique;
use crate::module::{BAElement, BasisPair};
use crate::operator::{DiffOp, MatrixDiffOp};
use crate::scalar::FieldScalar;
use crate::surface::Session;

/// `g / f^m`, single-valued on the glued surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionOnGamma {
    numerator: BiForm,
}

impl FunctionOnGamma {
    pub fn pole_order(&self) -> usize {
        self.numerator.degree()
    }

    pub fn numerator(&self) -> &BiForm {
        &self.numerator
    }

    /// The constant function `c`.
    pub fn constant(c: FieldScalar) -> Self {
        FunctionOnGamma {
            numerator: BiForm::constant(c.into()),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        FunctionOnGamma {
            numerator: &self.numerator * &other.numerator,
        }
    }

    /// Same function over `f^target`.
    pub fn lift(&self, target: usize, session: &Session) -> Result<Self> {
        let m = self.pole_order();
        if target < m {
            return Err(Error::InvalidLift {
                from: m,
                to: target,
            });
        }
        Ok(FunctionOnGamma {
            numerator: &session.f().pow((target - m) as u32) * &self.numerator,
        })
    }

    /// `a·self + b·other` over the larger pole order.
    pub fn linear_combination(
        &self,
        a: &FieldScalar,
        other: &Self,
        b: &FieldScalar,
        session: &Session,
    ) -> Result<Self> {
        let m = self.pole_order().max(other.pole_order());
        let x = self.lift(m, session)?.numerator.scale_scalar(a);
        let y = other.lift(m, session)?.numerator.scale_scalar(b);
        Ok(FunctionOnGamma { numerator: &x + &y })
    }
}

/// Checks that `g / f^m` depends only on the spectral parameter and takes
/// equal values at identified points.
pub fn validate_function(g: BiForm, session: &Session) -> Result<FunctionOnGamma> {
    if !g.is_constant() {
        return Err(Error::SpectralParameterOnly);
    }
    let gl = session.gluing();
    let am = gl.factor().pow(g.degree() as u32);
    let r1 = gl.first_restriction(&g);
    let r2 = gl.second_restriction(&g);
    if r1.iter().zip(&r2).any(|(a, b)| *a != b.scale(&am)) {
        return Err(Error::NotAFunctionOnGamma);
    }
    Ok(FunctionOnGamma { numerator: g })
}

/// Index pairs `(a, b)` with `a + b ≤ m`, by total degree then `a`.
fn multi_indices(m: u32) -> Vec<(u32, u32)> {
    (0..=m)
        .flat_map(|t| (0..=t).rev().map(move |a| (a, t - a)))
        .collect()
}

/// Solves `λ·ψ_i = Σ_j d_ij ψ_j` for operators `d_ij` of order at most the
/// pole order `m` of `λ`, by matching numerators over `f^{m+1}`.
pub fn construct_operator(
    lambda: &FunctionOnGamma,
    basis: &BasisPair,
    session: &Session,
) -> Result<MatrixDiffOp> {
    let m = lambda.pole_order();
    let target = m + 1;
    let idx = multi_indices(m as u32);

    let mut columns: Vec<Vec<CoeffElem>> = Vec::with_capacity(2 * idx.len());
    for psi in &basis.psi {
        for &(a, b) in &idx {
            let e = psi.derive_n(a, b, session).lift(target, session)?;
            columns.push(e.numerator().coeffs().map(|(_, _, c)| c.clone()).collect());
        }
    }
    let rhs: Vec<Vec<CoeffElem>> = basis
        .psi
        .iter()
        .map(|psi| {
            let e = psi.multiply_form(lambda.numerator());
            e.numerator().coeffs().map(|(_, _, c)| c.clone()).collect()
        })
        .collect();

    let rows = (target + 1) * (target + 1);
    let a: Vec<Vec<CoeffElem>> = (0..rows)
        .map(|r| columns.iter().map(|col| col[r].clone()).collect())
        .collect();
    let b: Vec<Vec<CoeffElem>> = (0..rows)
        .map(|r| rhs.iter().map(|col| col[r].clone()).collect())
        .collect();
    let sol = solve_unique(&a, &b)?;

    let mut out = MatrixDiffOp::zero();
    for (i, x) in sol.iter().enumerate() {
        for j in 0..2 {
            out.e[i][j] = DiffOp::from_terms(
                idx.iter()
                    .enumerate()
                    .map(|(k, &ab)| (ab, x[j * idx.len() + k].clone())),
            );
        }
    }
    Ok(out)
}

/// A function, its operator and the basis it acts on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralAssignment {
    pub lambda: FunctionOnGamma,
    pub operator: MatrixDiffOp,
    pub basis: BasisPair,
}

impl SpectralAssignment {
    pub fn solve(lambda: FunctionOnGamma, basis: BasisPair, session: &Session) -> Result<Self> {
        let operator = construct_operator(&lambda, &basis, session)?;
        Ok(SpectralAssignment {
            lambda,
            operator,
            basis,
        })
    }
}

/// `D Ψ = λ Ψ` exactly, each side written over a common power of `f`.
pub fn verify_eigen(a: &SpectralAssignment, session: &Session) -> Result<bool> {
    let lhs = a.operator.apply(&a.basis.psi, session)?;
    Ok(lhs.iter().zip(&a.basis.psi).all(|(l, psi)| {
        let r: BAElement = psi.multiply_form(a.lambda.numerator());
        l.same_function(&r, session)
    }))
}

pub fn verify_commute_pair(d1: &MatrixDiffOp, d2: &MatrixDiffOp) -> bool {
    d1.commutator(d2).is_zero()
}

/// `D(λμ) = D(λ)∘D(μ)`.
pub fn verify_homomorphism(
    lambda: &FunctionOnGamma,
    mu: &FunctionOnGamma,
    basis: &BasisPair,
    session: &Session,
) -> Result<bool> {
    let direct = construct_operator(&lambda.mul(mu), basis, session)?;
    let dl = construct_operator(lambda, basis, session)?;
    let dm = construct_operator(mu, basis, session)?;
    Ok(direct == dl.compose(&dm))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::expr::{parse_biform, parse_coeff};
    use crate::module::default_basis;
    use crate::surface::tests::session32;

    pub(crate) fn lambda(i: usize) -> BiForm {
        match i {
            1 => parse_biform("w1 z2", 1),
            2 => parse_biform("z1 w1 z2^2", 2),
            3 => parse_biform("z1 z2 w1 w2", 2),
            4 => parse_biform("z1 w1 w2^2 + z1^2 z2 w2", 2),
            _ => unreachable!(),
        }
        .unwrap()
    }

    fn quarter_total() -> DiffOp {
        let q = CoeffElem::frac(1, 4);
        &DiffOp::term(1, 0, q.clone()) + &DiffOp::term(0, 1, q)
    }

    #[test]
    fn validation_examples() {
        let s = session32();
        assert!(validate_function(lambda(1), &s).is_ok());
        assert!(validate_function(lambda(2), &s).is_ok());
        assert_eq!(
            validate_function(parse_biform("z1 z2", 1).unwrap(), &s),
            Err(Error::NotAFunctionOnGamma)
        );
        assert_eq!(
            validate_function(parse_biform("e^x w1 z2", 1).unwrap(), &s),
            Err(Error::SpectralParameterOnly)
        );
    }

    #[test]
    fn lambda1_operator() {
        let s = session32();
        let b = default_basis(&s).unwrap();
        let l1 = validate_function(lambda(1), &s).unwrap();
        let d = construct_operator(&l1, &b, &s).unwrap();
        assert_eq!(d, MatrixDiffOp::diagonal(quarter_total()));
        let one = FunctionOnGamma::constant(FieldScalar::one());
        assert_eq!(
            construct_operator(&one, &b, &s).unwrap(),
            MatrixDiffOp::identity()
        );
    }

    #[test]
    fn lambda2_off_diagonal_entry() {
        let s = session32();
        let b = default_basis(&s).unwrap();
        let l2 = validate_function(lambda(2), &s).unwrap();
        let d = construct_operator(&l2, &b, &s).unwrap();
        let c = parse_coeff("e^(x+y)/(16*(e^x-e^y)^2)").unwrap();
        let expected = DiffOp::from_terms([
            ((2, 0), c.clone()),
            ((1, 1), c.scale(&FieldScalar::from_int(2))),
            ((0, 2), c),
        ]);
        assert_eq!(d.entry(0, 1), &expected);
    }

    #[test]
    fn eigen_relations_and_failures() {
        let s = session32();
        let b = default_basis(&s).unwrap();
        for i in 1..=4 {
            let l = validate_function(lambda(i), &s).unwrap();
            let a = SpectralAssignment::solve(l, b.clone(), &s).unwrap();
            assert!(verify_eigen(&a, &s).unwrap(), "lambda{i}");
            assert!(a.operator.order() as usize <= a.lambda.pole_order());
        }
        let l1 = validate_function(lambda(1), &s).unwrap();
        let zero = SpectralAssignment {
            lambda: l1,
            operator: MatrixDiffOp::zero(),
            basis: b,
        };
        assert!(!verify_eigen(&zero, &s).unwrap());
    }

    #[test]
    fn commuting_and_noncommuting() {
        let s = session32();
        let b = default_basis(&s).unwrap();
        let d1 = construct_operator(&validate_function(lambda(1), &s).unwrap(), &b, &s).unwrap();
        let d2 = construct_operator(&validate_function(lambda(2), &s).unwrap(), &b, &s).unwrap();
        assert!(verify_commute_pair(&d1, &d2));
        let u = MatrixDiffOp::diagonal(DiffOp::coeff(CoeffElem::u()));
        assert!(!verify_commute_pair(&d1, &u));
    }

    #[test]
    fn homomorphism_small_cases() {
        let s = session32();
        let b = default_basis(&s).unwrap();
        let one = FunctionOnGamma::constant(FieldScalar::one());
        assert!(verify_homomorphism(&one, &one, &b, &s).unwrap());
        let l1 = validate_function(lambda(1), &s).unwrap();
        let sq = construct_operator(&l1.mul(&l1), &b, &s).unwrap();
        let q = quarter_total();
        assert_eq!(sq, MatrixDiffOp::diagonal(q.compose(&q)));
    }

    #[test]
    fn linearity() {
        let s = session32();
        let b = default_basis(&s).unwrap();
        let l1 = validate_function(lambda(1), &s).unwrap();
        let l3 = validate_function(lambda(3), &s).unwrap();
        let (x, y) = (FieldScalar::from_int(3), FieldScalar::frac(-1, 2));
        let comb = l1.linear_combination(&x, &l3, &y, &s).unwrap();
        let lhs = construct_operator(&comb, &b, &s).unwrap();
        let rhs = &construct_operator(&l1, &b, &s).unwrap().scale_scalar(&x)
            + &construct_operator(&l3, &b, &s).unwrap().scale_scalar(&y);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn dependent_basis_is_not_free() {
        let s = session32();
        let b = default_basis(&s).unwrap();
        let h1 = b.psi[0].clone();
        let degenerate = BasisPair {
            psi: [h1.clone(), h1],
        };
        let l1 = validate_function(lambda(1), &s).unwrap();
        assert!(matches!(
            construct_operator(&l1, &degenerate, &s),
            Err(Error::BasisNotFree { .. })
        ));
    }
}
