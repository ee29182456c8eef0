//! Exact linear algebra over the ground field, the coefficient field, and
//! fraction-free elimination over Laurent polynomials.

use crate::coeff::CoeffElem;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::scalar::FieldScalar;

/// Minimal field interface for Gauss-Jordan elimination.
pub trait Field: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// Panics on a zero divisor.
    fn div(&self, rhs: &Self) -> Self;
    /// Pivot preference; smaller is better.
    fn weight(&self) -> usize {
        0
    }
}

impl Field for FieldScalar {
    fn zero() -> Self {
        FieldScalar::zero()
    }
    fn one() -> Self {
        FieldScalar::one()
    }
    fn is_zero(&self) -> bool {
        FieldScalar::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
}

impl Field for CoeffElem {
    fn zero() -> Self {
        CoeffElem::zero()
    }
    fn one() -> Self {
        CoeffElem::one()
    }
    fn is_zero(&self) -> bool {
        CoeffElem::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self.checked_div(rhs).expect("division by zero")
    }
    fn weight(&self) -> usize {
        self.size()
    }
}

/// Reduces `m` in place to reduced row echelon form and returns the pivot
/// columns. Pivots are chosen by smallest weight, ties by row index.
pub fn rref<T: Field>(m: &mut [Vec<T>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows)
            .filter(|&i| !m[i][c].is_zero())
            .min_by_key(|&i| (m[i][c].weight(), i))
        else {
            continue;
        };
        m.swap(r, p);
        let inv = T::one().div(&m[r][c]);
        for x in &mut m[r][c..cols] {
            *x = x.mul(&inv);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row[c..cols].iter_mut().zip(&pivot_row[c..cols]) {
                if !p.is_zero() {
                    *x = x.sub(&factor.mul(p));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<T: Field>(m: &[Vec<T>]) -> usize {
    let mut work = m.to_vec();
    rref(&mut work).len()
}

/// Basis of `{x : m·x = 0}` for a matrix with `cols` columns. Each vector
/// has a 1 in one free column and zeros in the others.
pub fn nullspace<T: Field>(m: &[Vec<T>], cols: usize) -> Vec<Vec<T>> {
    let mut work = m.to_vec();
    let pivots = rref(&mut work);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![T::zero(); cols];
            v[fc] = T::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = T::zero().sub(&work[r][fc]);
            }
            v
        })
        .collect()
}

/// Solves `a·X = b` for the unique `X` with fraction-free elimination over
/// Laurent polynomials, then back-substitutes in the fraction field.
///
/// `a` has one row per equation; `b` has one column per right-hand side
/// (each inner vector of `b` is a row). Returns one solution vector per
/// right-hand side.
///
/// Errors: an inconsistent right-hand side gives `BasisNotGenerating` with
/// its column index; a rank-deficient `a` gives `BasisNotFree`.
pub fn solve_unique(a: &[Vec<CoeffElem>], b: &[Vec<CoeffElem>]) -> Result<Vec<Vec<CoeffElem>>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let rhs = b.first().map_or(0, Vec::len);
    assert_eq!(b.len(), rows, "right-hand side row count");
    let mut m: Vec<Vec<LaurentPoly>> = a
        .iter()
        .zip(b)
        .map(|(ra, rb)| clear_row_denominators(ra.iter().chain(rb)))
        .collect();
    let width = cols + rhs;

    let mut prev = LaurentPoly::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows)
            .filter(|&i| !m[i][c].is_zero())
            .min_by_key(|&i| (m[i][c].len(), i))
        else {
            continue;
        };
        m.swap(r, p);
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let piv = &pivot_row[c];
        for row in rest.iter_mut() {
            let lead = std::mem::replace(&mut row[c], LaurentPoly::zero());
            for j in c + 1..width {
                let mut val = piv * &row[j];
                if !lead.is_zero() && !pivot_row[j].is_zero() {
                    val = &val - &(&lead * &pivot_row[j]);
                }
                row[j] = if prev.is_one() {
                    val
                } else {
                    val.exact_div(&prev)
                        .expect("fraction-free step divides exactly")
                };
            }
        }
        prev = piv.clone();
        pivots.push(c);
        r += 1;
    }

    for row in &m[r..] {
        if let Some(j) = (0..rhs).find(|&j| !row[cols + j].is_zero()) {
            return Err(Error::BasisNotGenerating { row: j });
        }
    }
    if pivots.len() < cols {
        return Err(Error::BasisNotFree {
            nullity: cols - pivots.len(),
        });
    }

    let mut solutions = vec![vec![CoeffElem::zero(); cols]; rhs];
    for (pr, &pc) in pivots.iter().enumerate().rev() {
        let row = &m[pr];
        let piv = CoeffElem::laurent(row[pc].clone());
        for (j, x) in solutions.iter_mut().enumerate() {
            let mut acc = CoeffElem::laurent(row[cols + j].clone());
            for k in pc + 1..cols {
                if !row[k].is_zero() && !x[k].is_zero() {
                    acc = &acc - &(&CoeffElem::laurent(row[k].clone()) * &x[k]);
                }
            }
            x[pc] = acc.checked_div(&piv).expect("nonzero pivot");
        }
    }
    Ok(solutions)
}

/// Scales a row by the product of its distinct denominators so every entry
/// is a Laurent polynomial.
fn clear_row_denominators<'a>(
    row: impl Iterator<Item = &'a CoeffElem> + Clone,
) -> Vec<LaurentPoly> {
    let mut dens: Vec<&LaurentPoly> = Vec::new();
    for c in row.clone() {
        let d = c.denominator();
        if !d.is_one() && !dens.contains(&d) {
            dens.push(d);
        }
    }
    let scale = dens.into_iter().fold(LaurentPoly::one(), |acc, d| &acc * d);
    let scale = CoeffElem::laurent(scale);
    row.map(|c| {
        let e = c * &scale;
        debug_assert!(e.denominator().is_one());
        e.numerator().clone()
    })
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::CoeffElem as C;

    fn q(n: i64) -> FieldScalar {
        FieldScalar::from_int(n)
    }

    #[test]
    fn rank_and_nullspace_over_rationals() {
        let m = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]];
        assert_eq!(rank(&m), 1);
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let dot: FieldScalar = (0..3).fold(q(0), |acc, j| &acc + &(&m[0][j] * &v[j]));
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn nullspace_over_fractions() {
        // [1, -u] has kernel spanned by (u, 1)
        let m = vec![vec![C::one(), -C::u()]];
        let ns = nullspace(&m, 2);
        assert_eq!(ns, vec![vec![C::u(), C::one()]]);
    }

    #[test]
    fn unique_solution_with_two_rhs() {
        // [[u, 1], [1, v]] x = b
        let a = vec![vec![C::u(), C::one()], vec![C::one(), C::v()]];
        let x1 = vec![C::one(), C::u()];
        let x2 = vec![C::v().inv().unwrap(), C::from_int(3)];
        let b: Vec<Vec<C>> = (0..2)
            .map(|i| {
                [&x1, &x2]
                    .iter()
                    .map(|x| &(&a[i][0] * &x[0]) + &(&a[i][1] * &x[1]))
                    .collect()
            })
            .collect();
        let sol = solve_unique(&a, &b).unwrap();
        assert_eq!(sol, vec![x1, x2]);
    }

    #[test]
    fn overdetermined_consistent_and_inconsistent() {
        let a = vec![vec![C::one()], vec![C::u()]];
        let ok = vec![vec![C::v()], vec![&C::u() * &C::v()]];
        assert_eq!(solve_unique(&a, &ok).unwrap(), vec![vec![C::v()]]);
        let bad = vec![vec![C::v()], vec![C::v()]];
        assert_eq!(
            solve_unique(&a, &bad),
            Err(Error::BasisNotGenerating { row: 0 })
        );
    }

    #[test]
    fn rank_deficient_is_not_free() {
        let a = vec![vec![C::u(), C::u()], vec![C::v(), C::v()]];
        let b = vec![vec![C::zero()], vec![C::zero()]];
        assert_eq!(
            solve_unique(&a, &b),
            Err(Error::BasisNotFree { nullity: 1 })
        );
    }
}
