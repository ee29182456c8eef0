//! Polynomial gcd for exponential Laurent polynomials.
//!
//! Exponents are mapped onto an integer lattice `U = u^{1/qx}`,
//! `V = v^{1/qy}` and shifted to be non-negative; the gcd is then taken in
//! `K[U][V]`: contents via Euclid in `K[U]`, the primitive part by dense
//! evaluation at integer points `U = α`, univariate gcds in `K[V]`, Newton
//! interpolation, and a trial-division check.

use num_integer::Integer;
use num_rational::Rational64;

use crate::laurent::{ExpMonomial, LaurentPoly};
use crate::scalar::FieldScalar;

/// Dense univariate polynomial over the ground field, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
struct Uni(Vec<FieldScalar>);

impl Uni {
    fn trimmed(mut v: Vec<FieldScalar>) -> Uni {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        Uni(v)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn deg(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lc(&self) -> &FieldScalar {
        self.0
            .last()
            .expect("leading coefficient of zero polynomial")
    }

    fn scale(&self, c: &FieldScalar) -> Uni {
        Uni::trimmed(self.0.iter().map(|a| a * c).collect())
    }

    fn monic(&self) -> Uni {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lc().inv().expect("nonzero leading coefficient");
        self.scale(&inv)
    }

    fn sub(&self, other: &Uni) -> Uni {
        let n = self.0.len().max(other.0.len());
        let zero = FieldScalar::zero();
        Uni::trimmed(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&zero) - other.0.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    fn mul(&self, other: &Uni) -> Uni {
        if self.is_zero() || other.is_zero() {
            return Uni(Vec::new());
        }
        let mut out = vec![FieldScalar::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Uni::trimmed(out)
    }

    fn div_rem(&self, d: &Uni) -> (Uni, Uni) {
        let inv = d.lc().inv().expect("division by zero polynomial");
        let mut r = self.0.clone();
        let dd = d.deg();
        if self.is_zero() || self.deg() < dd {
            return (Uni(Vec::new()), self.clone());
        }
        let mut q = vec![FieldScalar::zero(); self.deg() - dd + 1];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, b) in d.0.iter().enumerate() {
                r[k + j] = &r[k + j] - &(&c * b);
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Uni::trimmed(q), Uni::trimmed(r))
    }

    fn gcd(&self, other: &Uni) -> Uni {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    fn eval(&self, x: &FieldScalar) -> FieldScalar {
        let mut acc = FieldScalar::zero();
        for c in self.0.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    fn add_const(&self, c: &FieldScalar) -> Uni {
        let mut v = self.0.clone();
        if v.is_empty() {
            v.push(FieldScalar::zero());
        }
        v[0] = &v[0] + c;
        Uni::trimmed(v)
    }

    fn exact_div(&self, d: &Uni) -> Uni {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact univariate division");
        q
    }
}

/// Polynomial in `V` with coefficients in `K[U]`, lowest `V`-degree first.
#[derive(Clone, Debug, PartialEq)]
struct Bi(Vec<Uni>);

impl Bi {
    fn trimmed(mut v: Vec<Uni>) -> Bi {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        Bi(v)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn deg(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn content(&self) -> Uni {
        let mut g = Uni(Vec::new());
        for c in &self.0 {
            g = g.gcd(c);
            if g.deg() == 0 && !g.is_zero() {
                break;
            }
        }
        g
    }

    fn deg_u(&self) -> usize {
        self.0.iter().map(Uni::deg).max().unwrap_or(0)
    }

    fn div_uni(&self, c: &Uni) -> Bi {
        Bi(self.0.iter().map(|p| p.exact_div(c)).collect())
    }

    /// Scaled so the leading scalar is 1.
    fn normalized(&self) -> Bi {
        let lead = self.0.last().expect("nonzero").lc().clone();
        let inv = lead.inv().expect("nonzero");
        Bi(self.0.iter().map(|p| p.scale(&inv)).collect())
    }

    fn mul_uni(&self, c: &Uni) -> Bi {
        Bi::trimmed(self.0.iter().map(|p| p.mul(c)).collect())
    }

    fn eval_u(&self, x: &FieldScalar) -> Uni {
        Uni::trimmed(self.0.iter().map(|p| p.eval(x)).collect())
    }

    /// Trial division in `K[U][V]`.
    fn divides(&self, other: &Bi) -> bool {
        let mut r = other.clone();
        let ld = self.0.last().expect("nonzero divisor");
        while !r.is_zero() && r.deg() >= self.deg() {
            let shift = r.deg() - self.deg();
            let (q, rem) = r.0.last().expect("nonzero").div_rem(ld);
            if !rem.is_zero() {
                return false;
            }
            let mut next = r.0.clone();
            for (j, sj) in self.0.iter().enumerate() {
                next[j + shift] = next[j + shift].sub(&sj.mul(&q));
            }
            r = Bi::trimmed(next);
        }
        r.is_zero()
    }
}

fn lattice(polys: &[&LaurentPoly]) -> (i64, i64) {
    let mut qx = 1i64;
    let mut qy = 1i64;
    for p in polys {
        for (m, _) in p.terms() {
            qx = qx.lcm(m.x.denom());
            qy = qy.lcm(m.y.denom());
        }
    }
    (qx, qy)
}

fn to_bi(p: &LaurentPoly, qx: i64, qy: i64) -> Bi {
    let (lo, _) = p.exponent_box().expect("nonzero polynomial");
    let idx = |r: Rational64, lo: Rational64, q: i64| -> usize {
        let k = (r - lo) * Rational64::from_integer(q);
        debug_assert!(k.is_integer());
        k.to_integer() as usize
    };
    let mut rows: Vec<Vec<FieldScalar>> = Vec::new();
    for (m, c) in p.terms() {
        let j = idx(m.y, lo.y, qy);
        let i = idx(m.x, lo.x, qx);
        if rows.len() <= j {
            rows.resize(j + 1, Vec::new());
        }
        if rows[j].len() <= i {
            rows[j].resize(i + 1, FieldScalar::zero());
        }
        rows[j][i] = c.clone();
    }
    Bi::trimmed(rows.into_iter().map(Uni::trimmed).collect())
}

fn from_bi(b: &Bi, qx: i64, qy: i64) -> LaurentPoly {
    let mut out = LaurentPoly::zero();
    for (j, row) in b.0.iter().enumerate() {
        for (i, c) in row.0.iter().enumerate() {
            let m = ExpMonomial::new(Rational64::new(i as i64, qx), Rational64::new(j as i64, qy));
            out.add_term(m, c.clone());
        }
    }
    out
}

/// Gcd of the polynomial parts of `a` and `b`: free of monomial factors
/// and with lex-leading coefficient 1. The gcd of anything with zero is
/// the other argument's polynomial part.
pub(crate) fn poly_gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() && b.is_zero() {
        return LaurentPoly::zero();
    }
    if a.len() == 1 || b.len() == 1 {
        // one side is a unit up to a monomial
        if !a.is_zero() && !b.is_zero() {
            return LaurentPoly::one();
        }
    }
    let (qx, qy) = lattice(&[a, b]);
    let g = match (a.is_zero(), b.is_zero()) {
        (true, _) => to_bi(b, qx, qy),
        (_, true) => to_bi(a, qx, qy),
        _ => bigcd(&to_bi(a, qx, qy), &to_bi(b, qx, qy)),
    };
    let g = from_bi(&g, qx, qy);
    let lc = g.leading().expect("nonzero gcd").1.clone();
    let g = g.scale(&lc.inv().expect("nonzero"));
    // strip any monomial factor left by the lattice shift
    let (lo, _) = g.exponent_box().expect("nonzero gcd");
    g.shift(&lo.inv())
}

fn bigcd(a: &Bi, b: &Bi) -> Bi {
    let (ca, cb) = (a.content(), b.content());
    let c = ca.gcd(&cb);
    let a = a.div_uni(&ca);
    let b = b.div_uni(&cb);
    if a.deg() == 0 || b.deg() == 0 {
        return Bi(vec![c]);
    }
    let la = a.0.last().expect("nonzero").clone();
    let lb = b.0.last().expect("nonzero").clone();
    let gamma = la.gcd(&lb);
    let bound = gamma.deg() + a.deg_u().min(b.deg_u());

    // Dense evaluation/interpolation in U: images of gcd(a, b) at U = α,
    // scaled by gamma(α) so they interpolate to gamma/lc · gcd.
    let mut points: Vec<FieldScalar> = Vec::new();
    let mut images: Vec<Uni> = Vec::new();
    let mut cur_deg = usize::MAX;
    for k in 0i64.. {
        let alpha = FieldScalar::from_int(if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 });
        let g_alpha = gamma.eval(&alpha);
        if g_alpha.is_zero() || la.eval(&alpha).is_zero() || lb.eval(&alpha).is_zero() {
            continue;
        }
        let img = a.eval_u(&alpha).gcd(&b.eval_u(&alpha));
        let d = img.deg();
        if d == 0 {
            return Bi(vec![c]);
        }
        if d > cur_deg {
            continue;
        }
        if d < cur_deg {
            cur_deg = d;
            points.clear();
            images.clear();
        }
        points.push(alpha);
        images.push(img.scale(&g_alpha));
        if points.len() > bound {
            let h = interpolate(&points, &images, cur_deg);
            let p = h.div_uni(&h.content()).normalized();
            if p.divides(&a) && p.divides(&b) {
                return p.mul_uni(&c);
            }
        }
    }
    unreachable!("evaluation loop is unbounded")
}

/// Newton interpolation in `U` of each `V`-coefficient.
fn interpolate(points: &[FieldScalar], images: &[Uni], deg_v: usize) -> Bi {
    let zero = FieldScalar::zero();
    let mut out = Vec::with_capacity(deg_v + 1);
    for j in 0..=deg_v {
        let ys: Vec<FieldScalar> = images
            .iter()
            .map(|g| g.0.get(j).unwrap_or(&zero).clone())
            .collect();
        out.push(newton(points, &ys));
    }
    Bi::trimmed(out)
}

fn newton(xs: &[FieldScalar], ys: &[FieldScalar]) -> Uni {
    let n = xs.len();
    let mut coef = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = &coef[i] - &coef[i - 1];
            let den = &xs[i] - &xs[i - level];
            coef[i] = &num / &den;
        }
    }
    // Horner on the Newton basis
    let mut acc = Uni(Vec::new());
    for i in (0..n).rev() {
        let shifted = acc.mul(&Uni::trimmed(vec![-&xs[i], FieldScalar::one()]));
        acc = shifted.add_const(&coef[i]);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u() -> LaurentPoly {
        LaurentPoly::exp(1, 0)
    }
    fn v() -> LaurentPoly {
        LaurentPoly::exp(0, 1)
    }
    fn c(n: i64) -> LaurentPoly {
        LaurentPoly::constant(FieldScalar::from_int(n))
    }

    #[test]
    fn common_linear_factor() {
        let a = &(&u() - &v()) * &(&u() + &c(2));
        let b = &(&u() - &v()) * &(&v() + &c(3));
        assert_eq!(poly_gcd(&a, &b), &u() - &v());
    }

    #[test]
    fn coprime_and_monomial_factors() {
        let a = &u() * &(&u() + &v());
        let b = &u() * &v();
        assert_eq!(poly_gcd(&a, &b), LaurentPoly::one());
        let a = &u() + &c(1);
        let b = &v() + &c(1);
        assert_eq!(poly_gcd(&a, &b), LaurentPoly::one());
    }

    #[test]
    fn pure_u_content() {
        let a = &(&u() - &c(1)) * &(&v() + &u());
        let b = &(&u() - &c(1)) * &(&v() - &u());
        assert_eq!(poly_gcd(&a, &b), &u() - &c(1));
    }

    #[test]
    fn fractional_exponents() {
        let s = LaurentPoly::monomial(
            ExpMonomial::new(Rational64::new(1, 2), Rational64::from_integer(0)),
            FieldScalar::one(),
        );
        // u - 1 = (u^{1/2} - 1)(u^{1/2} + 1)
        let a = &u() - &c(1);
        let b = &s - &c(1);
        assert_eq!(poly_gcd(&a, &b), b);
    }

    #[test]
    fn quadratic_coefficients() {
        let r2 = LaurentPoly::constant(FieldScalar::sqrt_of(2));
        // (u - √2 v)(u + v) and (u - √2 v)(u - v)
        let l = &u() - &(&r2 * &v());
        let a = &l * &(&u() + &v());
        let b = &l * &(&u() - &v());
        assert_eq!(poly_gcd(&a, &b), l);
    }
}
