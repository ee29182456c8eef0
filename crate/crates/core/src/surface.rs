//! Gluing data for `CP¹ × CP¹` with two lines identified, the section
//! form, flow forms and the intersection points used as freeness witnesses.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Rational64;
use num_traits::ToPrimitive;

use crate::biform::{BiForm, ProjPoint, Slot};
use crate::coeff::CoeffElem;
use crate::error::{Error, Result};
use crate::laurent::ExpMonomial;
use crate::linalg::{nullspace, rank};
use crate::scalar::{squarefree_decompose, FieldScalar};

/// The two gluing points and the gluing factor `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingData {
    p1: ProjPoint,
    p2: ProjPoint,
    factor: FieldScalar,
}

impl GluingData {
    pub fn new(p1: ProjPoint, p2: ProjPoint, factor: FieldScalar) -> Result<Self> {
        if p1.cross(&p2).is_zero() {
            return Err(Error::CoincidentGluingPoints);
        }
        if factor.is_zero() {
            return Err(Error::ZeroGluingFactor);
        }
        Ok(GluingData { p1, p2, factor })
    }

    pub fn p1(&self) -> &ProjPoint {
        &self.p1
    }

    pub fn p2(&self) -> &ProjPoint {
        &self.p2
    }

    pub fn factor(&self) -> &FieldScalar {
        &self.factor
    }

    /// `form(p₁, t)`.
    pub fn first_restriction(&self, form: &BiForm) -> Vec<CoeffElem> {
        form.restrict(Slot::First, &self.p1)
    }

    /// `form(t, p₂)`.
    pub fn second_restriction(&self, form: &BiForm) -> Vec<CoeffElem> {
        form.restrict(Slot::Second, &self.p2)
    }
}

/// Returns the constant `A ≠ 0` with `form(p₁, t) = A·form(t, p₂)`, if any.
/// Only the gluing points are used.
pub fn check_section(form: &BiForm, p1: &ProjPoint, p2: &ProjPoint) -> Result<Option<FieldScalar>> {
    if form.is_zero() {
        return Err(Error::ZeroForm);
    }
    let r1 = form.restrict(Slot::First, p1);
    let r2 = form.restrict(Slot::Second, p2);
    Ok(constant_ratio(&r1, &r2).filter(|a| !a.is_zero()))
}

/// The ground-field constant `c` with `lhs = c·rhs`, when `rhs ≠ 0`.
pub(crate) fn constant_ratio(lhs: &[CoeffElem], rhs: &[CoeffElem]) -> Option<FieldScalar> {
    let i = rhs.iter().position(|c| !c.is_zero())?;
    let c = lhs[i].checked_div(&rhs[i]).ok()?.as_scalar()?;
    lhs.iter()
        .zip(rhs)
        .all(|(l, r)| *l == r.scale(&c))
        .then_some(c)
}

/// Constant-coefficient bilinear form satisfying the section condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionForm {
    form: BiForm,
}

impl SectionForm {
    /// Validates the form against the gluing data, including its factor.
    pub fn new(form: BiForm, gluing: &GluingData) -> Result<Self> {
        check_bilinear_constant(&form)?;
        match check_section(&form, gluing.p1(), gluing.p2())? {
            Some(a) if &a == gluing.factor() => Ok(SectionForm { form }),
            _ => Err(Error::NotASection),
        }
    }

    pub fn form(&self) -> &BiForm {
        &self.form
    }
}

fn check_bilinear_constant(form: &BiForm) -> Result<()> {
    if form.degree() != 1 {
        return Err(Error::BidegreeMismatch {
            expected: 1,
            found: form.degree(),
        });
    }
    if !form.is_constant() {
        return Err(Error::NonConstantForm);
    }
    Ok(())
}

/// Bilinear form `h` and constant `c` with
/// `h(p₁,t) − A·h(t,p₂) − A·c·f(t,p₂) ≡ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowForm {
    pub form: BiForm,
    pub c: FieldScalar,
}

impl FlowForm {
    /// Computes the flow constant of `form`, or `None` if it has none.
    pub fn fit(form: BiForm, section: &SectionForm, gluing: &GluingData) -> Result<Option<Self>> {
        check_bilinear_constant(&form)?;
        let a = gluing.factor();
        let lhs: Vec<CoeffElem> = gluing
            .first_restriction(&form)
            .iter()
            .zip(gluing.second_restriction(&form))
            .map(|(l, r)| l - &r.scale(a))
            .collect();
        let rhs: Vec<CoeffElem> = gluing
            .second_restriction(section.form())
            .iter()
            .map(|r| r.scale(a))
            .collect();
        if lhs.iter().all(CoeffElem::is_zero) {
            return Ok(Some(FlowForm {
                form,
                c: FieldScalar::zero(),
            }));
        }
        Ok(constant_ratio(&lhs, &rhs).map(|c| FlowForm { form, c }))
    }

    /// Residual of the flow condition, one entry per `t`-coefficient.
    pub fn residual(&self, section: &SectionForm, gluing: &GluingData) -> Vec<CoeffElem> {
        let a = gluing.factor();
        let ac = a * &self.c;
        let r1 = gluing.first_restriction(&self.form);
        let r2 = gluing.second_restriction(&self.form);
        let rf = gluing.second_restriction(section.form());
        (0..r1.len())
            .map(|i| &(&r1[i] - &r2[i].scale(a)) - &rf[i].scale(&ac))
            .collect()
    }
}

fn bilinear_vector(form: &BiForm) -> Vec<FieldScalar> {
    form.bilinear_coeffs()
        .expect("bilinear form")
        .iter()
        .map(|c| c.as_scalar().expect("constant coefficient"))
        .collect()
}

fn bilinear_from(v: &[FieldScalar]) -> BiForm {
    BiForm::bilinear_const(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone())
}

/// Basis of the solution space of the flow condition in
/// `(α, β, γ, δ, c)`. Its dimension is 3 for valid data.
pub fn flow_form_space(section: &SectionForm, gluing: &GluingData) -> Result<Vec<FlowForm>> {
    let a = gluing.factor();
    let unit = |i: usize| {
        let mut v = vec![FieldScalar::zero(); 4];
        v[i] = FieldScalar::one();
        bilinear_from(&v)
    };
    let mut columns: Vec<Vec<FieldScalar>> = (0..4)
        .map(|i| {
            let e = unit(i);
            let r1 = gluing.first_restriction(&e);
            let r2 = gluing.second_restriction(&e);
            r1.iter()
                .zip(&r2)
                .map(|(x, y)| (x - &y.scale(a)).as_scalar().expect("constant"))
                .collect()
        })
        .collect();
    columns.push(
        gluing
            .second_restriction(section.form())
            .iter()
            .map(|y| -&y.scale(a).as_scalar().expect("constant"))
            .collect(),
    );
    let matrix: Vec<Vec<FieldScalar>> = (0..2)
        .map(|i| columns.iter().map(|col| col[i].clone()).collect())
        .collect();
    let basis = nullspace(&matrix, 5);
    if basis.len() != 3 {
        return Err(Error::DegenerateGluing(format!(
            "flow-form space has dimension {}, expected 3",
            basis.len()
        )));
    }
    Ok(basis
        .into_iter()
        .map(|v| FlowForm {
            form: bilinear_from(&v[..4]),
            c: v[4].clone(),
        })
        .collect())
}

/// Picks `f₁, f₂` with `{f₁, f₂, f}` linearly independent. Preferred forms
/// that satisfy the flow condition are tried first, in order, then the
/// basis elements.
pub fn choose_flow_pair(
    basis: &[FlowForm],
    section: &SectionForm,
    gluing: &GluingData,
    preferences: &[BiForm],
) -> Result<(FlowForm, FlowForm)> {
    let mut candidates = Vec::new();
    for p in preferences {
        if let Some(ff) = FlowForm::fit(p.clone(), section, gluing)? {
            candidates.push(ff);
        }
    }
    candidates.extend(basis.iter().cloned());
    let mut rows = vec![bilinear_vector(section.form())];
    let mut chosen = Vec::new();
    for cand in candidates {
        rows.push(bilinear_vector(&cand.form));
        if rank(&rows) == rows.len() {
            chosen.push(cand);
            if chosen.len() == 2 {
                let f2 = chosen.pop().expect("two chosen");
                let f1 = chosen.pop().expect("two chosen");
                return Ok((f1, f2));
            }
        } else {
            rows.pop();
        }
    }
    Err(Error::DegenerateGluing(
        "no pair of flow forms independent of the section form".into(),
    ))
}

/// Point of `CP¹ × CP¹`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SurfacePoint {
    pub first: ProjPoint,
    pub second: ProjPoint,
}

impl SurfacePoint {
    pub fn new(first: ProjPoint, second: ProjPoint) -> Self {
        SurfacePoint { first, second }
    }

    pub fn to_latex(&self) -> String {
        format!("({}, {})", self.first.to_latex(), self.second.to_latex())
    }
}

impl fmt::Display for SurfacePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.first, self.second)
    }
}

/// True iff the four points are pairwise distinct.
pub fn check_distinct_witnesses(points: [&SurfacePoint; 4]) -> bool {
    (0..4).all(|i| (i + 1..4).all(|j| points[i] != points[j]))
}

/// Intersection of two bilinear forms in the ground field of their
/// coefficients, extended by one square root if needed.
pub fn intersection_points(f: &BiForm, h: &BiForm) -> Result<(SurfacePoint, SurfacePoint)> {
    let ext = f
        .coeffs()
        .chain(h.coeffs())
        .filter_map(|(_, _, c)| c.as_scalar().and_then(|s| s.extension()))
        .next();
    intersection_points_in(f, h, ext)
}

/// Like [`intersection_points`], with the session's current extension.
pub fn intersection_points_in(
    f: &BiForm,
    h: &BiForm,
    ext: Option<i64>,
) -> Result<(SurfacePoint, SurfacePoint)> {
    check_bilinear_constant(f)?;
    check_bilinear_constant(h)?;
    let fv = bilinear_vector(f);
    let hv = bilinear_vector(h);
    // f = z1·L1(z2,w2) + w1·L2(z2,w2); entries are (z2, w2) coefficients
    let l1 = [fv[0].clone(), fv[1].clone()];
    let l2 = [fv[2].clone(), fv[3].clone()];
    let m1 = [hv[0].clone(), hv[1].clone()];
    let m2 = [hv[2].clone(), hv[3].clone()];
    // L1·M2 − L2·M1 = qa z2² + qb z2 w2 + qc w2²
    let qa = &(&l1[0] * &m2[0]) - &(&l2[0] * &m1[0]);
    let qb =
        &(&(&l1[0] * &m2[1]) + &(&l1[1] * &m2[0])) - &(&(&l2[0] * &m1[1]) + &(&l2[1] * &m1[0]));
    let qc = &(&l1[1] * &m2[1]) - &(&l2[1] * &m1[1]);
    if qa.is_zero() && qb.is_zero() && qc.is_zero() {
        return Err(Error::DegeneratePencil);
    }

    let roots: Vec<ProjPoint> = if qa.is_zero() {
        if qb.is_zero() {
            return Err(Error::NonGenericData(
                "double intersection at infinity".into(),
            ));
        }
        vec![ProjPoint::infinity(), ProjPoint::new(-&qc, qb.clone())?]
    } else {
        let disc = &(&qb * &qb) - &(&FieldScalar::from_int(4) * &(&qa * &qc));
        if disc.is_zero() {
            return Err(Error::NonGenericData("intersection points coincide".into()));
        }
        let root = discriminant_root(&disc, ext)?;
        let two_a = &FieldScalar::from_int(2) * &qa;
        [&root, &-&root]
            .iter()
            .map(|r| ProjPoint::affine(&(&-&qb + *r) / &two_a))
            .collect()
    };

    let eval = |l: &[FieldScalar; 2], p: &ProjPoint| &(&l[0] * p.a()) + &(&l[1] * p.b());
    let mut points = Vec::with_capacity(2);
    for second in roots {
        let (a1, a2) = (eval(&l1, &second), eval(&l2, &second));
        let first = if !a1.is_zero() || !a2.is_zero() {
            ProjPoint::new(a2, -&a1)?
        } else {
            let (b1, b2) = (eval(&m1, &second), eval(&m2, &second));
            if b1.is_zero() && b2.is_zero() {
                return Err(Error::NonGenericData(
                    "forms share a line; intersection is not finite".into(),
                ));
            }
            ProjPoint::new(b2, -&b1)?
        };
        points.push(SurfacePoint::new(first, second));
    }
    points.sort_by(compare_points);
    let q = points.pop().expect("two points");
    let p = points.pop().expect("two points");
    Ok((p, q))
}

fn discriminant_root(disc: &FieldScalar, ext: Option<i64>) -> Result<FieldScalar> {
    let current = || ext.map_or_else(|| "Q".to_string(), |d| format!("Q(sqrt({d}))"));
    if let Some(r) = disc.as_rational() {
        // radicand of the extension this square root needs
        let n = r.numer() * r.denom();
        let (core, _) = squarefree_decompose(&n);
        let needed = core.to_i64();
        if let (Some(d), Some(need)) = (ext, needed) {
            if need != 1 && need != d {
                return Err(Error::UnsupportedExtension {
                    needed: need.to_string(),
                    current: current(),
                });
            }
        }
        return disc.sqrt().ok_or_else(|| Error::UnsupportedExtension {
            needed: core.to_string(),
            current: current(),
        });
    }
    disc.sqrt().ok_or_else(|| Error::UnsupportedExtension {
        needed: disc.to_string(),
        current: current(),
    })
}

/// Order by the first coordinate, then the second, under the real
/// embedding with positive square root; infinity sorts last.
fn compare_points(p: &SurfacePoint, q: &SurfacePoint) -> Ordering {
    compare_proj(&p.first, &q.first).then_with(|| compare_proj(&p.second, &q.second))
}

fn compare_proj(p: &ProjPoint, q: &ProjPoint) -> Ordering {
    match (p.ratio(), q.ratio()) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Greater,
        (Some(_), None) => Ordering::Less,
        (Some(a), Some(b)) => a.cmp_real(&b).unwrap_or_else(|| a.cmp_lex(&b)),
    }
}

/// `exp(x·F₁ + y·F₂)` with `F_i = f_i / f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentialFactor {
    pub f: SectionForm,
    pub f1: FlowForm,
    pub f2: FlowForm,
}

impl ExponentialFactor {
    /// `F₁` and `F₂` evaluated at a point where `f` does not vanish.
    pub fn exponents_at(&self, p: &SurfacePoint) -> Option<(CoeffElem, CoeffElem)> {
        let fv = self.f.form().eval(&p.first, &p.second);
        if fv.is_zero() {
            return None;
        }
        let e1 = self
            .f1
            .form
            .eval(&p.first, &p.second)
            .checked_div(&fv)
            .ok()?;
        let e2 = self
            .f2
            .form
            .eval(&p.first, &p.second)
            .checked_div(&fv)
            .ok()?;
        Some((e1, e2))
    }
}

/// Validated data of one computation: gluing, section form, flow forms and
/// the ground-field extension in use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Session {
    gluing: GluingData,
    exp: ExponentialFactor,
    extension: Option<i64>,
    twist: ExpMonomial,
}

/// Intersection points of `f` with `f₁` and with `f₂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witnesses {
    pub p: (SurfacePoint, SurfacePoint),
    pub q: (SurfacePoint, SurfacePoint),
    pub extension: Option<i64>,
}

impl Session {
    /// Builds a session from fully specified flow forms.
    pub fn new(
        gluing: GluingData,
        section: BiForm,
        f1: BiForm,
        f2: BiForm,
        extension: Option<i64>,
    ) -> Result<Self> {
        let section = SectionForm::new(section, &gluing)?;
        let fit = |h: BiForm| -> Result<FlowForm> {
            FlowForm::fit(h, &section, &gluing)?
                .ok_or_else(|| Error::DegenerateGluing("form fails the flow condition".into()))
        };
        let (f1, f2) = (fit(f1)?, fit(f2)?);
        let vectors = vec![
            bilinear_vector(section.form()),
            bilinear_vector(&f1.form),
            bilinear_vector(&f2.form),
        ];
        if rank(&vectors) != 3 {
            return Err(Error::DegenerateGluing(
                "flow forms are dependent on the section form".into(),
            ));
        }
        Self::assemble(gluing, section, f1, f2, extension)
    }

    /// Builds a session by solving for the flow-form space and choosing a
    /// pair, preferring the given forms.
    pub fn resolve(
        gluing: GluingData,
        section: BiForm,
        preferences: &[BiForm],
        extension: Option<i64>,
    ) -> Result<Self> {
        let section = SectionForm::new(section, &gluing)?;
        let basis = flow_form_space(&section, &gluing)?;
        let (f1, f2) = choose_flow_pair(&basis, &section, &gluing, preferences)?;
        Self::assemble(gluing, section, f1, f2, extension)
    }

    fn assemble(
        gluing: GluingData,
        f: SectionForm,
        f1: FlowForm,
        f2: FlowForm,
        extension: Option<i64>,
    ) -> Result<Self> {
        let rational = |c: &FieldScalar| -> Result<Rational64> {
            let r = c
                .as_rational()
                .ok_or_else(|| Error::IrrationalFlowConstant(c.to_string()))?;
            match (r.numer().to_i64(), r.denom().to_i64()) {
                (Some(n), Some(d)) => Ok(Rational64::new(n, d)),
                _ => Err(Error::IrrationalFlowConstant(c.to_string())),
            }
        };
        let twist = ExpMonomial::new(-rational(&f1.c)?, -rational(&f2.c)?);
        Ok(Session {
            gluing,
            exp: ExponentialFactor { f, f1, f2 },
            extension,
            twist,
        })
    }

    pub fn gluing(&self) -> &GluingData {
        &self.gluing
    }

    pub fn section(&self) -> &SectionForm {
        &self.exp.f
    }

    pub fn f(&self) -> &BiForm {
        self.exp.f.form()
    }

    pub fn flow(&self, i: usize) -> &FlowForm {
        match i {
            1 => &self.exp.f1,
            2 => &self.exp.f2,
            _ => panic!("flow index must be 1 or 2"),
        }
    }

    pub fn exponential(&self) -> &ExponentialFactor {
        &self.exp
    }

    pub fn extension(&self) -> Option<i64> {
        self.extension
    }

    /// `e^{−c₁x − c₂y}`.
    pub fn twist(&self) -> &ExpMonomial {
        &self.twist
    }

    /// `Aⁿ · e^{−c₁x − c₂y}`, the factor relating the two edge restrictions
    /// of a pole-order-`n` module element with eigenvalue tag 1.
    pub fn edge_factor(&self, n: usize) -> CoeffElem {
        CoeffElem::monomial(self.twist).scale(&self.gluing.factor().pow(n as u32))
    }

    /// Intersection points with both flow forms, extending the ground field
    /// consistently.
    pub fn witnesses(&self) -> Result<Witnesses> {
        let p = intersection_points_in(self.f(), &self.exp.f1.form, self.extension)?;
        let ext = self.extension.or_else(|| point_extension(&p));
        let q = intersection_points_in(self.f(), &self.exp.f2.form, ext)?;
        Ok(Witnesses {
            extension: ext.or_else(|| point_extension(&q)),
            p,
            q,
        })
    }
}

fn point_extension(pair: &(SurfacePoint, SurfacePoint)) -> Option<i64> {
    [&pair.0, &pair.1]
        .iter()
        .flat_map(|p| [p.first.a(), p.first.b(), p.second.a(), p.second.b()])
        .find_map(FieldScalar::extension)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::expr::parse_biform;

    pub(crate) fn gluing32() -> GluingData {
        GluingData::new(
            ProjPoint::from_ints(1, 0).unwrap(),
            ProjPoint::from_ints(0, 1).unwrap(),
            FieldScalar::one(),
        )
        .unwrap()
    }

    pub(crate) fn form(s: &str) -> BiForm {
        parse_biform(s, 1).unwrap()
    }

    pub(crate) fn session32() -> Session {
        Session::resolve(
            gluing32(),
            form("z1*z2 + z1*w2 + w1*w2"),
            &[
                form("z1*z2 + 2*w1*z2 - w1*w2"),
                form("-z1*z2 + 2*w1*z2 + w1*w2"),
            ],
            None,
        )
        .unwrap()
    }

    fn q(s: &str) -> FieldScalar {
        crate::expr::parse_coeff(s).unwrap().as_scalar().unwrap()
    }

    fn pt(a: &str, b: &str) -> SurfacePoint {
        SurfacePoint::new(ProjPoint::affine(q(a)), ProjPoint::affine(q(b)))
    }

    #[test]
    fn section_factor() {
        let g = gluing32();
        let (p1, p2) = (g.p1(), g.p2());
        let f = form("z1*z2 + z1*w2 + w1*w2");
        assert_eq!(check_section(&f, p1, p2).unwrap(), Some(FieldScalar::one()));
        assert_eq!(check_section(&form("z1*z2"), p1, p2).unwrap(), None);
        // α = Aβ, β = Aδ with A = 2
        let f = form("4*z1*z2 + 2*z1*w2 + 5*w1*z2 + w1*w2");
        assert_eq!(
            check_section(&f, p1, p2).unwrap(),
            Some(FieldScalar::from_int(2))
        );
        assert_eq!(
            check_section(&BiForm::zero(1), p1, p2),
            Err(Error::ZeroForm)
        );
    }

    #[test]
    fn section_factor_is_scale_invariant() {
        let g = gluing32();
        let f = form("4*z1*z2 + 2*z1*w2 + 5*w1*z2 + w1*w2");
        for s in [-3, 2, 7] {
            let sf = f.scale_scalar(&FieldScalar::from_int(s));
            assert_eq!(
                check_section(&sf, g.p1(), g.p2()).unwrap(),
                Some(FieldScalar::from_int(2))
            );
        }
    }

    #[test]
    fn gluing_validation() {
        let p = ProjPoint::from_ints(1, 2).unwrap();
        let p2 = ProjPoint::from_ints(2, 4).unwrap();
        assert_eq!(
            GluingData::new(p.clone(), p2, FieldScalar::one()),
            Err(Error::CoincidentGluingPoints)
        );
        assert_eq!(
            GluingData::new(p, ProjPoint::infinity(), FieldScalar::zero()),
            Err(Error::ZeroGluingFactor)
        );
    }

    #[test]
    fn flow_space_contains_printed_forms() {
        let g = gluing32();
        let f = SectionForm::new(form("z1*z2 + z1*w2 + w1*w2"), &g).unwrap();
        let basis = flow_form_space(&f, &g).unwrap();
        assert_eq!(basis.len(), 3);
        for b in &basis {
            assert!(b.residual(&f, &g).iter().all(CoeffElem::is_zero));
        }
        let f1 = FlowForm::fit(form("z1*z2 + 2*w1*z2 - w1*w2"), &f, &g)
            .unwrap()
            .unwrap();
        let f2 = FlowForm::fit(form("-z1*z2 + 2*w1*z2 + w1*w2"), &f, &g)
            .unwrap()
            .unwrap();
        assert_eq!(f1.c, FieldScalar::one());
        assert_eq!(f2.c, FieldScalar::from_int(-1));
        // (f, 0) and the printed forms lie in the span
        let span: Vec<Vec<FieldScalar>> = basis
            .iter()
            .map(|b| {
                let mut v = bilinear_vector(&b.form);
                v.push(b.c.clone());
                v
            })
            .collect();
        let mut with_f = bilinear_vector(f.form());
        with_f.push(FieldScalar::zero());
        for extra in [with_f, {
            let mut v = bilinear_vector(&f1.form);
            v.push(f1.c.clone());
            v
        }] {
            let mut m = span.clone();
            m.push(extra);
            assert_eq!(rank(&m), 3);
        }
    }

    #[test]
    fn flow_pair_prefers_given_forms() {
        let s = session32();
        assert_eq!(s.flow(1).form, form("z1*z2 + 2*w1*z2 - w1*w2"));
        assert_eq!(s.flow(1).c, FieldScalar::one());
        assert_eq!(s.flow(2).form, form("-z1*z2 + 2*w1*z2 + w1*w2"));
        assert_eq!(s.flow(2).c, FieldScalar::from_int(-1));
        assert_eq!(s.twist(), &ExpMonomial::int(-1, 1));
    }

    #[test]
    fn flow_pair_fallback_is_independent() {
        let g = gluing32();
        let f = SectionForm::new(form("z1*z2 + z1*w2 + w1*w2"), &g).unwrap();
        let basis = flow_form_space(&f, &g).unwrap();
        let (a, b) = choose_flow_pair(&basis, &f, &g, &[]).unwrap();
        let m = vec![
            bilinear_vector(f.form()),
            bilinear_vector(&a.form),
            bilinear_vector(&b.form),
        ];
        assert_eq!(rank(&m), 3);
    }

    #[test]
    fn flow_pair_degenerate_basis() {
        let g = gluing32();
        let f = SectionForm::new(form("z1*z2 + z1*w2 + w1*w2"), &g).unwrap();
        let trivial = FlowForm {
            form: f.form().clone(),
            c: FieldScalar::zero(),
        };
        let basis = vec![trivial.clone(), trivial.clone(), trivial];
        assert!(matches!(
            choose_flow_pair(&basis, &f, &g, &[]),
            Err(Error::DegenerateGluing(_))
        ));
    }

    #[test]
    fn intersection_points_exact() {
        let s = session32();
        let w = s.witnesses().unwrap();
        assert_eq!(w.p.0, pt("-2-sqrt(2)", "-1/sqrt(2)"));
        assert_eq!(w.p.1, pt("-2+sqrt(2)", "1/sqrt(2)"));
        assert_eq!(w.q.0, pt("-sqrt(2)", "-1+1/sqrt(2)"));
        assert_eq!(w.q.1, pt("sqrt(2)", "-1-1/sqrt(2)"));
        assert_eq!(w.extension, Some(2));
        for (h, pair) in [(&s.flow(1).form, &w.p), (&s.flow(2).form, &w.q)] {
            for p in [&pair.0, &pair.1] {
                assert!(s.f().eval(&p.first, &p.second).is_zero());
                assert!(h.eval(&p.first, &p.second).is_zero());
            }
        }
        assert!(check_distinct_witnesses([&w.p.0, &w.p.1, &w.q.0, &w.q.1]));
        assert!(!check_distinct_witnesses([&w.p.0, &w.p.0, &w.q.0, &w.q.1]));
    }

    #[test]
    fn projective_duplicates_are_detected() {
        let p = pt("-2-sqrt(2)", "-1/sqrt(2)");
        let two = FieldScalar::from_int(2);
        let scaled = SurfacePoint::new(
            ProjPoint::new(&p.first.a().clone() * &two, two.clone()).unwrap(),
            ProjPoint::new(&p.second.a().clone() * &two, two).unwrap(),
        );
        let other = pt("1", "2");
        assert!(!check_distinct_witnesses([
            &p,
            &scaled,
            &other,
            &pt("3", "4")
        ]));
    }

    #[test]
    fn intersection_errors() {
        let f = form("z1*z2 + z1*w2 + w1*w2");
        assert_eq!(intersection_points(&f, &f), Err(Error::DegeneratePencil));
        // same as f scaled
        assert_eq!(
            intersection_points(&f, &f.scale_scalar(&FieldScalar::from_int(3))),
            Err(Error::DegeneratePencil)
        );
        // det = 3z2² − 3z2w2 − w2² needs sqrt(21) while the session uses sqrt(2)
        let h = form("z1*z2 + w1*w2 - z1*w2");
        let g = form("z1*w2 + 3*w1*z2");
        let needs3 = intersection_points_in(&h, &g, Some(2));
        assert!(
            matches!(needs3, Err(Error::UnsupportedExtension { .. })),
            "{needs3:?}"
        );
        // tangency gives a double root
        let t1 = form("z1*z2 + w1*w2");
        let t2 = form("-z1*w2 + w1*z2 + 2*w1*w2");
        assert!(matches!(
            intersection_points(&t1, &t2),
            Err(Error::NonGenericData(_))
        ));
    }

    #[test]
    fn rational_intersection_and_infinity() {
        // z1 z2 − w1 w2 and z1 w2 − w1 z2 meet where (z2:w2) = ±1
        let (a, b) = intersection_points(&form("z1*z2 - w1*w2"), &form("z1*w2 - w1*z2")).unwrap();
        assert_eq!(a, pt("-1", "-1"));
        assert_eq!(b, pt("1", "1"));
        let (a, b) = intersection_points(&form("w1*w2 + z1*w2"), &form("z1*z2 + w1*w2")).unwrap();
        for p in [&a, &b] {
            assert!(form("w1*w2 + z1*w2").eval(&p.first, &p.second).is_zero());
            assert!(form("z1*z2 + w1*w2").eval(&p.first, &p.second).is_zero());
        }
        assert_ne!(a, b);
    }

    #[test]
    fn irrational_flow_constant_rejected() {
        // A = 1 section with a flow form whose constant is sqrt(2)
        let g = gluing32();
        let f = form("z1*z2 + z1*w2 + w1*w2");
        let r2 = q("sqrt(2)");
        let h = BiForm::bilinear_const(r2.clone(), FieldScalar::zero(), FieldScalar::zero(), -&r2);
        let s = SectionForm::new(f.clone(), &g).unwrap();
        let fit = FlowForm::fit(h.clone(), &s, &g).unwrap().unwrap();
        assert_eq!(fit.c, r2);
        let other = form("z1*z2 + 2*w1*z2 - w1*w2");
        assert!(matches!(
            Session::new(g, f, h, other, Some(2)),
            Err(Error::IrrationalFlowConstant(_))
        ));
    }
}
