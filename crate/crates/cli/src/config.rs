//! Session files: gluing points, gluing factor, section form, optional
//! flow-form preferences and quadratic extension, as TOML with exact
//! scalars written as `"p/q"` strings or `{ a, b, d }` tables for `a + b√d`.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use gamma_ops::{check_section, BiForm, FieldScalar, GluingData, ProjPoint, Session};

use crate::error::CliError;

/// The built-in reference session.
pub const REFERENCE_SESSION: &str = include_str!("../sessions/reference.toml");

/// Exact scalar as it appears in documents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarRepr {
    Text(String),
    Quadratic { a: String, b: String, d: i64 },
}

impl ScalarRepr {
    pub fn from_scalar(s: &FieldScalar) -> Self {
        match s {
            FieldScalar::Rational(r) => ScalarRepr::Text(r.to_string()),
            FieldScalar::QuadExt(q) => ScalarRepr::Quadratic {
                a: q.rational_part().to_string(),
                b: q.irrational_part().to_string(),
                d: q.radicand(),
            },
        }
    }

    pub fn to_scalar(&self) -> Result<FieldScalar, String> {
        let rational = |s: &str| -> Result<BigRational, String> {
            match s.trim().parse::<FieldScalar>() {
                Ok(FieldScalar::Rational(r)) => Ok(r),
                Ok(_) => Err(format!("expected a rational, got {s:?}")),
                Err(e) => Err(format!("{s:?}: {e}")),
            }
        };
        match self {
            ScalarRepr::Text(s) => rational(s).map(FieldScalar::Rational),
            ScalarRepr::Quadratic { a, b, d } => {
                FieldScalar::try_quadratic(rational(a)?, rational(b)?, *d)
                    .map_err(|e| e.to_string())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawForm {
    alpha: ScalarRepr,
    beta: ScalarRepr,
    gamma: ScalarRepr,
    delta: ScalarRepr,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSession {
    p1: [ScalarRepr; 2],
    p2: [ScalarRepr; 2],
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    factor: Option<ScalarRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d: Option<i64>,
    section: RawForm,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    flow_preferences: Vec<RawForm>,
}

/// Coefficients `(α, β, γ, δ)` of `α z₁z₂ + β z₁w₂ + γ w₁z₂ + δ w₁w₂`.
pub type BilinearCoeffs = [FieldScalar; 4];

/// Validated session configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SessionConfig {
    pub p1: ProjPoint,
    pub p2: ProjPoint,
    pub factor: Option<FieldScalar>,
    pub section: BilinearCoeffs,
    pub flow_preferences: Vec<BilinearCoeffs>,
    pub extension: Option<i64>,
}

impl SessionConfig {
    pub fn reference() -> Self {
        parse_session(REFERENCE_SESSION).expect("reference session is valid")
    }

    pub fn section_form(&self) -> BiForm {
        bilinear(&self.section)
    }

    /// Solves for the flow forms and assembles the computation session.
    pub fn build(&self) -> Result<Session, gamma_ops::Error> {
        let section = self.section_form();
        let factor = match &self.factor {
            Some(a) => a.clone(),
            None => {
                check_section(&section, &self.p1, &self.p2)?.ok_or(gamma_ops::Error::NotASection)?
            }
        };
        let gluing = GluingData::new(self.p1.clone(), self.p2.clone(), factor)?;
        let prefs: Vec<BiForm> = self.flow_preferences.iter().map(bilinear).collect();
        Session::resolve(gluing, section, &prefs, self.extension)
    }

    /// Serializes to the session file format.
    pub fn to_toml(&self) -> String {
        let point = |p: &ProjPoint| {
            [
                ScalarRepr::from_scalar(p.a()),
                ScalarRepr::from_scalar(p.b()),
            ]
        };
        let form = |c: &BilinearCoeffs| RawForm {
            alpha: ScalarRepr::from_scalar(&c[0]),
            beta: ScalarRepr::from_scalar(&c[1]),
            gamma: ScalarRepr::from_scalar(&c[2]),
            delta: ScalarRepr::from_scalar(&c[3]),
        };
        let raw = RawSession {
            p1: point(&self.p1),
            p2: point(&self.p2),
            factor: self.factor.as_ref().map(ScalarRepr::from_scalar),
            d: self.extension,
            section: form(&self.section),
            flow_preferences: self.flow_preferences.iter().map(form).collect(),
        };
        toml::to_string(&raw).expect("session serializes")
    }
}

fn bilinear(c: &BilinearCoeffs) -> BiForm {
    BiForm::bilinear_const(c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone())
}

/// Parses and validates a session document.
pub fn parse_session(text: &str) -> Result<SessionConfig, CliError> {
    let raw: RawSession = toml::from_str(text).map_err(|e| {
        let (line, column) = e
            .span()
            .map(|s| line_column(text, s.start))
            .unwrap_or((0, 0));
        CliError::Parse {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;
    let scalar = |r: &ScalarRepr, what: &str| -> Result<FieldScalar, CliError> {
        r.to_scalar()
            .map_err(|e| CliError::Validation(format!("{what}: {e}")))
    };
    let point = |p: &[ScalarRepr; 2], what: &str| -> Result<ProjPoint, CliError> {
        let a = scalar(&p[0], what)?;
        let b = scalar(&p[1], what)?;
        ProjPoint::new(a, b).map_err(|_| CliError::Validation(format!("{what} is (0:0)")))
    };
    let form = |f: &RawForm, what: &str| -> Result<BilinearCoeffs, CliError> {
        Ok([
            scalar(&f.alpha, what)?,
            scalar(&f.beta, what)?,
            scalar(&f.gamma, what)?,
            scalar(&f.delta, what)?,
        ])
    };

    let p1 = point(&raw.p1, "p1")?;
    let p2 = point(&raw.p2, "p2")?;
    if p1 == p2 {
        return Err(CliError::Validation("p1 equals p2".into()));
    }
    let factor = raw.factor.as_ref().map(|a| scalar(a, "A")).transpose()?;
    if factor.as_ref().is_some_and(FieldScalar::is_zero) {
        return Err(CliError::Validation("A equals 0".into()));
    }
    if let Some(d) = raw.d {
        FieldScalar::try_quadratic(rat("0"), rat("1"), d)
            .map_err(|e| CliError::Validation(format!("d: {e}")))?;
    }
    let section = form(&raw.section, "section")?;
    if section.iter().all(FieldScalar::is_zero) {
        return Err(CliError::Validation("section form is zero".into()));
    }
    let flow_preferences = raw
        .flow_preferences
        .iter()
        .enumerate()
        .map(|(i, f)| form(f, &format!("flow_preferences[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;

    let config = SessionConfig {
        p1,
        p2,
        factor,
        section,
        flow_preferences,
        extension: raw.d,
    };
    let mut exts: Vec<i64> = config
        .section
        .iter()
        .chain(config.flow_preferences.iter().flatten())
        .chain(config.factor.iter())
        .chain([config.p1.a(), config.p2.a()])
        .filter_map(FieldScalar::extension)
        .chain(config.extension)
        .collect();
    exts.sort_unstable();
    exts.dedup();
    if let [first, other, ..] = exts[..] {
        return Err(CliError::Validation(format!(
            "scalars use both sqrt({first}) and sqrt({other})"
        )));
    }
    Ok(config)
}

fn rat(s: &str) -> BigRational {
    s.parse().expect("literal rational")
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before
        .rfind('\n')
        .map_or(before.len(), |i| before.len() - i - 1)
        + 1;
    (line, column)
}
