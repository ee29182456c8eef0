//! Operator documents: versioned JSON, LaTeX and aligned plain text.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use serde::{Deserialize, Serialize};

use gamma_ops::operator::display_order;
use gamma_ops::{CoeffElem, DiffOp, ExpMonomial, FieldScalar, LaurentPoly, MatrixDiffOp};

use crate::config::ScalarRepr;
use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Latex,
    Text,
}

/// `c · e^{x·x + y·y}` with exponents as `"p/q"` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialDoc {
    pub x: String,
    pub y: String,
    pub c: ScalarRepr,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientDoc {
    pub num: Vec<MonomialDoc>,
    pub den: Vec<MonomialDoc>,
}

/// Coefficient of `∂x^a ∂y^b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub a: u32,
    pub b: u32,
    pub coefficient: CoefficientDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaDoc {
    pub pole_order: usize,
    pub numerator: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorDoc {
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<LambdaDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigen_check: Option<bool>,
    pub entries: [[Vec<TermDoc>; 2]; 2],
}

fn poly_doc(p: &LaurentPoly) -> Vec<MonomialDoc> {
    p.terms()
        .map(|(m, c)| MonomialDoc {
            x: m.x.to_string(),
            y: m.y.to_string(),
            c: ScalarRepr::from_scalar(c),
        })
        .collect()
}

fn poly_from_doc(doc: &[MonomialDoc]) -> Result<LaurentPoly, CliError> {
    let exponent = |s: &str| {
        Rational64::from_str(s.trim())
            .map_err(|_| CliError::Validation(format!("bad exponent {s:?}")))
    };
    let mut out = LaurentPoly::zero();
    for m in doc {
        let c = m.c.to_scalar().map_err(CliError::Validation)?;
        out.add_term(ExpMonomial::new(exponent(&m.x)?, exponent(&m.y)?), c);
    }
    Ok(out)
}

pub fn coefficient_doc(c: &CoeffElem) -> CoefficientDoc {
    CoefficientDoc {
        num: poly_doc(c.numerator()),
        den: poly_doc(c.denominator()),
    }
}

pub fn coefficient_from_doc(doc: &CoefficientDoc) -> Result<CoeffElem, CliError> {
    let num = poly_from_doc(&doc.num)?;
    let den = poly_from_doc(&doc.den)?;
    CoeffElem::new(num, den).map_err(CliError::from)
}

fn entry_doc(d: &DiffOp) -> Vec<TermDoc> {
    sorted_terms(d)
        .into_iter()
        .map(|((a, b), c)| TermDoc {
            a,
            b,
            coefficient: coefficient_doc(c),
        })
        .collect()
}

fn sorted_terms(d: &DiffOp) -> Vec<((u32, u32), &CoeffElem)> {
    let mut terms: Vec<_> = d.terms().map(|(k, c)| (*k, c)).collect();
    terms.sort_by(|x, y| display_order(&x.0, &y.0));
    terms
}

impl OperatorDoc {
    pub fn new(d: &MatrixDiffOp) -> Self {
        OperatorDoc {
            schema: SCHEMA_VERSION,
            lambda: None,
            eigen_check: None,
            entries: [
                [entry_doc(&d.e[0][0]), entry_doc(&d.e[0][1])],
                [entry_doc(&d.e[1][0]), entry_doc(&d.e[1][1])],
            ],
        }
    }

    pub fn operator(&self) -> Result<MatrixDiffOp, CliError> {
        if self.schema != SCHEMA_VERSION {
            return Err(CliError::Validation(format!(
                "unsupported schema {}",
                self.schema
            )));
        }
        let mut out = MatrixDiffOp::zero();
        for (i, row) in self.entries.iter().enumerate() {
            for (j, terms) in row.iter().enumerate() {
                let mut d = DiffOp::zero();
                for t in terms {
                    d.add_term(t.a, t.b, coefficient_from_doc(&t.coefficient)?);
                }
                out.e[i][j] = d;
            }
        }
        Ok(out)
    }
}

pub fn to_json(doc: &OperatorDoc) -> String {
    serde_json::to_string_pretty(doc).expect("operator document serializes")
}

pub fn parse_json(text: &str) -> Result<OperatorDoc, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn partial_latex(a: u32, b: u32) -> String {
    let one = |v: &str, k: u32| match k {
        0 => String::new(),
        1 => format!("\\partial_{v}"),
        k => format!("\\partial_{v}^{k}"),
    };
    format!("{}{}", one("x", a), one("y", b))
}

/// Positive rational content of a polynomial with rational coefficients,
/// signed like its leading displayed term.
fn content(p: &LaurentPoly) -> Option<(bool, BigRational)> {
    let mut num = None::<BigInt>;
    let mut den = None::<BigInt>;
    for (_, c) in p.terms() {
        let r = c.as_rational()?;
        num = Some(num.map_or_else(|| r.numer().gcd(r.numer()), |n| n.gcd(r.numer())));
        den = Some(den.map_or_else(|| r.denom().clone(), |d| d.lcm(r.denom())));
    }
    let negative = p
        .terms()
        .next_back()
        .and_then(|(_, c)| c.real_sign())
        .is_some_and(|o| o == std::cmp::Ordering::Less);
    Some((negative, BigRational::new(num?, den?)))
}

fn wrap(s: &str) -> String {
    format!("\\left({s}\\right)")
}

/// LaTeX for a coefficient as `(negative, body, body needs parentheses
/// before a derivative)`, with rational content pulled into the fraction.
fn coeff_latex(c: &CoeffElem) -> (bool, String, bool) {
    let Some((negative, k)) = content(c.numerator()) else {
        return (false, c.render(true), true);
    };
    let sign = if negative {
        -FieldScalar::one()
    } else {
        FieldScalar::one()
    };
    let unit = FieldScalar::Rational(k.clone());
    let prim = c.numerator().scale(&(&sign / &unit));
    let (p, q) = (k.numer().to_string(), k.denom().to_string());
    let n = prim.render(true);
    let multi = prim.len() > 1;
    let num = match (p.as_str(), n.as_str()) {
        ("1", _) => n.clone(),
        (_, "1") => p.clone(),
        _ if multi => format!("{p}{}", wrap(&n)),
        _ => format!("{p}{n}"),
    };
    let den = c.denominator();
    if den.is_one() && q == "1" {
        return (negative, num, multi && p == "1");
    }
    let d = den.render(true);
    let den_text = match (q.as_str(), den.is_one()) {
        (_, true) => q.clone(),
        ("1", false) => d,
        (_, false) if den.len() > 1 => format!("{q}{}", wrap(&d)),
        _ => format!("{q}{d}"),
    };
    (negative, format!("\\frac{{{num}}}{{{den_text}}}"), false)
}

/// Entry in LaTeX, monomials by total order then `∂x`-degree descending.
pub fn entry_latex(d: &DiffOp) -> String {
    let terms = sorted_terms(d);
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, ((a, b), c)) in terms.into_iter().enumerate() {
        let (negative, body, paren) = coeff_latex(c);
        let partial = partial_latex(a, b);
        let term = if partial.is_empty() {
            body
        } else if body == "1" {
            partial
        } else if paren {
            format!("{}{partial}", wrap(&body))
        } else {
            format!("{body}{partial}")
        };
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&term);
    }
    out
}

pub fn to_latex(d: &MatrixDiffOp) -> String {
    let row = |i: usize| format!("{} & {}", entry_latex(&d.e[i][0]), entry_latex(&d.e[i][1]));
    format!(
        "\\left(\\begin{{array}}{{cc}}\n{} \\\\\n{}\n\\end{{array}}\\right)",
        row(0),
        row(1)
    )
}

/// One `[i,j] = …` line per entry, indices from 1.
pub fn to_text(d: &MatrixDiffOp) -> String {
    let mut out = String::new();
    for i in 0..2 {
        for j in 0..2 {
            out.push_str(&format!("[{},{}] = {}\n", i + 1, j + 1, d.e[i][j].render()));
        }
    }
    out
}

pub fn render(doc: &OperatorDoc, d: &MatrixDiffOp, format: Format) -> String {
    match format {
        Format::Json => to_json(doc),
        Format::Latex => to_latex(d),
        Format::Text => to_text(d),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use gamma_ops::parse_coeff;

    fn quarter_total() -> DiffOp {
        let q = CoeffElem::frac(1, 4);
        &DiffOp::term(1, 0, q.clone()) + &DiffOp::term(0, 1, q)
    }

    #[test]
    fn diagonal_json_shape() {
        let d = MatrixDiffOp::diagonal(quarter_total());
        let doc = OperatorDoc::new(&d);
        let v: serde_json::Value = serde_json::from_str(&to_json(&doc)).unwrap();
        assert_eq!(v["schema"], 1);
        let e00 = v["entries"][0][0].as_array().unwrap();
        assert_eq!(e00.len(), 2);
        assert_eq!(
            (e00[0]["a"].as_u64(), e00[0]["b"].as_u64()),
            (Some(1), Some(0))
        );
        assert_eq!(
            (e00[1]["a"].as_u64(), e00[1]["b"].as_u64()),
            (Some(0), Some(1))
        );
        assert_eq!(e00[0]["coefficient"]["num"][0]["c"], "1/4");
        assert_eq!(e00[0]["coefficient"]["den"][0]["c"], "1");
        assert!(v["entries"][0][1].as_array().unwrap().is_empty());
        assert_eq!(parse_json(&to_json(&doc)).unwrap().operator().unwrap(), d);
    }

    #[test]
    fn zero_matrix_has_empty_entries() {
        let doc = OperatorDoc::new(&MatrixDiffOp::zero());
        assert!(doc.entries.iter().flatten().all(Vec::is_empty));
    }

    #[test]
    fn round_trip_with_surds_and_fractional_exponents() {
        let c = parse_coeff("sqrt(2)*e^(x/2-y)/(e^x-3*e^y)").unwrap();
        let d = MatrixDiffOp::new([
            [DiffOp::term(2, 1, c.clone()), DiffOp::zero()],
            [
                DiffOp::coeff(CoeffElem::scalar(FieldScalar::frac(-5, 3))),
                DiffOp::term(0, 3, -c),
            ],
        ]);
        let doc = OperatorDoc::new(&d);
        assert_eq!(parse_json(&to_json(&doc)).unwrap().operator().unwrap(), d);
    }

    #[test]
    fn latex_order_and_text() {
        let d = MatrixDiffOp::diagonal(quarter_total());
        let tex = to_latex(&d);
        assert!(tex.starts_with("\\left(\\begin{array}{cc}"));
        assert!(tex.contains("\\frac{1}{4}\\partial_x + \\frac{1}{4}\\partial_y & 0"));
        let text = to_text(&d);
        assert_eq!(text.lines().next(), Some("[1,1] = (1/4)*dx + (1/4)*dy"));
        let op = &DiffOp::term(0, 2, CoeffElem::one()) - &DiffOp::term(2, 0, CoeffElem::u());
        assert_eq!(entry_latex(&op), "-e^x\\partial_x^2 + \\partial_y^2");
    }

    #[test]
    fn latex_pulls_out_rational_content() {
        let c = parse_coeff("e^(x+y)/(16*(e^x-e^y))").unwrap();
        let op = &DiffOp::term(2, 0, c.clone())
            - &DiffOp::term(0, 0, c.scale(&FieldScalar::from_int(2)));
        assert_eq!(
            entry_latex(&op),
            "\\frac{e^{x+y}}{16\\left(e^x-e^y\\right)}\\partial_x^2 - \\frac{e^{x+y}}{8\\left(e^x-e^y\\right)}"
        );
        let poly = DiffOp::term(1, 1, parse_coeff("-(e^x - 2*e^y)/3").unwrap());
        assert_eq!(
            entry_latex(&poly),
            "-\\frac{e^x-2e^y}{3}\\partial_x\\partial_y"
        );
        let unit = DiffOp::term(0, 1, parse_coeff("2 - e^y").unwrap());
        assert_eq!(entry_latex(&unit), "-\\left(e^y-2\\right)\\partial_y");
    }

    #[test]
    fn malformed_json_rejected() {
        assert!(matches!(
            parse_json("{\"schema\": 1,"),
            Err(CliError::Parse { .. })
        ));
        let mut doc = OperatorDoc::new(&MatrixDiffOp::identity());
        doc.schema = 2;
        assert!(doc.operator().is_err());
    }
}
