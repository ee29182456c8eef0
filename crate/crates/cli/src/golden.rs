//! Transcribed reference values and entry-by-entry comparison.

use serde::Deserialize;

use gamma_ops::{
    parse_coeff, parse_operator, CoeffElem, DiffOp, FieldScalar, MatrixDiffOp, ProjPoint,
    SurfacePoint,
};

use crate::error::CliError;

pub const REFERENCE_GOLDEN: &str = include_str!("../golden/reference.toml");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Clean,
    UnverifiedTranscription,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenPoint {
    pub name: String,
    pub first: String,
    pub second: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenRatio {
    pub point: String,
    pub expr: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenEntry {
    pub lambda: usize,
    pub row: usize,
    pub col: usize,
    pub status: Status,
    pub expr: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Golden {
    pub point: Vec<GoldenPoint>,
    pub ratio: Vec<GoldenRatio>,
    pub entry: Vec<GoldenEntry>,
}

impl Golden {
    pub fn reference() -> Self {
        toml::from_str(REFERENCE_GOLDEN).expect("golden file is valid")
    }

    pub fn point(&self, name: &str) -> Result<SurfacePoint, CliError> {
        let p = self
            .point
            .iter()
            .find(|p| p.name == name)
            .ok_or_else(|| CliError::Validation(format!("no golden point {name}")))?;
        let affine = |s: &str| -> Result<ProjPoint, CliError> {
            let c = parse_coeff(s)?;
            let v: FieldScalar = c
                .as_scalar()
                .ok_or_else(|| CliError::Validation(format!("{s:?} is not a constant")))?;
            Ok(ProjPoint::affine(v))
        };
        Ok(SurfacePoint::new(affine(&p.first)?, affine(&p.second)?))
    }

    pub fn ratio(&self, point: &str) -> Result<CoeffElem, CliError> {
        let r = self
            .ratio
            .iter()
            .find(|r| r.point == point)
            .ok_or_else(|| CliError::Validation(format!("no golden ratio at {point}")))?;
        Ok(parse_coeff(&r.expr)?)
    }

    pub fn entries(&self, lambda: usize) -> impl Iterator<Item = &GoldenEntry> {
        self.entry.iter().filter(move |e| e.lambda == lambda)
    }
}

impl GoldenEntry {
    pub fn operator(&self) -> Result<Option<DiffOp>, CliError> {
        match &self.expr {
            None => Ok(None),
            Some(s) => Ok(Some(DiffOp::from_terms(parse_operator(s)?))),
        }
    }
}

/// Result of comparing one computed entry with its transcription.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EntryOutcome {
    Match,
    /// Computed minus transcribed.
    Mismatch(DiffOp),
    Exempt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryDiff {
    pub lambda: usize,
    pub row: usize,
    pub col: usize,
    pub outcome: EntryOutcome,
}

impl EntryDiff {
    pub fn label(&self) -> String {
        format!("[D(lambda{})]_{}{}", self.lambda, self.row, self.col)
    }
}

pub fn diff_operator(
    golden: &Golden,
    lambda: usize,
    d: &MatrixDiffOp,
) -> Result<Vec<EntryDiff>, CliError> {
    golden
        .entries(lambda)
        .map(|e| {
            let computed = d.entry(e.row - 1, e.col - 1);
            let outcome = match (e.status, e.operator()?) {
                (Status::UnverifiedTranscription, _) | (_, None) => EntryOutcome::Exempt,
                (Status::Clean, Some(printed)) => {
                    let diff = computed - &printed;
                    if diff.is_zero() {
                        EntryOutcome::Match
                    } else {
                        EntryOutcome::Mismatch(diff)
                    }
                }
            };
            Ok(EntryDiff {
                lambda,
                row: e.row,
                col: e.col,
                outcome,
            })
        })
        .collect()
}

/// The transcribed matrix with computed values in exempt slots.
pub fn printed_operator(
    golden: &Golden,
    lambda: usize,
    computed: &MatrixDiffOp,
) -> Result<MatrixDiffOp, CliError> {
    let mut out = computed.clone();
    for e in golden.entries(lambda) {
        if let (Status::Clean, Some(op)) = (e.status, e.operator()?) {
            out.e[e.row - 1][e.col - 1] = op;
        }
    }
    Ok(out)
}
