//! Subcommand bodies. Each returns the text for stdout and the exit status;
//! diagnostics for stderr are collected separately.

use std::path::Path;

use gamma_ops::{default_basis, verify_commute_pair, MatrixDiffOp};

use crate::config::{parse_session, SessionConfig};
use crate::emit::{self, Format, OperatorDoc};
use crate::error::CliError;
use crate::lambda::LambdaSpec;
use crate::report::{golden_for, operator_report, rank_table, reproduce};

#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub status: i32,
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_session(path: Option<&Path>) -> Result<SessionConfig, CliError> {
    match path {
        Some(p) => parse_session(&read_file(p)?),
        None => Ok(SessionConfig::reference()),
    }
}

pub fn cmd_reproduce(config: &SessionConfig, format: Format, quiet: bool) -> Outcome {
    let golden = golden_for(config);
    let rep = reproduce(config, golden.as_ref());
    let mut out = Outcome {
        status: if rep.passed() { 0 } else { 1 },
        ..Outcome::default()
    };
    for op in &rep.operators {
        out.stderr.push_str(&format!(
            "D({}) solved in {:.3} s\n",
            op.lambda,
            op.elapsed.as_secs_f64()
        ));
    }
    out.stdout = match format {
        Format::Json => serde_json::to_string_pretty(&rep).expect("report serializes") + "\n",
        Format::Text | Format::Latex if quiet => match rep.first_failure() {
            Some(c) => format!("FAIL  {}  {}\n", c.name, c.detail),
            None => String::new(),
        },
        Format::Text | Format::Latex => {
            let mut s = rep.render_table();
            for (p, ratio) in &rep.ratios {
                s.push_str(&format!("\nh1/h2 at {p} = {ratio}"));
            }
            if let Some(d1) = rep.operators.first() {
                s.push_str("\n\nD(lambda1) =\n");
                s.push_str(&if format == Format::Latex {
                    emit::to_latex(&d1.matrix) + "\n"
                } else {
                    emit::to_text(&d1.matrix)
                });
            }
            s.push_str(&match rep.first_failure() {
                Some(c) => format!("\nfailed: {}\n", c.name),
                None => "\nall checks passed\n".into(),
            });
            s
        }
    };
    out
}

pub fn cmd_construct(
    config: &SessionConfig,
    spec: &str,
    format: Format,
) -> Result<Outcome, CliError> {
    let spec = LambdaSpec::parse(spec)?;
    let session = config.build()?;
    let lambda = spec.function(&session)?;
    let basis = default_basis(&session)?;
    let rep = operator_report(&spec, lambda, &basis, &session, &[])?;
    let mut stdout = emit::render(&rep.operator, &rep.matrix, format);
    if format != Format::Json {
        stdout.push_str(&format!(
            "\neigen check: {}\n",
            if rep.eigen_check { "pass" } else { "FAIL" }
        ));
    } else {
        stdout.push('\n');
    }
    Ok(Outcome {
        stdout,
        stderr: format!("solved in {:.3} s\n", rep.elapsed.as_secs_f64()),
        status: if rep.eigen_check { 0 } else { 1 },
    })
}

pub fn cmd_verify_commute(
    config: &SessionConfig,
    lambdas: &[String],
    operators: &[&Path],
) -> Result<Outcome, CliError> {
    let mut named: Vec<(String, MatrixDiffOp)> = Vec::new();
    for path in operators {
        let doc = emit::parse_json(&read_file(path)?)?;
        named.push((path.display().to_string(), doc.operator()?));
    }
    if !lambdas.is_empty() {
        let session = config.build()?;
        let basis = default_basis(&session)?;
        for l in lambdas {
            let spec = LambdaSpec::parse(l)?;
            let f = spec.function(&session)?;
            let rep = operator_report(&spec, f, &basis, &session, &[])?;
            named.push((format!("D({})", spec.label), rep.matrix));
        }
    }
    if named.len() < 2 {
        return Err(CliError::Validation(
            "verify-commute needs at least two operators".into(),
        ));
    }
    let mut out = Outcome::default();
    for i in 0..named.len() {
        for j in i + 1..named.len() {
            let ok = verify_commute_pair(&named[i].1, &named[j].1);
            out.stdout.push_str(&format!(
                "{}  [{}, {}]\n",
                if ok { "PASS" } else { "FAIL" },
                named[i].0,
                named[j].0
            ));
            if !ok {
                out.status = 1;
            }
        }
    }
    Ok(out)
}

pub fn cmd_rank(config: &SessionConfig, n_max: usize, format: Format) -> Result<Outcome, CliError> {
    if n_max == 0 {
        return Err(CliError::Validation("n-max must be at least 1".into()));
    }
    let session = config.build()?;
    let rows = rank_table(&session, n_max);
    let mut out = Outcome::default();
    if rows.iter().any(|r| r.rank != r.expected) {
        out.status = 1;
    }
    out.stdout = match format {
        Format::Json => {
            let v: Vec<_> = rows
                .iter()
                .map(|r| serde_json::json!({"n": r.n, "rank": r.rank, "expected": r.expected, "match": r.rank == r.expected}))
                .collect();
            serde_json::to_string_pretty(&v).expect("rank table serializes") + "\n"
        }
        _ => {
            let mut s = format!("{:>3}  {:>6}  {:>8}  match\n", "n", "rank", "n(n+1)");
            for r in &rows {
                let mark = if r.rank == r.expected { "✓" } else { "✗" };
                s.push_str(&format!(
                    "{:>3}  {:>6}  {:>8}  {mark}\n",
                    r.n, r.rank, r.expected
                ));
            }
            s
        }
    };
    Ok(out)
}

pub fn cmd_emit(input: &Path, format: Format) -> Result<Outcome, CliError> {
    let doc: OperatorDoc = emit::parse_json(&read_file(input)?)?;
    let d = doc.operator()?;
    let mut stdout = emit::render(&doc, &d, format);
    if !stdout.ends_with('\n') {
        stdout.push('\n');
    }
    Ok(Outcome {
        stdout,
        ..Outcome::default()
    })
}
