//! Function specifications `g / f^m` for `construct` and `verify-commute`.

use gamma_ops::{parse_biform, validate_function, FunctionOnGamma, Session};

use crate::error::CliError;

/// Numerators of the four reference functions with their pole orders.
pub const PRESETS: [(&str, usize, &str); 4] = [
    ("lambda1", 1, "w1*z2"),
    ("lambda2", 2, "z1*w1*z2^2"),
    ("lambda3", 2, "z1*z2*w1*w2"),
    ("lambda4", 2, "z1*w1*w2^2 + z1^2*z2*w2"),
];

/// A parsed specification: pole order and numerator text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaSpec {
    pub label: String,
    pub pole_order: usize,
    pub numerator: String,
}

impl LambdaSpec {
    /// Accepts a preset name, `1` for the constant function, or `m:g` with
    /// `g` a bidegree-`(m, m)` form in `z1, w1, z2, w2`.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let text = text.trim();
        if let Some(&(name, m, g)) = PRESETS.iter().find(|p| p.0 == text) {
            return Ok(LambdaSpec {
                label: name.into(),
                pole_order: m,
                numerator: g.into(),
            });
        }
        if text == "1" {
            return Ok(LambdaSpec {
                label: "1".into(),
                pole_order: 0,
                numerator: "1".into(),
            });
        }
        let (m, g) = text.split_once(':').ok_or_else(|| {
            CliError::Validation(format!("lambda spec {text:?} is not a preset or m:g"))
        })?;
        let pole_order = m
            .trim()
            .parse()
            .map_err(|_| CliError::Validation(format!("bad pole order {m:?}")))?;
        Ok(LambdaSpec {
            label: text.into(),
            pole_order,
            numerator: g.trim().into(),
        })
    }

    pub fn function(&self, session: &Session) -> Result<FunctionOnGamma, CliError> {
        if self.pole_order == 0 {
            let g = parse_biform(&self.numerator, 0)?;
            let c = g
                .coeff(0, 0)
                .as_scalar()
                .ok_or(gamma_ops::Error::SpectralParameterOnly)?;
            return Ok(FunctionOnGamma::constant(c));
        }
        let g = parse_biform(&self.numerator, self.pole_order).map_err(|e| match e {
            gamma_ops::Error::Parse(m) => CliError::Validation(format!("lambda numerator: {m}")),
            other => CliError::Validation(format!("lambda numerator: {other}")),
        })?;
        Ok(validate_function(g, session)?)
    }
}

pub fn preset(i: usize) -> LambdaSpec {
    LambdaSpec::parse(PRESETS[i - 1].0).expect("preset")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SessionConfig;
    use gamma_ops::FieldScalar;

    #[test]
    fn presets_and_custom() {
        let s = SessionConfig::reference().build().unwrap();
        for i in 1..=4 {
            let l = preset(i).function(&s).unwrap();
            assert_eq!(l.pole_order(), PRESETS[i - 1].1);
        }
        let custom = LambdaSpec::parse("1: w1 z2").unwrap();
        assert_eq!(
            custom.function(&s).unwrap(),
            preset(1).function(&s).unwrap()
        );
        let one = LambdaSpec::parse("1").unwrap().function(&s).unwrap();
        assert_eq!(one, FunctionOnGamma::constant(FieldScalar::one()));
    }

    #[test]
    fn rejected_specs() {
        let s = SessionConfig::reference().build().unwrap();
        assert!(matches!(
            LambdaSpec::parse("w1 z2"),
            Err(CliError::Validation(_))
        ));
        assert!(matches!(
            LambdaSpec::parse("x:w1"),
            Err(CliError::Validation(_))
        ));
        assert!(matches!(
            LambdaSpec::parse("1:z1 z2").unwrap().function(&s),
            Err(CliError::Core(gamma_ops::Error::NotAFunctionOnGamma))
        ));
        assert!(matches!(
            LambdaSpec::parse("1:z1 +").unwrap().function(&s),
            Err(CliError::Validation(_))
        ));
    }
}
