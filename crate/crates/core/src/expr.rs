//! Plain-text expressions for coefficients, forms and operators.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/')? unary)*        juxtaposition multiplies
//! unary   := '-' unary | power
//! power   := atom ('^' ['-'] integer)?
//! atom    := number | 'e^' exponent | 'sqrt(' integer ')' | '(' expr ')'
//!          | 'u' | 'v' | 'z1' | 'w1' | 'z2' | 'w2' | 'dx' | 'dy'
//! exponent:= 'x' | 'y' | integer | '(' linear ')' | '{' linear '}'
//! linear  := ['-'] [rational] ('x' | 'y' | '') (('+'|'-') ...)*
//! ```
//!
//! Form variables `z1 w1 z2 w2` and operator symbols `dx dy` are treated as
//! commuting indeterminates with coefficients on the left, which matches the
//! usual way operators are written. Division is only allowed by expressions
//! free of those symbols.

use std::collections::BTreeMap;

use num_rational::Rational64;

use crate::biform::BiForm;
use crate::coeff::CoeffElem;
use crate::error::{Error, Result};
use crate::laurent::ExpMonomial;
use crate::scalar::FieldScalar;

/// Exponents of `z1, w1, z2, w2, dx, dy`.
pub type SymbolPowers = [u32; 6];

const SYMBOLS: [&str; 6] = ["z1", "w1", "z2", "w2", "dx", "dy"];

/// Polynomial in the form and operator symbols with `CoeffElem` coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SymbolPoly {
    terms: BTreeMap<SymbolPowers, CoeffElem>,
}

impl SymbolPoly {
    fn constant(c: CoeffElem) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert([0; 6], c);
        }
        SymbolPoly { terms }
    }

    fn symbol(i: usize) -> Self {
        let mut key = [0; 6];
        key[i] = 1;
        SymbolPoly {
            terms: BTreeMap::from([(key, CoeffElem::one())]),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SymbolPowers, &CoeffElem)> {
        self.terms.iter()
    }

    /// The value if no symbol occurs.
    pub fn as_coeff(&self) -> Option<CoeffElem> {
        match self.terms.len() {
            0 => Some(CoeffElem::zero()),
            1 => self.terms.get(&[0; 6]).cloned(),
            _ => None,
        }
    }

    fn add(&self, other: &Self, sign: bool) -> Self {
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            let entry = terms.entry(*k).or_insert_with(CoeffElem::zero);
            *entry = if sign { &*entry + c } else { &*entry - c };
            if entry.is_zero() {
                terms.remove(k);
            }
        }
        SymbolPoly { terms }
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = SymbolPoly::default();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let mut k = [0; 6];
                for i in 0..6 {
                    k[i] = k1[i] + k2[i];
                }
                let term = SymbolPoly {
                    terms: BTreeMap::from([(k, c1 * c2)]),
                };
                out = out.add(&term, true);
            }
        }
        out
    }

    fn scale(&self, c: &CoeffElem) -> Self {
        SymbolPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (*k, v * c))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }
}

/// Parses an expression with no form or operator symbols.
pub fn parse_coeff(s: &str) -> Result<CoeffElem> {
    parse_symbols(s)?
        .as_coeff()
        .ok_or_else(|| Error::Parse(format!("expected a coefficient expression: {s}")))
}

/// Parses a bihomogeneous form of bidegree `(n, n)` in `z1 w1 z2 w2`.
pub fn parse_biform(s: &str, n: usize) -> Result<BiForm> {
    let p = parse_symbols(s)?;
    let mut out = BiForm::zero(n);
    for (k, c) in p.terms() {
        let [z1, w1, z2, w2, dx, dy] = k.map(|e| e as usize);
        if dx + dy > 0 {
            return Err(Error::Parse("operator symbols in a form".into()));
        }
        if z1 + w1 != n || z2 + w2 != n {
            return Err(Error::Parse(format!(
                "term is not of bidegree ({n},{n}): {s}"
            )));
        }
        out.set_coeff(z1, z2, c.clone());
    }
    Ok(out)
}

/// Parses a differential operator `Σ c·dx^a·dy^b`; returns `(a, b) → c`.
pub fn parse_operator(s: &str) -> Result<BTreeMap<(u32, u32), CoeffElem>> {
    let p = parse_symbols(s)?;
    let mut out = BTreeMap::new();
    for (k, c) in p.terms() {
        if k[..4].iter().any(|&e| e > 0) {
            return Err(Error::Parse("form variables in an operator".into()));
        }
        out.insert((k[4], k[5]), c.clone());
    }
    Ok(out)
}

/// Parses the full grammar.
pub fn parse_symbols(s: &str) -> Result<SymbolPoly> {
    let mut p = Parser {
        src: s.as_bytes(),
        pos: 0,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn starts_with(&mut self, word: &str) -> bool {
        self.skip_ws();
        self.src[self.pos..].starts_with(word.as_bytes())
    }

    fn expr(&mut self) -> Result<SymbolPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?, true);
            } else if self.eat(b'-') {
                acc = acc.add(&self.term()?, false);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<SymbolPoly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat(b'/') {
                let rhs = self.unary()?;
                let d = rhs
                    .as_coeff()
                    .ok_or_else(|| self.error("division by a symbolic expression"))?;
                let inv = d.inv().map_err(|_| self.error("division by zero"))?;
                acc = acc.scale(&inv);
            } else if self.starts_atom() {
                acc = acc.mul(&self.power()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_atom(&mut self) -> bool {
        matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'(')
    }

    fn unary(&mut self) -> Result<SymbolPoly> {
        if self.eat(b'-') {
            let v = self.unary()?;
            return Ok(v.scale(&CoeffElem::from_int(-1)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<SymbolPoly> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let neg = self.eat(b'-');
        let e = self.integer()?;
        let e = u32::try_from(e).map_err(|_| self.error("exponent too large"))?;
        if neg {
            let c = base
                .as_coeff()
                .ok_or_else(|| self.error("negative power of a symbolic expression"))?;
            let v = c
                .pow(-(e as i32))
                .map_err(|_| self.error("negative power of zero"))?;
            return Ok(SymbolPoly::constant(v));
        }
        let mut acc = SymbolPoly::constant(CoeffElem::one());
        for _ in 0..e {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| self.error("integer out of range"))
    }

    fn atom(&mut self) -> Result<SymbolPoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(SymbolPoly::constant(CoeffElem::from_int(n)))
            }
            Some(_) => {
                if self.starts_with("sqrt") {
                    self.pos += 4;
                    self.expect(b'(')?;
                    let d = self.integer()?;
                    self.expect(b')')?;
                    let r = FieldScalar::from_int(d)
                        .sqrt()
                        .ok_or_else(|| self.error("square root outside Q(sqrt d)"))?;
                    return Ok(SymbolPoly::constant(r.into()));
                }
                if self.starts_with("e^") {
                    self.pos += 2;
                    let m = self.exponent()?;
                    return Ok(SymbolPoly::constant(CoeffElem::monomial(m)));
                }
                for (i, name) in SYMBOLS.iter().enumerate() {
                    if self.starts_with(name) {
                        self.pos += name.len();
                        return Ok(SymbolPoly::symbol(i));
                    }
                }
                if self.eat(b'u') {
                    return Ok(SymbolPoly::constant(CoeffElem::u()));
                }
                if self.eat(b'v') {
                    return Ok(SymbolPoly::constant(CoeffElem::v()));
                }
                Err(self.error("unexpected character"))
            }
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn exponent(&mut self) -> Result<ExpMonomial> {
        let close = match self.peek() {
            Some(b'(') => b')',
            Some(b'{') => b'}',
            Some(b'x') => {
                self.pos += 1;
                return Ok(ExpMonomial::int(1, 0));
            }
            Some(b'y') => {
                self.pos += 1;
                return Ok(ExpMonomial::int(0, 1));
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                if n != 0 {
                    return Err(self.error("constant exponent must be 0"));
                }
                return Ok(ExpMonomial::ONE);
            }
            _ => return Err(self.error("expected exponent")),
        };
        self.pos += 1;
        let mut x = Rational64::from_integer(0);
        let mut y = Rational64::from_integer(0);
        let mut first = true;
        loop {
            if self.eat(close) {
                if first {
                    return Err(self.error("empty exponent"));
                }
                return Ok(ExpMonomial::new(x, y));
            }
            let sign = if self.eat(b'-') {
                -1
            } else if self.eat(b'+') || first {
                1
            } else {
                return Err(self.error("expected '+' or '-' in exponent"));
            };
            first = false;
            let mut coeff = Rational64::from_integer(sign);
            let has_num = matches!(self.peek(), Some(c) if c.is_ascii_digit());
            if has_num {
                let n = self.integer()?;
                let mut r = Rational64::from_integer(n);
                if self.eat(b'/') {
                    let d = self.integer()?;
                    if d == 0 {
                        return Err(self.error("zero denominator"));
                    }
                    r /= d;
                }
                coeff *= r;
            }
            self.eat(b'*');
            let target = match self.peek() {
                Some(b'x') => &mut x,
                Some(b'y') => &mut y,
                _ if has_num && coeff == Rational64::from_integer(0) => continue,
                _ => return Err(self.error("exponents must be linear in x and y")),
            };
            self.pos += 1;
            if self.eat(b'/') {
                let d = self.integer()?;
                if d == 0 {
                    return Err(self.error("zero denominator"));
                }
                coeff /= d;
            }
            *target += coeff;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> CoeffElem {
        parse_coeff(s).unwrap()
    }

    #[test]
    fn exponentials_and_fractions() {
        assert_eq!(
            c("e^(x-y)"),
            &CoeffElem::u() * &CoeffElem::v().inv().unwrap()
        );
        assert_eq!(c("e^{2x}"), CoeffElem::exp(2, 0));
        assert_eq!(
            c("2e^x + e^y"),
            &CoeffElem::u().scale(&2.into()) + &CoeffElem::v()
        );
        assert_eq!(c("e^(x+y)/(e^x-e^y)^2"), {
            let d = &CoeffElem::u() - &CoeffElem::v();
            CoeffElem::exp(1, 1).checked_div(&(&d * &d)).unwrap()
        });
        assert_eq!(c("1/4"), CoeffElem::frac(1, 4));
        assert_eq!(c("e^(x/2)*e^(x/2)"), CoeffElem::u());
        assert_eq!(c("e^(-x-y)*e^x*e^y"), CoeffElem::one());
        assert_eq!(c("e^0"), CoeffElem::one());
    }

    #[test]
    fn square_roots() {
        let r = c("1/sqrt(2)");
        assert_eq!(&r * &r, CoeffElem::frac(1, 2));
    }

    #[test]
    fn forms_and_operators() {
        let f = parse_biform("z1 z2 + z1*w2 + w1*w2", 1).unwrap();
        assert_eq!(
            f,
            BiForm::bilinear_const(1.into(), 1.into(), 0.into(), 1.into())
        );
        assert!(parse_biform("z1*z2 + w1", 1).is_err());
        let op = parse_operator("1/4*(dx+dy)^2").unwrap();
        assert_eq!(op.len(), 3);
        assert_eq!(op[&(1, 1)], CoeffElem::frac(1, 2));
        assert!(parse_operator("z1*dx").is_err());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_coeff("(e^x").unwrap_err();
        assert!(
            matches!(e, Error::Parse(ref m) if m.contains("offset 4")),
            "{e:?}"
        );
        assert!(parse_coeff("1/(e^x-e^x)").is_err());
        assert!(parse_coeff("e^(x*y)").is_err());
        assert!(parse_coeff("dx/dy").is_err());
    }
}
