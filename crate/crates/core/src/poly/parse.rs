//! Text grammar for forms:
//!
//! ```text
//! poly   ::= [sign] term { sign term }
//! term   ::= [coef '*'] factor { '*' factor }
//! factor ::= 'x' INDEX [ '^' EXP ]
//! coef   ::= [sign] INT [ '/' INT ]
//! ```
//!
//! Whitespace is insignificant. Repeated factors multiply (`x0*x0 = x0^2`).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{ExponentVector, HomogeneousPoly};
use crate::error::{Error, Result};
use crate::num::Rational;

struct RawTerm {
    coef: Rational,
    factors: Vec<(usize, u32)>,
    pos: usize,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { src: text.as_bytes(), pos: 0 }
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

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn digits(&mut self, what: &str) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err(format!("expected {what}"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits"))
    }

    fn small_number(&mut self, what: &str) -> Result<u64> {
        let start = self.pos;
        let text = self.digits(what)?;
        text.parse::<u64>()
            .map_err(|_| Error::Syntax { pos: start, msg: format!("{what} too large") })
    }

    fn sign(&mut self) -> Option<bool> {
        if self.eat(b'+') {
            Some(false)
        } else if self.eat(b'-') {
            Some(true)
        } else {
            None
        }
    }

    fn factor(&mut self) -> Result<(usize, u32)> {
        if !self.eat(b'x') {
            return self.err("expected a variable 'x<index>'");
        }
        // the index must follow the 'x' directly
        if !self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            return self.err("expected a variable index after 'x'");
        }
        let index = self.small_number("variable index")?;
        let index = usize::try_from(index).map_err(|_| Error::Syntax { pos: self.pos, msg: "variable index too large".into() })?;
        let exp = if self.eat(b'^') {
            let e = self.small_number("exponent")?;
            u32::try_from(e).map_err(|_| Error::Syntax { pos: self.pos, msg: "exponent too large".into() })?
        } else {
            1
        };
        Ok((index, exp))
    }

    fn term(&mut self, negated: bool) -> Result<RawTerm> {
        let pos = {
            self.skip_ws();
            self.pos
        };
        let mut negative = negated;
        if let Some(inner) = self.sign() {
            negative ^= inner;
        }
        let mut coef = Rational::one();
        let mut factors = Vec::new();
        if self.peek().is_some_and(|b| b.is_ascii_digit()) {
            let num: BigInt = self.digits("coefficient")?.parse().expect("digits");
            let den: BigInt = if self.eat(b'/') {
                self.digits("denominator")?.parse().expect("digits")
            } else {
                BigInt::one()
            };
            if den.is_zero() {
                return self.err("zero denominator");
            }
            coef = Rational::new(num, den);
            if !self.eat(b'*') {
                return self.err("expected '*' after coefficient");
            }
        }
        factors.push(self.factor()?);
        while self.eat(b'*') {
            factors.push(self.factor()?);
        }
        if negative {
            coef = -coef;
        }
        Ok(RawTerm { coef, factors, pos })
    }

    fn terms(&mut self) -> Result<Vec<RawTerm>> {
        let mut out = Vec::new();
        if self.peek().is_none() {
            return self.err("expected a term");
        }
        let lead = self.sign().unwrap_or(false);
        out.push(self.term(lead)?);
        while self.peek().is_some() {
            let Some(neg) = self.sign() else {
                return self.err("expected '+' or '-'");
            };
            out.push(self.term(neg)?);
        }
        Ok(out)
    }
}

fn assemble(raw: Vec<RawTerm>, n: usize) -> Result<HomogeneousPoly> {
    let mut d = None;
    let mut terms = Vec::with_capacity(raw.len());
    for t in raw {
        let mut exps = vec![0u32; n + 1];
        for (index, e) in t.factors {
            if index > n {
                return Err(Error::VariableOutOfRange { index, n });
            }
            exps[index] = exps[index]
                .checked_add(e)
                .ok_or(Error::Syntax { pos: t.pos, msg: "exponent too large".into() })?;
        }
        let ev = ExponentVector::new(exps);
        let deg = ev.degree();
        match d {
            None => d = Some(deg),
            Some(expected) if expected != deg => {
                return Err(Error::Inhomogeneous { expected, found: deg })
            }
            _ => {}
        }
        terms.push((ev, t.coef));
    }
    let d = d.expect("at least one term");
    let f = HomogeneousPoly::new(n, d, terms)?;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(f)
}

/// Parses a nonzero form in `x0..xn`.
pub fn parse_poly(text: &str, n: usize) -> Result<HomogeneousPoly> {
    let raw = Lexer::new(text).terms()?;
    assemble(raw, n)
}

/// Parses a form, taking `n` to be the largest variable index that occurs.
pub fn parse_poly_inferred(text: &str) -> Result<HomogeneousPoly> {
    let raw = Lexer::new(text).terms()?;
    let n = raw
        .iter()
        .flat_map(|t| t.factors.iter().map(|&(i, _)| i))
        .max()
        .unwrap_or(0);
    assemble(raw, n)
}

/// Parses a polynomial file: `#` starts a comment running to end of line.
///
/// With `n = None` the projective dimension is inferred from the variables used.
pub fn parse_poly_file(text: &str, n: Option<usize>) -> Result<HomogeneousPoly> {
    // Blank out comments rather than deleting them so byte positions stay valid.
    let mut cleaned = String::with_capacity(text.len());
    for line in text.split_inclusive('\n') {
        match line.find('#') {
            Some(i) => {
                cleaned.push_str(&line[..i]);
                cleaned.extend(line[i..].chars().map(|c| if c == '\n' { '\n' } else { ' ' }));
            }
            None => cleaned.push_str(line),
        }
    }
    match n {
        Some(n) => parse_poly(&cleaned, n),
        None => parse_poly_inferred(&cleaned),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{frac, rat};

    #[test]
    fn parses_example_family_member() {
        let f = parse_poly("x0^2*x2 + x1^3", 2).unwrap();
        assert_eq!(f.d(), 3);
        assert_eq!(f.num_terms(), 2);
        assert_eq!(f.coefficient(&ExponentVector::new(vec![2, 0, 1])), rat(1));
        assert_eq!(f.coefficient(&ExponentVector::new(vec![0, 3, 0])), rat(1));
    }

    #[test]
    fn cancellation_is_canonical() {
        let f = parse_poly("x0^3 - x0^3 + x1^3", 1).unwrap();
        assert_eq!(f.num_terms(), 1);
        assert_eq!(f.coefficient(&ExponentVector::new(vec![0, 3])), rat(1));
    }

    #[test]
    fn rejects_inhomogeneous() {
        assert_eq!(
            parse_poly("x0^2 + x1^3", 1),
            Err(Error::Inhomogeneous { expected: 2, found: 3 })
        );
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(parse_poly("x0^3 - x0^3", 1), Err(Error::ZeroPolynomial));
        assert_eq!(parse_poly("x3^3", 2), Err(Error::VariableOutOfRange { index: 3, n: 2 }));
        assert!(matches!(parse_poly("", 2), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse_poly("x0^3 +", 2), Err(Error::Syntax { pos: 6, .. })));
        assert!(matches!(parse_poly("x0^3 x1^3", 2), Err(Error::Syntax { pos: 5, .. })));
        assert!(matches!(parse_poly("2 x0^3", 2), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("1/0*x0^3", 2), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("y0^3", 2), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse_poly("x 0^3", 2), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("x0^99999999999", 2), Err(Error::Syntax { .. })));
    }

    #[test]
    fn coefficients_and_signs() {
        let f = parse_poly(" -3/6*x0*x0*x1 + -2*x2^3 - x1^3", 2).unwrap();
        assert_eq!(f.coefficient(&ExponentVector::new(vec![2, 1, 0])), frac(-1, 2));
        assert_eq!(f.coefficient(&ExponentVector::new(vec![0, 0, 3])), rat(-2));
        assert_eq!(f.coefficient(&ExponentVector::new(vec![0, 3, 0])), rat(-1));
        assert_eq!(f.to_string(), "-1/2*x0^2*x1 - x1^3 - 2*x2^3");
    }

    #[test]
    fn files_and_inference() {
        let text = "# nodal cubic\nx1^2*x2 - x0^2*x2 # node at [0:0:1]\n  - x0^3\n";
        let f = parse_poly_file(text, None).unwrap();
        assert_eq!(f.n(), 2);
        assert_eq!(f.d(), 3);
        let g = parse_poly_file(text, Some(3)).unwrap();
        assert_eq!(g.n(), 3);
        let err = parse_poly_file("# c\nx0^3 +* x1^3", None).unwrap_err();
        assert!(matches!(err, Error::Syntax { pos: 10, .. }));
    }
}
