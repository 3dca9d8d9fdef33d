//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' INTEGER)?
//! atom   := INTEGER ('/' INTEGER)? | IDENT | '(' expr ')'
//! ```
//!
//! Juxtaposition is not multiplication: `2x` is a syntax error at `x`.

use num::{BigInt, Zero};
use thiserror::Error;

use super::Polynomial;
use crate::Rational;

/// Parse failure. Columns are 1-based character positions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("column {column}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        column: usize,
        expected: Vec<&'static str>,
        found: String,
    },
    #[error("column {column}: unknown identifier `{name}`")]
    UnknownIdentifier { column: usize, name: String },
    #[error("column {column}: unexpected character `{ch}`")]
    InvalidCharacter { column: usize, ch: char },
    #[error("column {column}: zero denominator")]
    ZeroDenominator { column: usize },
    #[error("column {column}: exponent too large")]
    ExponentTooLarge { column: usize },
}

impl ParseError {
    pub fn column(&self) -> usize {
        match self {
            ParseError::Syntax { column, .. }
            | ParseError::UnknownIdentifier { column, .. }
            | ParseError::InvalidCharacter { column, .. }
            | ParseError::ZeroDenominator { column }
            | ParseError::ExponentTooLarge { column } => *column,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("number `{n}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push((Tok::Int(digits.parse().expect("ascii digits")), column));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), column));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => return Err(ParseError::InvalidCharacter { column, ch: c }),
        };
        out.push((tok, column));
        i += 1;
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    vars: &'a [String],
}

const ATOM_START: &[&str] = &["number", "identifier", "`(`", "`-`"];

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&'static str]) -> ParseError {
        ParseError::Syntax {
            column: self.column(),
            expected: expected.to_vec(),
            found: self.peek().describe(),
        }
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let column = self.column();
        match self.bump().0 {
            Tok::Int(n) => {
                let k: u32 = n
                    .try_into()
                    .map_err(|_| ParseError::ExponentTooLarge { column })?;
                Ok(base.pow(k))
            }
            _ => {
                self.pos -= 1;
                Err(self.unexpected(&["non-negative integer exponent"]))
            }
        }
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        let n = self.vars.len();
        let (tok, column) = self.toks[self.pos].clone();
        match tok {
            Tok::Int(num) => {
                self.bump();
                let mut value = Rational::from_integer(num);
                if *self.peek() == Tok::Slash {
                    self.bump();
                    let den_column = self.column();
                    let Tok::Int(den) = self.peek().clone() else {
                        return Err(self.unexpected(&["integer denominator"]));
                    };
                    self.bump();
                    if den.is_zero() {
                        return Err(ParseError::ZeroDenominator { column: den_column });
                    }
                    value /= Rational::from_integer(den);
                }
                Ok(Polynomial::constant(n, value))
            }
            Tok::Ident(name) => {
                self.bump();
                match self.vars.iter().position(|v| *v == name) {
                    Some(i) => Ok(Polynomial::var(n, i)),
                    None => Err(ParseError::UnknownIdentifier { column, name }),
                }
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected(&["`)`", "operator"]));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.unexpected(ATOM_START)),
        }
    }
}

/// Parses `text` as a polynomial in the variables `vars` (in that order).
pub fn parse_polynomial(text: &str, vars: &[String]) -> Result<Polynomial, ParseError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        vars,
    };
    let poly = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected(&["operator", "end of input"]));
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{int, rat};

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn literals_and_variables() {
        let v = vars(&["x", "y", "z", "t"]);
        assert!(parse_polynomial("0", &v).unwrap().is_zero());
        let f = parse_polynomial("1/2*t^2", &v).unwrap();
        let t = Polynomial::var(4, 3);
        assert_eq!(f, t.pow(2).scale(&rat(1, 2)));
        assert_eq!(
            parse_polynomial("-(x*y) + 3", &v)
                .unwrap()
                .eval(&[int(2), int(5), int(0), int(0)]),
            int(-7)
        );
    }

    #[test]
    fn precedence() {
        let v = vars(&["x"]);
        let at = |s: &str, x: i64| parse_polynomial(s, &v).unwrap().eval(&[int(x)]);
        assert_eq!(at("-x^2", 3), int(-9));
        assert_eq!(at("(-x)^2", 3), int(9));
        assert_eq!(at("2*x^2 - x - 1", 2), int(5));
        assert_eq!(at("1 - -x", 2), int(3));
        assert_eq!(at("3/4*(x + 1)^2", 1), int(3));
    }

    #[test]
    fn implicit_multiplication_is_rejected() {
        let err = parse_polynomial("2x", &vars(&["x"])).unwrap_err();
        assert_eq!(err.column(), 2);
        assert!(matches!(err, ParseError::Syntax { .. }));
    }

    #[test]
    fn error_positions() {
        let v = vars(&["x", "y"]);
        assert_eq!(
            parse_polynomial("x + w", &v).unwrap_err(),
            ParseError::UnknownIdentifier {
                column: 5,
                name: "w".into()
            }
        );
        assert_eq!(parse_polynomial("x +", &v).unwrap_err().column(), 4);
        assert_eq!(parse_polynomial("(x", &v).unwrap_err().column(), 3);
        assert_eq!(parse_polynomial("x^y", &v).unwrap_err().column(), 3);
        assert_eq!(
            parse_polynomial("1/0", &v).unwrap_err(),
            ParseError::ZeroDenominator { column: 3 }
        );
        assert_eq!(
            parse_polynomial("x $ y", &v).unwrap_err(),
            ParseError::InvalidCharacter { column: 3, ch: '$' }
        );
        assert!(parse_polynomial("", &v).is_err());
        assert!(parse_polynomial("x/y", &v).is_err());
    }
}
