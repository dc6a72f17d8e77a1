//! Expressions over `x` and the t-variables:
//!
//! ```text
//! expr  := term (("+" | "-") term)*
//! term  := unary (("*" | "/") unary)*
//! unary := ("-" | "+") unary | power
//! power := atom ("^" integer)?
//! atom  := integer | identifier | "(" expr ")"
//! ```

use std::fmt;

use num_bigint::BigInt;
use parsum::multipoly::{TPoly, TRat};
use parsum::{Rational, XRat};

const MAX_EXPONENT: u32 = 1000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(text: &str, line0: usize, col0: usize) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let (mut line, mut col) = (line0, col0);
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, k) = (line, col);
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                s.push(d);
                chars.next();
                col += 1;
            }
            out.push(Token { tok: Tok::Int(s.parse().unwrap()), line: l, column: k });
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_alphanumeric() || **d == '_') {
                s.push(d);
                chars.next();
                col += 1;
            }
            out.push(Token { tok: Tok::Ident(s), line: l, column: k });
        } else if "+-*/^()".contains(c) {
            chars.next();
            col += 1;
            out.push(Token { tok: Tok::Op(c), line: l, column: k });
        } else {
            return Err(ParseError { line: l, column: k, message: format!("unexpected character '{}'", c) });
        }
    }
    out.push(Token { tok: Tok::End, line, column: col });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, t: &Token, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { line: t.line, column: t.column, message: message.into() })
    }

    fn n(&self) -> usize {
        self.names.len()
    }

    fn expr(&mut self) -> Result<TRat, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Op('+') => {
                    self.next();
                    acc = &acc + &self.term()?;
                }
                Tok::Op('-') => {
                    self.next();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<TRat, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Op('*') => {
                    self.next();
                    acc = &acc * &self.unary()?;
                }
                Tok::Op('/') => {
                    let slash = self.next();
                    let d = self.unary()?;
                    if d.is_zero() {
                        return self.err(&slash, "division by zero");
                    }
                    acc = &acc / &d;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<TRat, ParseError> {
        match self.peek().tok {
            Tok::Op('-') => {
                self.next();
                Ok(-self.unary()?)
            }
            Tok::Op('+') => {
                self.next();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<TRat, ParseError> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Op('^') {
            return Ok(base);
        }
        self.next();
        let t = self.next();
        let Tok::Int(e) = &t.tok else {
            return self.err(&t, "exponent must be a non-negative integer");
        };
        let e: u32 = match u32::try_from(e.clone()) {
            Ok(e) if e <= MAX_EXPONENT => e,
            _ => return self.err(&t, format!("exponent larger than {}", MAX_EXPONENT)),
        };
        Ok(pow(&base, e))
    }

    fn atom(&mut self) -> Result<TRat, ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Int(v) => Ok(TRat::constant(self.n(), XRat::constant(Rational::from_integer(v.clone())))),
            Tok::Ident(s) if s == "x" => Ok(TRat::constant(self.n(), XRat::x())),
            Tok::Ident(s) => match self.names.iter().position(|v| v == s) {
                Some(i) => Ok(TRat::poly(TPoly::var(self.n(), i))),
                None => self.err(&t, format!("unknown variable '{}'", s)),
            },
            Tok::Op('(') => {
                let v = self.expr()?;
                let close = self.next();
                if close.tok != Tok::Op(')') {
                    return self.err(&close, "expected ')'");
                }
                Ok(v)
            }
            Tok::End => self.err(&t, "unexpected end of input"),
            Tok::Op(c) => self.err(&t, format!("unexpected '{}'", c)),
        }
    }
}

fn pow(base: &TRat, e: u32) -> TRat {
    TRat::from_coprime(base.num().pow(e), base.den().pow(e))
}

/// Parses `text`, reporting positions relative to `(line, column)`.
pub fn parse_expression_at(text: &str, names: &[String], line: usize, column: usize) -> Result<TRat, ParseError> {
    let toks = tokenize(text, line, column)?;
    let mut p = Parser { toks, pos: 0, names };
    let v = p.expr()?;
    let t = p.next();
    if t.tok != Tok::End {
        return p.err(&t, "unexpected trailing input");
    }
    Ok(v)
}

pub fn parse_expression(text: &str, names: &[String]) -> Result<TRat, ParseError> {
    parse_expression_at(text, names, 1, 1)
}

/// An element of Q(x): an expression without t-variables.
pub fn parse_xrat_at(text: &str, names: &[String], line: usize, column: usize) -> Result<XRat, ParseError> {
    let v = parse_expression_at(text, names, line, column)?;
    v.constant_value().ok_or(ParseError { line, column, message: "expected an expression in x only".into() })
}

/// `(e1)^k1 * (e2)^k2 * c`: top-level factors with multiplicities.
pub fn parse_factor_list(
    text: &str,
    names: &[String],
    line: usize,
    column: usize,
) -> Result<(XRat, Vec<(TPoly, usize)>), ParseError> {
    let toks = tokenize(text, line, column)?;
    let mut p = Parser { toks, pos: 0, names };
    let mut unit = XRat::one();
    let mut factors = Vec::new();
    loop {
        let start = p.peek().clone();
        let base = p.atom()?;
        let mut k = 1u32;
        if p.peek().tok == Tok::Op('^') {
            p.next();
            let t = p.next();
            match &t.tok {
                Tok::Int(e) => match u32::try_from(e.clone()) {
                    Ok(e) if e <= MAX_EXPONENT => k = e,
                    _ => return p.err(&t, format!("exponent larger than {}", MAX_EXPONENT)),
                },
                _ => return p.err(&t, "exponent must be a non-negative integer"),
            }
        }
        if !base.is_polynomial() {
            return p.err(&start, "factor is not a polynomial");
        }
        match base.constant_value() {
            Some(c) => {
                if c.is_zero() {
                    return p.err(&start, "zero factor");
                }
                unit = &unit * &c.pow(k as i32);
            }
            None if k > 0 => factors.push((base.num().clone(), k as usize)),
            None => {}
        }
        let t = p.next();
        match t.tok {
            Tok::End => return Ok((unit, factors)),
            Tok::Op('*') => continue,
            _ => return p.err(&t, "expected '*' between factors"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use parsum::multipoly::default_names;
    use parsum::XPoly;

    fn names() -> Vec<String> {
        default_names(2)
    }

    #[test]
    fn parses_the_examples() {
        let g = parse_expression("(2*t1+t0)/(36*(t1-2*t0)*(t0+t1)*(t1-t0)^2)", &names()).unwrap();
        let t = |i| TPoly::var(2, i);
        let num = &t(0) + &t(1).scale(&XRat::int(2));
        let den = &(&(&t(1) - &t(0).scale(&XRat::int(2))) * &(&t(0) + &t(1))) * &(&t(1) - &t(0)).pow(2);
        assert_eq!(g, TRat::new(num, den.scale(&XRat::int(36))));
        let h = parse_expression("x/2", &names()).unwrap();
        assert_eq!(h.constant_value(), Some(XRat::new(XPoly::x(), XPoly::from_i64(&[2]))));
        let e = parse_expression("t0^-1", &names()).unwrap_err();
        assert_eq!((e.line, e.column), (1, 4));
    }

    #[test]
    fn precedence_and_errors() {
        let a = parse_expression("-x^2 + 3*x - 2/4", &names()).unwrap();
        assert_eq!(a.constant_value().unwrap(), XRat::new(XPoly::from_coeffs(vec![parsum::scalar::ratio(-1, 2), parsum::rat(3), parsum::rat(-1)]), XPoly::one()));
        assert!(parse_expression("t2 + 1", &names()).unwrap_err().message.contains("unknown variable"));
        let e = parse_expression("1 +\n  (t0 - ", &names()).unwrap_err();
        assert_eq!(e.line, 2);
        assert!(parse_expression("t0/(x - x)", &names()).unwrap_err().message.contains("division by zero"));
        assert!(parse_expression("t0 t1", &names()).is_err());
        assert!(parse_expression("3 $ 4", &names()).is_err());
    }

    #[test]
    fn factor_lists() {
        let (u, fs) = parse_factor_list("2592*(3*t0-2*t1)^2 * (t0 - t1)^2 * t0", &names(), 1, 1).unwrap();
        assert_eq!(u, XRat::int(2592));
        assert_eq!(fs.len(), 3);
        assert_eq!(fs[0].1, 2);
        assert!(parse_factor_list("(t0)^2 + t1", &names(), 1, 1).is_err());
    }
}
