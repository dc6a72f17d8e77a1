//! Problem files:
//!
//! ```text
//! # comment
//! [field]
//! n = 2
//! companion = -6, 5          # or: matrix = 2, x; 0, 2
//! vars = a, b                # optional, default t0..t{n-1}
//!
//! [summand]
//! f = 1/t0                   # or: numerator = ... plus denfactors: (..)^k * ...
//!
//! [config]
//! max_t_degree = 8
//! ```
//!
//! A line starting with whitespace continues the previous value.

use std::fmt;

use parsum::field::ShiftSystem;
use parsum::multipoly::{default_names, factor_t, FactorCaps, TFactorization, TPoly, TRat};
use parsum::telescope::TelescopeConfig;
use parsum::{XPoly, XRat};

use crate::parse::{parse_expression_at, parse_factor_list, parse_xrat_at, ParseError};

#[derive(Clone, Debug, PartialEq)]
pub enum FieldMode {
    Companion(Vec<XRat>),
    Matrix(Vec<Vec<XRat>>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FieldSpec {
    pub n: usize,
    pub mode: FieldMode,
    pub names: Vec<String>,
}

impl FieldSpec {
    pub fn system(&self) -> Result<ShiftSystem, parsum::Error> {
        match &self.mode {
            FieldMode::Companion(a) => ShiftSystem::make_companion(a),
            FieldMode::Matrix(m) => ShiftSystem::make_general(m.clone()),
        }
    }
}

/// Summand as written; `denfactors` is kept unexpanded.
#[derive(Clone, Debug, PartialEq)]
pub enum Summand {
    Expression(TRat),
    Factored { numerator: TRat, unit: XRat, factors: Vec<(TPoly, usize)> },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigOverrides {
    pub max_t_degree: Option<u32>,
    pub max_x_degree: Option<u32>,
    pub special_slack: Option<usize>,
    pub max_shift_scan: Option<i64>,
    pub discover_specials: Option<bool>,
    pub x_denominator: Option<XPoly>,
}

impl ConfigOverrides {
    pub fn apply(&self, cfg: &mut TelescopeConfig) {
        if let Some(v) = self.max_t_degree {
            cfg.max_t_degree = v;
        }
        if let Some(v) = self.max_x_degree {
            cfg.max_x_degree = v;
        }
        if let Some(v) = self.special_slack {
            cfg.special_slack = v;
        }
        if let Some(v) = self.max_shift_scan {
            cfg.max_shift_scan = v;
        }
        if let Some(v) = self.discover_specials {
            cfg.discover_specials = v;
        }
        if let Some(v) = &self.x_denominator {
            cfg.x_denominator = Some(v.clone());
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    pub field: FieldSpec,
    pub summand: Option<Summand>,
    pub config: ConfigOverrides,
}

#[derive(Debug)]
pub enum InputError {
    Parse(ParseError),
    Core(parsum::Error),
    Io(String),
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Parse(e) => write!(f, "{}", e),
            InputError::Core(e) => write!(f, "{}", e),
            InputError::Io(e) => f.write_str(e),
        }
    }
}

impl std::error::Error for InputError {}

impl From<ParseError> for InputError {
    fn from(e: ParseError) -> Self {
        InputError::Parse(e)
    }
}

impl From<parsum::Error> for InputError {
    fn from(e: parsum::Error) -> Self {
        InputError::Core(e)
    }
}

fn perr(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, column, message: message.into() }
}

/// One `key = value` entry, with the position where the value starts.
struct Entry {
    section: String,
    key: String,
    value: String,
    line: usize,
    column: usize,
}

fn strip_comment(s: &str) -> &str {
    s.split('#').next().unwrap()
}

fn entries(text: &str) -> Result<Vec<Entry>, ParseError> {
    let mut out: Vec<Entry> = Vec::new();
    let mut section = String::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = strip_comment(raw);
        if body.trim().is_empty() {
            continue;
        }
        if body.starts_with(char::is_whitespace) {
            match out.last_mut() {
                Some(e) => {
                    e.value.push('\n');
                    e.value.push_str(body);
                    continue;
                }
                None => return Err(perr(line, 1, "continuation line without an entry")),
            }
        }
        let t = body.trim_end();
        if let Some(rest) = t.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| perr(line, 1, "unterminated section header"))?;
            section = name.trim().to_string();
            if !["field", "summand", "config"].contains(&section.as_str()) {
                return Err(perr(line, 2, format!("unknown section '{}'", section)));
            }
            continue;
        }
        let Some(sep) = t.find(['=', ':']) else {
            return Err(perr(line, 1, "expected 'key = value'"));
        };
        if section.is_empty() {
            return Err(perr(line, 1, "entry outside of a section"));
        }
        let key = t[..sep].trim().to_string();
        let after = &t[sep + 1..];
        let lead = after.len() - after.trim_start().len();
        let column = t[..sep + 1 + lead].chars().count() + 1;
        out.push(Entry { section: section.clone(), key, value: after.trim_start().to_string(), line, column });
    }
    Ok(out)
}

/// Splits on `sep`, tracking where each piece starts.
fn split_positioned(s: &str, sep: char, line: usize, column: usize) -> Vec<(String, usize, usize)> {
    let mut out = Vec::new();
    let (mut l, mut c) = (line, column);
    let mut cur = String::new();
    let (mut sl, mut sc) = (l, c);
    for ch in s.chars() {
        if ch == sep {
            out.push((cur.clone(), sl, sc));
            cur.clear();
            c += 1;
            (sl, sc) = (l, c);
            continue;
        }
        cur.push(ch);
        if ch == '\n' {
            l += 1;
            c = 1;
        } else {
            c += 1;
        }
    }
    out.push((cur, sl, sc));
    out
}

fn parse_number<T: std::str::FromStr>(e: &Entry) -> Result<T, ParseError> {
    e.value.trim().parse().map_err(|_| perr(e.line, e.column, format!("invalid value for '{}'", e.key)))
}

pub fn parse_problem(text: &str) -> Result<Problem, ParseError> {
    let all = entries(text)?;
    let find = |section: &str, key: &str| all.iter().find(|e| e.section == section && e.key == key);
    for e in &all {
        let known: &[&str] = match e.section.as_str() {
            "field" => &["n", "companion", "matrix", "vars"],
            "summand" => &["f", "numerator", "denfactors"],
            _ => &["max_t_degree", "max_x_degree", "special_slack", "max_shift_scan", "discover_specials", "x_denominator"],
        };
        if !known.contains(&e.key.as_str()) {
            return Err(perr(e.line, 1, format!("unknown key '{}' in [{}]", e.key, e.section)));
        }
    }

    let ne = find("field", "n").ok_or_else(|| perr(1, 1, "missing 'n' in [field]"))?;
    let n: usize = parse_number(ne)?;
    if n == 0 {
        return Err(perr(ne.line, ne.column, "n must be positive"));
    }
    let names = match find("field", "vars") {
        None => default_names(n),
        Some(e) => {
            let v: Vec<String> = e.value.split(',').map(|s| s.trim().to_string()).collect();
            if v.len() != n {
                return Err(perr(e.line, e.column, format!("expected {} variable names", n)));
            }
            for s in &v {
                let ok = s.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                    && s.chars().all(|c| c.is_alphanumeric() || c == '_');
                if !ok || s == "x" {
                    return Err(perr(e.line, e.column, format!("invalid variable name '{}'", s)));
                }
            }
            v
        }
    };
    // coefficients live in Q(x): no t-variables allowed
    let no_t: Vec<String> = Vec::new();
    let mode = match (find("field", "companion"), find("field", "matrix")) {
        (Some(e), None) => {
            let a = split_positioned(&e.value, ',', e.line, e.column)
                .into_iter()
                .map(|(s, l, c)| parse_xrat_at(&s, &no_t, l, c))
                .collect::<Result<Vec<_>, _>>()?;
            if a.len() != n {
                return Err(perr(e.line, e.column, format!("companion needs {} coefficients", n)));
            }
            FieldMode::Companion(a)
        }
        (None, Some(e)) => {
            let mut rows = Vec::new();
            for (row, l, c) in split_positioned(&e.value, ';', e.line, e.column) {
                let r = split_positioned(&row, ',', l, c)
                    .into_iter()
                    .map(|(s, l, c)| parse_xrat_at(&s, &no_t, l, c))
                    .collect::<Result<Vec<_>, _>>()?;
                if r.len() != n {
                    return Err(perr(l, c, format!("matrix row needs {} entries", n)));
                }
                rows.push(r);
            }
            if rows.len() != n {
                return Err(perr(e.line, e.column, format!("matrix needs {} rows", n)));
            }
            FieldMode::Matrix(rows)
        }
        _ => return Err(perr(ne.line, 1, "[field] needs exactly one of 'companion' or 'matrix'")),
    };

    let expr = |e: &Entry| parse_expression_at(&e.value, &names, e.line, e.column);
    let summand = match (find("summand", "f"), find("summand", "numerator"), find("summand", "denfactors")) {
        (None, None, None) => None,
        (Some(f), None, None) => Some(Summand::Expression(expr(f)?)),
        (None, num, Some(d)) => {
            let numerator = match num {
                Some(e) => expr(e)?,
                None => TRat::one(n),
            };
            let (unit, factors) = parse_factor_list(&d.value, &names, d.line, d.column)?;
            Some(Summand::Factored { numerator, unit, factors })
        }
        (_, _, _) => {
            return Err(perr(1, 1, "[summand] needs 'f', or 'denfactors' with an optional 'numerator'"));
        }
    };

    let mut config = ConfigOverrides::default();
    for e in all.iter().filter(|e| e.section == "config") {
        match e.key.as_str() {
            "max_t_degree" => config.max_t_degree = Some(parse_number(e)?),
            "max_x_degree" => config.max_x_degree = Some(parse_number(e)?),
            "special_slack" => config.special_slack = Some(parse_number(e)?),
            "max_shift_scan" => config.max_shift_scan = Some(parse_number(e)?),
            "discover_specials" => config.discover_specials = Some(parse_number(e)?),
            _ => {
                let v = parse_xrat_at(&e.value, &no_t, e.line, e.column)?;
                if !v.is_polynomial() || v.is_zero() {
                    return Err(perr(e.line, e.column, "x_denominator must be a nonzero polynomial in x"));
                }
                config.x_denominator = Some(v.num().clone());
            }
        }
    }
    Ok(Problem { field: FieldSpec { n, mode, names }, summand, config })
}

/// The summand as a reduced fraction together with a factorization of its
/// denominator. With `trusted`, listed factors are taken as irreducible;
/// otherwise each one is factored.
pub fn summand_with_factors(s: &Summand, n: usize, trusted: bool, caps: &FactorCaps) -> Result<(TRat, TFactorization), InputError> {
    match s {
        Summand::Expression(f) => Ok((f.clone(), factor_t(f.den(), caps)?)),
        Summand::Factored { numerator, unit, factors } => {
            let mut irreducible: Vec<(TPoly, usize)> = Vec::new();
            let mut unit = unit.clone();
            for (p, m) in factors {
                if trusted {
                    let (c, q) = p.primitive_x();
                    unit = &unit * &c.pow(*m as i32);
                    irreducible.push((q, *m));
                } else {
                    let fp = factor_t(p, caps)?;
                    unit = &unit * &fp.unit.pow(*m as i32);
                    irreducible.extend(fp.factors.into_iter().map(|(q, k)| (q, k * m)));
                }
            }
            let mut den = TPoly::constant(n, unit.clone());
            for (p, m) in &irreducible {
                den = &den * &p.pow(*m as u32);
            }
            let f = numerator / &TRat::poly(den);
            // the numerator may cancel part of the listed denominator
            let mut kept: Vec<(TPoly, usize)> = Vec::new();
            let mut rest = f.den().clone();
            for (p, m) in irreducible {
                let mut k = 0;
                while k < m {
                    match rest.exact_div(&p) {
                        Some(q) => {
                            rest = q;
                            k += 1;
                        }
                        None => break,
                    }
                }
                if k > 0 {
                    match kept.iter_mut().find(|(q, _)| *q == p) {
                        Some(e) => e.1 += k,
                        None => kept.push((p, k)),
                    }
                }
            }
            let unit = rest
                .constant_value()
                .ok_or(InputError::Io("denfactors do not cover the denominator of the summand".into()))?;
            kept.sort_by(|a, b| parsum::multipoly::cmp_factors(&a.0, &b.0));
            Ok((f, TFactorization { unit, factors: kept }))
        }
    }
}
