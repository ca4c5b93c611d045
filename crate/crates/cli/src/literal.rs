//! Quaternion literals: `w[+|-]xi[+|-]yj[+|-]zk` with every term optional,
//! units in `i`, `j`, `k` order, and a bare unit meaning coefficient one.

use std::fmt;

use qslice::Quaternion;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Zero-based byte offset into the literal.
    pub pos: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Empty,
    ExpectedSign,
    ExpectedNumber,
    BadExponent,
    UnexpectedChar(char),
    DuplicateUnit(char),
    OutOfOrder { unit: char, after: char },
    RealAfterUnit,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: ", self.pos + 1)?;
        match &self.kind {
            ParseErrorKind::Empty => write!(f, "empty quaternion literal"),
            ParseErrorKind::ExpectedSign => write!(f, "expected '+' or '-' between terms"),
            ParseErrorKind::ExpectedNumber => write!(f, "expected a number or one of i, j, k"),
            ParseErrorKind::BadExponent => write!(f, "exponent needs at least one digit"),
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character '{c}'"),
            ParseErrorKind::DuplicateUnit(c) => write!(f, "the {c} term appears twice"),
            ParseErrorKind::OutOfOrder { unit, after } => {
                write!(f, "the {unit} term must come before the {after} term")
            }
            ParseErrorKind::RealAfterUnit => {
                write!(f, "the real part must come before the imaginary terms")
            }
        }
    }
}

impl std::error::Error for ParseError {}

fn err(pos: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { pos, kind }
}

/// Slot of a term: 0 real, 1..=3 for i, j, k.
fn slot(unit: Option<char>) -> usize {
    match unit {
        None => 0,
        Some('i') => 1,
        Some('j') => 2,
        _ => 3,
    }
}

fn unit_name(slot: usize) -> char {
    ['r', 'i', 'j', 'k'][slot]
}

/// Scans digits, an optional fraction and an optional exponent starting at
/// `start`; returns the end offset.
fn scan_number(b: &[u8], start: usize) -> Result<usize, ParseError> {
    let mut p = start;
    let mut digits = 0;
    while p < b.len() && b[p].is_ascii_digit() {
        p += 1;
        digits += 1;
    }
    if p < b.len() && b[p] == b'.' {
        p += 1;
        while p < b.len() && b[p].is_ascii_digit() {
            p += 1;
            digits += 1;
        }
    }
    if digits == 0 {
        return Err(err(start, ParseErrorKind::ExpectedNumber));
    }
    if p < b.len() && (b[p] == b'e' || b[p] == b'E') {
        let e = p;
        p += 1;
        if p < b.len() && (b[p] == b'+' || b[p] == b'-') {
            p += 1;
        }
        let ds = p;
        while p < b.len() && b[p].is_ascii_digit() {
            p += 1;
        }
        if p == ds {
            return Err(err(e, ParseErrorKind::BadExponent));
        }
    }
    Ok(p)
}

pub fn parse_quaternion(s: &str) -> Result<Quaternion, ParseError> {
    let b = s.as_bytes();
    let mut p = 0;
    let skip_ws = |p: &mut usize| {
        while *p < b.len() && b[*p].is_ascii_whitespace() {
            *p += 1;
        }
    };
    skip_ws(&mut p);
    if p == b.len() {
        return Err(err(p, ParseErrorKind::Empty));
    }
    let mut parts = [0.0f64; 4];
    let mut seen = [false; 4];
    let mut last: Option<usize> = None;
    let mut first = true;
    while p < b.len() {
        let term_start = p;
        let mut sign = 1.0;
        if b[p] == b'+' || b[p] == b'-' {
            if b[p] == b'-' {
                sign = -1.0;
            }
            p += 1;
            skip_ws(&mut p);
        } else if !first {
            return Err(err(p, ParseErrorKind::ExpectedSign));
        }
        let num_start = p;
        let value = if p < b.len() && (b[p].is_ascii_digit() || b[p] == b'.') {
            let end = scan_number(b, p)?;
            let v: f64 = s[p..end]
                .parse()
                .map_err(|_| err(p, ParseErrorKind::ExpectedNumber))?;
            p = end;
            Some(v)
        } else {
            None
        };
        let unit = match b.get(p) {
            Some(&c @ (b'i' | b'j' | b'k')) => {
                p += 1;
                Some(c as char)
            }
            _ => None,
        };
        let v = match (value, unit) {
            (Some(v), _) => v,
            (None, Some(_)) => 1.0,
            (None, None) => {
                return Err(match b.get(num_start) {
                    Some(&c) => err(num_start, ParseErrorKind::UnexpectedChar(c as char)),
                    None => err(num_start, ParseErrorKind::ExpectedNumber),
                })
            }
        };
        skip_ws(&mut p);
        if p < b.len() && !(b[p] == b'+' || b[p] == b'-') {
            let c = s[p..].chars().next().unwrap();
            // a further term without a sign, versus stray input
            let kind = if p > term_start && b[p - 1].is_ascii_whitespace() && (c.is_ascii_digit() || "ijk.".contains(c)) {
                ParseErrorKind::ExpectedSign
            } else {
                ParseErrorKind::UnexpectedChar(c)
            };
            return Err(err(p, kind));
        }
        let s_idx = slot(unit);
        if seen[s_idx] {
            return Err(err(term_start, ParseErrorKind::DuplicateUnit(unit.unwrap_or('r'))));
        }
        if let Some(l) = last {
            if s_idx < l {
                return Err(err(
                    term_start,
                    if s_idx == 0 {
                        ParseErrorKind::RealAfterUnit
                    } else {
                        ParseErrorKind::OutOfOrder {
                            unit: unit_name(s_idx),
                            after: unit_name(l),
                        }
                    },
                ));
            }
        }
        seen[s_idx] = true;
        parts[s_idx] = sign * v;
        last = Some(s_idx);
        first = false;
    }
    Ok(Quaternion::new(parts[0], parts[1], parts[2], parts[3]))
}
