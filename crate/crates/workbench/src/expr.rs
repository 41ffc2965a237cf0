//! Element expressions: `element := term (('+'|'-') term)*`,
//! `term := [scalar ['*']] mono | scalar`, `mono := gen ('*' gen)*`,
//! `scalar := rational | '(' poly ')'`.

use cdga_core::{Cdga, Element, FieldRef, Monomial, Scalar};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("column {column}: {message}")]
pub struct ExprError {
    /// 1-based, counted in characters.
    pub column: usize,
    pub message: String,
}

fn fail<T>(column: usize, message: impl Into<String>) -> Result<T, ExprError> {
    Err(ExprError { column: column + 1, message: message.into() })
}

/// A term before generator names are resolved.
#[derive(Clone, Debug)]
pub struct RawTerm {
    pub coef: Scalar,
    /// Generator names with their 0-based columns.
    pub names: Vec<(String, usize)>,
}

struct Lexer<'a> {
    chars: Vec<char>,
    pos: usize,
    field: &'a FieldRef,
}

impl Lexer<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn ident(&mut self) -> Option<(String, usize)> {
        self.skip_ws();
        let start = self.pos;
        match self.chars.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() || *c == '_' => {}
            _ => return None,
        }
        while self.pos < self.chars.len() && (self.chars[self.pos].is_ascii_alphanumeric() || self.chars[self.pos] == '_') {
            self.pos += 1;
        }
        Some((self.chars[start..self.pos].iter().collect(), start))
    }

    fn scalar(&mut self) -> Result<Option<Scalar>, ExprError> {
        self.skip_ws();
        let start = self.pos;
        match self.chars.get(self.pos) {
            Some('(') => {
                let mut depth = 0usize;
                let mut end = None;
                for (i, c) in self.chars[start..].iter().enumerate() {
                    match c {
                        '(' => depth += 1,
                        ')' => {
                            depth -= 1;
                            if depth == 0 {
                                end = Some(start + i);
                                break;
                            }
                        }
                        _ => {}
                    }
                }
                let Some(end) = end else { return fail(start, "unbalanced parenthesis") };
                let inner: String = self.chars[start + 1..end].iter().collect();
                let s = Scalar::parse(self.field, &inner).or_else(|e| fail(start + 1, e.to_string()))?;
                self.pos = end + 1;
                Ok(Some(s))
            }
            Some(c) if c.is_ascii_digit() => {
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if self.chars.get(self.pos) == Some(&'/') {
                    self.pos += 1;
                    let ds = self.pos;
                    while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                    if self.pos == ds {
                        return fail(ds, "expected a denominator");
                    }
                }
                let text: String = self.chars[start..self.pos].iter().collect();
                let s = Scalar::parse(self.field, &text).or_else(|e| fail(start, e.to_string()))?;
                Ok(Some(s))
            }
            _ => Ok(None),
        }
    }
}

/// Splits an expression into terms; generator names stay unresolved.
pub fn parse_terms(field: &FieldRef, text: &str) -> Result<Vec<RawTerm>, ExprError> {
    let mut lx = Lexer { chars: text.chars().collect(), pos: 0, field };
    let mut terms = Vec::new();
    if lx.peek().is_none() {
        return fail(0, "empty expression");
    }
    let mut first = true;
    while lx.peek().is_some() {
        let mut negative = false;
        match lx.peek() {
            Some('+') => lx.pos += 1,
            Some('-') => {
                negative = true;
                lx.pos += 1
            }
            _ if first => {}
            _ => return fail(lx.pos, "expected `+` or `-`"),
        }
        first = false;
        let coef = lx.scalar()?;
        if coef.is_some() && lx.peek() == Some('*') {
            lx.pos += 1;
            if lx.peek().is_none_or(|c| !(c.is_ascii_alphabetic() || c == '_')) {
                return fail(lx.pos, "expected a generator after `*`");
            }
        }
        let mut names = Vec::new();
        if let Some(id) = lx.ident() {
            names.push(id);
            while lx.peek() == Some('*') {
                lx.pos += 1;
                match lx.ident() {
                    Some(id) => names.push(id),
                    None => return fail(lx.pos, "expected a generator after `*`"),
                }
            }
        } else if coef.is_none() {
            return fail(lx.pos, "expected a coefficient or a generator");
        }
        let mut c = coef.unwrap_or_else(|| Scalar::one(field));
        if negative {
            c = -c;
        }
        terms.push(RawTerm { coef: c, names });
        if let Some(ch) = lx.peek() {
            if ch != '+' && ch != '-' {
                return fail(lx.pos, format!("unexpected `{ch}`"));
            }
        }
    }
    Ok(terms)
}

#[derive(Clone, Debug)]
pub struct Parsed {
    pub element: Element,
    pub warnings: Vec<String>,
}

/// Parses an element of `alg`. A repeated generator in a monomial gives a warning and
/// contributes zero.
pub fn parse_element(alg: &Cdga, text: &str) -> Result<Parsed, ExprError> {
    let mut acc = alg.zero();
    let mut warnings = Vec::new();
    for t in parse_terms(alg.field(), text)? {
        let mut idx = Vec::new();
        for (name, col) in &t.names {
            match alg.generator_index(name) {
                Ok(i) => idx.push(i),
                Err(_) => return fail(*col, format!("unknown generator `{name}`")),
            }
        }
        match Monomial::from_indices(&idx) {
            Some((neg, m)) => {
                let c = if neg { -t.coef } else { t.coef };
                acc = &acc + &alg.term(c, m);
            }
            None => {
                let names: Vec<&str> = t.names.iter().map(|(n, _)| n.as_str()).collect();
                warnings.push(format!("`{}` repeats a generator and is zero", names.join("*")));
            }
        }
    }
    Ok(Parsed { element: acc, warnings })
}

/// Parses a linear combination of `names` (each term has exactly one name) into coordinates.
pub fn parse_linear(field: &FieldRef, names: &[String], text: &str) -> Result<Vec<Scalar>, ExprError> {
    let mut out = vec![Scalar::zero(field); names.len()];
    for t in parse_terms(field, text)? {
        match t.names.as_slice() {
            [(name, col)] => match names.iter().position(|n| n == name) {
                Some(i) => out[i] = &out[i] + &t.coef,
                None => return fail(*col, format!("unknown name `{name}`")),
            },
            [] => return fail(0, "constant term in a linear expression"),
            [_, (_, col), ..] => return fail(*col, "products are not allowed in a linear expression"),
        }
    }
    Ok(out)
}
