//! Line-oriented text format for polynomials.
//!
//! ```text
//! field Q          (or: field F7)
//! vars x y
//! 1 2 0            (term: coefficient, then one exponent per variable)
//! -1 0 2
//! ```
//!
//! The parser skips blank lines and lines starting with `#`; the serializer
//! emits none of either and writes terms in descending graded-lexicographic
//! order, so serialize ∘ parse ∘ serialize is the identity on its output.

use std::sync::Arc;

use crate::algebra::poly::{Monomial, SparsePoly};
use crate::algebra::scalar::{parse_scalar, FieldTag};
use crate::error::{Error, Result};

/// Parses a field designator: `Q` for the rationals, `F<p>` for a prime field.
pub fn parse_field_spec(word: &str) -> Result<FieldTag> {
    if word == "Q" {
        return Ok(FieldTag::Rational);
    }
    if let Some(digits) = word.strip_prefix('F') {
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::Syntax {
                line: 0,
                msg: format!("bad field designator `{word}`"),
            })?;
        return FieldTag::prime(p);
    }
    Err(Error::Syntax {
        line: 0,
        msg: format!("bad field designator `{word}`"),
    })
}

fn err_at(line: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        msg: msg.into(),
    }
}

/// Lines that carry content: 1-based line number plus trimmed text.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_poly(text: &str) -> Result<SparsePoly> {
    let mut lines = content_lines(text);

    let (ln, field_line) = lines
        .next()
        .ok_or_else(|| err_at(0, "empty polynomial: expected `field ...`"))?;
    let field = match field_line.strip_prefix("field ") {
        Some(rest) => parse_field_spec(rest.trim()).map_err(|e| match e {
            Error::Syntax { msg, .. } => err_at(ln, msg),
            other => other,
        })?,
        None => return Err(err_at(ln, "expected `field ...`")),
    };

    let (ln, vars_line) = lines
        .next()
        .ok_or_else(|| err_at(ln, "expected `vars ...` after field line"))?;
    let vars: Vec<String> = match vars_line.strip_prefix("vars") {
        Some(rest) => rest.split_whitespace().map(|s| s.to_string()).collect(),
        None => return Err(err_at(ln, "expected `vars ...`")),
    };
    {
        let mut sorted = vars.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != vars.len() {
            return Err(err_at(ln, "duplicate variable name"));
        }
    }
    let nvars = vars.len();
    let mut poly = SparsePoly::zero(field, Arc::new(vars));

    for (ln, line) in lines {
        let mut parts = line.split_whitespace();
        let coef_text = parts.next().expect("nonblank line");
        let coef = parse_scalar(coef_text, field)
            .map_err(|_| err_at(ln, format!("bad coefficient `{coef_text}`")))?;
        let mut exps = Vec::with_capacity(nvars);
        for part in parts {
            let e: u32 = part
                .parse()
                .map_err(|_| err_at(ln, format!("bad exponent `{part}`")))?;
            exps.push(e);
        }
        if exps.len() != nvars {
            return Err(err_at(
                ln,
                format!("expected {nvars} exponents, found {}", exps.len()),
            ));
        }
        poly.add_term(Monomial(exps), coef)?;
    }
    Ok(poly)
}

pub fn serialize_poly(p: &SparsePoly) -> String {
    let mut out = String::new();
    out.push_str(&format!("field {}\n", p.field()));
    out.push_str("vars");
    for v in p.vars().iter() {
        out.push(' ');
        out.push_str(v);
    }
    out.push('\n');
    for (m, c) in p.terms().iter().rev() {
        out.push_str(&c.to_string());
        for e in &m.0 {
            out.push_str(&format!(" {e}"));
        }
        out.push('\n');
    }
    out
}
