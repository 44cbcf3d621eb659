//! Shared text grammar for polynomial-like values: terms such as `3q^-2`,
//! `-q`, `7`, joined by ` + ` / ` - `. Exponent 1 omits the caret, exponent 0
//! omits the variable. The parser accepts exactly what the renderer emits.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

pub fn fmt_terms<I>(f: &mut std::fmt::Formatter<'_>, terms: I) -> std::fmt::Result
where
    I: Iterator<Item = (i64, BigInt)>,
{
    fmt_terms_var(f, terms, 'q')
}

pub fn fmt_terms_var<I>(f: &mut std::fmt::Formatter<'_>, terms: I, var: char) -> std::fmt::Result
where
    I: Iterator<Item = (i64, BigInt)>,
{
    let mut first = true;
    for (e, c) in terms {
        debug_assert!(!c.is_zero());
        if first {
            if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
        } else if c.is_negative() {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        let a = c.abs();
        if e == 0 {
            write!(f, "{a}")?;
        } else {
            if !a.is_one() {
                write!(f, "{a}")?;
            }
            if e == 1 {
                write!(f, "{var}")?;
            } else {
                write!(f, "{var}^{e}")?;
            }
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

pub fn parse_terms(s: &str, var: char) -> Result<Vec<(i64, BigInt)>> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    if s == "0" {
        return Ok(vec![]);
    }
    let mut terms = Vec::new();
    let mut rest = s;
    let mut sign = BigInt::one();
    if let Some(r) = rest.strip_prefix('-') {
        sign = -sign;
        rest = r.trim_start();
    } else if let Some(r) = rest.strip_prefix('+') {
        rest = r.trim_start();
    }
    loop {
        let end = find_term_end(rest);
        let (term, tail) = rest.split_at(end);
        terms.push(parse_term(term.trim(), &sign, var)?);
        rest = tail.trim_start();
        if rest.is_empty() {
            break;
        }
        if let Some(r) = rest.strip_prefix('+') {
            sign = BigInt::one();
            rest = r.trim_start();
        } else if let Some(r) = rest.strip_prefix('-') {
            sign = -BigInt::one();
            rest = r.trim_start();
        } else {
            return Err(Error::Parse(format!("expected '+' or '-' near '{rest}'")));
        }
    }
    Ok(terms)
}

/// A term ends at the next top-level `+`/`-` that is not an exponent sign.
fn find_term_end(s: &str) -> usize {
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c == '+' || c == '-' {
            if i > 0 && bytes[i - 1] as char == '^' {
                i += 1;
                continue;
            }
            return i;
        }
        i += 1;
    }
    s.len()
}

fn parse_term(t: &str, sign: &BigInt, var: char) -> Result<(i64, BigInt)> {
    if t.is_empty() {
        return Err(Error::Parse("empty term".into()));
    }
    match t.find(var) {
        None => {
            let c: BigInt = t
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient '{t}'")))?;
            Ok((0, sign * c))
        }
        Some(pos) => {
            let (cs, vs) = t.split_at(pos);
            let cs = cs.trim();
            let c: BigInt = if cs.is_empty() {
                BigInt::one()
            } else {
                cs.parse()
                    .map_err(|_| Error::Parse(format!("bad coefficient '{cs}'")))?
            };
            let vs = &vs[var.len_utf8()..];
            let e: i64 = if vs.is_empty() {
                1
            } else if let Some(es) = vs.strip_prefix('^') {
                es.parse()
                    .map_err(|_| Error::Parse(format!("bad exponent '{es}'")))?
            } else {
                return Err(Error::Parse(format!("bad term '{t}'")));
            };
            Ok((e, sign * c))
        }
    }
}
