//! Test-vector expressions: signed rational combinations of atoms
//! `phi(t=<rational>, n=<int>, b=<index>)`, e.g.
//! `phi(t=0, n=0, b=0) - 2/5*phi(t=1/3, n=-1, b=0)`.

use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::exactnum::{CycValue, KElement, PadicContext};
use crate::repn::{parse_rational, InducedVector};

fn parse_err(s: &str, what: &str) -> Error {
    Error::Parse(format!("{what} in vector expression {s:?}"))
}

fn parse_atom(ctx: PadicContext, body: &str, whole: &str) -> Result<(KElement, i64, usize)> {
    let (mut t, mut n, mut b) = (None, None, None);
    for field in body.split(',') {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| parse_err(whole, "expected key=value"))?;
        let value = value.trim();
        match key.trim() {
            "t" => t = Some(KElement::new(ctx, parse_rational(value)?)),
            "n" => {
                n = Some(
                    value
                        .parse::<i64>()
                        .map_err(|_| parse_err(whole, "bad n"))?,
                )
            }
            "b" => {
                b = Some(
                    value
                        .parse::<usize>()
                        .map_err(|_| parse_err(whole, "bad b"))?,
                )
            }
            _ => return Err(parse_err(whole, "unknown key")),
        }
    }
    match (t, n, b) {
        (Some(t), Some(n), Some(b)) => Ok((t, n, b)),
        _ => Err(parse_err(whole, "phi needs t, n and b")),
    }
}

pub fn parse_vector(ctx: PadicContext, s: &str) -> Result<InducedVector> {
    let mut v = InducedVector::zero();
    let mut rest = s.trim();
    if rest == "0" {
        return Ok(v);
    }
    let mut first = true;
    while !rest.is_empty() {
        let mut sign = BigRational::one();
        if let Some(r) = rest.strip_prefix('+') {
            rest = r.trim_start();
        } else if let Some(r) = rest.strip_prefix('-') {
            sign = -sign;
            rest = r.trim_start();
        } else if !first {
            return Err(parse_err(s, "expected + or -"));
        }
        first = false;
        let start = rest
            .find("phi(")
            .ok_or_else(|| parse_err(s, "expected phi(...)"))?;
        let coeff_text = rest[..start].trim().trim_end_matches('*').trim();
        let coeff = if coeff_text.is_empty() {
            BigRational::one()
        } else {
            parse_rational(coeff_text)?
        };
        let after = &rest[start + 4..];
        let end = after
            .find(')')
            .ok_or_else(|| parse_err(s, "unclosed phi("))?;
        let (t, n, b) = parse_atom(ctx, &after[..end], s)?;
        v.add_term(&t, n, b, &CycValue::from_rational(sign * coeff));
        rest = after[end + 1..].trim_start();
    }
    Ok(v)
}

/// Inverse of `parse_vector` for vectors with rational coefficients.
pub fn format_vector(v: &InducedVector) -> Option<String> {
    if v.is_zero() {
        return Some("0".into());
    }
    let mut out = String::new();
    for ((t, n, b), c) in v.terms() {
        let c = c.as_rational()?;
        let neg = c.is_negative();
        let a = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !a.is_one() {
            out.push_str(&format!("{a}*"));
        }
        out.push_str(&format!("phi(t={t}, n={n}, b={b})"));
    }
    Some(out)
}
