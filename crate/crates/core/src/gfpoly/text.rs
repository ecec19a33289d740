//! Text form of polynomials: `3*x1^2*x2 + 4*x3 - 1`.
//!
//! Whitespace is ignored. The printer lists terms in descending graded-lex
//! order with symmetric coefficient representatives and omits unit
//! coefficients, so `parse(print(f)) == f` and printing a canonical string
//! reproduces it.

use std::fmt;

use super::{shape, Monomial, Poly, PolyError, PrimeField};

pub fn parse_poly(field: PrimeField, nvars: usize, src: &str) -> Result<Poly, PolyError> {
    let toks = tokenize(src)?;
    let mut pos = 0;
    let mut out = Poly::zero(field, nvars);
    if toks.is_empty() {
        return Err(PolyError::Parse { pos: 0, msg: "empty polynomial".into() });
    }
    let mut first = true;
    while pos < toks.len() {
        let mut negative = false;
        match toks[pos].1 {
            Tok::Plus | Tok::Minus => {
                negative = toks[pos].1 == Tok::Minus;
                pos += 1;
            }
            _ if !first => {
                return Err(PolyError::Parse { pos: toks[pos].0, msg: "expected '+' or '-'".into() })
            }
            _ => {}
        }
        first = false;
        let (exps, coeff) = parse_term(field, nvars, &toks, &mut pos)?;
        let c = if negative { field.neg(coeff) } else { coeff };
        out = out.try_add(&Poly::monomial(field, Monomial::new(exps), c))?;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(u128),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, PolyError> {
    let bytes = src.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                out.push((start, Tok::Plus));
                i += 1
            }
            b'-' => {
                out.push((start, Tok::Minus));
                i += 1
            }
            b'*' => {
                out.push((start, Tok::Star));
                i += 1
            }
            b'^' => {
                out.push((start, Tok::Caret));
                i += 1
            }
            b'0'..=b'9' => {
                let n = read_number(bytes, &mut i)?;
                out.push((start, Tok::Num(n)));
            }
            b'x' => {
                i += 1;
                if i >= bytes.len() || !bytes[i].is_ascii_digit() {
                    return Err(PolyError::Parse { pos: start, msg: "variable needs an index".into() });
                }
                let n = read_number(bytes, &mut i)?;
                if n == 0 {
                    return Err(PolyError::Parse { pos: start, msg: "variables are numbered from x1".into() });
                }
                out.push((start, Tok::Var(n as usize)));
            }
            _ => {
                return Err(PolyError::Parse {
                    pos: start,
                    msg: format!("unexpected character {:?}", b as char),
                })
            }
        }
    }
    Ok(out)
}

fn read_number(bytes: &[u8], i: &mut usize) -> Result<u128, PolyError> {
    let start = *i;
    let mut n: u128 = 0;
    while *i < bytes.len() && bytes[*i].is_ascii_digit() {
        n = n
            .checked_mul(10)
            .and_then(|v| v.checked_add((bytes[*i] - b'0') as u128))
            .ok_or(PolyError::Parse { pos: start, msg: "number too large".into() })?;
        *i += 1;
    }
    Ok(n)
}

fn parse_term(
    field: PrimeField,
    nvars: usize,
    toks: &[(usize, Tok)],
    pos: &mut usize,
) -> Result<(Vec<u32>, u64), PolyError> {
    let mut exps = vec![0u32; nvars];
    let mut coeff = 1u64;
    loop {
        let (at, tok) = toks
            .get(*pos)
            .cloned()
            .ok_or(PolyError::Parse { pos: usize::MAX, msg: "unexpected end of input".into() })?;
        match tok {
            Tok::Num(n) => {
                coeff = field.mul(coeff, (n % field.p() as u128) as u64);
                *pos += 1;
            }
            Tok::Var(v) => {
                if v > nvars {
                    return Err(shape(format!("x{v} in a ring with {nvars} variables")));
                }
                *pos += 1;
                let mut e = 1u32;
                if let Some((_, Tok::Caret)) = toks.get(*pos) {
                    *pos += 1;
                    match toks.get(*pos) {
                        Some((_, Tok::Num(n))) if *n <= u32::MAX as u128 => {
                            e = *n as u32;
                            *pos += 1;
                        }
                        _ => return Err(PolyError::Parse { pos: at, msg: "bad exponent".into() }),
                    }
                }
                exps[v - 1] += e;
            }
            _ => return Err(PolyError::Parse { pos: at, msg: "expected a number or variable".into() }),
        }
        match toks.get(*pos) {
            Some((_, Tok::Star)) => *pos += 1,
            _ => return Ok((exps, coeff)),
        }
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.exps().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        if e == 1 {
            write!(f, "x{}", i + 1)?;
        } else {
            write!(f, "x{}^{}", i + 1, e)?;
        }
    }
    Ok(())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let field = self.field();
        for (k, (m, c)) in self.terms().rev().enumerate() {
            let s = field.signed(c);
            let mag = s.unsigned_abs();
            match (k, s < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.degree() == 0 {
                write!(f, "{mag}")?;
            } else {
                if mag != 1 {
                    write!(f, "{mag}*")?;
                }
                write_monomial(f, m)?;
            }
        }
        Ok(())
    }
}
