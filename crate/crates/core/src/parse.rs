//! Text formats: polynomials and projective points.
//!
//! Polynomials are sums of terms `[coeff][*]x<i>[^e][*x<j>[^e]…]` joined by
//! `+` or `-`, where a coefficient is an integer or a fraction `a/b`.
//! Points are written `[a0 : a1 : … : an]`. Whitespace is ignored.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{Field, Rationals};
use crate::monomial::{check_vars, Monomial, MAX_EXPONENT};
use crate::poly::HomogeneousPolynomial;

struct Cursor<'a> {
    bytes: Vec<(usize, char)>,
    pos: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        let bytes = src
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .map(|(i, c)| (i, if c == '−' { '-' } else { c }))
            .collect();
        Cursor {
            bytes,
            pos: 0,
            _src: src,
        }
    }

    fn peek(&self) -> Option<char> {
        self.bytes.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.bytes
            .get(self.pos)
            .map(|&(i, _)| i)
            .unwrap_or_else(|| self.bytes.last().map(|&(i, _)| i + 1).unwrap_or(0))
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            None
        } else {
            Some(self.bytes[start..self.pos].iter().map(|&(_, c)| c).collect())
        }
    }

    fn rational(&mut self) -> Result<Option<BigRational>> {
        let Some(num) = self.digits() else {
            return Ok(None);
        };
        let num: BigInt = num.parse().expect("digits parse");
        if self.eat('/') {
            let at = self.offset();
            let den = self
                .digits()
                .ok_or_else(|| Error::parse(at, "expected denominator after `/`"))?;
            let den: BigInt = den.parse().expect("digits parse");
            if den.is_zero() {
                return Err(Error::parse(at, "zero denominator"));
            }
            return Ok(Some(BigRational::new(num, den)));
        }
        Ok(Some(BigRational::from_integer(num)))
    }
}

/// Parses a homogeneous polynomial in `x0..xn` with rational coefficients.
pub fn parse_rational_polynomial(text: &str, n: usize) -> Result<HomogeneousPolynomial<Rationals>> {
    let nvars = n + 1;
    check_vars(nvars)?;
    let mut cur = Cursor::new(text);
    if cur.peek().is_none() {
        return Err(Error::parse(0, "empty polynomial"));
    }
    let mut terms: Vec<(Monomial, BigRational)> = Vec::new();
    let mut degree: Option<u32> = None;
    let mut first = true;
    loop {
        let mut sign = BigRational::one();
        match cur.peek() {
            Some('+') => {
                cur.bump();
            }
            Some('-') => {
                cur.bump();
                sign = -sign;
            }
            _ if !first => {
                return Err(Error::parse(cur.offset(), "expected `+` or `-` between terms"));
            }
            _ => {}
        }
        first = false;
        let (mono, coeff) = parse_term(&mut cur, nvars)?;
        match degree {
            None => degree = Some(mono.degree()),
            Some(d) if d != mono.degree() => {
                return Err(Error::MixedDegree {
                    first: d,
                    second: mono.degree(),
                })
            }
            _ => {}
        }
        terms.push((mono, sign * coeff));
        if cur.peek().is_none() {
            break;
        }
    }
    let degree = degree.expect("at least one term");
    HomogeneousPolynomial::from_terms(&Rationals, nvars, degree, terms)
}

fn parse_term(cur: &mut Cursor<'_>, nvars: usize) -> Result<(Monomial, BigRational)> {
    let start = cur.offset();
    let coeff = cur.rational()?;
    let mut exps = vec![0u32; nvars];
    let mut saw_var = false;
    if coeff.is_some() {
        // `3*x0` and `3x0` are both accepted
        if cur.eat('*') && cur.peek() != Some('x') {
            return Err(Error::parse(cur.offset(), "expected a variable after `*`"));
        }
    }
    while cur.peek() == Some('x') {
        cur.bump();
        let at = cur.offset();
        let idx: usize = cur
            .digits()
            .ok_or_else(|| Error::parse(at, "expected variable index after `x`"))?
            .parse()
            .map_err(|_| Error::parse(at, "variable index too large"))?;
        if idx >= nvars {
            return Err(Error::UnknownVariable {
                index: idx,
                n: nvars - 1,
            });
        }
        let mut e = 1u32;
        if cur.eat('^') {
            let at = cur.offset();
            e = cur
                .digits()
                .ok_or_else(|| Error::parse(at, "expected exponent after `^`"))?
                .parse()
                .map_err(|_| Error::parse(at, "exponent too large"))?;
        }
        exps[idx] += e;
        if exps[idx] > MAX_EXPONENT {
            return Err(Error::DegreeOverflow {
                degree: exps[idx],
                max: MAX_EXPONENT,
            });
        }
        saw_var = true;
        if !cur.eat('*') {
            break;
        }
        if cur.peek() != Some('x') {
            return Err(Error::parse(cur.offset(), "expected a variable after `*`"));
        }
    }
    if coeff.is_none() && !saw_var {
        return Err(match cur.peek() {
            Some(c) => Error::parse(cur.offset(), format!("unexpected character `{c}`")),
            None => Error::parse(start, "expected a term"),
        });
    }
    if let Some(c) = cur.peek() {
        if c != '+' && c != '-' {
            return Err(Error::parse(cur.offset(), format!("unexpected character `{c}`")));
        }
    }
    Ok((Monomial::new(&exps), coeff.unwrap_or_else(BigRational::one)))
}

/// Parses a polynomial and maps it into `field`.
pub fn parse_polynomial<K: Field>(text: &str, n: usize, field: &K) -> Result<HomogeneousPolynomial<K>> {
    parse_rational_polynomial(text, n)?.reduce_into(field)
}

/// Parses `[a0 : a1 : … : an]` into rational coordinates.
pub fn parse_point(text: &str, n: usize) -> Result<Vec<BigRational>> {
    let mut cur = Cursor::new(text);
    if !cur.eat('[') {
        return Err(Error::parse(cur.offset(), "expected `[`"));
    }
    let mut coords = Vec::new();
    loop {
        let mut negative = false;
        if cur.eat('-') {
            negative = true;
        } else {
            cur.eat('+');
        }
        let at = cur.offset();
        let v = cur
            .rational()?
            .ok_or_else(|| Error::parse(at, "expected a coordinate"))?;
        coords.push(if negative { -v } else { v });
        if cur.eat(':') {
            continue;
        }
        if cur.eat(']') {
            break;
        }
        return Err(Error::parse(cur.offset(), "expected `:` or `]`"));
    }
    if cur.peek().is_some() {
        return Err(Error::parse(cur.offset(), "trailing characters after `]`"));
    }
    if coords.len() != n + 1 {
        return Err(Error::Invalid(format!(
            "point has {} coordinates, expected {}",
            coords.len(),
            n + 1
        )));
    }
    if coords.iter().all(|c| c.is_zero()) {
        return Err(Error::DegeneratePoint);
    }
    Ok(coords)
}

/// One point per non-empty line; `#` starts a comment.
pub fn parse_points(text: &str, n: usize) -> Result<Vec<Vec<BigRational>>> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| parse_point(l, n))
        .collect()
}

/// One polynomial per non-empty line; `#` starts a comment.
pub fn parse_polynomial_list(text: &str, n: usize) -> Result<Vec<HomogeneousPolynomial<Rationals>>> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| parse_rational_polynomial(l, n))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_sums() {
        let f = parse_rational_polynomial("x0^3 + x1^3", 1).unwrap();
        assert_eq!((f.degree(), f.num_terms()), (3, 2));
        let g = parse_rational_polynomial("3*x0^2*x1 - x2^3", 2).unwrap();
        assert_eq!((g.degree(), g.num_terms()), (3, 2));
        assert_eq!(g.to_string(), "3*x0^2*x1 - x2^3");
    }

    #[test]
    fn fractions_whitespace_and_implicit_products() {
        let f = parse_rational_polynomial(" -1/2 x0 * x1 +2x1^ 2- x0x1", 1);
        // `x0x1` lacks a `*`; only explicit products are accepted
        assert!(f.is_err());
        let f = parse_rational_polynomial(" -1/2 x0 * x1 +2x1^ 2", 1).unwrap();
        assert_eq!(f.to_string(), "-1/2*x0*x1 + 2*x1^2");
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_rational_polynomial("x0^2 + x1", 1),
            Err(Error::MixedDegree { first: 2, second: 1 })
        ));
        assert!(matches!(
            parse_rational_polynomial("x0^2 + x3^2", 2),
            Err(Error::UnknownVariable { index: 3, n: 2 })
        ));
        assert!(matches!(parse_rational_polynomial("x0^2 +", 1), Err(Error::Parse { .. })));
        assert!(matches!(parse_rational_polynomial("", 1), Err(Error::Parse { .. })));
        assert!(matches!(parse_rational_polynomial("x0 ** x1", 1), Err(Error::Parse { .. })));
        assert!(matches!(parse_rational_polynomial("1/0*x0", 1), Err(Error::Parse { .. })));
    }

    #[test]
    fn cancelling_terms_give_zero_with_degree() {
        let f = parse_rational_polynomial("x0^2 - x0^2", 1).unwrap();
        assert!(f.is_zero());
        assert_eq!(f.degree(), 2);
    }

    #[test]
    fn points() {
        let p = parse_point("[0 : 1/2 : -3]", 2).unwrap();
        assert_eq!(p[1], BigRational::new(1.into(), 2.into()));
        assert_eq!(p[2], BigRational::from_integer((-3).into()));
        assert_eq!(parse_point("[0:0]", 1), Err(Error::DegeneratePoint));
        assert!(parse_point("[1:2", 1).is_err());
        assert!(parse_point("[1:2:3]", 1).is_err());
        let all = parse_points("# nodes\n[0:0:1]\n\n[1:0:0] # second\n", 2).unwrap();
        assert_eq!(all.len(), 2);
    }
}
