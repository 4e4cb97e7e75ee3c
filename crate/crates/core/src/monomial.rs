//! Monomials in at most eight variables, packed one byte per exponent.
//!
//! Variable `x_i` lives in byte `7 - i`, so for a fixed degree the packed
//! integers compare exactly like the lexicographic order with
//! `x0 > x1 > … > xn`. The session order is degree-lexicographic.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

pub const MAX_VARS: usize = 8;
/// Exponents stay below 128 so that divisibility can be tested bytewise.
pub const MAX_EXPONENT: u32 = 127;

const HIGH_BITS: u64 = 0x8080_8080_8080_8080;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    packed: u64,
    degree: u32,
}

#[inline]
fn shift(var: usize) -> u32 {
    8 * (7 - var as u32)
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        packed: 0,
        degree: 0,
    };

    /// Builds a monomial from an exponent vector. Panics if more than
    /// [`MAX_VARS`] entries are given or an exponent exceeds [`MAX_EXPONENT`].
    pub fn new(exponents: &[u32]) -> Self {
        assert!(exponents.len() <= MAX_VARS, "too many variables");
        let mut packed = 0u64;
        let mut degree = 0;
        for (i, &e) in exponents.iter().enumerate() {
            assert!(e <= MAX_EXPONENT, "exponent {e} too large");
            packed |= u64::from(e) << shift(i);
            degree += e;
        }
        Monomial { packed, degree }
    }

    pub fn var(i: usize) -> Self {
        assert!(i < MAX_VARS);
        Monomial {
            packed: 1 << shift(i),
            degree: 1,
        }
    }

    /// `x_i^e`.
    pub fn var_pow(i: usize, e: u32) -> Self {
        assert!(i < MAX_VARS && e <= MAX_EXPONENT);
        Monomial {
            packed: u64::from(e) << shift(i),
            degree: e,
        }
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    #[inline]
    pub fn exponent(&self, i: usize) -> u32 {
        ((self.packed >> shift(i)) & 0xff) as u32
    }

    pub fn exponents(&self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|i| self.exponent(i)).collect()
    }

    #[inline]
    pub(crate) fn packed(&self) -> u64 {
        self.packed
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let m = Monomial {
            packed: self.packed + other.packed,
            degree: self.degree + other.degree,
        };
        debug_assert!(m.packed & HIGH_BITS == 0, "exponent overflow");
        m
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        divides_packed(self.packed, other.packed)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn divide_into(&self, other: &Monomial) -> Option<Monomial> {
        if self.divides(other) {
            Some(Monomial {
                packed: other.packed - self.packed,
                degree: other.degree - self.degree,
            })
        } else {
            None
        }
    }

    /// Removes one factor `x_i`, if present.
    pub fn div_var(&self, i: usize) -> Option<Monomial> {
        if self.exponent(i) > 0 {
            Some(Monomial {
                packed: self.packed - (1 << shift(i)),
                degree: self.degree - 1,
            })
        } else {
            None
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut packed = 0u64;
        let mut degree = 0;
        for i in 0..MAX_VARS {
            let e = self.exponent(i).max(other.exponent(i));
            packed |= u64::from(e) << shift(i);
            degree += e;
        }
        Monomial { packed, degree }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        (0..MAX_VARS).all(|i| self.exponent(i) == 0 || other.exponent(i) == 0)
    }

    pub fn display(&self, nvars: usize) -> String {
        let mut parts = Vec::new();
        for i in 0..nvars {
            match self.exponent(i) {
                0 => {}
                1 => parts.push(format!("x{i}")),
                e => parts.push(format!("x{i}^{e}")),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

#[inline]
pub(crate) fn divides_packed(a: u64, b: u64) -> bool {
    ((b | HIGH_BITS) - a) & HIGH_BITS == HIGH_BITS
}

impl Ord for Monomial {
    /// Degree-lexicographic, `x0 > x1 > … > xn`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then(self.packed.cmp(&other.packed))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display(MAX_VARS))
    }
}

pub(crate) fn check_vars(nvars: usize) -> Result<()> {
    if nvars == 0 || nvars > MAX_VARS {
        return Err(Error::TooManyVariables {
            got: nvars,
            max: MAX_VARS,
        });
    }
    Ok(())
}

/// `C(a, b)` as `usize`; zero when `b > a`.
pub fn binomial(a: usize, b: usize) -> usize {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for i in 0..b {
        acc = acc * (a - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// `dim S_k = C(n+k, n)` for `n+1` variables.
pub fn dim_graded_piece(nvars: usize, k: u32) -> usize {
    binomial(nvars - 1 + k as usize, nvars - 1)
}

/// All monomials of degree `k` in `nvars` variables, in decreasing session
/// order (`x0^k` first).
pub fn monomials_of_degree(nvars: usize, k: u32) -> Vec<Monomial> {
    let mut out = Vec::with_capacity(dim_graded_piece(nvars, k));
    let mut exps = vec![0u32; nvars];
    fill(&mut out, &mut exps, 0, k);
    debug_assert_eq!(out.len(), dim_graded_piece(nvars, k));
    out
}

fn fill(out: &mut Vec<Monomial>, exps: &mut [u32], pos: usize, remaining: u32) {
    if pos + 1 == exps.len() {
        exps[pos] = remaining;
        out.push(Monomial::new(exps));
        return;
    }
    for e in (0..=remaining).rev() {
        exps[pos] = e;
        fill(out, exps, pos + 1, remaining - e);
    }
    exps[pos] = 0;
}

/// The ordered monomial basis of one graded piece `S_k`, with a reverse index.
#[derive(Clone, Debug)]
pub struct DegreeBasis {
    nvars: usize,
    degree: u32,
    monomials: Vec<Monomial>,
    index: HashMap<u64, usize>,
}

impl DegreeBasis {
    pub fn new(nvars: usize, degree: u32) -> Self {
        let monomials = monomials_of_degree(nvars, degree);
        assert_eq!(monomials.len(), dim_graded_piece(nvars, degree));
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.packed, i))
            .collect();
        DegreeBasis {
            nvars,
            degree,
            monomials,
            index,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn get(&self, i: usize) -> Monomial {
        self.monomials[i]
    }

    /// Column index of a monomial of this degree.
    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(&m.packed).copied()
    }
}

/// Public form of the enumeration with the ambient-dimension signature:
/// all monomials of degree `k` in `x0..xn`.
pub fn monomial_basis(n: usize, k: u32) -> Result<Vec<Monomial>> {
    check_vars(n + 1)?;
    if k > MAX_EXPONENT {
        return Err(Error::DegreeOverflow {
            degree: k,
            max: MAX_EXPONENT,
        });
    }
    Ok(monomials_of_degree(n + 1, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_variable_quadrics() {
        let b = monomial_basis(1, 2).unwrap();
        let shown: Vec<String> = b.iter().map(|m| m.display(2)).collect();
        assert_eq!(shown, vec!["x0^2", "x0*x1", "x1^2"]);
    }

    #[test]
    fn counts() {
        assert_eq!(monomial_basis(3, 0).unwrap(), vec![Monomial::ONE]);
        assert_eq!(monomial_basis(3, 4).unwrap().len(), 35);
        for n in 0..6 {
            for k in 0..7 {
                assert_eq!(
                    monomial_basis(n, k).unwrap().len(),
                    binomial(n + k as usize, n)
                );
            }
        }
    }

    #[test]
    fn order_is_strictly_decreasing() {
        let b = monomial_basis(3, 5).unwrap();
        assert!(b.windows(2).all(|w| w[0] > w[1]));
        assert!(Monomial::new(&[0, 0, 3]) > Monomial::new(&[2, 0, 0]));
    }

    #[test]
    fn divisibility() {
        let a = Monomial::new(&[1, 2, 0]);
        let b = Monomial::new(&[2, 2, 1]);
        assert!(a.divides(&b));
        assert!(!b.divides(&a));
        assert_eq!(a.divide_into(&b), Some(Monomial::new(&[1, 0, 1])));
        assert_eq!(a.lcm(&Monomial::new(&[0, 3, 1])), Monomial::new(&[1, 3, 1]));
        assert!(Monomial::new(&[1, 0, 0]).is_coprime(&Monomial::new(&[0, 4, 4])));
    }

    #[test]
    fn too_many_variables() {
        assert!(monomial_basis(8, 1).is_err());
    }
}
