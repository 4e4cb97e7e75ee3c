//! Scalar fields used for every rank computation.
//!
//! Two kinds of field are supported: prime fields `F_p` with `p < 2^31`, and
//! the rationals. Field elements carry no reference to their field, so all
//! arithmetic goes through a field value (`&K`), which keeps `F_p` elements
//! plain `u64`s.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default session primes. Both are below 2^31.
pub const DEFAULT_PRIMES: [u64; 2] = [2147483629, 2147483587];

#[allow(clippy::wrong_self_convention)]
pub trait Field: Clone + Send + Sync + fmt::Debug + 'static {
    type Elem: Clone + PartialEq + Eq + fmt::Debug + Send + Sync + 'static;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    /// Image of a rational number; fails when the denominator vanishes.
    fn from_rational(&self, q: &BigRational) -> Result<Self::Elem>;
    fn descriptor(&self) -> FieldDescriptor;

    /// Accumulator representation used by row reduction, allowing delayed
    /// normalization.
    type Lazy: Clone + Send + Sync + 'static;
    fn lazy(&self, a: &Self::Elem) -> Self::Lazy;
    fn lazy_zero(&self) -> Self::Lazy;
    /// `acc -= c * b`
    fn lazy_sub_mul(&self, acc: &mut Self::Lazy, c: &Self::Elem, b: &Self::Elem);
    fn normalize(&self, acc: &Self::Lazy) -> Self::Elem;

    /// `a -= c * b`
    fn sub_mul_assign(&self, a: &mut Self::Elem, c: &Self::Elem, b: &Self::Elem) {
        *a = self.sub(a, &self.mul(c, b));
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b))
    }

    /// Prints an element for reports and polynomial display.
    fn format(&self, a: &Self::Elem) -> String;

    /// The element as a rational number, for fields of characteristic 0.
    fn to_rational(&self, _a: &Self::Elem) -> Option<BigRational> {
        None
    }

    /// Rank of a dense matrix given by rows.
    fn dense_rank(&self, rows: Vec<Vec<Self::Elem>>) -> usize {
        crate::linalg::gauss_rank(self, rows)
    }
}

/// `F_p` for a prime `p < 2^31`, so that two reduced products fit in a `u64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 31 {
            return Err(Error::Invalid(format!("prime {p} does not fit in 31 bits")));
        }
        if !is_prime_u64(p) {
            return Err(Error::NotPrime { p });
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce_bigint(&self, v: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        let r = v.mod_floor(&p);
        r.to_u64().expect("residue fits in u64")
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u64;
    /// Kept below `p^2`; a subtraction is an addition of `(p - c) * b`.
    type Lazy = u64;

    #[inline]
    fn lazy(&self, a: &u64) -> u64 {
        *a
    }
    #[inline]
    fn lazy_zero(&self) -> u64 {
        0
    }
    #[inline]
    fn lazy_sub_mul(&self, acc: &mut u64, c: &u64, b: &u64) {
        let p2 = self.p * self.p;
        let v = *acc + (self.p - c) * b;
        *acc = if v >= p2 { v - p2 } else { v };
    }
    #[inline]
    fn normalize(&self, acc: &u64) -> u64 {
        acc % self.p
    }

    #[inline]
    fn zero(&self) -> u64 {
        0
    }
    #[inline]
    fn one(&self) -> u64 {
        1
    }
    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero in F_{}", self.p);
        self.pow(*a, self.p - 2)
    }
    fn from_i64(&self, v: i64) -> u64 {
        let p = self.p as i64;
        (((v % p) + p) % p) as u64
    }
    fn from_rational(&self, q: &BigRational) -> Result<u64> {
        let den = self.reduce_bigint(q.denom());
        if den == 0 {
            return Err(Error::BadPrime { p: self.p });
        }
        let num = self.reduce_bigint(q.numer());
        Ok(self.mul(&num, &self.inv(&den)))
    }
    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor::Prime(self.p)
    }
    #[inline]
    fn sub_mul_assign(&self, a: &mut u64, c: &u64, b: &u64) {
        let prod = c * b % self.p;
        *a = if *a >= prod {
            *a - prod
        } else {
            *a + self.p - prod
        };
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
}

/// The field of rational numbers with arbitrary-precision entries.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;
    type Lazy = BigRational;

    fn to_rational(&self, a: &BigRational) -> Option<BigRational> {
        Some(a.clone())
    }

    fn lazy(&self, a: &BigRational) -> BigRational {
        a.clone()
    }
    fn lazy_zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn lazy_sub_mul(&self, acc: &mut BigRational, c: &BigRational, b: &BigRational) {
        *acc -= c * b;
    }
    fn normalize(&self, acc: &BigRational) -> BigRational {
        acc.clone()
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero in Q");
        a.recip()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_rational(&self, q: &BigRational) -> Result<BigRational> {
        Ok(q.clone())
    }
    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor::Exact
    }
    fn sub_mul_assign(&self, a: &mut BigRational, c: &BigRational, b: &BigRational) {
        *a -= c * b;
    }
    fn format(&self, a: &BigRational) -> String {
        format_rational(a)
    }

    fn dense_rank(&self, rows: Vec<Vec<BigRational>>) -> usize {
        crate::linalg::bareiss_rank(rows.iter().map(|r| primitive_integer_row(r)).collect())
    }
}

pub fn format_rational(a: &BigRational) -> String {
    if a.is_integer() {
        a.numer().to_string()
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

/// Which field a computation ran over; serialized as `fp:<p>` or `exact`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldDescriptor {
    Prime(u64),
    Exact,
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Prime(p) => write!(f, "fp:{p}"),
            FieldDescriptor::Exact => write!(f, "exact"),
        }
    }
}

impl FromStr for FieldDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "exact" {
            return Ok(FieldDescriptor::Exact);
        }
        let p = s
            .strip_prefix("fp:")
            .ok_or_else(|| Error::Invalid(format!("bad field `{s}`: expected fp:<p> or exact")))?;
        let p: u64 = p
            .parse()
            .map_err(|_| Error::Invalid(format!("bad prime `{p}`")))?;
        Ok(FieldDescriptor::Prime(p))
    }
}

impl Serialize for FieldDescriptor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FieldDescriptor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Session field configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldConfig {
    /// Arbitrary-precision rationals.
    Exact,
    /// One or more primes; results are accepted only when all agree.
    Primes(Vec<u64>),
}

impl Default for FieldConfig {
    fn default() -> Self {
        FieldConfig::Primes(DEFAULT_PRIMES.to_vec())
    }
}

impl FieldConfig {
    pub fn descriptors(&self) -> Vec<FieldDescriptor> {
        match self {
            FieldConfig::Exact => vec![FieldDescriptor::Exact],
            FieldConfig::Primes(ps) => ps.iter().map(|&p| FieldDescriptor::Prime(p)).collect(),
        }
    }

    /// Checks primality, distinctness and `p > 2·d·(n+1)`.
    pub fn validate(&self, n: usize, d: u32) -> Result<()> {
        if let FieldConfig::Primes(ps) = self {
            if ps.is_empty() {
                return Err(Error::Invalid("no primes configured".into()));
            }
            let bound = 2 * u64::from(d) * (n as u64 + 1);
            for (i, &p) in ps.iter().enumerate() {
                PrimeField::new(p)?;
                if p <= bound {
                    return Err(Error::PrimeTooSmall { p, bound });
                }
                if ps[..i].contains(&p) {
                    return Err(Error::Invalid(format!("prime {p} listed twice")));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for FieldConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.descriptors().iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for FieldConfig {
    type Err = Error;

    /// Accepts `exact` or a comma list such as `fp:2147483629,fp:2147483587`.
    fn from_str(s: &str) -> Result<Self> {
        let descs = s
            .split(',')
            .map(str::parse::<FieldDescriptor>)
            .collect::<Result<Vec<_>>>()?;
        if descs.contains(&FieldDescriptor::Exact) {
            if descs.len() != 1 {
                return Err(Error::Invalid("`exact` cannot be combined with primes".into()));
            }
            return Ok(FieldConfig::Exact);
        }
        Ok(FieldConfig::Primes(
            descs
                .into_iter()
                .map(|d| match d {
                    FieldDescriptor::Prime(p) => p,
                    FieldDescriptor::Exact => unreachable!(),
                })
                .collect(),
        ))
    }
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Clears denominators of a rational vector, returning a primitive integer vector.
pub(crate) fn primitive_integer_row(row: &[BigRational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for q in row {
        if !q.is_zero() {
            lcm = lcm.lcm(q.denom());
        }
    }
    let mut ints: Vec<BigInt> = row
        .iter()
        .map(|q| (q * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let mut g = BigInt::zero();
    for v in &ints {
        g = g.gcd(v);
    }
    if !g.is_zero() && !g.is_one() {
        for v in ints.iter_mut() {
            *v = &*v / &g;
        }
    }
    if let Some(first) = ints.iter().find(|v| !v.is_zero()) {
        if first.is_negative() {
            for v in ints.iter_mut() {
                *v = -&*v;
            }
        }
    }
    ints
}
