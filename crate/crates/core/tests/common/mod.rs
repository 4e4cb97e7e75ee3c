//! Oracles for integration tests, written against exponent vectors and
//! plain modular arithmetic only.
#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use nodal_core::field::Rationals;
use nodal_core::poly::HomogeneousPolynomial;

pub const P: u64 = 1_000_003;

pub type Exps = Vec<u32>;

pub fn binom(a: u64, b: u64) -> u64 {
    if b > a {
        return 0;
    }
    (0..b).fold(1, |acc, i| acc * (a - i) / (i + 1))
}

/// All exponent vectors of `nvars` variables and total degree `k`.
pub fn monomials(nvars: usize, k: u32) -> Vec<Exps> {
    if nvars == 1 {
        return vec![vec![k]];
    }
    let mut out = Vec::new();
    for e in 0..=k {
        for mut rest in monomials(nvars - 1, k - e) {
            rest.insert(0, e);
            out.push(rest);
        }
    }
    out
}

/// Coefficients of `(1 + t + … + t^{d-2})^{n+1}` up to `t^k_max`.
pub fn reference_series(n: usize, d: u32, k_max: u32) -> Vec<u64> {
    let factor: Vec<u64> = (0..=d - 2).map(|_| 1).collect();
    let mut acc = vec![1u64];
    for _ in 0..=n {
        let mut next = vec![0u64; acc.len() + factor.len() - 1];
        for (i, a) in acc.iter().enumerate() {
            for (j, b) in factor.iter().enumerate() {
                next[i + j] += a * b;
            }
        }
        acc = next;
    }
    acc.resize(k_max as usize + 1, 0);
    acc
}

pub fn to_mod_p(c: &BigRational) -> u64 {
    let p = BigInt::from(P);
    let num = c.numer().mod_floor(&p).to_u64().unwrap();
    let den = c.denom().mod_floor(&p).to_u64().unwrap();
    assert_ne!(den, 0, "denominator divisible by the oracle prime");
    num * pow_mod(den, P - 2) % P
}

pub fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    a %= P;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % P;
        }
        a = a * a % P;
        e >>= 1;
    }
    r
}

/// Sparse polynomial over `F_P`, keyed by exponent vectors.
pub type PolyP = HashMap<Exps, u64>;

pub fn poly_mod_p(f: &HomogeneousPolynomial<Rationals>) -> PolyP {
    let nvars = f.nvars();
    f.terms().map(|(m, c)| (m.exponents(nvars), to_mod_p(c))).collect()
}

pub fn partial(f: &PolyP, i: usize) -> PolyP {
    let mut out = PolyP::new();
    for (e, &c) in f {
        if e[i] == 0 {
            continue;
        }
        let mut e2 = e.clone();
        e2[i] -= 1;
        let v = c * u64::from(e[i]) % P;
        if v != 0 {
            out.insert(e2, v);
        }
    }
    out
}

pub fn times_monomial(f: &PolyP, m: &[u32]) -> PolyP {
    f.iter()
        .map(|(e, &c)| (e.iter().zip(m).map(|(a, b)| a + b).collect(), c))
        .collect()
}

pub fn eval_mod_p(f: &PolyP, x: &[u64]) -> u64 {
    f.iter().fold(0, |acc, (e, &c)| {
        let term = e.iter().zip(x).fold(c, |t, (&k, &xi)| t * pow_mod(xi, u64::from(k)) % P);
        (acc + term) % P
    })
}

/// Row vector of `g` in the monomial basis of degree `k`.
pub fn row(g: &PolyP, index: &HashMap<Exps, usize>) -> Vec<u64> {
    let mut r = vec![0; index.len()];
    for (e, &c) in g {
        r[index[e]] = c;
    }
    r
}

pub fn index_of_degree(nvars: usize, k: u32) -> HashMap<Exps, usize> {
    monomials(nvars, k).into_iter().enumerate().map(|(i, e)| (e, i)).collect()
}

/// Rank over `F_P` by plain Gaussian elimination.
pub fn rank_mod_p(mut rows: Vec<Vec<u64>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = pow_mod(rows[rank][col], P - 2);
        for x in rows[rank].iter_mut() {
            *x = *x * inv % P;
        }
        let pivot_row = rows[rank].clone();
        for (r, other) in rows.iter_mut().enumerate() {
            if r != rank && other[col] != 0 {
                let c = other[col];
                for (x, y) in other.iter_mut().zip(&pivot_row) {
                    *x = (*x + P - c * y % P) % P;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `dim J(f)_k` from the generators `x^a · ∂f/∂x_i`.
pub fn jacobian_dim(f: &HomogeneousPolynomial<Rationals>, k: u32) -> usize {
    let nvars = f.nvars();
    let d = f.degree();
    if k + 1 < d {
        return 0;
    }
    let fp = poly_mod_p(f);
    let index = index_of_degree(nvars, k);
    let mut rows = Vec::new();
    for i in 0..nvars {
        let g = partial(&fp, i);
        for m in monomials(nvars, k + 1 - d) {
            rows.push(row(&times_monomial(&g, &m), &index));
        }
    }
    rank_mod_p(rows)
}

pub fn milnor_dim(f: &HomogeneousPolynomial<Rationals>, k: u32) -> usize {
    binom(f.nvars() as u64 + u64::from(k) - 1, u64::from(k)) as usize - jacobian_dim(f, k)
}

/// `dim {G ∈ S_k : G(a) = 0 for every listed a}`.
pub fn vanishing_dim(points: &[Vec<BigRational>], nvars: usize, k: u32) -> usize {
    let ms = monomials(nvars, k);
    let rows: Vec<Vec<u64>> = points
        .iter()
        .map(|a| {
            let x: Vec<u64> = a.iter().map(to_mod_p).collect();
            ms.iter()
                .map(|e| e.iter().zip(&x).fold(1, |t, (&k, &xi)| t * pow_mod(xi, u64::from(k)) % P))
                .collect()
        })
        .collect();
    ms.len() - rank_mod_p(rows)
}

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn is_zero_poly(f: &PolyP) -> bool {
    f.values().all(Zero::is_zero)
}
