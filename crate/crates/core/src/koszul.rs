//! Syzygies among the partial derivatives, the trivial (Koszul) syzygies,
//! the graded pieces `H^n(K•(f))_m` and the invariant `mdr`.
//!
//! A syzygy `Σ a_j ∂f/∂x_j = 0` with `a_j ∈ S_r` lives in `(S_r)^{n+1}`,
//! laid out slot after slot, and contributes to `H^n(K•(f))_{n+r}`.

use std::sync::OnceLock;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner::HilbertEngine;
use crate::linalg::{sparse_rank, Layout, LinearMap, SparseRow, SubspaceBasis};
use crate::milnor::{JacobianContext, Threshold};
use crate::monomial::{binomial, dim_graded_piece, Monomial};
use crate::poly::HomogeneousPolynomial;

/// Above this many generators `h·E_ij` the trivial syzygies are counted
/// through a certified regular sequence instead of an explicit rank.
pub const EXPLICIT_TRIVIAL_LIMIT: usize = 5_000;

/// The same limit over the rationals, where ranks are far costlier.
pub const EXACT_EXPLICIT_TRIVIAL_LIMIT: usize = 200;

/// Components `(a_0, …, a_n)` of one degree `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyzygyVector<K: Field> {
    pub components: Vec<HomogeneousPolynomial<K>>,
}

impl<K: Field> SyzygyVector<K> {
    /// Splits a coordinate vector of `(S_r)^{n+1}`.
    pub fn from_sparse(ctx: &JacobianContext<K>, r: u32, v: &[(u32, K::Elem)]) -> Self {
        let basis = ctx.degree_basis(r);
        let width = basis.len() as u32;
        let components = (0..ctx.nvars() as u32)
            .map(|slot| {
                let part: Vec<(u32, K::Elem)> = v
                    .iter()
                    .filter(|(c, _)| c / width == slot)
                    .map(|(c, x)| (c % width, x.clone()))
                    .collect();
                HomogeneousPolynomial::from_sparse(ctx.field(), &basis, &part)
            })
            .collect();
        SyzygyVector { components }
    }

    pub fn is_syzygy_of(&self, partials: &[HomogeneousPolynomial<K>]) -> bool {
        let mut it = self.components.iter().zip(partials).map(|(a, g)| a.mul(g));
        let first = it.next().expect("at least one component");
        it.fold(first, |acc, t| acc.add(&t)).is_zero()
    }
}

fn block_layout<K: Field>(ctx: &JacobianContext<K>, r: u32) -> Layout {
    Layout::repeated(ctx.nvars(), r, ctx.nvars())
}

/// The map `(S_r)^{n+1} → S_{r+d-1}`, `(a_j) ↦ Σ a_j ∂f/∂x_j`.
pub fn syzygy_map<K: Field>(ctx: &JacobianContext<K>, r: u32) -> LinearMap<K> {
    let source = ctx.degree_basis(r);
    let target = ctx.degree_basis(r + ctx.d() - 1);
    let mut columns = Vec::with_capacity(source.len() * ctx.nvars());
    for g in ctx.partials() {
        for m in source.monomials() {
            columns.push(g.mul_monomial(m).to_sparse(&target));
        }
    }
    LinearMap::from_columns(
        ctx.field(),
        block_layout(ctx, r),
        Layout::degree(ctx.nvars(), r + ctx.d() - 1),
        columns,
    )
}

pub fn syzygy_space<K: Field>(ctx: &JacobianContext<K>, r: u32) -> SubspaceBasis<K> {
    syzygy_map(ctx, r).kernel_basis()
}

/// `dim` of [`syzygy_space`] by rank–nullity, with the rank `dim J(f)_{r+d-1}`.
pub fn syzygy_dim<K: Field>(ctx: &JacobianContext<K>, r: u32) -> usize {
    ctx.nvars() * dim_graded_piece(ctx.nvars(), r) - ctx.jacobian_dim(r + ctx.d() - 1)
}

/// Generators `h·E_ij` (`∂f/∂x_j` in slot `i`, `-∂f/∂x_i` in slot `j`).
fn trivial_generators<K: Field>(ctx: &JacobianContext<K>, r: u32) -> Vec<SparseRow<K::Elem>> {
    let d = ctx.d();
    if r + 1 < d {
        return Vec::new();
    }
    let target = ctx.degree_basis(r);
    let width = target.len() as u32;
    let multipliers = ctx.degree_basis(r + 1 - d);
    let partials = ctx.partials();
    let field = ctx.field();
    let nvars = ctx.nvars();
    let mut rows = Vec::with_capacity(binomial(nvars, 2) * multipliers.len());
    for i in 0..nvars {
        for j in i + 1..nvars {
            for h in multipliers.monomials() {
                let mut row: Vec<(u32, K::Elem)> = partials[j]
                    .mul_monomial(h)
                    .to_sparse(&target)
                    .into_iter()
                    .map(|(c, v)| (i as u32 * width + c, v))
                    .collect();
                row.extend(
                    partials[i]
                        .mul_monomial(h)
                        .to_sparse(&target)
                        .into_iter()
                        .map(|(c, v)| (j as u32 * width + c, field.neg(&v))),
                );
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
    }
    rows
}

pub fn trivial_syzygy_space<K: Field>(ctx: &JacobianContext<K>, r: u32) -> SubspaceBasis<K> {
    SubspaceBasis::span_sparse(ctx.field(), block_layout(ctx, r), trivial_generators(ctx, r))
}

/// How `dim` of the trivial syzygies was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrivialRoute {
    /// Rank of the generators `h·E_ij`.
    Explicit,
    /// Count from a certified regular sequence of `n` partials.
    RegularSequence,
}

/// `n` of the partial derivatives (all but `excluded`, possibly after an
/// invertible change of generators) that form a regular sequence,
/// certified by an Artinian quotient on the hyperplane `x_section = ℓ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularSequenceCertificate {
    pub excluded: usize,
    pub section_variable: usize,
    /// Coefficients of `ℓ` in the other variables, empty for `x_section = 0`.
    pub section_form: Vec<String>,
    pub mixed_generators: bool,
    /// Degree at which the restricted quotient vanishes, `n(d-2)+1`.
    pub vanishing_degree: u32,
}

/// `g` restricted to `x_j = Σ_{i≠j} c_i x_i`, written in the other variables.
fn restrict<K: Field>(g: &HomogeneousPolynomial<K>, j: usize, coeffs: &[K::Elem]) -> HomogeneousPolynomial<K> {
    let field = g.field();
    let nvars = g.nvars();
    let images: Vec<HomogeneousPolynomial<K>> = (0..nvars)
        .map(|i| {
            if i != j {
                return HomogeneousPolynomial::monomial(field, nvars, Monomial::var(i), field.one());
            }
            let terms = (0..nvars)
                .filter(|&t| t != j)
                .zip(coeffs)
                .map(|(t, c)| (Monomial::var(t), c.clone()));
            HomogeneousPolynomial::from_terms(field, nvars, 1, terms).expect("linear terms")
        })
        .collect();
    let h = if coeffs.is_empty() {
        let terms = g.terms().filter(|(m, _)| m.exponent(j) == 0).map(|(m, c)| (*m, c.clone()));
        HomogeneousPolynomial::from_terms(field, nvars, g.degree(), terms).expect("one degree")
    } else {
        g.linear_substitution(&images)
    };
    let terms = h.terms().map(|(m, c)| {
        let e: Vec<u32> = (0..nvars).filter(|&i| i != j).map(|i| m.exponent(i)).collect();
        (Monomial::new(&e), c.clone())
    });
    HomogeneousPolynomial::from_terms(field, nvars - 1, g.degree(), terms).expect("one degree")
}

fn is_artinian<K: Field>(gens: &[HomogeneousPolynomial<K>], nvars: usize, degree: u32) -> bool {
    if gens.iter().any(|g| g.is_zero()) {
        return false;
    }
    HilbertEngine::new(gens[0].field(), nvars, gens).quotient_dim(degree) == 0
}

/// Seed of the random sections and generator changes; fixed so that the
/// certificate is reproducible.
const SECTION_SEED: u64 = 0x6b6f_737a_756c;

/// Searches, cheapest candidates first, for `n` generators of `J(f)`
/// that form a regular sequence.
pub fn certify_regular_sequence<K: Field>(ctx: &JacobianContext<K>) -> Option<(RegularSequenceCertificate, Vec<HomogeneousPolynomial<K>>)> {
    let n = ctx.n();
    let nvars = ctx.nvars();
    let field = ctx.field();
    let vanishing_degree = n as u32 * (ctx.d() - 2) + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(SECTION_SEED);
    let random = |rng: &mut ChaCha8Rng, len: usize| -> Vec<K::Elem> {
        (0..len).map(|_| field.from_i64(rng.gen_range(1..=1000))).collect()
    };
    let partials = ctx.partials();
    let subset = |excluded: usize| -> Vec<HomogeneousPolynomial<K>> {
        (0..nvars).filter(|&i| i != excluded).map(|i| partials[i].clone()).collect()
    };
    let mut candidates: Vec<(usize, bool, Vec<HomogeneousPolynomial<K>>)> =
        (0..nvars).map(|e| (e, false, subset(e))).collect();
    // an invertible change of generators: g_i = ∂_i f + c_i ∂_0 f for i ≥ 1
    let c = random(&mut rng, n);
    let mixed: Vec<HomogeneousPolynomial<K>> = (1..nvars)
        .map(|i| partials[i].add(&partials[0].scale(&c[i - 1])))
        .collect();
    candidates.push((0, true, mixed));
    for (excluded, mixed_generators, gens) in candidates {
        let mut sections: Vec<(usize, Vec<K::Elem>)> = (0..nvars).rev().map(|j| (j, Vec::new())).collect();
        sections.push((n, random(&mut rng, n)));
        for (j, coeffs) in sections {
            let restricted: Vec<_> = gens.iter().map(|g| restrict(g, j, &coeffs)).collect();
            if is_artinian(&restricted, n, vanishing_degree) {
                let cert = RegularSequenceCertificate {
                    excluded,
                    section_variable: j,
                    section_form: coeffs.iter().map(|x| field.format(x)).collect(),
                    mixed_generators,
                    vanishing_degree,
                };
                return Some((cert, gens));
            }
        }
    }
    None
}

/// `dim (g_1, …, g_m)_r` for a regular sequence of `m` forms of degree `e`
/// in `nvars` variables.
fn complete_intersection_ideal_dim(nvars: usize, e: u32, m: usize, r: u32) -> usize {
    let mut quotient: i128 = 0;
    for i in 0..=m {
        let shift = i as u32 * e;
        if shift > r {
            break;
        }
        let term = (binomial(m, i) * dim_graded_piece(nvars, r - shift)) as i128;
        quotient += if i % 2 == 0 { term } else { -term };
    }
    dim_graded_piece(nvars, r) - quotient as usize
}

/// Per-context Koszul data: the regular-sequence certificate is searched
/// for once.
pub struct KoszulContext<'a, K: Field> {
    ctx: &'a JacobianContext<K>,
    regular: OnceLock<Option<RegularSequenceCertificate>>,
    explicit_limit: usize,
}

impl<'a, K: Field> KoszulContext<'a, K> {
    pub fn new(ctx: &'a JacobianContext<K>) -> Self {
        let explicit_limit = if ctx.modular().is_some() {
            EXACT_EXPLICIT_TRIVIAL_LIMIT
        } else {
            EXPLICIT_TRIVIAL_LIMIT
        };
        KoszulContext {
            ctx,
            regular: OnceLock::new(),
            explicit_limit,
        }
    }

    /// Overrides [`EXPLICIT_TRIVIAL_LIMIT`].
    pub fn with_explicit_limit(mut self, limit: usize) -> Self {
        self.explicit_limit = limit;
        self
    }

    pub fn context(&self) -> &JacobianContext<K> {
        self.ctx
    }

    /// Over the rationals the search runs modulo a prime: an Artinian
    /// reduction forces an Artinian rational quotient.
    pub fn regular_sequence(&self) -> Option<&RegularSequenceCertificate> {
        self.regular
            .get_or_init(|| match self.ctx.modular() {
                Some(m) => certify_regular_sequence(m).map(|(c, _)| c),
                None => certify_regular_sequence(self.ctx).map(|(c, _)| c),
            })
            .as_ref()
    }

    fn generator_count(&self, r: u32) -> usize {
        let d = self.ctx.d();
        if r + 1 < d {
            return 0;
        }
        binomial(self.ctx.nvars(), 2) * dim_graded_piece(self.ctx.nvars(), r + 1 - d)
    }

    /// `dim` of [`trivial_syzygy_space`] and how it was obtained.
    pub fn trivial_dim(&self, r: u32) -> (usize, TrivialRoute) {
        if self.generator_count(r) <= self.explicit_limit || self.regular_sequence().is_none() {
            return (self.trivial_dim_explicit(r), TrivialRoute::Explicit);
        }
        (self.trivial_dim_regular(r), TrivialRoute::RegularSequence)
    }

    pub fn trivial_dim_explicit(&self, r: u32) -> usize {
        let rows = trivial_generators(self.ctx, r);
        sparse_rank(self.ctx.field(), self.ctx.nvars() * dim_graded_piece(self.ctx.nvars(), r), &rows)
    }

    /// `Σ_{j=1..n} dim (g_j, …, g_n)_r` for the certified regular sequence
    /// `g_1, …, g_n`. Panics without a certificate.
    pub fn trivial_dim_regular(&self, r: u32) -> usize {
        assert!(self.regular_sequence().is_some(), "no certified regular sequence");
        let (nvars, n, e) = (self.ctx.nvars(), self.ctx.n(), self.ctx.d() - 1);
        (1..=n).map(|m| complete_intersection_ideal_dim(nvars, e, m, r)).sum()
    }

    /// `dim H^n(K•(f))_m = dim Syz_{m-n} - dim Triv_{m-n}`, and 0 for `m < n`.
    pub fn hn_dim(&self, m: u32) -> usize {
        self.hn_dim_with_route(m).0
    }

    pub fn hn_dim_with_route(&self, m: u32) -> (usize, TrivialRoute) {
        let n = self.ctx.n() as u32;
        if m < n {
            return (0, TrivialRoute::Explicit);
        }
        let r = m - n;
        let (trivial, route) = self.trivial_dim(r);
        (syzygy_dim(self.ctx, r) - trivial, route)
    }

    /// `min { q : H^n(K•(f))_{q+n} ≠ 0 }` for `q ≤ q_max`.
    pub fn mdr(&self, q_max: u32) -> Result<Threshold> {
        let n = self.ctx.n() as u32;
        for q in 0..=q_max {
            if self.hn_dim(q + n) != 0 {
                return Ok(Threshold::Value(q));
            }
        }
        match self.ctx.tjurina_count() {
            Ok(0) => Ok(Threshold::Smooth),
            _ => Err(Error::ScanExhausted { bound: q_max as usize }),
        }
    }
}

/// `dim H^n(K•(f))_m`.
pub fn koszul_hn_dim<K: Field>(ctx: &JacobianContext<K>, m: u32) -> usize {
    KoszulContext::new(ctx).hn_dim(m)
}

/// Default `q_max = n·d`.
pub fn mdr<K: Field>(ctx: &JacobianContext<K>, q_max: Option<u32>) -> Result<Threshold> {
    let q_max = q_max.unwrap_or(ctx.n() as u32 * ctx.d());
    KoszulContext::new(ctx).mdr(q_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::poly::fermat;

    fn fp() -> PrimeField {
        PrimeField::new(1_000_003).unwrap()
    }

    #[test]
    fn fermat_quartic_surface() {
        let ctx = JacobianContext::new(fermat(&fp(), 3, 4)).unwrap();
        for r in 0..3 {
            assert_eq!(syzygy_space(&ctx, r).dim(), 0);
        }
        let triv = trivial_syzygy_space(&ctx, 3);
        assert_eq!(triv.dim(), 6);
        let syz = syzygy_space(&ctx, 3);
        assert!(syz.contains_subspace(&triv));
        for r in 0..=8 {
            assert_eq!(syzygy_space(&ctx, r), trivial_syzygy_space(&ctx, r), "r = {r}");
        }
        assert_eq!(mdr(&ctx, None).unwrap(), Threshold::Smooth);
        assert_eq!(koszul_hn_dim(&ctx, 2), 0);
    }

    #[test]
    fn syzygy_vectors_annihilate_partials() {
        let ctx = JacobianContext::new(fermat(&fp(), 2, 4)).unwrap();
        let syz = syzygy_space(&ctx, 4);
        assert!(syz.dim() > 0);
        for row in syz.rows() {
            assert!(SyzygyVector::from_sparse(&ctx, 4, row).is_syzygy_of(ctx.partials()));
        }
    }

    #[test]
    fn routes_agree_on_fermat() {
        let ctx = JacobianContext::new(fermat(&fp(), 3, 5)).unwrap();
        let k = KoszulContext::new(&ctx);
        let cert = k.regular_sequence().unwrap();
        assert_eq!(cert.vanishing_degree, 10);
        for r in 0..=14 {
            assert_eq!(k.trivial_dim_explicit(r), k.trivial_dim_regular(r), "r = {r}");
        }
    }

    #[test]
    fn restriction_to_coordinate_and_general_hyperplanes() {
        let k = fp();
        let g = crate::parse::parse_polynomial("x0^2 + x1*x2", 2, &k).unwrap();
        assert_eq!(restrict(&g, 2, &[]).to_string(), "x0^2");
        // x1 = 2*x0 + 3*x2 ... on x1: x0^2 + (2x0 + 3x2) x2
        let h = restrict(&g, 1, &[k.from_i64(2), k.from_i64(3)]);
        assert_eq!(h.to_string(), "x0^2 + 2*x0*x1 + 3*x1^2");
    }
}
