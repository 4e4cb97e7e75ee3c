//! The multiplication map `φ: (S/J)_d → Hom((S/J)_{d-n-1}, (S/J)_{2d-n-1})`,
//! its injectivity, the joint kernel of multiplication by the variables,
//! effective deformations and the period differential.

use std::sync::Arc;

use rayon::prelude::*;

use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Layout, LinearMap, SparseRow, SubspaceBasis};
use crate::milnor::JacobianContext;
use crate::monomial::{DegreeBasis, Monomial};
use crate::poly::HomogeneousPolynomial;

const NONE: u32 = u32::MAX;

/// Standard monomials of `(S/J(f))_k` (the non-pivot columns of the echelon
/// basis of `J(f)_k`) and the reduction onto them.
#[derive(Debug)]
pub struct QuotientBasis<K: Field> {
    jacobian: Arc<SubspaceBasis<K>>,
    monomials: Arc<DegreeBasis>,
    standard: Vec<usize>,
    /// Column -> index among the standard monomials.
    position: Vec<u32>,
    /// Column -> echelon row with that pivot.
    pivot_row: Vec<u32>,
}

impl<K: Field> QuotientBasis<K> {
    pub fn new(jacobian: Arc<SubspaceBasis<K>>, monomials: Arc<DegreeBasis>) -> Self {
        assert_eq!(jacobian.ambient_dim(), monomials.len());
        let ncols = monomials.len();
        let mut pivot_row = vec![NONE; ncols];
        for (i, &p) in jacobian.pivots().iter().enumerate() {
            pivot_row[p] = i as u32;
        }
        let standard = jacobian.non_pivots();
        let mut position = vec![NONE; ncols];
        for (i, &c) in standard.iter().enumerate() {
            position[c] = i as u32;
        }
        QuotientBasis {
            jacobian,
            monomials,
            standard,
            position,
            pivot_row,
        }
    }

    pub fn degree(&self) -> u32 {
        self.monomials.degree()
    }

    pub fn len(&self) -> usize {
        self.standard.len()
    }

    pub fn is_empty(&self) -> bool {
        self.standard.is_empty()
    }

    pub fn jacobian(&self) -> &SubspaceBasis<K> {
        &self.jacobian
    }

    pub fn standard_monomials(&self) -> Vec<Monomial> {
        self.standard.iter().map(|&c| self.monomials.get(c)).collect()
    }

    fn field(&self) -> &K {
        self.jacobian.field()
    }

    fn add_column(&self, acc: &mut [K::Elem], c: usize, coeff: &K::Elem) {
        let field = self.field();
        let pos = self.position[c];
        if pos != NONE {
            acc[pos as usize] = field.add(&acc[pos as usize], coeff);
            return;
        }
        // x^c ≡ -(non-pivot part of its echelon row)
        let row = &self.jacobian.rows()[self.pivot_row[c] as usize];
        for (col, v) in &row[1..] {
            let pos = self.position[*col as usize] as usize;
            field.sub_mul_assign(&mut acc[pos], coeff, v);
        }
    }

    fn collect(&self, acc: Vec<K::Elem>) -> SparseRow<K::Elem> {
        let field = self.field();
        acc.into_iter()
            .enumerate()
            .filter(|(_, v)| !field.is_zero(v))
            .map(|(i, v)| (i as u32, v))
            .collect()
    }

    /// Coordinates over the standard monomials of a sparse vector of `S_k`.
    pub fn reduce_sparse(&self, v: &[(u32, K::Elem)]) -> SparseRow<K::Elem> {
        let mut acc = vec![self.field().zero(); self.len()];
        for (c, x) in v {
            self.add_column(&mut acc, *c as usize, x);
        }
        self.collect(acc)
    }

    /// Coordinates over the standard monomials of a dense vector of `S_k`.
    pub fn reduce(&self, v: &[K::Elem]) -> Vec<K::Elem> {
        let field = self.field();
        let mut acc = vec![field.zero(); self.len()];
        for (c, x) in v.iter().enumerate() {
            if !field.is_zero(x) {
                self.add_column(&mut acc, c, x);
            }
        }
        acc
    }

    pub fn reduce_monomial(&self, m: &Monomial) -> SparseRow<K::Elem> {
        let c = self.monomials.index_of(m).expect("monomial of the basis degree");
        let mut acc = vec![self.field().zero(); self.len()];
        self.add_column(&mut acc, c, &self.field().one());
        self.collect(acc)
    }

    pub fn reduce_poly(&self, p: &HomogeneousPolynomial<K>) -> SparseRow<K::Elem> {
        self.reduce_sparse(&p.to_sparse(&self.monomials))
    }

    /// The representative `Σ c_i m_i` over the standard monomials.
    pub fn lift(&self, coords: &[K::Elem]) -> HomogeneousPolynomial<K> {
        let terms = self
            .standard
            .iter()
            .zip(coords)
            .map(|(&c, v)| (self.monomials.get(c), v.clone()));
        HomogeneousPolynomial::from_terms(self.field(), self.monomials.nvars(), self.degree(), terms)
            .expect("standard monomials share one degree")
    }
}

/// The matrix of `φ` in the quotient bases. The column of `[P]` stacks, for
/// each standard monomial `Q` of degree `d-n-1`, the reduction of `P·Q`.
#[derive(Debug)]
pub struct PhiMatrix<K: Field> {
    pub source_dim: usize,
    pub hom_source_dim: usize,
    pub hom_target_dim: usize,
    pub map: LinearMap<K>,
    pub rank: usize,
}

impl<K: Field> PhiMatrix<K> {
    pub fn target_dim(&self) -> usize {
        self.hom_source_dim * self.hom_target_dim
    }
}

fn check_degree<K: Field>(ctx: &JacobianContext<K>) -> Result<()> {
    let (n, d) = (ctx.n(), ctx.d());
    if (d as usize) < n + 1 {
        return Err(Error::DegreeTooSmall {
            message: format!("need d >= n+1, got n = {n}, d = {d}"),
        });
    }
    Ok(())
}

/// Columns `h ↦ (h_1 ↦ sign · [h·h_1])` for `h` in `sources` and `h_1`
/// over the standard monomials of degree `d-n-1`.
fn pairing_columns<K: Field>(
    ctx: &JacobianContext<K>,
    sources: &[HomogeneousPolynomial<K>],
    negate: bool,
) -> (usize, usize, Vec<SparseRow<K::Elem>>) {
    let (n, d) = (ctx.n() as u32, ctx.d());
    let low = ctx.quotient_basis(d - n - 1);
    let high = ctx.quotient_basis(2 * d - n - 1);
    let low_monomials = low.standard_monomials();
    let width = high.len();
    let field = ctx.field();
    let columns = sources
        .par_iter()
        .map(|h| {
            let mut col = Vec::new();
            for (i, q) in low_monomials.iter().enumerate() {
                let offset = (i * width) as u32;
                for (c, v) in high.reduce_poly(&h.mul_monomial(q)) {
                    col.push((offset + c, if negate { field.neg(&v) } else { v }));
                }
            }
            col
        })
        .collect();
    (low.len(), width, columns)
}

pub fn phi_matrix<K: Field>(ctx: &JacobianContext<K>) -> Result<PhiMatrix<K>> {
    check_degree(ctx)?;
    let d = ctx.d();
    let source = ctx.quotient_basis(d);
    let field = ctx.field();
    let sources: Vec<_> = source
        .standard_monomials()
        .into_iter()
        .map(|m| HomogeneousPolynomial::monomial(field, ctx.nvars(), m, field.one()))
        .collect();
    let (hom_source_dim, hom_target_dim, columns) = pairing_columns(ctx, &sources, false);
    let map = LinearMap::from_columns(
        field,
        Layout::plain(source.len()),
        Layout::plain(hom_source_dim * hom_target_dim),
        columns,
    );
    let rank = map.rank();
    Ok(PhiMatrix {
        source_dim: source.len(),
        hom_source_dim,
        hom_target_dim,
        map,
        rank,
    })
}

fn base_certificate<K: Field>(claim: &str, ctx: &JacobianContext<K>) -> Certificate {
    Certificate::new(claim, ctx.field().descriptor())
        .parameter("n", ctx.n() as i64)
        .parameter("d", i64::from(ctx.d()))
}

/// Passes iff `rank φ = dim (S/J(f))_d`.
pub fn phi_injective<K: Field>(ctx: &JacobianContext<K>) -> Result<Certificate> {
    let phi = phi_matrix(ctx)?;
    Ok(base_certificate("phi_injective", ctx)
        .quantity("rank", phi.rank)
        .quantity("source_dim", phi.source_dim)
        .quantity("target_dim", phi.target_dim())
        .passed(phi.rank == phi.source_dim))
}

/// `{ [G] ∈ (S/J)_t : [x_j·G] = 0 for all j }` in coordinates over the
/// standard monomials of degree `t`.
pub fn variable_multiplication_kernel<K: Field>(ctx: &JacobianContext<K>, t: u32) -> SubspaceBasis<K> {
    let source = ctx.quotient_basis(t);
    let target = ctx.quotient_basis(t + 1);
    let width = target.len();
    let nvars = ctx.nvars();
    let columns: Vec<SparseRow<K::Elem>> = source
        .standard_monomials()
        .iter()
        .map(|m| {
            let mut col = Vec::new();
            for j in 0..nvars {
                let offset = (j * width) as u32;
                let nf = target.reduce_monomial(&m.mul(&Monomial::var(j)));
                col.extend(nf.into_iter().map(|(c, v)| (offset + c, v)));
            }
            col
        })
        .collect();
    LinearMap::from_columns(
        ctx.field(),
        Layout::plain(source.len()),
        Layout::plain(width * nvars),
        columns,
    )
    .kernel_basis()
}

/// A tangent space `V ⊆ S_d` of a deformation of `f`.
#[derive(Clone, Debug)]
pub struct DeformationSubspace<K: Field> {
    degree: u32,
    basis: Vec<HomogeneousPolynomial<K>>,
}

impl<K: Field> DeformationSubspace<K> {
    /// Fails unless the polynomials have degree `degree` and are independent.
    pub fn new(degree: u32, basis: Vec<HomogeneousPolynomial<K>>) -> Result<Self> {
        if let Some(p) = basis.iter().find(|p| p.degree() != degree) {
            return Err(Error::Invalid(format!(
                "deformation direction of degree {} in a degree-{degree} subspace",
                p.degree()
            )));
        }
        if let Some(first) = basis.first() {
            let monomials = DegreeBasis::new(first.nvars(), degree);
            let span = SubspaceBasis::span_sparse(
                first.field(),
                Layout::degree(first.nvars(), degree),
                basis.iter().map(|p| p.to_sparse(&monomials)),
            );
            if span.dim() != basis.len() {
                return Err(Error::Invalid("deformation directions are linearly dependent".into()));
            }
        }
        Ok(DeformationSubspace { degree, basis })
    }

    /// The span of the standard monomials of `(S/J(f))_d`.
    pub fn standard_complement(ctx: &JacobianContext<K>) -> Self {
        let field = ctx.field();
        let basis = ctx
            .quotient_basis(ctx.d())
            .standard_monomials()
            .into_iter()
            .map(|m| HomogeneousPolynomial::monomial(field, ctx.nvars(), m, field.one()))
            .collect();
        DeformationSubspace {
            degree: ctx.d(),
            basis,
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn basis(&self) -> &[HomogeneousPolynomial<K>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// `dim (V ∩ J(f)_d)`.
fn overlap_with_jacobian<K: Field>(ctx: &JacobianContext<K>, v: &DeformationSubspace<K>) -> (usize, usize) {
    let q = ctx.quotient_basis(ctx.d());
    let rank = SubspaceBasis::span_sparse(
        ctx.field(),
        Layout::plain(q.len()),
        v.basis().iter().map(|p| q.reduce_poly(p)),
    )
    .dim();
    (v.dim() - rank, rank)
}

/// Passes iff `V ∩ J(f)_d = {0}`, i.e. `dim (V + J(f)_d) = dim V + dim J(f)_d`.
pub fn effective_deformation_check<K: Field>(
    ctx: &JacobianContext<K>,
    v: &DeformationSubspace<K>,
) -> Result<Certificate> {
    if v.degree() != ctx.d() {
        return Err(Error::Invalid(format!(
            "deformation directions must have degree {}, got {}",
            ctx.d(),
            v.degree()
        )));
    }
    let (overlap, _) = overlap_with_jacobian(ctx, v);
    let jacobian = ctx.jacobian_basis(ctx.d()).dim();
    let span = jacobian + v.dim() - overlap;
    Ok(base_certificate("effective_deformation", ctx)
        .quantity("dim_v", v.dim())
        .quantity("dim_jacobian", jacobian)
        .quantity("dim_sum", span)
        .passed(overlap == 0))
}

/// The differential of the period map on `V`:
/// `h ↦ (h_1 ↦ [-h·h_1] ∈ (S/J)_{2d-n-1})` for `h_1` over the standard
/// monomials of degree `d-n-1`. Passes iff its rank is `dim V`.
pub fn period_differential<K: Field>(
    ctx: &JacobianContext<K>,
    v: &DeformationSubspace<K>,
) -> Result<(LinearMap<K>, Certificate)> {
    let n = ctx.n();
    if n < 3 || n == 4 {
        return Err(Error::UnsupportedDimension {
            n,
            reason: "the period differential is certified only for odd n >= 3 and even n >= 6".into(),
        });
    }
    check_degree(ctx)?;
    if v.degree() != ctx.d() {
        return Err(Error::Invalid(format!(
            "deformation directions must have degree {}, got {}",
            ctx.d(),
            v.degree()
        )));
    }
    let (overlap, _) = overlap_with_jacobian(ctx, v);
    if overlap != 0 {
        return Err(Error::NotEffective { overlap });
    }
    let (hom_source, hom_target, columns) = pairing_columns(ctx, v.basis(), true);
    let map = LinearMap::from_columns(
        ctx.field(),
        Layout::plain(v.dim()),
        Layout::plain(hom_source * hom_target),
        columns,
    );
    let rank = map.rank();
    let cert = base_certificate("period_differential_injective", ctx)
        .quantity("rank", rank)
        .quantity("dim_v", v.dim())
        .quantity("target_dim", hom_source * hom_target)
        .passed(rank == v.dim());
    Ok((map, cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::parse::parse_polynomial;
    use crate::poly::fermat;

    fn fp() -> PrimeField {
        PrimeField::new(1_000_003).unwrap()
    }

    #[test]
    fn quotient_basis_of_fermat() {
        let ctx = JacobianContext::new(fermat(&fp(), 3, 4)).unwrap();
        let q0 = ctx.quotient_basis(0);
        assert_eq!(q0.standard_monomials(), vec![Monomial::new(&[0, 0, 0, 0])]);
        let q3 = ctx.quotient_basis(3);
        assert_eq!(q3.len(), 16);
        assert!(!q3.standard_monomials().iter().any(|m| (0..4).any(|i| m.exponent(i) == 3)));
        let q5 = ctx.quotient_basis(5);
        let g = ctx.partials()[0].mul_monomial(&Monomial::new(&[0, 1, 1, 0]));
        assert!(q5.reduce_poly(&g).is_empty());
    }

    #[test]
    fn phi_for_smooth_quintic_surface_is_injective() {
        let ctx = JacobianContext::new(fermat(&fp(), 3, 5)).unwrap();
        let phi = phi_matrix(&ctx).unwrap();
        assert_eq!(phi.rank, ctx.milnor_dim(5));
        assert!(phi_injective(&ctx).unwrap().passed);
    }

    #[test]
    fn phi_needs_large_degree() {
        let ctx = JacobianContext::new(fermat(&fp(), 3, 3)).unwrap();
        assert!(matches!(phi_matrix(&ctx), Err(Error::DegreeTooSmall { .. })));
    }

    #[test]
    fn socle_is_killed_by_every_variable() {
        let ctx = JacobianContext::new(fermat(&fp(), 3, 4)).unwrap();
        assert_eq!(variable_multiplication_kernel(&ctx, 8).dim(), 1);
        assert_eq!(variable_multiplication_kernel(&ctx, 9).dim(), 0);
        assert_eq!(variable_multiplication_kernel(&ctx, 4).dim(), 0);
    }

    #[test]
    fn effective_and_ineffective_deformations() {
        let k = fp();
        let ctx = JacobianContext::new(fermat(&k, 3, 4)).unwrap();
        let full = DeformationSubspace::standard_complement(&ctx);
        assert!(effective_deformation_check(&ctx, &full).unwrap().passed);
        let empty = DeformationSubspace::new(4, vec![]).unwrap();
        assert!(effective_deformation_check(&ctx, &empty).unwrap().passed);
        let bad = ctx.partials()[0].mul_monomial(&Monomial::var(0));
        let v = DeformationSubspace::new(4, vec![bad]).unwrap();
        assert!(!effective_deformation_check(&ctx, &v).unwrap().passed);
        assert!(matches!(period_differential(&ctx, &v), Err(Error::NotEffective { overlap: 1 })));
    }

    #[test]
    fn period_differential_is_minus_phi() {
        let ctx = JacobianContext::new(fermat(&fp(), 3, 4)).unwrap();
        let v = DeformationSubspace::standard_complement(&ctx);
        let (map, cert) = period_differential(&ctx, &v).unwrap();
        assert!(cert.passed);
        let phi = phi_matrix(&ctx).unwrap();
        let k = ctx.field();
        let negated: Vec<Vec<u64>> = phi
            .map
            .to_dense_rows()
            .into_iter()
            .map(|r| r.iter().map(|x| k.neg(x)).collect())
            .collect();
        assert_eq!(map.to_dense_rows(), negated);
    }

    #[test]
    fn period_differential_rejects_n4() {
        let f = parse_polynomial("x0^5+x1^5+x2^5+x3^5+x4^5", 4, &fp()).unwrap();
        let ctx = JacobianContext::new(f).unwrap();
        let v = DeformationSubspace::new(5, vec![]).unwrap();
        assert!(matches!(
            period_differential(&ctx, &v),
            Err(Error::UnsupportedDimension { n: 4, .. })
        ));
    }
}
