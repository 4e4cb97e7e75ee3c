//! Graded pieces of the Jacobian ideal `J(f)` and of the Milnor algebra
//! `S/J(f)`: dimensions, the smooth reference Hilbert function, the
//! coincidence threshold, the stable Tjurina count and the degreewise
//! saturation.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, PrimeField, DEFAULT_PRIMES};
use crate::groebner::HilbertEngine;
use crate::linalg::{Layout, LinearMap, SparseRow, SubspaceBasis};
use crate::monomial::{dim_graded_piece, DegreeBasis};
use crate::poly::HomogeneousPolynomial;
use crate::hodge::ideal_of_points_dim;
use crate::nodal::{is_singular_at, ProjectivePoint};
use crate::torelli::QuotientBasis;

/// Coefficients of `((1 - t^{d-1}) / (1 - t))^{n+1} = (1 + t + … + t^{d-2})^{n+1}`.
pub fn smooth_reference_series(n: usize, d: u32) -> Vec<u128> {
    assert!(d >= 2, "smooth reference needs d >= 2");
    let factor = vec![1u128; (d - 1) as usize];
    let mut series = vec![1u128];
    for _ in 0..=n {
        let mut next = vec![0u128; series.len() + factor.len() - 1];
        for (i, a) in series.iter().enumerate() {
            for (j, b) in factor.iter().enumerate() {
                next[i + j] += a * b;
            }
        }
        series = next;
    }
    series
}

/// `dim (S/J(f_s))_k` for a smooth `f_s` of degree `d` in `n+1` variables.
pub fn smooth_reference_dim(n: usize, d: u32, k: u32) -> usize {
    smooth_reference_series(n, d)
        .get(k as usize)
        .map_or(0, |&c| usize::try_from(c).expect("dimension fits in usize"))
}

/// `(n+1)(d-2)`: top degree of the smooth Milnor algebra.
pub fn socle_degree(n: usize, d: u32) -> u32 {
    (n as u32 + 1) * (d - 2)
}

/// Value of an invariant that is unbounded for smooth hypersurfaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Threshold {
    Value(u32),
    Smooth,
}

impl Threshold {
    pub fn value(self) -> Option<u32> {
        match self {
            Threshold::Value(v) => Some(v),
            Threshold::Smooth => None,
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Value(v) => write!(f, "{v}"),
            Threshold::Smooth => f.write_str("smooth"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertProfile {
    /// `(k, dim (S/J(f))_k)` for `k = 0..=k_max`.
    pub entries: Vec<(u32, usize)>,
    pub stabilized_value: Option<usize>,
}

/// A hypersurface `f` together with memoized graded pieces of `J(f)`.
///
/// Dimensions of `(S/J(f))_k` come from a truncated Gröbner basis that is
/// extended on demand; explicit echelon bases of `J(f)_k` are built only
/// for the degrees that need coordinates.
///
/// Over the rationals a dimension is first bracketed: reduction modulo a
/// prime can only lower ranks, so `dim (S/J)_k` over `F_p` is an upper
/// bound, while a regular sequence of `n` elements of `J(f)` (certified
/// modulo `p`, which implies it over `Q`) gives the smooth reference as a
/// lower bound, and singular points `P` of `f` give `dim (S/I(P))_k` as
/// another. The rational Gröbner basis is computed only when the bounds
/// differ.
pub struct JacobianContext<K: Field> {
    f: HomogeneousPolynomial<K>,
    partials: Vec<HomogeneousPolynomial<K>>,
    engine: Mutex<HilbertEngine<K>>,
    modular: Option<Box<JacobianContext<PrimeField>>>,
    regular_in_j: OnceLock<bool>,
    singular_points: RwLock<Vec<Vec<BigRational>>>,
    degree_bases: RwLock<HashMap<u32, Arc<DegreeBasis>>>,
    jacobian: RwLock<HashMap<u32, Arc<SubspaceBasis<K>>>>,
    quotients: RwLock<HashMap<u32, Arc<QuotientBasis<K>>>>,
}

impl<K: Field> fmt::Debug for JacobianContext<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("JacobianContext").field("f", &self.f).finish_non_exhaustive()
    }
}

fn cached<T, F>(cache: &RwLock<HashMap<u32, Arc<T>>>, k: u32, build: F) -> Arc<T>
where
    F: FnOnce() -> T,
{
    if let Some(v) = cache.read().expect("cache lock").get(&k) {
        return v.clone();
    }
    let v = Arc::new(build());
    cache.write().expect("cache lock").entry(k).or_insert(v).clone()
}

impl<K: Field> JacobianContext<K> {
    pub fn new(f: HomogeneousPolynomial<K>) -> Result<Self> {
        if f.degree() < 2 {
            return Err(Error::DegreeTooSmall {
                message: format!("need d >= 2, got d = {}", f.degree()),
            });
        }
        if f.nvars() < 2 {
            return Err(Error::Invalid("need at least two variables (n >= 1)".into()));
        }
        let partials = f.partial_derivatives();
        let engine = HilbertEngine::new(f.field(), f.nvars(), &partials);
        let modular = Self::reduction_mod_p(&f).map(Box::new);
        Ok(JacobianContext {
            f,
            partials,
            engine: Mutex::new(engine),
            modular,
            regular_in_j: OnceLock::new(),
            singular_points: RwLock::new(Vec::new()),
            degree_bases: RwLock::new(HashMap::new()),
            jacobian: RwLock::new(HashMap::new()),
            quotients: RwLock::new(HashMap::new()),
        })
    }

    /// `f` modulo the first default prime not dividing a denominator, for
    /// rational `f`.
    fn reduction_mod_p(f: &HomogeneousPolynomial<K>) -> Option<JacobianContext<PrimeField>> {
        let field = f.field();
        f.terms().next().and_then(|(_, c)| field.to_rational(c))?;
        DEFAULT_PRIMES.iter().find_map(|&p| {
            let fp = PrimeField::new(p).ok()?;
            let g = f
                .map_into(&fp, |c| {
                    let q = field.to_rational(c).expect("rational coefficients");
                    fp.from_rational(&q)
                })
                .ok()?;
            (g.degree() == f.degree() && !g.is_zero()).then(|| JacobianContext::new(g).ok())?
        })
    }

    /// The reduction used for upper bounds, over the rationals.
    pub(crate) fn modular(&self) -> Option<&JacobianContext<PrimeField>> {
        self.modular.as_deref()
    }

    /// Records the points at which every partial vanishes; they sharpen the
    /// lower bounds used over the rationals. Other points are ignored.
    pub fn register_singular_points(&self, points: &[ProjectivePoint]) {
        if self.modular.is_none() {
            return;
        }
        let mut known = self.singular_points.write().expect("points lock");
        for p in points {
            if matches!(is_singular_at(&self.f, p), Ok(true)) && !known.iter().any(|q| q == p.coordinates()) {
                known.push(p.coordinates().to_vec());
            }
        }
    }

    pub fn f(&self) -> &HomogeneousPolynomial<K> {
        &self.f
    }

    pub fn field(&self) -> &K {
        self.f.field()
    }

    /// The ambient dimension `n` of `P^n`.
    pub fn n(&self) -> usize {
        self.f.ambient_dim()
    }

    pub fn nvars(&self) -> usize {
        self.f.nvars()
    }

    pub fn d(&self) -> u32 {
        self.f.degree()
    }

    pub fn partials(&self) -> &[HomogeneousPolynomial<K>] {
        &self.partials
    }

    /// `(n+1)(d-2)`.
    pub fn socle_degree(&self) -> u32 {
        socle_degree(self.n(), self.d())
    }

    pub fn degree_basis(&self, k: u32) -> Arc<DegreeBasis> {
        cached(&self.degree_bases, k, || DegreeBasis::new(self.nvars(), k))
    }

    /// Spanning vectors `x^a · ∂f/∂x_j` of `J(f)_k`.
    pub fn jacobian_generators(&self, k: u32) -> Vec<SparseRow<K::Elem>> {
        let d = self.d();
        if k + 1 < d {
            return Vec::new();
        }
        let target = self.degree_basis(k);
        let multipliers = self.degree_basis(k + 1 - d);
        let mut rows = Vec::with_capacity(multipliers.len() * self.partials.len());
        for a in multipliers.monomials() {
            for p in self.partials.iter().filter(|p| !p.is_zero()) {
                rows.push(p.mul_monomial(a).to_sparse(&target));
            }
        }
        rows
    }

    /// Reduced echelon basis of `J(f)_k` over the monomials of degree `k`.
    pub fn jacobian_basis(&self, k: u32) -> Arc<SubspaceBasis<K>> {
        cached(&self.jacobian, k, || {
            SubspaceBasis::span_sparse(self.field(), Layout::degree(self.nvars(), k), self.jacobian_generators(k))
        })
    }

    pub fn quotient_basis(&self, k: u32) -> Arc<QuotientBasis<K>> {
        cached(&self.quotients, k, || {
            QuotientBasis::new(self.jacobian_basis(k), self.degree_basis(k))
        })
    }

    /// `dim (S/J(f))_k`.
    pub fn milnor_dim(&self, k: u32) -> usize {
        if let Some(m) = &self.modular {
            let upper = m.milnor_dim(k);
            if upper == self.milnor_lower_bound(m, k) {
                return upper;
            }
        }
        self.engine.lock().expect("engine lock").quotient_dim(k)
    }

    fn milnor_lower_bound(&self, m: &JacobianContext<PrimeField>, k: u32) -> usize {
        let regular = *self
            .regular_in_j
            .get_or_init(|| crate::koszul::certify_regular_sequence(m).is_some());
        let mut lower = if regular { self.smooth_reference_dim(k) } else { 0 };
        let points = self.singular_points.read().expect("points lock");
        if !points.is_empty() {
            let vanishing = ideal_of_points_dim(&crate::field::Rationals, &points, self.n(), k).unwrap_or(0);
            lower = lower.max(dim_graded_piece(self.nvars(), k) - vanishing);
        }
        lower
    }

    /// `dim (S/J(f))_k` from the explicit echelon basis of `J(f)_k`.
    pub fn milnor_dim_explicit(&self, k: u32) -> usize {
        self.jacobian_basis(k).codim()
    }

    /// `dim J(f)_k`.
    pub fn jacobian_dim(&self, k: u32) -> usize {
        dim_graded_piece(self.nvars(), k) - self.milnor_dim(k)
    }

    pub fn smooth_reference_dim(&self, k: u32) -> usize {
        smooth_reference_dim(self.n(), self.d(), k)
    }

    pub fn hilbert_profile(&self, k_max: u32) -> HilbertProfile {
        let entries: Vec<(u32, usize)> = (0..=k_max).map(|k| (k, self.milnor_dim(k))).collect();
        let stabilized_value = match entries.as_slice() {
            [.., (k, a), (_, b), (_, c)] if *k >= self.socle_degree() && a == b && b == c => Some(*a),
            _ => None,
        };
        HilbertProfile {
            entries,
            stabilized_value,
        }
    }

    /// `ct(X_f)`: the largest `q` with `dim (S/J(f))_k` equal to the smooth
    /// reference for every `k ≤ q`.
    ///
    /// Agreement through degree `(n+1)(d-2)+1` means `(S/J(f))` vanishes
    /// there, so the partials have no common zero and agreement persists.
    pub fn coincidence_threshold(&self) -> Threshold {
        for k in 0..=self.socle_degree() + 1 {
            if self.milnor_dim(k) != self.smooth_reference_dim(k) {
                return Threshold::Value(k - 1);
            }
        }
        Threshold::Smooth
    }

    /// Stable value of `dim (S/J(f))_k`: the first value repeated at three
    /// consecutive degrees `k ≥ (n+1)(d-2)`.
    pub fn tjurina_count(&self) -> Result<usize> {
        let start = self.socle_degree();
        let bound = start + 3 * self.d();
        let mut window = [self.milnor_dim(start), self.milnor_dim(start + 1), 0];
        for k in start + 2..=bound {
            window[2] = self.milnor_dim(k);
            if window[0] == window[1] && window[1] == window[2] {
                return Ok(window[0]);
            }
            window = [window[1], window[2], 0];
        }
        Err(Error::NoStabilization {
            what: "dim (S/J(f))_k".into(),
            bound: bound as usize,
        })
    }

    /// `W_m = { G ∈ S_k : G·S_m ⊆ J(f)_{k+m} }`.
    pub fn colon_piece(&self, k: u32, m: u32) -> SubspaceBasis<K> {
        if m == 0 {
            return (*self.jacobian_basis(k)).clone();
        }
        let quotient = self.quotient_basis(k + m);
        let source = self.degree_basis(k);
        let multipliers = self.degree_basis(m);
        let width = quotient.len();
        let columns: Vec<SparseRow<K::Elem>> = source
            .monomials()
            .iter()
            .map(|e| {
                let mut col = Vec::new();
                for (i, u) in multipliers.monomials().iter().enumerate() {
                    let offset = (i * width) as u32;
                    let nf = quotient.reduce_monomial(&e.mul(u));
                    col.extend(nf.into_iter().map(|(c, v)| (offset + c, v)));
                }
                col
            })
            .collect();
        LinearMap::from_columns(
            self.field(),
            Layout::degree(self.nvars(), k),
            Layout::plain(width * multipliers.len()),
            columns,
        )
        .kernel_basis()
    }

    /// `I(f)_k`, the degree-`k` piece of the saturation of `J(f)`.
    ///
    /// The chain `W_m` can stall before `J(f)` agrees with its saturation
    /// (for smooth `f` it is zero until `k+m` passes the socle degree), so
    /// it is started at `m` with `k+m = (n+1)(d-2)+1` and run until two
    /// consecutive terms agree.
    pub fn saturation_graded(&self, k: u32) -> Result<SubspaceBasis<K>> {
        let bound = self.socle_degree();
        let start = (bound + 1).saturating_sub(k).max(1);
        let mut prev = self.colon_piece(k, start);
        for m in start + 1..=start + bound.max(1) {
            let next = self.colon_piece(k, m);
            if next == prev {
                return Ok(next);
            }
            prev = next;
        }
        Err(Error::NoStabilization {
            what: format!("saturation chain in degree {k}"),
            bound: (start + bound) as usize,
        })
    }
}
