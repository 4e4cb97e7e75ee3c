//! Sparse homogeneous polynomials over a [`Field`].

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::field::{Field, Rationals};
use crate::monomial::{check_vars, DegreeBasis, Monomial};

/// A homogeneous polynomial: every stored monomial has degree `degree` and
/// every stored coefficient is nonzero. The zero polynomial keeps its degree tag.
#[derive(Clone)]
pub struct HomogeneousPolynomial<K: Field> {
    field: K,
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Monomial, K::Elem>,
}

impl<K: Field> PartialEq for HomogeneousPolynomial<K> {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.degree == other.degree && self.terms == other.terms
    }
}

impl<K: Field> Eq for HomogeneousPolynomial<K> {}

impl<K: Field> HomogeneousPolynomial<K> {
    pub fn zero(field: &K, nvars: usize, degree: u32) -> Self {
        HomogeneousPolynomial {
            field: field.clone(),
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &K, nvars: usize, c: K::Elem) -> Self {
        Self::from_terms(field, nvars, 0, [(Monomial::ONE, c)]).expect("constant is homogeneous")
    }

    pub fn monomial(field: &K, nvars: usize, m: Monomial, c: K::Elem) -> Self {
        let d = m.degree();
        Self::from_terms(field, nvars, d, [(m, c)]).expect("single term is homogeneous")
    }

    /// Collects terms, merging repeated monomials and dropping zeros.
    pub fn from_terms(
        field: &K,
        nvars: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Monomial, K::Elem)>,
    ) -> Result<Self> {
        check_vars(nvars)?;
        let mut p = Self::zero(field, nvars, degree);
        for (m, c) in terms {
            if m.degree() != degree {
                return Err(Error::MixedDegree {
                    first: degree,
                    second: m.degree(),
                });
            }
            if let Some(i) = (nvars..crate::monomial::MAX_VARS).find(|&i| m.exponent(i) > 0) {
                return Err(Error::UnknownVariable {
                    index: i,
                    n: nvars - 1,
                });
            }
            p.add_term(m, &c);
        }
        Ok(p)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: &K::Elem) {
        debug_assert_eq!(m.degree(), self.degree);
        if self.field.is_zero(c) {
            return;
        }
        let field = &self.field;
        let remove = match self.terms.get_mut(&m) {
            Some(v) => {
                *v = field.add(v, c);
                field.is_zero(v)
            }
            None => {
                self.terms.insert(m, c.clone());
                false
            }
        };
        if remove {
            self.terms.remove(&m);
        }
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Ambient projective dimension `n` (there are `n+1` variables).
    pub fn ambient_dim(&self) -> usize {
        self.nvars - 1
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &K::Elem)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> K::Elem {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn leading_monomial(&self) -> Option<Monomial> {
        self.terms.keys().next_back().copied()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "adding polynomials of different degrees");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&self.field.neg(&self.field.one())))
    }

    pub fn scale(&self, c: &K::Elem) -> Self {
        let mut out = Self::zero(&self.field, self.nvars, self.degree);
        if self.field.is_zero(c) {
            return out;
        }
        for (m, v) in &self.terms {
            out.terms.insert(*m, self.field.mul(v, c));
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&self.field.neg(&self.field.one()))
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        HomogeneousPolynomial {
            field: self.field.clone(),
            nvars: self.nvars,
            degree: self.degree + m.degree(),
            terms: self.terms.iter().map(|(t, c)| (t.mul(m), c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.field, self.nvars, self.degree + other.degree);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), &self.field.mul(c1, c2));
            }
        }
        out
    }

    /// `∂/∂x_i`. Requires degree ≥ 1.
    pub fn partial(&self, i: usize) -> Self {
        assert!(self.degree >= 1, "partial derivative of a constant");
        let mut out = Self::zero(&self.field, self.nvars, self.degree - 1);
        for (m, c) in &self.terms {
            let e = m.exponent(i);
            if let Some(q) = m.div_var(i) {
                out.add_term(q, &self.field.mul(c, &self.field.from_i64(i64::from(e))));
            }
        }
        out
    }

    /// `(∂f/∂x_0, …, ∂f/∂x_n)`.
    pub fn partial_derivatives(&self) -> Vec<Self> {
        (0..self.nvars).map(|i| self.partial(i)).collect()
    }

    pub fn eval(&self, point: &[K::Elem]) -> K::Elem {
        assert_eq!(point.len(), self.nvars);
        let f = &self.field;
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, x) in point.iter().enumerate() {
                for _ in 0..m.exponent(i) {
                    t = f.mul(&t, x);
                }
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    /// Substitutes `x_i ↦ images[i]` where each image is linear.
    pub fn linear_substitution(&self, images: &[Self]) -> Self {
        assert_eq!(images.len(), self.nvars);
        assert!(images.iter().all(|g| g.degree == 1));
        let one = Self::constant(&self.field, self.nvars, self.field.one());
        let mut out = Self::zero(&self.field, self.nvars, self.degree);
        for (m, c) in &self.terms {
            let mut t = one.clone();
            for (i, img) in images.iter().enumerate() {
                for _ in 0..m.exponent(i) {
                    t = t.mul(img);
                }
            }
            out = out.add(&t.scale(c));
        }
        out
    }

    /// Coordinates over a degree basis as a sparse row sorted by column.
    pub fn to_sparse(&self, basis: &DegreeBasis) -> crate::linalg::SparseRow<K::Elem> {
        assert_eq!(basis.degree(), self.degree);
        let mut row: Vec<(u32, K::Elem)> = self
            .terms
            .iter()
            .map(|(m, c)| (basis.index_of(m).expect("monomial in basis") as u32, c.clone()))
            .collect();
        row.sort_unstable_by_key(|(c, _)| *c);
        row
    }

    /// Inverse of [`HomogeneousPolynomial::to_sparse`].
    pub fn from_sparse(field: &K, basis: &DegreeBasis, row: &[(u32, K::Elem)]) -> Self {
        let mut p = Self::zero(field, basis.nvars(), basis.degree());
        for (c, v) in row {
            p.add_term(basis.get(*c as usize), v);
        }
        p
    }

    /// Coordinates in the monomial basis of `S_degree`.
    pub fn to_vector(&self, basis: &DegreeBasis) -> Vec<K::Elem> {
        assert_eq!(basis.degree(), self.degree);
        let mut v = vec![self.field.zero(); basis.len()];
        for (m, c) in &self.terms {
            let i = basis.index_of(m).expect("monomial in basis");
            v[i] = c.clone();
        }
        v
    }

    pub fn from_vector(field: &K, basis: &DegreeBasis, v: &[K::Elem]) -> Self {
        assert_eq!(v.len(), basis.len());
        let mut p = Self::zero(field, basis.nvars(), basis.degree());
        for (i, c) in v.iter().enumerate() {
            if !field.is_zero(c) {
                p.terms.insert(basis.get(i), c.clone());
            }
        }
        p
    }

    /// Maps coefficients into another field.
    pub fn map_into<L: Field>(
        &self,
        target: &L,
        map: impl Fn(&K::Elem) -> Result<L::Elem>,
    ) -> Result<HomogeneousPolynomial<L>> {
        let mut out = HomogeneousPolynomial::zero(target, self.nvars, self.degree);
        for (m, c) in &self.terms {
            out.add_term(*m, &map(c)?);
        }
        Ok(out)
    }
}

impl HomogeneousPolynomial<Rationals> {
    /// Reduces a rational polynomial into `field`.
    pub fn reduce_into<L: Field>(&self, field: &L) -> Result<HomogeneousPolynomial<L>> {
        self.map_into(field, |q: &BigRational| field.from_rational(q))
    }
}

impl<K: Field> fmt::Display for HomogeneousPolynomial<K> {
    /// Terms in decreasing order, in the input grammar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let minus_one = self.field.neg(&self.field.one());
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let text = self.field.format(c);
            let (negative, magnitude) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            let sign = if negative { "-" } else { "+" };
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let is_unit = *c == self.field.one() || *c == minus_one;
            let mono = m.display(self.nvars);
            if m.degree() == 0 {
                write!(f, "{magnitude}")?;
            } else if is_unit && (magnitude == "1") {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{magnitude}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl<K: Field> fmt::Debug for HomogeneousPolynomial<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomogeneousPolynomial({self})")
    }
}

/// The Fermat polynomial `x0^d + … + xn^d`.
pub fn fermat<K: Field>(field: &K, n: usize, d: u32) -> HomogeneousPolynomial<K> {
    HomogeneousPolynomial::from_terms(
        field,
        n + 1,
        d,
        (0..=n).map(|i| (Monomial::var_pow(i, d), field.one())),
    )
    .expect("Fermat polynomial is homogeneous")
}
