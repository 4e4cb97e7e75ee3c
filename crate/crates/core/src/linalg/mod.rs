//! Echelon bases, linear maps between graded pieces, and rank computations.

mod sparse;

pub use sparse::SparseRow;
pub(crate) use sparse::{sparse_rank, Accumulator, Echelon};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::field::Field;
use crate::monomial::{dim_graded_piece, DegreeBasis};
use crate::poly::HomogeneousPolynomial;

/// Matrices with fewer columns than this (and not too many rows) are
/// eliminated densely.
pub const DENSE_COLUMN_LIMIT: usize = 10_000;

/// Coordinates of a vector space: either a direct sum
/// `S_{k_1} ⊕ … ⊕ S_{k_r}` (blocks one after another, each in session
/// monomial order) or a plain `K^m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Layout {
    Graded { nvars: usize, blocks: Vec<u32> },
    Plain(usize),
}

impl Layout {
    pub fn degree(nvars: usize, k: u32) -> Self {
        Layout::Graded {
            nvars,
            blocks: vec![k],
        }
    }

    /// `copies` blocks of degree `k`, e.g. `(S_r)^{n+1}`.
    pub fn repeated(nvars: usize, k: u32, copies: usize) -> Self {
        Layout::Graded {
            nvars,
            blocks: vec![k; copies],
        }
    }

    pub fn plain(dim: usize) -> Self {
        Layout::Plain(dim)
    }

    pub fn blocks(&self) -> &[u32] {
        match self {
            Layout::Graded { blocks, .. } => blocks,
            Layout::Plain(_) => &[],
        }
    }

    pub fn block_dim(&self, b: usize) -> usize {
        match self {
            Layout::Graded { nvars, blocks } => dim_graded_piece(*nvars, blocks[b]),
            Layout::Plain(m) => {
                assert_eq!(b, 0);
                *m
            }
        }
    }

    /// First coordinate of block `b`.
    pub fn offset(&self, b: usize) -> usize {
        (0..b).map(|i| self.block_dim(i)).sum()
    }

    pub fn dim(&self) -> usize {
        match self {
            Layout::Graded { blocks, .. } => (0..blocks.len()).map(|b| self.block_dim(b)).sum(),
            Layout::Plain(m) => *m,
        }
    }

    /// The single degree of a one-block graded layout.
    pub fn single_degree(&self) -> Option<u32> {
        match self.blocks() {
            [k] => Some(*k),
            _ => None,
        }
    }
}

pub(crate) fn to_sparse<K: Field>(field: &K, v: &[K::Elem]) -> SparseRow<K::Elem> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !field.is_zero(x))
        .map(|(i, x)| (i as u32, x.clone()))
        .collect()
}

pub(crate) fn to_dense<K: Field>(field: &K, v: &[(u32, K::Elem)], len: usize) -> Vec<K::Elem> {
    let mut out = vec![field.zero(); len];
    for (c, x) in v {
        out[*c as usize] = x.clone();
    }
    out
}

/// A subspace in reduced row-echelon form: pivots strictly increase, each
/// pivot entry is 1 and is the only nonzero entry of its column.
#[derive(Clone, Debug)]
pub struct SubspaceBasis<K: Field> {
    field: K,
    layout: Layout,
    rows: Vec<SparseRow<K::Elem>>,
    pivots: Vec<usize>,
}

impl<K: Field> PartialEq for SubspaceBasis<K> {
    fn eq(&self, other: &Self) -> bool {
        self.layout == other.layout && self.rows == other.rows
    }
}

impl<K: Field> SubspaceBasis<K> {
    pub fn zero(field: &K, layout: Layout) -> Self {
        SubspaceBasis {
            field: field.clone(),
            layout,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: &K, layout: Layout) -> Self {
        let dim = layout.dim();
        SubspaceBasis {
            field: field.clone(),
            layout,
            rows: (0..dim).map(|i| vec![(i as u32, field.one())]).collect(),
            pivots: (0..dim).collect(),
        }
    }

    /// Echelon basis of the span of sparse vectors.
    pub fn span_sparse<I>(field: &K, layout: Layout, vectors: I) -> Self
    where
        I: IntoIterator<Item = SparseRow<K::Elem>>,
    {
        let mut ech = Echelon::new(field, layout.dim());
        for v in vectors {
            ech.insert(&v);
        }
        let (rows, pivots) = ech.into_rref();
        SubspaceBasis {
            field: field.clone(),
            layout,
            rows,
            pivots,
        }
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.layout.dim()
    }

    pub fn codim(&self) -> usize {
        self.ambient_dim() - self.dim()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[SparseRow<K::Elem>] {
        &self.rows
    }

    pub fn row_dense(&self, i: usize) -> Vec<K::Elem> {
        to_dense(&self.field, &self.rows[i], self.ambient_dim())
    }

    /// Columns that carry no pivot, increasing.
    pub fn non_pivots(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient_dim()];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient_dim()).filter(|&c| !is_pivot[c]).collect()
    }

    /// Subtracts the span from `v`, leaving zeros on every pivot column.
    pub fn reduce(&self, v: &mut [K::Elem]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if self.field.is_zero(&v[p]) {
                continue;
            }
            let c = v[p].clone();
            for (col, x) in row {
                self.field.sub_mul_assign(&mut v[*col as usize], &c, x);
            }
        }
    }

    pub fn contains(&self, v: &[K::Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|x| self.field.is_zero(x))
    }

    pub fn contains_sparse(&self, v: &[(u32, K::Elem)]) -> bool {
        self.contains(&to_dense(&self.field, v, self.ambient_dim()))
    }

    /// Coordinates of `v` modulo the span, over the non-pivot columns.
    pub fn quotient_coordinates(&self, v: &[K::Elem]) -> Vec<K::Elem> {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        self.non_pivots().into_iter().map(|c| w[c].clone()).collect()
    }

    pub fn contains_subspace(&self, other: &SubspaceBasis<K>) -> bool {
        (0..other.dim()).all(|i| self.contains_sparse(&other.rows[i]))
    }

    /// `span(self ∪ other)`.
    pub fn sum(&self, other: &SubspaceBasis<K>) -> SubspaceBasis<K> {
        assert_eq!(self.layout, other.layout);
        SubspaceBasis::span_sparse(
            &self.field,
            self.layout.clone(),
            self.rows.iter().chain(&other.rows).cloned(),
        )
    }
}

/// Echelon basis of the span of dense vectors in `layout`.
pub fn echelon_span<K: Field>(field: &K, layout: Layout, vectors: &[Vec<K::Elem>]) -> SubspaceBasis<K> {
    SubspaceBasis::span_sparse(field, layout, vectors.iter().map(|v| to_sparse(field, v)))
}

/// A linear map stored by the images of the source coordinate vectors.
#[derive(Clone, Debug)]
pub struct LinearMap<K: Field> {
    field: K,
    source: Layout,
    target: Layout,
    columns: Vec<SparseRow<K::Elem>>,
}

impl<K: Field> LinearMap<K> {
    pub fn from_columns(field: &K, source: Layout, target: Layout, columns: Vec<SparseRow<K::Elem>>) -> Self {
        assert_eq!(columns.len(), source.dim(), "one column per source coordinate");
        LinearMap {
            field: field.clone(),
            source,
            target,
            columns,
        }
    }

    pub fn source(&self) -> &Layout {
        &self.source
    }

    pub fn target(&self) -> &Layout {
        &self.target
    }

    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    pub fn nrows(&self) -> usize {
        self.target.dim()
    }

    pub fn column(&self, j: usize) -> &[(u32, K::Elem)] {
        &self.columns[j]
    }

    /// The matrix as dense rows (target coordinates by source coordinates).
    pub fn to_dense_rows(&self) -> Vec<Vec<K::Elem>> {
        let mut m = vec![vec![self.field.zero(); self.ncols()]; self.nrows()];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, x) in col {
                m[*i as usize][j] = x.clone();
            }
        }
        m
    }

    fn sparse_rows(&self) -> Vec<SparseRow<K::Elem>> {
        let mut rows = vec![Vec::new(); self.nrows()];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, x) in col {
                rows[*i as usize].push((j as u32, x.clone()));
            }
        }
        rows
    }

    pub fn apply(&self, v: &[K::Elem]) -> Vec<K::Elem> {
        let mut out = vec![self.field.zero(); self.nrows()];
        for (j, col) in self.columns.iter().enumerate() {
            if self.field.is_zero(&v[j]) {
                continue;
            }
            for (i, x) in col {
                let t = self.field.mul(x, &v[j]);
                out[*i as usize] = self.field.add(&out[*i as usize], &t);
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        let (r, c) = (self.nrows(), self.ncols());
        if r == 0 || c == 0 {
            return 0;
        }
        if c < DENSE_COLUMN_LIMIT && r < DENSE_COLUMN_LIMIT {
            self.field.dense_rank(self.to_dense_rows())
        } else {
            sparse_rank(&self.field, c, &self.sparse_rows())
        }
    }

    /// Image as an echelon basis of the target.
    pub fn image(&self) -> SubspaceBasis<K> {
        SubspaceBasis::span_sparse(&self.field, self.target.clone(), self.columns.iter().cloned())
    }

    pub fn kernel_basis(&self) -> SubspaceBasis<K> {
        let mut ech = Echelon::new(&self.field, self.ncols());
        for row in self.sparse_rows() {
            ech.insert(&row);
        }
        let (rows, pivots) = ech.into_rref();
        let mut is_pivot = vec![false; self.ncols()];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        // free column j gives e_j - sum_i R_i[j] e_{p_i}
        let mut vecs: Vec<SparseRow<K::Elem>> = (0..self.ncols())
            .map(|j| {
                if is_pivot[j] {
                    Vec::new()
                } else {
                    vec![(j as u32, self.field.one())]
                }
            })
            .collect();
        for (row, &p) in rows.iter().zip(&pivots) {
            for (j, x) in &row[1..] {
                vecs[*j as usize].push((p as u32, self.field.neg(x)));
            }
        }
        let kernel = vecs.into_iter().filter(|v| !v.is_empty()).map(|mut v| {
            v.sort_by_key(|(c, _)| *c);
            v
        });
        SubspaceBasis::span_sparse(&self.field, self.source.clone(), kernel)
    }
}

/// Matrix of `S_a -> S_{a + deg g}`, `v ↦ g·v`, in monomial coordinates.
pub fn multiplication_map<K: Field>(g: &HomogeneousPolynomial<K>, a: u32) -> LinearMap<K> {
    let nvars = g.nvars();
    let source = DegreeBasis::new(nvars, a);
    let target = DegreeBasis::new(nvars, a + g.degree());
    let columns = source
        .monomials()
        .iter()
        .map(|m| g.mul_monomial(m).to_sparse(&target))
        .collect();
    LinearMap::from_columns(
        g.field(),
        Layout::degree(nvars, a),
        Layout::degree(nvars, a + g.degree()),
        columns,
    )
}

/// Gaussian elimination rank of dense rows.
pub(crate) fn gauss_rank<K: Field>(field: &K, mut rows: Vec<Vec<K::Elem>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !field.is_zero(&rows[r][c])) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = field.inv(&rows[rank][c]);
        let pivot: Vec<K::Elem> = rows[rank].iter().map(|x| field.mul(x, &inv)).collect();
        for row in rows.iter_mut().skip(rank + 1) {
            if field.is_zero(&row[c]) {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row[c..].iter_mut().zip(&pivot[c..]) {
                field.sub_mul_assign(x, &f, y);
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Fraction-free (Bareiss) rank of an integer matrix.
pub fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let (top, rest) = m.split_at_mut(rank + 1);
        let pivot = &top[rank];
        for row in rest.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            for j in c + 1..ncols {
                let v = &pivot[c] * &row[j] - &lead * &pivot[j];
                row[j] = v / &prev;
            }
        }
        prev = pivot[c].clone();
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}
