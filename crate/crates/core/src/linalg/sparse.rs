//! Sparse row reduction shared by the echelon builder and the Gröbner engine.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::field::Field;

/// A sparse row: `(column, value)` pairs sorted by column, no zero values.
pub type SparseRow<E> = Vec<(u32, E)>;

const NO_PIVOT: u32 = u32::MAX;

/// Below this many columns rows are reduced by scanning a dense scratch
/// vector; above it a heap of touched columns drives the scan instead.
const SCAN_LIMIT: usize = 16_384;

/// Dense scratch vector for reducing one row at a time.
pub(crate) struct Accumulator<K: Field> {
    values: Vec<K::Lazy>,
    touched: Vec<bool>,
    heap: BinaryHeap<Reverse<u32>>,
    scan: bool,
    next: usize,
    end: usize,
}

impl<K: Field> Accumulator<K> {
    pub(crate) fn new(field: &K, ncols: usize) -> Self {
        Accumulator {
            values: vec![field.lazy_zero(); ncols],
            touched: vec![false; ncols],
            heap: BinaryHeap::new(),
            scan: ncols <= SCAN_LIMIT,
            next: 0,
            end: 0,
        }
    }

    fn ensure(&mut self, field: &K, ncols: usize) {
        if self.values.len() < ncols {
            self.values.resize(ncols, field.lazy_zero());
            self.touched.resize(ncols, false);
        }
        self.scan = ncols <= SCAN_LIMIT;
    }

    #[inline]
    fn touch(&mut self, c: u32) {
        if !self.touched[c as usize] {
            self.touched[c as usize] = true;
            self.heap.push(Reverse(c));
        }
    }

    fn load(&mut self, field: &K, row: &[(u32, K::Elem)]) {
        if self.scan {
            self.next = row.first().map_or(0, |(c, _)| *c as usize);
            self.end = row.last().map_or(0, |(c, _)| *c as usize + 1);
            for (c, v) in row {
                self.values[*c as usize] = field.lazy(v);
            }
        } else {
            for (c, v) in row {
                self.values[*c as usize] = field.lazy(v);
                self.touch(*c);
            }
        }
    }

    /// `acc -= coeff * row`
    #[inline]
    fn sub_scaled(&mut self, field: &K, coeff: &K::Elem, row: &[(u32, K::Elem)]) {
        if self.scan {
            if let Some((c, _)) = row.last() {
                self.end = self.end.max(*c as usize + 1);
            }
            for (c, v) in row {
                field.lazy_sub_mul(&mut self.values[*c as usize], coeff, v);
            }
        } else {
            for (c, v) in row {
                field.lazy_sub_mul(&mut self.values[*c as usize], coeff, v);
                self.touch(*c);
            }
        }
    }

    /// Next nonzero column at or after the scan position, cleared.
    #[inline]
    fn pop(&mut self, field: &K) -> Option<(u32, K::Elem)> {
        if self.scan {
            while self.next < self.end {
                let c = self.next;
                self.next += 1;
                let v = field.normalize(&self.values[c]);
                self.values[c] = field.lazy_zero();
                if !field.is_zero(&v) {
                    return Some((c as u32, v));
                }
            }
            None
        } else {
            loop {
                let Reverse(c) = self.heap.pop()?;
                self.touched[c as usize] = false;
                let v = field.normalize(&self.values[c as usize]);
                self.values[c as usize] = field.lazy_zero();
                if !field.is_zero(&v) {
                    return Some((c, v));
                }
            }
        }
    }
}

/// Row-echelon form under construction. Every stored row is monic and its
/// first column is its pivot; no two rows share a pivot.
pub(crate) struct Echelon<K: Field> {
    field: K,
    ncols: usize,
    pivot_row: Vec<u32>,
    rows: Vec<SparseRow<K::Elem>>,
    acc: Accumulator<K>,
}

impl<K: Field> Echelon<K> {
    pub(crate) fn new(field: &K, ncols: usize) -> Self {
        Echelon {
            field: field.clone(),
            ncols,
            pivot_row: vec![NO_PIVOT; ncols],
            rows: Vec::new(),
            acc: Accumulator::new(field, ncols),
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Eliminates every pivot column from `row`; returns the remainder.
    pub(crate) fn reduce(&mut self, row: &[(u32, K::Elem)]) -> SparseRow<K::Elem> {
        let mut acc = std::mem::replace(&mut self.acc, Accumulator::new(&self.field, 0));
        let out = self.reduce_with(&mut acc, row);
        self.acc = acc;
        out
    }

    /// As [`Echelon::reduce`] with caller-owned scratch space, so that many
    /// rows can be reduced concurrently against a fixed set of pivots.
    pub(crate) fn reduce_with(&self, acc: &mut Accumulator<K>, row: &[(u32, K::Elem)]) -> SparseRow<K::Elem> {
        acc.ensure(&self.field, self.ncols);
        acc.load(&self.field, row);
        let mut out = Vec::new();
        while let Some((c, v)) = acc.pop(&self.field) {
            let pr = self.pivot_row[c as usize];
            if pr == NO_PIVOT {
                out.push((c, v));
            } else {
                // pivot rows are monic and start at `c`; skip the leading entry
                let tail = &self.rows[pr as usize][1..];
                acc.sub_scaled(&self.field, &v, tail);
            }
        }
        out
    }

    /// Adds a monic row whose first column is not yet a pivot, unreduced.
    pub(crate) fn push_pivot_row(&mut self, row: SparseRow<K::Elem>) {
        let pivot = row[0].0 as usize;
        debug_assert!(self.field.is_one(&row[0].1));
        debug_assert_eq!(self.pivot_row[pivot], NO_PIVOT);
        self.pivot_row[pivot] = self.rows.len() as u32;
        self.rows.push(row);
    }

    pub(crate) fn row(&self, i: usize) -> &[(u32, K::Elem)] {
        &self.rows[i]
    }

    pub(crate) fn replace_row(&mut self, i: usize, row: SparseRow<K::Elem>) {
        debug_assert_eq!(row[0].0, self.rows[i][0].0);
        self.rows[i] = row;
    }

    /// Adds a row; returns `true` if it was independent of the rows so far.
    pub(crate) fn insert(&mut self, row: &[(u32, K::Elem)]) -> bool {
        let mut r = self.reduce(row);
        if r.is_empty() {
            return false;
        }
        let inv = self.field.inv(&r[0].1);
        for (_, v) in r.iter_mut() {
            *v = self.field.mul(v, &inv);
        }
        let pivot = r[0].0;
        self.pivot_row[pivot as usize] = self.rows.len() as u32;
        self.rows.push(r);
        true
    }

    /// Fully reduced echelon form, rows sorted by pivot column.
    pub(crate) fn into_rref(mut self) -> (Vec<SparseRow<K::Elem>>, Vec<usize>) {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.rows[i][0].0);
        // back-substitute from the last pivot so that every row used is final
        for &i in order.iter().rev() {
            let row = std::mem::take(&mut self.rows[i]);
            let pivot = row[0].0;
            let lead = row[0].1.clone();
            let tail = self.reduce(&row[1..]);
            let mut full = Vec::with_capacity(tail.len() + 1);
            full.push((pivot, lead));
            full.extend(tail.into_iter().filter(|(c, _)| *c != pivot));
            self.rows[i] = full;
        }
        let pivots = order.iter().map(|&i| self.rows[i][0].0 as usize).collect();
        let rows = order
            .into_iter()
            .map(|i| std::mem::take(&mut self.rows[i]))
            .collect();
        (rows, pivots)
    }
}

/// Rank of a sparse matrix given as rows over `ncols` columns.
///
/// Columns are reordered by increasing occupancy and rows by increasing length
/// before elimination (a static Markowitz ordering); rank does not depend on
/// the pivot sequence.
pub(crate) fn sparse_rank<K: Field>(field: &K, ncols: usize, rows: &[SparseRow<K::Elem>]) -> usize {
    let mut count = vec![0usize; ncols];
    for r in rows {
        for (c, _) in r {
            count[*c as usize] += 1;
        }
    }
    let mut perm: Vec<u32> = (0..ncols as u32).collect();
    perm.sort_by_key(|&c| (count[c as usize], c));
    let mut new_index = vec![0u32; ncols];
    for (i, &c) in perm.iter().enumerate() {
        new_index[c as usize] = i as u32;
    }
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by_key(|&i| (rows[i].len(), i));
    let mut ech = Echelon::new(field, ncols);
    let mut buf: SparseRow<K::Elem> = Vec::new();
    for i in order {
        buf.clear();
        buf.extend(rows[i].iter().map(|(c, v)| (new_index[*c as usize], v.clone())));
        buf.sort_by_key(|(c, _)| *c);
        ech.insert(&buf);
    }
    ech.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn rref_of_small_matrix() {
        let k = PrimeField::new(101).unwrap();
        let mut e = Echelon::new(&k, 3);
        assert!(e.insert(&[(0, 1), (1, 2)]));
        assert!(e.insert(&[(0, 1), (2, 1)]));
        assert!(!e.insert(&[(1, 2), (2, 100)]));
        let (rows, pivots) = e.into_rref();
        assert_eq!(pivots, vec![0, 1]);
        // row space of [[1,2,0],[1,0,1]] in RREF: [1,0,1], [0,1,-1/2]
        assert_eq!(rows[0], vec![(0, 1), (2, 1)]);
        assert_eq!(rows[1], vec![(1, 1), (2, k.neg(&k.inv(&2)))]);
    }

    #[test]
    fn sparse_rank_matches_echelon() {
        let k = PrimeField::new(7).unwrap();
        let rows = vec![
            vec![(0, 1), (3, 2)],
            vec![(1, 1), (3, 1)],
            vec![(0, 2), (1, 3), (3, 2 * 2 + 3)],
            vec![(2, 5)],
        ];
        // third row = 2*r0 + 3*r1 (mod 7) => rank 3
        assert_eq!(sparse_rank(&k, 4, &rows), 3);
    }
}
