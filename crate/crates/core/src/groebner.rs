//! Degree-by-degree Gröbner bases of homogeneous ideals (an F4-style
//! matrix algorithm in degree-reverse-lexicographic order), used to read off
//! Hilbert functions of quotients `S/I` in degrees far beyond what a single
//! Macaulay matrix can hold.
//!
//! After degree `k` has been processed the basis is a `k`-truncated Gröbner
//! basis, so the standard monomials of degree `k` are exact. Standard
//! monomials of degree `k+1` are exactly the multiples `u·x_j` whose every
//! `x_i`-quotient is standard of degree `k`, minus the new leading terms.

use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;

use crate::field::Field;
use crate::linalg::{Accumulator, Echelon, SparseRow};
use crate::monomial::{divides_packed, MAX_VARS};
use crate::poly::HomogeneousPolynomial;

/// Sort key under which ascending order is descending degrevlex order for
/// monomials of one degree.
#[inline]
fn key(packed: u64) -> u64 {
    packed.swap_bytes()
}

#[inline]
fn lcm_packed(a: u64, b: u64) -> u64 {
    let (a, b) = (a.to_be_bytes(), b.to_be_bytes());
    let mut out = [0u8; 8];
    for i in 0..8 {
        out[i] = a[i].max(b[i]);
    }
    u64::from_be_bytes(out)
}

#[inline]
fn degree_of(packed: u64) -> u32 {
    packed.to_le_bytes().iter().map(|&b| u32::from(b)).sum()
}

/// A monic polynomial, terms sorted lead first.
type Poly<E> = Vec<(u64, E)>;

#[derive(Clone, Copy, Debug)]
struct Pair {
    lcm: u64,
    i: u32,
    j: u32,
}

/// Rows handed to the linear-algebra step: a multiplier and a basis index.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct Product {
    mult: u64,
    idx: u32,
}

pub(crate) struct HilbertEngine<K: Field> {
    field: K,
    nvars: usize,
    basis: Vec<Poly<K::Elem>>,
    leads: Vec<u64>,
    pairs: BTreeMap<u32, Vec<Pair>>,
    inputs: BTreeMap<u32, Vec<Poly<K::Elem>>>,
    /// `quotient[k] = dim (S/I)_k` for every processed degree.
    quotient: Vec<usize>,
    standard: HashSet<u64>,
}

impl<K: Field> HilbertEngine<K> {
    pub(crate) fn new(field: &K, nvars: usize, generators: &[HomogeneousPolynomial<K>]) -> Self {
        assert!(nvars <= MAX_VARS);
        let mut inputs: BTreeMap<u32, Vec<Poly<K::Elem>>> = BTreeMap::new();
        for g in generators.iter().filter(|g| !g.is_zero()) {
            let mut p: Poly<K::Elem> = g.terms().map(|(m, c)| (m.packed(), c.clone())).collect();
            p.sort_by_key(|(m, _)| key(*m));
            inputs.entry(g.degree()).or_default().push(p);
        }
        HilbertEngine {
            field: field.clone(),
            nvars,
            basis: Vec::new(),
            leads: Vec::new(),
            pairs: BTreeMap::new(),
            inputs,
            quotient: Vec::new(),
            standard: HashSet::new(),
        }
    }

    /// `dim (S/I)_k`, extending the computation as far as needed.
    pub(crate) fn quotient_dim(&mut self, k: u32) -> usize {
        while self.quotient.len() <= k as usize {
            self.step();
        }
        self.quotient[k as usize]
    }

    fn step(&mut self) {
        let k = self.quotient.len() as u32;
        let pairs = self.pairs.remove(&k).unwrap_or_default();
        let inputs = self.inputs.remove(&k).unwrap_or_default();
        let first_new = self.basis.len();
        if !pairs.is_empty() || !inputs.is_empty() {
            for p in self.reduce_degree(pairs, inputs) {
                self.leads.push(p[0].0);
                self.basis.push(p);
                self.update(self.basis.len() - 1);
            }
        }
        let new_leads: HashSet<u64> = self.leads[first_new..].iter().copied().collect();
        self.standard = if k == 0 {
            if new_leads.contains(&0) {
                HashSet::new()
            } else {
                HashSet::from([0u64])
            }
        } else {
            self.next_standard(&new_leads)
        };
        self.quotient.push(self.standard.len());
    }

    fn next_standard(&self, new_leads: &HashSet<u64>) -> HashSet<u64> {
        let mut out = HashSet::new();
        for &u in &self.standard {
            for j in 0..self.nvars {
                let m = u + (1u64 << (8 * (7 - j)));
                if out.contains(&m) || new_leads.contains(&m) {
                    continue;
                }
                let all_standard = (0..self.nvars).all(|i| {
                    let sh = 8 * (7 - i);
                    (m >> sh) & 0xff == 0 || self.standard.contains(&(m - (1u64 << sh)))
                });
                if all_standard {
                    out.insert(m);
                }
            }
        }
        out
    }

    /// Index of the newest basis element whose lead divides `m`.
    fn find_reducer(&self, m: u64) -> Option<usize> {
        self.leads.iter().rposition(|&l| divides_packed(l, m))
    }

    fn product_terms(&self, p: Product) -> impl Iterator<Item = (u64, &K::Elem)> + '_ {
        self.basis[p.idx as usize].iter().map(move |(m, c)| (m + p.mult, c))
    }

    /// One F4 round: returns the new basis elements of degree `k`.
    fn reduce_degree(&self, pairs: Vec<Pair>, inputs: Vec<Poly<K::Elem>>) -> Vec<Poly<K::Elem>> {
        // reducer per monomial; the first product with a given lead serves as reducer
        let mut reducer: HashMap<u64, Product> = HashMap::new();
        let mut todo_products: Vec<Product> = Vec::new();
        let mut seen_products: HashSet<Product> = HashSet::new();
        for pair in &pairs {
            for idx in [pair.i, pair.j] {
                let p = Product {
                    mult: pair.lcm - self.leads[idx as usize],
                    idx,
                };
                if !seen_products.insert(p) {
                    continue;
                }
                match reducer.entry(pair.lcm) {
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(p);
                    }
                    std::collections::hash_map::Entry::Occupied(_) => todo_products.push(p),
                }
            }
        }

        // symbolic preprocessing
        let mut columns: HashSet<u64> = HashSet::new();
        let mut stack: Vec<u64> = Vec::new();
        let visit = |m: u64, columns: &mut HashSet<u64>, stack: &mut Vec<u64>| {
            if columns.insert(m) {
                stack.push(m);
            }
        };
        for p in reducer.values().chain(&todo_products) {
            for (m, _) in self.product_terms(*p) {
                visit(m, &mut columns, &mut stack);
            }
        }
        for row in &inputs {
            for (m, _) in row {
                visit(*m, &mut columns, &mut stack);
            }
        }
        while let Some(m) = stack.pop() {
            let p = match reducer.get(&m) {
                Some(p) => *p,
                None => match self.find_reducer(m) {
                    Some(idx) => {
                        let p = Product {
                            mult: m - self.leads[idx],
                            idx: idx as u32,
                        };
                        reducer.insert(m, p);
                        p
                    }
                    None => continue,
                },
            };
            for (t, _) in self.product_terms(p).skip(1) {
                visit(t, &mut columns, &mut stack);
            }
        }

        let mut cols: Vec<u64> = columns.into_iter().collect();
        cols.sort_unstable_by_key(|&m| key(m));
        let index: HashMap<u64, u32> = cols.iter().enumerate().map(|(i, &m)| (m, i as u32)).collect();
        let to_row = |terms: &mut dyn Iterator<Item = (u64, &K::Elem)>| -> SparseRow<K::Elem> {
            terms.map(|(m, c)| (index[&m], c.clone())).collect()
        };

        let mut ech = Echelon::new(&self.field, cols.len());
        let mut reducer_list: Vec<(u32, Product)> = reducer.iter().map(|(m, p)| (index[m], *p)).collect();
        reducer_list.sort_unstable_by_key(|(c, _)| *c);
        for (_, p) in &reducer_list {
            ech.push_pivot_row(to_row(&mut self.product_terms(*p)));
        }

        let mut todo: Vec<SparseRow<K::Elem>> = todo_products
            .iter()
            .map(|p| to_row(&mut self.product_terms(*p)))
            .collect();
        for row in &inputs {
            let mut it = row.iter().map(|(m, c)| (*m, c));
            todo.push(to_row(&mut it));
        }

        let ncols = cols.len();
        let reduced: Vec<SparseRow<K::Elem>> = todo
            .par_iter()
            .map_init(
                || Accumulator::new(&self.field, ncols),
                |acc, row| ech.reduce_with(acc, row),
            )
            .collect();

        let mut new_rows = Vec::new();
        for row in reduced.into_iter().filter(|r| !r.is_empty()) {
            if ech.insert(&row) {
                new_rows.push(ech.rank() - 1);
            }
        }
        // interreduce the new rows, last pivot first
        new_rows.sort_by_key(|&i| std::cmp::Reverse(ech.row(i)[0].0));
        for &i in &new_rows {
            let row = ech.row(i).to_vec();
            let tail = ech.reduce(&row[1..]);
            let mut full = Vec::with_capacity(tail.len() + 1);
            full.push(row[0].clone());
            full.extend(tail);
            ech.replace_row(i, full);
        }
        new_rows.reverse();
        new_rows
            .into_iter()
            .map(|i| ech.row(i).iter().map(|(c, v)| (cols[*c as usize], v.clone())).collect())
            .collect()
    }

    /// Gebauer–Möller installation of the pairs of a new element `h`.
    fn update(&mut self, h: usize) {
        let lh = self.leads[h];
        let cands: Vec<(u32, u64)> = (0..h).map(|g| (g as u32, lcm_packed(self.leads[g], lh))).collect();
        let coprime = |g: u32, l: u64| l == self.leads[g as usize] + lh;
        let mut kept: Vec<(u32, u64)> = Vec::new();
        for (pos, &(g, l)) in cands.iter().enumerate() {
            let dominated = cands[pos + 1..].iter().any(|&(_, l2)| divides_packed(l2, l))
                || kept.iter().any(|&(_, l2)| divides_packed(l2, l));
            if coprime(g, l) || !dominated {
                kept.push((g, l));
            }
        }
        for pairs in self.pairs.values_mut() {
            pairs.retain(|p| {
                !(divides_packed(lh, p.lcm)
                    && lcm_packed(self.leads[p.i as usize], lh) != p.lcm
                    && lcm_packed(self.leads[p.j as usize], lh) != p.lcm)
            });
        }
        self.pairs.retain(|_, v| !v.is_empty());
        for (g, l) in kept {
            if coprime(g, l) {
                continue;
            }
            self.pairs.entry(degree_of(l)).or_default().push(Pair {
                lcm: l,
                i: g,
                j: h as u32,
            });
        }
    }
}
