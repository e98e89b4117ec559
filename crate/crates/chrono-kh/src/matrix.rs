//! Sparse matrices over exact coefficient rings.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::coeff::CoeffElement;
use crate::frobenius::DotScalar;

/// Minimal ring interface for complex entries.
pub trait Ring: Clone + PartialEq + Debug + std::fmt::Display {
    fn zero() -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn is_zero(&self) -> bool;
}

impl Ring for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Ring for CoeffElement {
    fn zero() -> Self {
        CoeffElement::zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn is_zero(&self) -> bool {
        CoeffElement::is_zero(self)
    }
}

impl Ring for DotScalar {
    fn zero() -> Self {
        DotScalar::zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        DotScalar::add(self, rhs)
    }
    fn neg(&self) -> Self {
        DotScalar::neg(self)
    }
    fn mul(&self, rhs: &Self) -> Self {
        DotScalar::mul(self, rhs)
    }
    fn is_zero(&self) -> bool {
        DotScalar::is_zero(self)
    }
}

/// The two-element field, for mod-2 complexes.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct F2(pub bool);

impl std::fmt::Display for F2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", if self.0 { 1 } else { 0 })
    }
}

impl Ring for F2 {
    fn zero() -> Self {
        F2(false)
    }
    fn add(&self, rhs: &Self) -> Self {
        F2(self.0 ^ rhs.0)
    }
    fn neg(&self) -> Self {
        *self
    }
    fn mul(&self, rhs: &Self) -> Self {
        F2(self.0 && rhs.0)
    }
    fn is_zero(&self) -> bool {
        !self.0
    }
}

/// A sparse matrix with deterministic entry order.
#[derive(Clone, PartialEq, Debug)]
pub struct SparseMat<R: Ring> {
    pub rows: usize,
    pub cols: usize,
    entries: BTreeMap<(usize, usize), R>,
}

impl<R: Ring> SparseMat<R> {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMat { rows, cols, entries: BTreeMap::new() }
    }

    pub fn add_to(&mut self, row: usize, col: usize, v: R) {
        debug_assert!(row < self.rows && col < self.cols);
        if v.is_zero() {
            return;
        }
        match self.entries.entry((row, col)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(v);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&v);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn get(&self, row: usize, col: usize) -> R {
        self.entries.get(&(row, col)).cloned().unwrap_or_else(R::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &R)> {
        self.entries.iter()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Composition `self ∘ rhs` (matrix product).
    pub fn compose(&self, rhs: &SparseMat<R>) -> SparseMat<R> {
        assert_eq!(self.cols, rhs.rows);
        let mut by_col: BTreeMap<usize, Vec<(usize, &R)>> = BTreeMap::new();
        for (&(i, k), v) in &self.entries {
            by_col.entry(k).or_default().push((i, v));
        }
        let mut out = SparseMat::new(self.rows, rhs.cols);
        for (&(k, j), b) in &rhs.entries {
            if let Some(col) = by_col.get(&k) {
                for &(i, a) in col {
                    out.add_to(i, j, a.mul(b));
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> SparseMat<R> {
        let mut out = SparseMat::new(self.cols, self.rows);
        for (&(i, j), v) in &self.entries {
            out.add_to(j, i, v.clone());
        }
        out
    }

    pub fn negated(&self) -> SparseMat<R> {
        let mut out = SparseMat::new(self.rows, self.cols);
        for (&(i, j), v) in &self.entries {
            out.add_to(i, j, v.neg());
        }
        out
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> SparseMat<S> {
        let mut out = SparseMat::new(self.rows, self.cols);
        for (&(i, j), v) in &self.entries {
            out.add_to(i, j, f(v));
        }
        out
    }

    /// Restrict to the given row and column index subsets (in order).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> SparseMat<R> {
        let row_pos: BTreeMap<usize, usize> = rows.iter().enumerate().map(|(p, &r)| (r, p)).collect();
        let col_pos: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(p, &c)| (c, p)).collect();
        let mut out = SparseMat::new(rows.len(), cols.len());
        for (&(i, j), v) in &self.entries {
            if let (Some(&pi), Some(&pj)) = (row_pos.get(&i), col_pos.get(&j)) {
                out.add_to(pi, pj, v.clone());
            }
        }
        out
    }
}
