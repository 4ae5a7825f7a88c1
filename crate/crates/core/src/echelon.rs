//! Sparse reduced row echelon forms over the rationals.
//!
//! Vectors spanned by 0/1 matrices and their products stay very sparse in
//! reduced echelon form, so rows are stored as sorted `(index, value)` lists
//! and elimination only touches nonzero entries.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::rational::Rational;

/// Sparse vector with strictly increasing indices and no stored zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SparseVec {
    entries: Vec<(usize, Rational)>,
}

impl SparseVec {
    pub fn from_dense(dense: &[Rational]) -> Self {
        SparseVec {
            entries: dense
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, v.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<Rational> {
        let mut dense = vec![Rational::zero(); len];
        for (i, v) in &self.entries {
            dense[*i] = v.clone();
        }
        dense
    }

    pub fn entries(&self) -> &[(usize, Rational)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&Rational> {
        self.entries
            .binary_search_by_key(&index, |(i, _)| *i)
            .ok()
            .map(|pos| &self.entries[pos].1)
    }

    fn scale_in_place(&mut self, factor: &Rational) {
        for (_, v) in &mut self.entries {
            *v *= factor;
        }
    }

    /// `self - factor * other`.
    fn sub_scaled(&self, factor: &Rational, other: &SparseVec) -> SparseVec {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((ia, va)), Some((ib, vb))) => {
                    if ia < ib {
                        out.push((*ia, va.clone()));
                        a.next();
                    } else if ib < ia {
                        out.push((*ib, -(factor * vb)));
                        b.next();
                    } else {
                        let v = va - factor * vb;
                        if !v.is_zero() {
                            out.push((*ia, v));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((ia, va)), None) => {
                    out.push((*ia, va.clone()));
                    a.next();
                }
                (None, Some((ib, vb))) => {
                    out.push((*ib, -(factor * vb)));
                    b.next();
                }
                (None, None) => break,
            }
        }
        SparseVec { entries: out }
    }
}

fn sub_scaled_dense(dense: &mut [Rational], factor: &Rational, row: &SparseVec) {
    for (i, v) in &row.entries {
        dense[*i] -= factor * v;
    }
}

/// Canonical reduced row echelon basis of a subspace of `Q^len`.
///
/// Every row has leading entry 1 at its pivot and zeros at all other
/// pivots, so two echelons of the same subspace are identical.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Echelon {
    len: usize,
    rows: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new(len: usize) -> Self {
        Echelon {
            len,
            rows: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Rows in pivot order.
    pub fn rows(&self) -> impl Iterator<Item = &SparseVec> {
        self.rows.values()
    }

    /// Reduces `dense` in place against the basis; the result is zero iff the
    /// input lies in the span.
    pub fn reduce(&self, dense: &mut [Rational]) {
        debug_assert_eq!(dense.len(), self.len);
        for (&pivot, row) in &self.rows {
            if dense[pivot].is_zero() {
                continue;
            }
            let factor = dense[pivot].clone();
            sub_scaled_dense(dense, &factor, row);
        }
    }

    pub fn contains(&self, dense: &[Rational]) -> bool {
        let mut v = dense.to_vec();
        self.reduce(&mut v);
        v.iter().all(Zero::is_zero)
    }

    /// Coordinates of a member with respect to the rows in pivot order, or
    /// `None` if the vector is outside the span.
    pub fn coordinates(&self, dense: &[Rational]) -> Option<Vec<Rational>> {
        if !self.contains(dense) {
            return None;
        }
        Some(self.rows.keys().map(|&p| dense[p].clone()).collect())
    }

    /// Inserts a vector; returns `true` iff the dimension grew.
    pub fn insert(&mut self, dense: &[Rational]) -> bool {
        self.insert_vec(dense.to_vec())
    }

    /// [`Echelon::insert`] taking ownership of the vector.
    pub fn insert_vec(&mut self, mut v: Vec<Rational>) -> bool {
        debug_assert_eq!(v.len(), self.len);
        self.reduce(&mut v);
        let Some(pivot) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = Rational::one() / &v[pivot];
        let mut row = SparseVec::from_dense(&v);
        row.scale_in_place(&inv);
        for other in self.rows.values_mut() {
            if let Some(c) = other.get(pivot).cloned() {
                *other = other.sub_scaled(&c, &row);
            }
        }
        self.rows.insert(pivot, row);
        true
    }

    pub fn is_subspace_of(&self, other: &Echelon) -> bool {
        self.len == other.len && self.rows.values().all(|r| other.contains(&r.to_dense(self.len)))
    }
}

/// Basis of `{c : sum_i c_i * vectors[i] = 0}` for vectors of length `len`.
///
/// Linear relations are tracked alongside the elimination, so each vector is
/// reduced once.
pub fn linear_relations(vectors: &[Vec<Rational>], len: usize) -> Vec<Vec<Rational>> {
    let k = vectors.len();
    // pivot -> (row, combination)
    let mut rows: BTreeMap<usize, (SparseVec, SparseVec)> = BTreeMap::new();
    let mut relations = Vec::new();
    for (idx, vector) in vectors.iter().enumerate() {
        debug_assert_eq!(vector.len(), len);
        let mut v = vector.clone();
        let mut combo = vec![Rational::zero(); k];
        combo[idx] = Rational::one();
        for (&pivot, (row, row_combo)) in &rows {
            if v[pivot].is_zero() {
                continue;
            }
            let factor = v[pivot].clone();
            sub_scaled_dense(&mut v, &factor, row);
            sub_scaled_dense(&mut combo, &factor, row_combo);
        }
        match v.iter().position(|x| !x.is_zero()) {
            None => relations.push(combo),
            Some(pivot) => {
                let inv = Rational::one() / &v[pivot];
                let mut row = SparseVec::from_dense(&v);
                let mut row_combo = SparseVec::from_dense(&combo);
                row.scale_in_place(&inv);
                row_combo.scale_in_place(&inv);
                for (other, other_combo) in rows.values_mut() {
                    if let Some(c) = other.get(pivot).cloned() {
                        *other = other.sub_scaled(&c, &row);
                        *other_combo = other_combo.sub_scaled(&c, &row_combo);
                    }
                }
                rows.insert(pivot, (row, row_combo));
            }
        }
    }
    relations
}

/// Rank of a list of dense vectors.
pub fn rank(vectors: &[Vec<Rational>]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let mut ech = Echelon::new(first.len());
    for v in vectors {
        ech.insert(v);
    }
    ech.dim()
}

/// Null space `{x : A x = 0}` of a dense matrix given by rows with `ncols` columns.
pub fn null_space(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    // Columns of A as vectors; relations among columns are exactly the null space.
    let columns: Vec<Vec<Rational>> = (0..ncols)
        .map(|j| rows.iter().map(|r| r[j].clone()).collect())
        .collect();
    linear_relations(&columns, rows.len())
}

/// Determinant by fraction-based Gaussian elimination.
pub fn determinant(rows: &[Vec<Rational>]) -> Rational {
    let n = rows.len();
    let mut a: Vec<Vec<Rational>> = rows.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let pivot = a[col][col].clone();
        det *= &pivot;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &pivot;
            for c in col..n {
                let delta = &factor * &a[col][c];
                a[r][c] -= delta;
            }
        }
    }
    det
}
