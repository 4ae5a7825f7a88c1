//! Subspaces of square matrices with canonical bases.

use crate::echelon::Echelon;
use crate::matrix::{sym, ExactMatrix, MatrixError};
use crate::rational::Rational;

/// A subspace of `n x n` matrices, held as the reduced row echelon form of
/// the row-major linearized entries. The basis is unique for a subspace, so
/// equality of spans is equality of values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MatrixSpan {
    n: usize,
    echelon: Echelon,
}

impl MatrixSpan {
    pub fn new(n: usize) -> Self {
        MatrixSpan {
            n,
            echelon: Echelon::new(n * n),
        }
    }

    pub fn from_matrices<'a, I>(n: usize, matrices: I) -> Result<Self, MatrixError>
    where
        I: IntoIterator<Item = &'a ExactMatrix>,
    {
        let mut span = Self::new(n);
        for m in matrices {
            span.insert(m)?;
        }
        Ok(span)
    }

    pub(crate) fn from_echelon(n: usize, echelon: Echelon) -> Self {
        debug_assert_eq!(echelon.len(), n * n);
        MatrixSpan { n, echelon }
    }

    pub(crate) fn echelon(&self) -> &Echelon {
        &self.echelon
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.echelon.dim()
    }

    fn check(&self, a: &ExactMatrix) -> Result<(), MatrixError> {
        if a.order() == self.n {
            Ok(())
        } else {
            Err(MatrixError::OrderMismatch {
                left: self.n,
                right: a.order(),
            })
        }
    }

    /// Adds `a` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, a: &ExactMatrix) -> Result<bool, MatrixError> {
        self.check(a)?;
        Ok(self.echelon.insert(a.entries()))
    }

    pub fn contains(&self, a: &ExactMatrix) -> Result<bool, MatrixError> {
        self.check(a)?;
        Ok(self.echelon.contains(a.entries()))
    }

    /// Coordinates of `a` over [`MatrixSpan::basis`], if `a` is in the span.
    pub fn coordinates(&self, a: &ExactMatrix) -> Result<Option<Vec<Rational>>, MatrixError> {
        self.check(a)?;
        Ok(self.echelon.coordinates(a.entries()))
    }

    /// The canonical echelon basis.
    pub fn basis(&self) -> Vec<ExactMatrix> {
        self.echelon
            .rows()
            .map(|r| ExactMatrix::from_entries(self.n, r.to_dense(self.n * self.n)))
            .collect()
    }

    pub fn combination(&self, coords: &[Rational]) -> ExactMatrix {
        let mut out = ExactMatrix::zeros(self.n);
        for (c, b) in coords.iter().zip(self.basis()) {
            out.add_scaled(c, &b).expect("same order");
        }
        out
    }

    pub fn is_subspace_of(&self, other: &MatrixSpan) -> Result<bool, MatrixError> {
        if self.n != other.n {
            return Err(MatrixError::OrderMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(self.echelon.is_subspace_of(&other.echelon))
    }

    /// Span of `B + transpose(B)` over the basis elements `B`.
    pub fn sym_image(&self) -> MatrixSpan {
        let mut out = MatrixSpan::new(self.n);
        for b in self.basis() {
            out.insert(&sym(&b)).expect("same order");
        }
        out
    }
}

pub fn span_equal(a: &MatrixSpan, b: &MatrixSpan) -> Result<bool, MatrixError> {
    if a.n != b.n {
        return Err(MatrixError::OrderMismatch {
            left: a.n,
            right: b.n,
        });
    }
    Ok(a.echelon == b.echelon)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_member_is_noop() {
        let mut s = MatrixSpan::new(2);
        assert!(s.insert(&ExactMatrix::identity(2)).unwrap());
        let before = s.clone();
        assert!(!s.insert(&ExactMatrix::identity(2).scale(&crate::rational::int(3))).unwrap());
        assert_eq!(s, before);
    }

    #[test]
    fn identity_into_empty_span() {
        let mut s = MatrixSpan::new(4);
        assert_eq!(s.dim(), 0);
        assert!(s.insert(&ExactMatrix::identity(4)).unwrap());
        assert_eq!(s.dim(), 1);
    }

    #[test]
    fn equality_is_order_independent() {
        let i = ExactMatrix::identity(3);
        let j = ExactMatrix::all_ones(3);
        let a = MatrixSpan::from_matrices(3, [&i, &j]).unwrap();
        let b = MatrixSpan::from_matrices(3, [&j, &i]).unwrap();
        assert!(span_equal(&a, &b).unwrap());
        let only_i = MatrixSpan::from_matrices(3, [&i]).unwrap();
        let only_j = MatrixSpan::from_matrices(3, [&j]).unwrap();
        assert!(!span_equal(&only_i, &only_j).unwrap());
    }

    #[test]
    fn mismatched_orders() {
        let mut s = MatrixSpan::new(2);
        assert!(s.insert(&ExactMatrix::identity(3)).is_err());
        assert!(span_equal(&MatrixSpan::new(2), &MatrixSpan::new(3)).is_err());
    }

    #[test]
    fn coordinates_reconstruct() {
        let a = ExactMatrix::from_int_rows(&[[1, 2], [0, 1]]);
        let b = ExactMatrix::from_int_rows(&[[0, 1], [1, 0]]);
        let s = MatrixSpan::from_matrices(2, [&a, &b]).unwrap();
        let x = &a.scale(&crate::rational::int(3)) - &b;
        let coords = s.coordinates(&x).unwrap().unwrap();
        assert_eq!(s.combination(&coords), x);
        assert_eq!(s.coordinates(&ExactMatrix::identity(2).scale(&crate::rational::int(0))).unwrap().unwrap().len(), 2);
    }

    #[test]
    fn sym_image_of_unit() {
        let s = MatrixSpan::from_matrices(2, [&ExactMatrix::unit(2, 0, 1)]).unwrap();
        let expected =
            MatrixSpan::from_matrices(2, [&(&ExactMatrix::unit(2, 0, 1) + &ExactMatrix::unit(2, 1, 0))])
                .unwrap();
        assert_eq!(s.sym_image(), expected);
    }
}
