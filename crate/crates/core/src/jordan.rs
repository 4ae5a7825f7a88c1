//! The adjacency Jordan algebra `RS` in coordinates over `A_0, ..., A_d`.

use num_traits::{One, Zero};

use crate::echelon::{determinant, null_space, rank};
use crate::rational::Rational;
use crate::scheme::StructureConstants;

/// An element `sum_i c_i A_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct JAlgElement(pub Vec<Rational>);

impl JAlgElement {
    pub fn zero(d: usize) -> Self {
        JAlgElement(vec![Rational::zero(); d])
    }

    pub fn basis(d: usize, i: usize) -> Self {
        let mut v = Self::zero(d);
        v.0[i] = Rational::one();
        v
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        JAlgElement(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        JAlgElement(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        JAlgElement(self.0.iter().map(|a| a * factor).collect())
    }
}

/// Square matrix over the rationals acting on coordinate columns.
pub type Operator = Vec<Vec<Rational>>;

fn op_mul(a: &Operator, b: &Operator) -> Operator {
    let d = a.len();
    let mut out = vec![vec![Rational::zero(); d]; d];
    for i in 0..d {
        for k in 0..d {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..d {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

/// `RS` with multiplication given by a structure-constant table.
#[derive(Debug, Clone)]
pub struct JordanAlgebra {
    constants: StructureConstants,
}

impl JordanAlgebra {
    pub fn new(constants: StructureConstants) -> Self {
        JordanAlgebra { constants }
    }

    pub fn dim(&self) -> usize {
        self.constants.class_count()
    }

    pub fn constants(&self) -> &StructureConstants {
        &self.constants
    }

    /// The unit `A_0`.
    pub fn unit(&self) -> JAlgElement {
        JAlgElement::basis(self.dim(), 0)
    }

    pub fn product(&self, a: &JAlgElement, b: &JAlgElement) -> JAlgElement {
        let d = self.dim();
        let mut out = vec![Rational::zero(); d];
        for (i, ai) in a.0.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.0.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let coeff = ai * bj;
                for (k, p) in self.constants.product_coordinates(i, j).iter().enumerate() {
                    if !p.is_zero() {
                        out[k] += &coeff * p;
                    }
                }
            }
        }
        JAlgElement(out)
    }

    pub fn square(&self, a: &JAlgElement) -> JAlgElement {
        self.product(a, a)
    }

    /// `L(a)`: column `j` holds the coordinates of `a * A_j`.
    pub fn left_mult(&self, a: &JAlgElement) -> Operator {
        let d = self.dim();
        let mut op = vec![vec![Rational::zero(); d]; d];
        for j in 0..d {
            let col = self.product(a, &JAlgElement::basis(d, j));
            for (k, v) in col.0.into_iter().enumerate() {
                op[k][j] = v;
            }
        }
        op
    }

    pub fn apply(op: &Operator, x: &JAlgElement) -> JAlgElement {
        JAlgElement(
            op.iter()
                .map(|row| row.iter().zip(&x.0).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    /// `tau(a, b) = tr L(a * b)`.
    pub fn trace_pairing(&self, a: &JAlgElement, b: &JAlgElement) -> Rational {
        let ab = self.product(a, b);
        let traces = self.basis_traces();
        ab.0.iter().zip(&traces).map(|(c, t)| c * t).sum()
    }

    /// `tr L(A_k)` for each basis element.
    pub fn basis_traces(&self) -> Vec<Rational> {
        let d = self.dim();
        (0..d)
            .map(|k| (0..d).map(|j| self.constants.get(k, j, j).clone()).sum())
            .collect()
    }

    pub fn trace_form(&self) -> TraceForm {
        let d = self.dim();
        let traces = self.basis_traces();
        let mut gram = vec![vec![Rational::zero(); d]; d];
        for i in 0..d {
            for j in 0..d {
                gram[i][j] = self
                    .constants
                    .product_coordinates(i, j)
                    .iter()
                    .zip(&traces)
                    .map(|(c, t)| c * t)
                    .sum();
            }
        }
        TraceForm { gram }
    }

    /// `e` commutes with everything: `L(e) L(A_b) = L(A_b) L(e)` for all `b`,
    /// that is `e * (b * x) = b * (e * x)` on all basis pairs.
    pub fn is_central(&self, e: &JAlgElement) -> bool {
        let le = self.left_mult(e);
        (0..self.dim()).all(|b| {
            let lb = self.left_mult(&JAlgElement::basis(self.dim(), b));
            op_mul(&le, &lb) == op_mul(&lb, &le)
        })
    }

    /// Commutativity and the Jordan identity `(a*b)*(a*a) = a*(b*(a*a))`.
    pub fn satisfies_jordan_identity(&self, a: &JAlgElement, b: &JAlgElement) -> bool {
        let aa = self.square(a);
        let lhs = self.product(&self.product(a, b), &aa);
        let rhs = self.product(a, &self.product(b, &aa));
        lhs == rhs && self.product(a, b) == self.product(b, a)
    }
}

/// Gram matrix of the trace form on the basis `A_0, ..., A_d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceForm {
    pub gram: Vec<Vec<Rational>>,
}

impl TraceForm {
    pub fn is_symmetric(&self) -> bool {
        let d = self.gram.len();
        (0..d).all(|i| (0..d).all(|j| self.gram[i][j] == self.gram[j][i]))
    }

    pub fn determinant(&self) -> Rational {
        determinant(&self.gram)
    }

    pub fn rank(&self) -> usize {
        rank(&self.gram)
    }

    /// Basis of `{a : tau(a, x) = 0 for all x}`.
    pub fn radical(&self) -> Vec<JAlgElement> {
        null_space(&self.gram, self.gram.len())
            .into_iter()
            .map(JAlgElement)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::scheme::{build_scheme, verify_jordan_scheme};
    use crate::signs::examples;

    fn algebra(rank: u32) -> JordanAlgebra {
        let s = build_scheme(&examples::by_rank(rank).unwrap()).unwrap();
        JordanAlgebra::new(verify_jordan_scheme(&s).unwrap())
    }

    #[test]
    fn unit_acts_as_identity() {
        let a = algebra(2);
        let l = a.left_mult(&a.unit());
        for (i, row) in l.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert_eq!(*v, int(i64::from(i == j)));
            }
        }
    }

    #[test]
    fn primed_identity_squares_to_unit() {
        let a = algebra(2);
        let l = a.left_mult(&JAlgElement::basis(13, 1));
        let l2 = op_mul(&l, &l);
        assert_eq!(l2, a.left_mult(&a.unit()));
    }

    #[test]
    fn trace_form_nonsingular() {
        for rank in 1..=2 {
            let a = algebra(rank);
            let t = a.trace_form();
            assert!(t.is_symmetric());
            assert!(!t.determinant().is_zero());
            assert!(t.radical().is_empty());
        }
    }

    #[test]
    fn degenerate_form_has_radical() {
        // a 2-dimensional algebra with a nilpotent: span{1, n}, n*n = 0
        let mut table = vec![int(0); 8];
        // index (i*2 + j)*2 + k
        table[0] = int(1); // 1*1 = 1
        table[3] = int(1); // 1*n = n
        table[5] = int(1); // n*1 = n
        let constants = StructureConstants::from_table(2, table);
        let a = JordanAlgebra::new(constants);
        let rad = a.trace_form().radical();
        assert_eq!(rad.len(), 1);
        assert_eq!(rad[0], JAlgElement(vec![int(0), int(1)]));
    }
}
