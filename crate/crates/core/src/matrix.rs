//! Dense exact square matrices.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
}

/// Square matrix of exact rationals, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl ExactMatrix {
    pub fn zeros(n: usize) -> Self {
        ExactMatrix {
            n,
            entries: vec![Rational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.entries[i * n + i] = Rational::one();
        }
        m
    }

    /// The all-one matrix `J`.
    pub fn all_ones(n: usize) -> Self {
        ExactMatrix {
            n,
            entries: vec![Rational::one(); n * n],
        }
    }

    /// Matrix unit `E_{ij}`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n);
        m.entries[i * n + j] = Rational::one();
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        ExactMatrix { n, entries }
    }

    /// Builds a matrix from integer rows. Panics if the rows are not square.
    pub fn from_int_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            let row = row.as_ref();
            assert_eq!(row.len(), n, "rows must form a square matrix");
            entries.extend(row.iter().map(|&v| int(v)));
        }
        ExactMatrix { n, entries }
    }

    /// Reassembles a matrix from a row-major entry vector of length `n * n`.
    pub fn from_entries(n: usize, entries: Vec<Rational>) -> Self {
        assert_eq!(entries.len(), n * n, "entry count must be n * n");
        ExactMatrix { n, entries }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.entries[i * self.n + j] = value;
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Rational> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.iter().filter(|v| !v.is_zero()).count()
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        Self::from_fn(n, |i, j| self.entries[j * n + i].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| (i + 1..n).all(|j| self.entries[i * n + j] == self.entries[j * n + i]))
    }

    pub fn trace(&self) -> Rational {
        (0..self.n).map(|i| self.entries[i * self.n + i].clone()).sum()
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        ExactMatrix {
            n: self.n,
            entries: self.entries.iter().map(|v| v * factor).collect(),
        }
    }

    fn check_order(&self, other: &Self) -> Result<(), MatrixError> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(MatrixError::OrderMismatch {
                left: self.n,
                right: other.n,
            })
        }
    }

    /// Ordinary matrix product. Zero entries of `self` are skipped, which
    /// makes products of sparse 0/1 matrices cheap.
    pub fn mul(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_order(other)?;
        let n = self.n;
        let mut out = vec![Rational::zero(); n * n];
        for i in 0..n {
            let row = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                let other_row = &other.entries[k * n..(k + 1) * n];
                if a.is_one() {
                    for (dst, b) in row.iter_mut().zip(other_row) {
                        if !b.is_zero() {
                            *dst += b;
                        }
                    }
                } else {
                    for (dst, b) in row.iter_mut().zip(other_row) {
                        if !b.is_zero() {
                            *dst += a * b;
                        }
                    }
                }
            }
        }
        Ok(ExactMatrix { n, entries: out })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_order(other)?;
        Ok(ExactMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_order(other)?;
        Ok(ExactMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// `self += factor * other`, skipping zero entries of `other`.
    pub fn add_scaled(&mut self, factor: &Rational, other: &Self) -> Result<(), MatrixError> {
        self.check_order(other)?;
        if factor.is_zero() {
            return Ok(());
        }
        for (dst, b) in self.entries.iter_mut().zip(&other.entries) {
            if !b.is_zero() {
                *dst += factor * b;
            }
        }
        Ok(())
    }

    /// Largest absolute row sum, an upper bound for the modulus of every eigenvalue.
    pub fn max_abs_row_sum(&self) -> Rational {
        use num_traits::Signed;
        (0..self.n)
            .map(|i| {
                self.entries[i * self.n..(i + 1) * self.n]
                    .iter()
                    .map(|v| v.abs())
                    .sum::<Rational>()
            })
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix({}) [", self.n)?;
        for i in 0..self.n {
            let row: Vec<String> = self.entries[i * self.n..(i + 1) * self.n]
                .iter()
                .map(|v| v.to_string())
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Add for &ExactMatrix {
    type Output = ExactMatrix;

    fn add(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.try_add(rhs).expect("matrix orders must match")
    }
}

impl Sub for &ExactMatrix {
    type Output = ExactMatrix;

    fn sub(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.try_sub(rhs).expect("matrix orders must match")
    }
}

impl Neg for &ExactMatrix {
    type Output = ExactMatrix;

    fn neg(self) -> ExactMatrix {
        ExactMatrix {
            n: self.n,
            entries: self.entries.iter().map(|v| -v).collect(),
        }
    }
}

/// Jordan product `(AB + BA) / 2`.
pub fn jordan_product(a: &ExactMatrix, b: &ExactMatrix) -> Result<ExactMatrix, MatrixError> {
    let ab = a.mul(b)?;
    let ba = b.mul(a)?;
    let half = crate::rational::half();
    let mut out = ab;
    for (dst, v) in out.entries.iter_mut().zip(ba.entries) {
        *dst += v;
        *dst *= &half;
    }
    Ok(out)
}

/// `A + transpose(A)`.
pub fn sym(a: &ExactMatrix) -> ExactMatrix {
    let n = a.n;
    ExactMatrix::from_fn(n, |i, j| &a.entries[i * n + j] + &a.entries[j * n + i])
}

/// Kronecker product; block `(i, j)` of the result is `a[i, j] * b`.
pub fn kronecker(a: &ExactMatrix, b: &ExactMatrix) -> ExactMatrix {
    let (n, m) = (a.n, b.n);
    ExactMatrix::from_fn(n * m, |r, c| {
        a.get(r / m, c / m) * b.get(r % m, c % m)
    })
}
