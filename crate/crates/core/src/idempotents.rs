//! Primitive central idempotents of a semisimple matrix algebra over `Q`.
//!
//! An element of a span is determined by its entries at the pivot positions
//! of the span's echelon basis. Commutators and products of algebra
//! elements stay in the algebra, so both the centre and the multiplication
//! of the centre are computed from pivot entries only.
//!
//! The centre `Z` is split by minimal polynomials of random elements: if
//! `x` in `eZ` has minimal polynomial `f` with rational root `l`, then
//! `h(x) / h(l)` with `f = (t - l) h` is a central idempotent below `e`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::echelon::{linear_relations, rank, Echelon};
use crate::matrix::ExactMatrix;
use crate::rational::{common_denominator, Rational};
use crate::span::MatrixSpan;

/// Random splitting attempts per central block.
pub const RETRY_BUDGET: usize = 50;
/// Random coordinates are drawn from `-COEFF_RANGE..=COEFF_RANGE`.
pub const COEFF_RANGE: i64 = 9;
/// Largest eigenvalue bound scanned for integer roots.
const ROOT_SCAN_LIMIT: i64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdempotentError {
    #[error("generator {0} is not in the algebra")]
    GeneratorOutsideAlgebra(usize),
    #[error("the identity matrix is not in the algebra")]
    NoIdentity,
    #[error("a central block of dimension {dim} did not split over the rationals after {attempts} attempts")]
    NonRationalSplit { dim: usize, attempts: usize },
    #[error("a central block of dimension {dim} is a number field and has no rational split")]
    NumberFieldBlock { dim: usize },
    #[error("idempotent check failed: {0}")]
    Verification(String),
}

/// Sparse entries of a generator by row and by column.
struct SparseGenerator {
    rows: Vec<Vec<(usize, Rational)>>,
    cols: Vec<Vec<(usize, Rational)>>,
}

impl SparseGenerator {
    fn new(g: &ExactMatrix) -> Self {
        let n = g.order();
        let mut rows = vec![Vec::new(); n];
        let mut cols = vec![Vec::new(); n];
        for p in 0..n {
            for q in 0..n {
                let v = g.get(p, q);
                if !v.is_zero() {
                    rows[p].push((q, v.clone()));
                    cols[q].push((p, v.clone()));
                }
            }
        }
        SparseGenerator { rows, cols }
    }

    /// `(B g - g B)[p][q]`.
    fn commutator_entry(&self, b: &ExactMatrix, p: usize, q: usize) -> Rational {
        let mut out = Rational::zero();
        for (r, v) in &self.cols[q] {
            let x = b.get(p, *r);
            if !x.is_zero() {
                out += x * v;
            }
        }
        for (r, v) in &self.rows[p] {
            let x = b.get(*r, q);
            if !x.is_zero() {
                out -= v * x;
            }
        }
        out
    }
}

fn pivot_positions(span: &MatrixSpan) -> Vec<(usize, usize)> {
    let n = span.order();
    span.echelon().pivots().map(|i| (i / n, i % n)).collect()
}

/// Centre of `alg`, given generators of `alg` as an algebra.
pub fn centre(alg: &MatrixSpan, generators: &[ExactMatrix]) -> Result<MatrixSpan, IdempotentError> {
    for (i, g) in generators.iter().enumerate() {
        if !alg.contains(g).unwrap_or(false) {
            return Err(IdempotentError::GeneratorOutsideAlgebra(i));
        }
    }
    let basis = alg.basis();
    let pivots = pivot_positions(alg);
    let m = basis.len();

    // kernel basis in coordinates over `basis`
    let mut kernel: Vec<Vec<Rational>> = (0..m)
        .map(|k| {
            let mut v = vec![Rational::zero(); m];
            v[k] = Rational::one();
            v
        })
        .collect();
    for g in generators {
        if kernel.is_empty() {
            break;
        }
        let sg = SparseGenerator::new(g);
        // coordinates of [B_k, g] for each k
        let columns: Vec<Vec<Rational>> = basis
            .par_iter()
            .map(|b| pivots.iter().map(|&(p, q)| sg.commutator_entry(b, p, q)).collect())
            .collect();
        let images: Vec<Vec<Rational>> = kernel
            .iter()
            .map(|u| {
                let mut w = vec![Rational::zero(); m];
                for (k, c) in u.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    for (dst, x) in w.iter_mut().zip(&columns[k]) {
                        if !x.is_zero() {
                            *dst += c * x;
                        }
                    }
                }
                w
            })
            .collect();
        let relations = linear_relations(&images, m);
        kernel = relations
            .iter()
            .map(|rel| {
                let mut v = vec![Rational::zero(); m];
                for (c, u) in rel.iter().zip(&kernel) {
                    if c.is_zero() {
                        continue;
                    }
                    for (dst, x) in v.iter_mut().zip(u) {
                        *dst += c * x;
                    }
                }
                v
            })
            .collect();
    }
    let n = alg.order();
    let mut echelon = Echelon::new(n * n);
    for u in &kernel {
        echelon.insert_vec(alg.combination(u).into_entries());
    }
    Ok(MatrixSpan::from_echelon(n, echelon))
}

/// A commutative algebra in coordinates over a fixed basis.
struct CoordinateAlgebra {
    dim: usize,
    table: Vec<Vec<Vec<Rational>>>,
}

impl CoordinateAlgebra {
    /// Multiplication table of `span` from pivot entries of basis products.
    fn from_span(span: &MatrixSpan) -> Self {
        let basis = span.basis();
        let pivots = pivot_positions(span);
        let r = basis.len();
        let n = span.order();
        let table = (0..r)
            .into_par_iter()
            .map(|a| {
                (0..r)
                    .map(|b| {
                        pivots
                            .iter()
                            .map(|&(p, q)| {
                                (0..n)
                                    .filter(|&k| !basis[a].get(p, k).is_zero())
                                    .map(|k| basis[a].get(p, k) * basis[b].get(k, q))
                                    .sum()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        CoordinateAlgebra { dim: r, table }
    }

    fn mul(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let c = xa * yb;
                for (dst, t) in out.iter_mut().zip(&self.table[a][b]) {
                    if !t.is_zero() {
                        *dst += &c * t;
                    }
                }
            }
        }
        out
    }

    fn block_dim(&self, e: &[Rational]) -> usize {
        let images: Vec<Vec<Rational>> = (0..self.dim)
            .map(|a| {
                let mut unit = vec![Rational::zero(); self.dim];
                unit[a] = Rational::one();
                self.mul(e, &unit)
            })
            .collect();
        rank(&images)
    }
}

fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn scale(a: &[Rational], c: &Rational) -> Vec<Rational> {
    a.iter().map(|x| x * c).collect()
}

fn is_zero(a: &[Rational]) -> bool {
    a.iter().all(Zero::is_zero)
}

/// Monic minimal polynomial of `x` in the block with unit `e`, as
/// coefficients `c_0, ..., c_k` with `c_k = 1`.
fn minimal_polynomial(alg: &CoordinateAlgebra, e: &[Rational], x: &[Rational]) -> Vec<Rational> {
    let mut powers = vec![e.to_vec()];
    loop {
        let next = alg.mul(x, powers.last().expect("nonempty"));
        powers.push(next);
        let relations = linear_relations(&powers, alg.dim);
        if let Some(rel) = relations.into_iter().next() {
            // the earlier powers are independent, so the newest one has a
            // nonzero coefficient
            let lead = rel.last().expect("nonempty").clone();
            return rel.iter().map(|c| c / &lead).collect();
        }
    }
}

fn eval(poly: &[Rational], t: &Rational) -> Rational {
    poly.iter().rev().fold(Rational::zero(), |acc, c| acc * t + c)
}

/// `poly / (t - root)` for a root of `poly`.
fn deflate(poly: &[Rational], root: &Rational) -> Vec<Rational> {
    let k = poly.len() - 1;
    let mut out = vec![Rational::zero(); k];
    let mut carry = Rational::zero();
    for i in (1..=k).rev() {
        carry = &poly[i] + carry * root;
        out[i - 1] = carry.clone();
    }
    out
}

/// `h(x)` in the block with unit `e`.
fn eval_in(alg: &CoordinateAlgebra, poly: &[Rational], e: &[Rational], x: &[Rational]) -> Vec<Rational> {
    let mut acc = vec![Rational::zero(); alg.dim];
    for c in poly.iter().rev() {
        acc = alg.mul(x, &acc);
        for (dst, ei) in acc.iter_mut().zip(e) {
            *dst += c * ei;
        }
    }
    acc
}

enum SplitOutcome {
    Split(Vec<Vec<Rational>>),
    NoInformation,
    Field,
}

/// One splitting attempt of block `e` (of dimension `dim`) with `x = e y`
/// where `y` has integer eigenvalues bounded by `bound`.
fn try_split(alg: &CoordinateAlgebra, e: &[Rational], y: &[Rational], bound: i64, dim: usize) -> SplitOutcome {
    let x = alg.mul(e, y);
    let f = minimal_polynomial(alg, e, &x);
    let degree = f.len() - 1;
    let roots: Vec<Rational> = (-bound..=bound)
        .map(|l| Rational::from_integer(BigInt::from(l)))
        .filter(|l| eval(&f, l).is_zero())
        .collect();
    if roots.is_empty() {
        return if degree == dim {
            SplitOutcome::Field
        } else {
            SplitOutcome::NoInformation
        };
    }
    if degree == 1 {
        return SplitOutcome::NoInformation;
    }
    let mut parts = Vec::new();
    let mut rest = e.to_vec();
    for l in &roots {
        let h = deflate(&f, l);
        let hl = eval(&h, l);
        if hl.is_zero() {
            return SplitOutcome::NoInformation;
        }
        let part = scale(&eval_in(alg, &h, e, &x), &(Rational::one() / hl));
        rest = sub(&rest, &part);
        parts.push(part);
    }
    if !is_zero(&rest) {
        parts.push(rest);
    }
    SplitOutcome::Split(parts)
}

/// Bound on the eigenvalues of the integer matrix `D y` where `D` clears
/// the denominators of `y`, returned with `D`.
fn integer_scaling(z: &MatrixSpan, y: &[Rational]) -> (Rational, Option<i64>) {
    let m = z.combination(y);
    let d = Rational::from_integer(common_denominator(m.entries()));
    let bound = (m.max_abs_row_sum() * &d).to_integer();
    (d, bound.to_i64().filter(|b| b.abs() <= ROOT_SCAN_LIMIT))
}

/// Primitive central idempotents of `alg`, given generators of `alg`.
///
/// `seed` drives the random centre elements; the output is sorted by rank
/// and then by entries, so it does not depend on the seed.
pub fn central_idempotents_with_generators(
    alg: &MatrixSpan,
    generators: &[ExactMatrix],
    seed: u64,
) -> Result<Vec<ExactMatrix>, IdempotentError> {
    let n = alg.order();
    let z = centre(alg, generators)?;
    let pivots = pivot_positions(&z);
    let identity = ExactMatrix::identity(n);
    if !z.contains(&identity).unwrap_or(false) {
        return Err(IdempotentError::NoIdentity);
    }
    let unit: Vec<Rational> = pivots.iter().map(|&(p, q)| identity.get(p, q).clone()).collect();
    let coords = CoordinateAlgebra::from_span(&z);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut pending = vec![unit.clone()];
    let mut done = Vec::new();
    while let Some(e) = pending.pop() {
        let dim = coords.block_dim(&e);
        if dim == 1 {
            done.push(e);
            continue;
        }
        let mut outcome = None;
        for _ in 0..RETRY_BUDGET {
            let y: Vec<Rational> = (0..coords.dim)
                .map(|_| Rational::from_integer(BigInt::from(rng.gen_range(-COEFF_RANGE..=COEFF_RANGE))))
                .collect();
            let (d, Some(bound)) = integer_scaling(&z, &y) else {
                continue;
            };
            match try_split(&coords, &e, &scale(&y, &d), bound, dim) {
                SplitOutcome::Split(parts) => {
                    outcome = Some(parts);
                    break;
                }
                SplitOutcome::Field => return Err(IdempotentError::NumberFieldBlock { dim }),
                SplitOutcome::NoInformation => {}
            }
        }
        match outcome {
            Some(parts) => pending.extend(parts),
            None => {
                return Err(IdempotentError::NonRationalSplit {
                    dim,
                    attempts: RETRY_BUDGET,
                })
            }
        }
    }

    // e_i e_j = delta_ij e_i and sum e_i = 1, in centre coordinates
    let mut total = vec![Rational::zero(); coords.dim];
    for (i, a) in done.iter().enumerate() {
        for (j, b) in done.iter().enumerate() {
            let ab = coords.mul(a, b);
            let ok = if i == j { ab == *a } else { is_zero(&ab) };
            if !ok {
                return Err(IdempotentError::Verification(format!(
                    "product of idempotents {i} and {j} is wrong"
                )));
            }
        }
        total = total.iter().zip(a).map(|(s, x)| s + x).collect();
    }
    if total != unit {
        return Err(IdempotentError::Verification("idempotents do not sum to the identity".into()));
    }

    let mut matrices: Vec<ExactMatrix> = done.iter().map(|c| z.combination(c)).collect();
    matrices.sort_by(|a, b| {
        a.trace()
            .cmp(&b.trace())
            .then_with(|| a.entries().cmp(b.entries()))
    });
    Ok(matrices)
}

/// Primitive central idempotents of a matrix algebra containing `I`,
/// using its own basis as generators.
pub fn central_idempotents_assoc(alg: &MatrixSpan, seed: u64) -> Result<Vec<ExactMatrix>, IdempotentError> {
    central_idempotents_with_generators(alg, &alg.basis(), seed)
}

/// Whether `e` is a nonzero idempotent matrix, checked by full products.
pub fn is_idempotent(e: &ExactMatrix) -> bool {
    !e.is_zero() && e.mul(e).map(|sq| sq == *e).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::alg_closure;
    use crate::rational::{int, ratio};

    fn unit(n: usize, i: usize, j: usize) -> ExactMatrix {
        ExactMatrix::unit(n, i, j)
    }

    #[test]
    fn identity_algebra() {
        let s = MatrixSpan::from_matrices(3, [&ExactMatrix::identity(3)]).unwrap();
        let e = central_idempotents_assoc(&s, 0).unwrap();
        assert_eq!(e, vec![ExactMatrix::identity(3)]);
    }

    #[test]
    fn full_matrix_algebra_is_simple() {
        let gens = [unit(2, 0, 1), unit(2, 1, 0)];
        let alg = alg_closure(&MatrixSpan::from_matrices(2, &gens).unwrap());
        assert_eq!(alg.dim(), 4);
        let e = central_idempotents_with_generators(&alg, &gens, 0).unwrap();
        assert_eq!(e, vec![ExactMatrix::identity(2)]);
    }

    #[test]
    fn diagonal_algebra_splits_into_units() {
        let gens = [ExactMatrix::identity(3), unit(3, 0, 0), unit(3, 1, 1)];
        let alg = alg_closure(&MatrixSpan::from_matrices(3, &gens).unwrap());
        let e = central_idempotents_assoc(&alg, 7).unwrap();
        assert_eq!(e.len(), 3);
        for (k, m) in e.iter().enumerate() {
            assert!(is_idempotent(m));
            assert_eq!(m.trace(), int(1), "idempotent {k}");
        }
    }

    #[test]
    fn group_algebra_of_cyclic_three() {
        // Q[C3] = Q + Q(zeta_3): the second block is a number field
        let c = ExactMatrix::from_int_rows(&[[0, 1, 0], [0, 0, 1], [1, 0, 0]]);
        let alg = alg_closure(&MatrixSpan::from_matrices(3, [&ExactMatrix::identity(3), &c]).unwrap());
        let err = central_idempotents_assoc(&alg, 0).unwrap_err();
        assert_eq!(err, IdempotentError::NumberFieldBlock { dim: 2 });
    }

    #[test]
    fn group_algebra_of_klein_four() {
        // Q[C2 x C2] = Q^4 with idempotents (1 +- a)(1 +- b)/4
        let a = ExactMatrix::from_int_rows(&[[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]);
        let b = ExactMatrix::from_int_rows(&[[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]);
        let alg = alg_closure(&MatrixSpan::from_matrices(4, [&ExactMatrix::identity(4), &a, &b]).unwrap());
        let e = central_idempotents_assoc(&alg, 3).unwrap();
        assert_eq!(e.len(), 4);
        let j = ExactMatrix::all_ones(4).scale(&ratio(1, 4));
        assert!(e.contains(&j));
        let mut sum = ExactMatrix::zeros(4);
        for m in &e {
            sum = &sum + m;
        }
        assert_eq!(sum, ExactMatrix::identity(4));
    }

    #[test]
    fn output_is_seed_independent() {
        let a = ExactMatrix::from_int_rows(&[[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]);
        let alg = alg_closure(&MatrixSpan::from_matrices(4, [&ExactMatrix::identity(4), &a]).unwrap());
        let first = central_idempotents_assoc(&alg, 0).unwrap();
        for seed in 1..5 {
            assert_eq!(central_idempotents_assoc(&alg, seed).unwrap(), first);
        }
    }

    #[test]
    fn polynomial_helpers() {
        // (t - 1)(t - 2) = t^2 - 3t + 2
        let f = vec![int(2), int(-3), int(1)];
        assert!(eval(&f, &int(2)).is_zero());
        assert_eq!(deflate(&f, &int(2)), vec![int(-1), int(1)]);
    }
}
