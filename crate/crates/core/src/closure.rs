//! Associative and coherent closures, and the proper/improper test.
//!
//! `Alg(T)` is the smallest associative matrix algebra containing `T`;
//! `WL(T)` is the smallest coherent algebra containing `T`, computed by
//! two-dimensional Weisfeiler-Leman refinement of a colour matrix. A Jordan
//! scheme `S` is an association scheme iff `CS = Alg(CS)`, and improper iff
//! `CS = Sym(WL(CS))`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::echelon::Echelon;
use crate::matrix::{sym, ExactMatrix};
use crate::rational::{common_denominator, Rational};
use crate::scheme::{ClassMatrix, JordanScheme};
use crate::span::MatrixSpan;

/// Products computed per parallel batch in [`alg_closure`].
const BATCH: usize = 256;

/// A generator scaled to integers, stored as sparse rows.
struct Generator {
    rows: Vec<Vec<(usize, i64)>>,
}

impl Generator {
    fn from_exact(a: &ExactMatrix) -> Option<Self> {
        let n = a.order();
        let den = common_denominator(a.entries());
        let mut rows = vec![Vec::new(); n];
        for p in 0..n {
            for q in 0..n {
                let v = a.get(p, q);
                if v.is_zero() {
                    continue;
                }
                let scaled = (v * Rational::from_integer(den.clone())).to_integer();
                rows[p].push((q, scaled.to_i64()?));
            }
        }
        Some(Generator { rows })
    }
}

/// Dense integer matrix, kept primitive (entries with gcd 1).
#[derive(Clone)]
struct Word {
    n: usize,
    entries: Vec<i64>,
}

impl Word {
    fn times(&self, g: &Generator) -> Option<Word> {
        let n = self.n;
        let mut out = vec![0i64; n * n];
        for p in 0..n {
            let row = &self.entries[p * n..(p + 1) * n];
            let dst = &mut out[p * n..(p + 1) * n];
            for (r, &a) in row.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for &(q, b) in &g.rows[r] {
                    dst[q] = dst[q].checked_add(a.checked_mul(b)?)?;
                }
            }
        }
        let gcd = out.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        if gcd > 1 {
            for x in &mut out {
                *x /= gcd;
            }
        }
        Some(Word { n, entries: out })
    }

    fn to_rational(&self) -> Vec<Rational> {
        self.entries
            .iter()
            .map(|&x| Rational::from_integer(BigInt::from(x)))
            .collect()
    }

    fn from_exact(a: &ExactMatrix) -> Option<Word> {
        let den = Rational::from_integer(common_denominator(a.entries()));
        let entries = a
            .entries()
            .iter()
            .map(|v| (v * &den).to_integer().to_i64())
            .collect::<Option<Vec<i64>>>()?;
        Some(Word { n: a.order(), entries })
    }
}

/// Product of a frontier element and a generator, falling back to exact
/// rational arithmetic if the integer product would overflow.
fn product(frontier: &(Option<Word>, ExactMatrix), gen: &(Option<Generator>, ExactMatrix)) -> (Option<Word>, Vec<Rational>) {
    if let (Some(w), Some(g)) = (&frontier.0, &gen.0) {
        if let Some(p) = w.times(g) {
            let dense = p.to_rational();
            return (Some(p), dense);
        }
    }
    let exact = frontier.1.mul(&gen.1).expect("same order");
    (Word::from_exact(&exact), exact.into_entries())
}

/// `Alg(T)`: the span closed under right multiplication by a basis of `T`.
///
/// Every product of elements of `T` is a word in the basis, so the rounds
/// `V <- V + V T`, seeded with `V = T` and applied to the elements added in
/// the previous round, reach the algebra generated by `T`.
pub fn alg_closure(span: &MatrixSpan) -> MatrixSpan {
    let n = span.order();
    let gens: Vec<(Option<Generator>, ExactMatrix)> = span
        .basis()
        .into_iter()
        .map(|b| (Generator::from_exact(&b), b))
        .collect();
    let mut echelon: Echelon = span.echelon().clone();
    let mut frontier: Vec<(Option<Word>, ExactMatrix)> = span
        .basis()
        .into_iter()
        .map(|b| (Word::from_exact(&b), b))
        .collect();

    while !frontier.is_empty() {
        let pairs: Vec<(usize, usize)> = (0..frontier.len())
            .flat_map(|f| (0..gens.len()).map(move |g| (f, g)))
            .collect();
        let mut next = Vec::new();
        for batch in pairs.chunks(BATCH) {
            let candidates: Vec<(Option<Word>, Vec<Rational>)> = batch
                .par_iter()
                .filter_map(|&(f, g)| {
                    let (word, dense) = product(&frontier[f], &gens[g]);
                    (!echelon.contains(&dense)).then_some((word, dense))
                })
                .collect();
            for (word, dense) in candidates {
                if echelon.insert(&dense) {
                    next.push((word, ExactMatrix::from_entries(n, dense)));
                }
            }
        }
        frontier = next;
    }
    MatrixSpan::from_echelon(n, echelon)
}

/// `Alg(CS)` for a scheme.
pub fn scheme_algebra(scheme: &JordanScheme) -> MatrixSpan {
    alg_closure(&scheme.span())
}

/// Span of `B + B^T` over a basis of `span`.
pub fn sym_span(span: &MatrixSpan) -> MatrixSpan {
    span.sym_image()
}

/// A coherent configuration given by its colour matrix. Colours are
/// numbered by first occurrence in a row-major scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoherentConfiguration {
    n: usize,
    colors: Vec<usize>,
    cell_count: usize,
}

impl CoherentConfiguration {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn cell_count(&self) -> usize {
        self.cell_count
    }

    pub fn color(&self, p: usize, q: usize) -> usize {
        self.colors[p * self.n + q]
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    /// Basis matrices of the coherent algebra, one per colour.
    pub fn cells(&self) -> Vec<ClassMatrix> {
        let mut cells = vec![ClassMatrix::new(self.n); self.cell_count];
        for p in 0..self.n {
            for q in 0..self.n {
                cells[self.color(p, q)].set(p, q);
            }
        }
        cells
    }

    pub fn span(&self) -> MatrixSpan {
        let mut echelon = Echelon::new(self.n * self.n);
        for cell in self.cells() {
            echelon.insert_vec(cell.to_exact().into_entries());
        }
        MatrixSpan::from_echelon(self.n, echelon)
    }

    /// Span of `A + A^T` over the cells.
    pub fn sym_span(&self) -> MatrixSpan {
        let mut echelon = Echelon::new(self.n * self.n);
        for cell in self.cells() {
            echelon.insert_vec(sym(&cell.to_exact()).into_entries());
        }
        MatrixSpan::from_echelon(self.n, echelon)
    }

    /// Checks the coherence axioms directly: the diagonal is a union of
    /// cells, the transpose of a cell is a cell, and `#{r : c(p,r) = i,
    /// c(r,q) = j}` depends only on the colour of `(p, q)`.
    pub fn is_coherent(&self) -> bool {
        let n = self.n;
        let d = self.cell_count;
        let mut diagonal = vec![None::<bool>; d];
        let mut transpose = vec![None::<usize>; d];
        for p in 0..n {
            for q in 0..n {
                let c = self.color(p, q);
                if *diagonal[c].get_or_insert(p == q) != (p == q) {
                    return false;
                }
                if *transpose[c].get_or_insert(self.color(q, p)) != self.color(q, p) {
                    return false;
                }
            }
        }
        let mut profile: Vec<Option<Vec<u32>>> = vec![None; d];
        for p in 0..n {
            for q in 0..n {
                let mut counts = vec![0u32; d * d];
                for r in 0..n {
                    counts[self.color(p, r) * d + self.color(r, q)] += 1;
                }
                let slot = &mut profile[self.color(p, q)];
                match slot {
                    None => *slot = Some(counts),
                    Some(prev) if *prev == counts => {}
                    Some(_) => return false,
                }
            }
        }
        true
    }
}

/// Renames colours by first occurrence in row-major order.
fn canonical_rename<K: std::hash::Hash + Eq>(keys: Vec<K>) -> (Vec<usize>, usize) {
    let mut names: HashMap<K, usize> = HashMap::with_capacity(keys.len());
    let mut out = Vec::with_capacity(keys.len());
    for k in keys {
        let next = names.len();
        out.push(*names.entry(k).or_insert(next));
    }
    let count = names.len();
    (out, count)
}

/// Two-dimensional Weisfeiler-Leman stabilization of an `n x n` colour
/// matrix given row-major.
///
/// The diagonal is separated from the off-diagonal cells first. Each round
/// recolours `(p, q)` by its colour, the colour of `(q, p)` and the sorted
/// multiset of `(c(p,r), c(r,q))`, and stops once the number of colours no
/// longer grows.
pub fn wl_closure(n: usize, colors: &[usize]) -> CoherentConfiguration {
    assert_eq!(colors.len(), n * n, "colour matrix must be n x n");
    let initial: Vec<(usize, bool)> = (0..n * n).map(|i| (colors[i], i / n == i % n)).collect();
    let (mut current, mut count) = canonical_rename(initial);
    loop {
        let signatures: Vec<(usize, usize, Vec<u64>)> = (0..n * n)
            .into_par_iter()
            .map(|idx| {
                let (p, q) = (idx / n, idx % n);
                let mut pairs: Vec<u64> = (0..n)
                    .map(|r| ((current[p * n + r] as u64) << 32) | current[r * n + q] as u64)
                    .collect();
                pairs.sort_unstable();
                (current[idx], current[q * n + p], pairs)
            })
            .collect();
        let (next, next_count) = canonical_rename(signatures);
        let stable = next_count == count;
        current = next;
        count = next_count;
        if stable {
            break;
        }
    }
    CoherentConfiguration {
        n,
        colors: current,
        cell_count: count,
    }
}

/// WL closure of a scheme's relation matrix.
pub fn scheme_wl_closure(scheme: &JordanScheme) -> CoherentConfiguration {
    wl_closure(scheme.order(), scheme.relation_slice())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    AssociationScheme,
    ImproperJordan,
    ProperJordan,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::AssociationScheme => "AssociationScheme",
            Verdict::ImproperJordan => "ImproperJordan",
            Verdict::ProperJordan => "ProperJordan",
        };
        f.write_str(s)
    }
}

/// Dimensions behind a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClosureEvidence {
    pub dim_cs: usize,
    pub dim_alg: usize,
    pub dim_wl: usize,
    pub dim_sym_alg: usize,
    pub dim_sym_wl: usize,
    /// `CS = Sym(Alg(CS))`; sufficient for improperness.
    pub cs_equals_sym_alg: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Classification {
    pub verdict: Verdict,
    pub evidence: ClosureEvidence,
}

/// All closures of a scheme, for callers that need more than the verdict.
#[derive(Debug, Clone)]
pub struct SchemeClosures {
    pub cs: MatrixSpan,
    pub alg: MatrixSpan,
    pub wl: CoherentConfiguration,
    pub wl_span: MatrixSpan,
    pub sym_alg: MatrixSpan,
    pub sym_wl: MatrixSpan,
}

impl SchemeClosures {
    pub fn compute(scheme: &JordanScheme) -> Self {
        let cs = scheme.span();
        let (alg, wl) = rayon::join(|| alg_closure(&cs), || scheme_wl_closure(scheme));
        let wl_span = wl.span();
        let sym_alg = sym_span(&alg);
        let sym_wl = wl.sym_span();
        SchemeClosures {
            cs,
            alg,
            wl,
            wl_span,
            sym_alg,
            sym_wl,
        }
    }

    pub fn classification(&self) -> Classification {
        let verdict = if self.cs == self.alg {
            Verdict::AssociationScheme
        } else if self.cs == self.sym_wl {
            Verdict::ImproperJordan
        } else {
            Verdict::ProperJordan
        };
        Classification {
            verdict,
            evidence: ClosureEvidence {
                dim_cs: self.cs.dim(),
                dim_alg: self.alg.dim(),
                dim_wl: self.wl.cell_count(),
                dim_sym_alg: self.sym_alg.dim(),
                dim_sym_wl: self.sym_wl.dim(),
                cs_equals_sym_alg: self.cs == self.sym_alg,
            },
        }
    }
}

/// Association scheme iff `CS = Alg(CS)`; otherwise improper iff
/// `CS = Sym(WL(CS))`; otherwise proper. The scheme must already have
/// passed [`crate::scheme::verify_jordan_scheme`].
pub fn classify_scheme(scheme: &JordanScheme) -> Classification {
    SchemeClosures::compute(scheme).classification()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::scheme::build_scheme;
    use crate::signs::examples;

    fn closed_under_products(span: &MatrixSpan) -> bool {
        let basis = span.basis();
        basis
            .iter()
            .all(|a| basis.iter().all(|b| span.contains(&a.mul(b).unwrap()).unwrap()))
    }

    #[test]
    fn identity_is_an_algebra() {
        let s = MatrixSpan::from_matrices(3, [&ExactMatrix::identity(3)]).unwrap();
        assert_eq!(alg_closure(&s), s);
    }

    #[test]
    fn unit_matrices_generate_full_algebra() {
        let e01 = ExactMatrix::unit(2, 0, 1);
        let e10 = ExactMatrix::unit(2, 1, 0);
        let s = MatrixSpan::from_matrices(2, [&e01, &e10]).unwrap();
        assert_eq!(alg_closure(&s).dim(), 4);
        let nil = MatrixSpan::from_matrices(2, [&e01]).unwrap();
        assert_eq!(alg_closure(&nil).dim(), 1);
    }

    #[test]
    fn rational_generators() {
        let a = ExactMatrix::from_fn(3, |i, j| crate::rational::ratio((i + 2 * j) as i64, 3));
        let s = MatrixSpan::from_matrices(3, [&ExactMatrix::identity(3), &a]).unwrap();
        let alg = alg_closure(&s);
        assert!(closed_under_products(&alg));
        assert!(s.is_subspace_of(&alg).unwrap());
    }

    #[test]
    fn order_two_closures() {
        let s = build_scheme(&examples::order2()).unwrap();
        let c = SchemeClosures::compute(&s);
        assert!(closed_under_products(&c.alg));
        assert!(c.wl.is_coherent());
        assert!(c.alg.is_subspace_of(&c.wl_span).unwrap());
    }

    #[test]
    fn discrete_colouring_is_stable() {
        let n = 4;
        let colors: Vec<usize> = (0..n * n).collect();
        let wl = wl_closure(n, &colors);
        assert_eq!(wl.cell_count(), n * n);
        assert!(wl.is_coherent());
    }

    #[test]
    fn cycle_is_already_coherent() {
        // distance colouring of the 5-cycle: a symmetric association scheme
        let n = 5;
        let colors: Vec<usize> = (0..n * n)
            .map(|i| {
                let d = (i / n + n - i % n) % n;
                d.min(n - d)
            })
            .collect();
        let wl = wl_closure(n, &colors);
        assert_eq!(wl.cell_count(), 3);
        let classes = wl.cells();
        let scheme = JordanScheme::from_classes(classes).unwrap();
        assert_eq!(classify_scheme(&scheme).verdict, Verdict::AssociationScheme);
    }

    /// Thin scheme of `S3` with each class merged with its inverse: the
    /// transpositions stay single, the two 3-cycles merge.
    fn symmetrized_s3() -> JordanScheme {
        let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]];
        let index = |p: [usize; 3]| perms.iter().position(|&x| x == p).unwrap();
        let compose = |a: [usize; 3], b: [usize; 3]| [a[b[0]], a[b[1]], a[b[2]]];
        let inverse = |a: [usize; 3]| {
            let mut out = [0; 3];
            for (i, &x) in a.iter().enumerate() {
                out[x] = i;
            }
            out
        };
        let class_of = [0, 1, 2, 3, 4, 4];
        let n = 6;
        let rows: Vec<Vec<usize>> = (0..n)
            .map(|p| (0..n).map(|q| class_of[index(compose(inverse(perms[p]), perms[q]))]).collect())
            .collect();
        JordanScheme::from_relation_matrix(&rows, 5).unwrap()
    }

    #[test]
    fn symmetrized_nonabelian_group_is_improper() {
        let s = symmetrized_s3();
        crate::scheme::verify_jordan_scheme(&s).unwrap();
        let c = classify_scheme(&s);
        assert_eq!(c.verdict, Verdict::ImproperJordan);
        assert_eq!(c.evidence.dim_cs, 5);
        assert_eq!(c.evidence.dim_alg, 6);
        assert_eq!(c.evidence.dim_wl, 6);
    }

    #[test]
    fn sym_span_examples() {
        let i = ExactMatrix::identity(2);
        let s = MatrixSpan::from_matrices(2, [&i]).unwrap();
        assert_eq!(sym_span(&s), s);
        let e = MatrixSpan::from_matrices(2, [&ExactMatrix::unit(2, 0, 1)]).unwrap();
        let expected = MatrixSpan::from_matrices(
            2,
            [&ExactMatrix::from_int_rows(&[[0, 1], [1, 0]])],
        )
        .unwrap();
        assert_eq!(sym_span(&e), expected);
        assert_eq!(sym_span(&e).basis()[0].get(0, 1), &int(1));
    }
}
