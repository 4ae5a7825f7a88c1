//! Jordan schemes built from admissible sign matrices.
//!
//! For `G` of rank `n` and an admissible `M`, the points are the triples
//! `(s, g, b)` with `s` in `C2 = {1, h}`, `g` in `G` and `b` in `{0, 1}`,
//! numbered `s * 2|G| + 2g + b`. The class matrices are
//!
//! ```text
//! sigma(s,t) = sum_g E[(1,g),(s,gt)] (x) L(g,gt) + sum_g E[(h,g),(hs,gt)] (x) L(gt,g)
//! ```
//!
//! with `L` one of `I2`, `J2`, `K2 = J2 - I2` chosen by `(s, t)` and the sign
//! `M[x][y]`; the primed variant multiplies every block by `K2` on the right.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::ExactMatrix;
use crate::rational::{int, Rational};
use crate::signs::{admissible, Group2, SignMatrix};
use crate::span::MatrixSpan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum C2 {
    One,
    H,
}

impl C2 {
    fn index(self) -> usize {
        match self {
            C2::One => 0,
            C2::H => 1,
        }
    }

    fn mul(self, other: C2) -> C2 {
        if self == other {
            C2::One
        } else {
            C2::H
        }
    }
}

/// Numbering of the `4|G|` points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointIndexing {
    group: Group2,
}

impl PointIndexing {
    pub fn new(group: Group2) -> Self {
        PointIndexing { group }
    }

    pub fn count(&self) -> usize {
        4 * self.group.order()
    }

    pub fn point(&self, s: C2, g: usize, b: usize) -> usize {
        s.index() * 2 * self.group.order() + 2 * g + b
    }

    pub fn decode(&self, p: usize) -> (C2, usize, usize) {
        let block = 2 * self.group.order();
        let s = if p / block == 0 { C2::One } else { C2::H };
        let rest = p % block;
        (s, rest / 2, rest % 2)
    }
}

/// Square 0/1 matrix as a bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ClassMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl ClassMatrix {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        ClassMatrix {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, p: usize, q: usize) -> bool {
        self.bits[p * self.words + q / 64] >> (q % 64) & 1 == 1
    }

    pub fn set(&mut self, p: usize, q: usize) {
        self.bits[p * self.words + q / 64] |= 1 << (q % 64);
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn row_sum(&self, p: usize) -> usize {
        self.bits[p * self.words..(p + 1) * self.words]
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|p| (p + 1..self.n).all(|q| self.get(p, q) == self.get(q, p)))
    }

    pub fn ones(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |p| (0..self.n).filter(move |&q| self.get(p, q)).map(move |q| (p, q)))
    }

    pub fn to_exact(&self) -> ExactMatrix {
        ExactMatrix::from_fn(self.n, |p, q| int(i64::from(self.get(p, q))))
    }

    /// The 0/1 matrix with ones where `exact` equals 1; `None` if some entry
    /// is neither 0 nor 1.
    pub fn from_exact(exact: &ExactMatrix) -> Option<Self> {
        use num_traits::{One, Zero};
        let n = exact.order();
        let mut out = ClassMatrix::new(n);
        for p in 0..n {
            for q in 0..n {
                let v = exact.get(p, q);
                if v.is_one() {
                    out.set(p, q);
                } else if !v.is_zero() {
                    return None;
                }
            }
        }
        Some(out)
    }
}

impl fmt::Debug for ClassMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ClassMatrix({}) [", self.n)?;
        for p in 0..self.n {
            let row: String = (0..self.n).map(|q| if self.get(p, q) { '1' } else { '.' }).collect();
            writeln!(f, "  {row}")?;
        }
        write!(f, "]")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomViolation {
    #[error("class 0 is not the identity matrix (entry ({p}, {q}))")]
    IdentityClass { p: usize, q: usize },
    #[error("class {class} is not symmetric at ({p}, {q})")]
    NotSymmetric { class: usize, p: usize, q: usize },
    #[error("classes do not partition the all-one matrix at ({p}, {q}) ({count} classes cover it)")]
    NotPartition { p: usize, q: usize, count: usize },
    #[error("class {class} is empty")]
    EmptyClass { class: usize },
    #[error("A_{i} * A_{j} is not constant on class {class}: differs at ({p}, {q})")]
    NotClosed {
        i: usize,
        j: usize,
        class: usize,
        p: usize,
        q: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("sign matrix is not admissible: condition fails at x={x}, y={y}, z={z}")]
    NotAdmissible { x: usize, y: usize, z: usize },
    #[error("axiom violation: {0}")]
    Axiom(#[from] AxiomViolation),
    #[error("invalid scheme: {0}")]
    Invalid(String),
    #[error("malformed scheme file at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
}

/// An ordered list of classes `A_0, ..., A_d` partitioning the all-one
/// matrix, together with the relation matrix `sum_i i * A_i`.
#[derive(Clone, PartialEq, Eq)]
pub struct JordanScheme {
    order: usize,
    classes: Vec<ClassMatrix>,
    relation: Vec<usize>,
}

impl fmt::Debug for JordanScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("JordanScheme")
            .field("order", &self.order)
            .field("classes", &self.classes.len())
            .finish()
    }
}

impl JordanScheme {
    /// Accepts any list of 0/1 classes that partitions `J` with no empty class.
    /// The remaining axioms are checked by [`verify_jordan_scheme`].
    pub fn from_classes(classes: Vec<ClassMatrix>) -> Result<Self, SchemeError> {
        let Some(first) = classes.first() else {
            return Err(SchemeError::Invalid("a scheme needs at least one class".into()));
        };
        let order = first.order();
        if let Some(bad) = classes.iter().position(|c| c.order() != order) {
            return Err(SchemeError::Invalid(format!(
                "class {bad} has order {} but class 0 has order {order}",
                classes[bad].order()
            )));
        }
        if let Some(class) = classes.iter().position(|c| c.count_ones() == 0) {
            return Err(AxiomViolation::EmptyClass { class }.into());
        }
        let mut relation = vec![usize::MAX; order * order];
        let mut cover = vec![0usize; order * order];
        for (i, c) in classes.iter().enumerate() {
            for (p, q) in c.ones() {
                relation[p * order + q] = i;
                cover[p * order + q] += 1;
            }
        }
        if let Some(pos) = cover.iter().position(|&c| c != 1) {
            return Err(AxiomViolation::NotPartition {
                p: pos / order,
                q: pos % order,
                count: cover[pos],
            }
            .into());
        }
        Ok(JordanScheme {
            order,
            classes,
            relation,
        })
    }

    /// Builds the classes from a relation matrix with values in `0..class_count`.
    pub fn from_relation_matrix(rows: &[Vec<usize>], class_count: usize) -> Result<Self, SchemeError> {
        let order = rows.len();
        let mut classes = vec![ClassMatrix::new(order); class_count];
        for (p, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(SchemeError::Invalid(format!(
                    "relation matrix row {p} has {} entries, expected {order}",
                    row.len()
                )));
            }
            for (q, &c) in row.iter().enumerate() {
                if c >= class_count {
                    return Err(SchemeError::Invalid(format!(
                        "relation value {c} at ({p}, {q}) is outside 0..{class_count}"
                    )));
                }
                classes[c].set(p, q);
            }
        }
        Self::from_classes(classes)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[ClassMatrix] {
        &self.classes
    }

    pub fn class(&self, i: usize) -> &ClassMatrix {
        &self.classes[i]
    }

    pub fn class_matrix(&self, i: usize) -> ExactMatrix {
        self.classes[i].to_exact()
    }

    pub fn class_matrices(&self) -> Vec<ExactMatrix> {
        self.classes.iter().map(ClassMatrix::to_exact).collect()
    }

    /// Index of the class containing `(p, q)`.
    pub fn relation(&self, p: usize, q: usize) -> usize {
        self.relation[p * self.order + q]
    }

    pub fn relation_slice(&self) -> &[usize] {
        &self.relation
    }

    /// Row sums of each class (taken at point 0; constant for regular classes).
    pub fn valencies(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.row_sum(0)).collect()
    }

    /// The span `CS` of the class matrices.
    pub fn span(&self) -> MatrixSpan {
        let mats = self.class_matrices();
        MatrixSpan::from_matrices(self.order, &mats).expect("classes share the scheme order")
    }

    /// The scheme with points relabeled by `perm` (point `p` becomes `perm[p]`)
    /// and classes relabeled by `class_perm` (class `i` becomes `class_perm[i]`).
    pub fn relabeled(&self, perm: &[usize], class_perm: &[usize]) -> JordanScheme {
        let n = self.order;
        let mut classes = vec![ClassMatrix::new(n); self.class_count()];
        for p in 0..n {
            for q in 0..n {
                classes[class_perm[self.relation(p, q)]].set(perm[p], perm[q]);
            }
        }
        JordanScheme::from_classes(classes).expect("relabeling preserves the partition")
    }
}

/// `relation_matrix_of(S)[p][q]` is the class index of `(p, q)`.
pub fn relation_matrix_of(scheme: &JordanScheme) -> Vec<Vec<usize>> {
    let n = scheme.order();
    (0..n).map(|p| (0..n).map(|q| scheme.relation(p, q)).collect()).collect()
}

/// `p[i][j][k]` with `A_i * A_j = sum_k p[i][j][k] A_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureConstants {
    classes: usize,
    table: Vec<Rational>,
}

impl StructureConstants {
    /// A table indexed `(i * d + j) * d + k`, for algebras not coming from a scheme.
    pub fn from_table(classes: usize, table: Vec<Rational>) -> Self {
        assert_eq!(table.len(), classes * classes * classes, "table must be d^3 long");
        StructureConstants { classes, table }
    }

    pub fn class_count(&self) -> usize {
        self.classes
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.table[(i * self.classes + j) * self.classes + k]
    }

    /// Coordinates of `A_i * A_j`.
    pub fn product_coordinates(&self, i: usize, j: usize) -> &[Rational] {
        let start = (i * self.classes + j) * self.classes;
        &self.table[start..start + self.classes]
    }

    /// Nonzero entries `(i, j, k, value)` in index order.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, usize, &Rational)> + '_ {
        let d = self.classes;
        self.table.iter().enumerate().filter_map(move |(idx, v)| {
            use num_traits::Zero;
            (!v.is_zero()).then(|| (idx / (d * d), idx / d % d, idx % d, v))
        })
    }
}

/// Checks that `A_0 = I`, every class is symmetric, the classes partition
/// `J`, and every Jordan product `A_i * A_j` lies in the span, returning the
/// structure constants.
///
/// Products are counted on the relation matrix: `(A_i A_j)[p][q]` is the
/// number of `r` with `R[p][r] = i` and `R[r][q] = j`.
pub fn verify_jordan_scheme(scheme: &JordanScheme) -> Result<StructureConstants, SchemeError> {
    let n = scheme.order();
    let d = scheme.class_count();
    let mut cover = vec![0usize; n * n];
    for c in scheme.classes() {
        for (p, q) in c.ones() {
            cover[p * n + q] += 1;
        }
    }
    if let Some(pos) = cover.iter().position(|&c| c != 1) {
        return Err(AxiomViolation::NotPartition {
            p: pos / n,
            q: pos % n,
            count: cover[pos],
        }
        .into());
    }
    for p in 0..n {
        for q in 0..n {
            if (scheme.relation(p, q) == 0) != (p == q) {
                return Err(AxiomViolation::IdentityClass { p, q }.into());
            }
        }
    }
    for (class, c) in scheme.classes().iter().enumerate() {
        for p in 0..n {
            for q in p + 1..n {
                if c.get(p, q) != c.get(q, p) {
                    return Err(AxiomViolation::NotSymmetric { class, p, q }.into());
                }
            }
        }
    }

    // neighbours[p][i] = points r with R[p][r] = i
    let mut neighbours = vec![vec![Vec::new(); d]; n];
    for (p, row) in neighbours.iter_mut().enumerate() {
        for r in 0..n {
            row[scheme.relation(p, r)].push(r);
        }
    }
    let count = |p: usize, q: usize, i: usize, j: usize| -> usize {
        neighbours[p][i].iter().filter(|&&r| scheme.relation(r, q) == j).count()
    };

    // doubled[i][j][k] = 2 * p_ij^k, fixed by the first cell of class k seen
    let mut doubled = vec![None::<usize>; d * d * d];
    for i in 0..d {
        for j in i..d {
            for p in 0..n {
                for q in 0..n {
                    let value = count(p, q, i, j) + count(p, q, j, i);
                    let k = scheme.relation(p, q);
                    let slot = &mut doubled[(i * d + j) * d + k];
                    match slot {
                        None => *slot = Some(value),
                        Some(v) if *v == value => {}
                        Some(_) => {
                            return Err(AxiomViolation::NotClosed { i, j, class: k, p, q }.into())
                        }
                    }
                }
            }
        }
    }
    let mut table = vec![Rational::from_integer(0.into()); d * d * d];
    for i in 0..d {
        for j in i..d {
            for k in 0..d {
                let v = doubled[(i * d + j) * d + k].expect("every class is nonempty");
                let value = Rational::new(v.into(), 2.into());
                table[(i * d + j) * d + k] = value.clone();
                table[(j * d + i) * d + k] = value;
            }
        }
    }
    Ok(StructureConstants { classes: d, table })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Block {
    I2,
    J2,
    K2,
}

impl Block {
    fn times_k2(self) -> Block {
        match self {
            Block::I2 => Block::K2,
            Block::J2 => Block::J2,
            Block::K2 => Block::I2,
        }
    }

    fn entry(self, a: usize, b: usize) -> bool {
        match self {
            Block::I2 => a == b,
            Block::J2 => true,
            Block::K2 => a != b,
        }
    }
}

/// Which σ matrix a class is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassLabel {
    pub s: C2,
    pub t: usize,
    pub primed: bool,
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.s {
            C2::One => "1",
            C2::H => "h",
        };
        let prime = if self.primed { "'" } else { "" };
        write!(f, "sigma{prime}({s},{})", self.t)
    }
}

/// Labels of the classes in the fixed construction order: `σ(1,1)`,
/// `σ'(1,1)`, `σ(1,t)` for `t != 1` ascending, then `σ(h,t)`, `σ'(h,t)`
/// interleaved with `t` ascending.
pub fn class_labels(group: Group2) -> Vec<ClassLabel> {
    let mut labels = vec![
        ClassLabel { s: C2::One, t: 0, primed: false },
        ClassLabel { s: C2::One, t: 0, primed: true },
    ];
    for t in 1..group.order() {
        labels.push(ClassLabel { s: C2::One, t, primed: false });
    }
    for t in 0..group.order() {
        labels.push(ClassLabel { s: C2::H, t, primed: false });
        labels.push(ClassLabel { s: C2::H, t, primed: true });
    }
    labels
}

/// The class matrix `σ(s,t)` (or `σ'(s,t)`) as a bitset. Total in `m`:
/// admissibility is not needed to build a single matrix.
pub fn sigma_class(group: Group2, m: &SignMatrix, s: C2, t: usize, primed: bool) -> ClassMatrix {
    let idx = PointIndexing::new(group);
    let mut out = ClassMatrix::new(idx.count());
    let block_for = |x: usize, y: usize| -> Block {
        let b = match s {
            C2::One if t == 0 => Block::I2,
            C2::One => Block::J2,
            C2::H => {
                if m.is_negative(x, y) {
                    Block::K2
                } else {
                    Block::I2
                }
            }
        };
        if primed {
            b.times_k2()
        } else {
            b
        }
    };
    let mut place = |row: usize, col: usize, block: Block| {
        for a in 0..2 {
            for b in 0..2 {
                if block.entry(a, b) {
                    out.set(row + a, col + b);
                }
            }
        }
    };
    for g in group.elements() {
        let gt = group.op(g, t);
        place(idx.point(C2::One, g, 0), idx.point(s, gt, 0), block_for(g, gt));
        place(idx.point(C2::H, g, 0), idx.point(C2::H.mul(s), gt, 0), block_for(gt, g));
    }
    out
}

pub fn build_sigma(group: Group2, m: &SignMatrix, s: C2, t: usize, primed: bool) -> ExactMatrix {
    sigma_class(group, m, s, t, primed).to_exact()
}

/// All `3|G| + 1` classes in construction order, without any checks.
pub fn build_classes(m: &SignMatrix) -> Vec<ClassMatrix> {
    let group = m.group();
    class_labels(group)
        .into_iter()
        .map(|l| sigma_class(group, m, l.s, l.t, l.primed))
        .collect()
}

/// Assembles the Jordan scheme of an admissible sign matrix.
pub fn build_scheme(m: &SignMatrix) -> Result<JordanScheme, SchemeError> {
    if let Some((x, y, z)) = m.admissibility_witness() {
        return Err(SchemeError::NotAdmissible { x, y, z });
    }
    debug_assert!(admissible(m));
    JordanScheme::from_classes(build_classes(m))
}

/// On-disk scheme format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SchemeFile {
    pub order: usize,
    pub class_count: usize,
    pub relation_matrix: Vec<Vec<usize>>,
}

impl SchemeFile {
    pub fn from_scheme(scheme: &JordanScheme) -> Self {
        SchemeFile {
            order: scheme.order(),
            class_count: scheme.class_count(),
            relation_matrix: relation_matrix_of(scheme),
        }
    }

    /// Validates shape, value range, symmetry and zero diagonal, then
    /// reconstructs the classes.
    pub fn to_scheme(&self) -> Result<JordanScheme, SchemeError> {
        let n = self.order;
        if self.relation_matrix.len() != n {
            return Err(SchemeError::Invalid(format!(
                "order is {n} but the relation matrix has {} rows",
                self.relation_matrix.len()
            )));
        }
        for (p, row) in self.relation_matrix.iter().enumerate() {
            if row.len() != n {
                return Err(SchemeError::Invalid(format!(
                    "row {p} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (q, &c) in row.iter().enumerate() {
                if c >= self.class_count {
                    return Err(SchemeError::Invalid(format!(
                        "value {c} at ({p}, {q}) is outside 0..{}",
                        self.class_count
                    )));
                }
                if (p == q) != (c == 0) {
                    return Err(SchemeError::Invalid(format!(
                        "class 0 must be exactly the diagonal; found {c} at ({p}, {q})"
                    )));
                }
                if self.relation_matrix[q][p] != c {
                    return Err(SchemeError::Invalid(format!(
                        "relation matrix is not symmetric at ({p}, {q})"
                    )));
                }
            }
        }
        JordanScheme::from_relation_matrix(&self.relation_matrix, self.class_count)
    }

    /// Stable text form with one relation-matrix row per line.
    pub fn to_json(&self) -> String {
        let rows: Vec<String> = self
            .relation_matrix
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(ToString::to_string).collect();
                format!("    [{}]", cells.join(", "))
            })
            .collect();
        format!(
            "{{\n  \"order\": {},\n  \"classCount\": {},\n  \"relationMatrix\": [\n{}\n  ]\n}}\n",
            self.order,
            self.class_count,
            rows.join(",\n")
        )
    }

    pub fn parse(text: &str) -> Result<Self, SchemeError> {
        serde_json::from_str(text).map_err(|e| SchemeError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }
}

pub fn write_scheme_json(scheme: &JordanScheme) -> String {
    SchemeFile::from_scheme(scheme).to_json()
}

pub fn read_scheme_json(text: &str) -> Result<JordanScheme, SchemeError> {
    SchemeFile::parse(text)?.to_scheme()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signs::examples;

    fn index_of(group: Group2, label: ClassLabel) -> usize {
        class_labels(group).iter().position(|&l| l == label).unwrap()
    }

    #[test]
    fn point_indexing_is_bijective() {
        let idx = PointIndexing::new(Group2::new(2).unwrap());
        let mut seen = vec![false; idx.count()];
        for s in [C2::One, C2::H] {
            for g in 0..4 {
                for b in 0..2 {
                    let p = idx.point(s, g, b);
                    assert!(!seen[p]);
                    seen[p] = true;
                    assert_eq!(idx.decode(p), (s, g, b));
                }
            }
        }
        assert!(seen.into_iter().all(|x| x));
    }

    #[test]
    fn sigma_identity_and_primed_identity() {
        let g = Group2::new(1).unwrap();
        let m = examples::order2();
        assert_eq!(build_sigma(g, &m, C2::One, 0, false), ExactMatrix::identity(8));
        let primed = sigma_class(g, &m, C2::One, 0, true);
        // K2 diagonal blocks: a permutation matrix swapping 2k and 2k+1
        for p in 0..8 {
            assert_eq!(primed.row_sum(p), 1);
            assert!(primed.get(p, p ^ 1));
        }
    }

    #[test]
    fn sigma_one_t_has_j2_blocks() {
        let g = Group2::new(1).unwrap();
        let c = sigma_class(g, &examples::order2(), C2::One, 1, false);
        assert!((0..8).all(|p| c.row_sum(p) == 2));
        assert_eq!(c, sigma_class(g, &examples::order2(), C2::One, 1, true));
    }

    #[test]
    fn class_counts_and_orders() {
        for (m, points, classes) in [
            (examples::order2(), 8, 7),
            (examples::order4(), 16, 13),
            (examples::order8(), 32, 25),
        ] {
            let s = build_scheme(&m).unwrap();
            assert_eq!(s.order(), points);
            assert_eq!(s.class_count(), classes);
            assert!(verify_jordan_scheme(&s).is_ok());
            assert_eq!(s.valencies().iter().sum::<usize>(), points);
        }
    }

    #[test]
    fn relation_matrix_of_trivial_partition() {
        let mut off = ClassMatrix::new(2);
        off.set(0, 1);
        off.set(1, 0);
        let mut id = ClassMatrix::new(2);
        id.set(0, 0);
        id.set(1, 1);
        let s = JordanScheme::from_classes(vec![id, off]).unwrap();
        assert_eq!(relation_matrix_of(&s), vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn rank_zero_scheme() {
        let m = SignMatrix::all_ones(Group2::new(0).unwrap());
        let s = build_scheme(&m).unwrap();
        assert_eq!((s.order(), s.class_count()), (4, 4));
        verify_jordan_scheme(&s).unwrap();
    }

    #[test]
    fn displayed_products_for_order_four() {
        let m = examples::order4();
        let g = m.group();
        let s = build_scheme(&m).unwrap();
        let p = verify_jordan_scheme(&s).unwrap();
        let one = index_of(g, ClassLabel { s: C2::One, t: 0, primed: false });
        let one_p = index_of(g, ClassLabel { s: C2::One, t: 0, primed: true });
        let mut expected = vec![int(0); s.class_count()];
        expected[one] = int(1);
        assert_eq!(p.product_coordinates(one_p, one_p), expected.as_slice());

        for t in 1..4 {
            let a = index_of(g, ClassLabel { s: C2::One, t, primed: false });
            let mut expected = vec![int(0); s.class_count()];
            expected[one] = int(2);
            expected[one_p] = int(2);
            assert_eq!(p.product_coordinates(a, a), expected.as_slice());
        }
        let half = crate::rational::half();
        for t in 0..4 {
            for v in 0..4 {
                if t == v {
                    continue;
                }
                let a = index_of(g, ClassLabel { s: C2::H, t, primed: false });
                let b = index_of(g, ClassLabel { s: C2::H, t: v, primed: false });
                let c = index_of(g, ClassLabel { s: C2::One, t: t ^ v, primed: false });
                let mut expected = vec![int(0); s.class_count()];
                // 2 σ(h,t) * σ(h,v) = sum E ⊗ (I2 + K2) = σ(1,tv), a single class
                expected[c] = half.clone();
                assert_eq!(p.product_coordinates(a, b), expected.as_slice());
            }
        }
    }

    #[test]
    fn non_admissible_matrix_is_rejected() {
        let bad = examples::order4().flipped(1, 2);
        assert!(matches!(build_scheme(&bad), Err(SchemeError::NotAdmissible { .. })));
        let s = JordanScheme::from_classes(build_classes(&bad)).unwrap();
        assert!(matches!(
            verify_jordan_scheme(&s),
            Err(SchemeError::Axiom(AxiomViolation::NotClosed { .. }))
        ));
    }

    #[test]
    fn json_round_trip_and_validation() {
        let s = build_scheme(&examples::order2()).unwrap();
        let text = write_scheme_json(&s);
        let back = read_scheme_json(&text).unwrap();
        assert_eq!(back, s);

        let asym = r#"{"order": 2, "classCount": 3, "relationMatrix": [[0, 1], [2, 0]]}"#;
        assert!(matches!(read_scheme_json(asym), Err(SchemeError::Invalid(_))));
        let diag = r#"{"order": 2, "classCount": 2, "relationMatrix": [[1, 0], [0, 0]]}"#;
        assert!(matches!(read_scheme_json(diag), Err(SchemeError::Invalid(_))));
        let range = r#"{"order": 2, "classCount": 2, "relationMatrix": [[0, 5], [5, 0]]}"#;
        assert!(matches!(read_scheme_json(range), Err(SchemeError::Invalid(_))));
        let broken = "{\n  \"order\": 2,\n  \"classCount\": \n}";
        match read_scheme_json(broken) {
            Err(SchemeError::Json { line, .. }) => assert!(line >= 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn exact_and_bitset_agree() {
        let s = build_scheme(&examples::order2()).unwrap();
        for i in 0..s.class_count() {
            let exact = s.class_matrix(i);
            assert_eq!(ClassMatrix::from_exact(&exact).as_ref(), Some(s.class(i)));
            assert!(exact.is_symmetric());
        }
    }
}
