//! Decomposition of `RS` into simple components.
//!
//! The primitive central idempotents of `Alg(CS)` are computed in the
//! associative algebra. When they all lie in `RS` they are central in the
//! Jordan sense and `RS` is the direct sum of the `e_i * RS`. Components of
//! dimension 1 are `R`; larger ones are recognized as spin factors from an
//! orthogonal basis of their trace-zero part.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::closure::alg_closure;
use crate::echelon::{rank, Echelon};
use crate::idempotents::{central_idempotents_with_generators, IdempotentError};
use crate::jordan::{JAlgElement, JordanAlgebra};
use crate::matrix::ExactMatrix;
use crate::rational::{rational_sqrt, to_fraction_string, Rational};
use crate::scheme::{verify_jordan_scheme, JordanScheme, SchemeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Idempotent(#[from] IdempotentError),
    #[error("central idempotent {index} of Alg(CS) is not in RS")]
    IdempotentOutsideSpan { index: usize },
    #[error("idempotent {index} does not commute with RS")]
    NotCentral { index: usize },
    #[error("decomposition check failed: {0}")]
    Verification(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComponentType {
    Real,
    /// `R (+)_f R^m`.
    Spin(usize),
    Unidentified,
}

impl fmt::Display for ComponentType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentType::Real => f.write_str("Real"),
            ComponentType::Spin(m) => write!(f, "Spin({m})"),
            ComponentType::Unidentified => f.write_str("Unidentified"),
        }
    }
}

/// Basis `a_1, ..., a_m` of the trace-zero part of a component with
/// `a_i * a_j = delta_ij * norms[i] * e`. When every norm is a rational
/// square the basis is rescaled so that all norms are 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinWitness {
    pub basis: Vec<JAlgElement>,
    pub norms: Vec<Rational>,
    pub normalized: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub idempotent: JAlgElement,
    pub dim: usize,
    pub kind: ComponentType,
    pub witness: Option<SpinWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraDecomposition {
    pub dim_rs: usize,
    pub dim_alg: usize,
    pub components: Vec<Component>,
}

impl AlgebraDecomposition {
    pub fn idempotents(&self) -> Vec<&JAlgElement> {
        self.components.iter().map(|c| &c.idempotent).collect()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.dim).collect()
    }

    /// For example `8×Real + Spin(4)`, grouping equal types in order.
    pub fn summary(&self) -> String {
        let mut groups: Vec<(ComponentType, usize)> = Vec::new();
        for c in &self.components {
            match groups.iter_mut().find(|(t, _)| *t == c.kind) {
                Some((_, count)) => *count += 1,
                None => groups.push((c.kind, 1)),
            }
        }
        groups
            .iter()
            .map(|(t, count)| if *count == 1 { t.to_string() } else { format!("{count}×{t}") })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn report(&self) -> AnalysisReport {
        AnalysisReport {
            dim_rs: self.dim_rs,
            dim_alg: self.dim_alg,
            idempotents: self
                .components
                .iter()
                .map(|c| c.idempotent.coords().iter().map(to_fraction_string).collect())
                .collect(),
            components: self
                .components
                .iter()
                .map(|c| ComponentReport {
                    dim: c.dim,
                    kind: c.kind.to_string(),
                })
                .collect(),
            summary: self.summary(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub dim: usize,
    #[serde(rename = "type")]
    pub kind: String,
}

/// The analysis report written by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    #[serde(rename = "dimRS")]
    pub dim_rs: usize,
    #[serde(rename = "dimAlg")]
    pub dim_alg: usize,
    pub idempotents: Vec<Vec<String>>,
    pub components: Vec<ComponentReport>,
    pub summary: String,
}

/// Coordinates over the classes of a matrix constant on every class.
pub fn scheme_coordinates(scheme: &JordanScheme, m: &ExactMatrix) -> Option<JAlgElement> {
    let n = scheme.order();
    let mut coords: Vec<Option<Rational>> = vec![None; scheme.class_count()];
    for p in 0..n {
        for q in 0..n {
            let slot = &mut coords[scheme.relation(p, q)];
            match slot {
                None => *slot = Some(m.get(p, q).clone()),
                Some(v) if v == m.get(p, q) => {}
                Some(_) => return None,
            }
        }
    }
    coords.into_iter().collect::<Option<Vec<_>>>().map(JAlgElement)
}

/// Dimension of `e * RS`, the rank of `L(e)`.
pub fn component_dim(algebra: &JordanAlgebra, e: &JAlgElement) -> usize {
    rank(&algebra.left_mult(e))
}

/// Type of the component `e * RS` for a central idempotent `e`.
pub fn identify_component(algebra: &JordanAlgebra, e: &JAlgElement) -> (ComponentType, Option<SpinWitness>) {
    let d = algebra.dim();
    let images: Vec<JAlgElement> = (0..d)
        .map(|j| algebra.product(e, &JAlgElement::basis(d, j)))
        .collect();
    let dim = rank(&images.iter().map(|v| v.0.clone()).collect::<Vec<_>>());
    if dim == 1 {
        return (ComponentType::Real, None);
    }
    if dim < 3 {
        return (ComponentType::Unidentified, None);
    }

    let tau_e = algebra.trace_pairing(e, e);
    if tau_e.is_zero() {
        return (ComponentType::Unidentified, None);
    }
    // independent trace-zero parts, in basis order
    let mut seen = Echelon::new(d);
    let mut zero_parts = Vec::new();
    for v in &images {
        let t = algebra.trace_pairing(v, e) / &tau_e;
        let v0 = v.sub(&e.scale(&t));
        if seen.insert(&v0.0) {
            zero_parts.push(v0);
        }
    }
    if zero_parts.len() != dim - 1 {
        return (ComponentType::Unidentified, None);
    }

    let mut basis: Vec<JAlgElement> = Vec::new();
    let mut pairings: Vec<Rational> = Vec::new();
    for w in zero_parts {
        let mut a = w.clone();
        for (b, tb) in basis.iter().zip(&pairings) {
            let c = algebra.trace_pairing(&w, b) / tb;
            a = a.sub(&b.scale(&c));
        }
        let ta = algebra.trace_pairing(&a, &a);
        if ta.is_zero() {
            return (ComponentType::Unidentified, None);
        }
        basis.push(a);
        pairings.push(ta);
    }

    let zero = JAlgElement::zero(d);
    let mut norms = Vec::new();
    for (i, a) in basis.iter().enumerate() {
        for b in &basis[i + 1..] {
            if algebra.product(a, b) != zero {
                return (ComponentType::Unidentified, None);
            }
        }
        let sq = algebra.square(a);
        let Some(c) = multiple_of(&sq, e) else {
            return (ComponentType::Unidentified, None);
        };
        if !c.is_positive() {
            return (ComponentType::Unidentified, None);
        }
        norms.push(c);
    }

    let roots: Option<Vec<Rational>> = norms.iter().map(rational_sqrt).collect();
    let witness = match roots {
        Some(roots) => SpinWitness {
            basis: basis
                .iter()
                .zip(&roots)
                .map(|(a, r)| a.scale(&(Rational::from_integer(1.into()) / r)))
                .collect(),
            norms: vec![Rational::from_integer(1.into()); basis.len()],
            normalized: true,
        },
        None => SpinWitness {
            basis,
            norms,
            normalized: false,
        },
    };
    (ComponentType::Spin(dim - 1), Some(witness))
}

/// `c` with `x = c e`, if any.
fn multiple_of(x: &JAlgElement, e: &JAlgElement) -> Option<Rational> {
    let pos = e.0.iter().position(|v| !v.is_zero())?;
    let c = &x.0[pos] / &e.0[pos];
    (*x == e.scale(&c)).then_some(c)
}

/// Checks a spin witness against the component it came from.
pub fn verify_spin_witness(algebra: &JordanAlgebra, e: &JAlgElement, w: &SpinWitness) -> bool {
    let zero = JAlgElement::zero(algebra.dim());
    w.basis.iter().enumerate().all(|(i, a)| {
        algebra.product(e, a) == *a
            && w.basis.iter().enumerate().all(|(j, b)| {
                let ab = algebra.product(a, b);
                if i == j {
                    ab == e.scale(&w.norms[i])
                } else {
                    ab == zero
                }
            })
    })
}

/// Full decomposition of `RS`.
///
/// Components are sorted by dimension and then by idempotent coordinates.
pub fn decompose(scheme: &JordanScheme, seed: u64) -> Result<AlgebraDecomposition, AnalysisError> {
    let constants = verify_jordan_scheme(scheme)?;
    let algebra = JordanAlgebra::new(constants);
    let generators = scheme.class_matrices();
    let alg = alg_closure(&scheme.span());
    let matrices = central_idempotents_with_generators(&alg, &generators, seed)?;

    let mut idempotents = Vec::with_capacity(matrices.len());
    for (index, m) in matrices.iter().enumerate() {
        let e = scheme_coordinates(scheme, m).ok_or(AnalysisError::IdempotentOutsideSpan { index })?;
        idempotents.push(e);
    }
    let unit = algebra.unit();
    let zero = JAlgElement::zero(algebra.dim());
    let mut total = zero.clone();
    for (i, a) in idempotents.iter().enumerate() {
        for (j, b) in idempotents.iter().enumerate() {
            let ab = algebra.product(a, b);
            let expected = if i == j { a } else { &zero };
            if ab != *expected {
                return Err(AnalysisError::Verification(format!(
                    "e_{i} * e_{j} is not {}",
                    if i == j { "e_i" } else { "0" }
                )));
            }
        }
        if !algebra.is_central(a) {
            return Err(AnalysisError::NotCentral { index: i });
        }
        total = total.add(a);
    }
    if total != unit {
        return Err(AnalysisError::Verification("idempotents do not sum to A_0".into()));
    }

    let mut components: Vec<Component> = idempotents
        .into_iter()
        .map(|e| {
            let dim = component_dim(&algebra, &e);
            let (kind, witness) = identify_component(&algebra, &e);
            Component {
                idempotent: e,
                dim,
                kind,
                witness,
            }
        })
        .collect();
    components.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.idempotent.0.cmp(&b.idempotent.0)));
    let total_dim: usize = components.iter().map(|c| c.dim).sum();
    if total_dim != algebra.dim() {
        return Err(AnalysisError::Verification(format!(
            "component dimensions sum to {total_dim}, not {}",
            algebra.dim()
        )));
    }
    Ok(AlgebraDecomposition {
        dim_rs: algebra.dim(),
        dim_alg: alg.dim(),
        components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::scheme::build_scheme;
    use crate::signs::examples;

    #[test]
    fn order_eight_decomposition() {
        let s = build_scheme(&examples::order2()).unwrap();
        let dec = decompose(&s, 0).unwrap();
        assert_eq!(dec.dims().iter().sum::<usize>(), 7);
        assert_eq!(dec.dim_alg, 8);
    }

    #[test]
    fn j16_decomposition() {
        let s = build_scheme(&examples::order4()).unwrap();
        let dec = decompose(&s, 0).unwrap();
        assert_eq!(dec.dims(), vec![1, 1, 1, 1, 1, 1, 1, 1, 5]);
        assert_eq!(dec.summary(), "8×Real + Spin(4)");
        let mut e9 = vec![int(0); 13];
        e9[0] = ratio(1, 2);
        e9[1] = ratio(-1, 2);
        assert!(dec.idempotents().iter().any(|e| e.0 == e9));
        let algebra = JordanAlgebra::new(verify_jordan_scheme(&s).unwrap());
        let spin = dec.components.last().unwrap();
        let w = spin.witness.as_ref().unwrap();
        assert!(w.normalized);
        assert!(verify_spin_witness(&algebra, &spin.idempotent, w));
    }

    #[test]
    fn summary_grouping() {
        let comp = |dim, kind| Component {
            idempotent: JAlgElement(vec![]),
            dim,
            kind,
            witness: None,
        };
        let dec = AlgebraDecomposition {
            dim_rs: 0,
            dim_alg: 0,
            components: vec![comp(1, ComponentType::Real), comp(1, ComponentType::Real), comp(5, ComponentType::Spin(4))],
        };
        assert_eq!(dec.summary(), "2×Real + Spin(4)");
    }
}
