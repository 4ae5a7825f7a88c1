//! Jordan schemes from sign matrices over elementary abelian 2-groups.
//!
//! The crate builds the schemes, checks the scheme axioms with exact
//! rational arithmetic, decides whether a scheme is an association scheme,
//! an improper (symmetrized) Jordan scheme or a proper one, and splits the
//! real adjacency Jordan algebra into simple components.

pub mod analysis;
pub mod cli;
pub mod closure;
pub mod composition;
pub mod echelon;
pub mod idempotents;
pub mod iso;
pub mod jordan;
pub mod matrix;
pub mod rational;
pub mod scheme;
pub mod search;
pub mod signs;
pub mod span;

pub use closure::{alg_closure, classify_scheme, sym_span, wl_closure, Classification, Verdict};
pub use matrix::{jordan_product, kronecker, sym, ExactMatrix, MatrixError};
pub use rational::Rational;
pub use scheme::{build_scheme, verify_jordan_scheme, JordanScheme, SchemeError, StructureConstants};
pub use signs::{admissible, normalize_signs, Group2, SignMatrix};
pub use span::{span_equal, MatrixSpan};
