//! Exact symbolic kernel for the n-th Weyl algebra and its ∂-degree completion.
//!
//! The crate is organised bottom-up:
//!
//! - [`weyl`]: sparse normal-ordered elements `x^a ∂^b`, multiplication,
//!   truncation by ∂-degree and the Fock action on commutative polynomials.
//! - [`lie`]: structure constants, Bernoulli numbers, the matrix `𝒞` and the
//!   Bernoulli-series embedding of a Lie algebra into the completed Weyl algebra.
//! - [`symmetrization`]: antisymmetric coefficient families, the generators
//!   they define, symmetrized products and the vacuum-projection checks.
//! - [`linalg`]: exact rank by fraction-free elimination.
//!
//! All arithmetic is over exact rationals. Indices in the Rust API are
//! zero-based; textual output uses one-based names (`x1`, `d1`, ...).

pub mod error;
pub mod lie;
pub mod linalg;
pub mod random;
pub mod rational;
pub mod symmetrization;
pub mod weyl;

pub use error::{Error, Result};
pub use lie::{
    bernoulli, cmatrix, cmatrix_power, derived_family, homomorphism_defect, iota, iota_all,
    series_coefficient, CMatrix, StructureConstants, Violation,
};
pub use rational::Rational;
pub use symmetrization::{
    build_generators, cancellation_check, cancellation_contributions, e_map, e_tilde, pi_project,
    random_family, span_dimension, span_probe, symmetrized_product, symmetrized_product_naive,
    symmetrized_product_to, theorem_check,
    CoefficientFamily, FamilyKey, GeneratorSet, SpanDimension, SymmetrizedProduct, TheoremReport,
    TruncationWarning, WordSpec,
};
pub use weyl::{Monomial, MultiIndex, Polynomial, TruncationOrder, WeylElement};
