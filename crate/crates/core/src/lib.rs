//! Exact Lie models of rational homotopy types.

pub mod dgla;
pub mod error;
pub mod field;
pub mod homology;
pub mod lie;
pub mod linalg;
pub mod models;
pub mod morphism;
pub mod perturbation;
pub mod presentation;

pub use error::{Error, Result};
pub use field::Field;

/// Arbitrary-precision rationals: the scalar used by everything user-facing.
pub type Scalar = num_rational::BigRational;

pub type LieElement = lie::LieElement<Scalar>;
pub type FreeLie = lie::FreeLie<Scalar>;
pub type Derivation = dgla::Derivation<Scalar>;
pub type TruncatedModel = dgla::TruncatedModel<Scalar>;
pub type GlaPresentation = presentation::GlaPresentation<Scalar>;
pub type BigradedModel = models::BigradedModel<Scalar>;
pub type LieMorphism = morphism::LieMorphism<Scalar>;
