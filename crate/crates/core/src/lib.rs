//! Projective rigidity of point-line configurations in the real
//! projective plane.
//!
//! The pipeline: an [`IncidenceGeometry`] is realized by homogeneous
//! coordinates ([`Realization`]), its incidence equations are linearized
//! into a rigidity matrix, and kernels and cokernels of that matrix give
//! infinitesimal motions and self-stresses. Symmetric configurations use
//! an orbit matrix over a finite correlation group, and flexes are traced
//! numerically by predictor-corrector continuation.

pub mod backend;
pub mod catalog;
pub mod config;
pub mod error;
pub mod flex;
pub mod geometry;
pub mod linalg;
pub mod matrix;
pub mod realization;
pub mod report;
pub mod rigidity;
pub mod scalar;
pub mod stress;
pub mod symmetry;

pub use error::{Error, Result};
pub use geometry::{ConfigurationSignature, IncidenceGeometry};
pub use matrix::Matrix;
pub use realization::{Chart, ProjectiveTransform, Realization};
pub use scalar::{Rational, Scalar};
