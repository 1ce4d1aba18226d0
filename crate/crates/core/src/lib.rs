//! Structure-preserving quantum data encodings.
//!
//! The crate is organized bottom-up:
//!
//! * [`linalg`]: dense complex matrices, Hermitian eigendecomposition and the
//!   matrix functions built on it.
//! * [`encodings`]: angle, amplitude, bit and generator (Lie) encodings,
//!   one-parameter-subgroup checks, generator recovery and function lifting.
//! * [`equivariance`]: finite groups, actions, representations, the
//!   equivariant-generator solver and the Klein-four classifier.
//! * [`metrics`]: trace, Hilbert–Schmidt and Bures distances, pull-back
//!   (semi-)metrics and Mahalanobis morphisms.
//! * [`metric_learning`]: the single-qubit re-uploading centroid classifier.
//! * [`tda`]: Vietoris–Rips persistence, bottleneck distance and stability
//!   experiments.

pub mod encodings;
pub mod equivariance;
pub mod error;
pub mod linalg;
pub mod metric_learning;
pub mod metrics;
pub mod optimize;
pub mod serde_matrix;
pub mod tda;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, DensityMatrix, HermitianMatrix, StateVector, UnitaryMatrix};
