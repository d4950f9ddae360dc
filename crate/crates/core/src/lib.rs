//! Simulator and analysis toolkit for (n,n)-threshold quantum secret sharing
//! built on analytic geometry.
//!
//! A dealer encodes one secret bit per round by picking, for every
//! participant, a GHZ basis state whose row in that participant's coefficient
//! table is a line from either the shared parallel family (`M0`) or the
//! pairwise-intersecting family (`M1`). Participants measure in the GHZ
//! basis, look their lines up, and decode the rank of the resulting judging
//! matrix.
//!
//! The state-vector and entropy code is generic over the floating-point
//! scalar (see [`scalar::Real`]); the aliases exported here fix it to `f64`,
//! which is what the protocol engine and CLI use.

pub mod adversary;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod protocol;
pub mod qstate;
pub mod report;
pub mod rng;
pub mod scalar;
pub mod tables;

pub use error::{Error, Result};
pub use geometry::{DecodeVerdict, JudgingMatrix, Line, LineRelation};
pub use qstate::{EntangledBasisIndex, GhzIndex};
pub use tables::{CoefficientTable, FamilyLabel, TableSet};

/// Double-precision complex amplitude.
pub type Amplitude = num_complex::Complex<f64>;
/// Double-precision state vector.
pub type StateVector = qstate::StateVector<f64>;
/// Double-precision secret coefficients `(a, b)`.
pub type SecretCoefficients = qstate::SecretCoefficients<f64>;

/// Single-precision state vector.
pub type StateVectorF32 = qstate::StateVector<f32>;
/// Single-precision secret coefficients.
pub type SecretCoefficientsF32 = qstate::SecretCoefficients<f32>;

/// Version string embedded in every output document.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
