//! Finite-truncation models of equivariant Dirac operators on the quantum
//! groups `SU_q(l+1)` and the odd quantum spheres `S_q^{2l+1}`.
//!
//! The crate builds the Gelfand-Tsetlin combinatorics, quantum Clebsch-Gordan
//! coefficients and left-multiplication operators explicitly, then uses them
//! to check spectral properties of candidate Dirac operators at finite
//! cutoffs: commutator boundedness, summability exponents, admissibility of
//! sign partitions, and the Fredholm index pairing on the spheres.

pub mod cgc;
pub mod dirac;
pub mod index;
pub mod qarith;
pub mod repn;
pub mod signgraph;
pub mod tableaux;
pub mod verify;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated a documented precondition.
    #[error("invalid argument: {0}")]
    Argument(String),
    /// Structured data (tableau, coordinates, config) failed validation.
    #[error("invalid data: {0}")]
    Invalid(String),
    /// A truncated computation has no interior vectors left.
    #[error("empty interior: {0}")]
    EmptyInterior(String),
    /// An eigenvalue landed inside the forbidden spectral gap.
    #[error("spectral gap violation: eigenvalue {eigenvalue} inside ({lo}, {hi}); truncation too small")]
    GapViolation { eigenvalue: f64, lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
