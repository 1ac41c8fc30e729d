//! Optimal universal cloning of a qubit that arrives together with its
//! orthogonal partner.
//!
//! The library answers one question in three independent ways: given a single
//! unknown qubit |ψ⟩ accompanied by its antipode |ψ⊥⟩, how well can a machine
//! produce M approximate copies of |ψ⟩, uniformly over the Bloch sphere?
//!
//! * [`cloneropt`] poses the problem as a semidefinite fixed-point iteration
//!   over Choi operators, maximizing the mean single-clone fidelity, and
//!   certifies the maximum with a dual operator.
//! * [`cloneropt`] also carries the closed-form optimum: an isometry into the
//!   symmetric (Dicke) subspace whose coefficients are linear in the clone
//!   index, reaching fidelity (1 + √((M+2)/(3M)))/2.
//! * [`pdcsim`] realizes the same transformation physically with two-mode
//!   squeezing (parametric down-conversion) and checks it against a truncated
//!   Fock-space propagator obtained by exact matrix exponentiation.
//!
//! Supporting layers: [`matcore`] (dense complex linear algebra), [`su2kit`]
//! (Bloch-sphere parameterization and exact Haar moments), and [`symspace`]
//! (Dicke states and symmetric-subspace bookkeeping).

pub mod cloneropt;
pub mod matcore;
pub mod pdcsim;
pub mod su2kit;
pub mod symspace;

use thiserror::Error;

/// Errors shared by every module in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A matrix operation needed a square matrix.
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    /// Two operands (or a matrix and a requested factorization) disagree in shape.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// An operation defined only for Hermitian input received something else.
    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    /// An operation defined only for positive semidefinite input found a
    /// significantly negative eigenvalue.
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },
    /// A size parameter fell outside the supported range.
    #[error("{name} = {value} outside supported range {min}..={max}")]
    SizeOutOfRange {
        name: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },
    /// An index fell outside the object it addresses.
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    /// A vector that must be normalized was not.
    #[error("vector is not normalized (|1 - norm^2| = {deviation:.3e})")]
    NotNormalized { deviation: f64 },
    /// A matrix claimed as an isometry fails V†V = 1.
    #[error("matrix is not an isometry (max |V†V - 1| = {deviation:.3e})")]
    NotIsometry { deviation: f64 },
    /// An argument violated a documented domain restriction.
    #[error("domain error: {0}")]
    Domain(String),
    /// The fixed-point iteration ran out of iterations. Carries the last
    /// iterate so callers can still report it.
    #[error(
        "fixed-point iteration did not converge within {iterations} iterations \
             (last fidelity {fidelity:.12})"
    )]
    NonConvergence {
        iterations: usize,
        fidelity: f64,
        last: Box<cloneropt::Optimum>,
    },
    /// The Fock-space cutoff is too small for the requested gain.
    #[error(
        "insufficient Fock cutoff {cutoff} for gain {gamma}: \
             estimated truncation tail {tail:.3e} exceeds {limit:.1e}"
    )]
    InsufficientCutoff {
        gamma: f64,
        cutoff: usize,
        tail: f64,
        limit: f64,
    },
    /// A scan was requested over an empty grid.
    #[error("empty grid: {0}")]
    EmptyGrid(String),
    /// A numeric check that must hold by construction failed, indicating a
    /// numerical breakdown (for example loss of unitarity).
    #[error("numerical check failed: {0}")]
    NumericalCheck(String),
}

pub type Result<T> = std::result::Result<T, Error>;
