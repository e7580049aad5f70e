//! Simulation toolkit for generalized partial measurements on a single qubit.
//!
//! A generalized partial measurement lets both basis states of a qubit switch
//! (tunnel) during the measurement window: `|1⟩` switches with probability `p`
//! and `|0⟩` with probability `q`. The two possible records, "no switch" (`m`)
//! and "switch" (`m̄`), define a two-outcome POVM. This crate builds that POVM
//! for any `(p, q)` and any measurement axis, and provides everything needed
//! to study it numerically:
//!
//! - [`measurement`]: operator construction, outcome statistics, post-measurement
//!   states, and seeded outcome sampling.
//! - [`reversal`]: the two-step probabilistic protocol that undoes a measurement,
//!   its closed-form success rate, and a numerical search showing that no fixed
//!   rotation can undo the failure branch unless `p = q`.
//! - [`fisher`]: Fisher information of the outcome distribution over the state
//!   angles, Cramér-Rao bounds, the information/reversibility entropy trade-off,
//!   and a maximum-likelihood tomography estimator.
//! - [`dilation`]: realization of the POVM as a unitary on system ⊗ ancilla,
//!   its two-qubit gate decomposition, and a double-well pulse implementation,
//!   all cross-checked against each other.
//! - [`algebra`]: fixed-size complex 2×2 / 4×4 operators, qubit states, and
//!   Bloch-sphere directions shared by every module.
//! - [`cli`]: the `qpovm` command-line interface emitting reproducible CSV.
//!
//! Every random process is driven by explicitly seeded, splittable generators
//! ([`rng`]), so identical inputs give identical outputs regardless of the
//! degree of parallelism.

#[allow(clippy::needless_range_loop)]
pub mod algebra;
pub mod cli;
pub mod dilation;
pub mod fisher;
pub mod measurement;
pub mod reversal;
pub mod rng;
pub mod tol;

pub use algebra::{Direction, Op2, Op4, PureState, C64};
pub use measurement::{MeasurementPair, Outcome};

/// Unified error type for every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A probability argument lies outside `[0, 1]`.
    #[error("probability {name} = {value} is outside [0, 1]")]
    InvalidProbability { name: &'static str, value: f64 },
    /// Matrix inversion was requested for a singular matrix.
    #[error("matrix is singular (|det| = {det:.3e})")]
    SingularOperator { det: f64 },
    /// A conditional state was requested for an outcome that cannot occur.
    #[error("outcome {outcome} has probability {prob:.3e}, below the zero threshold")]
    ZeroProbabilityOutcome {
        outcome: measurement::Outcome,
        prob: f64,
    },
    /// Measurement operators at `p` or `q` ∈ {0, 1} have no inverse.
    #[error("measurement with p = {p} and q = {q} is not invertible")]
    NonInvertibleMeasurement { p: f64, q: f64 },
    /// The outcome distribution is deterministic while a derivative is nonzero,
    /// so the Fisher information diverges.
    #[error(
        "degenerate outcome distribution (P_m P_mbar = {product:.3e}) with a nonzero derivative"
    )]
    DegenerateDistribution { product: f64 },
    /// The requested estimate cannot be extracted from the given design.
    #[error("state parameters are not identifiable: {reason}")]
    NonIdentifiable { reason: &'static str },
    /// A structural precondition on an argument was violated.
    #[error("{0}")]
    InvalidArgument(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
