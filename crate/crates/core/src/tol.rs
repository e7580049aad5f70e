//! Centralized numerical tolerances.
//!
//! Two tiers cover almost everything: [`EPS_EXACT`] for single algebraic
//! identities evaluated in closed form, and [`EPS_NUM`] for quantities that
//! pass through a longer numerical pipeline (normalizations, optimizers,
//! accumulated products). The remaining constants mark domain boundaries
//! rather than rounding noise.

/// Tolerance for closed-form algebraic identities (unitarity checks,
/// operator equalities, exact probability formulas).
pub const EPS_EXACT: f64 = 1e-12;

/// Tolerance for composed numerics: quantities produced by several chained
/// operations, normalizations, or iterative refinement.
pub const EPS_NUM: f64 = 1e-10;

/// POVM completeness defect bound, `‖E_m + E_m̄ − I‖_max`. The effects are
/// assembled from squares of square roots, so they complete the identity to
/// a couple of ulps.
pub const EPS_COMPLETENESS: f64 = 1e-14;

/// Probabilities at or below this value are treated as true zeros; requesting
/// a conditional state for such an outcome is an error rather than a division
/// by rounding noise.
pub const PROB_FLOOR: f64 = 1e-14;

/// `p` or `q` within this distance of 0 or 1 counts as the endpoint itself,
/// where the measurement operators stop being invertible.
pub const ENDPOINT_EPS: f64 = 1e-12;

/// Squared-derivative floor below which the Fisher matrix of a degenerate
/// distribution is taken to be exactly zero instead of an error.
pub const DERIV_SQ_FLOOR: f64 = 1e-20;

/// Floor for Fisher information quantities: an outcome-probability product at
/// or below this marks a degenerate distribution, and a diagonal element at
/// or below this makes the corresponding Cramér-Rao bound +∞.
pub const INFO_FLOOR: f64 = 1e-14;

/// Step used by every central finite-difference cross-check.
pub const FD_STEP: f64 = 1e-6;
