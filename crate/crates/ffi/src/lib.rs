//! C ABI for the qpovm library.
//!
//! Every function returns a [`QpovmStatus`]; results are written through out
//! pointers, which are left untouched on failure. Measurements are held
//! behind the opaque [`QpovmMeasurement`] handle, created by
//! `qpovm_measurement_new`/`qpovm_measurement_along` and released with
//! `qpovm_measurement_free`. The generated header lives at
//! `include/qpovm.h`.

use qpovm::algebra::{Direction, PureState};
use qpovm::measurement::{MeasurementPair, Outcome};
use std::os::raw::c_char;

/// Result code for every FFI entry point.
#[repr(i32)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QpovmStatus {
    /// The call succeeded and all out parameters were written.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A probability argument lies outside `[0, 1]`.
    InvalidProbability = 2,
    /// Matrix inversion was requested for a singular matrix.
    SingularOperator = 3,
    /// A conditional state was requested for an impossible outcome.
    ZeroProbabilityOutcome = 4,
    /// Strengths at 0 or 1 admit no inverse operator.
    NonInvertibleMeasurement = 5,
    /// The outcome distribution is degenerate where a derivative is nonzero.
    DegenerateDistribution = 6,
    /// The requested estimate cannot be extracted from the given design.
    NonIdentifiable = 7,
    /// A structural precondition on an argument was violated.
    InvalidArgument = 8,
}

fn status_of(err: &qpovm::Error) -> QpovmStatus {
    match err {
        qpovm::Error::InvalidProbability { .. } => QpovmStatus::InvalidProbability,
        qpovm::Error::SingularOperator { .. } => QpovmStatus::SingularOperator,
        qpovm::Error::ZeroProbabilityOutcome { .. } => QpovmStatus::ZeroProbabilityOutcome,
        qpovm::Error::NonInvertibleMeasurement { .. } => QpovmStatus::NonInvertibleMeasurement,
        qpovm::Error::DegenerateDistribution { .. } => QpovmStatus::DegenerateDistribution,
        qpovm::Error::NonIdentifiable { .. } => QpovmStatus::NonIdentifiable,
        qpovm::Error::InvalidArgument(_) => QpovmStatus::InvalidArgument,
    }
}

fn checked_probability(value: f64) -> Result<f64, QpovmStatus> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(QpovmStatus::InvalidProbability)
    }
}

/// Opaque handle to a two-outcome measurement.
pub struct QpovmMeasurement {
    inner: MeasurementPair,
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn qpovm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Create a measurement along the z axis with switch probabilities `q`
/// (from `|0⟩`) and `p` (from `|1⟩`). On success writes a heap handle to
/// `out`; the caller owns it and must release it with
/// `qpovm_measurement_free`.
///
/// # Safety
///
/// `out` must be null or valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn qpovm_measurement_new(
    p: f64,
    q: f64,
    out: *mut *mut QpovmMeasurement,
) -> QpovmStatus {
    qpovm_measurement_along(p, q, 0.0, 0.0, out)
}

/// Create a measurement along the axis with polar angle `chi` and azimuth
/// `psi`. Ownership as in `qpovm_measurement_new`.
///
/// # Safety
///
/// `out` must be null or valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn qpovm_measurement_along(
    p: f64,
    q: f64,
    chi: f64,
    psi: f64,
    out: *mut *mut QpovmMeasurement,
) -> QpovmStatus {
    if out.is_null() {
        return QpovmStatus::NullPointer;
    }
    match MeasurementPair::along(p, q, Direction::new(chi, psi)) {
        Ok(inner) => {
            out.write(Box::into_raw(Box::new(QpovmMeasurement { inner })));
            QpovmStatus::Ok
        }
        Err(err) => status_of(&err),
    }
}

/// Release a handle. Null is accepted and ignored.
///
/// # Safety
///
/// `handle` must be null or a pointer obtained from
/// `qpovm_measurement_new`/`qpovm_measurement_along` that has not been
/// freed already.
#[no_mangle]
pub unsafe extern "C" fn qpovm_measurement_free(handle: *mut QpovmMeasurement) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Deviation of `E_m + E_m̄` from the identity in the max-abs norm.
///
/// # Safety
///
/// `handle` must be null or a live handle; `out` must be null or valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn qpovm_measurement_completeness_defect(
    handle: *const QpovmMeasurement,
    out: *mut f64,
) -> QpovmStatus {
    if handle.is_null() || out.is_null() {
        return QpovmStatus::NullPointer;
    }
    out.write((*handle).inner.completeness_defect());
    QpovmStatus::Ok
}

/// Outcome probabilities for the state `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
///
/// # Safety
///
/// `handle` must be null or a live handle; the out pointers must each be
/// null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qpovm_measurement_probabilities(
    handle: *const QpovmMeasurement,
    theta: f64,
    phi: f64,
    out_m: *mut f64,
    out_mbar: *mut f64,
) -> QpovmStatus {
    if handle.is_null() || out_m.is_null() || out_mbar.is_null() {
        return QpovmStatus::NullPointer;
    }
    let (p_m, p_mbar) = (*handle)
        .inner
        .probabilities(&PureState::from_angles(theta, phi));
    out_m.write(p_m);
    out_mbar.write(p_mbar);
    QpovmStatus::Ok
}

/// Bloch angles of the conditional state after observing the given outcome
/// (0 = keep, 1 = switch).
///
/// # Safety
///
/// `handle` must be null or a live handle; the out pointers must each be
/// null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qpovm_measurement_post_state(
    handle: *const QpovmMeasurement,
    theta: f64,
    phi: f64,
    outcome: u32,
    out_theta: *mut f64,
    out_phi: *mut f64,
) -> QpovmStatus {
    if handle.is_null() || out_theta.is_null() || out_phi.is_null() {
        return QpovmStatus::NullPointer;
    }
    let outcome = match outcome {
        0 => Outcome::M,
        1 => Outcome::MBar,
        _ => return QpovmStatus::InvalidArgument,
    };
    match (*handle)
        .inner
        .post_state(&PureState::from_angles(theta, phi), outcome)
    {
        Ok(post) => {
            let (t, f) = post.angles();
            out_theta.write(t);
            out_phi.write(f);
            QpovmStatus::Ok
        }
        Err(err) => status_of(&err),
    }
}

/// Probability that the two-step reversal protocol succeeds,
/// `(1−p)(1−q) + pq`, independent of the input state.
///
/// # Safety
///
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qpovm_reversal_success_probability(
    p: f64,
    q: f64,
    out: *mut f64,
) -> QpovmStatus {
    if out.is_null() {
        return QpovmStatus::NullPointer;
    }
    let (p, q) = match (checked_probability(p), checked_probability(q)) {
        (Ok(p), Ok(q)) => (p, q),
        (Err(status), _) | (_, Err(status)) => return status,
    };
    out.write(qpovm::reversal::reversal_success_probability(p, q));
    QpovmStatus::Ok
}

/// Shannon entropy (nats) of the matched/unmatched record distribution.
///
/// # Safety
///
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qpovm_reversal_entropy(p: f64, q: f64, out: *mut f64) -> QpovmStatus {
    if out.is_null() {
        return QpovmStatus::NullPointer;
    }
    let (p, q) = match (checked_probability(p), checked_probability(q)) {
        (Ok(p), Ok(q)) => (p, q),
        (Err(status), _) | (_, Err(status)) => return status,
    };
    out.write(qpovm::fisher::reversal_entropy(p, q));
    QpovmStatus::Ok
}

/// Monte Carlo estimate of the reversal success rate for the given input
/// state. Writes the empirical rate and the worst fidelity observed on any
/// successful trial (1 when no trial succeeded). Reproducible for a fixed
/// `seed` and `trials`.
///
/// # Safety
///
/// The out pointers must each be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qpovm_reversal_estimate_rate(
    theta: f64,
    phi: f64,
    p: f64,
    q: f64,
    trials: u64,
    seed: u64,
    out_rate: *mut f64,
    out_min_fidelity: *mut f64,
) -> QpovmStatus {
    if out_rate.is_null() || out_min_fidelity.is_null() {
        return QpovmStatus::NullPointer;
    }
    let state = PureState::from_angles(theta, phi);
    match qpovm::reversal::estimate_success_rate(&state, p, q, trials, seed) {
        Ok(stats) => {
            out_rate.write(stats.empirical_rate());
            out_min_fidelity.write(stats.min_success_fidelity);
            QpovmStatus::Ok
        }
        Err(err) => status_of(&err),
    }
}

/// Fisher information matrix of the outcome distribution with respect to
/// the state angles `(θ, φ)`, for a measurement along `(chi, psi)`.
///
/// # Safety
///
/// The out pointers must each be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qpovm_fisher_matrix(
    theta: f64,
    phi: f64,
    chi: f64,
    psi: f64,
    p: f64,
    q: f64,
    out_tt: *mut f64,
    out_tp: *mut f64,
    out_pp: *mut f64,
) -> QpovmStatus {
    if out_tt.is_null() || out_tp.is_null() || out_pp.is_null() {
        return QpovmStatus::NullPointer;
    }
    match qpovm::fisher::fisher_matrix(theta, phi, &Direction::new(chi, psi), p, q) {
        Ok(f) => {
            out_tt.write(f.f_tt);
            out_tp.write(f.f_tp);
            out_pp.write(f.f_pp);
            QpovmStatus::Ok
        }
        Err(err) => status_of(&err),
    }
}

/// Largest deviation found while cross-validating the three dilation
/// constructions (direct unitary, gate product, double-well propagator)
/// against each other and against the measurement statistics.
///
/// # Safety
///
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qpovm_dilation_max_deviation(
    p: f64,
    q: f64,
    tau: f64,
    nu: f64,
    out: *mut f64,
) -> QpovmStatus {
    if out.is_null() {
        return QpovmStatus::NullPointer;
    }
    match qpovm::dilation::verify_dilation(p, q, tau, nu) {
        Ok(report) => {
            out.write(report.max_deviation());
            QpovmStatus::Ok
        }
        Err(err) => status_of(&err),
    }
}
