//! Probabilistic reversal of a generalized partial measurement.
//!
//! For `p, q ∉ {0, 1}` both measurement operators are invertible, and their
//! inverses are again measurement operators of the same family conjugated by
//! the bit flip:
//!
//! ```text
//! M_m⁻¹ = X M_m X / √((1−p)(1−q))        M_m̄⁻¹ = X M_m̄ X / √(pq)
//! ```
//!
//! That makes an exactly-two-measurements-deep reversal protocol possible:
//! measure, apply `X`, measure again. When the two records agree, a final `X`
//! restores the input state perfectly, because `X M_x X M_x` is proportional
//! to the identity. The success probability is `(1−p)(1−q) + pq`, independent
//! of the state. When the records disagree the run has failed, and the qubit
//! is left in a state that still depends on the input ([`fail_path_state`]).
//!
//! No fixed unitary correction can rescue the failure branch:
//! [`deterministic_reversal_search`] maximizes the worst-case recovery
//! fidelity of `R_z(α)R_y(β)R_z(γ)` applied to the flip-completed fail state
//! over a deterministic sample of input states, and the optimum reaches 1
//! only on the line `p = q` (where it sits at `α = β = γ = 0`).

use crate::algebra::{euler_zyz, pauli_x, rotation_for_direction, Op2, PureState};
use crate::measurement::{MeasurementPair, Outcome};
use crate::rng::parallel_trials;
use crate::tol::{ENDPOINT_EPS, PROB_FLOOR};
use crate::{Error, Result};

use std::f64::consts::TAU;

/// Everything observed in one run of the reversal protocol.
#[derive(Clone, Copy, Debug)]
pub struct ReversalRecord {
    pub first_outcome: Outcome,
    pub second_outcome: Outcome,
    /// True exactly when the two outcomes agree.
    pub success: bool,
    /// The state of the qubit after the protocol (including the closing flip
    /// on success).
    pub final_state: PureState,
    /// Probability of this outcome path for the given input state.
    pub path_probability: f64,
}

/// Aggregate statistics of many protocol runs.
#[derive(Clone, Copy, Debug)]
pub struct ReversalStats {
    pub trials: u64,
    pub successes: u64,
    /// Smallest fidelity between input and recovered state over all
    /// successful trials; 1 when no trial succeeded.
    pub min_success_fidelity: f64,
}

impl ReversalStats {
    pub fn empirical_rate(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }
}

/// Optimum found by [`deterministic_reversal_search`].
#[derive(Clone, Copy, Debug)]
pub struct SearchOptimum {
    /// Euler angles `(α, β, γ)` of the best correction, each in `[0, 2π)`.
    pub angles: [f64; 3],
    /// The maximized minimum recovery fidelity over the state sample.
    pub worst_case_fidelity: f64,
}

/// Rejects `p` or `q` within [`ENDPOINT_EPS`] of 0 or 1, where the
/// measurement operators are singular and the protocol is undefined.
pub fn check_invertible(p: f64, q: f64) -> Result<()> {
    let interior = |v: f64| v > ENDPOINT_EPS && v < 1.0 - ENDPOINT_EPS;
    if interior(p) && interior(q) {
        Ok(())
    } else {
        Err(Error::NonInvertibleMeasurement { p, q })
    }
}

/// `(1−p)(1−q) + pq`, the state-independent probability that the two-step
/// protocol succeeds.
pub fn reversal_success_probability(p: f64, q: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&p) && (0.0..=1.0).contains(&q));
    (1.0 - p) * (1.0 - q) + p * q
}

/// The inverse of one measurement operator, expressed in the pair's own
/// measurement direction.
pub fn inverse_operator(meas: &MeasurementPair, outcome: Outcome) -> Result<Op2> {
    let (p, q) = (meas.p(), meas.q());
    check_invertible(p, q)?;
    let z_pair = MeasurementPair::new(p, q)?;
    let denom = match outcome {
        Outcome::M => ((1.0 - p) * (1.0 - q)).sqrt(),
        Outcome::MBar => (p * q).sqrt(),
    };
    let x = pauli_x();
    let inv_z = x
        .mul(z_pair.operator(outcome))
        .mul(&x)
        .scale((1.0 / denom).into());
    let r = rotation_for_direction(&meas.direction());
    Ok(r.mul(&inv_z).mul(&r.adjoint()))
}

/// Normalized state of the failure branch that first recorded `m`, then `m̄`
/// after the flip: proportional to
/// `√(q(1−p))·amp1·|0⟩ + √(p(1−q))·amp0·|1⟩`.
///
/// The opposite branch (first `m̄`, then `m`) yields this expression with `p`
/// and `q` exchanged; the two coincide exactly when `p = q`.
pub fn fail_path_state(state: &PureState, p: f64, q: f64) -> Result<PureState> {
    let a0 = state.amp1() * (q * (1.0 - p)).sqrt();
    let a1 = state.amp0() * (p * (1.0 - q)).sqrt();
    let norm_sq = a0.norm_sqr() + a1.norm_sqr();
    if norm_sq <= PROB_FLOOR {
        return Err(Error::ZeroProbabilityOutcome {
            outcome: Outcome::MBar,
            prob: norm_sq,
        });
    }
    Ok(PureState::from_amplitudes(a0, a1).expect("norm checked above"))
}

/// Execute one run of the protocol: measure, flip, measure, and close with a
/// flip when the outcomes agree.
pub fn run_reversal<R: rand::Rng>(
    state: &PureState,
    p: f64,
    q: f64,
    rng: &mut R,
) -> Result<ReversalRecord> {
    check_invertible(p, q)?;
    let pair = MeasurementPair::new(p, q)?;
    Ok(protocol_trial(&pair, state, rng))
}

/// One trial against a prebuilt pair. Draws exactly two uniforms.
fn protocol_trial<R: rand::Rng>(
    pair: &MeasurementPair,
    state: &PureState,
    rng: &mut R,
) -> ReversalRecord {
    let first_outcome = pair.sample(state, rng);
    let after_first = pair
        .post_state(state, first_outcome)
        .expect("sampled outcomes of interior measurements have nonzero probability");
    let flipped = after_first.flipped();

    let second_outcome = pair.sample(&flipped, rng);
    let after_second = pair
        .post_state(&flipped, second_outcome)
        .expect("sampled outcomes of interior measurements have nonzero probability");

    let success = first_outcome == second_outcome;
    let final_state = if success {
        after_second.flipped()
    } else {
        after_second
    };
    let path_probability = pair.outcome_probability(state, first_outcome)
        * pair.outcome_probability(&flipped, second_outcome);

    ReversalRecord {
        first_outcome,
        second_outcome,
        success,
        final_state,
        path_probability,
    }
}

/// Estimate the success rate by Monte Carlo under the reproducible substream
/// contract, tracking the worst recovery fidelity among successful trials.
pub fn estimate_success_rate(
    state: &PureState,
    p: f64,
    q: f64,
    trials: u64,
    seed: u64,
) -> Result<ReversalStats> {
    check_invertible(p, q)?;
    if trials == 0 {
        return Err(Error::InvalidArgument("trial count must be at least 1"));
    }
    let pair = MeasurementPair::new(p, q)?;
    let (successes, min_fid) = parallel_trials(
        trials,
        seed,
        || (0u64, 1.0f64),
        |acc, rng| {
            let first = pair.sample(state, rng);
            let flipped = pair
                .post_state(state, first)
                .expect("interior measurement")
                .flipped();
            let second = pair.sample(&flipped, rng);
            if first == second {
                let recovered = pair
                    .post_state(&flipped, second)
                    .expect("interior measurement")
                    .flipped();
                acc.0 += 1;
                acc.1 = acc.1.min(state.fidelity(&recovered));
            }
        },
        |a, b| (a.0 + b.0, a.1.min(b.1)),
    );
    Ok(ReversalStats {
        trials,
        successes,
        min_success_fidelity: min_fid,
    })
}

/// Deterministic sample of input states: both poles followed by `n − 2`
/// Fibonacci-sphere points.
pub fn state_sample(n: usize) -> Vec<PureState> {
    assert!(n >= 2, "state sample needs at least the two poles");
    let golden_angle = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
    let mut states = Vec::with_capacity(n);
    states.push(PureState::from_angles(0.0, 0.0));
    states.push(PureState::from_angles(std::f64::consts::PI, 0.0));
    let k = n - 2;
    for i in 0..k {
        let z = 1.0 - 2.0 * (i as f64 + 0.5) / k as f64;
        let theta = z.acos();
        let phi = (i as f64 * golden_angle) % TAU;
        states.push(PureState::from_angles(theta, phi));
    }
    states
}

/// Search for the fixed rotation that best undoes the failure branch.
///
/// The objective is the minimum, over the deterministic state sample, of the
/// fidelity between the input and `R_z(α)R_y(β)R_z(γ)·X` applied to the fail
/// state. A 32³ grid over `[0, 2π)³` locates the best basin (the surface is
/// multimodal) and coordinate descent refines it to step `1e-8`.
pub fn deterministic_reversal_search(p: f64, q: f64, n_states: usize) -> Result<SearchOptimum> {
    if !(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0) {
        return Err(Error::InvalidArgument(
            "search requires p and q strictly inside (0, 1)",
        ));
    }
    if n_states < 16 {
        return Err(Error::InvalidArgument(
            "search needs at least 16 sample states",
        ));
    }

    let targets: Vec<(PureState, PureState)> = state_sample(n_states)
        .into_iter()
        .map(|s| {
            let completed = fail_path_state(&s, p, q)?.flipped();
            Ok((s, completed))
        })
        .collect::<Result<_>>()?;

    let objective = |angles: [f64; 3]| -> f64 {
        let r = euler_zyz(angles[0], angles[1], angles[2]);
        let mut worst = 1.0f64;
        for (input, completed) in &targets {
            let corrected = r.apply(completed.amplitudes());
            let overlap = input.amp0().conj() * corrected[0] + input.amp1().conj() * corrected[1];
            worst = worst.min(overlap.norm_sqr());
        }
        worst
    };

    let grid_step = TAU / 32.0;
    let mut best_angles = [0.0f64; 3];
    let mut best = -1.0f64;
    for ia in 0..32 {
        for ib in 0..32 {
            for ic in 0..32 {
                let angles = [
                    ia as f64 * grid_step,
                    ib as f64 * grid_step,
                    ic as f64 * grid_step,
                ];
                let value = objective(angles);
                if value > best {
                    best = value;
                    best_angles = angles;
                }
            }
        }
    }

    let mut step = grid_step;
    while step >= 1e-8 {
        let mut improved = false;
        for axis in 0..3 {
            loop {
                let mut up = best_angles;
                up[axis] += step;
                let mut down = best_angles;
                down[axis] -= step;
                let f_up = objective(up);
                let f_down = objective(down);
                if f_up > best && f_up >= f_down {
                    best_angles = up;
                    best = f_up;
                    improved = true;
                } else if f_down > best {
                    best_angles = down;
                    best = f_down;
                    improved = true;
                } else {
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }

    for angle in &mut best_angles {
        *angle = angle.rem_euclid(TAU);
    }
    Ok(SearchOptimum {
        angles: best_angles,
        worst_case_fidelity: best,
    })
}
