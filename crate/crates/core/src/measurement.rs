//! POVM construction and simulation for generalized partial measurements.
//!
//! A generalized partial measurement on a qubit is described by two operators
//! acting along a chosen axis. In the axis eigenbasis they are diagonal:
//!
//! ```text
//! M_m  = diag(√(1-q), √(1-p))      "no switch"
//! M_m̄  = diag(√q,     √p)          "switch"
//! ```
//!
//! `p` is the switching probability from `|1⟩`, `q` the one from `|0⟩`. The
//! associated effects `E_x = M_x†M_x` are positive and complete the identity,
//! so `(M_m, M_m̄)` is a two-outcome POVM for every `(p, q) ∈ [0, 1]²`,
//! including the projective endpoints. Measuring along an arbitrary axis `n⃗`
//! conjugates both operators by the rotation taking `|0⟩` to `|+⟩_n⃗`.
//!
//! [`MeasurementPair`] owns the operator pair and answers every statistical
//! question about it: exact outcome probabilities, post-measurement states,
//! and seeded outcome sampling (exactly one uniform variate per draw, so
//! random traces are auditable).

use rand::Rng;

use crate::algebra::{rotation_for_direction, Direction, Op2, PureState};
use crate::tol::PROB_FLOOR;
use crate::{Error, Result};

/// The two possible measurement records.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    /// No switching event.
    M,
    /// A switching event.
    MBar,
}

impl Outcome {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::M => "m",
            Outcome::MBar => "mbar",
        }
    }

    pub fn other(&self) -> Outcome {
        match self {
            Outcome::M => Outcome::MBar,
            Outcome::MBar => Outcome::M,
        }
    }
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// A two-outcome POVM: the operator pair `(M_m, M_m̄)` with its defining
/// switching probabilities and measurement axis.
#[derive(Clone, Copy, Debug)]
pub struct MeasurementPair {
    p: f64,
    q: f64,
    direction: Direction,
    m_op: Op2,
    mbar_op: Op2,
}

fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidProbability { name, value })
    }
}

impl MeasurementPair {
    /// Measurement along the z axis.
    ///
    /// Both probabilities must lie in `[0, 1]`; the endpoints are allowed and
    /// produce projective measurements.
    pub fn new(p: f64, q: f64) -> Result<MeasurementPair> {
        check_probability("p", p)?;
        check_probability("q", q)?;
        Ok(MeasurementPair {
            p,
            q,
            direction: Direction::z(),
            m_op: Op2::diag(((1.0 - q).sqrt()).into(), ((1.0 - p).sqrt()).into()),
            mbar_op: Op2::diag((q.sqrt()).into(), (p.sqrt()).into()),
        })
    }

    /// Measurement along an arbitrary axis: both operators conjugated by the
    /// rotation that maps the z axis onto `n`.
    pub fn along(p: f64, q: f64, n: Direction) -> Result<MeasurementPair> {
        let z_pair = MeasurementPair::new(p, q)?;
        let r = rotation_for_direction(&n);
        let rd = r.adjoint();
        Ok(MeasurementPair {
            direction: n,
            m_op: r.mul(&z_pair.m_op).mul(&rd),
            mbar_op: r.mul(&z_pair.mbar_op).mul(&rd),
            ..z_pair
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// The measurement (Kraus) operator for an outcome.
    pub fn operator(&self, outcome: Outcome) -> &Op2 {
        match outcome {
            Outcome::M => &self.m_op,
            Outcome::MBar => &self.mbar_op,
        }
    }

    /// The effect `E_x = M_x†M_x` governing the Born rule.
    pub fn effect(&self, outcome: Outcome) -> Op2 {
        let m = self.operator(outcome);
        m.adjoint().mul(m)
    }

    /// `‖E_m + E_m̄ − I‖_max`, the POVM completeness defect.
    pub fn completeness_defect(&self) -> f64 {
        self.effect(Outcome::M)
            .add(&self.effect(Outcome::MBar))
            .max_abs_diff(&Op2::IDENTITY)
    }

    /// Probability of a single outcome, `‖M_x|ψ⟩‖²`.
    #[inline]
    pub fn outcome_probability(&self, state: &PureState, outcome: Outcome) -> f64 {
        let v = self.operator(outcome).apply(state.amplitudes());
        v[0].norm_sqr() + v[1].norm_sqr()
    }

    /// Both outcome probabilities `(P_m, P_m̄)`. Each is computed as a squared
    /// norm, so both are nonnegative and sum to 1 up to rounding.
    #[inline]
    pub fn probabilities(&self, state: &PureState) -> (f64, f64) {
        (
            self.outcome_probability(state, Outcome::M),
            self.outcome_probability(state, Outcome::MBar),
        )
    }

    /// The conditional state `M_x|ψ⟩ / √P_x` after observing `outcome`.
    ///
    /// Fails with [`Error::ZeroProbabilityOutcome`] when the outcome has
    /// probability at or below the floor separating true zeros from rounding.
    pub fn post_state(&self, state: &PureState, outcome: Outcome) -> Result<PureState> {
        let v = self.operator(outcome).apply(state.amplitudes());
        let prob = v[0].norm_sqr() + v[1].norm_sqr();
        if prob <= PROB_FLOOR {
            return Err(Error::ZeroProbabilityOutcome { outcome, prob });
        }
        let inv = 1.0 / prob.sqrt();
        Ok(PureState::from_amplitudes(v[0] * inv, v[1] * inv)
            .expect("outcome probability above the floor"))
    }

    /// Draw one outcome from the Born distribution, consuming exactly one
    /// uniform variate from `rng`.
    #[inline]
    pub fn sample<R: Rng>(&self, state: &PureState, rng: &mut R) -> Outcome {
        let p_mbar = self.outcome_probability(state, Outcome::MBar);
        if rng.random::<f64>() < p_mbar {
            Outcome::MBar
        } else {
            Outcome::M
        }
    }
}
