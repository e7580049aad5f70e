//! Naimark dilation of the measurement pair: a single unitary on
//! system⊗ancilla followed by a sharp measurement of the ancilla reproduces
//! the two-outcome POVM.
//!
//! All three constructions use the same ancilla rotation
//! `√(1−x)·I − i·√x·X` (the closed-form exponential of an `X` coupling):
//!
//! * [`build_naimark_unitary`]: block-diagonal, rotating the ancilla by
//!   strength `q` when the system is `|0⟩` and `p` when it is `|1⟩`;
//! * [`gate_decomposition`]: the same unitary as a sequence of system `X`
//!   gates and ancilla rotations conditioned on the system being `|1⟩`;
//! * [`doublewell_propagator`]: evolution under a two-well Hamiltonian with
//!   state-dependent tunneling, viewed in the frame rotating at the qubit
//!   frequency, with [`pulse_params`] calibrating the tunnel elements.
//!
//! With the ancilla prepared in `|0⟩`, [`extract_kraus`] recovers
//! `K_m = M_m` exactly and `K_m̄ = −i·M_m̄`, a global phase with no physical
//! content.
//!
//! Basis order throughout: index = 2·system + ancilla, i.e.
//! `|0,m⟩, |0,m̄⟩, |1,m⟩, |1,m̄⟩`.

use crate::algebra::{c64, pauli_x, Op2, Op4, PureState};
use crate::measurement::{MeasurementPair, Outcome};
use crate::{Error, Result};

/// A dilation unitary together with the measurement strengths it encodes.
#[derive(Clone, Copy, Debug)]
pub struct DilationUnitary {
    pub u: Op4,
    pub p: f64,
    pub q: f64,
}

/// One element of the gate expansion of the dilation unitary.
#[derive(Clone, Copy, Debug)]
pub struct Gate {
    pub label: &'static str,
    pub matrix: Op4,
}

/// Double-well realization parameters (ħ ≡ 1): qubit angular frequency
/// `nu`, tunnel matrix elements `t0`/`t1` for system states `|0⟩`/`|1⟩`,
/// and pulse duration `tau ≥ 0`.
#[derive(Clone, Copy, Debug)]
pub struct DoubleWellParams {
    pub nu: f64,
    pub t0: f64,
    pub t1: f64,
    pub tau: f64,
}

/// Maximum deviations collected by [`verify_dilation`]. All values are
/// max-norm distances; agreement between unitaries is measured after
/// removing one global phase per matrix.
#[derive(Clone, Copy, Debug)]
pub struct DilationReport {
    pub p: f64,
    pub q: f64,
    pub unitarity: f64,
    pub gates_vs_naimark: f64,
    pub doublewell_vs_naimark: f64,
    pub kraus_m_deviation: f64,
    pub kraus_mbar_deviation: f64,
    pub completeness_defect: f64,
    pub born_rule_deviation: f64,
}

impl DilationReport {
    /// The single worst deviation in the report.
    pub fn max_deviation(&self) -> f64 {
        [
            self.unitarity,
            self.gates_vs_naimark,
            self.doublewell_vs_naimark,
            self.kraus_m_deviation,
            self.kraus_mbar_deviation,
            self.completeness_defect,
            self.born_rule_deviation,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Ancilla rotation of strength `x ∈ [0, 1]`: `√(1−x)·I − i·√x·X`.
pub fn switch_rotation(x: f64) -> Op2 {
    let c = (1.0 - x).sqrt();
    let s = x.sqrt();
    Op2([[c64(c, 0.0), c64(0.0, -s)], [c64(0.0, -s), c64(c, 0.0)]])
}

fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidProbability { name, value })
    }
}

/// The dilation unitary: ancilla rotation of strength `q` on the system
/// `|0⟩` block and `p` on the `|1⟩` block.
pub fn build_naimark_unitary(p: f64, q: f64) -> Result<DilationUnitary> {
    check_probability("p", p)?;
    check_probability("q", q)?;
    let u = Op4::block_diag(&switch_rotation(q), &switch_rotation(p));
    Ok(DilationUnitary { u, p, q })
}

/// Kraus operator for one ancilla outcome, with the ancilla prepared in the
/// outcome-`m` state: `K_x[s'][s] = U[2s'+x][2s]`.
pub fn extract_kraus(d: &DilationUnitary, outcome: Outcome) -> Op2 {
    let x = match outcome {
        Outcome::M => 0,
        Outcome::MBar => 1,
    };
    let mut k = Op2([[c64(0.0, 0.0); 2]; 2]);
    for s_out in 0..2 {
        for s_in in 0..2 {
            k.0[s_out][s_in] = d.u.0[2 * s_out + x][2 * s_in];
        }
    }
    k
}

/// Expansion of the dilation unitary into system flips and conditional
/// ancilla rotations, in application order:
/// `X⊗I, C(U_q), X⊗I, C(U_p)`, where `C(V)` applies `V` to the ancilla
/// when the system is `|1⟩`.
pub fn gate_decomposition(p: f64, q: f64) -> Result<Vec<Gate>> {
    check_probability("p", p)?;
    check_probability("q", q)?;
    let x_system = Op4::kron(&pauli_x(), &Op2::IDENTITY);
    Ok(vec![
        Gate {
            label: "X⊗I",
            matrix: x_system,
        },
        Gate {
            label: "C(U_q)",
            matrix: Op4::block_diag(&Op2::IDENTITY, &switch_rotation(q)),
        },
        Gate {
            label: "X⊗I",
            matrix: x_system,
        },
        Gate {
            label: "C(U_p)",
            matrix: Op4::block_diag(&Op2::IDENTITY, &switch_rotation(p)),
        },
    ])
}

/// Product of a gate list in application order (first gate acts first).
pub fn gate_product(gates: &[Gate]) -> Op4 {
    gates
        .iter()
        .fold(Op4::IDENTITY, |acc, gate| gate.matrix.mul(&acc))
}

/// The two-well Hamiltonian `−(ν/2)·Z⊗I + (t0/2)·P₀⊗X + (t1/2)·P₁⊗X`
/// (tunnel-splitting convention, so a pulse of duration τ rotates the
/// ancilla by the angle `t_s·τ/2`).
pub fn doublewell_hamiltonian(params: &DoubleWellParams) -> Op4 {
    let block = |energy: f64, tunnel: f64| {
        Op2::IDENTITY
            .scale(c64(energy, 0.0))
            .add(&pauli_x().scale(c64(tunnel / 2.0, 0.0)))
    };
    Op4::block_diag(
        &block(-params.nu / 2.0, params.t0),
        &block(params.nu / 2.0, params.t1),
    )
}

/// Propagator of the double-well pulse in the rotating frame.
///
/// Each system block of `exp(−iHτ)` is the closed-form exponential of
/// `a·I + b·X`; the frame transformation `exp(−i·ν·(Z⊗I)·τ/2)` then cancels
/// the block phases, leaving pure ancilla rotations of angles `t_s·τ/2`.
/// The encoded strengths are `q = sin²(t0·τ/2)`, `p = sin²(t1·τ/2)`.
pub fn doublewell_propagator(params: &DoubleWellParams) -> DilationUnitary {
    debug_assert!(params.tau >= 0.0);
    let half_phase = params.nu * params.tau / 2.0;
    let lab_block = |tunnel: f64, phase: f64| {
        let angle = tunnel * params.tau / 2.0;
        Op2([
            [c64(angle.cos(), 0.0), c64(0.0, -angle.sin())],
            [c64(0.0, -angle.sin()), c64(angle.cos(), 0.0)],
        ])
        .scale(c64(phase.cos(), phase.sin()))
    };
    let lab = Op4::block_diag(
        &lab_block(params.t0, half_phase),
        &lab_block(params.t1, -half_phase),
    );
    let frame = Op4::block_diag(
        &Op2::IDENTITY.scale(c64(half_phase.cos(), -half_phase.sin())),
        &Op2::IDENTITY.scale(c64(half_phase.cos(), half_phase.sin())),
    );
    let u = frame.mul(&lab);
    DilationUnitary {
        u,
        p: (params.t1 * params.tau / 2.0).sin().powi(2),
        q: (params.t0 * params.tau / 2.0).sin().powi(2),
    }
}

/// Tunnel matrix elements that realize the target strengths after a pulse
/// of duration `tau`: principal branch of `x = sin²(t·τ/2)`.
pub fn pulse_params(p_target: f64, q_target: f64, tau: f64) -> Result<(f64, f64)> {
    check_probability("p", p_target)?;
    check_probability("q", q_target)?;
    if tau <= 0.0 {
        return Err(Error::InvalidArgument("pulse duration must be positive"));
    }
    let t0 = 2.0 * q_target.sqrt().asin() / tau;
    let t1 = 2.0 * p_target.sqrt().asin() / tau;
    Ok((t0, t1))
}

/// Build all three constructions for `(p, q)` and measure every deviation
/// that should vanish: unitarity defects, mutual agreement up to global
/// phase, Kraus recovery of the measurement operators, completeness, and
/// outcome statistics against the direct Born rule for a fixed state set.
pub fn verify_dilation(p: f64, q: f64, tau: f64, nu: f64) -> Result<DilationReport> {
    let naimark = build_naimark_unitary(p, q)?;
    let gates = gate_decomposition(p, q)?;
    let gate_prod = gate_product(&gates);
    let (t0, t1) = pulse_params(p, q, tau)?;
    let doublewell = doublewell_propagator(&DoubleWellParams { nu, t0, t1, tau });

    let unitarity = [&naimark.u, &gate_prod, &doublewell.u]
        .into_iter()
        .map(unitarity_defect)
        .fold(0.0, f64::max);
    let gates_vs_naimark = naimark.u.phase_aligned_diff(&gate_prod);
    let doublewell_vs_naimark = naimark.u.phase_aligned_diff(&doublewell.u);

    let pair = MeasurementPair::new(p, q)?;
    let mut kraus_m_deviation = 0.0f64;
    let mut kraus_mbar_deviation = 0.0f64;
    let mut completeness_defect = 0.0f64;
    for u in [
        &naimark,
        &DilationUnitary { u: gate_prod, p, q },
        &doublewell,
    ] {
        let k_m = extract_kraus(u, Outcome::M);
        let k_mbar = extract_kraus(u, Outcome::MBar);
        kraus_m_deviation =
            kraus_m_deviation.max(k_m.phase_aligned_diff(pair.operator(Outcome::M)));
        kraus_mbar_deviation =
            kraus_mbar_deviation.max(k_mbar.phase_aligned_diff(pair.operator(Outcome::MBar)));
        let sum = k_m.adjoint().mul(&k_m).add(&k_mbar.adjoint().mul(&k_mbar));
        completeness_defect = completeness_defect.max(sum.max_abs_diff(&Op2::IDENTITY));
    }

    let born_rule_deviation = born_rule_deviation(&naimark, &pair);

    Ok(DilationReport {
        p,
        q,
        unitarity,
        gates_vs_naimark,
        doublewell_vs_naimark,
        kraus_m_deviation,
        kraus_mbar_deviation,
        completeness_defect,
        born_rule_deviation,
    })
}

fn unitarity_defect(u: &Op4) -> f64 {
    u.adjoint().mul(u).max_abs_diff(&Op4::IDENTITY)
}

fn born_rule_deviation(d: &DilationUnitary, pair: &MeasurementPair) -> f64 {
    let states = [
        PureState::from_angles(0.0, 0.0),
        PureState::from_angles(std::f64::consts::PI, 0.0),
        PureState::from_angles(std::f64::consts::FRAC_PI_2, 0.0),
        PureState::from_angles(std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2),
        PureState::from_angles(1.1, 2.2),
        PureState::from_angles(2.5, 4.0),
    ];
    let mut worst = 0.0f64;
    for state in &states {
        let [a0, a1] = state.amplitudes();
        let embedded = [a0, c64(0.0, 0.0), a1, c64(0.0, 0.0)];
        let evolved = d.u.apply(embedded);
        let prob_m = evolved[0].norm_sqr() + evolved[2].norm_sqr();
        let prob_mbar = evolved[1].norm_sqr() + evolved[3].norm_sqr();
        let (direct_m, direct_mbar) = pair.probabilities(state);
        worst = worst.max((prob_m - direct_m).abs());
        worst = worst.max((prob_mbar - direct_mbar).abs());
    }
    worst
}
