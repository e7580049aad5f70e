//! Fixed-size complex linear algebra: 2×2 and 4×4 operators, pure qubit
//! states, and Bloch-sphere directions.
//!
//! Everything is `Copy` and allocation-free so the Monte Carlo hot paths can
//! churn through these values without touching the heap. The 4×4 type fixes
//! the tensor basis order `|0,m⟩, |0,m̄⟩, |1,m⟩, |1,m̄⟩` (system index major,
//! ancilla index minor); all dilation code relies on that ordering.

use num_complex::Complex64;

use crate::tol::EPS_EXACT;
use crate::{Error, Result};

pub type C64 = Complex64;

/// Shorthand complex constructor.
#[inline]
pub const fn c64(re: f64, im: f64) -> C64 {
    Complex64::new(re, im)
}

const ZERO: C64 = c64(0.0, 0.0);
const ONE: C64 = c64(1.0, 0.0);

// ---------------------------------------------------------------------------
// 2x2 operators
// ---------------------------------------------------------------------------

/// A 2×2 complex matrix in row-major order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Op2(pub [[C64; 2]; 2]);

impl Op2 {
    pub const IDENTITY: Op2 = Op2([[ONE, ZERO], [ZERO, ONE]]);

    #[inline]
    pub fn diag(a: C64, b: C64) -> Op2 {
        Op2([[a, ZERO], [ZERO, b]])
    }

    #[inline]
    pub fn adjoint(&self) -> Op2 {
        Op2([
            [self.0[0][0].conj(), self.0[1][0].conj()],
            [self.0[0][1].conj(), self.0[1][1].conj()],
        ])
    }

    #[inline]
    pub fn scale(&self, s: C64) -> Op2 {
        Op2([
            [self.0[0][0] * s, self.0[0][1] * s],
            [self.0[1][0] * s, self.0[1][1] * s],
        ])
    }

    #[inline]
    pub fn add(&self, other: &Op2) -> Op2 {
        Op2([
            [self.0[0][0] + other.0[0][0], self.0[0][1] + other.0[0][1]],
            [self.0[1][0] + other.0[1][0], self.0[1][1] + other.0[1][1]],
        ])
    }

    #[inline]
    pub fn sub(&self, other: &Op2) -> Op2 {
        Op2([
            [self.0[0][0] - other.0[0][0], self.0[0][1] - other.0[0][1]],
            [self.0[1][0] - other.0[1][0], self.0[1][1] - other.0[1][1]],
        ])
    }

    #[inline]
    pub fn mul(&self, other: &Op2) -> Op2 {
        let a = &self.0;
        let b = &other.0;
        Op2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }

    /// Apply to a (not necessarily normalized) amplitude vector.
    #[inline]
    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        [
            self.0[0][0] * v[0] + self.0[0][1] * v[1],
            self.0[1][0] * v[0] + self.0[1][1] * v[1],
        ]
    }

    #[inline]
    pub fn det(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    /// Exact inverse; fails when `|det| ≤ 1e-14`.
    pub fn inverse(&self) -> Result<Op2> {
        let d = self.det();
        if d.norm() <= 1e-14 {
            return Err(Error::SingularOperator { det: d.norm() });
        }
        let inv = ONE / d;
        Op2([[self.0[1][1], -self.0[0][1]], [-self.0[1][0], self.0[0][0]]])
            .scale(inv)
            .pipe_ok()
    }

    /// `‖A†A − I‖_max < 1e-12`.
    pub fn is_unitary(&self) -> bool {
        self.adjoint().mul(self).sub(&Op2::IDENTITY).max_abs() < EPS_EXACT
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// `‖self − other‖_max`.
    pub fn max_abs_diff(&self, other: &Op2) -> f64 {
        self.sub(other).max_abs()
    }

    /// `min_γ ‖self − e^{iγ}·other‖_max`, with the phase read off the largest
    /// entry of `other`. Measures equality up to a global phase.
    pub fn phase_aligned_diff(&self, other: &Op2) -> f64 {
        match phase_between(self.0.iter().flatten(), other.0.iter().flatten()) {
            Some(phase) => self.max_abs_diff(&other.scale(phase)),
            None => self.max_abs_diff(other),
        }
    }

    #[inline]
    fn pipe_ok(self) -> Result<Op2> {
        Ok(self)
    }
}

/// Unit phase `e^{iγ}` aligning `b` with `a`, read off the entry where `b` is
/// largest. `None` when either side vanishes there.
fn phase_between<'a>(
    a: impl Iterator<Item = &'a C64>,
    b: impl Iterator<Item = &'a C64>,
) -> Option<C64> {
    let (av, bv) = a.zip(b).max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))?;
    let lambda = av * bv.conj();
    let n = lambda.norm();
    if n <= 1e-300 || bv.norm() <= 1e-300 {
        None
    } else {
        Some(lambda / n)
    }
}

pub fn pauli_x() -> Op2 {
    Op2([[ZERO, ONE], [ONE, ZERO]])
}

pub fn pauli_y() -> Op2 {
    Op2([[ZERO, c64(0.0, -1.0)], [c64(0.0, 1.0), ZERO]])
}

pub fn pauli_z() -> Op2 {
    Op2::diag(ONE, -ONE)
}

/// `R_y(β) = exp(−iβY/2)`.
pub fn rotation_y(beta: f64) -> Op2 {
    let (s, c) = (beta / 2.0).sin_cos();
    Op2([[c64(c, 0.0), c64(-s, 0.0)], [c64(s, 0.0), c64(c, 0.0)]])
}

/// `R_z(α) = exp(−iαZ/2)`.
pub fn rotation_z(alpha: f64) -> Op2 {
    Op2::diag(
        C64::from_polar(1.0, -alpha / 2.0),
        C64::from_polar(1.0, alpha / 2.0),
    )
}

/// `R_z(α) R_y(β) R_z(γ)` assembled in closed form.
pub fn euler_zyz(alpha: f64, beta: f64, gamma: f64) -> Op2 {
    let (sb, cb) = (beta / 2.0).sin_cos();
    let ea = C64::from_polar(1.0, -alpha / 2.0);
    let eg = C64::from_polar(1.0, -gamma / 2.0);
    Op2([
        [ea * cb * eg, -(ea * sb * eg.conj())],
        [ea.conj() * sb * eg, ea.conj() * cb * eg.conj()],
    ])
}

// ---------------------------------------------------------------------------
// Bloch directions
// ---------------------------------------------------------------------------

/// A unit vector on the Bloch sphere, stored as polar angle `chi ∈ [0, π]`
/// and azimuth `psi ∈ [0, 2π)`. Constructors canonicalize out-of-range input
/// by a roundtrip through Cartesian coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Direction {
    chi: f64,
    psi: f64,
}

impl Direction {
    pub fn new(chi: f64, psi: f64) -> Direction {
        if (0.0..=std::f64::consts::PI).contains(&chi)
            && (0.0..std::f64::consts::TAU).contains(&psi)
        {
            return Direction { chi, psi };
        }
        let (sc, cc) = chi.sin_cos();
        let (sp, cp) = psi.sin_cos();
        Direction::from_cartesian([sc * cp, sc * sp, cc])
    }

    /// Nearest unit direction to an arbitrary nonzero vector.
    pub fn from_cartesian(v: [f64; 3]) -> Direction {
        let rho = v[0].hypot(v[1]);
        let chi = rho.atan2(v[2]);
        let psi = if rho == 0.0 {
            0.0
        } else {
            v[1].atan2(v[0]).rem_euclid(std::f64::consts::TAU)
        };
        Direction { chi, psi }
    }

    pub fn z() -> Direction {
        Direction { chi: 0.0, psi: 0.0 }
    }

    pub fn x() -> Direction {
        Direction {
            chi: std::f64::consts::FRAC_PI_2,
            psi: 0.0,
        }
    }

    pub fn chi(&self) -> f64 {
        self.chi
    }

    pub fn psi(&self) -> f64 {
        self.psi
    }

    pub fn cartesian(&self) -> [f64; 3] {
        let (sc, cc) = self.chi.sin_cos();
        let (sp, cp) = self.psi.sin_cos();
        [sc * cp, sc * sp, cc]
    }

    /// `n⃗ · σ⃗`, the Hermitian operator with eigenvalues ±1 along this axis.
    pub fn dot_sigma(&self) -> Op2 {
        let [x, y, z] = self.cartesian();
        Op2([[c64(z, 0.0), c64(x, -y)], [c64(x, y), c64(-z, 0.0)]])
    }

    /// Angle between two directions in radians.
    pub fn angle_to(&self, other: &Direction) -> f64 {
        let a = self.cartesian();
        let b = other.cartesian();
        let dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        dot.clamp(-1.0, 1.0).acos()
    }
}

/// The rotation `R = R_z(ψ) R_y(χ)` taking `|0⟩` to the +1 eigenvector of
/// `n⃗·σ⃗` and `|1⟩` to the −1 eigenvector. `χ = 0` gives exactly the identity.
pub fn rotation_for_direction(n: &Direction) -> Op2 {
    if n.chi == 0.0 && n.psi == 0.0 {
        return Op2::IDENTITY;
    }
    rotation_z(n.psi).mul(&rotation_y(n.chi))
}

// ---------------------------------------------------------------------------
// Pure states
// ---------------------------------------------------------------------------

/// A normalized single-qubit pure state `amp0·|0⟩ + amp1·|1⟩`.
///
/// The stored amplitudes may carry a global phase; physical comparisons go
/// through [`PureState::fidelity`], which is phase-blind.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureState {
    amp0: C64,
    amp1: C64,
}

impl PureState {
    /// `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
    pub fn from_angles(theta: f64, phi: f64) -> PureState {
        let (s, c) = (theta / 2.0).sin_cos();
        PureState {
            amp0: c64(c, 0.0),
            amp1: C64::from_polar(s, phi),
        }
    }

    /// Normalizes the given amplitudes; fails when their norm is ≤ 1e-150.
    pub fn from_amplitudes(amp0: C64, amp1: C64) -> Result<PureState> {
        let norm = (amp0.norm_sqr() + amp1.norm_sqr()).sqrt();
        if norm <= 1e-150 {
            return Err(Error::InvalidArgument(
                "state amplitudes have vanishing norm",
            ));
        }
        Ok(PureState {
            amp0: amp0 / norm,
            amp1: amp1 / norm,
        })
    }

    pub fn amp0(&self) -> C64 {
        self.amp0
    }

    pub fn amp1(&self) -> C64 {
        self.amp1
    }

    #[inline]
    pub fn amplitudes(&self) -> [C64; 2] {
        [self.amp0, self.amp1]
    }

    /// Polar angle in `[0, π]`.
    pub fn theta(&self) -> f64 {
        2.0 * self.amp1.norm().atan2(self.amp0.norm())
    }

    /// Azimuthal angle in `[0, 2π)`; 0 by convention at the poles, where the
    /// azimuth is undefined.
    pub fn phi(&self) -> f64 {
        let rel = self.amp1 * self.amp0.conj();
        if rel.norm() <= 1e-300 {
            return 0.0;
        }
        rel.arg().rem_euclid(std::f64::consts::TAU)
    }

    pub fn angles(&self) -> (f64, f64) {
        (self.theta(), self.phi())
    }

    /// `|⟨self|other⟩|²`: symmetric, global-phase invariant, in `[0, 1]`.
    #[inline]
    pub fn fidelity(&self, other: &PureState) -> f64 {
        let overlap = self.amp0.conj() * other.amp0 + self.amp1.conj() * other.amp1;
        overlap.norm_sqr().min(1.0)
    }

    /// Exchange the two amplitudes (apply the Pauli X gate).
    #[inline]
    pub fn flipped(&self) -> PureState {
        PureState {
            amp0: self.amp1,
            amp1: self.amp0,
        }
    }

    /// Apply a unitary. The result is renormalized to absorb rounding drift;
    /// nonunitary operators should go through `Op2::apply` instead so the
    /// caller sees the unnormalized amplitudes.
    pub fn rotated(&self, u: &Op2) -> PureState {
        let v = u.apply(self.amplitudes());
        PureState::from_amplitudes(v[0], v[1]).expect("unitary application preserves the norm")
    }
}

// ---------------------------------------------------------------------------
// 4x4 operators (system ⊗ ancilla)
// ---------------------------------------------------------------------------

/// A 4×4 complex matrix over system ⊗ ancilla in the fixed basis order
/// `|0,m⟩, |0,m̄⟩, |1,m⟩, |1,m̄⟩` (row index = 2·system + ancilla).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Op4(pub [[C64; 4]; 4]);

impl Op4 {
    pub const IDENTITY: Op4 = {
        let mut m = [[ZERO; 4]; 4];
        m[0][0] = ONE;
        m[1][1] = ONE;
        m[2][2] = ONE;
        m[3][3] = ONE;
        Op4(m)
    };

    /// Kronecker product `a ⊗ b` (system factor first).
    pub fn kron(a: &Op2, b: &Op2) -> Op4 {
        let mut m = [[ZERO; 4]; 4];
        for sr in 0..2 {
            for ar in 0..2 {
                for sc in 0..2 {
                    for ac in 0..2 {
                        m[2 * sr + ar][2 * sc + ac] = a.0[sr][sc] * b.0[ar][ac];
                    }
                }
            }
        }
        Op4(m)
    }

    /// Block-diagonal matrix acting as `a` on the ancilla when the system is
    /// `|0⟩` and as `b` when it is `|1⟩`.
    pub fn block_diag(a: &Op2, b: &Op2) -> Op4 {
        let mut m = [[ZERO; 4]; 4];
        for r in 0..2 {
            for c in 0..2 {
                m[r][c] = a.0[r][c];
                m[2 + r][2 + c] = b.0[r][c];
            }
        }
        Op4(m)
    }

    pub fn mul(&self, other: &Op4) -> Op4 {
        let mut m = [[ZERO; 4]; 4];
        for r in 0..4 {
            for k in 0..4 {
                let a = self.0[r][k];
                for c in 0..4 {
                    m[r][c] += a * other.0[k][c];
                }
            }
        }
        Op4(m)
    }

    pub fn adjoint(&self) -> Op4 {
        let mut m = [[ZERO; 4]; 4];
        for r in 0..4 {
            for c in 0..4 {
                m[r][c] = self.0[c][r].conj();
            }
        }
        Op4(m)
    }

    pub fn scale(&self, s: C64) -> Op4 {
        let mut m = self.0;
        for row in &mut m {
            for z in row {
                *z *= s;
            }
        }
        Op4(m)
    }

    pub fn sub(&self, other: &Op4) -> Op4 {
        let mut m = self.0;
        for r in 0..4 {
            for c in 0..4 {
                m[r][c] -= other.0[r][c];
            }
        }
        Op4(m)
    }

    pub fn apply(&self, v: [C64; 4]) -> [C64; 4] {
        let mut out = [ZERO; 4];
        for r in 0..4 {
            for c in 0..4 {
                out[r] += self.0[r][c] * v[c];
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Op4) -> f64 {
        self.sub(other).max_abs()
    }

    pub fn is_unitary(&self) -> bool {
        self.adjoint().mul(self).sub(&Op4::IDENTITY).max_abs() < EPS_EXACT
    }

    /// Equality up to a single global phase, as [`Op2::phase_aligned_diff`].
    pub fn phase_aligned_diff(&self, other: &Op4) -> f64 {
        match phase_between(self.0.iter().flatten(), other.0.iter().flatten()) {
            Some(phase) => self.max_abs_diff(&other.scale(phase)),
            None => self.max_abs_diff(other),
        }
    }
}
