//! Helpers shared by the integration suites: deterministic parameter
//! sampling and an independent series matrix-exponential oracle.

#![allow(dead_code)]

use qpovm::algebra::{c64, Direction, Op4, PureState, C64};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, TAU};

/// Deterministic generator for one named test, isolated from all others.
pub fn test_rng(label: u64) -> ChaCha8Rng {
    qpovm::rng::substream(0x5EED_CAFE, label)
}

/// Uniform probability in [0, 1].
pub fn sample_prob(rng: &mut ChaCha8Rng) -> f64 {
    rng.random()
}

/// Probability bounded away from the endpoints, uniform in (lo, 1 - lo).
pub fn sample_interior_prob(rng: &mut ChaCha8Rng, lo: f64) -> f64 {
    lo + (1.0 - 2.0 * lo) * rng.random::<f64>()
}

/// Direction uniform over the sphere (cos χ uniform, ψ uniform).
pub fn sample_direction(rng: &mut ChaCha8Rng) -> Direction {
    let chi = (1.0 - 2.0 * rng.random::<f64>()).acos();
    let psi = TAU * rng.random::<f64>();
    Direction::new(chi, psi)
}

/// Pure state uniform over the sphere.
pub fn sample_state(rng: &mut ChaCha8Rng) -> PureState {
    let theta = (1.0 - 2.0 * rng.random::<f64>()).acos();
    let phi = TAU * rng.random::<f64>();
    PureState::from_angles(theta, phi)
}

/// Polar angle bounded away from the poles, uniform in (margin, π - margin).
pub fn sample_interior_theta(rng: &mut ChaCha8Rng, margin: f64) -> f64 {
    margin + (PI - 2.0 * margin) * rng.random::<f64>()
}

/// One binomial standard deviation of an empirical frequency.
pub fn binomial_sigma(prob: f64, trials: u64) -> f64 {
    (prob * (1.0 - prob) / trials as f64).sqrt()
}

fn add4(a: &Op4, b: &Op4) -> Op4 {
    let mut out = *a;
    for (row, other) in out.0.iter_mut().zip(b.0.iter()) {
        for (entry, add) in row.iter_mut().zip(other.iter()) {
            *entry += add;
        }
    }
    out
}

/// Matrix exponential by scaled-and-squared Taylor series.
///
/// Independent of the library's closed-form block exponentials: plain
/// 20-term Taylor sum after halving the argument until its max-abs norm
/// drops below 1/2, then repeated squaring.
pub fn expm_series(a: &Op4) -> Op4 {
    let mut squarings = 0u32;
    let mut norm = a.max_abs();
    while norm >= 0.5 {
        norm /= 2.0;
        squarings += 1;
    }
    let scaled = a.scale(c64(0.5f64.powi(squarings as i32), 0.0));

    let mut sum = Op4::IDENTITY;
    let mut term = Op4::IDENTITY;
    for k in 1..=20 {
        term = term.mul(&scaled).scale(c64(1.0 / k as f64, 0.0));
        sum = add4(&sum, &term);
    }
    for _ in 0..squarings {
        sum = sum.mul(&sum);
    }
    sum
}

/// Multiply a 4-vector by -i·H, the generator of exp(-iHt).
pub fn times_minus_i(h: &Op4) -> Op4 {
    h.scale(c64(0.0, -1.0))
}

/// Largest absolute entry of the difference between two 2x2 complex arrays.
pub fn max_abs_diff2(a: &[[C64; 2]; 2], b: &[[C64; 2]; 2]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            worst = worst.max((a[i][j] - b[i][j]).norm());
        }
    }
    worst
}
