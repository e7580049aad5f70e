//! Fisher information of the measurement's binary outcome distribution,
//! Cramér-Rao bounds, the information/reversibility trade-off, and a
//! maximum-likelihood tomography estimator built on the same probabilities.
//!
//! For a measurement along direction `n` the outcome probabilities depend on
//! the state angles `(θ, φ)` only through the angle between state and
//! direction, and every matrix element carries the prefactor `(q−p)²`: the
//! measurement reveals nothing near `p = q`, which is exactly where reversal
//! succeeds with certainty. [`reversal_entropy`] quantifies the other end of
//! that trade-off.
//!
//! The per-direction matrix is rank 1 (both rows are proportional to the
//! gradient of `P_m`), so joint `(θ, φ)` bounds exist only after summing
//! matrices from non-collinear directions; [`cramer_rao`] therefore reports
//! the single-parameter reciprocals and [`mle_estimate`] inverts the summed
//! matrix.
//!
//! A note on symmetry: swapping `p ↔ q` conjugates both measurement
//! operators by `X`, which is the same as flipping the state. The surface
//! over `(p, q)` at polar angle `θ` is therefore the transpose of the
//! surface at `π − θ`, and is symmetric in itself only at `θ = π/2` (or on
//! the lines `p = q`, `p + q = 1`).

use crate::algebra::{Direction, PureState};
use crate::measurement::MeasurementPair;
use crate::tol::{DERIV_SQ_FLOOR, EPS_EXACT, INFO_FLOOR};
use crate::{Error, Result};

use std::f64::consts::{FRAC_PI_2, PI, TAU};

/// Symmetric 2×2 information matrix for the parameters `(θ, φ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FisherMatrix {
    /// θθ element, ≥ 0.
    pub f_tt: f64,
    /// θφ element; equals the φθ element by symmetry of the definition.
    pub f_tp: f64,
    /// φφ element, ≥ 0.
    pub f_pp: f64,
}

impl FisherMatrix {
    pub const ZERO: Self = Self {
        f_tt: 0.0,
        f_tp: 0.0,
        f_pp: 0.0,
    };

    pub fn det(&self) -> f64 {
        self.f_tt * self.f_pp - self.f_tp * self.f_tp
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self {
            f_tt: self.f_tt * k,
            f_tp: self.f_tp * k,
            f_pp: self.f_pp * k,
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        Self {
            f_tt: self.f_tt + other.f_tt,
            f_tp: self.f_tp + other.f_tp,
            f_pp: self.f_pp + other.f_pp,
        }
    }
}

/// One row of the information surface over the `(p, q)` square.
#[derive(Clone, Copy, Debug)]
pub struct FisherSample {
    pub p: f64,
    pub q: f64,
    pub f_tt: f64,
    pub f_tp: f64,
    pub f_pp: f64,
}

/// Tomography result together with the variance bounds implied by the
/// information collected.
#[derive(Clone, Copy, Debug)]
pub struct TomographyEstimate {
    pub theta_hat: f64,
    pub phi_hat: f64,
    pub n_samples: u64,
    /// Cramér-Rao variance bound for θ̂; +∞ when no θ information exists.
    pub crb_variance_theta: f64,
    /// Bound for φ̂; 0 when φ was supplied as known, +∞ when the summed
    /// matrix is singular.
    pub crb_variance_phi: f64,
    /// Set when the likelihood optimum lies at θ ∈ {0, π}.
    pub at_boundary: bool,
}

/// Analytic derivatives `(∂θ P_m, ∂φ P_m)` of the first outcome probability
/// with respect to the state angles:
///
/// ```text
/// ∂θ P_m = ((q−p)/2)·[sinθ cosχ − cosθ sinχ cos(φ−ψ)]
/// ∂φ P_m = ((q−p)/2)·sinθ sinχ sin(φ−ψ)
/// ```
pub fn prob_derivatives(theta: f64, phi: f64, n: &Direction, p: f64, q: f64) -> (f64, f64) {
    debug_assert!((0.0..=1.0).contains(&p) && (0.0..=1.0).contains(&q));
    let half = (q - p) / 2.0;
    let (chi, psi) = (n.chi(), n.psi());
    let d_theta = half * (theta.sin() * chi.cos() - theta.cos() * chi.sin() * (phi - psi).cos());
    let d_phi = half * theta.sin() * chi.sin() * (phi - psi).sin();
    (d_theta, d_phi)
}

/// The information matrix at one parameter point. Each element is the
/// product of two probability derivatives divided by `P_m·P_m̄`.
///
/// When both derivatives vanish (below [`DERIV_SQ_FLOOR`] squared) the
/// matrix is zero regardless of the probabilities; a vanishing probability
/// product with a surviving derivative is a genuine divergence and comes
/// back as [`Error::DegenerateDistribution`].
pub fn fisher_matrix(theta: f64, phi: f64, n: &Direction, p: f64, q: f64) -> Result<FisherMatrix> {
    let (d_theta, d_phi) = prob_derivatives(theta, phi, n, p, q);
    if d_theta * d_theta < DERIV_SQ_FLOOR && d_phi * d_phi < DERIV_SQ_FLOOR {
        return Ok(FisherMatrix::ZERO);
    }
    let pair = MeasurementPair::along(p, q, *n)?;
    let state = PureState::from_angles(theta, phi);
    let (p_m, p_mbar) = pair.probabilities(&state);
    let product = p_m * p_mbar;
    if product <= INFO_FLOOR {
        return Err(Error::DegenerateDistribution { product });
    }
    Ok(FisherMatrix {
        f_tt: d_theta * d_theta / product,
        f_tp: d_theta * d_phi / product,
        f_pp: d_phi * d_phi / product,
    })
}

/// Evaluate the information matrix over a uniform `grid_n × grid_n` grid on
/// `(p, q) ∈ [0,1]²`, row-major with `p` as the outer index.
///
/// Grid points with a degenerate outcome distribution carry NaN in the three
/// matrix columns when a derivative survives there, and exact zeros when the
/// derivatives vanish too, so consumers can filter rows without losing the
/// grid shape.
pub fn fisher_surface(
    theta: f64,
    chi: f64,
    psi: f64,
    phi: f64,
    grid_n: usize,
) -> Result<Vec<FisherSample>> {
    if grid_n < 2 {
        return Err(Error::InvalidArgument(
            "grid needs at least 2 points per axis",
        ));
    }
    let n = Direction::new(chi, psi);
    let denom = (grid_n - 1) as f64;
    let mut rows = Vec::with_capacity(grid_n * grid_n);
    for i in 0..grid_n {
        let p = i as f64 / denom;
        for j in 0..grid_n {
            let q = j as f64 / denom;
            let (f_tt, f_tp, f_pp) = match fisher_matrix(theta, phi, &n, p, q) {
                Ok(f) => (f.f_tt, f.f_tp, f.f_pp),
                Err(Error::DegenerateDistribution { .. }) => (f64::NAN, f64::NAN, f64::NAN),
                Err(e) => return Err(e),
            };
            rows.push(FisherSample {
                p,
                q,
                f_tt,
                f_tp,
                f_pp,
            });
        }
    }
    Ok(rows)
}

/// Single-parameter Cramér-Rao bounds `(1/f_tt, 1/f_pp)`, with +∞ marking a
/// coordinate that carries no information. The joint matrix bound is not
/// defined here because one direction's matrix is rank ≤ 1.
pub fn cramer_rao(f: &FisherMatrix) -> (f64, f64) {
    let bound = |elem: f64| {
        if elem > INFO_FLOOR {
            1.0 / elem
        } else {
            f64::INFINITY
        }
    };
    (bound(f.f_tt), bound(f.f_pp))
}

/// Entropy (nats) of the two successful reversal paths,
/// `−(1−p)(1−q)·ln((1−p)(1−q)) − pq·ln(pq)`, with `0·ln 0 = 0`.
///
/// Maximal (`ln 2`) at `p = q = 1/2`, exactly where the measurement carries
/// zero Fisher information.
pub fn reversal_entropy(p: f64, q: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&p) && (0.0..=1.0).contains(&q));
    let xlnx = |v: f64| if v > 0.0 { v * v.ln() } else { 0.0 };
    -xlnx((1.0 - p) * (1.0 - q)) - xlnx(p * q)
}

/// Maximum-likelihood state estimate from per-direction outcome counts.
///
/// Maximizes the product of binomial likelihoods over θ (golden-section when
/// `fixed_phi` pins the azimuth) or over `(θ, φ)` (Nelder-Mead), starting
/// from the method-of-moments inversion of the first direction's outcome
/// frequency plus a coarse azimuth scan. Estimates within `1e-6` of θ ∈
/// {0, π} snap to the boundary and set the flag.
pub fn mle_estimate(
    counts: &[(u64, u64)],
    directions: &[Direction],
    p: f64,
    q: f64,
    fixed_phi: Option<f64>,
) -> Result<TomographyEstimate> {
    if counts.is_empty() || counts.len() != directions.len() {
        return Err(Error::InvalidArgument(
            "need one (n_m, n_mbar) count pair per direction",
        ));
    }
    let n_samples: u64 = counts.iter().map(|(a, b)| a + b).sum();
    if n_samples == 0 {
        return Err(Error::InvalidArgument("need at least one recorded outcome"));
    }
    if (p - q).abs() <= EPS_EXACT {
        return Err(Error::NonIdentifiable {
            reason: "p = q: outcome probabilities are state-independent",
        });
    }
    if fixed_phi.is_none() {
        let collinear = |a: &Direction, b: &Direction| {
            let angle = a.angle_to(b);
            !(1e-9..=PI - 1e-9).contains(&angle)
        };
        let first = &directions[0];
        if directions.iter().all(|d| collinear(first, d)) {
            return Err(Error::NonIdentifiable {
                reason: "azimuth estimation needs two non-collinear directions",
            });
        }
    }

    let pairs: Vec<MeasurementPair> = directions
        .iter()
        .map(|d| MeasurementPair::along(p, q, *d))
        .collect::<Result<_>>()?;
    let nll = |theta: f64, phi: f64| -> f64 {
        if !(0.0..=PI).contains(&theta) {
            return f64::INFINITY;
        }
        let state = PureState::from_angles(theta, phi);
        let mut total = 0.0;
        for (&(n_m, n_mbar), pair) in counts.iter().zip(&pairs) {
            let (p_m, p_mbar) = pair.probabilities(&state);
            total -= count_log_term(n_m, p_m) + count_log_term(n_mbar, p_mbar);
        }
        total
    };

    let theta_init = moments_theta(counts, p, q);
    let (mut theta_hat, phi_hat) = match fixed_phi {
        Some(phi) => (golden_section(|t| nll(t, phi), 0.0, PI, 1e-10), phi),
        None => {
            let mut phi_init = 0.0;
            let mut best = f64::INFINITY;
            for k in 0..16 {
                let phi = k as f64 * TAU / 16.0;
                let value = nll(theta_init, phi);
                if value < best {
                    best = value;
                    phi_init = phi;
                }
            }
            let optimum = nelder_mead(|x| nll(x[0], x[1]), [theta_init, phi_init], 0.15);
            (optimum[0], optimum[1].rem_euclid(TAU))
        }
    };

    let mut at_boundary = false;
    if theta_hat < 1e-6 {
        theta_hat = 0.0;
        at_boundary = true;
    } else if theta_hat > PI - 1e-6 {
        theta_hat = PI;
        at_boundary = true;
    }

    let crb_phi_angle = fixed_phi.unwrap_or(phi_hat);
    let mut total_info = FisherMatrix::ZERO;
    let mut degenerate = false;
    for (&(n_m, n_mbar), d) in counts.iter().zip(directions) {
        let weight = (n_m + n_mbar) as f64;
        match fisher_matrix(theta_hat, crb_phi_angle, d, p, q) {
            Ok(f) => total_info = total_info.plus(&f.scaled(weight)),
            Err(_) => degenerate = true,
        }
    }
    let (crb_variance_theta, crb_variance_phi) = match fixed_phi {
        Some(_) => {
            let var_theta = if !degenerate && total_info.f_tt > INFO_FLOOR {
                1.0 / total_info.f_tt
            } else {
                f64::INFINITY
            };
            (var_theta, 0.0)
        }
        None => {
            let det = total_info.det();
            if !degenerate && det > INFO_FLOOR {
                (total_info.f_pp / det, total_info.f_tt / det)
            } else {
                (f64::INFINITY, f64::INFINITY)
            }
        }
    };

    Ok(TomographyEstimate {
        theta_hat,
        phi_hat,
        n_samples,
        crb_variance_theta,
        crb_variance_phi,
        at_boundary,
    })
}

fn count_log_term(n: u64, prob: f64) -> f64 {
    if n == 0 {
        0.0
    } else if prob <= 0.0 {
        f64::NEG_INFINITY
    } else {
        n as f64 * prob.ln()
    }
}

/// Method-of-moments starting angle from the first direction with data:
/// inverting `P_m̄ = (p+q)/2 + ((q−p)/2)·cosθ` at the observed frequency.
fn moments_theta(counts: &[(u64, u64)], p: f64, q: f64) -> f64 {
    for &(n_m, n_mbar) in counts {
        let total = n_m + n_mbar;
        if total == 0 {
            continue;
        }
        let freq_mbar = n_mbar as f64 / total as f64;
        let cos_theta = ((p + q - 2.0 * freq_mbar) / (p - q)).clamp(-1.0, 1.0);
        return cos_theta.acos();
    }
    FRAC_PI_2
}

fn golden_section<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

fn nelder_mead<F: Fn([f64; 2]) -> f64>(f: F, start: [f64; 2], scale: f64) -> [f64; 2] {
    let second_theta = if start[0] + scale <= PI {
        start[0] + scale
    } else {
        start[0] - scale
    };
    let mut simplex = [
        start,
        [second_theta, start[1]],
        [start[0], start[1] + scale],
    ];
    let mut values = [f(simplex[0]), f(simplex[1]), f(simplex[2])];

    for _ in 0..500 {
        let mut order = [0usize, 1, 2];
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let (best, mid, worst) = (order[0], order[1], order[2]);

        let diameter = simplex
            .iter()
            .map(|v| (v[0] - simplex[best][0]).abs() + (v[1] - simplex[best][1]).abs())
            .fold(0.0f64, f64::max);
        if diameter < 1e-10 {
            break;
        }

        let centroid = [
            0.5 * (simplex[best][0] + simplex[mid][0]),
            0.5 * (simplex[best][1] + simplex[mid][1]),
        ];
        let reflected = [
            2.0 * centroid[0] - simplex[worst][0],
            2.0 * centroid[1] - simplex[worst][1],
        ];
        let f_r = f(reflected);
        if f_r < values[best] {
            let expanded = [
                centroid[0] + 2.0 * (reflected[0] - centroid[0]),
                centroid[1] + 2.0 * (reflected[1] - centroid[1]),
            ];
            let f_e = f(expanded);
            if f_e < f_r {
                simplex[worst] = expanded;
                values[worst] = f_e;
            } else {
                simplex[worst] = reflected;
                values[worst] = f_r;
            }
        } else if f_r < values[mid] {
            simplex[worst] = reflected;
            values[worst] = f_r;
        } else {
            let contracted = [
                centroid[0] + 0.5 * (simplex[worst][0] - centroid[0]),
                centroid[1] + 0.5 * (simplex[worst][1] - centroid[1]),
            ];
            let f_c = f(contracted);
            if f_c < values[worst] {
                simplex[worst] = contracted;
                values[worst] = f_c;
            } else {
                for i in [mid, worst] {
                    simplex[i] = [
                        simplex[best][0] + 0.5 * (simplex[i][0] - simplex[best][0]),
                        simplex[best][1] + 0.5 * (simplex[i][1] - simplex[best][1]),
                    ];
                    values[i] = f(simplex[i]);
                }
            }
        }
    }

    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    simplex[order[0]]
}
