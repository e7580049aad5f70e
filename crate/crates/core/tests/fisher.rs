//! Fisher information validated against two independent oracles: central
//! finite differences of the outcome probabilities, and Monte Carlo
//! estimates of the statistical (squared-score) definition.

mod common;

use common::*;
use qpovm::algebra::{Direction, PureState};
use qpovm::fisher::{fisher_matrix, mle_estimate, prob_derivatives, reversal_entropy};
use qpovm::measurement::MeasurementPair;
use qpovm::rng::parallel_trials;
use qpovm::tol::EPS_EXACT;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

const FD_STEP: f64 = 1e-6;

struct Tuple {
    theta: f64,
    phi: f64,
    n: Direction,
    p: f64,
    q: f64,
}

fn sample_tuple(rng: &mut ChaCha8Rng) -> Tuple {
    Tuple {
        theta: sample_interior_theta(rng, 0.15),
        phi: std::f64::consts::TAU * rng.random::<f64>(),
        n: sample_direction(rng),
        p: sample_interior_prob(rng, 0.05),
        q: sample_interior_prob(rng, 0.05),
    }
}

fn p_m(theta: f64, phi: f64, n: Direction, p: f64, q: f64) -> f64 {
    let pair = MeasurementPair::along(p, q, n).unwrap();
    pair.probabilities(&PureState::from_angles(theta, phi)).0
}

/// Central finite differences of P_m over the state angles.
fn fd_derivatives(t: &Tuple) -> (f64, f64) {
    let d_theta = (p_m(t.theta + FD_STEP, t.phi, t.n, t.p, t.q)
        - p_m(t.theta - FD_STEP, t.phi, t.n, t.p, t.q))
        / (2.0 * FD_STEP);
    let d_phi = (p_m(t.theta, t.phi + FD_STEP, t.n, t.p, t.q)
        - p_m(t.theta, t.phi - FD_STEP, t.n, t.p, t.q))
        / (2.0 * FD_STEP);
    (d_theta, d_phi)
}

fn close(analytic: f64, reference: f64, floor: f64) -> bool {
    (analytic - reference).abs() <= 1e-6 * analytic.abs().max(reference.abs()) + floor
}

#[test]
fn derivatives_match_finite_differences() {
    let mut rng = test_rng(20);
    for _ in 0..1000 {
        let t = sample_tuple(&mut rng);
        let (an_t, an_p) = prob_derivatives(t.theta, t.phi, &t.n, t.p, t.q);
        let (fd_t, fd_p) = fd_derivatives(&t);
        assert!(close(an_t, fd_t, 1e-8), "dθ: {an_t} vs {fd_t}");
        assert!(close(an_p, fd_p, 1e-8), "dφ: {an_p} vs {fd_p}");
    }
}

#[test]
fn matrix_matches_finite_difference_construction() {
    let mut rng = test_rng(21);
    for _ in 0..1000 {
        let t = sample_tuple(&mut rng);
        let f = fisher_matrix(t.theta, t.phi, &t.n, t.p, t.q).unwrap();

        let (fd_t, fd_p) = fd_derivatives(&t);
        let prob = p_m(t.theta, t.phi, t.n, t.p, t.q);
        let denom = prob * (1.0 - prob);
        assert!(close(f.f_tt, fd_t * fd_t / denom, 1e-7));
        assert!(close(f.f_tp, fd_t * fd_p / denom, 1e-7));
        assert!(close(f.f_pp, fd_p * fd_p / denom, 1e-7));
    }
}

#[test]
fn matrix_is_positive_semidefinite_with_rank_one() {
    let mut rng = test_rng(22);
    for _ in 0..500 {
        let t = sample_tuple(&mut rng);
        let f = fisher_matrix(t.theta, t.phi, &t.n, t.p, t.q).unwrap();
        assert!(f.f_tt >= 0.0);
        assert!(f.f_pp >= 0.0);
        let scale = f.f_tt.max(f.f_pp).max(1.0);
        assert!(f.det().abs() < 1e-10 * scale * scale);
    }
}

/// Monte Carlo check of the statistical definition: the average squared
/// score over sampled outcomes estimates f_tt.
#[test]
fn monte_carlo_squared_score_estimates_theta_information() {
    let trials = 1_000_000u64;
    let mut rng = test_rng(23);
    for round in 0..5 {
        let t = sample_tuple(&mut rng);
        let f = fisher_matrix(t.theta, t.phi, &t.n, t.p, t.q).unwrap();

        let prob_m = p_m(t.theta, t.phi, t.n, t.p, t.q);
        let (d_theta, _) = prob_derivatives(t.theta, t.phi, &t.n, t.p, t.q);
        let score_m = d_theta / prob_m;
        let score_mbar = -d_theta / (1.0 - prob_m);

        let switches = parallel_trials(
            trials,
            501 + round,
            || 0u64,
            |acc, rng| {
                if rng.random::<f64>() < 1.0 - prob_m {
                    *acc += 1;
                }
            },
            |a, b| a + b,
        );
        let n_m = (trials - switches) as f64;
        let n_mbar = switches as f64;
        let estimate = (n_m * score_m * score_m + n_mbar * score_mbar * score_mbar) / trials as f64;

        let fourth = prob_m * score_m.powi(4) + (1.0 - prob_m) * score_mbar.powi(4);
        let sigma = ((fourth - f.f_tt * f.f_tt).max(0.0) / trials as f64).sqrt();
        assert!(
            (estimate - f.f_tt).abs() <= 5.0 * sigma + 1e-12,
            "round {round}: {estimate} vs {}",
            f.f_tt
        );
    }
}

/// With the state on the equator and the axis at z, the outcome
/// probabilities depend only on the midpoint (p+q)/2, so the elements are
/// exactly proportional to (p−q)² and exactly swap-symmetric.
#[test]
fn equator_elements_scale_as_squared_imbalance() {
    let z = Direction::z();
    let at = |p: f64, q: f64| fisher_matrix(FRAC_PI_2, 0.0, &z, p, q).unwrap();

    let mid = 0.4;
    let f1 = at(mid + 0.3, mid - 0.3);
    let f2 = at(mid + 0.05, mid - 0.05);
    assert!((f1.f_tt * 0.05 * 0.05 - f2.f_tt * 0.3 * 0.3).abs() < EPS_EXACT);

    for (p, q) in [(0.9, 0.2), (0.55, 0.1), (0.35, 0.8)] {
        let fwd = at(p, q);
        let rev = at(q, p);
        assert!((fwd.f_tt - rev.f_tt).abs() < EPS_EXACT);
    }
}

/// Away from the equator the swap law picks up the mirrored polar angle:
/// exchanging p and q matches the surface at π − θ, not at θ.
#[test]
fn swap_law_mirrors_the_polar_angle() {
    let z = Direction::z();
    let mut rng = test_rng(24);
    for _ in 0..200 {
        let theta = sample_interior_theta(&mut rng, 0.1);
        let p = sample_interior_prob(&mut rng, 0.02);
        let q = sample_interior_prob(&mut rng, 0.02);
        let fwd = fisher_matrix(theta, 0.0, &z, p, q).unwrap();
        let mirrored = fisher_matrix(PI - theta, 0.0, &z, q, p).unwrap();
        assert!((fwd.f_tt - mirrored.f_tt).abs() < EPS_EXACT);
    }
}

#[test]
fn entropy_peaks_at_the_center() {
    assert!((reversal_entropy(0.5, 0.5) - std::f64::consts::LN_2).abs() < 1e-14);
    assert_eq!(reversal_entropy(0.0, 1.0), 0.0);

    // Direct scalar evaluation of the quoted expression.
    let direct = -0.56f64 * 0.56f64.ln() - 0.06 * 0.06f64.ln();
    assert!((reversal_entropy(0.3, 0.2) - direct).abs() < 1e-15);

    let mut rng = test_rng(25);
    let center = reversal_entropy(0.5, 0.5);
    for _ in 0..500 {
        let p = sample_prob(&mut rng);
        let q = sample_prob(&mut rng);
        assert!(reversal_entropy(p, q) <= center + 1e-15);
    }
}

/// Self-consistency: data generated from the outcome distribution alone is
/// recovered by the estimator to within five CRB standard deviations.
#[test]
fn estimator_recovers_generator_angle() {
    let (p, q) = (1.0, 0.0);
    let theta_star = FRAC_PI_3;
    let n = 100_000u64;
    let z = Direction::z();
    let prob_mbar = 1.0 - p_m(theta_star, 0.0, z, p, q);

    let switches = parallel_trials(
        n,
        77,
        || 0u64,
        |acc, rng| {
            if rng.random::<f64>() < prob_mbar {
                *acc += 1;
            }
        },
        |a, b| a + b,
    );

    let est = mle_estimate(&[(n - switches, switches)], &[z], p, q, Some(0.0)).unwrap();
    let f = fisher_matrix(theta_star, 0.0, &z, p, q).unwrap();
    let crb_sd = (1.0 / (f.f_tt * n as f64)).sqrt();
    assert!(
        (est.theta_hat - theta_star).abs() <= 5.0 * crb_sd,
        "estimate {} vs {theta_star}",
        est.theta_hat
    );
    assert!(!est.at_boundary);
    assert!((est.crb_variance_theta - crb_sd * crb_sd).abs() < 0.1 * crb_sd * crb_sd);
}
