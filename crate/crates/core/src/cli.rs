//! Command-line interface: runs the simulations and emits CSV artifacts or
//! text reports on stdout (and optionally to a file, byte-identical).
//!
//! Every command prints one `#`-commented metadata line carrying the tool
//! version, the subcommand, and the full parameter set including the seed,
//! so an artifact is always reproducible from its own header. Numbers are
//! formatted with 12 significant digits to keep files platform-stable.
//!
//! Exit codes: 0 success, 2 usage error (bad flags), 3 domain error
//! (endpoint strengths, unidentifiable configuration), 4 verification
//! failure in `dilation-check`.

use crate::algebra::{Direction, PureState};
use crate::dilation::{build_naimark_unitary, verify_dilation};
use crate::fisher::{fisher_matrix, fisher_surface, mle_estimate};
use crate::measurement::{MeasurementPair, Outcome};
use crate::reversal::{estimate_success_rate, reversal_success_probability};
use crate::rng::{mix, parallel_trials};
use crate::tol::{EPS_NUM, INFO_FLOOR};
use crate::Result;

use clap::{Args, Parser, Subcommand};
use std::f64::consts::FRAC_PI_2;
use std::io::Write;
use std::path::PathBuf;

/// Pulse duration used by `dilation-check`; the report is calibration-exact
/// for any positive value.
const DILATION_TAU: f64 = 1.0;
/// Qubit frequency used by `dilation-check`; the rotating frame removes it
/// exactly, so the value only exercises the cancellation.
const DILATION_NU: f64 = 25.0;

#[derive(Parser)]
#[command(
    name = "qpovm",
    version,
    about = "Generalized partial measurements on a qubit: simulation, reversal, information metrics, dilation checks"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample one generalized measurement and compare outcome frequencies
    /// with the exact probabilities
    Measure(MeasureArgs),
    /// Estimate the reversal success rate by Monte Carlo and compare with
    /// the closed form
    ReverseMc(ReverseMcArgs),
    /// Tabulate the Fisher information matrix over the (p, q) square
    FisherSurface(FisherSurfaceArgs),
    /// Repeated maximum-likelihood polar-angle estimates against the
    /// Cramér-Rao bound
    Tomography(TomographyArgs),
    /// Verify that all dilation constructions agree and reproduce the
    /// measurement
    DilationCheck(DilationCheckArgs),
}

fn parse_probability(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is outside [0, 1]"))
    }
}

#[derive(Args)]
struct MeasureArgs {
    /// Strength on |1⟩ (probability of the second outcome at the south pole)
    #[arg(long, value_parser = parse_probability)]
    p: f64,
    /// Strength on |0⟩ (probability of the second outcome at the north pole)
    #[arg(long, value_parser = parse_probability)]
    q: f64,
    /// State polar angle, radians
    #[arg(long, default_value_t = FRAC_PI_2)]
    theta: f64,
    /// State azimuthal angle, radians
    #[arg(long, default_value_t = 0.0)]
    phi: f64,
    /// Measurement direction polar angle, radians
    #[arg(long, default_value_t = 0.0)]
    chi: f64,
    /// Measurement direction azimuthal angle, radians
    #[arg(long, default_value_t = 0.0)]
    psi: f64,
    /// Number of sampled outcomes
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// RNG seed
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Also write the output to this file (same bytes as stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReverseMcArgs {
    /// Strength on |1⟩; must lie strictly inside (0, 1)
    #[arg(long, value_parser = parse_probability)]
    p: f64,
    /// Strength on |0⟩; must lie strictly inside (0, 1)
    #[arg(long, value_parser = parse_probability)]
    q: f64,
    /// Input state polar angle, radians
    #[arg(long, default_value_t = FRAC_PI_2)]
    theta: f64,
    /// Input state azimuthal angle, radians
    #[arg(long, default_value_t = 0.0)]
    phi: f64,
    /// Number of protocol runs
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// RNG seed
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Also write the output to this file (same bytes as stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FisherSurfaceArgs {
    /// State polar angle, radians
    #[arg(long, default_value_t = FRAC_PI_2)]
    theta: f64,
    /// State azimuthal angle, radians
    #[arg(long, default_value_t = 0.0)]
    phi: f64,
    /// Measurement direction polar angle, radians
    #[arg(long, default_value_t = 0.0)]
    chi: f64,
    /// Measurement direction azimuthal angle, radians
    #[arg(long, default_value_t = 0.0)]
    psi: f64,
    /// Grid points per axis over [0, 1]
    #[arg(long = "grid-n", default_value_t = 101, value_parser = clap::value_parser!(u64).range(2..))]
    grid_n: u64,
    /// RNG seed (echoed in metadata; the surface itself is deterministic)
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Also write the output to this file (same bytes as stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TomographyArgs {
    /// Strength on |1⟩
    #[arg(long, value_parser = parse_probability)]
    p: f64,
    /// Strength on |0⟩
    #[arg(long, value_parser = parse_probability)]
    q: f64,
    /// True state polar angle, radians
    #[arg(long, default_value_t = FRAC_PI_2)]
    theta: f64,
    /// Known state azimuthal angle, radians
    #[arg(long, default_value_t = 0.0)]
    phi: f64,
    /// Measurement direction polar angle, radians
    #[arg(long, default_value_t = 0.0)]
    chi: f64,
    /// Measurement direction azimuthal angle, radians
    #[arg(long, default_value_t = 0.0)]
    psi: f64,
    /// Samples per estimation run
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// Number of independent estimation runs
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    runs: u64,
    /// RNG seed
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Also write the output to this file (same bytes as stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DilationCheckArgs {
    /// Strength on |1⟩
    #[arg(long, value_parser = parse_probability)]
    p: f64,
    /// Strength on |0⟩
    #[arg(long, value_parser = parse_probability)]
    q: f64,
    /// RNG seed (echoed in metadata; the checks are deterministic)
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Flip one amplitude sign before comparing, to confirm the check can
    /// fail (testing hook)
    #[arg(long, hide = true)]
    inject_sign_error: bool,
    /// Also write the output to this file (same bytes as stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parse the process arguments, run the selected command, and return the
/// process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Measure(args) => cmd_measure(&args).map(|text| (text, 0, args.out)),
        Command::ReverseMc(args) => cmd_reverse_mc(&args).map(|text| (text, 0, args.out)),
        Command::FisherSurface(args) => cmd_fisher_surface(&args).map(|text| (text, 0, args.out)),
        Command::Tomography(args) => cmd_tomography(&args).map(|text| (text, 0, args.out)),
        Command::DilationCheck(args) => {
            cmd_dilation_check(&args).map(|(text, code)| (text, code, args.out))
        }
    };
    match outcome {
        Ok((text, code, out)) => {
            if let Err(e) = emit(&text, out.as_deref()) {
                eprintln!("error: {e}");
                return 3;
            }
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            3
        }
    }
}

fn emit(text: &str, out: Option<&std::path::Path>) -> std::io::Result<()> {
    std::io::stdout().write_all(text.as_bytes())?;
    if let Some(path) = out {
        std::fs::write(path, text.as_bytes())?;
    }
    Ok(())
}

/// 12-significant-digit rendering used for all data values.
fn sig12(v: f64) -> String {
    format!("{v:.11e}")
}

fn cmd_measure(args: &MeasureArgs) -> Result<String> {
    let direction = Direction::new(args.chi, args.psi);
    let pair = MeasurementPair::along(args.p, args.q, direction)?;
    let state = PureState::from_angles(args.theta, args.phi);
    let (prob_m, prob_mbar) = pair.probabilities(&state);

    let mbar_count = parallel_trials(
        args.trials,
        args.seed,
        || 0u64,
        |acc, rng| {
            if pair.sample(&state, rng) == Outcome::MBar {
                *acc += 1;
            }
        },
        |a, b| a + b,
    );
    let freq_mbar = mbar_count as f64 / args.trials as f64;
    let freq_m = (args.trials - mbar_count) as f64 / args.trials as f64;

    let mut text = format!(
        "# qpovm {} measure p={} q={} theta={} phi={} chi={} psi={} trials={} seed={}\n",
        env!("CARGO_PKG_VERSION"),
        args.p,
        args.q,
        args.theta,
        args.phi,
        args.chi,
        args.psi,
        args.trials,
        args.seed
    );
    text.push_str("outcome,exact_prob,empirical_freq,trials,seed\n");
    for (outcome, exact, freq) in [
        (Outcome::M, prob_m, freq_m),
        (Outcome::MBar, prob_mbar, freq_mbar),
    ] {
        text.push_str(&format!(
            "{},{},{},{},{}\n",
            outcome.label(),
            sig12(exact),
            sig12(freq),
            args.trials,
            args.seed
        ));
    }
    Ok(text)
}

fn cmd_reverse_mc(args: &ReverseMcArgs) -> Result<String> {
    let state = PureState::from_angles(args.theta, args.phi);
    let stats = estimate_success_rate(&state, args.p, args.q, args.trials, args.seed)?;
    let exact = reversal_success_probability(args.p, args.q);

    let mut text = format!(
        "# qpovm {} reverse-mc p={} q={} theta={} phi={} trials={} seed={}\n",
        env!("CARGO_PKG_VERSION"),
        args.p,
        args.q,
        args.theta,
        args.phi,
        args.trials,
        args.seed
    );
    text.push_str("p,q,trials,successes,empirical_rate,exact_rate,seed\n");
    text.push_str(&format!(
        "{},{},{},{},{},{},{}\n",
        sig12(args.p),
        sig12(args.q),
        stats.trials,
        stats.successes,
        sig12(stats.empirical_rate()),
        sig12(exact),
        args.seed
    ));
    Ok(text)
}

fn cmd_fisher_surface(args: &FisherSurfaceArgs) -> Result<String> {
    let rows = fisher_surface(
        args.theta,
        args.chi,
        args.psi,
        args.phi,
        args.grid_n as usize,
    )?;

    let mut text = format!(
        "# qpovm {} fisher-surface theta={} phi={} chi={} psi={} grid_n={} seed={}\n",
        env!("CARGO_PKG_VERSION"),
        args.theta,
        args.phi,
        args.chi,
        args.psi,
        args.grid_n,
        args.seed
    );
    text.push_str("p,q,f_tt,f_tp,f_pp\n");
    for row in rows {
        text.push_str(&format!(
            "{},{},{},{},{}\n",
            sig12(row.p),
            sig12(row.q),
            sig12(row.f_tt),
            sig12(row.f_tp),
            sig12(row.f_pp)
        ));
    }
    Ok(text)
}

fn cmd_tomography(args: &TomographyArgs) -> Result<String> {
    let direction = Direction::new(args.chi, args.psi);
    let pair = MeasurementPair::along(args.p, args.q, direction)?;
    let state = PureState::from_angles(args.theta, args.phi);

    let mut text =
        format!(
        "# qpovm {} tomography p={} q={} theta={} phi={} chi={} psi={} trials={} runs={} seed={}\n",
        env!("CARGO_PKG_VERSION"),
        args.p, args.q, args.theta, args.phi, args.chi, args.psi, args.trials, args.runs, args.seed
    );
    text.push_str("run_id,theta_true,theta_hat,crb_var,empirical_sq_err\n");

    let mut sum_hat = 0.0;
    let mut sum_sq_err = 0.0;
    for run in 0..args.runs {
        let mbar_count = parallel_trials(
            args.trials,
            mix(args.seed, run),
            || 0u64,
            |acc, rng| {
                if pair.sample(&state, rng) == Outcome::MBar {
                    *acc += 1;
                }
            },
            |a, b| a + b,
        );
        let counts = [(args.trials - mbar_count, mbar_count)];
        let est = mle_estimate(&counts, &[direction], args.p, args.q, Some(args.phi))?;
        let sq_err = (est.theta_hat - args.theta).powi(2);
        sum_hat += est.theta_hat;
        sum_sq_err += sq_err;
        text.push_str(&format!(
            "{},{},{},{},{}\n",
            run,
            sig12(args.theta),
            sig12(est.theta_hat),
            sig12(est.crb_variance_theta),
            sig12(sq_err)
        ));
    }

    let info = fisher_matrix(args.theta, args.phi, &direction, args.p, args.q)?;
    let crb_true = if info.f_tt > INFO_FLOOR {
        1.0 / (info.f_tt * args.trials as f64)
    } else {
        f64::INFINITY
    };
    text.push_str(&format!(
        "summary,{},{},{},{}\n",
        sig12(args.theta),
        sig12(sum_hat / args.runs as f64),
        sig12(crb_true),
        sig12(sum_sq_err / args.runs as f64)
    ));
    Ok(text)
}

fn cmd_dilation_check(args: &DilationCheckArgs) -> Result<(String, i32)> {
    let mut report = verify_dilation(args.p, args.q, DILATION_TAU, DILATION_NU)?;
    if args.inject_sign_error {
        let reference = build_naimark_unitary(args.p, args.q)?;
        let mut corrupted = reference.u;
        corrupted.0[1][0] = -corrupted.0[1][0];
        report.gates_vs_naimark = report
            .gates_vs_naimark
            .max(reference.u.phase_aligned_diff(&corrupted));
    }

    let mut text = format!(
        "# qpovm {} dilation-check p={} q={} seed={}\n",
        env!("CARGO_PKG_VERSION"),
        args.p,
        args.q,
        args.seed
    );
    for (label, value) in [
        ("unitarity_defect", report.unitarity),
        ("gates_vs_unitary", report.gates_vs_naimark),
        ("doublewell_vs_unitary", report.doublewell_vs_naimark),
        ("kraus_m_deviation", report.kraus_m_deviation),
        ("kraus_mbar_deviation", report.kraus_mbar_deviation),
        ("completeness_defect", report.completeness_defect),
        ("born_rule_deviation", report.born_rule_deviation),
        ("max_deviation", report.max_deviation()),
    ] {
        text.push_str(&format!("{label}: {}\n", sig12(value)));
    }
    let pass = report.max_deviation() < EPS_NUM;
    text.push_str(&format!(
        "result: {} (threshold {:e})\n",
        if pass { "PASS" } else { "FAIL" },
        EPS_NUM
    ));
    Ok((text, if pass { 0 } else { 4 }))
}
