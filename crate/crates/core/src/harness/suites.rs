//! The verification suites behind the CLI subcommands.
//!
//! Each suite is a pure function of its [`ExperimentConfig`]: it fans out
//! over grid points (rayon with indexed collection, so completion order
//! cannot leak into results), gathers [`ReportRow`]s, and sorts them
//! canonically. Statistical checks derive every random draw from
//! `(seed, stream_id)` with disjoint stream ranges per check, which makes
//! whole reports byte-identical across runs and thread counts.

use crate::chain::{ChainParams, Pmf, WindowKind};
use crate::checks::{
    concentration_report, equilibrium_gaussian_gap, mminf_discrepancy, ou_discrepancy,
    queue_rate_gap, DiscrepancyReport,
};
use crate::error::{Error, Result};
use crate::exact::{evolve, tv_distance, EvolveOptions, ProfileEntry};
use crate::harness::config::ExperimentConfig;
use crate::harness::report::{sort_rows, ReportRow};
use crate::limits::{consistency_gap, limit_profile, Regime, TimeForm};
use crate::sim::{
    empirical_pmf, exp_sum_sample, expected_hitting_time_zero, hitting_time_zero, run_coupled,
    RngStream,
};
use crate::tolerances as tol;
use rayon::prelude::*;

/// Result of one suite run: the report rows plus the aggregate verdict.
#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub rows: Vec<ReportRow>,
    pub passed: bool,
}

impl SuiteOutcome {
    fn from_rows(mut rows: Vec<ReportRow>) -> Self {
        sort_rows(&mut rows);
        let passed = rows.iter().all(|r| r.passed);
        SuiteOutcome { rows, passed }
    }

    fn merge(outcomes: Vec<SuiteOutcome>) -> Self {
        let mut rows = Vec::new();
        for o in outcomes {
            rows.extend(o.rows);
        }
        SuiteOutcome::from_rows(rows)
    }
}

/// Disjoint stream ranges per statistical check: the check index occupies
/// the high stream bits, trajectory indices the low ones.
fn check_stream(seed: u64, check_no: u64) -> RngStream {
    RngStream::new(seed, check_no << 40)
}

fn check_row(
    suite: &str,
    label: impl Into<String>,
    n: u64,
    k: u64,
    value: f64,
    tolerance: f64,
    seed: u64,
) -> ReportRow {
    ReportRow {
        suite: suite.to_string(),
        label: label.into(),
        n,
        k,
        theta: None,
        t: None,
        value,
        limit: None,
        gap: None,
        tolerance,
        passed: value <= tolerance,
        seed,
    }
}

fn discrepancy_row(suite: &str, seed: u64, rep: DiscrepancyReport) -> ReportRow {
    ReportRow {
        suite: suite.to_string(),
        label: format!("{} [{}]", rep.label, rep.statistic),
        n: rep.n,
        k: rep.k,
        theta: None,
        t: None,
        value: rep.value,
        limit: None,
        gap: None,
        tolerance: rep.tolerance,
        passed: rep.passed,
        seed,
    }
}

/// Worst adjacent increase along a ladder; strictly decreasing sequences
/// give a negative value.
fn worst_increase(values: &[f64]) -> f64 {
    values
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::NEG_INFINITY, f64::max)
}

// ───────────────────────────── moments ────────────────────────────────

/// Exactness of the engine against the closed forms: transient moments,
/// detailed balance and stationarity, and the centered rate identities.
pub fn run_moments_suite(cfg: &ExperimentConfig) -> Result<SuiteOutcome> {
    let suite = "moments";
    let seed = cfg.seed;
    let mut rows = Vec::new();
    let opts = EvolveOptions::default();

    // Transient moments against the closed forms, from the worst-case
    // start x0 = k.
    let moment_tol = cfg.tolerance("moment_rel", tol::MOMENT_REL_TOL);
    for &n in &[100u64, 1000] {
        let sqrt_k = (n as f64).sqrt().ceil() as u64;
        for &k in &[n / 2, sqrt_k] {
            let p = ChainParams::new(n, k)?;
            for &t in &[n as f64 / 10.0, n as f64, 5.0 * n as f64] {
                let law = evolve(&p, &Pmf::point_mass(k as usize), t, &opts)?;
                let mean_err = relative_error(law.mean(), p.mean_at(k, t)?);
                let var_err = relative_error(law.variance(), p.variance_at(k, t)?);
                rows.push(check_row(
                    suite,
                    format!("moment-mean k={k} t={t}"),
                    n,
                    k,
                    mean_err,
                    moment_tol,
                    seed,
                ));
                rows.push(check_row(
                    suite,
                    format!("moment-variance k={k} t={t}"),
                    n,
                    k,
                    var_err,
                    moment_tol,
                    seed,
                ));
            }
        }
    }

    // Detailed balance and the stationary fixed point at (1000, 500).
    let p = ChainParams::new(1000, 500)?;
    let pi = p.stationary_pmf();
    let mut worst_edge = 0.0f64;
    for x in 0..p.k() {
        let lhs = pi.prob(x as usize) * p.birth_rate(x)?;
        let rhs = pi.prob(x as usize + 1) * p.death_rate(x + 1)?;
        worst_edge = worst_edge.max((lhs - rhs).abs());
    }
    rows.push(check_row(
        suite,
        "detailed-balance max-edge-residual",
        p.n(),
        p.k(),
        worst_edge,
        cfg.tolerance("detailed_balance", tol::DETAILED_BALANCE_TOL),
        seed,
    ));
    let drift = tv_distance(&evolve(&p, &pi, p.n() as f64, &opts)?, &pi);
    rows.push(check_row(
        suite,
        "stationary-fixed-point tv",
        p.n(),
        p.k(),
        drift,
        cfg.tolerance("stationary_fixed_point", tol::STATIONARY_FIXED_POINT_TOL),
        seed,
    ));

    // Centered rate identities over the whole state space.
    let identity_tol = cfg.tolerance("rate_identity", tol::RATE_IDENTITY_TOL);
    for &(n, k) in &[(10u64, 5u64), (1000, 500), (1_000_000, 1000)] {
        let p = ChainParams::new(n, k)?;
        let nf = n as f64;
        let kappa = p.kappa();
        let const_term = 4.0 * kappa * kappa * (1.0 - kappa) * (1.0 - kappa);
        let lin_coef = 8.0 * (0.5 - kappa) * (0.5 - kappa);
        let mut worst_drift = 0.0f64;
        let mut worst_total = 0.0f64;
        for x in 0..=k {
            let xbar = x as f64 - p.center();
            let drift = p.birth_rate(x)? - p.death_rate(x)?;
            worst_drift = worst_drift.max((drift - (-2.0 * xbar / nf)).abs());
            let total = p.total_rate(x)?;
            let expected = const_term + lin_coef * xbar / nf + 4.0 * xbar * xbar / (nf * nf);
            worst_total = worst_total.max((total - expected).abs());
        }
        rows.push(check_row(
            suite,
            "rate-identity drift",
            n,
            k,
            worst_drift,
            identity_tol,
            seed,
        ));
        rows.push(check_row(
            suite,
            "rate-identity total",
            n,
            k,
            worst_total,
            identity_tol,
            seed,
        ));
    }

    Ok(SuiteOutcome::from_rows(rows))
}

fn relative_error(got: f64, expected: f64) -> f64 {
    if expected == 0.0 {
        got.abs()
    } else {
        (got - expected).abs() / expected.abs()
    }
}

// ───────────────────────────── profile ────────────────────────────────

/// Exact-vs-limit profile curves over the configured ladder, with per-`n`
/// max gaps, the final-`n` threshold, and the monotone-trend verdict.
pub fn run_profile_suite(cfg: &ExperimentConfig) -> Result<SuiteOutcome> {
    let suite = format!("profile-{}", cfg.regime.name());
    let seed = cfg.seed;
    let thetas = cfg.theta_grid.points();
    let opts = EvolveOptions::default();
    let mut rows = Vec::new();
    let mut max_gaps = Vec::new();

    let ladder = cfg.ladder();
    for (i, &(n, k)) in ladder.iter().enumerate() {
        let p = ChainParams::new(n, k)?;
        if !cfg.regime.matches(&p) {
            eprintln!(
                "warning: (n, k) = ({n}, {k}) does not match the {} ladder rule (k = {})",
                cfg.regime.name(),
                cfg.regime.ladder_k(n)
            );
        }
        let entries = crate::exact::profile_curve(&p, &cfg.regime, &thetas, &opts)?;
        let mut max_gap = 0.0f64;
        let mut evaluated = 0usize;
        for entry in &entries {
            match entry {
                ProfileEntry::Point(pt) => {
                    evaluated += 1;
                    max_gap = max_gap.max(pt.gap);
                    rows.push(ReportRow {
                        suite: suite.clone(),
                        label: "profile-point".into(),
                        n,
                        k,
                        theta: Some(pt.theta),
                        t: Some(pt.t),
                        value: pt.tv_exact,
                        limit: Some(pt.tv_limit),
                        gap: Some(pt.gap),
                        tolerance: 1.0,
                        passed: pt.gap <= 1.0,
                        seed,
                    });
                }
                ProfileEntry::SkippedNegativeTime { theta, t } => {
                    rows.push(ReportRow {
                        suite: suite.clone(),
                        label: "profile-point-skipped-negative-time".into(),
                        n,
                        k,
                        theta: Some(*theta),
                        t: Some(*t),
                        value: 0.0,
                        limit: None,
                        gap: None,
                        tolerance: 1.0,
                        passed: true,
                        seed,
                    });
                }
            }
        }
        if evaluated == 0 {
            return Err(Error::contract(format!(
                "no admissible theta grid point at n = {n}"
            )));
        }
        let is_final = i + 1 == ladder.len();
        let gap_tol = if is_final {
            cfg.tolerance("profile_final_gap", tol::PROFILE_FINAL_GAP_TOL)
        } else {
            1.0
        };
        rows.push(check_row(
            &suite,
            format!("profile-max-gap{}", if is_final { " final" } else { "" }),
            n,
            k,
            max_gap,
            gap_tol,
            seed,
        ));
        max_gaps.push(max_gap);
    }

    if max_gaps.len() >= 2 {
        let (n_last, k_last) = *ladder.last().expect("non-empty ladder");
        rows.push(check_row(
            &suite,
            "profile-trend worst-increase",
            n_last,
            k_last,
            worst_increase(&max_gaps),
            0.0,
            seed,
        ));
    }

    // The two critical time forms describe one curve up to a clock shift of
    // log(alpha)/4; check the identity on the grid whenever the suite runs
    // in the critical regime.
    if matches!(cfg.regime, Regime::Critical { .. }) {
        let reparam_tol = cfg.tolerance("reparam_identity", tol::REPARAM_IDENTITY_TOL);
        for &alpha in &[0.25f64, 1.0, 4.0] {
            let quarter = Regime::critical(alpha, TimeForm::QuarterLogN)?;
            let half = Regime::critical(alpha, TimeForm::HalfLogK)?;
            let mut worst = 0.0f64;
            for &theta in &thetas {
                let f1 = limit_profile(&quarter, theta)?;
                let f2 = limit_profile(&half, theta - 0.25 * alpha.ln())?;
                worst = worst.max((f1 - f2).abs());
            }
            let (n_last, k_last) = *ladder.last().expect("non-empty ladder");
            rows.push(check_row(
                &suite,
                format!("reparameterization-identity alpha={alpha}"),
                n_last,
                k_last,
                worst,
                reparam_tol,
                seed,
            ));
        }
    }

    Ok(SuiteOutcome::from_rows(rows))
}

// ──────────────────────────── couplings ───────────────────────────────

/// Coupling and trajectory statistics: order preservation, coalescence
/// inside the lemma window, marginal moments, and the Monte Carlo
/// histogram against the exact law.
pub fn run_couplings_suite(cfg: &ExperimentConfig) -> Result<SuiteOutcome> {
    let suite = "couplings";
    let seed = cfg.seed;
    let samples = cfg.samples;
    let mut rows = Vec::new();

    // Monotonicity: ordered starts must never invert, over the full
    // configured pair count, at both a dense and a sparse geometry.
    for (check_no, &(n, k)) in [(100u64, 50u64), (10_000, 100)].iter().enumerate() {
        let p = ChainParams::new(n, k)?;
        let (x0, y0) = (k / 4, 3 * k / 4);
        let horizon = n as f64;
        let base = check_stream(seed, check_no as u64);
        let violations: u64 = (0..samples)
            .into_par_iter()
            .map(|i| {
                run_coupled(&p, x0, y0, horizon, base.child(i))
                    .map(|o| u64::from(o.order_violated))
            })
            .collect::<Result<Vec<u64>>>()?
            .into_iter()
            .sum();
        rows.push(check_row(
            suite,
            format!("coupling-order-violations x0={x0} y0={y0} pairs={samples}"),
            n,
            k,
            violations as f64 / samples as f64,
            0.0,
            seed,
        ));
    }

    // Coalescence by 4√δ·n from starts at the edge of the lemma window.
    // At this (n, k, δ) the lemma's separation bound δ√n·κ(1-κ) is below
    // one lattice step, so the smallest non-trivial separation (one step)
    // is used instead of the degenerate equal-start pair.
    {
        let delta = 0.01f64;
        let p = ChainParams::new(10_000, 5000)?;
        let sqrt_n = (p.n() as f64).sqrt();
        let window_edge = p.center() - delta.powf(-0.25) * sqrt_n * p.kappa();
        let x0 = window_edge.round() as u64;
        let sep = (delta * p.fluctuation_scale()).floor().max(1.0) as u64;
        let y0 = x0 + sep;
        let horizon = 4.0 * delta.sqrt() * p.n() as f64;
        let base = check_stream(seed, 2);
        let coalesced: u64 = (0..samples)
            .into_par_iter()
            .map(|i| {
                run_coupled(&p, x0, y0, horizon, base.child(i))
                    .map(|o| u64::from(o.coalescence_time.is_some()))
            })
            .collect::<Result<Vec<u64>>>()?
            .into_iter()
            .sum();
        let fraction = coalesced as f64 / samples as f64;
        let se = (fraction * (1.0 - fraction) / samples as f64).sqrt();
        let bound = 2.0 * delta.powf(0.25) + 3.0 * se;
        rows.push(check_row(
            suite,
            format!("coupling-uncoalesced-fraction delta={delta} x0={x0} y0={y0}"),
            p.n(),
            p.k(),
            1.0 - fraction,
            bound,
            seed,
        ));
    }

    // Marginal moments of simulated paths against the closed forms.
    {
        let p = ChainParams::new(100, 50)?;
        let t = 50.0;
        let base = check_stream(seed, 3);
        let finals: Vec<f64> = (0..samples)
            .into_par_iter()
            .map(|i| {
                let law = empirical_pmf(&p, 50, t, 1, base.child(i))?;
                Ok(law.mean())
            })
            .collect::<Result<Vec<f64>>>()?;
        let n_f = samples as f64;
        let mean = finals.iter().sum::<f64>() / n_f;
        let var = finals.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n_f;
        let m4 = finals.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n_f;
        let se_mean = (var / n_f).sqrt();
        let se_var = ((m4 - var * var).max(0.0) / n_f).sqrt();
        rows.push(check_row(
            suite,
            format!("sim-moment-mean t={t} paths={samples}"),
            p.n(),
            p.k(),
            (mean - p.mean_at(50, t)?).abs(),
            3.0 * se_mean,
            seed,
        ));
        rows.push(check_row(
            suite,
            format!("sim-moment-variance t={t} paths={samples}"),
            p.n(),
            p.k(),
            (var - p.variance_at(50, t)?).abs(),
            3.0 * se_var,
            seed,
        ));
    }

    // Monte Carlo histogram against the exact law.
    {
        let p = ChainParams::new(100, 50)?;
        let t = 50.0;
        let exact = evolve(&p, &Pmf::point_mass(50), t, &EvolveOptions::default())?;
        let emp = empirical_pmf(&p, 50, t, samples, check_stream(seed, 4))?;
        rows.push(check_row(
            suite,
            format!("empirical-pmf-tv t={t} paths={samples}"),
            p.n(),
            p.k(),
            tv_distance(&emp, &exact),
            cfg.tolerance("empirical_pmf_tv", tol::EMPIRICAL_PMF_TV_TOL),
            seed,
        ));
    }

    // Hitting times to 0 against the exponential-sum surrogate n/2 · S,
    // compared as binned empirical laws.
    {
        let p = ChainParams::new(10_000, 10)?;
        let x0 = 10u64;
        let base_hit = check_stream(seed, 5);
        let base_sum = check_stream(seed, 6);
        let hits: Vec<f64> = (0..samples)
            .into_par_iter()
            .map(|i| hitting_time_zero(&p, x0, base_hit.child(i)))
            .collect::<Result<Vec<f64>>>()?;
        let sums: Vec<f64> = (0..samples)
            .into_par_iter()
            .map(|i| Ok(0.5 * p.n() as f64 * exp_sum_sample(x0, 0, base_sum.child(i))?))
            .collect::<Result<Vec<f64>>>()?;
        rows.push(check_row(
            suite,
            format!("hitting-vs-exp-sum binned-tv x0={x0} paths={samples}"),
            p.n(),
            p.k(),
            binned_tv(&hits, &sums, 60),
            cfg.tolerance("hitting_vs_exp_sum_tv", tol::HITTING_VS_EXP_SUM_TV_TOL),
            seed,
        ));
    }

    Ok(SuiteOutcome::from_rows(rows))
}

/// Empirical TV between two samples over a shared equal-width binning.
fn binned_tv(a: &[f64], b: &[f64], bins: usize) -> f64 {
    let lo = a
        .iter()
        .chain(b.iter())
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let hi = a
        .iter()
        .chain(b.iter())
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let width = ((hi - lo) / bins as f64).max(f64::MIN_POSITIVE);
    let index = |x: f64| (((x - lo) / width) as usize).min(bins - 1);
    let mut ha = vec![0.0f64; bins];
    let mut hb = vec![0.0f64; bins];
    for &x in a {
        ha[index(x)] += 1.0 / a.len() as f64;
    }
    for &x in b {
        hb[index(x)] += 1.0 / b.len() as f64;
    }
    0.5 * ha
        .iter()
        .zip(hb.iter())
        .map(|(x, y)| (x - y).abs())
        .sum::<f64>()
}

/// One-sample Kolmogorov distance of `samples` against a reference CDF.
pub fn kolmogorov_distance(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let n = sorted.len() as f64;
    let mut worst = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        worst = worst
            .max((f - i as f64 / n).abs())
            .max((f - (i as f64 + 1.0) / n).abs());
    }
    worst
}

// ─────────────────────────── asymptotics ──────────────────────────────

/// Quantified approximations: cross-regime consistency, OU marginals,
/// Gaussian equilibrium, M/M/∞ rates and law, window concentration, and
/// the coupon-collector Gumbel limits.
pub fn run_asymptotics_suite(cfg: &ExperimentConfig) -> Result<SuiteOutcome> {
    let suite = "asymptotics";
    let seed = cfg.seed;
    let mut rows = Vec::new();

    // Cross-regime consistency of the critical profile.
    let consistency_tol = cfg.tolerance("consistency_gap", tol::CONSISTENCY_GAP_TOL);
    let thetas = [-1.0, 0.0, 1.0];
    let mut worst_gauss = 0.0f64;
    let mut worst_gumbel = 0.0f64;
    for &theta in &thetas {
        worst_gauss = worst_gauss.max(consistency_gap(100.0, theta)?.to_gaussian);
        worst_gumbel = worst_gumbel.max(consistency_gap(0.001, theta)?.to_gumbel);
    }
    let p_marker = ChainParams::new(2, 1)?; // consistency gaps have no (n, k)
    rows.push(check_row(
        suite,
        "consistency-gap-to-gaussian alpha=100",
        p_marker.n(),
        p_marker.k(),
        worst_gauss,
        consistency_tol,
        seed,
    ));
    rows.push(check_row(
        suite,
        "consistency-gap-to-gumbel alpha=0.001",
        p_marker.n(),
        p_marker.k(),
        worst_gumbel,
        consistency_tol,
        seed,
    ));

    // OU marginal ladder at (z, s) = (2, 1); threshold applies at n = 10^4.
    {
        let ou_tol = cfg.tolerance("ou_discrepancy", tol::OU_DISCREPANCY_TOL);
        let mut values = Vec::new();
        for &n in &[1000u64, 10_000, 100_000] {
            let p = ChainParams::new(n, n / 2)?;
            let rep = ou_discrepancy(&p, 2.0, 1.0, if n == 10_000 { ou_tol } else { 1.0 })?;
            values.push(rep.value);
            rows.push(discrepancy_row(suite, seed, rep));
        }
        rows.push(check_row(
            suite,
            "ou-marginal-trend worst-increase",
            100_000,
            50_000,
            worst_increase(&values),
            0.0,
            seed,
        ));
    }

    // Gaussian equilibrium ladder with k = n/2, plus the golden envelope.
    {
        let eq_tol = cfg.tolerance("eq_gaussian_final", tol::EQ_GAUSSIAN_FINAL_TOL);
        let envelope = cfg.tolerance("eq_gaussian_envelope", tol::EQ_GAUSSIAN_ENVELOPE_CONST);
        let ladder = [10_000u64, 100_000, 1_000_000];
        let mut values = Vec::new();
        for (i, &n) in ladder.iter().enumerate() {
            let p = ChainParams::new(n, n / 2)?;
            let is_final = i + 1 == ladder.len();
            let rep = equilibrium_gaussian_gap(&p, if is_final { eq_tol } else { 1.0 });
            values.push(rep.value);
            rows.push(check_row(
                suite,
                "equilibrium-gaussian-envelope sqrt(n)*gap",
                n,
                n / 2,
                rep.value * (n as f64).sqrt(),
                envelope,
                seed,
            ));
            rows.push(discrepancy_row(suite, seed, rep));
        }
        rows.push(check_row(
            suite,
            "equilibrium-gaussian-trend worst-increase",
            1_000_000,
            500_000,
            worst_increase(&values),
            0.0,
            seed,
        ));
    }

    // M/M/∞ rate convergence at x = 3, α = 1 across three decades.
    {
        let mut ups = Vec::new();
        let mut downs = Vec::new();
        let ladder = [10_000u64, 1_000_000, 100_000_000];
        for &n in &ladder {
            let k = (n as f64).sqrt().ceil() as u64;
            let p = ChainParams::new(n, k)?;
            let gap = queue_rate_gap(&p, 3, 1.0)?;
            ups.push(gap.up_gap);
            downs.push(gap.down_gap.expect("x = 3 has a down rate"));
            rows.push(check_row(
                suite,
                "queue-rate-gap up x=3",
                n,
                k,
                gap.up_gap,
                1.0,
                seed,
            ));
            rows.push(check_row(
                suite,
                "queue-rate-gap down x=3",
                n,
                k,
                gap.down_gap.expect("x = 3 has a down rate"),
                1.0,
                seed,
            ));
        }
        let (n_last, k_last) = (ladder[2], (ladder[2] as f64).sqrt().ceil() as u64);
        rows.push(check_row(
            suite,
            "queue-rate-trend up worst-increase",
            n_last,
            k_last,
            worst_increase(&ups),
            0.0,
            seed,
        ));
        rows.push(check_row(
            suite,
            "queue-rate-trend down worst-increase",
            n_last,
            k_last,
            worst_increase(&downs),
            0.0,
            seed,
        ));
    }

    // M/M/∞ transient law at α = 1, C = 50, θ = 0 across the ladder.
    {
        let mminf_tol = cfg.tolerance("mminf", tol::MMINF_TOL);
        let c = 50.0;
        let x0 = 50u64;
        let ladder = [10_000u64, 100_000, 1_000_000];
        let mut values = Vec::new();
        for (i, &n) in ladder.iter().enumerate() {
            let k = (n as f64).sqrt().ceil() as u64;
            let p = ChainParams::new(n, k)?;
            let is_final = i + 1 == ladder.len();
            let rep = mminf_discrepancy(&p, x0, 0.0, c, if is_final { mminf_tol } else { 1.0 })?;
            values.push(rep.value);
            rows.push(discrepancy_row(suite, seed, rep));
        }
        rows.push(check_row(
            suite,
            "mminf-trend worst-increase",
            ladder[2],
            1000,
            worst_increase(&values),
            0.0,
            seed,
        ));
    }

    // Window concentration, one check per window side.
    {
        let p = ChainParams::new(10_000, 5000)?;
        let rep = concentration_report(
            &p,
            100.0,
            0.5,
            WindowKind::Plus,
            cfg.samples,
            check_stream(seed, 7),
            cfg.tolerance("concentration_plus", tol::CONCENTRATION_PLUS_TOL),
        )?;
        rows.push(discrepancy_row(suite, seed, rep));

        let p = ChainParams::new(1_000_000, 100)?;
        let rep = concentration_report(
            &p,
            20.0,
            0.5,
            WindowKind::Minus,
            cfg.samples,
            check_stream(seed, 8),
            cfg.tolerance("concentration_minus", tol::CONCENTRATION_MINUS_TOL),
        )?;
        rows.push(discrepancy_row(suite, seed, rep));
    }

    // Coupon-collector: exact hitting mean, exponential-sum Gumbel limit,
    // and the rescaled hitting-time Gumbel limit.
    {
        let p = ChainParams::new(20, 2)?;
        let base = check_stream(seed, 9);
        let times: Vec<f64> = (0..cfg.samples)
            .into_par_iter()
            .map(|i| hitting_time_zero(&p, 2, base.child(i)))
            .collect::<Result<Vec<f64>>>()?;
        let n_f = cfg.samples as f64;
        let mean = times.iter().sum::<f64>() / n_f;
        let var = times.iter().map(|t| (t - mean) * (t - mean)).sum::<f64>() / n_f;
        let se = (var / n_f).sqrt();
        let oracle = expected_hitting_time_zero(&p, 2)?;
        rows.push(check_row(
            suite,
            format!("hitting-mean first-step-oracle {oracle:.6}"),
            p.n(),
            p.k(),
            (mean - oracle).abs(),
            3.0 * se,
            seed,
        ));
    }
    let gumbel_cdf = |x: f64| f64::exp(-f64::exp(-x));
    {
        let m = 10_000u64;
        let base = check_stream(seed, 10);
        let ln_m = (m as f64).ln();
        let samples: Vec<f64> = (0..cfg.ks_samples)
            .into_par_iter()
            .map(|i| Ok(exp_sum_sample(m, 0, base.child(i))? - ln_m))
            .collect::<Result<Vec<f64>>>()?;
        rows.push(check_row(
            suite,
            format!("exp-sum-gumbel-ks m={m} samples={}", cfg.ks_samples),
            m,
            1,
            kolmogorov_distance(&samples, gumbel_cdf),
            cfg.tolerance("exp_sum_ks", tol::EXP_SUM_KS_TOL),
            seed,
        ));
    }
    {
        let p = ChainParams::new(1_000_000, 63)?;
        let base = check_stream(seed, 11);
        let ln_k = 63.0f64.ln();
        let samples: Vec<f64> = (0..cfg.samples)
            .into_par_iter()
            .map(|i| Ok(2.0 * hitting_time_zero(&p, 63, base.child(i))? / p.n() as f64 - ln_k))
            .collect::<Result<Vec<f64>>>()?;
        rows.push(check_row(
            suite,
            format!("tau0-gumbel-ks x0=63 runs={}", cfg.samples),
            p.n(),
            p.k(),
            kolmogorov_distance(&samples, gumbel_cdf),
            cfg.tolerance("tau0_gumbel_ks", tol::TAU0_GUMBEL_KS_TOL),
            seed,
        ));
    }

    Ok(SuiteOutcome::from_rows(rows))
}

// ─────────────────────────── verify (all) ─────────────────────────────

/// Runs every suite: moments, couplings, asymptotics, and the three
/// regime profiles on their contract ladders.
pub fn run_verify_all(cfg: &ExperimentConfig) -> Result<SuiteOutcome> {
    let mut outcomes = Vec::new();
    outcomes.push(run_moments_suite(cfg)?);
    outcomes.push(run_couplings_suite(cfg)?);
    outcomes.push(run_asymptotics_suite(cfg)?);

    let mut large = cfg.clone();
    large.regime = Regime::Large;
    large.n_ladder = vec![512, 2048, 8192];
    large.k_ladder = None;
    outcomes.push(run_profile_suite(&large)?);

    let mut critical = cfg.clone();
    critical.regime = Regime::Critical {
        alpha: 1.0,
        time_form: TimeForm::HalfLogK,
    };
    critical.n_ladder = vec![10_000, 100_000, 1_000_000];
    critical.k_ladder = None;
    outcomes.push(run_profile_suite(&critical)?);

    let mut small = cfg.clone();
    small.regime = Regime::Small;
    small.n_ladder = vec![10_000, 100_000, 1_000_000];
    small.k_ladder = None;
    outcomes.push(run_profile_suite(&small)?);

    Ok(SuiteOutcome::merge(outcomes))
}
