//! Quantifies the approximations behind the limit profiles: the
//! Ornstein–Uhlenbeck marginal against the rescaled chain, the Gaussian
//! approximation of equilibrium, the M/M/∞ rate and law limits, and the
//! concentration of the chain at the window times.
//!
//! Every check reduces to a [`DiscrepancyReport`]: a named scalar statistic
//! compared against a tolerance. Asymptotic statements are checked as
//! trends across an `n`-ladder plus a pilot-calibrated threshold at the
//! largest `n`; see [`crate::tolerances`] for the thresholds and their
//! provenance.

use crate::chain::{ChainParams, Pmf, WindowKind};
use crate::error::{Error, Result};
use crate::exact::{evolve, tv_distance, EvolveOptions};
use crate::limits::{binpois_convolution, normal_cdf, GaussianLaw};
use crate::sim::{empirical_pmf, RngStream};
use serde::{Deserialize, Serialize};

/// Above this state-space size, probability statements fall back to Monte
/// Carlo instead of exact evolution.
const EXACT_STATE_LIMIT: usize = 200_001;

/// Which scalar a [`DiscrepancyReport`] carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Statistic {
    Tv,
    Kolmogorov,
    RatioGap,
    Probability,
}

impl std::fmt::Display for Statistic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Statistic::Tv => "tv",
            Statistic::Kolmogorov => "kolmogorov",
            Statistic::RatioGap => "ratio-gap",
            Statistic::Probability => "probability",
        };
        f.write_str(s)
    }
}

/// One quantified approximation: `passed` holds exactly when
/// `value <= tolerance`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscrepancyReport {
    pub label: String,
    pub n: u64,
    pub k: u64,
    pub statistic: Statistic,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl DiscrepancyReport {
    pub fn new(
        label: impl Into<String>,
        p: &ChainParams,
        statistic: Statistic,
        value: f64,
        tolerance: f64,
    ) -> Self {
        DiscrepancyReport {
            label: label.into(),
            n: p.n(),
            k: p.k(),
            statistic,
            value,
            tolerance,
            passed: value <= tolerance,
        }
    }
}

/// The diffusion-scaling map `x ↦ (x - κ²n) / (√n κ(1-κ))`.
pub fn rescale_state(p: &ChainParams, x: u64) -> Result<f64> {
    if x > p.k() {
        return Err(Error::domain(format!("state {x} outside [0, {}]", p.k())));
    }
    Ok((x as f64 - p.center()) / p.fluctuation_scale())
}

/// Law of the limiting Ornstein–Uhlenbeck diffusion (drift `-2x`,
/// diffusion constant `2`) at rescaled time `s` started from `z`:
/// `N(z e^{-2s}, 1 - e^{-4s})`.
pub fn ou_marginal(z: f64, s: f64) -> Result<GaussianLaw> {
    if !s.is_finite() || s < 0.0 {
        return Err(Error::domain(format!("rescaled time s={s} must be >= 0")));
    }
    if !z.is_finite() {
        return Err(Error::domain(format!("start point z={z} must be finite")));
    }
    let mean = z * (-2.0 * s).exp();
    let var = -f64::exp_m1(-4.0 * s);
    GaussianLaw::new(mean, var.max(0.0).sqrt())
}

/// TV between the exactly-evolved chain at time `n·s` (started from the
/// lattice point nearest `κ²n + z·√n κ(1-κ)`) and the OU marginal
/// integrated over the matching lattice cells.
///
/// The comparison starts the diffusion from the realized lattice point, so
/// at `s = 0` the distance is zero by construction and the reported value
/// isolates the dynamics, not the initial rounding.
pub fn ou_discrepancy(p: &ChainParams, z: f64, s: f64, tolerance: f64) -> Result<DiscrepancyReport> {
    if !s.is_finite() || s < 0.0 {
        return Err(Error::domain(format!("rescaled time s={s} must be >= 0")));
    }
    let scale = p.fluctuation_scale();
    let x0f = (p.center() + z * scale).round();
    if x0f < 0.0 || x0f > p.k() as f64 {
        return Err(Error::domain(format!(
            "rescaled start z={z} maps to lattice point {x0f} outside [0, {}]",
            p.k()
        )));
    }
    let x0 = x0f as u64;
    let z_eff = rescale_state(p, x0)?;
    let gauss = ou_marginal(z_eff, s)?;

    let law = evolve(
        p,
        &Pmf::point_mass(x0 as usize),
        p.n() as f64 * s,
        &EvolveOptions::default(),
    )?;

    let value = tv_lattice_vs_gaussian(p, &law, &gauss);
    Ok(DiscrepancyReport::new(
        format!("ou-marginal z={z} s={s}"),
        p,
        Statistic::Tv,
        value,
        tolerance,
    ))
}

/// Coarsens `gauss` to the lattice cells `[(y-1/2), (y+1/2)]` (in rescaled
/// coordinates) and takes the discrete TV; Gaussian mass beyond the last
/// cells counts fully since the chain puts nothing there.
fn tv_lattice_vs_gaussian(p: &ChainParams, law: &Pmf, gauss: &GaussianLaw) -> f64 {
    let scale = p.fluctuation_scale();
    let center = p.center();
    let mut half_l1 = crate::numeric::KahanAccumulator::default();
    let mut covered = crate::numeric::KahanAccumulator::default();
    let mut lo_cdf = gauss.cdf((-0.5 - center) / scale);
    for y in 0..p.num_states() {
        let hi_cdf = gauss.cdf((y as f64 + 0.5 - center) / scale);
        let cell = (hi_cdf - lo_cdf).max(0.0);
        half_l1.add((law.prob(y) - cell).abs());
        covered.add(cell);
        lo_cdf = hi_cdf;
    }
    let outside = (1.0 - covered.total()).max(0.0);
    (0.5 * (half_l1.total() + outside)).min(1.0)
}

/// Kolmogorov distance between the rescaled equilibrium (hypergeometric)
/// CDF and the standard normal CDF.
pub fn equilibrium_gaussian_gap(p: &ChainParams, tolerance: f64) -> DiscrepancyReport {
    let pi = p.stationary_pmf();
    let cdf = pi.cdf();
    let mut worst = 0.0f64;
    let mut below = 0.0f64;
    for (y, &at_y) in cdf.iter().enumerate() {
        let u = (y as f64 - p.center()) / p.fluctuation_scale();
        let phi = normal_cdf(u);
        worst = worst.max((at_y - phi).abs()).max((below - phi).abs());
        below = at_y;
    }
    DiscrepancyReport::new(
        "equilibrium-gaussian-kolmogorov",
        p,
        Statistic::Kolmogorov,
        worst,
        tolerance,
    )
}

/// Relative gaps between the sped-up urn rates and the M/M/∞ rates
/// (`2α` up, `2x` down) at state `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueueRateGap {
    /// `|n·up(x) / (2α) - 1|`
    pub up_gap: f64,
    /// `|n·down(x) / (2x) - 1|`; undefined at `x = 0`.
    pub down_gap: Option<f64>,
}

pub fn queue_rate_gap(p: &ChainParams, x: u64, alpha: f64) -> Result<QueueRateGap> {
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::domain(format!("alpha {alpha} must be finite and > 0")));
    }
    let n = p.n() as f64;
    let up_gap = (n * p.birth_rate(x)? / (2.0 * alpha) - 1.0).abs();
    let down_gap = if x >= 1 {
        Some((n * p.death_rate(x)? / (2.0 * x as f64) - 1.0).abs())
    } else {
        None
    };
    Ok(QueueRateGap { up_gap, down_gap })
}

/// TV between the chain evolved for `n·s` past the minus-window start and
/// the M/M/∞ transient law `Bin(x0, e^{-2s}) + Pois(α(1 - e^{-2s}))`, with
/// `s = log(C)/2 + θ` and `α = k²/n`.
pub fn mminf_discrepancy(
    p: &ChainParams,
    x0: u64,
    theta: f64,
    c: f64,
    tolerance: f64,
) -> Result<DiscrepancyReport> {
    if !c.is_finite() || c <= 0.0 {
        return Err(Error::domain(format!("window scale C={c} must be positive")));
    }
    let s = 0.5 * c.ln() + theta;
    if s < 0.0 {
        return Err(Error::domain(format!(
            "comparison time s={s} (C={c}, theta={theta}) precedes the window start"
        )));
    }
    let alpha = p.center();
    let psurv = (-2.0 * s).exp();
    let lambda = alpha * -f64::exp_m1(-2.0 * s);

    let exact = evolve(
        p,
        &Pmf::point_mass(x0 as usize),
        p.n() as f64 * s,
        &EvolveOptions::default(),
    )?;
    let queue_law = binpois_convolution(x0, psurv, lambda, 1e-10)?;
    let value = tv_distance(&exact, &queue_law);
    Ok(DiscrepancyReport::new(
        format!("mminf x0={x0} theta={theta} C={c}"),
        p,
        Statistic::Tv,
        value,
        tolerance,
    ))
}

/// Probability that `X` at the window time deviates from the proposition's
/// center by more than `ε·C` in window units, from the worst-case start
/// `x0 = k`. Exact evolution when the state space is small, Monte Carlo
/// with `samples` trajectories otherwise. The label records the Chebyshev
/// envelope `(1+C)/(ε²C²)` the probability is compared against.
pub fn concentration_report(
    p: &ChainParams,
    c: f64,
    eps: f64,
    kind: WindowKind,
    samples: u64,
    stream: RngStream,
    tolerance: f64,
) -> Result<DiscrepancyReport> {
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::domain(format!("eps {eps} must be positive")));
    }
    let window = p.window_time(kind, c)?;
    let sqrt_n = (p.n() as f64).sqrt();
    let kappa = p.kappa();
    let (dev_center, band) = match kind {
        WindowKind::Plus => (
            p.center() + c * kappa * (1.0 - kappa) * sqrt_n,
            eps * c * kappa * sqrt_n,
        ),
        WindowKind::Minus => (c, eps * c),
    };

    let law = if p.num_states() <= EXACT_STATE_LIMIT {
        evolve(
            p,
            &Pmf::point_mass(p.k() as usize),
            window.t,
            &EvolveOptions::default(),
        )?
    } else {
        empirical_pmf(p, p.k(), window.t, samples, stream)?
    };

    let mut outside = crate::numeric::KahanAccumulator::default();
    for y in 0..p.num_states() {
        if (y as f64 - dev_center).abs() > band {
            outside.add(law.prob(y));
        }
    }
    let chebyshev = (1.0 + c) / (eps * eps * c * c);
    Ok(DiscrepancyReport::new(
        format!(
            "concentration {} C={c} eps={eps} chebyshev={chebyshev:.4}",
            match kind {
                WindowKind::Plus => "plus",
                WindowKind::Minus => "minus",
            }
        ),
        p,
        Statistic::Probability,
        outside.total().clamp(0.0, 1.0),
        tolerance,
    ))
}
