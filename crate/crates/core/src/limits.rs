//! Closed-form limit laws for the cutoff profile and the cross-regime
//! consistency checks.
//!
//! Which profile applies depends on how `k/√n` behaves:
//!
//! * `k ≫ √n` ("large"): Gaussian shift profile
//!   `θ ↦ ‖N(e^{-2θ}, 1) - N(0, 1)‖_TV = 2Φ(e^{-2θ}/2) - 1`
//!   at times `n/4·log n + θn`.
//! * `k ≍ √n` ("critical", `α = lim k²/n`): Poisson perturbation profile,
//!   in two equivalent time parameterizations:
//!   `‖Pois(α + √α e^{-2θ}) - Pois(α)‖` at `n/4·log n + θn`, or
//!   `‖Pois(α + e^{-2θ}) - Pois(α)‖` at `n/2·log k + θn`.
//! * `k ≪ √n` ("small"): Gumbel tail profile `θ ↦ P(G > 2θ)` at
//!   `n/2·log k + θn`.
//!
//! All discrete TV computations run in log space so rates up to 10^6 are
//! safe, and they truncate with analytic tail bounds, never fixed cutoffs.

use crate::chain::{ChainParams, Pmf};
use crate::error::{Error, Result};
use crate::numeric::{ln_binomial, poisson_ln_pmf, KahanAccumulator};
use serde::{Deserialize, Serialize};

/// Default absolute tolerance for the discrete TV summations.
pub const DEFAULT_DISCRETE_TV_TOL: f64 = 1e-10;

/// Standard normal CDF, via the complementary error function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// `‖N(m, 1) - N(0, 1)‖_TV = 2Φ(|m|/2) - 1`.
///
/// The density of `N(m, 1)` exceeds that of `N(0, 1)` exactly on
/// `[m/2, ∞)` (for `m > 0`), so the TV distance is the difference of the
/// two tail probabilities there. Evaluated as `erf(|m| / (2√2))`, which
/// keeps full relative accuracy for small shifts where the `2Φ - 1` form
/// cancels.
pub fn gaussian_shift_tv(m: f64) -> f64 {
    libm::erf(m.abs() / (2.0 * std::f64::consts::SQRT_2))
}

/// Standard Gumbel tail `P(G > x) = 1 - e^{-e^{-x}}`.
///
/// Uses `expm1` so the result stays accurate (≈ `e^{-x}`) far in the upper
/// tail instead of rounding to zero.
pub fn gumbel_tail(x: f64) -> f64 {
    -f64::exp_m1(-f64::exp(-x))
}

/// `‖Pois(λ₁) - Pois(λ₂)‖_TV` with absolute error at most `tol`.
///
/// Sums `|p₁(j) - p₂(j)|/2` until the combined remaining tails drop below
/// `tol`. When the rates are so far apart that the distributions are
/// disjoint up to mass `tol` (certified by Chernoff bounds at the density
/// crossing), the summation is skipped and the result is 1 up to `tol`.
pub fn poisson_tv(lambda1: f64, lambda2: f64, tol: f64) -> Result<f64> {
    for l in [lambda1, lambda2] {
        if !l.is_finite() || l < 0.0 {
            return Err(Error::domain(format!("Poisson rate {l} must be finite and >= 0")));
        }
    }
    check_tv_tol(tol)?;
    if lambda1 == lambda2 {
        return Ok(0.0);
    }
    // Pois(0) is the point mass at zero: TV reduces to 1 - e^{-λ}.
    if lambda1 == 0.0 {
        return Ok(-f64::exp_m1(-lambda2));
    }
    if lambda2 == 0.0 {
        return Ok(-f64::exp_m1(-lambda1));
    }

    let (lo, hi) = if lambda1 < lambda2 {
        (lambda1, lambda2)
    } else {
        (lambda2, lambda1)
    };

    // Density crossing point of the two pmfs.
    let crossing = (hi - lo) / (hi / lo).ln();
    if ln_poisson_tail_bound(lo, crossing) <= (tol / 4.0).ln()
        && ln_poisson_tail_bound(hi, crossing) <= (tol / 4.0).ln()
    {
        // Overlap mass is at most tol/2; split the uncertainty interval.
        return Ok(1.0 - tol / 4.0);
    }

    let mut half_l1 = KahanAccumulator::default();
    let mut cdf1 = KahanAccumulator::default();
    let mut cdf2 = KahanAccumulator::default();
    let cap = (hi + 20.0 * (hi + 1.0).sqrt() + 200.0) as u64;
    let mut j = 0u64;
    loop {
        let p1 = poisson_ln_pmf(j, lambda1).exp();
        let p2 = poisson_ln_pmf(j, lambda2).exp();
        half_l1.add((p1 - p2).abs());
        cdf1.add(p1);
        cdf2.add(p2);
        let tails = (1.0 - cdf1.total()) + (1.0 - cdf2.total());
        if tails <= tol {
            return Ok((0.5 * half_l1.total()).min(1.0));
        }
        if j > cap {
            return Err(Error::numeric(format!(
                "Poisson TV summation for rates ({lambda1}, {lambda2}) did not \
                 converge within {cap} terms"
            )));
        }
        j += 1;
    }
}

/// Chernoff bound `ln P(Pois(λ) ≥ m)` for `m > λ`, equal by symmetry of the
/// rate function to `ln P(Pois(λ) ≤ m)` for `m < λ`.
fn ln_poisson_tail_bound(lambda: f64, m: f64) -> f64 {
    if m <= 0.0 {
        return -lambda;
    }
    m - lambda - m * (m / lambda).ln()
}

fn check_tv_tol(tol: f64) -> Result<()> {
    if !tol.is_finite() || tol <= 0.0 || tol > 1e-6 {
        return Err(Error::contract(format!(
            "discrete TV tolerance {tol} must lie in (0, 1e-6]"
        )));
    }
    Ok(())
}

/// The law of `Bin(x0, psurv) + Pois(lambda)` (independent summands),
/// truncated to total mass at least `1 - tol` and renormalized.
///
/// This is the transient law of an M/M/∞ queue started from `x0` customers:
/// survivors of the initial batch plus arrivals still in service.
pub fn binpois_convolution(x0: u64, psurv: f64, lambda: f64, tol: f64) -> Result<Pmf> {
    if !(0.0..=1.0).contains(&psurv) || !psurv.is_finite() {
        return Err(Error::domain(format!(
            "survival probability {psurv} must lie in [0, 1]"
        )));
    }
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(Error::domain(format!("Poisson rate {lambda} must be finite and >= 0")));
    }
    check_tv_tol(tol)?;

    let binomial = binomial_pmf(x0, psurv);
    let poisson = poisson_pmf_truncated(lambda, tol);

    let mut out = vec![0.0f64; binomial.len() + poisson.len() - 1];
    for (i, &b) in binomial.iter().enumerate() {
        if b == 0.0 {
            continue;
        }
        for (j, &q) in poisson.iter().enumerate() {
            out[i + j] += b * q;
        }
    }
    Pmf::from_unnormalized(0, out)
}

/// Binomial pmf over `0..=x0`, log-space for large `x0`.
fn binomial_pmf(x0: u64, p: f64) -> Vec<f64> {
    if x0 == 0 || p == 0.0 {
        let mut w = vec![0.0; x0 as usize + 1];
        w[0] = 1.0;
        return w;
    }
    if p == 1.0 {
        let mut w = vec![0.0; x0 as usize + 1];
        w[x0 as usize] = 1.0;
        return w;
    }
    let lp = p.ln();
    let lq = (1.0 - p).ln();
    (0..=x0)
        .map(|j| (ln_binomial(x0, j) + j as f64 * lp + (x0 - j) as f64 * lq).exp())
        .collect()
}

/// Poisson pmf truncated at the first index where the remaining tail is at
/// most `tol`.
fn poisson_pmf_truncated(lambda: f64, tol: f64) -> Vec<f64> {
    if lambda == 0.0 {
        return vec![1.0];
    }
    let mut weights = Vec::new();
    let mut cdf = KahanAccumulator::default();
    let mut j = 0u64;
    loop {
        let p = poisson_ln_pmf(j, lambda).exp();
        weights.push(p);
        cdf.add(p);
        if j as f64 > lambda && 1.0 - cdf.total() <= tol {
            return weights;
        }
        j += 1;
    }
}

/// A Gaussian law by mean and standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianLaw {
    pub mean: f64,
    pub std: f64,
}

impl GaussianLaw {
    pub fn new(mean: f64, std: f64) -> Result<Self> {
        if !std.is_finite() || std < 0.0 {
            return Err(Error::domain(format!(
                "standard deviation {std} must be finite and >= 0"
            )));
        }
        if !mean.is_finite() {
            return Err(Error::domain(format!("mean {mean} must be finite")));
        }
        Ok(GaussianLaw { mean, std })
    }

    /// CDF at `x`; degenerates to a step function when `std == 0`.
    pub fn cdf(&self, x: f64) -> f64 {
        if self.std == 0.0 {
            if x < self.mean {
                0.0
            } else {
                1.0
            }
        } else {
            normal_cdf((x - self.mean) / self.std)
        }
    }
}

/// Which time parameterization a profile experiment uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeForm {
    /// `t_θ = n/4 · log n + θ n`
    QuarterLogN,
    /// `t_θ = n/2 · log k + θ n`
    HalfLogK,
}

/// The asymptotic regime a profile experiment targets.
///
/// `Critical` carries `alpha = lim k²/n > 0` and admits both time forms;
/// the other regimes have a fixed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Regime {
    /// `k ≫ √n`, examined at `n/4·log n + θn`.
    Large,
    /// `k ≍ √n` with `k²/n → alpha`.
    Critical { alpha: f64, time_form: TimeForm },
    /// `k ≪ √n` (but `k → ∞`), examined at `n/2·log k + θn`.
    Small,
}

impl Regime {
    pub fn critical(alpha: f64, time_form: TimeForm) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(Error::domain(format!(
                "critical regime needs alpha > 0, got {alpha}"
            )));
        }
        Ok(Regime::Critical { alpha, time_form })
    }

    pub fn time_form(&self) -> TimeForm {
        match self {
            Regime::Large => TimeForm::QuarterLogN,
            Regime::Critical { time_form, .. } => *time_form,
            Regime::Small => TimeForm::HalfLogK,
        }
    }

    /// Absolute chain time for window coordinate `theta`. May be negative
    /// for very negative `theta`; callers skip such points.
    pub fn time_at(&self, p: &ChainParams, theta: f64) -> f64 {
        let n = p.n() as f64;
        match self.time_form() {
            TimeForm::QuarterLogN => 0.25 * n * n.ln() + theta * n,
            TimeForm::HalfLogK => 0.5 * n * (p.k() as f64).ln() + theta * n,
        }
    }

    /// The `k` this regime prescribes for a given `n` in ladder experiments:
    /// `n/2` (large), `ceil(√(αn))` (critical), `ceil(n^0.3)` (small).
    pub fn ladder_k(&self, n: u64) -> u64 {
        let k = match self {
            Regime::Large => return n / 2,
            Regime::Critical { alpha, .. } => (alpha * n as f64).sqrt().ceil() as u64,
            Regime::Small => (n as f64).powf(0.3).ceil() as u64,
        };
        k.clamp(1, n / 2)
    }

    /// Advisory check that `(n, k)` matches this regime's ladder rule.
    pub fn matches(&self, p: &ChainParams) -> bool {
        self.ladder_k(p.n()) == p.k()
    }

    pub fn name(&self) -> &'static str {
        match self {
            Regime::Large => "large",
            Regime::Critical { .. } => "critical",
            Regime::Small => "small",
        }
    }
}

/// The limit profile value at window coordinate `theta`.
pub fn limit_profile(regime: &Regime, theta: f64) -> Result<f64> {
    let shift = (-2.0 * theta).exp();
    match regime {
        Regime::Large => Ok(gaussian_shift_tv(shift)),
        Regime::Critical { alpha, time_form } => {
            if !alpha.is_finite() || *alpha <= 0.0 {
                return Err(Error::domain(format!(
                    "critical regime needs alpha > 0, got {alpha}"
                )));
            }
            let perturbation = match time_form {
                TimeForm::QuarterLogN => alpha.sqrt() * shift,
                TimeForm::HalfLogK => shift,
            };
            poisson_tv(alpha + perturbation, *alpha, DEFAULT_DISCRETE_TV_TOL)
        }
        Regime::Small => Ok(gumbel_tail(2.0 * theta)),
    }
}

/// How far the critical profile sits from the outer-regime profiles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsistencyGap {
    /// `|‖Pois(α+√α e^{-2θ}) - Pois(α)‖ - (2Φ(e^{-2θ}/2) - 1)|`; small for
    /// large `α` by the normal approximation to the Poisson.
    pub to_gaussian: f64,
    /// `|‖Pois(α+e^{-2θ}) - Pois(α)‖ - P(G > 2θ)|`; small for small `α`.
    ///
    /// The small-`α` limit of the Poisson TV is `P(Pois(e^{-2θ}) = 0)`
    /// complemented, i.e. `1 - e^{-e^{-2θ}} = P(G > 2θ)`, which is what
    /// `TV(Pois(λ), δ₀) = 1 - e^{-λ}` forces.
    pub to_gumbel: f64,
}

/// Distance of the critical profile from its large-α Gaussian and small-α
/// Gumbel approximations at coordinate `theta`.
pub fn consistency_gap(alpha: f64, theta: f64) -> Result<ConsistencyGap> {
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::domain(format!("alpha {alpha} must be finite and > 0")));
    }
    let shift = (-2.0 * theta).exp();
    let tv_quarter = poisson_tv(alpha + alpha.sqrt() * shift, alpha, DEFAULT_DISCRETE_TV_TOL)?;
    let tv_half = poisson_tv(alpha + shift, alpha, DEFAULT_DISCRETE_TV_TOL)?;
    Ok(ConsistencyGap {
        to_gaussian: (tv_quarter - gaussian_shift_tv(shift)).abs(),
        to_gumbel: (tv_half - gumbel_tail(2.0 * theta)).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use statrs::function::gamma::gamma_ur;

    /// Adaptive-free Simpson quadrature on [a, b] with n (even) panels.
    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        assert!(n.is_multiple_of(2));
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            let x = a + i as f64 * h;
            s += f(x) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    fn phi(x: f64) -> f64 {
        (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
    }

    /// Independent oracle: P(Pois(λ) <= m) via the regularized upper
    /// incomplete gamma function.
    fn poisson_cdf_oracle(m: u64, lambda: f64) -> f64 {
        gamma_ur(m as f64 + 1.0, lambda)
    }

    /// Independent oracle for the Poisson TV distance: the pmf ratio is
    /// monotone, so the distance is a difference of CDFs at the crossing.
    fn poisson_tv_oracle(l1: f64, l2: f64) -> f64 {
        let (lo, hi) = if l1 < l2 { (l1, l2) } else { (l2, l1) };
        let crossing = ((hi - lo) / (hi / lo).ln()).ceil() as u64;
        poisson_cdf_oracle(crossing - 1, lo) - poisson_cdf_oracle(crossing - 1, hi)
    }

    #[test]
    fn normal_cdf_against_quadrature() {
        // Φ(1) by quadrature of the density over (-∞, 1], tail below -12
        // is < 2e-33.
        let quad = simpson(phi, -12.0, 1.0, 40_000);
        assert!((normal_cdf(1.0) - quad).abs() < 1e-13);
        assert!((normal_cdf(1.0) - 0.841344746068543).abs() < 1e-12);
        assert_eq!(normal_cdf(0.0), 0.5);
        assert!((normal_cdf(40.0) - 1.0).abs() < 1e-14);
        assert!((normal_cdf(-40.0)).abs() < 1e-14);
    }

    #[test]
    fn gaussian_shift_tv_against_quadrature() {
        for &m in &[0.1, 0.5, 1.0, 2.0, 5.0] {
            let direct = 0.5 * simpson(|x| (phi(x - m) - phi(x)).abs(), -12.0, 12.0 + m, 80_000);
            assert!(
                (gaussian_shift_tv(m) - direct).abs() < 1e-10,
                "quadrature mismatch at m={m}"
            );
        }
        assert_eq!(gaussian_shift_tv(0.0), 0.0);
        assert_eq!(gaussian_shift_tv(2.0), gaussian_shift_tv(-2.0));
        assert_relative_eq!(gaussian_shift_tv(2.0), 0.6826894921370859, max_relative = 1e-12);
    }

    #[test]
    fn gumbel_tail_values() {
        assert_relative_eq!(gumbel_tail(0.0), 1.0 - (-1.0f64).exp(), max_relative = 1e-15);
        assert!((gumbel_tail(-40.0) - 1.0).abs() < 1e-14);
        let far = gumbel_tail(40.0);
        assert!(far > 0.0 && far < 1e-17, "upper tail should be ~e^-40, got {far}");
    }

    #[test]
    fn poisson_tv_basics() {
        assert_eq!(poisson_tv(3.0, 3.0, 1e-10).unwrap(), 0.0);
        // Against the point mass at 0.
        for &l in &[0.3, 1.0, 7.5] {
            assert_relative_eq!(
                poisson_tv(l, 0.0, 1e-10).unwrap(),
                1.0 - (-l).exp(),
                max_relative = 1e-9
            );
        }
        // Symmetry.
        assert_eq!(
            poisson_tv(2.0, 1.0, 1e-10).unwrap(),
            poisson_tv(1.0, 2.0, 1e-10).unwrap()
        );
        assert!(poisson_tv(-1.0, 2.0, 1e-10).is_err());
        assert!(poisson_tv(1.0, 2.0, 1e-3).is_err());
    }

    #[test]
    fn poisson_tv_against_incomplete_gamma_oracle() {
        let cases = [(2.0, 1.0), (1.5, 1.0), (110.0, 100.0), (5.0, 0.5), (1000.0, 950.0)];
        for &(l1, l2) in &cases {
            let tv = poisson_tv(l1, l2, 1e-10).unwrap();
            let oracle = poisson_tv_oracle(l1, l2);
            assert!(
                (tv - oracle).abs() < 1e-9,
                "TV({l1}, {l2}) = {tv} vs oracle {oracle}"
            );
        }
        // Frozen from the oracle: 2 e^{-1} - 3 e^{-2}.
        assert!((poisson_tv(2.0, 1.0, 1e-10).unwrap() - 0.32975303263304656).abs() < 1e-10);
    }

    #[test]
    fn poisson_tv_monotone_in_separation() {
        let base = 2.0;
        let mut last = 0.0;
        for i in 1..=20 {
            let tv = poisson_tv(base + i as f64 * 0.5, base, 1e-10).unwrap();
            assert!(tv > last, "TV should grow with |λ₁-λ₂|");
            last = tv;
        }
    }

    #[test]
    fn poisson_tv_disjoint_shortcut() {
        // e^{40} apart: distributions disjoint to far below tolerance.
        let tv = poisson_tv(40f64.exp(), 1.0, 1e-10).unwrap();
        assert!((tv - 1.0).abs() <= 1e-10);
        // Large but overlapping rates still go through the summation.
        let tv2 = poisson_tv(1.0e6, 1.0e6 + 500.0, 1e-8).unwrap();
        assert!(tv2 > 0.1 && tv2 < 0.5);
    }

    #[test]
    fn binpois_convolution_edges() {
        let delta = binpois_convolution(7, 1.0, 0.0, 1e-10).unwrap();
        assert_eq!(delta.prob(7), 1.0);

        let pois = binpois_convolution(0, 0.3, 2.0, 1e-10).unwrap();
        assert_relative_eq!(pois.prob(0), (-2.0f64).exp(), max_relative = 1e-9);
        assert_relative_eq!(pois.prob(1), 2.0 * (-2.0f64).exp(), max_relative = 1e-9);

        let half = binpois_convolution(1, 0.5, 0.0, 1e-10).unwrap();
        assert_relative_eq!(half.prob(0), 0.5, max_relative = 1e-12);
        assert_relative_eq!(half.prob(1), 0.5, max_relative = 1e-12);

        assert!(binpois_convolution(1, 1.5, 0.0, 1e-10).is_err());
        assert!(binpois_convolution(1, 0.5, -1.0, 1e-10).is_err());
    }

    #[test]
    fn binpois_convolution_moments() {
        let tol = 1e-10;
        for &(x0, p, l) in &[(10u64, 0.37, 2.5), (50, 0.9, 0.1), (3, 0.01, 12.0)] {
            let pmf = binpois_convolution(x0, p, l, tol).unwrap();
            let mean = x0 as f64 * p + l;
            let var = x0 as f64 * p * (1.0 - p) + l;
            assert!(
                (pmf.mean() - mean).abs() <= tol * (mean + 1.0) + 1e-9,
                "mean mismatch for ({x0}, {p}, {l})"
            );
            assert!(
                (pmf.variance() - var).abs() <= (tol * (mean + 1.0)).max(1e-7),
                "variance mismatch for ({x0}, {p}, {l})"
            );
        }
    }

    #[test]
    fn limit_profile_values() {
        assert_relative_eq!(
            limit_profile(&Regime::Large, 0.0).unwrap(),
            0.3829249225480263,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            limit_profile(&Regime::Small, 0.0).unwrap(),
            0.6321205588285577,
            max_relative = 1e-12
        );
        // α = 1, half-log-k form at θ = 0: ‖Pois(2) - Pois(1)‖.
        let r = Regime::critical(1.0, TimeForm::HalfLogK).unwrap();
        assert!((limit_profile(&r, 0.0).unwrap() - 0.32975303263304656).abs() < 1e-9);
        // At α = 1 both forms coincide.
        let rq = Regime::critical(1.0, TimeForm::QuarterLogN).unwrap();
        for &theta in &[-1.0, 0.0, 0.7] {
            assert!(
                (limit_profile(&r, theta).unwrap() - limit_profile(&rq, theta).unwrap()).abs()
                    < 2e-10
            );
        }
    }

    #[test]
    fn limit_profile_reparameterization_identity() {
        // form1(θ) = form2(θ - log(α)/4): the quarter-log-n clock reads the
        // half-log-k clock shifted by the α-dependent offset.
        for &alpha in &[0.25, 1.0, 4.0] {
            let quarter = Regime::critical(alpha, TimeForm::QuarterLogN).unwrap();
            let half = Regime::critical(alpha, TimeForm::HalfLogK).unwrap();
            for &theta in &[-1.5, -0.5, 0.0, 0.5, 2.0] {
                let f1 = limit_profile(&quarter, theta).unwrap();
                let f2 = limit_profile(&half, theta - 0.25 * alpha.ln()).unwrap();
                assert!(
                    (f1 - f2).abs() <= 2.0 * DEFAULT_DISCRETE_TV_TOL,
                    "reparameterization identity failed at alpha={alpha}, theta={theta}"
                );
            }
        }
    }

    #[test]
    fn limit_profile_decreasing_with_saturating_tails() {
        let regimes = [
            Regime::Large,
            Regime::critical(1.0, TimeForm::HalfLogK).unwrap(),
            Regime::critical(0.25, TimeForm::QuarterLogN).unwrap(),
            Regime::Small,
        ];
        for regime in &regimes {
            // Strict decrease where f64 can resolve it (the profiles sit
            // within one ulp of 1 once θ ≲ -2); non-strict on the full range.
            let mut last = f64::INFINITY;
            for i in 0..=22 {
                let theta = -1.5 + i as f64 * 0.25;
                let v = limit_profile(regime, theta).unwrap();
                assert!(v < last, "profile must strictly decrease ({regime:?}, θ={theta})");
                last = v;
            }
            let mut last = f64::INFINITY;
            for i in 0..=40 {
                let theta = -20.0 + i as f64;
                let v = limit_profile(regime, theta).unwrap();
                assert!(v <= last, "profile must decrease ({regime:?}, θ={theta})");
                last = v;
            }
            assert!(limit_profile(regime, -20.0).unwrap() >= 1.0 - 1e-6);
            assert!(limit_profile(regime, 20.0).unwrap() <= 1e-6);
        }
    }

    #[test]
    fn consistency_gap_examples() {
        // Large α: close to the Gaussian profile.
        let g = consistency_gap(100.0, 0.0).unwrap();
        assert!(g.to_gaussian <= 0.02, "gap to gaussian {}", g.to_gaussian);
        // Small α: close to the Gumbel profile.
        let s = consistency_gap(0.001, 0.0).unwrap();
        assert!(s.to_gumbel <= 0.02, "gap to gumbel {}", s.to_gumbel);
        // Far in the window both perturbed TVs vanish.
        let far = consistency_gap(1.0, 6.0).unwrap();
        let tv_q = poisson_tv(1.0 + (-12.0f64).exp(), 1.0, 1e-10).unwrap();
        let tv_h = tv_q;
        assert!(tv_q <= 0.01 && tv_h <= 0.01);
        assert!(far.to_gaussian <= 0.01 && far.to_gumbel <= 0.01);
    }

    #[test]
    fn regime_ladder_rules() {
        assert_eq!(Regime::Large.ladder_k(8192), 4096);
        let c = Regime::critical(1.0, TimeForm::HalfLogK).unwrap();
        assert_eq!(c.ladder_k(1_000_000), 1000);
        assert_eq!(c.ladder_k(100_000), 317);
        assert_eq!(Regime::Small.ladder_k(1_000_000), 64);
        assert_eq!(Regime::Small.ladder_k(10_000), 16);
    }

    #[test]
    fn gaussian_law_validation() {
        assert!(GaussianLaw::new(0.0, -1.0).is_err());
        let g = GaussianLaw::new(1.0, 0.0).unwrap();
        assert_eq!(g.cdf(0.99), 0.0);
        assert_eq!(g.cdf(1.0), 1.0);
    }
}
