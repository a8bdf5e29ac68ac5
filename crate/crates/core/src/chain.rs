//! The Bernoulli–Laplace urn as a birth–death chain on `[0, k]`.
//!
//! Two urns hold `n` balls, `k` of them red; the first urn always holds
//! exactly `k` balls. A uniformly random pair of balls swaps positions at
//! rate 1, and the state is the number of red balls in the first urn.
//! This module owns the transition rates, the hypergeometric equilibrium,
//! the closed-form transient mean and variance, and the burn-in window
//! times used by the profile experiments.
//!
//! Rates (per unit time, for `x` red balls in urn one):
//!
//! ```text
//! up:   2 (k - x)^2 / n^2
//! down: 2 x (n - 2k + x) / n^2
//! ```
//!
//! In the recentred variable `x̄ = x - k²/n` they satisfy
//!
//! ```text
//! up - down = -2 x̄ / n
//! up + down = 4 κ²(1-κ)² + 8 (1/2 - κ)² x̄ / n + 4 x̄² / n²,   κ = k/n.
//! ```
//!
//! Both identities are enforced by tests, the first one exactly in rational
//! arithmetic. Note the recentring: in the raw variable `x` the drift
//! identity is false (n=10, k=5, x=2 gives +0.10 against the claimed -0.40).

use crate::error::{Error, Result};
use crate::numeric::{kahan_sum, KahanAccumulator};
use serde::{Deserialize, Serialize};

/// Tolerance for the "weights sum to one" invariant of [`Pmf`].
pub const PMF_MASS_TOL: f64 = 1e-12;

/// The urn instance: population size `n` and red-ball count `k`.
///
/// Valid parameters satisfy `n >= 2` and `1 <= k <= floor(n/2)`; larger `k`
/// is rejected rather than reflected by symmetry. The ratio `kappa = k/n`
/// is always derived, never stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainParams {
    n: u64,
    k: u64,
}

impl ChainParams {
    pub fn new(n: u64, k: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("population size n={n} must be >= 2")));
        }
        if k == 0 || k > n / 2 {
            return Err(Error::domain(format!(
                "red-ball count k={k} must satisfy 1 <= k <= floor(n/2) = {}",
                n / 2
            )));
        }
        Ok(ChainParams { n, k })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// The ratio `kappa = k / n`.
    pub fn kappa(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    /// Number of states, `k + 1`.
    pub fn num_states(&self) -> usize {
        self.k as usize + 1
    }

    /// Equilibrium mean `k²/n = κ²n`.
    pub fn center(&self) -> f64 {
        let k = self.k as f64;
        k * k / self.n as f64
    }

    /// Fluctuation scale `√n · κ(1-κ)` of the equilibrium distribution.
    pub fn fluctuation_scale(&self) -> f64 {
        let kappa = self.kappa();
        (self.n as f64).sqrt() * kappa * (1.0 - kappa)
    }

    fn check_state(&self, x: u64) -> Result<()> {
        if x > self.k {
            return Err(Error::domain(format!(
                "state {x} outside [0, {}] for (n, k) = ({}, {})",
                self.k, self.n, self.k
            )));
        }
        Ok(())
    }

    /// Rate of `x -> x + 1`: a black ball leaves urn one, a red enters.
    pub fn birth_rate(&self, x: u64) -> Result<f64> {
        self.check_state(x)?;
        Ok(self.birth_rate_raw(x))
    }

    /// Rate of `x -> x - 1`.
    pub fn death_rate(&self, x: u64) -> Result<f64> {
        self.check_state(x)?;
        Ok(self.death_rate_raw(x))
    }

    /// Total exit rate from `x`.
    pub fn total_rate(&self, x: u64) -> Result<f64> {
        self.check_state(x)?;
        Ok(self.birth_rate_raw(x) + self.death_rate_raw(x))
    }

    pub(crate) fn birth_rate_raw(&self, x: u64) -> f64 {
        if x >= self.k {
            return 0.0;
        }
        let nf = self.n as f64;
        let diff = (self.k - x) as f64;
        2.0 * diff * diff / (nf * nf)
    }

    pub(crate) fn death_rate_raw(&self, x: u64) -> f64 {
        if x == 0 {
            return 0.0;
        }
        let nf = self.n as f64;
        // n - 2k >= 0 by the k <= n/2 invariant.
        let black_in_two = (self.n - 2 * self.k + x) as f64;
        2.0 * x as f64 * black_in_two / (nf * nf)
    }

    pub(crate) fn total_rate_raw(&self, x: u64) -> f64 {
        self.birth_rate_raw(x) + self.death_rate_raw(x)
    }

    /// Exact maximum exit rate over `[0, k]`.
    ///
    /// The total rate is a convex parabola in `x`, so the maximum sits at
    /// an endpoint; `total(k) >= total(0)` because `n - k >= k`.
    pub fn max_total_rate(&self) -> f64 {
        self.total_rate_raw(0).max(self.total_rate_raw(self.k))
    }

    /// Hypergeometric equilibrium `pi(r) = C(k,r) C(n-k,k-r) / C(n,k)`.
    ///
    /// Weights are generated by the exact pmf ratio
    /// `pi(x+1)/pi(x) = (k-x)² / ((x+1)(n-2k+x+1))` outward from the mode
    /// and renormalized. All ratio factors are integers below 2^53, so each
    /// weight carries only O(distance-from-mode) ulps of error; a log-gamma
    /// evaluation would cap the relative accuracy near 1e-9 for n ~ 10^6,
    /// which is too coarse for the 1e-10 mean contract. Weights further
    /// than ~40 standard deviations from the mode underflow to zero, which
    /// is far below any mass tolerance in use. No overflow up to n = 10^8.
    pub fn stationary_pmf(&self) -> Pmf {
        let k = self.k;
        let n = self.n;
        let mut w = vec![0.0f64; self.num_states()];
        let mode = (((k + 1) * (k + 1)) as f64 / (n + 2) as f64).floor() as u64;
        let mode = mode.min(k);
        w[mode as usize] = 1.0;
        let mut val = 1.0f64;
        for x in mode..k {
            let num = ((k - x) * (k - x)) as f64;
            let den = ((x + 1) * (n - 2 * k + x + 1)) as f64;
            val *= num / den;
            w[x as usize + 1] = val;
        }
        val = 1.0;
        for x in (0..mode).rev() {
            let num = ((x + 1) * (n - 2 * k + x + 1)) as f64;
            let den = ((k - x) * (k - x)) as f64;
            val *= num / den;
            w[x as usize] = val;
        }
        let total = kahan_sum(w.iter().copied());
        for wi in &mut w {
            *wi /= total;
        }
        Pmf::new(0, w).expect("normalized hypergeometric weights form a pmf")
    }

    /// Transient mean `E_x0[X_t] = κ²n + (x0 - κ²n) e^{-2t/n}`.
    pub fn mean_at(&self, x0: u64, t: f64) -> Result<f64> {
        self.check_state(x0)?;
        check_time(t)?;
        let center = self.center();
        Ok(center + (x0 as f64 - center) * (-2.0 * t / self.n as f64).exp())
    }

    /// Transient variance `Var_x0[X_t]`, the three-term integrating-factor
    /// closed form with `x̄0 = x0 - κ²n`:
    ///
    /// ```text
    ///   κ²(1-κ)² n (1 - e^{-(4/n)(1-1/n)t}) / (1 - 1/n)
    /// + 4 (1/2-κ)² x̄0 e^{-2t/n} (1 - e^{-(2/n)(1-2/n)t}) / (1 - 2/n)
    /// + (x̄0 e^{-2t/n})² (e^{4t/n²} - 1)
    /// ```
    pub fn variance_at(&self, x0: u64, t: f64) -> Result<f64> {
        self.check_state(x0)?;
        check_time(t)?;
        let n = self.n as f64;
        let kappa = self.kappa();
        let xbar = x0 as f64 - self.center();
        let decay = (-2.0 * t / n).exp();
        let a = 4.0 / n * (1.0 - 1.0 / n);

        let term1 =
            kappa * kappa * (1.0 - kappa) * (1.0 - kappa) * n / (1.0 - 1.0 / n) * (1.0 - (-a * t).exp());

        // The coefficient 4(1/2 - κ)² vanishes exactly when κ = 1/2, which is
        // the only case where n = 2 can make the 1 - 2/n denominator zero.
        let half_gap = 0.5 - kappa;
        let term2 = if half_gap == 0.0 {
            0.0
        } else {
            4.0 * half_gap * half_gap * xbar * decay / (1.0 - 2.0 / n)
                * (1.0 - (-(2.0 / n) * (1.0 - 2.0 / n) * t).exp())
        };

        // (x̄ e^{-2t/n})² (e^{4t/n²} - 1) rewritten with negative exponents
        // only, so large t cannot produce inf · 0.
        let term3 = xbar * xbar * ((-a * t).exp() - (-4.0 * t / n).exp());

        Ok(term1 + term2 + term3)
    }

    /// Burn-in window time `T±(C)`.
    ///
    /// `minus`: `t = n/2 · log(k/C)`, admissible for `0 < C <= k`;
    /// `plus`: `t = n/4 · log n - n/2 · log C`, admissible for `0 < C <= √n`.
    pub fn window_time(&self, kind: WindowKind, c: f64) -> Result<WindowTime> {
        if !c.is_finite() || c <= 0.0 {
            return Err(Error::domain(format!("window scale C={c} must be positive and finite")));
        }
        let n = self.n as f64;
        let t = match kind {
            WindowKind::Minus => {
                if c > self.k as f64 {
                    return Err(Error::domain(format!(
                        "minus window requires C <= k, got C={c} with k={}",
                        self.k
                    )));
                }
                0.5 * n * (self.k as f64 / c).ln()
            }
            WindowKind::Plus => {
                if c > n.sqrt() {
                    return Err(Error::domain(format!(
                        "plus window requires C <= sqrt(n), got C={c} with n={}",
                        self.n
                    )));
                }
                0.25 * n * n.ln() - 0.5 * n * c.ln()
            }
        };
        Ok(WindowTime { kind, c, t })
    }
}

fn check_time(t: f64) -> Result<()> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::domain(format!("time t={t} must be finite and >= 0")));
    }
    Ok(())
}

/// Which side of the cutoff window a burn-in time refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowKind {
    /// `T⁻(C)`: the mean has decayed to `C` above the center (used when
    /// `k ≲ √n`).
    Minus,
    /// `T⁺(C)`: the mean sits `C` fluctuation units above the center (used
    /// when `k ≳ √n`).
    Plus,
}

/// A resolved window time: the kind, the scale `C` and the chain time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowTime {
    pub kind: WindowKind,
    pub c: f64,
    pub t: f64,
}

/// A finite probability vector over consecutive integer states.
///
/// `support_offset` is the global index of the first weight, so the vector
/// describes states `offset .. offset + len`. Weights are validated to be
/// non-negative and to sum to one within [`PMF_MASS_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    support_offset: usize,
    weights: Vec<f64>,
}

impl Pmf {
    pub fn new(support_offset: usize, weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::contract("pmf must have at least one weight"));
        }
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::contract(format!(
                    "pmf weight at state {} is {w}, expected finite and >= 0",
                    support_offset + i
                )));
            }
        }
        let mass = kahan_sum(weights.iter().copied());
        if (mass - 1.0).abs() > PMF_MASS_TOL {
            return Err(Error::contract(format!(
                "pmf mass {mass} deviates from 1 by {:e} (tolerance {PMF_MASS_TOL:e})",
                (mass - 1.0).abs()
            )));
        }
        Ok(Pmf {
            support_offset,
            weights,
        })
    }

    /// Normalizes a non-negative weight vector into a pmf.
    pub fn from_unnormalized(support_offset: usize, mut weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::contract("pmf must have at least one weight"));
        }
        for &w in &weights {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::contract(format!(
                    "unnormalized weight {w} must be finite and >= 0"
                )));
            }
        }
        let mass = kahan_sum(weights.iter().copied());
        if mass <= 0.0 {
            return Err(Error::contract("total weight must be positive"));
        }
        for w in &mut weights {
            *w /= mass;
        }
        Pmf::new(support_offset, weights)
    }

    /// The point mass at `state`.
    pub fn point_mass(state: usize) -> Self {
        Pmf {
            support_offset: state,
            weights: vec![1.0],
        }
    }

    pub fn support_offset(&self) -> usize {
        self.support_offset
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// First state index past the support.
    pub fn support_end(&self) -> usize {
        self.support_offset + self.weights.len()
    }

    /// Probability of `state`, zero outside the stored support.
    pub fn prob(&self, state: usize) -> f64 {
        if state < self.support_offset || state >= self.support_end() {
            0.0
        } else {
            self.weights[state - self.support_offset]
        }
    }

    pub fn mean(&self) -> f64 {
        kahan_sum(
            self.weights
                .iter()
                .enumerate()
                .map(|(i, &w)| (self.support_offset + i) as f64 * w),
        )
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        kahan_sum(self.weights.iter().enumerate().map(|(i, &w)| {
            let d = (self.support_offset + i) as f64 - mean;
            w * d * d
        }))
    }

    /// Cumulative distribution at each state of the support.
    pub fn cdf(&self) -> Vec<f64> {
        let mut acc = KahanAccumulator::default();
        self.weights
            .iter()
            .map(|&w| {
                acc.add(w);
                acc.total()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn params(n: u64, k: u64) -> ChainParams {
        ChainParams::new(n, k).unwrap()
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(ChainParams::new(1, 1).is_err());
        assert!(ChainParams::new(10, 0).is_err());
        assert!(ChainParams::new(10, 6).is_err());
        assert!(ChainParams::new(11, 5).is_ok()); // floor(11/2) = 5
        assert!(ChainParams::new(11, 6).is_err());
    }

    #[test]
    fn birth_rate_examples() {
        assert_relative_eq!(params(10, 5).birth_rate(2).unwrap(), 0.18, max_relative = 1e-15);
        assert_eq!(params(10, 5).birth_rate(5).unwrap(), 0.0);
        assert_relative_eq!(params(4, 2).birth_rate(0).unwrap(), 0.5, max_relative = 1e-15);
        assert!(params(10, 5).birth_rate(6).is_err());
    }

    #[test]
    fn death_rate_examples() {
        assert_eq!(params(10, 5).death_rate(0).unwrap(), 0.0);
        assert_relative_eq!(params(10, 5).death_rate(2).unwrap(), 0.08, max_relative = 1e-15);
        assert_relative_eq!(params(4, 2).death_rate(2).unwrap(), 0.5, max_relative = 1e-15);
        assert!(params(10, 5).death_rate(7).is_err());
    }

    #[test]
    fn total_rate_examples() {
        let p = params(10, 5);
        assert_relative_eq!(p.total_rate(2).unwrap(), 0.26, max_relative = 1e-14);
        // x = 0: only the birth term 2 k^2 / n^2 = 0.5 contributes.
        assert_relative_eq!(p.total_rate(0).unwrap(), 0.5, max_relative = 1e-15);
    }

    #[test]
    fn total_rate_centered_identity_and_bound() {
        for &(n, k) in &[(10u64, 5u64), (10, 2), (1000, 500), (1000, 32), (1_000_000, 1000)] {
            let p = params(n, k);
            let nf = n as f64;
            let kappa = p.kappa();
            let const_term = 4.0 * kappa * kappa * (1.0 - kappa) * (1.0 - kappa);
            let lin_coef = 8.0 * (0.5 - kappa) * (0.5 - kappa);
            for x in 0..=k {
                let xbar = x as f64 - p.center();
                let expected = const_term + lin_coef * xbar / nf + 4.0 * xbar * xbar / (nf * nf);
                let total = p.total_rate(x).unwrap();
                assert!(
                    (total - expected).abs() <= 1e-12,
                    "total-rate identity failed at (n,k,x)=({n},{k},{x})"
                );
                assert!(total <= 1.0, "total rate exceeds the pair-picking clock");
            }
        }
    }

    #[test]
    fn drift_identity_exact_in_rationals() {
        // up - down = -(2/n)(x - k^2/n), exactly.
        let big = |v: u64| BigRational::from_integer(BigInt::from(v));
        for &(n, k) in &[(10u64, 5u64), (10, 2), (37, 11), (100, 50)] {
            let n_r = big(n);
            let k_r = big(k);
            for x in 0..=k {
                let x_r = big(x);
                let up = big(2) * (&k_r - &x_r) * (&k_r - &x_r) / (&n_r * &n_r);
                let down = big(2) * &x_r * (&n_r - big(2) * &k_r + &x_r) / (&n_r * &n_r);
                let lhs = up - down;
                let rhs = -big(2) / &n_r * (&x_r - &k_r * &k_r / &n_r);
                assert_eq!(lhs, rhs, "exact drift identity failed at (n,k,x)=({n},{k},{x})");
            }
        }
    }

    #[test]
    fn drift_identity_in_floats() {
        for &(n, k) in &[(10u64, 5u64), (1000, 500), (1_000_000, 1000)] {
            let p = params(n, k);
            for x in 0..=k.min(5000) {
                let drift = p.birth_rate_raw(x) - p.death_rate_raw(x);
                let expected = -2.0 / n as f64 * (x as f64 - p.center());
                assert!(
                    (drift - expected).abs() <= 1e-14,
                    "float drift identity failed at (n,k,x)=({n},{k},{x})"
                );
            }
        }
    }

    #[test]
    fn max_total_rate_matches_scan() {
        for &(n, k) in &[(10u64, 5u64), (10, 2), (1000, 317), (123, 61)] {
            let p = params(n, k);
            let scanned = (0..=k)
                .map(|x| p.total_rate_raw(x))
                .fold(f64::NEG_INFINITY, f64::max);
            assert_eq!(p.max_total_rate(), scanned);
        }
    }

    #[test]
    fn stationary_small_case_exact() {
        let pi = params(4, 2).stationary_pmf();
        let expected = [1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0];
        for (w, e) in pi.weights().iter().zip(expected.iter()) {
            assert_relative_eq!(w, e, max_relative = 1e-13);
        }
        assert_relative_eq!(pi.mean(), 1.0, max_relative = 1e-13);
    }

    #[test]
    fn stationary_mean_matches_center() {
        for &(n, k) in &[(100u64, 50u64), (1000, 32), (10_000, 100), (1_000_000, 1000)] {
            let p = params(n, k);
            let pi = p.stationary_pmf();
            assert_relative_eq!(pi.mean(), p.center(), max_relative = 1e-10);
        }
    }

    #[test]
    fn stationary_detailed_balance() {
        for &(n, k) in &[(10u64, 5u64), (100, 50), (1000, 317)] {
            let p = params(n, k);
            let pi = p.stationary_pmf();
            for x in 0..k {
                let lhs = pi.prob(x as usize) * p.birth_rate_raw(x);
                let rhs = pi.prob(x as usize + 1) * p.death_rate_raw(x + 1);
                assert!(
                    (lhs - rhs).abs() <= 1e-12,
                    "detailed balance residual {:e} at (n,k,x)=({n},{k},{x})",
                    (lhs - rhs).abs()
                );
            }
        }
    }

    #[test]
    fn mean_at_examples() {
        let p = params(100, 50);
        // Fixed point of the mean recursion.
        assert_relative_eq!(p.mean_at(25, 123.0).unwrap(), 25.0, max_relative = 1e-14);
        // Initial condition.
        assert_relative_eq!(p.mean_at(50, 0.0).unwrap(), 50.0, max_relative = 1e-15);
        // 25 + 25 e^{-1}.
        let expected = 25.0 + 25.0 * (-1.0f64).exp();
        assert_relative_eq!(p.mean_at(50, 50.0).unwrap(), expected, max_relative = 1e-15);
        assert!(p.mean_at(50, -1.0).is_err());
    }

    #[test]
    fn variance_at_limits() {
        let p = params(100, 50);
        assert_eq!(p.variance_at(50, 0.0).unwrap(), 0.0);
        // t -> infinity: the stationary variance κ²(1-κ)²n/(1-1/n).
        let stat = 0.0625 * 100.0 / (1.0 - 0.01);
        assert_relative_eq!(stat, 6.313131313131313, max_relative = 1e-14);
        assert_relative_eq!(p.variance_at(50, 1e9).unwrap(), stat, max_relative = 1e-10);
        // And it matches the hypergeometric variance.
        assert_relative_eq!(p.stationary_pmf().variance(), stat, max_relative = 1e-10);
    }

    #[test]
    fn variance_at_handles_n_equals_two() {
        // n = 2, k = 1 makes the 1 - 2/n denominator vanish; the κ = 1/2
        // coefficient kills that term first.
        let p = params(2, 1);
        let v = p.variance_at(1, 3.0).unwrap();
        assert!(v.is_finite() && v >= 0.0);
    }

    #[test]
    fn window_time_examples() {
        let p = params(10_000, 10);
        let w = p.window_time(WindowKind::Minus, 5.0).unwrap();
        assert_relative_eq!(w.t, 5000.0 * 2.0f64.ln(), max_relative = 1e-15);

        let w0 = p.window_time(WindowKind::Minus, 10.0).unwrap();
        assert_eq!(w0.t, 0.0);

        let p2 = params(10_000, 5000);
        let wp = p2.window_time(WindowKind::Plus, 100.0).unwrap();
        assert!(wp.t.abs() < 1e-9, "C = sqrt(n) collapses the plus window to 0");

        assert!(p.window_time(WindowKind::Minus, 11.0).is_err());
        assert!(p2.window_time(WindowKind::Plus, 101.0).is_err());
        assert!(p.window_time(WindowKind::Minus, 0.0).is_err());
    }

    #[test]
    fn pmf_validation() {
        assert!(Pmf::new(0, vec![0.5, 0.5]).is_ok());
        assert!(Pmf::new(0, vec![0.5, 0.6]).is_err());
        assert!(Pmf::new(0, vec![-0.1, 1.1]).is_err());
        assert!(Pmf::new(0, vec![]).is_err());
        let p = Pmf::from_unnormalized(3, vec![1.0, 3.0]).unwrap();
        assert_eq!(p.prob(3), 0.25);
        assert_eq!(p.prob(4), 0.75);
        assert_eq!(p.prob(5), 0.0);
        assert_eq!(p.prob(0), 0.0);
    }

    #[test]
    fn pmf_moments() {
        let p = Pmf::new(2, vec![0.5, 0.5]).unwrap();
        assert_relative_eq!(p.mean(), 2.5);
        assert_relative_eq!(p.variance(), 0.25);
    }
}
