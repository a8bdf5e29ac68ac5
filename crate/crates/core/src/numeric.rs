//! Small numeric utilities shared across modules: compensated summation
//! and log-space combinatorics.

/// Kahan–Babuska compensated sum. Keeps the error of a length-`n` sum at
/// O(eps) instead of O(n·eps), which matters when validating probability
/// mass over ~10^6-state vectors.
pub fn kahan_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Running compensated accumulator for streaming sums.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanAccumulator {
    sum: f64,
    comp: f64,
}

impl KahanAccumulator {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// ln C(a, b) via log-gamma differences; well-defined for 0 ≤ b ≤ a even
/// when the binomial coefficient itself would overflow f64.
pub fn ln_binomial(a: u64, b: u64) -> f64 {
    debug_assert!(b <= a);
    ln_gamma(a as f64 + 1.0) - ln_gamma(b as f64 + 1.0) - ln_gamma((a - b) as f64 + 1.0)
}

/// Poisson log-pmf, valid for lambda > 0.
pub fn poisson_ln_pmf(j: u64, lambda: f64) -> f64 {
    debug_assert!(lambda > 0.0);
    j as f64 * lambda.ln() - lambda - ln_gamma(j as f64 + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahan_handles_cancellation() {
        // 1 + 1e-16 repeated: naive summation loses the small terms.
        let n = 1_000_000usize;
        let values = std::iter::once(1.0).chain(std::iter::repeat_n(1e-16, n));
        let exact = 1.0 + n as f64 * 1e-16;
        assert!((kahan_sum(values) - exact).abs() < 1e-15);
    }

    #[test]
    fn ln_binomial_matches_small_cases() {
        assert!((ln_binomial(4, 2) - 6.0f64.ln()).abs() < 1e-12);
        assert!((ln_binomial(10, 0) - 0.0).abs() < 1e-12);
        assert!((ln_binomial(52, 5) - 2598960.0f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn poisson_ln_pmf_matches_direct() {
        // P(Pois(2.5) = 3) = 2.5^3 e^{-2.5} / 6
        let direct = (2.5f64.powi(3) * (-2.5f64).exp() / 6.0).ln();
        assert!((poisson_ln_pmf(3, 2.5) - direct).abs() < 1e-12);
    }
}
