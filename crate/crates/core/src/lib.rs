//! # urnmix
//!
//! A verification laboratory for the convergence to equilibrium of the
//! Bernoulli–Laplace urn: two urns, `k` red and `n - k` black balls, a
//! uniformly chosen pair swapped at rate 1. The red count in the first urn
//! is a birth–death chain whose distance to equilibrium collapses abruptly
//! — at `n/4·log n` when `k ≫ √n`, at `n/2·log k` when `k ≪ √n` — and the
//! shape of that collapse has a closed-form limit in each regime.
//!
//! The crate computes all three sides of the story and checks them against
//! each other:
//!
//! * [`chain`] — rates, hypergeometric equilibrium, closed-form transient
//!   mean/variance, burn-in window times;
//! * [`exact`] — exact time-`t` laws by uniformization, TV distances, and
//!   exact profile curves;
//! * [`limits`] — the Gaussian / Poisson / Gumbel limit profiles and the
//!   cross-regime consistency gaps;
//! * [`sim`] — exact-event trajectory simulation, the order-preserving
//!   basic coupling, hitting times, and the coupon-collector sampler;
//! * [`checks`] — discrepancy reports quantifying the
//!   Ornstein–Uhlenbeck, M/M/∞, Gaussian-equilibrium and concentration
//!   approximations at finite `n`;
//! * [`harness`] — configuration, suite orchestration, deterministic
//!   seeding and CSV/JSON report emission for the `urnmix` CLI.
//!
//! Everything is deterministic: simulations draw from counter-based
//! `(seed, stream_id)` streams, so results are identical across runs and
//! thread counts.

pub mod chain;
pub mod checks;
pub mod error;
pub mod exact;
pub mod harness;
pub mod limits;
mod numeric;
pub mod sim;
pub mod tolerances;

pub use chain::{ChainParams, Pmf, WindowKind, WindowTime};
pub use checks::{DiscrepancyReport, Statistic};
pub use error::{Error, Result};
pub use exact::{EvolveOptions, ProfileEntry, ProfilePoint, UniformizationRate};
pub use limits::{GaussianLaw, Regime, TimeForm};
pub use sim::{CouplingOutcome, RngStream, Trajectory};
