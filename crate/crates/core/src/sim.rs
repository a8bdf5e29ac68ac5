//! Exact-event trajectory simulation: single paths, the basic coupling
//! with coalescence measurement, hitting times of zero, and the
//! exponential-sum sampler behind the coupon-collector comparison.
//!
//! Simulation is event-driven with competing exponential clocks, never
//! time-discretized, so the only error sources in simulation-based checks
//! are statistical. Every trajectory owns a counter-based RNG stream
//! `(seed, stream_id)`; parallel sharding therefore cannot change results.

use crate::chain::{ChainParams, Pmf};
use crate::error::{Error, Result};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

/// A reproducible random stream: `(seed, stream_id)` fully determines
/// every draw. Distinct stream ids on the same seed give independent
/// streams (ChaCha nonce separation).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        RngStream { seed, stream_id }
    }

    /// Stream for the `i`-th trajectory of a batch rooted at this stream.
    pub fn child(&self, i: u64) -> Self {
        RngStream {
            seed: self.seed,
            stream_id: self.stream_id.wrapping_add(i),
        }
    }

    pub(crate) fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// An event-list trajectory: `times[i]` is the `i`-th jump time and
/// `states[i]` the state right after it.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<u64>,
    pub x0: u64,
    pub horizon: f64,
}

impl Trajectory {
    /// State at the end of the horizon.
    pub fn final_state(&self) -> u64 {
        self.states.last().copied().unwrap_or(self.x0)
    }

    pub fn num_events(&self) -> usize {
        self.times.len()
    }
}

/// Result of one coupled pair simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingOutcome {
    /// First meeting time, `None` if the pair never met before the horizon.
    pub coalescence_time: Option<f64>,
    /// Whether `x <= y` ever failed given ordered starts `x0 <= y0`.
    /// Always reported false for unordered starts.
    pub order_violated: bool,
    /// Smallest state either copy visited.
    pub min_pair: u64,
    /// Largest state either copy visited.
    pub max_pair: u64,
}

fn check_state(p: &ChainParams, x: u64, what: &str) -> Result<()> {
    if x > p.k() {
        return Err(Error::domain(format!(
            "{what} {x} outside [0, {}]",
            p.k()
        )));
    }
    Ok(())
}

fn check_horizon(horizon: f64) -> Result<()> {
    if !horizon.is_finite() || horizon < 0.0 {
        return Err(Error::domain(format!(
            "horizon {horizon} must be finite and >= 0"
        )));
    }
    Ok(())
}

fn exp_waiting_time(rng: &mut ChaCha8Rng, rate: f64) -> f64 {
    let e: f64 = Exp1.sample(rng);
    e / rate
}

/// Move from `x`: up with probability `birth/total`, else down. The draw
/// order (waiting time, then direction) is fixed for reproducibility.
fn jump(p: &ChainParams, x: u64, total: f64, rng: &mut ChaCha8Rng) -> u64 {
    let u: f64 = rng.random();
    if u * total < p.birth_rate_raw(x) {
        x + 1
    } else {
        x - 1
    }
}

/// Simulates one exact-event path up to `horizon` and stores its event list.
pub fn sample_path(p: &ChainParams, x0: u64, horizon: f64, stream: RngStream) -> Result<Trajectory> {
    check_state(p, x0, "start state")?;
    check_horizon(horizon)?;
    let mut rng = stream.rng();
    let mut t = 0.0f64;
    let mut x = x0;
    let mut times = Vec::new();
    let mut states = Vec::new();
    loop {
        let total = p.total_rate_raw(x);
        t += exp_waiting_time(&mut rng, total);
        if t > horizon {
            break;
        }
        x = jump(p, x, total, &mut rng);
        times.push(t);
        states.push(x);
    }
    Ok(Trajectory {
        times,
        states,
        x0,
        horizon,
    })
}

/// State at time `t` without storing the event list.
fn state_at(p: &ChainParams, x0: u64, t_end: f64, rng: &mut ChaCha8Rng) -> u64 {
    let mut t = 0.0f64;
    let mut x = x0;
    loop {
        let total = p.total_rate_raw(x);
        t += exp_waiting_time(rng, total);
        if t > t_end {
            return x;
        }
        x = jump(p, x, total, rng);
    }
}

/// Runs the basic coupling of two copies up to `horizon`.
///
/// While the copies disagree they move independently (realized by
/// superposing their clocks); once equal, a single shared clock drives both,
/// so they stay together. Records the first meeting time, whether the
/// initial order was ever violated, and the extreme states visited.
pub fn run_coupled(
    p: &ChainParams,
    x0: u64,
    y0: u64,
    horizon: f64,
    stream: RngStream,
) -> Result<CouplingOutcome> {
    check_state(p, x0, "start state x0")?;
    check_state(p, y0, "start state y0")?;
    check_horizon(horizon)?;
    let mut rng = stream.rng();

    let ordered = x0 <= y0;
    let mut x = x0;
    let mut y = y0;
    let mut t = 0.0f64;
    let mut outcome = CouplingOutcome {
        coalescence_time: if x0 == y0 { Some(0.0) } else { None },
        order_violated: false,
        min_pair: x0.min(y0),
        max_pair: x0.max(y0),
    };

    // Phase one: independent moves until the copies meet.
    while outcome.coalescence_time.is_none() {
        let rx = p.total_rate_raw(x);
        let ry = p.total_rate_raw(y);
        let total = rx + ry;
        t += exp_waiting_time(&mut rng, total);
        if t > horizon {
            return Ok(outcome);
        }
        let u: f64 = rng.random();
        if u * total < rx {
            x = jump(p, x, rx, &mut rng);
        } else {
            y = jump(p, y, ry, &mut rng);
        }
        if ordered && x > y {
            outcome.order_violated = true;
        }
        outcome.min_pair = outcome.min_pair.min(x.min(y));
        outcome.max_pair = outcome.max_pair.max(x.max(y));
        if x == y {
            outcome.coalescence_time = Some(t);
        }
    }

    // Phase two: one shared clock moves both copies identically.
    loop {
        let total = p.total_rate_raw(x);
        t += exp_waiting_time(&mut rng, total);
        if t > horizon {
            return Ok(outcome);
        }
        x = jump(p, x, total, &mut rng);
        outcome.min_pair = outcome.min_pair.min(x);
        outcome.max_pair = outcome.max_pair.max(x);
    }
}

/// As [`run_coupled`] but additionally stores both event lists, so tests can
/// assert the coalescence contract on the paths themselves.
pub fn run_coupled_traced(
    p: &ChainParams,
    x0: u64,
    y0: u64,
    horizon: f64,
    stream: RngStream,
) -> Result<(CouplingOutcome, Trajectory, Trajectory)> {
    check_state(p, x0, "start state x0")?;
    check_state(p, y0, "start state y0")?;
    check_horizon(horizon)?;
    let mut rng = stream.rng();

    let ordered = x0 <= y0;
    let mut x = x0;
    let mut y = y0;
    let mut t = 0.0f64;
    let mut out_x = Trajectory {
        times: Vec::new(),
        states: Vec::new(),
        x0,
        horizon,
    };
    let mut out_y = Trajectory {
        times: Vec::new(),
        states: Vec::new(),
        x0: y0,
        horizon,
    };
    let mut outcome = CouplingOutcome {
        coalescence_time: if x0 == y0 { Some(0.0) } else { None },
        order_violated: false,
        min_pair: x0.min(y0),
        max_pair: x0.max(y0),
    };

    loop {
        if outcome.coalescence_time.is_some() {
            let total = p.total_rate_raw(x);
            t += exp_waiting_time(&mut rng, total);
            if t > horizon {
                break;
            }
            x = jump(p, x, total, &mut rng);
            y = x;
            out_x.times.push(t);
            out_x.states.push(x);
            out_y.times.push(t);
            out_y.states.push(y);
        } else {
            let rx = p.total_rate_raw(x);
            let ry = p.total_rate_raw(y);
            let total = rx + ry;
            t += exp_waiting_time(&mut rng, total);
            if t > horizon {
                break;
            }
            let u: f64 = rng.random();
            if u * total < rx {
                x = jump(p, x, rx, &mut rng);
                out_x.times.push(t);
                out_x.states.push(x);
            } else {
                y = jump(p, y, ry, &mut rng);
                out_y.times.push(t);
                out_y.states.push(y);
            }
            if ordered && x > y {
                outcome.order_violated = true;
            }
            if x == y {
                outcome.coalescence_time = Some(t);
            }
        }
        outcome.min_pair = outcome.min_pair.min(x.min(y));
        outcome.max_pair = outcome.max_pair.max(x.max(y));
    }
    Ok((outcome, out_x, out_y))
}

/// First time the path started at `x0` hits state 0 (almost surely finite;
/// no horizon).
pub fn hitting_time_zero(p: &ChainParams, x0: u64, stream: RngStream) -> Result<f64> {
    check_state(p, x0, "start state")?;
    let mut rng = stream.rng();
    let mut t = 0.0f64;
    let mut x = x0;
    while x != 0 {
        let total = p.total_rate_raw(x);
        t += exp_waiting_time(&mut rng, total);
        x = jump(p, x, total, &mut rng);
    }
    Ok(t)
}

/// Exact expected hitting time of 0 from `x0`, by first-step analysis on
/// the rates: with `E_j` the expected passage time `j -> j-1`,
/// `E_k = 1/down(k)` and `E_j = (1 + up(j) E_{j+1}) / down(j)`, so the
/// answer is `Σ_{j<=x0} E_j`. Serves as the oracle for the
/// [`hitting_time_zero`] sampler.
pub fn expected_hitting_time_zero(p: &ChainParams, x0: u64) -> Result<f64> {
    check_state(p, x0, "start state")?;
    if x0 == 0 {
        return Ok(0.0);
    }
    let k = p.k();
    let mut passage = vec![0.0f64; k as usize + 1];
    passage[k as usize] = 1.0 / p.death_rate_raw(k);
    for j in (1..k).rev() {
        passage[j as usize] =
            (1.0 + p.birth_rate_raw(j) * passage[j as usize + 1]) / p.death_rate_raw(j);
    }
    Ok(passage[1..=x0 as usize].iter().sum())
}

/// One sample of `S_{x,y} = Σ_{z=y+1}^{x} T_z` with independent
/// `T_z ~ Exp(z)`; the surrogate for the passage time from `x` down to `y`.
pub fn exp_sum_sample(x: u64, y: u64, stream: RngStream) -> Result<f64> {
    if y >= x {
        return Err(Error::domain(format!(
            "exponential sum needs y < x, got x={x}, y={y}"
        )));
    }
    let mut rng = stream.rng();
    let mut sum = 0.0f64;
    for z in (y + 1)..=x {
        let e: f64 = Exp1.sample(&mut rng);
        sum += e / z as f64;
    }
    Ok(sum)
}

/// Monte Carlo histogram of `X_t` over `samples` independent trajectories,
/// one child stream per trajectory index.
pub fn empirical_pmf(
    p: &ChainParams,
    x0: u64,
    t: f64,
    samples: u64,
    stream: RngStream,
) -> Result<Pmf> {
    check_state(p, x0, "start state")?;
    check_horizon(t)?;
    if samples == 0 {
        return Err(Error::domain("need at least one sample"));
    }
    let finals: Vec<u64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream.child(i).rng();
            state_at(p, x0, t, &mut rng)
        })
        .collect();
    let mut counts = vec![0.0f64; p.num_states()];
    for f in finals {
        counts[f as usize] += 1.0;
    }
    Pmf::from_unnormalized(0, counts)
}
