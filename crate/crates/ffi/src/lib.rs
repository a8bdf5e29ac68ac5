//! C ABI for the urnmix library.
//!
//! Conventions:
//!
//! * Handles (`UrnmixParams`, `UrnmixPmf`) are opaque; create them with the
//!   `*_new`-style constructors, release them with the matching `*_free`.
//!   Passing a handle to `*_free` twice, or using it afterwards, is
//!   undefined behaviour exactly as with any C object.
//! * Every fallible call returns an [`UrnmixStatus`] and writes its result
//!   through an out-pointer, which is left untouched on error.
//! * Null pointers are reported as [`UrnmixStatus::NullPointer`]; panics
//!   are caught at the boundary and reported as [`UrnmixStatus::Panic`].
//!
//! The matching header lives at `include/urnmix.h` and is regenerated by
//! the build script via cbindgen.
//!
//! # Safety
//!
//! Every pointer-taking entry point is `unsafe` with the same contract:
//! handle arguments must be live values returned by the matching
//! constructor (or null, which is reported as a status), and out-pointers
//! must be valid for writes. Nothing here takes ownership except the
//! `*_free` functions.

#![allow(clippy::missing_safety_doc)] // one uniform contract, documented above

use std::panic::{catch_unwind, AssertUnwindSafe};
use urnmix::chain::{ChainParams, Pmf, WindowKind};
use urnmix::exact::{evolve, tv_distance, tv_to_equilibrium, EvolveOptions};
use urnmix::limits::{
    gaussian_shift_tv, gumbel_tail, limit_profile, normal_cdf, poisson_tv, Regime, TimeForm,
};
use urnmix::sim::{exp_sum_sample, hitting_time_zero, RngStream};
use urnmix::Error;

/// Status code returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UrnmixStatus {
    Ok = 0,
    /// An argument lies outside the mathematical domain of the operation.
    DomainError = 1,
    /// A structural contract was violated (lengths, normalization, rates).
    ContractError = 2,
    /// A computation failed a numeric integrity check.
    NumericError = 3,
    /// A required pointer argument was null.
    NullPointer = 4,
    /// A panic was caught at the FFI boundary.
    Panic = 5,
}

/// Opaque urn instance `(n, k)`.
pub struct UrnmixParams(ChainParams);

/// Opaque probability vector over consecutive integer states.
pub struct UrnmixPmf(Pmf);

/// Side of the burn-in window.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UrnmixWindowKind {
    Minus = 0,
    Plus = 1,
}

/// Limit-profile selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UrnmixRegime {
    /// `k ≫ √n`; Gaussian profile at `n/4·log n + θn`. Ignores `alpha`.
    Large = 0,
    /// `k ≍ √n`; Poisson profile at `n/4·log n + θn`.
    CriticalQuarterLogN = 1,
    /// `k ≍ √n`; Poisson profile at `n/2·log k + θn`.
    CriticalHalfLogK = 2,
    /// `k ≪ √n`; Gumbel profile at `n/2·log k + θn`. Ignores `alpha`.
    Small = 3,
}

fn status_of(err: &Error) -> UrnmixStatus {
    match err {
        Error::Domain(_) => UrnmixStatus::DomainError,
        Error::Contract(_) => UrnmixStatus::ContractError,
        Error::NumericIntegrity(_) => UrnmixStatus::NumericError,
        Error::Io { .. } => UrnmixStatus::ContractError,
    }
}

/// Runs `body` with panics converted to a status code.
fn guarded(body: impl FnOnce() -> UrnmixStatus) -> UrnmixStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => UrnmixStatus::Panic,
    }
}

/// Writes a fallible scalar through `out`.
fn write_result<T>(
    out: *mut T,
    result: Result<T, Error>,
) -> UrnmixStatus {
    if out.is_null() {
        return UrnmixStatus::NullPointer;
    }
    match result {
        Ok(v) => {
            unsafe { *out = v };
            UrnmixStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

macro_rules! deref {
    ($ptr:expr) => {
        match unsafe { $ptr.as_ref() } {
            Some(r) => r,
            None => return UrnmixStatus::NullPointer,
        }
    };
}

/// Creates an urn instance; requires `n >= 2` and `1 <= k <= n/2`.
#[no_mangle]
pub unsafe extern "C" fn urnmix_params_new(
    n: u64,
    k: u64,
    out: *mut *mut UrnmixParams,
) -> UrnmixStatus {
    guarded(|| {
        if out.is_null() {
            return UrnmixStatus::NullPointer;
        }
        match ChainParams::new(n, k) {
            Ok(p) => {
                unsafe { *out = Box::into_raw(Box::new(UrnmixParams(p))) };
                UrnmixStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Releases an urn instance. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn urnmix_params_free(params: *mut UrnmixParams) {
    if !params.is_null() {
        drop(unsafe { Box::from_raw(params) });
    }
}

#[no_mangle]
pub unsafe extern "C" fn urnmix_birth_rate(
    params: *const UrnmixParams,
    x: u64,
    out: *mut f64,
) -> UrnmixStatus {
    guarded(|| {
        let p = deref!(params);
        write_result(out, p.0.birth_rate(x))
    })
}

#[no_mangle]
pub unsafe extern "C" fn urnmix_death_rate(
    params: *const UrnmixParams,
    x: u64,
    out: *mut f64,
) -> UrnmixStatus {
    guarded(|| {
        let p = deref!(params);
        write_result(out, p.0.death_rate(x))
    })
}

#[no_mangle]
pub unsafe extern "C" fn urnmix_total_rate(
    params: *const UrnmixParams,
    x: u64,
    out: *mut f64,
) -> UrnmixStatus {
    guarded(|| {
        let p = deref!(params);
        write_result(out, p.0.total_rate(x))
    })
}

/// Closed-form transient mean `E_x0[X_t]`.
#[no_mangle]
pub unsafe extern "C" fn urnmix_mean_at(
    params: *const UrnmixParams,
    x0: u64,
    t: f64,
    out: *mut f64,
) -> UrnmixStatus {
    guarded(|| {
        let p = deref!(params);
        write_result(out, p.0.mean_at(x0, t))
    })
}

/// Closed-form transient variance `Var_x0[X_t]`.
#[no_mangle]
pub unsafe extern "C" fn urnmix_variance_at(
    params: *const UrnmixParams,
    x0: u64,
    t: f64,
    out: *mut f64,
) -> UrnmixStatus {
    guarded(|| {
        let p = deref!(params);
        write_result(out, p.0.variance_at(x0, t))
    })
}

/// Burn-in window time `T±(C)` in chain time units.
#[no_mangle]
pub unsafe extern "C" fn urnmix_window_time(
    params: *const UrnmixParams,
    kind: UrnmixWindowKind,
    c: f64,
    out: *mut f64,
) -> UrnmixStatus {
    guarded(|| {
        let p = deref!(params);
        let kind = match kind {
            UrnmixWindowKind::Minus => WindowKind::Minus,
            UrnmixWindowKind::Plus => WindowKind::Plus,
        };
        write_result(out, p.0.window_time(kind, c).map(|w| w.t))
    })
}

/// The hypergeometric equilibrium law.
#[no_mangle]
pub unsafe extern "C" fn urnmix_stationary_pmf(
    params: *const UrnmixParams,
    out: *mut *mut UrnmixPmf,
) -> UrnmixStatus {
    guarded(|| {
        let p = deref!(params);
        if out.is_null() {
            return UrnmixStatus::NullPointer;
        }
        let pmf = p.0.stationary_pmf();
        unsafe { *out = Box::into_raw(Box::new(UrnmixPmf(pmf))) };
        UrnmixStatus::Ok
    })
}

/// Exact law of `X_t` from the point mass at `x0`, by uniformization with
/// L1 truncation budget `truncation_eps` (pass 0 for the default 1e-12).
#[no_mangle]
pub unsafe extern "C" fn urnmix_evolve_point(
    params: *const UrnmixParams,
    x0: u64,
    t: f64,
    truncation_eps: f64,
    out: *mut *mut UrnmixPmf,
) -> UrnmixStatus {
    guarded(|| {
        let p = deref!(params);
        if out.is_null() {
            return UrnmixStatus::NullPointer;
        }
        if x0 > p.0.k() {
            return UrnmixStatus::DomainError;
        }
        let mut opts = EvolveOptions::default();
        if truncation_eps != 0.0 {
            opts.truncation_eps = truncation_eps;
        }
        match evolve(&p.0, &Pmf::point_mass(x0 as usize), t, &opts) {
            Ok(pmf) => {
                unsafe { *out = Box::into_raw(Box::new(UrnmixPmf(pmf))) };
                UrnmixStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// `TV(P_x0(X_t ∈ ·), π)`.
#[no_mangle]
pub unsafe extern "C" fn urnmix_tv_to_equilibrium(
    params: *const UrnmixParams,
    x0: u64,
    t: f64,
    out: *mut f64,
) -> UrnmixStatus {
    guarded(|| {
        let p = deref!(params);
        write_result(out, tv_to_equilibrium(&p.0, x0, t))
    })
}

/// Number of stored weights.
#[no_mangle]
pub unsafe extern "C" fn urnmix_pmf_len(pmf: *const UrnmixPmf) -> usize {
    match unsafe { pmf.as_ref() } {
        Some(p) => p.0.len(),
        None => 0,
    }
}

/// Global index of the first stored weight.
#[no_mangle]
pub unsafe extern "C" fn urnmix_pmf_support_offset(pmf: *const UrnmixPmf) -> usize {
    match unsafe { pmf.as_ref() } {
        Some(p) => p.0.support_offset(),
        None => 0,
    }
}

/// Probability of `state` (zero outside the support). Null gives 0.
#[no_mangle]
pub unsafe extern "C" fn urnmix_pmf_prob(pmf: *const UrnmixPmf, state: usize) -> f64 {
    match unsafe { pmf.as_ref() } {
        Some(p) => p.0.prob(state),
        None => 0.0,
    }
}

#[no_mangle]
pub unsafe extern "C" fn urnmix_pmf_mean(pmf: *const UrnmixPmf, out: *mut f64) -> UrnmixStatus {
    guarded(|| {
        let p = deref!(pmf);
        write_result(out, Ok(p.0.mean()))
    })
}

#[no_mangle]
pub unsafe extern "C" fn urnmix_pmf_variance(pmf: *const UrnmixPmf, out: *mut f64) -> UrnmixStatus {
    guarded(|| {
        let p = deref!(pmf);
        write_result(out, Ok(p.0.variance()))
    })
}

/// Copies the weights into `buf` (capacity `len`); `len` must be at least
/// `urnmix_pmf_len`.
#[no_mangle]
pub unsafe extern "C" fn urnmix_pmf_copy_weights(
    pmf: *const UrnmixPmf,
    buf: *mut f64,
    len: usize,
) -> UrnmixStatus {
    guarded(|| {
        let p = deref!(pmf);
        if buf.is_null() {
            return UrnmixStatus::NullPointer;
        }
        if len < p.0.len() {
            return UrnmixStatus::ContractError;
        }
        let weights = p.0.weights();
        unsafe { std::ptr::copy_nonoverlapping(weights.as_ptr(), buf, weights.len()) };
        UrnmixStatus::Ok
    })
}

/// Releases a pmf handle. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn urnmix_pmf_free(pmf: *mut UrnmixPmf) {
    if !pmf.is_null() {
        drop(unsafe { Box::from_raw(pmf) });
    }
}

/// Total-variation distance between two pmfs on the union of supports.
#[no_mangle]
pub unsafe extern "C" fn urnmix_tv_distance(
    a: *const UrnmixPmf,
    b: *const UrnmixPmf,
    out: *mut f64,
) -> UrnmixStatus {
    guarded(|| {
        let a = deref!(a);
        let b = deref!(b);
        write_result(out, Ok(tv_distance(&a.0, &b.0)))
    })
}

/// Limit-profile value at window coordinate `theta`; `alpha` applies to
/// the critical regimes only.
#[no_mangle]
pub unsafe extern "C" fn urnmix_limit_profile(
    regime: UrnmixRegime,
    alpha: f64,
    theta: f64,
    out: *mut f64,
) -> UrnmixStatus {
    guarded(|| {
        let regime = match regime {
            UrnmixRegime::Large => Regime::Large,
            UrnmixRegime::CriticalQuarterLogN => {
                match Regime::critical(alpha, TimeForm::QuarterLogN) {
                    Ok(r) => r,
                    Err(e) => return status_of(&e),
                }
            }
            UrnmixRegime::CriticalHalfLogK => match Regime::critical(alpha, TimeForm::HalfLogK) {
                Ok(r) => r,
                Err(e) => return status_of(&e),
            },
            UrnmixRegime::Small => Regime::Small,
        };
        write_result(out, limit_profile(&regime, theta))
    })
}

/// Standard normal CDF.
#[no_mangle]
pub extern "C" fn urnmix_normal_cdf(x: f64) -> f64 {
    normal_cdf(x)
}

/// `‖N(m, 1) - N(0, 1)‖_TV`.
#[no_mangle]
pub extern "C" fn urnmix_gaussian_shift_tv(m: f64) -> f64 {
    gaussian_shift_tv(m)
}

/// Standard Gumbel tail `P(G > x)`.
#[no_mangle]
pub extern "C" fn urnmix_gumbel_tail(x: f64) -> f64 {
    gumbel_tail(x)
}

/// `‖Pois(λ₁) - Pois(λ₂)‖_TV` with absolute error at most `tol`
/// (`tol` in `(0, 1e-6]`).
#[no_mangle]
pub unsafe extern "C" fn urnmix_poisson_tv(
    lambda1: f64,
    lambda2: f64,
    tol: f64,
    out: *mut f64,
) -> UrnmixStatus {
    guarded(|| write_result(out, poisson_tv(lambda1, lambda2, tol)))
}

/// One simulated hitting time of state 0 from `x0`, on the stream
/// `(seed, stream_id)`.
#[no_mangle]
pub unsafe extern "C" fn urnmix_hitting_time_zero(
    params: *const UrnmixParams,
    x0: u64,
    seed: u64,
    stream_id: u64,
    out: *mut f64,
) -> UrnmixStatus {
    guarded(|| {
        let p = deref!(params);
        write_result(out, hitting_time_zero(&p.0, x0, RngStream::new(seed, stream_id)))
    })
}

/// One sample of the exponential sum `S_{x,y}` on `(seed, stream_id)`.
#[no_mangle]
pub unsafe extern "C" fn urnmix_exp_sum_sample(
    x: u64,
    y: u64,
    seed: u64,
    stream_id: u64,
    out: *mut f64,
) -> UrnmixStatus {
    guarded(|| write_result(out, exp_sum_sample(x, y, RngStream::new(seed, stream_id))))
}
