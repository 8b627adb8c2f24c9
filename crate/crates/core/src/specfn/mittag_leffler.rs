//! Mittag-Leffler functions `E_β(z)` and `E_{β,ρ}(z)` on the negative real axis.
//!
//! E_{β,ρ}(z) = Σ_{n≥0} z^n / Γ(βn + ρ)
//!
//! Three regimes are combined:
//!
//! * the power series, when `|z|` is below the crossover and the largest
//!   term is small enough that cancellation stays under the tolerance;
//! * the algebraic asymptotic expansion `-Σ_{n=1}^{m} z^{-n}/Γ(ρ - βn)`
//!   for `|z| ≥ 50`, valid on the whole negative axis;
//! * otherwise, for `0 < β < 1`, the Laplace-inversion integral on a Hankel
//!   contour collapsed onto the branch cut, which for `z = -x` is the real
//!   integral
//!
//!   E_{β,ρ}(-x) = (1/π) ∫_0^∞ e^{-r} r^{β-ρ}
//!                 [r^β sin(πρ) - x sin(π(β-ρ))] / (r^{2β} + 2 x r^β cos(πβ) + x²) dr
//!
//!   for `ρ < 1 + β`; larger `ρ` is reached by the recurrence
//!   `E_{β,ρ}(z) = (E_{β,ρ-β}(z) - 1/Γ(ρ-β)) / z`.
//!
//! For small `β` the series terms grow like `exp(x^{1/β})`, so the integral
//! is the only route that keeps double precision in the middle band.

use std::f64::consts::PI;

use super::gamma::{ln_gamma_signed, rgamma, sin_pi};
use super::quad::{integrate_breaks, QuadTolerance};
use super::{sum_log_terms, SeriesPolicy, SeriesValue};
use crate::error::{domain, Error, Result};

/// `|z|` from which the asymptotic expansion is tried.
pub const ASYMPTOTIC_THRESHOLD: f64 = 50.0;
/// Number of asymptotic terms used by the regime switch.
pub const ASYMPTOTIC_ORDER: usize = 6;

/// Upper cut of the contour integral; `e^{-80}` is below any tolerance used here.
const HANKEL_CUTOFF: f64 = 80.0;

/// `E_β(z)` for `0 < β ≤ 1`, `z ≤ 0`.
pub fn mittag_leffler(beta: f64, z: f64) -> Result<f64> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(domain(format!("mittag_leffler requires 0 < beta <= 1, got {beta}")));
    }
    if beta == 1.0 {
        check_negative_axis(z)?;
        return Ok(z.exp());
    }
    mittag_leffler_general(beta, 1.0, z)
}

/// `E_{β,ρ}(z)` for `0 < β < 2`, `ρ > 0`, `z ≤ 0`, default policy.
pub fn mittag_leffler_general(beta: f64, rho: f64, z: f64) -> Result<f64> {
    mittag_leffler_general_with(beta, rho, z, &SeriesPolicy::default())
}

pub fn mittag_leffler_general_with(beta: f64, rho: f64, z: f64, policy: &SeriesPolicy) -> Result<f64> {
    check_params(beta, rho)?;
    check_negative_axis(z)?;
    let x = -z;
    if x == 0.0 {
        return Ok(rgamma(rho));
    }
    if beta == 1.0 {
        if rho == 1.0 {
            return Ok(z.exp());
        }
        if rho == 2.0 {
            return Ok(-(z.exp_m1()) / x);
        }
    }

    let mut series = None;
    if x <= policy.crossover_threshold && series_feasible(beta, rho, x) {
        match mittag_leffler_series(beta, rho, z, policy) {
            Ok(s) => return Ok(s.value),
            Err(Error::AccuracyLoss { partial, .. }) | Err(Error::Convergence { partial, .. }) => {
                series = Some(partial)
            }
            Err(e) => return Err(e),
        }
    }

    let mut asymptotic = None;
    if x >= ASYMPTOTIC_THRESHOLD {
        let (value, err) = asymptotic_with_error(beta, rho, x, ASYMPTOTIC_ORDER);
        if err <= policy.abs_tol * 1e-2 && (beta < 1.0 || err <= 1e-16) {
            return Ok(value);
        }
        asymptotic = Some(value);
    }

    if beta < 1.0 {
        return hankel(beta, rho, x, policy);
    }
    if beta == 1.0 && rho > 1.0 {
        return exponential_kernel(rho, x, policy);
    }
    Err(Error::Regimes { series, asymptotic })
}

/// Power series partial sum. Fails when cancellation or truncation exceeds
/// `policy.abs_tol`.
pub fn mittag_leffler_series(beta: f64, rho: f64, z: f64, policy: &SeriesPolicy) -> Result<SeriesValue> {
    check_params(beta, rho)?;
    if z == 0.0 {
        return Ok(SeriesValue {
            value: rgamma(rho),
            terms: 1,
            largest_term: rgamma(rho).abs(),
        });
    }
    let lx = z.abs().ln();
    let negative = z < 0.0;
    sum_log_terms(policy, |n| {
        let (lg, sg) = ln_gamma_signed(beta * n as f64 + rho)?;
        let sign = if negative && n % 2 == 1 { -sg } else { sg };
        let nl = n as f64 * lx;
        Some((nl - lg, sign, nl.abs() + lg.abs()))
    })
}

/// Asymptotic sum `-Σ_{n=1}^{m} z^{-n} / Γ(ρ - βn)` for `z < 0`.
pub fn mittag_leffler_asymptotic(beta: f64, rho: f64, z: f64, m: usize) -> Result<f64> {
    if !(beta > 0.0 && beta < 2.0) {
        return Err(domain(format!("asymptotic expansion requires 0 < beta < 2, got {beta}")));
    }
    if !rho.is_finite() {
        return Err(domain("rho must be finite"));
    }
    if !(z < 0.0) {
        return Err(domain(format!("asymptotic expansion requires z < 0, got {z}")));
    }
    if m < 1 {
        return Err(domain("asymptotic order m must be at least 1"));
    }
    Ok(asymptotic_sum(beta, rho, -z, m))
}

fn asymptotic_sum(beta: f64, rho: f64, x: f64, m: usize) -> f64 {
    // z^{-n} = (-1)^n x^{-n}
    let mut sum = 0.0;
    let mut pow = 1.0;
    for n in 1..=m {
        pow /= -x;
        sum -= pow * rgamma(rho - beta * n as f64);
    }
    sum
}

fn asymptotic_with_error(beta: f64, rho: f64, x: f64, m: usize) -> (f64, f64) {
    let value = asymptotic_sum(beta, rho, x, m);
    let next = |n: usize| (x.powi(-(n as i32)) * rgamma(rho - beta * n as f64)).abs();
    (value, next(m + 1).max(next(m + 2)))
}

/// Cheap pre-check: the largest series term is about `exp(x^{1/β})`.
fn series_feasible(beta: f64, _rho: f64, x: f64) -> bool {
    x.ln() / beta < 40f64.ln()
}

fn check_params(beta: f64, rho: f64) -> Result<()> {
    if !(beta > 0.0 && beta < 2.0) {
        return Err(domain(format!("Mittag-Leffler requires 0 < beta < 2, got {beta}")));
    }
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(domain(format!("Mittag-Leffler requires rho > 0, got {rho}")));
    }
    Ok(())
}

fn check_negative_axis(z: f64) -> Result<()> {
    if !(z <= 0.0) {
        return Err(domain(format!("only the negative real axis is supported, got z = {z}")));
    }
    Ok(())
}

fn quad_tol(policy: &SeriesPolicy) -> QuadTolerance {
    QuadTolerance {
        abs: policy.abs_tol * 1e-4,
        rel: 1e-13,
        max_intervals: 4000,
    }
}

/// Contour-integral evaluation of `E_{β,ρ}(-x)` for `0 < β < 1`, `x > 0`.
fn hankel(beta: f64, rho: f64, x: f64, policy: &SeriesPolicy) -> Result<f64> {
    let mut base = rho;
    let mut lifts = 0;
    while base >= 1.0 + beta {
        base -= beta;
        lifts += 1;
    }
    let mut value = hankel_core(beta, base, x, policy)?;
    let mut r = base;
    for _ in 0..lifts {
        // E_{β,r+β}(-x) = (1/Γ(r) - E_{β,r}(-x)) / x
        value = (rgamma(r) - value) / x;
        r += beta;
    }
    Ok(value)
}

fn hankel_core(beta: f64, rho: f64, x: f64, policy: &SeriesPolicy) -> Result<f64> {
    let sin_rho = sin_pi(rho);
    let sin_br = sin_pi(beta - rho);
    let (sin_b, cos_b) = (PI * beta).sin_cos();
    // kernel without the r^{β-ρ} weight
    let kernel = |r: f64| {
        let rb = r.powf(beta);
        let num = rb * sin_rho - x * sin_br;
        let re = rb + x * cos_b;
        let im = x * sin_b;
        (-r).exp() * num / (re * re + im * im)
    };
    // r ∈ [0, 1]: r = u^{1/p}, r^{β-ρ} dr = du / p
    let p = 1.0 + beta - rho;
    let near = |u: f64| kernel(u.powf(1.0 / p)) / p;
    let far = |r: f64| r.powf(beta - rho) * kernel(r);

    let peak = x.powf(1.0 / beta);
    let tol = quad_tol(policy);
    let mut near_breaks = vec![0.0, 1.0];
    let mut far_breaks = vec![1.0, HANKEL_CUTOFF];
    if peak < 1.0 {
        near_breaks.insert(1, peak.powf(p));
    } else if peak < HANKEL_CUTOFF {
        far_breaks.insert(1, peak);
        if peak > 2.0 {
            far_breaks.insert(1, 0.5 * peak);
        }
    }
    let a = integrate_breaks(near, &near_breaks, tol);
    let b = integrate_breaks(far, &far_breaks, tol);
    let value = (a.value + b.value) / PI;
    if !(a.converged && b.converged) {
        let error = (a.error + b.error) / PI;
        if error > policy.abs_tol * 1e-2 {
            return Err(Error::Quadrature { value, error });
        }
    }
    Ok(value)
}

/// `E_{1,ρ}(-x) = (1/Γ(ρ-1)) ∫_0^1 (1-t)^{ρ-2} e^{-xt} dt` for `ρ > 1`,
/// written with `s = 1 - t = u^{1/(ρ-1)}`.
fn exponential_kernel(rho: f64, x: f64, policy: &SeriesPolicy) -> Result<f64> {
    let q = rho - 1.0;
    let f = |u: f64| (-x * (1.0 - u.powf(1.0 / q))).exp();
    let knee = (1.0 - q / x).max(0.0).powf(q);
    let breaks = if knee > 0.0 && knee < 1.0 {
        vec![0.0, knee, 1.0]
    } else {
        vec![0.0, 1.0]
    };
    let r = integrate_breaks(f, &breaks, quad_tol(policy));
    let value = rgamma(rho) * r.value;
    if !r.converged && r.error > policy.abs_tol * 1e-2 {
        return Err(Error::Quadrature { value, error: r.error });
    }
    Ok(value)
}
