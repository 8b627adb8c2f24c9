//! M-Wright function `M_β(x) = W_{-β,1-β}(-x)`, a probability density on
//! `x ≥ 0` whose Laplace transform is `E_β(-s)`.

use std::f64::consts::PI;

use super::gamma::{ln_rgamma_signed, rgamma};
use super::quad::{integrate_breaks, QuadTolerance};
use super::{sum_log_terms, SeriesPolicy, SeriesValue};
use crate::error::{domain, Error, Result};

/// Series `Σ (-x)^n / (n! Γ(1 - β - βn))`.
///
/// The terms grow to roughly `exp((1-β) x^{1/(1-β)})` before decaying, so
/// for large `x` this fails with `AccuracyLoss` carrying the largest term.
pub fn m_wright_series(beta: f64, x: f64, policy: &SeriesPolicy) -> Result<SeriesValue> {
    check(beta, x)?;
    if x == 0.0 {
        let v = rgamma(1.0 - beta);
        return Ok(SeriesValue {
            value: v,
            terms: 1,
            largest_term: v.abs(),
        });
    }
    let lx = x.ln();
    let mut ln_fact = 0.0;
    sum_log_terms(policy, |n| {
        if n > 0 {
            ln_fact += (n as f64).ln();
        }
        let (lr, sr) = ln_rgamma_signed(1.0 - beta - beta * n as f64)?;
        let sign = if n % 2 == 1 { -sr } else { sr };
        let nl = n as f64 * lx;
        Some((nl - ln_fact + lr, sign, nl.abs() + ln_fact + lr.abs()))
    })
}

/// `M_β(x)` for `0 < β < 1`, `x ≥ 0`.
///
/// Uses the series while it keeps full accuracy and otherwise the
/// Kanter representation
///
///   M_β(x) = x^{β/(1-β)} / (π(1-β)) ∫_0^π A(u) exp(-A(u) x^{1/(1-β)}) du,
///
/// with `A` from [`kanter_factor`].
pub fn m_wright(beta: f64, x: f64) -> Result<f64> {
    check(beta, x)?;
    let policy = SeriesPolicy::default();
    if x <= 2.0 || (1.0 - beta) * x.powf(1.0 / (1.0 - beta)) < 20.0 {
        match m_wright_series(beta, x, &policy) {
            Ok(s) => return Ok(s.value),
            Err(Error::AccuracyLoss { .. }) | Err(Error::Convergence { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    kanter_integral(beta, x, &policy)
}

/// Kanter's factor
/// `A(u) = sin(βu)^{β/(1-β)} sin((1-β)u) / sin(u)^{1/(1-β)}` on `(0, π)`.
///
/// If `U` is uniform on `(0, π)` and `E` is standard exponential, then
/// `(A(U)/E)^{(1-β)/β}` is one-sided `β`-stable with Laplace transform
/// `exp(-s^β)`, and `(E/A(U))^{1-β}` has density `M_β`.
pub fn kanter_factor(beta: f64, u: f64) -> f64 {
    ln_kanter(beta, u).exp()
}

fn ln_kanter(beta: f64, u: f64) -> f64 {
    let c = 1.0 - beta;
    (beta / c) * (beta * u).sin().ln() + (c * u).sin().ln() - (u.sin().ln()) / c
}

fn kanter_integral(beta: f64, x: f64, policy: &SeriesPolicy) -> Result<f64> {
    let c = 1.0 - beta;
    let scale = x.powf(1.0 / c);
    let f = |u: f64| {
        let la = ln_kanter(beta, u);
        let a = la.exp();
        if !a.is_finite() {
            return 0.0;
        }
        (la - a * scale).exp()
    };
    let tol = QuadTolerance {
        abs: policy.abs_tol * 1e-6,
        rel: 1e-12,
        max_intervals: 4000,
    };
    let r = integrate_breaks(f, &[0.0, 0.5 * PI, 0.9 * PI, PI], tol);
    let value = x.powf(beta / c) * r.value / (PI * c);
    if !r.converged && r.error > policy.abs_tol * 1e-2 {
        return Err(Error::Quadrature { value, error: r.error });
    }
    Ok(value)
}

fn check(beta: f64, x: f64) -> Result<()> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(domain(format!("M-Wright requires 0 < beta < 1, got {beta}")));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(domain(format!("M-Wright requires finite x >= 0, got {x}")));
    }
    Ok(())
}
