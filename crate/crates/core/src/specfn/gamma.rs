//! Gamma and incomplete gamma functions.
//!
//! Real-axis evaluation only. The Lanczos gamma and the regularized
//! incomplete gamma come from `statrs`; this module adds domain checks,
//! the reciprocal-gamma pole convention and signed log-gamma for negative
//! arguments, which the Mittag-Leffler and Wright series need.

use std::f64::consts::PI;

use statrs::function::gamma as sg;

use crate::error::{domain, Result};

/// Largest argument for which `Γ(x)` is finite in `f64`.
const GAMMA_OVERFLOW: f64 = 171.0;

/// `Γ(a)` for `a > 0`.
pub fn gamma_fn(a: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(domain(format!("gamma requires a > 0, got {a}")));
    }
    Ok(gamma_pos(a))
}

/// `Γ(a)` for `a > 0`, exact at the integers where `(a-1)!` fits in `f64`.
fn gamma_pos(a: f64) -> f64 {
    if a == a.round() && a <= 23.0 {
        return (2..a as u32).fold(1.0, |acc, k| acc * k as f64);
    }
    sg::gamma(a)
}

/// Upper incomplete gamma `Γ(a, x) = ∫_x^∞ t^{a-1} e^{-t} dt`.
pub fn gamma_upper_incomplete(a: f64, x: f64) -> Result<f64> {
    check_incomplete(a, x)?;
    if x == 0.0 {
        return gamma_fn(a);
    }
    Ok(gamma_pos(a) * sg::gamma_ur(a, x))
}

/// Lower incomplete gamma `γ(a, x) = ∫_0^x t^{a-1} e^{-t} dt`.
pub fn gamma_lower_incomplete(a: f64, x: f64) -> Result<f64> {
    check_incomplete(a, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(gamma_pos(a) * sg::gamma_lr(a, x))
}

/// Regularized lower incomplete gamma `P(a, x) = γ(a, x)/Γ(a)`.
pub fn gamma_lower_regularized(a: f64, x: f64) -> Result<f64> {
    check_incomplete(a, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(sg::gamma_lr(a, x))
}

fn check_incomplete(a: f64, x: f64) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(domain(format!("incomplete gamma requires a > 0, got {a}")));
    }
    if !(x >= 0.0) {
        return Err(domain(format!("incomplete gamma requires x >= 0, got {x}")));
    }
    Ok(())
}

/// True when `x` is `0, -1, -2, ...`.
pub fn is_gamma_pole(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// `sin(πx)` with argument reduction, exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    if x == x.round() {
        return 0.0;
    }
    let r = x - 2.0 * (x / 2.0).round();
    if r > 0.5 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.5 {
        -(PI * (1.0 + r)).sin()
    } else {
        (PI * r).sin()
    }
}

/// `ln|Γ(x)|` and the sign of `Γ(x)`. `None` at the poles.
pub fn ln_gamma_signed(x: f64) -> Option<(f64, f64)> {
    if is_gamma_pole(x) {
        return None;
    }
    if x > 0.0 {
        if x == x.round() && x <= 23.0 {
            return Some((gamma_pos(x).ln(), 1.0));
        }
        return Some((sg::ln_gamma(x), 1.0));
    }
    // Γ(x) = π / (sin(πx) Γ(1-x)), with Γ(1-x) > 0 here.
    let s = sin_pi(x);
    Some((PI.ln() - s.abs().ln() - sg::ln_gamma(1.0 - x), s.signum()))
}

/// `ln|1/Γ(x)|` and its sign. `None` where `1/Γ(x) = 0`.
pub fn ln_rgamma_signed(x: f64) -> Option<(f64, f64)> {
    ln_gamma_signed(x).map(|(l, s)| (-l, s))
}

/// Reciprocal gamma `1/Γ(x)`, entire, zero at the poles of `Γ`.
pub fn rgamma(x: f64) -> f64 {
    if is_gamma_pole(x) {
        return 0.0;
    }
    if x > 0.0 && x < GAMMA_OVERFLOW {
        return 1.0 / gamma_pos(x);
    }
    match ln_rgamma_signed(x) {
        Some((l, s)) => s * l.exp(),
        None => 0.0,
    }
}
