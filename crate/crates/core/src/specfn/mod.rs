//! Special functions on the real axis: gamma family, Mittag-Leffler,
//! M-Wright and the Fox-Wright ₂Ψ₂ series.
//!
//! Every function here is pure; nothing is cached between calls.

mod fox_wright;
mod gamma;
mod mittag_leffler;
mod mwright;
pub mod quad;

pub use fox_wright::{fox_wright_2psi2, WrightPair};
pub use gamma::{
    gamma_fn, gamma_lower_incomplete, gamma_lower_regularized, gamma_upper_incomplete, is_gamma_pole,
    ln_gamma_signed, ln_rgamma_signed, rgamma, sin_pi,
};
pub use mittag_leffler::{
    mittag_leffler, mittag_leffler_asymptotic, mittag_leffler_general, mittag_leffler_general_with,
    mittag_leffler_series, ASYMPTOTIC_ORDER, ASYMPTOTIC_THRESHOLD,
};
pub use mwright::{kanter_factor, m_wright, m_wright_series};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Truncation controls shared by the series evaluators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesPolicy {
    pub max_terms: usize,
    pub abs_tol: f64,
    /// Argument magnitude above which the power series is not attempted.
    pub crossover_threshold: f64,
}

impl SeriesPolicy {
    pub fn new(max_terms: usize, abs_tol: f64, crossover_threshold: f64) -> Result<Self> {
        if max_terms < 1 {
            return Err(domain("max_terms must be at least 1"));
        }
        if !(abs_tol > 0.0) {
            return Err(domain(format!("abs_tol must be positive, got {abs_tol}")));
        }
        if !(crossover_threshold > 0.0) {
            return Err(domain(format!(
                "crossover_threshold must be positive, got {crossover_threshold}"
            )));
        }
        Ok(Self {
            max_terms,
            abs_tol,
            crossover_threshold,
        })
    }
}

impl Default for SeriesPolicy {
    fn default() -> Self {
        Self {
            max_terms: 700,
            abs_tol: 1e-10,
            crossover_threshold: 30.0,
        }
    }
}

/// A truncated series sum with its bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub terms: usize,
    /// Magnitude of the largest term; bounds the cancellation error.
    pub largest_term: f64,
}

/// Sum an alternating-type series whose `n`-th term is `sign * exp(log_mag)`.
///
/// `term(n)` returns `None` for a term that is exactly zero, otherwise
/// `(log_mag, sign, log_scale)` where `log_scale` is the sum of the absolute
/// values of the logarithms combined into `log_mag`; it sizes the rounding
/// error of the term. Stops after two consecutive non-zero terms that are
/// past the peak and below both `abs_tol * 1e-3` and one ulp of `Σ|t_n|`.
/// Fails with `AccuracyLoss` as soon as the accumulated rounding bound
/// exceeds `abs_tol * 1e-2`.
pub(crate) fn sum_log_terms<F>(policy: &SeriesPolicy, mut term: F) -> Result<SeriesValue>
where
    F: FnMut(usize) -> Option<(f64, f64, f64)>,
{
    use crate::error::Error;

    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut abs_sum = 0.0f64;
    let mut rounding = 0.0f64;
    let mut largest = 0.0f64;
    let mut prev = f64::INFINITY;
    let mut last = 0.0;
    let mut small_run = 0;
    let stop = policy.abs_tol * 1e-3;
    for n in 0..policy.max_terms {
        let Some((log_mag, sign, log_scale)) = term(n) else {
            continue;
        };
        let t = sign * log_mag.exp();
        // Kahan summation
        let y = t - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
        let a = t.abs();
        abs_sum += a;
        rounding += a * f64::EPSILON * (4.0 + 2.0 * log_scale);
        largest = largest.max(a);
        if !abs_sum.is_finite() || rounding > policy.abs_tol * 1e-2 {
            return Err(Error::AccuracyLoss {
                largest_term: largest,
                partial: sum,
            });
        }
        if t == 0.0 {
            continue;
        }
        last = a;
        if a <= prev && a <= stop.min(f64::EPSILON * abs_sum) {
            small_run += 1;
            if small_run == 2 {
                return Ok(SeriesValue {
                    value: sum,
                    terms: n + 1,
                    largest_term: largest,
                });
            }
        } else {
            small_run = 0;
        }
        prev = a;
    }
    Err(Error::Convergence {
        terms: policy.max_terms,
        last_term: last,
        partial: sum,
    })
}
