//! The three process classes and their exact second-order structure.
//!
//! All three share the pinned Gaussian core `B(t)` with covariance
//!
//!   R(t, s) = ½ (d_H(t) + d_H(s) - d_H(t - s)),
//!   d_H(τ) = min(|τ|^{2H}, (L - |τ|)^{2H}),
//!
//! and differ only in the random envelope `√Y_β` multiplying it: none for
//! pfBm, `β = 2H` for pgBm, free `β` for pggBm.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::specfn::{gamma_fn, mittag_leffler, mittag_leffler_general};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProcessClass {
    Pfbm,
    Pgbm,
    Pggbm,
}

impl ProcessClass {
    pub fn name(self) -> &'static str {
        match self {
            Self::Pfbm => "pfbm",
            Self::Pgbm => "pgbm",
            Self::Pggbm => "pggbm",
        }
    }
}

impl std::fmt::Display for ProcessClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ProcessClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pfbm" => Ok(Self::Pfbm),
            "pgbm" => Ok(Self::Pgbm),
            "pggbm" => Ok(Self::Pggbm),
            _ => Err(domain(format!("unknown process class '{s}' (expected pfbm, pgbm or pggbm)"))),
        }
    }
}

/// A process class with its parameters.
///
/// Construct through [`ProcessSpec::pfbm`], [`ProcessSpec::pgbm`],
/// [`ProcessSpec::pggbm`] or [`ProcessSpec::new`]; the fields are validated
/// once and then read-only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProcessSpec {
    class: ProcessClass,
    hurst: f64,
    beta: f64,
    circle_length: f64,
    allow_unstable: bool,
}

impl ProcessSpec {
    /// Validating constructor. `beta` is required for pggBm and must be
    /// absent or consistent (1 for pfBm, `2H` for pgBm) otherwise.
    pub fn new(class: ProcessClass, hurst: f64, beta: Option<f64>, circle_length: f64) -> Result<Self> {
        Self::build(class, hurst, beta, circle_length, false)
    }

    /// As [`ProcessSpec::new`] but accepts `1/2 < H < 1`, where the
    /// covariance is no longer positive semi-definite. Such specs are
    /// usable for covariance and PSD experiments; the sampler refuses them.
    pub fn new_unstable(class: ProcessClass, hurst: f64, beta: Option<f64>, circle_length: f64) -> Result<Self> {
        Self::build(class, hurst, beta, circle_length, true)
    }

    pub fn pfbm(hurst: f64, circle_length: f64) -> Result<Self> {
        Self::new(ProcessClass::Pfbm, hurst, None, circle_length)
    }

    pub fn pgbm(hurst: f64, circle_length: f64) -> Result<Self> {
        Self::new(ProcessClass::Pgbm, hurst, None, circle_length)
    }

    pub fn pggbm(hurst: f64, beta: f64, circle_length: f64) -> Result<Self> {
        Self::new(ProcessClass::Pggbm, hurst, Some(beta), circle_length)
    }

    fn build(
        class: ProcessClass,
        hurst: f64,
        beta: Option<f64>,
        circle_length: f64,
        allow_unstable: bool,
    ) -> Result<Self> {
        if !(circle_length > 0.0) || !circle_length.is_finite() {
            return Err(domain(format!("circle length must be positive and finite, got {circle_length}")));
        }
        let h_max = if allow_unstable { 1.0 } else { 0.5 };
        if !(hurst > 0.0 && hurst <= h_max) || (allow_unstable && hurst >= 1.0) {
            return Err(if allow_unstable {
                domain(format!("Hurst parameter must lie in (0, 1), got {hurst}"))
            } else {
                domain(format!(
                    "Hurst parameter must lie in (0, 1/2], got {hurst}: for H > 1/2 the periodic covariance is not positive semi-definite"
                ))
            });
        }
        let forced = match class {
            ProcessClass::Pfbm => Some(1.0),
            ProcessClass::Pgbm => Some(2.0 * hurst),
            ProcessClass::Pggbm => None,
        };
        let beta = match (forced, beta) {
            (Some(f), None) => f,
            (Some(f), Some(b)) if (b - f).abs() <= 1e-12 * f => f,
            (Some(f), Some(b)) => {
                return Err(domain(format!("{class} fixes beta = {f}, got {b}")));
            }
            (None, Some(b)) => b,
            (None, None) => return Err(domain("pggbm requires beta")),
        };
        let beta_ok = beta > 0.0 && (beta <= 1.0 || (allow_unstable && class == ProcessClass::Pgbm && beta < 2.0));
        if !beta_ok {
            return Err(domain(format!("beta must lie in (0, 1], got {beta}")));
        }
        Ok(Self {
            class,
            hurst,
            beta,
            circle_length,
            allow_unstable,
        })
    }

    pub fn class(&self) -> ProcessClass {
        self.class
    }

    pub fn hurst(&self) -> f64 {
        self.hurst
    }

    /// Envelope order: 1 for pfBm, `2H` for pgBm.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn circle_length(&self) -> f64 {
        self.circle_length
    }

    pub fn allow_unstable(&self) -> bool {
        self.allow_unstable
    }

    /// True for `H > 1/2`.
    pub fn is_unstable(&self) -> bool {
        self.hurst > 0.5
    }

    /// Same class and `β`, different `L`.
    pub fn with_circle_length(&self, circle_length: f64) -> Result<Self> {
        Self::build(self.class, self.hurst, Some(self.beta), circle_length, self.allow_unstable)
    }

    /// `E[exp(-x Y_β)] = E_β(-x)` for `x ≥ 0`, the Laplace transform of the
    /// envelope law. Every characteristic function of the class reduces to it.
    pub fn envelope_laplace(&self, x: f64) -> Result<f64> {
        if self.class == ProcessClass::Pfbm || self.beta == 1.0 {
            if !(x >= 0.0) {
                return Err(domain(format!("envelope Laplace transform needs x >= 0, got {x}")));
            }
            return Ok((-x).exp());
        }
        if self.beta < 1.0 {
            mittag_leffler(self.beta, -x)
        } else {
            mittag_leffler_general(self.beta, 1.0, -x)
        }
    }

    /// `E[Y_β] = 1/Γ(β+1)`.
    pub fn envelope_mean(&self) -> f64 {
        if self.class == ProcessClass::Pfbm {
            1.0
        } else {
            1.0 / gamma_fn(self.beta + 1.0).expect("beta > 0")
        }
    }
}

/// `N` equally spaced times `t_i = i L / N` on `[0, L)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircleGrid {
    n_points: usize,
    circle_length: f64,
    times: Vec<f64>,
}

impl CircleGrid {
    pub fn new(n_points: usize, circle_length: f64) -> Result<Self> {
        if n_points == 0 {
            return Err(domain("grid needs at least one point"));
        }
        if !(circle_length > 0.0) || !circle_length.is_finite() {
            return Err(domain(format!("circle length must be positive and finite, got {circle_length}")));
        }
        let times = (0..n_points)
            .map(|i| i as f64 * circle_length / n_points as f64)
            .collect();
        Ok(Self {
            n_points,
            circle_length,
            times,
        })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn circle_length(&self) -> f64 {
        self.circle_length
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn spacing(&self) -> f64 {
        self.circle_length / self.n_points as f64
    }
}

/// `d_H(τ; L) = min(|τ|^{2H}, (L - |τ|)^{2H})` for `|τ| ≤ L`.
pub fn geodesic_variance(tau: f64, hurst: f64, circle_length: f64) -> Result<f64> {
    check_shape(hurst, circle_length)?;
    let a = tau.abs();
    if !(a <= circle_length) {
        return Err(domain(format!("|tau| = {a} exceeds the circle length {circle_length}")));
    }
    Ok(geodesic_unchecked(a, hurst, circle_length))
}

#[inline]
pub(crate) fn geodesic_unchecked(tau_abs: f64, hurst: f64, circle_length: f64) -> f64 {
    let a = tau_abs.min(circle_length - tau_abs);
    if a == 0.0 {
        0.0
    } else {
        a.powf(2.0 * hurst)
    }
}

/// `R^H(t, s)` for `t, s ∈ [0, L)`.
pub fn covariance(t: f64, s: f64, hurst: f64, circle_length: f64) -> Result<f64> {
    check_shape(hurst, circle_length)?;
    check_time(t, circle_length)?;
    check_time(s, circle_length)?;
    Ok(covariance_unchecked(t, s, hurst, circle_length))
}

#[inline]
fn covariance_unchecked(t: f64, s: f64, hurst: f64, circle_length: f64) -> f64 {
    let d = |x: f64| geodesic_unchecked(x.abs(), hurst, circle_length);
    0.5 * (d(t) + d(s) - d(t - s))
}

fn check_shape(hurst: f64, circle_length: f64) -> Result<()> {
    if !(hurst > 0.0) || !hurst.is_finite() {
        return Err(domain(format!("Hurst parameter must be positive, got {hurst}")));
    }
    if !(circle_length > 0.0) || !circle_length.is_finite() {
        return Err(domain(format!("circle length must be positive and finite, got {circle_length}")));
    }
    Ok(())
}

fn check_time(t: f64, circle_length: f64) -> Result<()> {
    if !(t >= 0.0 && t < circle_length) {
        return Err(domain(format!("time {t} is outside [0, {circle_length})")));
    }
    Ok(())
}

/// Covariance of the pinned Gaussian core on a grid.
#[derive(Debug, Clone)]
pub struct CovarianceMatrix {
    values: DMatrix<f64>,
    grid: CircleGrid,
    hurst: f64,
    min_eigenvalue: Option<f64>,
}

impl CovarianceMatrix {
    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn grid(&self) -> &CircleGrid {
        &self.grid
    }

    pub fn hurst(&self) -> f64 {
        self.hurst
    }

    /// Set once [`psd_check`] has run.
    pub fn min_eigenvalue(&self) -> Option<f64> {
        self.min_eigenvalue
    }

    pub fn max_diagonal(&self) -> f64 {
        self.values.diagonal().iter().fold(0.0, |m, &v| m.max(v))
    }
}

pub fn covariance_matrix(grid: &CircleGrid, hurst: f64) -> Result<CovarianceMatrix> {
    check_shape(hurst, grid.circle_length())?;
    let n = grid.n_points();
    let t = grid.times();
    let l = grid.circle_length();
    let mut values = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = covariance_unchecked(t[i], t[j], hurst, l);
            values[(i, j)] = v;
            values[(j, i)] = v;
        }
    }
    Ok(CovarianceMatrix {
        values,
        grid: grid.clone(),
        hurst,
        min_eigenvalue: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PsdCheck {
    pub min_eigenvalue: f64,
    pub is_psd: bool,
}

/// Smallest eigenvalue, and whether it is at least `-tol · max diagonal`.
/// Records the eigenvalue on the matrix.
pub fn psd_check(cov: &mut CovarianceMatrix, tol: f64) -> Result<PsdCheck> {
    if !(tol >= 0.0) {
        return Err(domain(format!("tolerance must be non-negative, got {tol}")));
    }
    let eig = SymmetricEigen::try_new(cov.values.clone(), f64::EPSILON, 10_000).ok_or(Error::Eigen)?;
    let min_eigenvalue = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if !min_eigenvalue.is_finite() {
        return Err(Error::Eigen);
    }
    cov.min_eigenvalue = Some(min_eigenvalue);
    Ok(PsdCheck {
        min_eigenvalue,
        is_psd: min_eigenvalue >= -tol * cov.max_diagonal(),
    })
}

/// `E[exp(ik(X(t) - X(s)))] = E_β(-k²/2 · d_H(t - s))`.
pub fn increment_char_fn(spec: &ProcessSpec, k: f64, t: f64, s: f64) -> Result<f64> {
    let l = spec.circle_length();
    check_time(t, l)?;
    check_time(s, l)?;
    let d = geodesic_unchecked((t - s).abs(), spec.hurst(), l);
    spec.envelope_laplace(0.5 * k * k * d)
}

/// `E[(X(t) - X(s))²] = d_H(t - s) / Γ(β + 1)`.
pub fn increment_second_moment(spec: &ProcessSpec, t: f64, s: f64) -> Result<f64> {
    let l = spec.circle_length();
    check_time(t, l)?;
    check_time(s, l)?;
    let d = geodesic_unchecked((t - s).abs(), spec.hurst(), l);
    Ok(d * spec.envelope_mean())
}

/// `E[exp(i Σ λ_j X(t_j))] = E_β(-½ λᵀΣλ)` with `Σ_jk = R^H(t_j, t_k)`.
pub fn multivariate_char_fn(spec: &ProcessSpec, lambdas: &[f64], times: &[f64]) -> Result<f64> {
    if lambdas.len() != times.len() {
        return Err(domain(format!(
            "{} coefficients for {} times",
            lambdas.len(),
            times.len()
        )));
    }
    let (h, l) = (spec.hurst(), spec.circle_length());
    for &t in times {
        check_time(t, l)?;
    }
    let mut q = 0.0;
    for (j, (&lj, &tj)) in lambdas.iter().zip(times).enumerate() {
        q += lj * lj * covariance_unchecked(tj, tj, h, l);
        for (&lk, &tk) in lambdas[..j].iter().zip(times) {
            q += 2.0 * lj * lk * covariance_unchecked(tj, tk, h, l);
        }
    }
    spec.envelope_laplace(0.5 * q.max(0.0))
}

/// Checks `R^H(at, as; aL) = a^{2H} R^H(t, s; L)` to `1e-12` relative.
pub fn self_similarity_check(hurst: f64, a: f64, t: f64, s: f64, circle_length: f64) -> Result<bool> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(domain(format!("scale factor must be positive, got {a}")));
    }
    let base = covariance(t, s, hurst, circle_length)?;
    let scaled = covariance(a * t, a * s, hurst, a * circle_length)?;
    let factor = a.powf(2.0 * hurst);
    Ok((scaled - factor * base).abs() <= 1e-12 * factor * base.abs().max(1.0))
}
