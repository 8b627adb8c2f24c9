//! Form factors, Debye functions and gyration quantities.
//!
//! With `y² = (k²/2)(L/2)^{2H}` the form factor of each class depends on
//! `k` and `L` only through `y`:
//!
//!   pfBm   f(y) = γ(1/(2H), y²) / (2H y^{1/H})
//!   pgBm   f(y) = E_{2H,2}(-y²)
//!   pggBm  f(y) = Σ_n (-y²)^n / ((1 + 2Hn) Γ(1 + βn))
//!             = (1/(2H)) y^{-1/H} ∫_0^{y²} v^{1/(2H)-1} E_β(-v) dv

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::process::{ProcessClass, ProcessSpec};
use crate::sampler::PathEnsemble;
use crate::specfn::quad::{integrate_breaks, QuadTolerance};
use crate::specfn::{
    gamma_fn, gamma_lower_regularized, ln_gamma_signed, mittag_leffler, mittag_leffler_general, rgamma,
    SeriesPolicy, SeriesValue,
};
use crate::stats::{mean_estimate, MeanEstimate};

/// `y = |k| (L/2)^H / √2`.
pub fn y_from_k(k: f64, hurst: f64, circle_length: f64) -> Result<f64> {
    check_hurst(hurst)?;
    if !(circle_length > 0.0) {
        return Err(domain(format!("circle length must be positive, got {circle_length}")));
    }
    Ok(k.abs() * (0.5 * circle_length).powf(hurst) / std::f64::consts::SQRT_2)
}

/// Inverse of [`y_from_k`] on `k ≥ 0`.
pub fn k_from_y(y: f64, hurst: f64, circle_length: f64) -> Result<f64> {
    check_hurst(hurst)?;
    if !(circle_length > 0.0) {
        return Err(domain(format!("circle length must be positive, got {circle_length}")));
    }
    Ok(std::f64::consts::SQRT_2 * y.abs() * (0.5 * circle_length).powf(-hurst))
}

fn check_hurst(hurst: f64) -> Result<()> {
    if !(hurst > 0.0 && hurst <= 0.5) {
        return Err(domain(format!("Debye functions need 0 < H <= 1/2, got {hurst}")));
    }
    Ok(())
}

fn check_y(y: f64) -> Result<()> {
    if !(y >= 0.0) || !y.is_finite() {
        return Err(domain(format!("y must be finite and non-negative, got {y}")));
    }
    Ok(())
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(domain(format!("beta must lie in (0, 1], got {beta}")));
    }
    Ok(())
}

/// pfBm Debye function. Uses `Σ (-y²)^n / (n! (1 + 2Hn))` for `y ≤ 1` and
/// the regularized lower incomplete gamma above.
pub fn debye_pfbm(y: f64, hurst: f64) -> Result<f64> {
    check_y(y)?;
    check_hurst(hurst)?;
    let x = y * y;
    if x == 0.0 {
        return Ok(1.0);
    }
    if x <= 1.0 {
        let mut term = 1.0;
        let mut sum = 1.0;
        for n in 1..60 {
            term *= -x / n as f64;
            let t = term / (1.0 + 2.0 * hurst * n as f64);
            sum += t;
            if t.abs() < 1e-17 * sum {
                break;
            }
        }
        return Ok(sum);
    }
    let a = 0.5 / hurst;
    // γ(a, x) / (2H x^a) = a Γ(a) P(a, x) / x^a
    let ln_pref = a.ln() + ln_gamma_signed(a).map(|(l, _)| l).unwrap_or(0.0) - a * x.ln();
    Ok(ln_pref.exp() * gamma_lower_regularized(a, x)?)
}

/// pgBm Debye function `E_{2H,2}(-y²)`.
pub fn debye_pgbm(y: f64, hurst: f64) -> Result<f64> {
    check_y(y)?;
    check_hurst(hurst)?;
    mittag_leffler_general(2.0 * hurst, 2.0, -y * y)
}

/// Truncated series `Σ (-y²)^n / ((1 + 2Hn) Γ(1 + βn))`.
pub fn debye_pggbm_series(y: f64, beta: f64, hurst: f64, policy: &SeriesPolicy) -> Result<SeriesValue> {
    check_y(y)?;
    check_beta(beta)?;
    check_hurst(hurst)?;
    let x = y * y;
    if x == 0.0 {
        return Ok(SeriesValue {
            value: 1.0,
            terms: 1,
            largest_term: 1.0,
        });
    }
    let lx = x.ln();
    crate::specfn::sum_log_terms(policy, |n| {
        let nf = n as f64;
        let (lg, _) = ln_gamma_signed(1.0 + beta * nf)?;
        let ld = (1.0 + 2.0 * hurst * nf).ln();
        let sign = if n % 2 == 1 { -1.0 } else { 1.0 };
        Some((nf * lx - ld - lg, sign, (nf * lx).abs() + ld + lg.abs()))
    })
}

/// pggBm Debye function.
///
/// The series is used while it meets `policy`; past that the integral
/// form is evaluated by adaptive quadrature, with the algebraic tail of
/// `E_β` integrated in closed form once its truncation error is negligible.
pub fn debye_pggbm(y: f64, beta: f64, hurst: f64, policy: &SeriesPolicy) -> Result<f64> {
    check_y(y)?;
    check_beta(beta)?;
    check_hurst(hurst)?;
    let x = y * y;
    if x <= policy.crossover_threshold {
        match debye_pggbm_series(y, beta, hurst, policy) {
            Ok(s) => return Ok(s.value),
            Err(Error::AccuracyLoss { .. }) | Err(Error::Convergence { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    pggbm_integral(x, beta, hurst, policy)
}

const TAIL_ORDER: usize = 6;

fn pggbm_integral(x: f64, beta: f64, hurst: f64, policy: &SeriesPolicy) -> Result<f64> {
    let a = 0.5 / hurst;
    let ml = |v: f64| {
        if beta == 1.0 {
            Ok((-v).exp())
        } else {
            mittag_leffler(beta, -v)
        }
    };
    // coefficients of E_β(-v) ~ Σ (-1)^{n+1} c_n v^{-n}
    let coef: Vec<f64> = (1..=TAIL_ORDER + 2).map(|n| rgamma(1.0 - beta * n as f64)).collect();
    let tail_ok = |v: f64| (coef[TAIL_ORDER].abs() * v.powi(-(TAIL_ORDER as i32 + 1))) <= 1e-15;
    let mut v0 = 50.0f64;
    while !tail_ok(v0) {
        v0 *= 1.5;
    }
    let upper = x.min(v0);

    // ∫_0^upper v^{a-1} E_β(-v) dv, scaled by a x^{-a}
    let scale = a * (-a * x.ln()).exp();
    let failure = std::cell::RefCell::new(None);
    let f = |v: f64| {
        if v == 0.0 {
            return if a == 1.0 { 1.0 } else { 0.0 };
        }
        match ml(v) {
            Ok(e) => v.powf(a - 1.0) * e,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let mut breaks = vec![0.0];
    for b in [1.0, 4.0, 16.0, 50.0] {
        if b < upper {
            breaks.push(b);
        }
    }
    breaks.push(upper);
    let tol = QuadTolerance {
        abs: policy.abs_tol * 1e-3 / scale,
        rel: 1e-13,
        max_intervals: 2000,
    };
    let q = integrate_breaks(f, &breaks, tol);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    if !q.value.is_finite() {
        return Err(Error::Quadrature {
            value: q.value,
            error: q.error,
        });
    }
    if !q.converged && q.error * scale > policy.abs_tol {
        return Err(Error::Quadrature {
            value: q.value * scale,
            error: q.error * scale,
        });
    }
    let mut total = q.value;
    if x > upper {
        for (i, c) in coef[..TAIL_ORDER].iter().enumerate() {
            let n = (i + 1) as f64;
            let p = a - n;
            let piece = if p == 0.0 {
                (x / upper).ln()
            } else {
                (x.powf(p) - upper.powf(p)) / p
            };
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            total += sign * c * piece;
        }
    }
    Ok(scale * total)
}

/// Debye function of a spec's class at `y` (the circle length is ignored).
pub fn debye(spec: &ProcessSpec, y: f64) -> Result<f64> {
    match spec.class() {
        ProcessClass::Pfbm => debye_pfbm(y, spec.hurst()),
        ProcessClass::Pgbm => debye_pgbm(y, spec.hurst()),
        ProcessClass::Pggbm => debye_pggbm(y, spec.beta(), spec.hurst(), &SeriesPolicy::default()),
    }
}

/// Leading large-`y` term of a Debye function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Asymptote {
    pub value: f64,
    /// For pgBm: the competing coefficient `1/Γ(2H+2)` at the same `y`.
    pub printed: Option<f64>,
    /// True when `printed` differs from `value`.
    pub discrepant: bool,
}

/// pfBm: `Γ(1/(2H)) y^{-1/H} / (2H)`. pgBm: `y^{-2} / Γ(2 - 2H)`, from the
/// algebraic expansion of `E_{2H,2}`. pggBm only for `β ∈ {1, 2H}`.
pub fn debye_asymptote(class: ProcessClass, y: f64, beta: f64, hurst: f64) -> Result<Asymptote> {
    check_hurst(hurst)?;
    if !(y > 0.0) || !y.is_finite() {
        return Err(domain(format!("asymptote needs finite y > 0, got {y}")));
    }
    let class = match class {
        ProcessClass::Pggbm if beta == 1.0 => ProcessClass::Pfbm,
        ProcessClass::Pggbm if (beta - 2.0 * hurst).abs() <= 1e-14 => ProcessClass::Pgbm,
        ProcessClass::Pggbm => {
            return Err(Error::Unsupported(format!(
                "no closed asymptote for pggbm with beta = {beta} (only beta = 1 or beta = 2H)"
            )))
        }
        c => c,
    };
    match class {
        ProcessClass::Pfbm => {
            let a = 0.5 / hurst;
            Ok(Asymptote {
                value: gamma_fn(a)? * a * y.powf(-1.0 / hurst),
                printed: None,
                discrepant: false,
            })
        }
        _ => {
            let y2 = y * y;
            let value = rgamma(2.0 - 2.0 * hurst) / y2;
            let printed = rgamma(2.0 * hurst + 2.0) / y2;
            Ok(Asymptote {
                value,
                printed: Some(printed),
                discrepant: (value - printed).abs() > 1e-12 * value.abs(),
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Transform {
    Linear,
    Loglog,
    Kratky,
}

impl std::str::FromStr for Transform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "linear" => Ok(Self::Linear),
            "loglog" => Ok(Self::Loglog),
            "kratky" => Ok(Self::Kratky),
            _ => Err(domain(format!("unknown transform '{s}' (expected linear, loglog or kratky)"))),
        }
    }
}

/// Tabulated Debye function. For [`Transform::Kratky`] the stored values
/// are `y² f(y)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DebyeCurve {
    pub process: ProcessSpec,
    pub y_values: Vec<f64>,
    pub f_values: Vec<f64>,
    pub transform: Transform,
}

impl DebyeCurve {
    /// Evaluates the class Debye function at each `y`. `Kratky` is applied
    /// on top of the plain values.
    pub fn compute(process: &ProcessSpec, y_values: Vec<f64>, transform: Transform) -> Result<Self> {
        if y_values.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(domain("y values must be strictly increasing"));
        }
        let f_values = eval_all(process, &y_values)?;
        let curve = Self {
            process: *process,
            y_values,
            f_values,
            transform: if transform == Transform::Kratky {
                Transform::Linear
            } else {
                transform
            },
        };
        if transform == Transform::Kratky {
            kratky(&curve)
        } else {
            Ok(curve)
        }
    }

    /// CSV with header `y,f` (or `y,y2f`), 17 significant digits, LF.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> Result<()> {
        let header = if self.transform == Transform::Kratky { "y,y2f" } else { "y,f" };
        let mut out = String::with_capacity(40 * (self.y_values.len() + 1));
        out.push_str(header);
        out.push('\n');
        for (y, f) in self.y_values.iter().zip(&self.f_values) {
            out.push_str(&crate::io::fmt_f64(*y));
            out.push(',');
            out.push_str(&crate::io::fmt_f64(*f));
            out.push('\n');
        }
        w.write_all(out.as_bytes())?;
        Ok(())
    }
}

fn eval_all(process: &ProcessSpec, ys: &[f64]) -> Result<Vec<f64>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        ys.par_iter().map(|&y| debye(process, y)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        ys.iter().map(|&y| debye(process, y)).collect()
    }
}

/// Pointwise `y² f(y)`.
pub fn kratky(curve: &DebyeCurve) -> Result<DebyeCurve> {
    if curve.transform == Transform::Kratky {
        return Err(domain("curve is already a Kratky transform"));
    }
    Ok(DebyeCurve {
        process: curve.process,
        y_values: curve.y_values.clone(),
        f_values: curve
            .y_values
            .iter()
            .zip(&curve.f_values)
            .map(|(y, f)| y * y * f)
            .collect(),
        transform: Transform::Kratky,
    })
}

/// `n` equally spaced points on `[lo, hi]`.
pub fn linear_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
        .collect()
}

/// `n` log-spaced points on `[lo, hi]`, `lo > 0`.
pub fn log_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i + 1 == n {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// Form factor `S(k)`: the class Debye function at `y_from_k(|k|)`.
pub fn form_factor(spec: &ProcessSpec, k: f64) -> Result<f64> {
    let y = y_from_k(k, spec.hurst(), spec.circle_length())?;
    debye(spec, y)
}

/// `|(1/n) Σ_i e^{ik X(t_i)}|²` over every `stride`-th grid point of a path,
/// which equals the double cosine average `(1/n²) Σ_{i,j} cos(k(X_i - X_j))`.
fn path_form_factor(path: &[f64], k: f64, stride: usize) -> f64 {
    let (mut c, mut s, mut n) = (0.0, 0.0, 0usize);
    for &x in path.iter().step_by(stride) {
        let (sn, cs) = (k * x).sin_cos();
        c += cs;
        s += sn;
        n += 1;
    }
    let n = n as f64;
    (c * c + s * s) / (n * n)
}

/// [`path_form_factor`] averaged over the `stride` shifted sub-grids
/// `{o, o + stride, ...}`. The increments are stationary on the circle, so
/// every shift has the same expectation.
fn coset_form_factor(cos: &[f64], sin: &[f64], stride: usize) -> f64 {
    let n = (cos.len() / stride) as f64;
    let mut acc = 0.0;
    for o in 0..stride {
        let (mut c, mut s) = (0.0, 0.0);
        for i in (o..cos.len()).step_by(stride) {
            c += cos[i];
            s += sin[i];
        }
        acc += (c * c + s * s) / (n * n);
    }
    acc / stride as f64
}

fn per_path<F>(ensemble: &PathEnsemble, f: F) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        ensemble
            .paths
            .par_chunks_exact(ensemble.n_points())
            .map(&f)
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        ensemble.iter_paths().map(f).collect()
    }
}

/// Plain Monte Carlo form factor on the full grid: the mean over paths of
/// `(1/N²) Σ_{i,j} cos(k (X_i - X_j))` with its standard error.
pub fn form_factor_mc(ensemble: &PathEnsemble, k: f64) -> Result<MeanEstimate> {
    if ensemble.n_paths == 0 {
        return Err(domain("empty ensemble"));
    }
    if k == 0.0 {
        return Ok(MeanEstimate {
            mean: 1.0,
            std_error: 0.0,
            n: ensemble.n_paths,
        });
    }
    let v = per_path(ensemble, |p| path_form_factor(p, k, 1));
    Ok(mean_estimate(&v))
}

/// Exponents of the grid-discretization error of [`form_factor_mc`] in
/// powers of the spacing, smallest first: `1 + 2Hj` except where `2Hj` is an
/// even integer, together with the smooth-part orders 2, 4, 6.
pub fn discretization_exponents(hurst: f64, count: usize) -> Vec<f64> {
    let mut e: Vec<f64> = vec![2.0, 4.0, 6.0];
    for j in 1..64 {
        let p = 2.0 * hurst * j as f64;
        let r = p.round();
        if (p - r).abs() < 1e-12 && (r as i64) % 2 == 0 {
            continue;
        }
        e.push(1.0 + p);
    }
    e.sort_by(f64::total_cmp);
    e.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    e.truncate(count);
    e
}

/// Richardson-extrapolated Monte Carlo form factor.
///
/// For every path the grid averages at spacing `stride · 2^j`
/// (`j = 0..levels`), each averaged over all shifted sub-grids of that
/// spacing, are combined to cancel the first `levels - 1` terms of
/// [`discretization_exponents`]; the mean and standard error are then taken
/// over the per-path extrapolated values.
pub fn form_factor_mc_extrapolated(
    ensemble: &PathEnsemble,
    k: f64,
    stride: usize,
    levels: usize,
) -> Result<MeanEstimate> {
    if ensemble.n_paths == 0 {
        return Err(domain("empty ensemble"));
    }
    if levels == 0 || stride == 0 {
        return Err(domain("levels and stride must be positive"));
    }
    let n = ensemble.n_points();
    let coarsest = stride << (levels - 1);
    if n % coarsest != 0 || n / coarsest < 2 {
        return Err(domain(format!(
            "grid of {n} points cannot be decimated by {coarsest} with at least 2 points left"
        )));
    }
    if k == 0.0 {
        return Ok(MeanEstimate {
            mean: 1.0,
            std_error: 0.0,
            n: ensemble.n_paths,
        });
    }
    let exps = discretization_exponents(ensemble.spec.hurst(), levels - 1);
    let v = per_path(ensemble, |p| {
        let (sin, cos): (Vec<f64>, Vec<f64>) = p.iter().map(|x| (k * x).sin_cos()).unzip();
        let mut vals: Vec<f64> = (0..levels).map(|j| coset_form_factor(&cos, &sin, stride << j)).collect();
        for &e in &exps {
            let r = 2f64.powf(e);
            for i in 0..vals.len() - 1 {
                vals[i] = (r * vals[i] - vals[i + 1]) / (r - 1.0);
            }
            vals.pop();
        }
        vals[0]
    });
    Ok(mean_estimate(&v))
}

/// `R_g² = L^{2H} / ((2H+1) 2^{2H+1} Γ(β+1))`.
pub fn radius_of_gyration_sq(spec: &ProcessSpec) -> f64 {
    let h = spec.hurst();
    spec.circle_length().powf(2.0 * h) / ((2.0 * h + 1.0) * 2f64.powf(2.0 * h + 1.0)) * spec.envelope_mean()
}

/// `R_e² = (L/2)^{2H} / Γ(β+1)`, the second moment at half time.
pub fn end_to_halftime_sq(spec: &ProcessSpec) -> f64 {
    (0.5 * spec.circle_length()).powf(2.0 * spec.hurst()) * spec.envelope_mean()
}

/// `l^{2H} / ((2H+1)(2H+2))` for fBm on a segment of length `l`.
pub fn linear_fbm_gyration_sq(hurst: f64, l: f64) -> Result<f64> {
    if !(hurst > 0.0 && hurst <= 1.0) {
        return Err(domain(format!("Hurst parameter must lie in (0, 1], got {hurst}")));
    }
    if !(l > 0.0) {
        return Err(domain(format!("segment length must be positive, got {l}")));
    }
    Ok(l.powf(2.0 * hurst) / ((2.0 * hurst + 1.0) * (2.0 * hurst + 2.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GyrationReport {
    pub r_g_squared: f64,
    pub r_e_squared: f64,
    /// `R_e² / (2(2H+1)) - R_g²`.
    pub relation_residual: f64,
    pub relative_residual: f64,
    /// `R_g^{fBm}(L/2)²`, the open-chain value at half length.
    pub linear_fbm_half_length: f64,
    /// `(H+1) R_g^{fBm}(L/2)² / R_g^{pfBm}(L)² - 1`.
    pub linear_comparison_residual: f64,
}

pub fn gyration_relation(spec: &ProcessSpec) -> GyrationReport {
    let h = spec.hurst();
    let l = spec.circle_length();
    let r_g_squared = radius_of_gyration_sq(spec);
    let r_e_squared = end_to_halftime_sq(spec);
    let relation_residual = r_e_squared / (2.0 * (2.0 * h + 1.0)) - r_g_squared;
    let lin = linear_fbm_gyration_sq(h, 0.5 * l).expect("validated spec");
    let pf = ProcessSpec::pfbm(h.min(0.5), l)
        .map(|s| radius_of_gyration_sq(&s))
        .unwrap_or(f64::NAN);
    GyrationReport {
        r_g_squared,
        r_e_squared,
        relation_residual,
        relative_residual: relation_residual.abs() / r_g_squared,
        linear_fbm_half_length: lin,
        linear_comparison_residual: (h + 1.0) * lin / pf - 1.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const E: f64 = std::f64::consts::E;

    #[test]
    fn y_scaling() {
        assert_eq!(y_from_k(0.0, 0.3, 1.0).unwrap(), 0.0);
        assert!((y_from_k(2f64.sqrt(), 0.5, 2.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((y_from_k(2.0, 0.25, 8.0).unwrap() - 2.0).abs() < 1e-15);
        assert!((k_from_y(1.7, 0.3, 3.0).unwrap() - 1.7 * 2f64.sqrt() / 1.5f64.powf(0.3)).abs() < 1e-14);
    }

    #[test]
    fn pfbm_reference_values() {
        assert_eq!(debye_pfbm(0.0, 0.3).unwrap(), 1.0);
        assert!((debye_pfbm(1.0, 0.5).unwrap() - (1.0 - 1.0 / E)).abs() < 1e-15);
        for &y in &[0.01, 0.3, 0.999, 1.001, 2.0, 7.0] {
            let x: f64 = y * y;
            let exact = -(-x).exp_m1() / x;
            assert!((debye_pfbm(y, 0.5).unwrap() - exact).abs() < 1e-14, "y={y}");
        }
        // a = 1/(2H) = 2: γ(2, x) = 1 - (1 + x) e^{-x}
        for &y in &[0.5, 1.5, 4.0] {
            let x: f64 = y * y;
            let exact = (1.0 - (1.0 + x) * (-x).exp()) * 2.0 / (x * x);
            assert!((debye_pfbm(y, 0.25).unwrap() - exact).abs() < 1e-13, "y={y}");
        }
    }

    #[test]
    fn pgbm_matches_pfbm_at_half() {
        for i in 0..60 {
            let y = 0.1 * i as f64;
            assert!((debye_pgbm(y, 0.5).unwrap() - debye_pfbm(y, 0.5).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn pggbm_class_reductions() {
        let p = SeriesPolicy::default();
        for &h in &[0.5, 1.0 / 3.0, 0.2] {
            for i in 0..=20 {
                let y = 0.5 * i as f64;
                let a = debye_pggbm(y, 1.0, h, &p).unwrap();
                let b = debye_pfbm(y, h).unwrap();
                assert!((a - b).abs() < 1e-10, "beta=1 H={h} y={y}: {a} vs {b}");
                let a = debye_pggbm(y, 2.0 * h, h, &p).unwrap();
                let b = debye_pgbm(y, h).unwrap();
                assert!((a - b).abs() < 1e-10, "beta=2H H={h} y={y}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn pggbm_series_and_integral_agree() {
        let p = SeriesPolicy::default();
        for &(b, h) in &[(0.5, 0.25), (0.3, 0.4), (0.8, 0.1)] {
            for &y in &[0.3, 0.8, 1.2] {
                let s = debye_pggbm_series(y, b, h, &p).unwrap().value;
                let q = pggbm_integral(y * y, b, h, &p).unwrap();
                assert!((s - q).abs() < 1e-11, "b={b} h={h} y={y}: {s} vs {q}");
            }
        }
    }

    #[test]
    fn pggbm_half_quarter_oracle() {
        // 60-digit series for β = 1/2, H = 1/4
        let p = SeriesPolicy::default();
        let v = debye_pggbm(1.0, 0.5, 0.25, &p).unwrap();
        assert!((v - 0.555_962_743_251_319_578).abs() < 1e-12, "{v}");
    }

    #[test]
    fn asymptotes() {
        let a = debye_asymptote(ProcessClass::Pfbm, 10.0, 1.0, 0.5).unwrap();
        assert!((a.value - 0.01).abs() < 1e-17);
        let a = debye_asymptote(ProcessClass::Pfbm, 10.0, 1.0, 0.25).unwrap();
        assert!((a.value - 2e-4).abs() < 1e-18);
        let g = debye_asymptote(ProcessClass::Pgbm, 10.0, 1.0, 0.5).unwrap();
        assert!((g.value - 0.01).abs() < 1e-17);
        assert!((g.value - debye_pgbm(10.0, 0.5).unwrap()).abs() < 1e-15);
        assert_eq!(g.printed, Some(0.005));
        assert!(g.discrepant);
        assert!(matches!(
            debye_asymptote(ProcessClass::Pggbm, 10.0, 0.7, 0.25),
            Err(Error::Unsupported(_))
        ));
        assert!(debye_asymptote(ProcessClass::Pggbm, 10.0, 0.5, 0.25).is_ok());
    }

    #[test]
    fn kratky_plateau() {
        let spec = ProcessSpec::pfbm(0.5, 1.0).unwrap();
        let c = DebyeCurve::compute(&spec, vec![0.0, 10.0, 30.0], Transform::Kratky).unwrap();
        assert_eq!(c.f_values[0], 0.0);
        assert!((c.f_values[2] - 1.0).abs() < 1e-15);
        assert!(kratky(&c).is_err());
    }

    #[test]
    fn csv_format() {
        let spec = ProcessSpec::pgbm(0.25, 1.0).unwrap();
        let c = DebyeCurve::compute(&spec, linear_points(0.0, 1.0, 3), Transform::Linear).unwrap();
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("y,f"));
        assert_eq!(lines.next(), Some("0.0000000000000000e0,1.0000000000000000e0"));
        assert!(text.ends_with('\n') && !text.contains('\r'));
    }

    #[test]
    fn point_grids() {
        let l = linear_points(0.0, 5.0, 6);
        assert_eq!(l, vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
        let g = log_points(0.01, 100.0, 5);
        assert_eq!((g[0], g[4]), (0.01, 100.0));
        assert!((g[2] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn form_factor_examples() {
        let spec = ProcessSpec::pfbm(0.5, 2.0).unwrap();
        assert_eq!(form_factor(&spec, 0.0).unwrap(), 1.0);
        assert!((form_factor(&spec, 2f64.sqrt()).unwrap() - (1.0 - 1.0 / E)).abs() < 1e-15);
        assert_eq!(form_factor(&spec, -1.3).unwrap(), form_factor(&spec, 1.3).unwrap());
    }

    #[test]
    fn gyration_examples() {
        assert_eq!(radius_of_gyration_sq(&ProcessSpec::pfbm(0.5, 1.0).unwrap()), 0.125);
        let a = radius_of_gyration_sq(&ProcessSpec::pfbm(0.3, 2.5).unwrap());
        let b = radius_of_gyration_sq(&ProcessSpec::pggbm(0.3, 1.0, 2.5).unwrap());
        assert_eq!(a, b);
        assert_eq!(end_to_halftime_sq(&ProcessSpec::pfbm(0.5, 2.0).unwrap()), 1.0);
        let e = end_to_halftime_sq(&ProcessSpec::pggbm(0.25, 0.5, 2.0).unwrap());
        assert!((e - 1.128_379_167_095_512_6).abs() < 1e-14);
        assert_eq!(linear_fbm_gyration_sq(0.5, 1.0).unwrap(), 1.0 / 6.0);
        assert!((linear_fbm_gyration_sq(0.5, 2.0).unwrap() - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn gyration_is_minus_slope_at_zero() {
        for spec in [
            ProcessSpec::pfbm(0.3, 1.7).unwrap(),
            ProcessSpec::pgbm(0.25, 1.0).unwrap(),
            ProcessSpec::pggbm(0.4, 0.6, 3.0).unwrap(),
        ] {
            // S = 1 - R_g² k² + O(k⁴); extrapolated difference quotient in k²
            let h = 1e-4;
            let d = |k2: f64| (form_factor(&spec, k2.sqrt()).unwrap() - 1.0) / k2;
            let slope = 2.0 * d(h) - d(2.0 * h);
            let rg = radius_of_gyration_sq(&spec);
            assert!((slope + rg).abs() < 1e-6 * rg, "{spec:?}: {slope} vs {rg}");
        }
    }

    #[test]
    fn gyration_relation_residuals() {
        for spec in [
            ProcessSpec::pfbm(0.2, 0.7).unwrap(),
            ProcessSpec::pgbm(0.45, 9.0).unwrap(),
            ProcessSpec::pggbm(0.1, 0.3, 0.2).unwrap(),
        ] {
            let r = gyration_relation(&spec);
            assert!(r.relative_residual <= 1e-12, "{r:?}");
            assert!(r.linear_comparison_residual.abs() <= 1e-12, "{r:?}");
        }
    }

    #[test]
    fn exponents_for_common_hurst() {
        assert_eq!(discretization_exponents(0.5, 4), vec![2.0, 4.0, 6.0, 8.0]);
        assert_eq!(discretization_exponents(0.25, 4), vec![1.5, 2.0, 2.5, 3.5]);
    }

    #[test]
    fn coset_average_reduces_to_single_grid() {
        let path: Vec<f64> = (0..16).map(|i| (i as f64 * 0.7).sin()).collect();
        let (sin, cos): (Vec<f64>, Vec<f64>) = path.iter().map(|x| (1.3 * x).sin_cos()).unzip();
        assert!((coset_form_factor(&cos, &sin, 1) - path_form_factor(&path, 1.3, 1)).abs() < 1e-15);
        let by_hand = (path_form_factor(&path, 1.3, 4)
            + path_form_factor(&path[1..], 1.3, 4)
            + path_form_factor(&path[2..], 1.3, 4)
            + path_form_factor(&path[3..], 1.3, 4))
            / 4.0;
        assert!((coset_form_factor(&cos, &sin, 4) - by_hand).abs() < 1e-15);
    }

    #[test]
    fn extrapolated_estimator_is_unbiased_at_small_scale() {
        use crate::process::CircleGrid;
        use crate::sampler::{sample_process, SamplingMethod};
        let spec = ProcessSpec::pfbm(0.5, 1.0).unwrap();
        let grid = CircleGrid::new(128, 1.0).unwrap();
        let ens = sample_process(&spec, &grid, 4000, 3, SamplingMethod::Circulant).unwrap();
        for y in [0.5, 2.0] {
            let k = k_from_y(y, 0.5, 1.0).unwrap();
            let est = form_factor_mc_extrapolated(&ens, k, 1, 4).unwrap();
            assert!(est.z_score(form_factor(&spec, k).unwrap()).abs() < 4.0);
        }
        assert!(form_factor_mc_extrapolated(&ens, 1.0, 2, 7).is_err());
        assert_eq!(form_factor_mc_extrapolated(&ens, 0.0, 1, 4).unwrap().z_score(1.0), 0.0);
    }
}
