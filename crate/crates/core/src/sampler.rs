//! Seeded path sampling for the three process classes.
//!
//! Path `m` draws its Gaussian core from ChaCha20 stream `m` of the seed;
//! the envelope values are drawn in order from the reserved stream
//! [`ENVELOPE_STREAM`]. Ensembles are therefore pure functions of
//! `(spec, grid, n_paths, seed, method)` whatever the number of workers.

use std::io::Write;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Exp1, Open01, StandardNormal};
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::process::{covariance_matrix, geodesic_unchecked, CircleGrid, ProcessClass, ProcessSpec};
use crate::specfn::kanter_factor;

/// Stream index reserved for envelope draws.
pub const ENVELOPE_STREAM: u64 = u64::MAX;

/// Circulant eigenvalues below `-CIRCULANT_NEGATIVE_TOL · max` trigger the
/// Cholesky fallback.
pub const CIRCULANT_NEGATIVE_TOL: f64 = 1e-10;

/// Jitter ladder, in units of the largest diagonal entry.
const JITTER_LADDER: [f64; 6] = [0.0, 1e-14, 1e-13, 1e-12, 1e-11, 1e-10];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplingMethod {
    Cholesky,
    Circulant,
}

impl std::fmt::Display for SamplingMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Cholesky => "cholesky",
            Self::Circulant => "circulant",
        })
    }
}

impl std::str::FromStr for SamplingMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cholesky" => Ok(Self::Cholesky),
            "circulant" | "fft" => Ok(Self::Circulant),
            _ => Err(domain(format!("unknown sampling method '{s}' (expected cholesky or circulant)"))),
        }
    }
}

/// One independent substream of a seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream_index: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_index: u64) -> Self {
        Self { seed, stream_index }
    }

    pub fn rng(&self) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

/// `M` sampled paths on a grid, row-major (`paths[m * N + i]`).
#[derive(Debug, Clone, Serialize)]
pub struct PathEnsemble {
    pub spec: ProcessSpec,
    pub grid: CircleGrid,
    #[serde(skip)]
    pub paths: Vec<f64>,
    pub n_paths: usize,
    pub seed: u64,
    /// Method actually used.
    pub method: SamplingMethod,
    pub requested_method: SamplingMethod,
    /// Per-path `√Y_β`; all 1 for pfBm.
    #[serde(skip)]
    pub envelope_values: Vec<f64>,
    /// Jitter added to the diagonal by the Cholesky factorization.
    pub jitter: f64,
    pub fallbacks: Vec<String>,
}

impl PathEnsemble {
    pub fn n_points(&self) -> usize {
        self.grid.n_points()
    }

    pub fn path(&self, m: usize) -> &[f64] {
        let n = self.n_points();
        &self.paths[m * n..(m + 1) * n]
    }

    pub fn iter_paths(&self) -> std::slice::ChunksExact<'_, f64> {
        self.paths.chunks_exact(self.n_points())
    }

    /// Values of all paths at time index `i`.
    pub fn column(&self, i: usize) -> Vec<f64> {
        self.iter_paths().map(|p| p[i]).collect()
    }

    /// One row per path, comma separated, 17 significant digits, LF.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let mut line = String::new();
        for p in self.iter_paths() {
            line.clear();
            for (i, v) in p.iter().enumerate() {
                if i > 0 {
                    line.push(',');
                }
                line.push_str(&crate::io::fmt_f64(*v));
            }
            line.push('\n');
            w.write_all(line.as_bytes())?;
        }
        Ok(())
    }

    /// Row-major little-endian `f64`, no header; the shape is in the sidecar.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        let mut buf = Vec::with_capacity(self.paths.len() * 8);
        for v in &self.paths {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        w.write_all(&buf)?;
        Ok(())
    }
}

/// `n` i.i.d. draws with density `M_β`, from stream [`ENVELOPE_STREAM`].
///
/// `Y = (E / A(U))^{1-β}` with `U` uniform on `(0, π)`, `E` standard
/// exponential and `A` the Kanter factor; equivalently `Y = S^{-β}` for the
/// one-sided stable `S = (A(U)/E)^{(1-β)/β}` with Laplace transform `e^{-λ^β}`.
pub fn sample_mwright(beta: f64, n: usize, seed: u64) -> Result<Vec<f64>> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(domain(format!("M-Wright sampling requires 0 < beta <= 1, got {beta}")));
    }
    if beta == 1.0 {
        return Ok(vec![1.0; n]);
    }
    let mut rng = RngStream::new(seed, ENVELOPE_STREAM).rng();
    Ok((0..n).map(|_| draw_mwright(beta, &mut rng)).collect())
}

fn draw_mwright<R: Rng>(beta: f64, rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.sample::<f64, _>(Open01) * std::f64::consts::PI;
        let e: f64 = rng.sample(Exp1);
        let y = ((e.ln() - kanter_factor(beta, u).ln()) * (1.0 - beta)).exp();
        if y > 0.0 && y.is_finite() {
            return y;
        }
    }
}

/// Precomputed linear map from white noise to a pinned Gaussian path.
enum Factor {
    Trivial,
    Cholesky {
        lower: Vec<f64>,
        dim: usize,
    },
    Circulant {
        sqrt_weights: Vec<f64>,
        fft: Arc<dyn Fft<f64>>,
    },
}

struct Prepared {
    factor: Factor,
    method: SamplingMethod,
    jitter: f64,
    fallbacks: Vec<String>,
}

fn prepare(grid: &CircleGrid, hurst: f64, method: SamplingMethod) -> Result<Prepared> {
    if grid.n_points() == 1 {
        return Ok(Prepared {
            factor: Factor::Trivial,
            method,
            jitter: 0.0,
            fallbacks: Vec::new(),
        });
    }
    let mut fallbacks = Vec::new();
    if method == SamplingMethod::Circulant {
        match circulant_factor(grid, hurst) {
            Ok(factor) => {
                return Ok(Prepared {
                    factor,
                    method,
                    jitter: 0.0,
                    fallbacks,
                })
            }
            Err(min) => fallbacks.push(format!(
                "circulant embedding has eigenvalue {min:e} below tolerance; fell back to cholesky"
            )),
        }
    }
    let (lower, dim, jitter) = cholesky_factor(grid, hurst)?;
    if jitter > 0.0 {
        fallbacks.push(format!("cholesky needed diagonal jitter {jitter:e}"));
    }
    Ok(Prepared {
        factor: Factor::Cholesky { lower, dim },
        method: SamplingMethod::Cholesky,
        jitter,
        fallbacks,
    })
}

/// Square roots of `λ_k / N` for the circulant kernel `c_j = c - ½ d_H(t_j)`,
/// or the most negative eigenvalue when embedding fails.
fn circulant_factor(grid: &CircleGrid, hurst: f64) -> std::result::Result<Factor, f64> {
    let n = grid.n_points();
    let l = grid.circle_length();
    let half_d: Vec<f64> = grid
        .times()
        .iter()
        .map(|&t| 0.5 * geodesic_unchecked(t, hurst, l))
        .collect();
    let c = half_d.iter().fold(0.0f64, |m, &v| m.max(v));
    let mut buf: Vec<Complex<f64>> = half_d.iter().map(|&v| Complex::new(c - v, 0.0)).collect();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    fft.process(&mut buf);
    let max = buf.iter().fold(0.0f64, |m, z| m.max(z.re));
    let min = buf.iter().fold(f64::INFINITY, |m, z| m.min(z.re));
    if min < -CIRCULANT_NEGATIVE_TOL * max {
        return Err(min);
    }
    let sqrt_weights = buf.iter().map(|z| (z.re.max(0.0) / n as f64).sqrt()).collect();
    Ok(Factor::Circulant { sqrt_weights, fft })
}

/// Lower Cholesky factor of the covariance without the pinned index 0.
fn cholesky_factor(grid: &CircleGrid, hurst: f64) -> Result<(Vec<f64>, usize, f64)> {
    let cov = covariance_matrix(grid, hurst)?;
    let dim = grid.n_points() - 1;
    let a = cov.values().view((1, 1), (dim, dim)).clone_owned();
    let scale = cov.max_diagonal();
    let mut failure = None;
    for &eps in &JITTER_LADDER {
        let jitter = eps * scale;
        match cholesky_in_place(a.as_slice(), dim, jitter) {
            Ok(lower) => return Ok((lower, dim, jitter)),
            Err((index, pivot)) => failure = Some((index, pivot, jitter)),
        }
    }
    let (index, pivot, jitter) = failure.expect("ladder is non-empty");
    Err(Error::Factorization {
        index: index + 1,
        pivot,
        jitter,
    })
}

/// Row-major lower factor of a column-major symmetric matrix (symmetry
/// makes the layout irrelevant). Returns the failing index and pivot.
fn cholesky_in_place(a: &[f64], n: usize, jitter: f64) -> std::result::Result<Vec<f64>, (usize, f64)> {
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let row_j = j * n;
        let mut d = a[j * n + j] + jitter;
        for k in 0..j {
            d -= l[row_j + k] * l[row_j + k];
        }
        if !(d > 0.0) {
            return Err((j, d));
        }
        let djj = d.sqrt();
        l[row_j + j] = djj;
        for i in j + 1..n {
            let row_i = i * n;
            let mut s = a[j * n + i];
            for k in 0..j {
                s -= l[row_i + k] * l[row_j + k];
            }
            l[row_i + j] = s / djj;
        }
    }
    Ok(l)
}

fn fill_path(factor: &Factor, stream: RngStream, out: &mut [f64]) {
    let mut rng = stream.rng();
    match factor {
        Factor::Trivial => out.fill(0.0),
        Factor::Cholesky { lower, dim } => {
            let z: Vec<f64> = (0..*dim).map(|_| rng.sample(StandardNormal)).collect();
            out[0] = 0.0;
            for i in 0..*dim {
                let row = &lower[i * dim..i * dim + i + 1];
                out[i + 1] = row.iter().zip(&z).map(|(l, z)| l * z).sum();
            }
        }
        Factor::Circulant { sqrt_weights, fft } => {
            let mut w: Vec<Complex<f64>> = sqrt_weights
                .iter()
                .map(|&s| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    Complex::new(s * re, s * im)
                })
                .collect();
            fft.process(&mut w);
            let z0 = w[0].re;
            for (o, z) in out.iter_mut().zip(&w) {
                *o = z.re - z0;
            }
            out[0] = 0.0;
        }
    }
}

fn fill_all(factor: &Factor, seed: u64, n: usize, paths: &mut [f64]) {
    let run = |(m, row): (usize, &mut [f64])| fill_path(factor, RngStream::new(seed, m as u64), row);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        paths.par_chunks_mut(n).enumerate().for_each(run);
    }
    #[cfg(not(feature = "parallel"))]
    paths.chunks_mut(n).enumerate().for_each(run);
}

fn check_sampling(hurst: f64, n_paths: usize) -> Result<()> {
    if hurst > 0.5 {
        return Err(domain(format!(
            "sampling requires H <= 1/2, got {hurst}: the periodic covariance is not positive semi-definite for H > 1/2"
        )));
    }
    if !(hurst > 0.0) {
        return Err(domain(format!("Hurst parameter must be positive, got {hurst}")));
    }
    if n_paths == 0 {
        return Err(domain("at least one path is required"));
    }
    Ok(())
}

/// Pinned Gaussian paths with covariance `R^H` on the grid.
pub fn sample_gaussian_paths(
    grid: &CircleGrid,
    hurst: f64,
    n_paths: usize,
    seed: u64,
    method: SamplingMethod,
) -> Result<PathEnsemble> {
    let spec = ProcessSpec::pfbm(hurst, grid.circle_length())?;
    sample_process(&spec, grid, n_paths, seed, method)
}

/// Paths of `√Y_β · B(t)`; pfBm skips the envelope.
pub fn sample_process(
    spec: &ProcessSpec,
    grid: &CircleGrid,
    n_paths: usize,
    seed: u64,
    method: SamplingMethod,
) -> Result<PathEnsemble> {
    check_sampling(spec.hurst(), n_paths)?;
    if (grid.circle_length() - spec.circle_length()).abs() > 1e-12 * spec.circle_length() {
        return Err(domain(format!(
            "grid length {} differs from the process circle length {}",
            grid.circle_length(),
            spec.circle_length()
        )));
    }
    let prepared = prepare(grid, spec.hurst(), method)?;
    let n = grid.n_points();
    let mut paths = vec![0.0; n * n_paths];
    fill_all(&prepared.factor, seed, n, &mut paths);

    let envelope_values = if spec.class() == ProcessClass::Pfbm {
        vec![1.0; n_paths]
    } else {
        let y = sample_mwright(spec.beta(), n_paths, seed)?;
        let env: Vec<f64> = y.iter().map(|v| v.sqrt()).collect();
        for (row, &e) in paths.chunks_exact_mut(n).zip(&env) {
            for v in row {
                *v *= e;
            }
        }
        env
    };
    Ok(PathEnsemble {
        spec: *spec,
        grid: grid.clone(),
        paths,
        n_paths,
        seed,
        method: prepared.method,
        requested_method: method,
        envelope_values,
        jitter: prepared.jitter,
        fallbacks: prepared.fallbacks,
    })
}
