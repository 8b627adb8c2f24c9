//! wasm-bindgen surface for the static demo page in `www/`.

use circfrac::formfactor::{linear_points, log_points, DebyeCurve, Transform};
use circfrac::process::{CircleGrid, ProcessClass, ProcessSpec};
use circfrac::sampler::{sample_mwright, sample_process, SamplingMethod};
use circfrac::specfn::m_wright;
use wasm_bindgen::prelude::*;

const MAX_POINTS: usize = 2000;
const MAX_GRID: usize = 4096;
const MAX_PATHS: usize = 64;
const MAX_DRAWS: usize = 200_000;

fn spec(process: &str, hurst: f64, beta: Option<f64>, length: f64) -> Result<ProcessSpec, String> {
    let class: ProcessClass = process.parse().map_err(|e: circfrac::Error| e.to_string())?;
    ProcessSpec::new(class, hurst, beta, length).map_err(|e| e.to_string())
}

/// A tabulated curve; `values` holds `y² f` for Kratky curves.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct Curve {
    ys: Vec<f64>,
    values: Vec<f64>,
}

#[wasm_bindgen]
impl Curve {
    pub fn ys(&self) -> Vec<f64> {
        self.ys.clone()
    }

    pub fn values(&self) -> Vec<f64> {
        self.values.clone()
    }
}

pub fn debye_curve_impl(
    process: &str,
    hurst: f64,
    beta: Option<f64>,
    y_min: f64,
    y_max: f64,
    points: usize,
    transform: &str,
) -> Result<Curve, String> {
    let spec = spec(process, hurst, beta, 1.0)?;
    let transform: Transform = transform.parse().map_err(|e: circfrac::Error| e.to_string())?;
    if !(2..=MAX_POINTS).contains(&points) {
        return Err(format!("points must lie in 2..={MAX_POINTS}"));
    }
    if !(y_min >= 0.0 && y_max > y_min) {
        return Err("need 0 <= ymin < ymax".into());
    }
    let ys = match transform {
        Transform::Linear => linear_points(y_min, y_max, points),
        _ if y_min == 0.0 => return Err("log spacing needs ymin > 0".into()),
        _ => log_points(y_min, y_max, points),
    };
    let curve = DebyeCurve::compute(&spec, ys, transform).map_err(|e| e.to_string())?;
    Ok(Curve {
        ys: curve.y_values,
        values: curve.f_values,
    })
}

/// Debye function (`linear`, `loglog`) or Kratky curve (`kratky`).
#[wasm_bindgen(js_name = debyeCurve)]
pub fn debye_curve(
    process: &str,
    hurst: f64,
    beta: Option<f64>,
    y_min: f64,
    y_max: f64,
    points: usize,
    transform: &str,
) -> Result<Curve, JsError> {
    debye_curve_impl(process, hurst, beta, y_min, y_max, points, transform).map_err(|e| JsError::new(&e))
}

pub fn sample_paths_impl(
    process: &str,
    hurst: f64,
    beta: Option<f64>,
    grid: usize,
    paths: usize,
    seed: u64,
) -> Result<Vec<f64>, String> {
    if !(2..=MAX_GRID).contains(&grid) || !(1..=MAX_PATHS).contains(&paths) {
        return Err(format!("grid must lie in 2..={MAX_GRID} and paths in 1..={MAX_PATHS}"));
    }
    let spec = spec(process, hurst, beta, 1.0)?;
    let grid = CircleGrid::new(grid, 1.0).map_err(|e| e.to_string())?;
    let ens = sample_process(&spec, &grid, paths, seed, SamplingMethod::Circulant).map_err(|e| e.to_string())?;
    Ok(ens.paths)
}

/// Row-major paths on `grid` equally spaced times of the unit circle.
#[wasm_bindgen(js_name = samplePaths)]
pub fn sample_paths(
    process: &str,
    hurst: f64,
    beta: Option<f64>,
    grid: usize,
    paths: usize,
    seed: u64,
) -> Result<Vec<f64>, JsError> {
    sample_paths_impl(process, hurst, beta, grid, paths, seed).map_err(|e| JsError::new(&e))
}

/// Density `M_β` on `xs` next to a normalized histogram of `draws` samples
/// over `bins` equal bins of `[0, x_max]`.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct Envelope {
    density: Vec<f64>,
    histogram: Vec<f64>,
}

#[wasm_bindgen]
impl Envelope {
    pub fn density(&self) -> Vec<f64> {
        self.density.clone()
    }

    pub fn histogram(&self) -> Vec<f64> {
        self.histogram.clone()
    }
}

pub fn envelope_impl(beta: f64, x_max: f64, points: usize, bins: usize, draws: usize, seed: u64) -> Result<Envelope, String> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err("beta must lie in (0, 1)".into());
    }
    if !(x_max > 0.0) || !(2..=MAX_POINTS).contains(&points) || !(1..=MAX_POINTS).contains(&bins) {
        return Err("bad plotting range".into());
    }
    if !(1..=MAX_DRAWS).contains(&draws) {
        return Err(format!("draws must lie in 1..={MAX_DRAWS}"));
    }
    let density = linear_points(0.0, x_max, points)
        .into_iter()
        .map(|x| m_wright(beta, x))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let width = x_max / bins as f64;
    let mut histogram = vec![0.0; bins];
    for y in sample_mwright(beta, draws, seed).map_err(|e| e.to_string())? {
        let b = (y / width) as usize;
        if b < bins {
            histogram[b] += 1.0;
        }
    }
    for h in &mut histogram {
        *h /= draws as f64 * width;
    }
    Ok(Envelope { density, histogram })
}

#[wasm_bindgen]
pub fn envelope(beta: f64, x_max: f64, points: usize, bins: usize, draws: usize, seed: u64) -> Result<Envelope, JsError> {
    envelope_impl(beta, x_max, points, bins, draws, seed).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_starts_at_one() {
        let c = debye_curve_impl("pgbm", 0.25, None, 0.0, 5.0, 11, "linear").unwrap();
        assert_eq!(c.ys().len(), 11);
        assert_eq!(c.values()[0], 1.0);
        assert!(debye_curve_impl("pggbm", 0.25, None, 0.0, 5.0, 11, "linear").is_err());
        assert!(debye_curve_impl("pfbm", 0.25, None, 0.0, 5.0, 11, "kratky").is_err());
    }

    #[test]
    fn paths_are_row_major_and_pinned() {
        let p = sample_paths_impl("pfbm", 0.3, None, 64, 3, 1).unwrap();
        assert_eq!(p.len(), 192);
        assert!(p.chunks(64).all(|row| row[0] == 0.0));
        assert!(sample_paths_impl("pfbm", 0.7, None, 64, 3, 1).unwrap_err().contains("positive semi-definite"));
    }

    #[test]
    fn histogram_tracks_density() {
        let e = envelope_impl(0.5, 6.0, 61, 12, 100_000, 4).unwrap();
        // M_{1/2}(x) = exp(-x²/4)/√π; bin [0, 0.5] mass ≈ erf(1/4) / 0.5
        assert!((e.density()[0] - 1.0 / std::f64::consts::PI.sqrt()).abs() < 1e-12);
        assert!((e.histogram()[0] - 0.276_326_390_168_236_9 / 0.5).abs() < 0.02);
    }
}
