use std::io::Write;

use circfrac::formfactor::{
    form_factor, form_factor_mc_extrapolated, gyration_relation, k_from_y, linear_points, log_points,
    y_from_k, DebyeCurve, GyrationReport, Transform,
};
use circfrac::io::fmt_f64;
use circfrac::process::{CircleGrid, ProcessClass, ProcessSpec};
use circfrac::sampler::{sample_process, PathEnsemble, SamplingMethod};
use serde::Serialize;
use serde_json::json;

use crate::args::{
    DebyeArgs, EnsembleFormat, Estimator, GyrationArgs, Preset, ProcessOpts, SampleArgs, TransformArg,
    ValidateArgs,
};
use crate::output::{emit, is_stdout, Sidecar};
use crate::CliError;

const DEFAULT_Y: [f64; 5] = [0.0, 0.5, 1.0, 2.0, 4.0];
const EXTRAPOLATION_LEVELS: usize = 5;

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn compute(e: impl std::fmt::Display) -> CliError {
    CliError::Compute(e.to_string())
}

fn spec_from(opts: &ProcessOpts, length: f64) -> Result<ProcessSpec, CliError> {
    ProcessSpec::new(opts.process.into(), opts.hurst, opts.beta, length).map_err(usage)
}

fn debye_method(class: ProcessClass) -> &'static str {
    match class {
        ProcessClass::Pfbm => "series/incomplete-gamma",
        ProcessClass::Pgbm => "mittag-leffler",
        ProcessClass::Pggbm => "series/integral",
    }
}

/// Fully resolved parameters of one Debye curve.
#[derive(Debug, Clone, Serialize)]
struct DebyeConfig {
    process: ProcessSpec,
    y_min: f64,
    y_max: f64,
    points: usize,
    transform: Transform,
    spacing: &'static str,
    preset: Option<Preset>,
}

impl DebyeConfig {
    fn y_values(&self) -> Vec<f64> {
        if self.transform == Transform::Linear {
            linear_points(self.y_min, self.y_max, self.points)
        } else {
            log_points(self.y_min, self.y_max, self.points)
        }
    }
}

fn resolve_range(args: &DebyeArgs, transform: Transform) -> Result<(f64, f64), CliError> {
    let log = transform != Transform::Linear;
    let y_min = args.y_min.unwrap_or(if log { 0.01 } else { 0.0 });
    let y_max = args.y_max.unwrap_or(if log { 100.0 } else { 10.0 });
    if !(y_min >= 0.0 && y_max > y_min) {
        return Err(usage(format!("need 0 <= ymin < ymax, got ymin {y_min}, ymax {y_max}")));
    }
    if log && y_min == 0.0 {
        return Err(usage("log-spaced transforms (loglog, kratky) need ymin > 0"));
    }
    if args.points < 2 {
        return Err(usage(format!("need at least 2 points, got {}", args.points)));
    }
    Ok((y_min, y_max))
}

/// `(class, transform, H denominators, beta)` of each preset; every H is `1/n`.
fn preset_grid(p: Preset) -> (ProcessClass, Transform, [u32; 4], Option<f64>) {
    match p {
        Preset::Fig1 => (ProcessClass::Pfbm, Transform::Loglog, [2, 3, 5, 7], None),
        Preset::Fig2 => (ProcessClass::Pfbm, Transform::Kratky, [2, 3, 4, 5], None),
        Preset::Fig3 => (ProcessClass::Pgbm, Transform::Loglog, [2, 3, 5, 7], None),
        Preset::Fig4 => (ProcessClass::Pgbm, Transform::Kratky, [2, 3, 4, 5], None),
        Preset::Fig5 => (ProcessClass::Pggbm, Transform::Loglog, [2, 3, 5, 7], Some(0.5)),
    }
}

fn preset_name(p: Preset) -> &'static str {
    match p {
        Preset::Fig1 => "fig1",
        Preset::Fig2 => "fig2",
        Preset::Fig3 => "fig3",
        Preset::Fig4 => "fig4",
        Preset::Fig5 => "fig5",
    }
}

pub fn cmd_debye(args: &DebyeArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let mut jobs: Vec<(std::path::PathBuf, DebyeConfig)> = Vec::new();
    if let Some(preset) = args.preset {
        if is_stdout(&args.out) {
            return Err(usage("--preset writes several files; give a directory with --out"));
        }
        let (class, default_transform, denominators, beta) = preset_grid(preset);
        let transform = args.transform.map(Transform::from).unwrap_or(default_transform);
        let (y_min, y_max) = resolve_range(args, transform)?;
        for n in denominators {
            let process = ProcessSpec::new(class, 1.0 / f64::from(n), beta, 1.0).map_err(usage)?;
            let name = format!("{}_{}_H1_{n}.csv", preset_name(preset), class.name());
            let cfg = DebyeConfig {
                process,
                y_min,
                y_max,
                points: args.points,
                transform,
                spacing: if transform == Transform::Linear { "linear" } else { "log" },
                preset: Some(preset),
            };
            jobs.push((args.out.join(name), cfg));
        }
    } else {
        let (Some(process), Some(hurst)) = (args.process, args.hurst) else {
            return Err(usage("--process and --hurst are required without --preset"));
        };
        let spec = ProcessSpec::new(process.into(), hurst, args.beta, 1.0).map_err(usage)?;
        let transform = Transform::from(args.transform.unwrap_or(TransformArg::Linear));
        let (y_min, y_max) = resolve_range(args, transform)?;
        let cfg = DebyeConfig {
            process: spec,
            y_min,
            y_max,
            points: args.points,
            transform,
            spacing: if transform == Transform::Linear { "linear" } else { "log" },
            preset: None,
        };
        jobs.push((args.out.clone(), cfg));
    }

    let curves = jobs
        .iter()
        .map(|(_, cfg)| DebyeCurve::compute(&cfg.process, cfg.y_values(), cfg.transform).map_err(compute))
        .collect::<Result<Vec<_>, _>>()?;
    if args.preset.is_some() {
        std::fs::create_dir_all(&args.out).map_err(|e| compute(format!("{}: {e}", args.out.display())))?;
    }
    for ((path, cfg), curve) in jobs.iter().zip(&curves) {
        let mut side = Sidecar::new("debye", serde_json::to_value(cfg).map_err(compute)?);
        side.method = Some(debye_method(cfg.process.class()).to_owned());
        emit(path, stdout, &side, |w| curve.write_csv(w))?;
    }
    Ok(())
}

fn sample_ensemble(
    opts: &ProcessOpts,
    length: f64,
    grid: usize,
    paths: usize,
    seed: u64,
    method: SamplingMethod,
) -> Result<PathEnsemble, CliError> {
    let spec = spec_from(opts, length)?;
    if grid < 2 {
        return Err(usage(format!("need at least 2 grid points, got {grid}")));
    }
    if paths < 1 {
        return Err(usage("need at least 1 path"));
    }
    let grid = CircleGrid::new(grid, length).map_err(usage)?;
    sample_process(&spec, &grid, paths, seed, method).map_err(compute)
}

pub fn cmd_sample(args: &SampleArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let ens = sample_ensemble(
        &args.process,
        args.length,
        args.grid,
        args.paths,
        args.seed,
        args.method.into(),
    )?;
    let params = json!({
        "process": ens.spec,
        "grid": args.grid,
        "paths": args.paths,
        "requested_method": ens.requested_method,
        "jitter": ens.jitter,
        "format": args.format,
        "layout": "row-major, one path per row",
    });
    let mut side = Sidecar::new("sample", params);
    side.seed = Some(ens.seed);
    side.method = Some(ens.method.to_string());
    side.fallbacks = ens.fallbacks.clone();
    emit(&args.out, stdout, &side, |w| match args.format {
        EnsembleFormat::Csv => ens.write_csv(w),
        EnsembleFormat::Binary => ens.write_binary(w),
    })
}

/// One row of the validation table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidateRow {
    pub k: f64,
    pub y: f64,
    pub analytic: f64,
    pub estimate: f64,
    pub std_error: f64,
    pub z: f64,
    /// Same estimator on the half-resolution sub-grid of the same paths.
    pub coarse_estimate: f64,
    pub shift_over_se: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidateReport {
    pub rows: Vec<ValidateRow>,
    pub method: SamplingMethod,
    pub fallbacks: Vec<String>,
}

impl ValidateReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    /// CSV with header `k,y,analytic,estimate,std_error,z,coarse_estimate,shift_over_se,pass`.
    pub fn write_csv<W: Write + ?Sized>(&self, w: &mut W) -> std::io::Result<()> {
        let mut s = String::from("k,y,analytic,estimate,std_error,z,coarse_estimate,shift_over_se,pass\n");
        for r in &self.rows {
            let nums = [r.k, r.y, r.analytic, r.estimate, r.std_error, r.z, r.coarse_estimate, r.shift_over_se];
            for v in nums {
                s.push_str(&fmt_f64(v));
                s.push(',');
            }
            s.push_str(if r.pass { "true" } else { "false" });
            s.push('\n');
        }
        w.write_all(s.as_bytes())
    }
}

/// Samples the ensemble and tabulates the Monte Carlo form factor against
/// the closed form.
pub fn validate_report(args: &ValidateArgs) -> Result<ValidateReport, CliError> {
    let spec = spec_from(&args.process, args.length)?;
    let analytic_spec = match args.analytic_hurst {
        Some(h) => ProcessSpec::new(spec.class(), h, args.process.beta, args.length).map_err(usage)?,
        None => spec,
    };
    let (stride_levels, min_grid) = match args.estimator {
        Estimator::Extrapolated => (EXTRAPOLATION_LEVELS, 2 << EXTRAPOLATION_LEVELS),
        Estimator::Plain => (1, 4),
    };
    let block = 2usize << (stride_levels - 1);
    if args.grid < min_grid || args.grid % block != 0 {
        return Err(usage(format!(
            "--grid must be a multiple of {block} and at least {min_grid} for the {} estimator, got {}",
            match args.estimator {
                Estimator::Extrapolated => "extrapolated",
                Estimator::Plain => "plain",
            },
            args.grid
        )));
    }
    if !(args.z_max > 0.0) {
        return Err(usage("--z-max must be positive"));
    }
    let ks: Vec<(f64, f64)> = if !args.k_list.is_empty() {
        args.k_list
            .iter()
            .map(|&k| Ok((k, y_from_k(k, spec.hurst(), spec.circle_length()).map_err(usage)?)))
            .collect::<Result<_, CliError>>()?
    } else {
        let ys: &[f64] = if args.y_list.is_empty() { &DEFAULT_Y } else { &args.y_list };
        ys.iter()
            .map(|&y| Ok((k_from_y(y, spec.hurst(), spec.circle_length()).map_err(usage)?, y)))
            .collect::<Result<_, CliError>>()?
    };

    let ens = sample_ensemble(
        &args.process,
        args.length,
        args.grid,
        args.paths,
        args.seed,
        args.method.into(),
    )?;
    let mut rows = Vec::with_capacity(ks.len());
    for (k, y) in ks {
        let analytic = form_factor(&analytic_spec, k).map_err(compute)?;
        let fine = form_factor_mc_extrapolated(&ens, k, 1, stride_levels).map_err(compute)?;
        let coarse = form_factor_mc_extrapolated(&ens, k, 2, stride_levels).map_err(compute)?;
        let z = fine.z_score(analytic);
        let shift = (fine.mean - coarse.mean).abs();
        let shift_over_se = if shift == 0.0 { 0.0 } else { shift / fine.std_error };
        rows.push(ValidateRow {
            k,
            y,
            analytic,
            estimate: fine.mean,
            std_error: fine.std_error,
            z,
            coarse_estimate: coarse.mean,
            shift_over_se,
            pass: z.abs() <= args.z_max && shift_over_se < 1.0,
        });
    }
    Ok(ValidateReport {
        rows,
        method: ens.method,
        fallbacks: ens.fallbacks,
    })
}

/// Writes the report and reports whether every row passed.
pub fn cmd_validate(args: &ValidateArgs, stdout: &mut dyn Write) -> Result<bool, CliError> {
    let report = validate_report(args)?;
    let mut side = Sidecar::new("validate", serde_json::to_value(args).map_err(compute)?);
    side.seed = Some(args.seed);
    side.method = Some(report.method.to_string());
    side.fallbacks = report.fallbacks.clone();
    emit(&args.out, stdout, &side, |w| Ok(report.write_csv(w)?))?;
    Ok(report.passed())
}

#[derive(Debug, Serialize)]
struct GyrationOutput {
    process: ProcessClass,
    hurst: f64,
    beta: f64,
    circle_length: f64,
    #[serde(flatten)]
    report: GyrationReport,
}

pub fn cmd_gyration(args: &GyrationArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let spec = spec_from(&args.process, args.length)?;
    let out = GyrationOutput {
        process: spec.class(),
        hurst: spec.hurst(),
        beta: spec.beta(),
        circle_length: spec.circle_length(),
        report: gyration_relation(&spec),
    };
    let text = if args.json {
        let mut s = serde_json::to_string_pretty(&out).map_err(compute)?;
        s.push('\n');
        s
    } else {
        let r = &out.report;
        let lines = [
            ("process", out.process.to_string()),
            ("hurst", fmt_f64(out.hurst)),
            ("beta", fmt_f64(out.beta)),
            ("circle_length", fmt_f64(out.circle_length)),
            ("r_g_squared", fmt_f64(r.r_g_squared)),
            ("r_e_squared", fmt_f64(r.r_e_squared)),
            ("relation_residual", fmt_f64(r.relation_residual)),
            ("relative_residual", fmt_f64(r.relative_residual)),
            ("linear_fbm_half_length", fmt_f64(r.linear_fbm_half_length)),
            ("linear_comparison_residual", fmt_f64(r.linear_comparison_residual)),
        ];
        lines.iter().map(|(k, v)| format!("{k:<27} {v}\n")).collect()
    };
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| compute(format!("stdout: {e}")))
}
