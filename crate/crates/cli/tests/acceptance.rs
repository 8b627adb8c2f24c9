//! Acceptance suite. Runs every criterion, prints one line per criterion and
//! exits non-zero if any of them fails.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use circfrac::formfactor::{
    debye, debye_asymptote, debye_pfbm, debye_pgbm, debye_pggbm, gyration_relation, log_points, linear_points,
};
use circfrac::process::{
    covariance_matrix, increment_char_fn, increment_second_moment, psd_check, CircleGrid, ProcessClass, ProcessSpec,
};
use circfrac::sampler::{sample_mwright, sample_process, SamplingMethod};
use circfrac::specfn::quad::{integrate_breaks, QuadTolerance};
use circfrac::specfn::{gamma_fn, m_wright, mittag_leffler, mittag_leffler_general, SeriesPolicy};
use circfrac::stats::{ks_one_sample, mean_estimate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

const HURST_SET: [f64; 4] = [1.0 / 2.0, 1.0 / 3.0, 1.0 / 5.0, 1.0 / 7.0];
const SEED: u64 = 0;

fn spec(class: ProcessClass, h: f64, l: f64) -> ProcessSpec {
    let beta = (class == ProcessClass::Pggbm).then_some(0.5);
    ProcessSpec::new(class, h, beta, l).unwrap()
}

const CLASSES: [ProcessClass; 3] = [ProcessClass::Pfbm, ProcessClass::Pgbm, ProcessClass::Pggbm];

fn debye_shape() -> Check {
    let ys = log_points(1e-3, 50.0, 200);
    let mut checked = 0;
    for class in CLASSES {
        for h in HURST_SET {
            let s = spec(class, h, 1.0);
            let f0 = debye(&s, 0.0).map_err(|e| e.to_string())?;
            if f0 != 1.0 {
                return Err(format!("{class} H={h:.4}: f(0) = {f0:e}"));
            }
            let mut prev = f0;
            for &y in &ys {
                let f = debye(&s, y).map_err(|e| format!("{class} H={h:.4} y={y}: {e}"))?;
                if !(f < prev) {
                    return Err(format!("{class} H={h:.4}: not decreasing at y={y} ({f:e} >= {prev:e})"));
                }
                prev = f;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} points, f(0) = 1 for 12 curves"))
}

fn least_squares_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

fn pfbm_tail_slope() -> Check {
    let ys = log_points(20.0, 100.0, 50);
    let lx: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mut worst = 0.0f64;
    for h in HURST_SET {
        let lf: Vec<f64> = ys
            .iter()
            .map(|&y| debye_pfbm(y, h).map(f64::ln))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let slope = least_squares_slope(&lx, &lf);
        let rel = (slope + 1.0 / h).abs() * h;
        worst = worst.max(rel);
        if rel > 0.02 {
            return Err(format!("H={h:.4}: slope {slope:.5} vs {:.5}", -1.0 / h));
        }
    }
    Ok(format!("max relative slope error {worst:.2e}"))
}

fn pgbm_tail_constant() -> Check {
    let y = 50.0;
    let mut parts = Vec::new();
    for h in [0.25, 0.5] {
        let tail = y * y * debye_pgbm(y, h).map_err(|e| e.to_string())?;
        let coefficient = 1.0 / gamma_fn(2.0 - 2.0 * h).unwrap();
        let rel = (tail / coefficient - 1.0).abs();
        if rel > 0.01 {
            return Err(format!("H={h}: y^2 f = {tail:.6} vs 1/Gamma(2-2H) = {coefficient:.6}"));
        }
        let asym = debye_asymptote(ProcessClass::Pgbm, y, 2.0 * h, h).map_err(|e| e.to_string())?;
        if !asym.discrepant || asym.printed.is_none() {
            return Err(format!("H={h}: printed coefficient not flagged"));
        }
        parts.push(format!("H={h}: rel {rel:.1e}"));
    }
    let exact = 1.0 - (-2500f64).exp();
    let tail = y * y * debye_pgbm(y, 0.5).unwrap();
    if (tail - exact).abs() > 1e-12 {
        return Err(format!("H=1/2 closed form: {tail} vs {exact}"));
    }
    Ok(format!("{}, printed 1/Gamma(2H+2) flagged", parts.join(", ")))
}

fn class_reductions() -> Check {
    let ys = linear_points(0.0, 10.0, 200);
    let policy = SeriesPolicy::default();
    let (mut worst_pf, mut worst_pg) = (0.0f64, 0.0f64);
    for h in [1.0 / 2.0, 1.0 / 3.0, 1.0 / 5.0] {
        for &y in &ys {
            let err = |e: circfrac::Error| format!("H={h:.4} y={y}: {e}");
            let a = debye_pggbm(y, 1.0, h, &policy).map_err(err)?;
            let b = debye_pfbm(y, h).map_err(err)?;
            worst_pf = worst_pf.max((a - b).abs());
            let c = debye_pggbm(y, 2.0 * h, h, &policy).map_err(err)?;
            let d = debye_pgbm(y, h).map_err(err)?;
            worst_pg = worst_pg.max((c - d).abs());
        }
    }
    if worst_pf > 1e-10 || worst_pg > 1e-10 {
        return Err(format!("max deviation beta=1: {worst_pf:.2e}, beta=2H: {worst_pg:.2e}"));
    }
    Ok(format!("max deviation beta=1: {worst_pf:.2e}, beta=2H: {worst_pg:.2e}"))
}

fn gyration_relations() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut worst_rel, mut worst_lin) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let class = CLASSES[rng.random_range(0..3)];
        let h = 0.5 * (1.0 - rng.random::<f64>());
        let beta = 1.0 - rng.random::<f64>();
        let l = rng.random_range(0.1..=10.0);
        let beta = (class == ProcessClass::Pggbm).then_some(beta);
        let s = ProcessSpec::new(class, h, beta, l).map_err(|e| e.to_string())?;
        let r = gyration_relation(&s);
        worst_rel = worst_rel.max(r.relative_residual);
        worst_lin = worst_lin.max(r.linear_comparison_residual.abs());
        if r.relative_residual > 1e-12 || r.linear_comparison_residual.abs() > 1e-12 {
            return Err(format!("{class} H={h} beta={beta:?} L={l}: {r:?}"));
        }
    }
    Ok(format!("100 tuples, max relation {worst_rel:.1e}, linear comparison {worst_lin:.1e}"))
}

fn psd_frontier() -> Check {
    let mut worst = f64::INFINITY;
    for n in [16, 64, 128] {
        let grid = CircleGrid::new(n, 1.0).unwrap();
        for h in [0.1, 0.2, 0.3, 0.4, 0.5] {
            let mut cov = covariance_matrix(&grid, h).map_err(|e| e.to_string())?;
            let chk = psd_check(&mut cov, 1e-8).map_err(|e| e.to_string())?;
            if !chk.is_psd {
                return Err(format!("H={h} N={n}: min eigenvalue {:e}", chk.min_eigenvalue));
            }
            worst = worst.min(chk.min_eigenvalue / cov.max_diagonal());
        }
    }
    let grid = CircleGrid::new(64, 1.0).unwrap();
    let mut negatives = Vec::new();
    for h in [0.6, 0.7, 0.9] {
        let mut cov = covariance_matrix(&grid, h).map_err(|e| e.to_string())?;
        let chk = psd_check(&mut cov, 1e-8).map_err(|e| e.to_string())?;
        if chk.is_psd {
            return Err(format!("H={h} N=64: min eigenvalue {:e} within tolerance", chk.min_eigenvalue));
        }
        negatives.push(format!("{:.1e}", chk.min_eigenvalue / cov.max_diagonal()));
    }
    Ok(format!(
        "min eigenvalue/max diagonal {worst:.1e} for H<=1/2; {} for H=0.6,0.7,0.9",
        negatives.join(", ")
    ))
}

fn sampler_fidelity() -> Check {
    const N: usize = 256;
    const M: usize = 20_000;
    const LAGS: [usize; 5] = [1, 7, 32, 100, 128];
    const START: usize = 17;
    let grid = CircleGrid::new(N, 1.0).unwrap();
    let t = grid.times().to_vec();
    let mut worst = 0.0f64;
    let mut checks = 0;
    for class in CLASSES {
        let s = spec(class, 1.0 / 3.0, 1.0);
        let ens = sample_process(&s, &grid, M, SEED, SamplingMethod::Circulant).map_err(|e| e.to_string())?;
        for lag in LAGS {
            let j = (START + lag) % N;
            let inc: Vec<f64> = ens.iter_paths().map(|p| p[j] - p[START]).collect();
            let sq: Vec<f64> = inc.iter().map(|d| d * d).collect();
            let expected = increment_second_moment(&s, t[j], t[START]).unwrap();
            let z = mean_estimate(&sq).z_score(expected);
            worst = worst.max(z.abs());
            checks += 1;
            if z.abs() > 5.0 {
                return Err(format!("{class} lag {lag}: variance z = {z:.2}"));
            }
            for k in [0.5, 1.0, 2.0] {
                let c: Vec<f64> = inc.iter().map(|d| (k * d).cos()).collect();
                let expected = increment_char_fn(&s, k, t[j], t[START]).unwrap();
                let z = mean_estimate(&c).z_score(expected);
                worst = worst.max(z.abs());
                checks += 1;
                if z.abs() > 5.0 {
                    return Err(format!("{class} lag {lag} k={k}: characteristic function z = {z:.2}"));
                }
            }
        }
    }
    let y = sample_mwright(0.5, 100_000, SEED).map_err(|e| e.to_string())?;
    let ks = ks_one_sample(&y, |v| if v <= 0.0 { 0.0 } else { statrs::function::erf::erf(0.5 * v) });
    if !(ks.p_value > 0.001) {
        return Err(format!("envelope KS D = {:.2e}, p = {:.2e}", ks.statistic, ks.p_value));
    }
    Ok(format!(
        "{checks} moment checks, max |z| {worst:.2}; envelope KS D = {:.2e}, p = {:.3}",
        ks.statistic, ks.p_value
    ))
}

fn special_function_identities() -> Check {
    let tol = QuadTolerance::new(1e-11, 0.0);
    let mut worst_laplace = 0.0f64;
    for beta in [0.25, 0.5, 0.75] {
        // M_β decays like exp(-c x^{1/(1-β)}); 40 is far past double underflow of the integrand
        let breaks = [0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 40.0];
        for s in [0.1, 0.5, 1.0, 2.0, 5.0] {
            let q = integrate_breaks(|x| (-s * x).exp() * m_wright(beta, x).unwrap_or(f64::NAN), &breaks, tol);
            let e = mittag_leffler(beta, -s).map_err(|e| e.to_string())?;
            let d = (q.value - e).abs();
            worst_laplace = worst_laplace.max(d);
            if !q.converged || !(d <= 1e-6) {
                return Err(format!("Laplace beta={beta} s={s}: {} vs {e}", q.value));
            }
        }
    }
    let mut worst_euler = 0.0f64;
    for (beta, alpha, sigma) in [(0.5, 1.0, 1.0), (2.0 / 3.0, 1.0, 1.0), (0.4, 1.5, 2.0), (0.8, 2.0, 0.5)] {
        for x in [-0.5, -2.0, -8.0] {
            // t = 1 - u² absorbs the (1 - t)^{σ-1} endpoint singularity
            let f = |u: f64| {
                let t = 1.0 - u * u;
                2.0 * u.powf(2.0 * sigma - 1.0)
                    * t.powf(alpha - 1.0)
                    * mittag_leffler_general(beta, alpha, x * t.powf(beta)).unwrap_or(f64::NAN)
            };
            let q = integrate_breaks(f, &[0.0, 0.25, 0.5, 0.75, 1.0], tol);
            let rhs = gamma_fn(sigma).unwrap() * mittag_leffler_general(beta, alpha + sigma, x).map_err(|e| e.to_string())?;
            let d = (q.value - rhs).abs();
            worst_euler = worst_euler.max(d);
            if !(d <= 1e-8) {
                return Err(format!("Euler beta={beta} alpha={alpha} sigma={sigma} x={x}: {} vs {rhs}", q.value));
            }
        }
    }
    let mut worst_erfc = 0.0f64;
    for x in linear_points(0.0, 5.0, 101) {
        let e = mittag_leffler(0.5, -x).map_err(|e| e.to_string())?;
        let reference = (x * x).exp() * statrs::function::erf::erfc(x);
        worst_erfc = worst_erfc.max((e - reference).abs());
    }
    if worst_erfc > 1e-10 {
        return Err(format!("E_1/2 vs exp(x^2) erfc(x): {worst_erfc:.2e}"));
    }
    Ok(format!(
        "Laplace {worst_laplace:.1e}, Euler {worst_euler:.1e}, E_1/2 vs erfc {worst_erfc:.1e}"
    ))
}

fn circfrac() -> Command {
    Command::new(env!("CARGO_BIN_EXE_circfrac"))
}

const VALIDATE_CASES: [(&str, &str, Option<&str>); 6] = [
    ("pfbm", "1/2", None),
    ("pfbm", "1/4", None),
    ("pgbm", "1/2", None),
    ("pgbm", "1/4", None),
    ("pggbm", "1/2", Some("1/2")),
    ("pggbm", "1/4", Some("1/2")),
];

fn run_validate(dir: &Path, threads: usize, idx: usize) -> Result<(PathBuf, bool), String> {
    let (process, hurst, beta) = VALIDATE_CASES[idx];
    let out = dir.join(format!("validate_{process}_{}_{threads}.csv", hurst.replace('/', "_")));
    let mut cmd = circfrac();
    cmd.env("CIRCFRAC_THREADS", threads.to_string())
        .args(["validate", "--process", process, "--hurst", hurst, "--y", "0.5,1,2,4"])
        .args(["--grid", "256", "--paths", "20000", "--seed", &SEED.to_string()])
        .arg("--out")
        .arg(&out);
    if let Some(b) = beta {
        cmd.args(["--beta", b]);
    }
    let status = cmd.output().map_err(|e| e.to_string())?.status;
    match status.code() {
        Some(0) => Ok((out, true)),
        Some(1) if out.exists() => Ok((out, false)),
        other => Err(format!("{process} H={hurst}: exit {other:?}")),
    }
}

fn failing_rows(report: &Path) -> Vec<String> {
    let text = std::fs::read_to_string(report).unwrap_or_default();
    text.lines()
        .skip(1)
        .filter(|l| l.ends_with(",false"))
        .map(|l| {
            let f: Vec<f64> = l.split(',').take(8).map(|v| v.parse().unwrap_or(f64::NAN)).collect();
            format!("y={} z={:.2} shift={:.2}se", f[1], f[5], f[7])
        })
        .collect()
}

fn mc_form_factor(dir: &Path) -> Check {
    let mut failures = Vec::new();
    for (idx, (process, hurst, _)) in VALIDATE_CASES.iter().enumerate() {
        let (report, ok) = run_validate(dir, 1, idx)?;
        if !ok {
            failures.push(format!("{process} H={hurst}: {}", failing_rows(&report).join("; ")));
        }
    }
    if failures.is_empty() {
        Ok("6 runs, all |z| <= 4 and refinement shifts < 1 se".into())
    } else {
        Err(failures.join(" | "))
    }
}

fn sample_file(dir: &Path, threads: usize, tag: &str) -> Result<Vec<u8>, String> {
    let out = dir.join(format!("ensemble_{tag}_{threads}.bin"));
    let status = circfrac()
        .env("CIRCFRAC_THREADS", threads.to_string())
        .args(["sample", "--process", "pggbm", "--hurst", "1/3", "--beta", "1/2"])
        .args(["--grid", "256", "--paths", "20000", "--seed", &SEED.to_string(), "--format", "binary"])
        .arg("--out")
        .arg(&out)
        .status()
        .map_err(|e| e.to_string())?;
    if !status.success() {
        return Err(format!("sample exited with {status}"));
    }
    std::fs::read(&out).map_err(|e| e.to_string())
}

fn determinism(dir: &Path) -> Check {
    let single = sample_file(dir, 1, "a")?;
    let repeat = sample_file(dir, 1, "b")?;
    let multi = sample_file(dir, 4, "a")?;
    if single != repeat || single != multi {
        return Err("ensemble files differ between runs or worker counts".into());
    }
    for idx in 0..VALIDATE_CASES.len() {
        let a = dir.join(format!(
            "validate_{}_{}_1.csv",
            VALIDATE_CASES[idx].0,
            VALIDATE_CASES[idx].1.replace('/', "_")
        ));
        if !a.exists() {
            run_validate(dir, 1, idx)?;
        }
        let (b, _) = run_validate(dir, 4, idx)?;
        let (ra, rb) = (std::fs::read(&a).map_err(|e| e.to_string())?, std::fs::read(&b).map_err(|e| e.to_string())?);
        if ra != rb {
            return Err(format!("z tables differ for {} H={}", VALIDATE_CASES[idx].0, VALIDATE_CASES[idx].1));
        }
    }
    Ok(format!(
        "ensemble ({} bytes) and 6 z tables byte-identical for 1 and 4 workers",
        single.len()
    ))
}

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let d = dir.path().to_path_buf();
    let d2 = d.clone();
    let criteria: Vec<(&str, u64, Box<dyn Fn() -> Check>)> = vec![
        ("debye normalization and monotonicity", 5, Box::new(debye_shape)),
        ("pfbm tail exponent", 5, Box::new(pfbm_tail_slope)),
        ("pgbm tail constant", 1, Box::new(pgbm_tail_constant)),
        ("class reduction identities", 10, Box::new(class_reductions)),
        ("gyration relations", 1, Box::new(gyration_relations)),
        ("covariance PSD frontier", 10, Box::new(psd_frontier)),
        ("sampler fidelity", 120, Box::new(sampler_fidelity)),
        ("Monte Carlo form factor", 300, Box::new(move || mc_form_factor(&d))),
        ("special function identities", 30, Box::new(special_function_identities)),
        ("determinism across worker counts", 600, Box::new(move || determinism(&d2))),
    ];
    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut result = check();
        let elapsed = start.elapsed();
        if result.is_ok() && elapsed > Duration::from_secs(*budget) {
            result = Err(format!("took {:.1} s, budget {budget} s", elapsed.as_secs_f64()));
        }
        let (tag, detail) = match &result {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("[{tag}] {:>2}. {name} ({:.2} s): {detail}", i + 1, elapsed.as_secs_f64());
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
