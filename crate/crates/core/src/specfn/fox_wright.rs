use super::gamma::{is_gamma_pole, ln_gamma_signed};
use super::{sum_log_terms, SeriesPolicy, SeriesValue};
use crate::error::{domain, Result};

/// Gamma argument `a + b n` of a Fox-Wright coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WrightPair {
    pub a: f64,
    pub b: f64,
}

impl WrightPair {
    pub const fn new(a: f64, b: f64) -> Self {
        Self { a, b }
    }

    fn at(&self, n: usize) -> f64 {
        self.a + self.b * n as f64
    }
}

/// Fox-Wright function
///
///   ₂Ψ₂[(a1,b1),(a2,b2); (c1,d1),(c2,d2) | x]
///     = Σ_n Γ(a1+b1 n) Γ(a2+b2 n) / (Γ(c1+d1 n) Γ(c2+d2 n)) x^n / n!
///
/// for `x ≤ 0`. Terms whose denominator gamma sits on a pole are zero.
/// Truncation and the cancellation check follow the other series in this
/// module, so a large argument fails with `AccuracyLoss`.
pub fn fox_wright_2psi2(
    numerator: [WrightPair; 2],
    denominator: [WrightPair; 2],
    x: f64,
    policy: &SeriesPolicy,
) -> Result<SeriesValue> {
    if !(x <= 0.0) {
        return Err(domain(format!("fox_wright_2psi2 is evaluated for x <= 0, got {x}")));
    }
    for p in &numerator {
        if p.b == 0.0 && is_gamma_pole(p.a) {
            return Err(domain(format!("numerator gamma pole at Γ({})", p.a)));
        }
    }
    if x == 0.0 {
        let mut log_mag = 0.0;
        let mut sign = 1.0;
        for (p, q) in numerator.iter().zip(&denominator) {
            let (lp, sp) = ln_gamma_signed(p.a).ok_or_else(|| domain("numerator gamma pole"))?;
            let Some((lq, sq)) = ln_gamma_signed(q.a) else {
                return Ok(SeriesValue { value: 0.0, terms: 1, largest_term: 0.0 });
            };
            log_mag += lp - lq;
            sign *= sp * sq;
        }
        let v = sign * log_mag.exp();
        return Ok(SeriesValue { value: v, terms: 1, largest_term: v.abs() });
    }
    let lx = (-x).ln();
    let mut ln_fact = 0.0;
    let mut pole = None;
    let r = sum_log_terms(policy, |n| {
        if n > 0 {
            ln_fact += (n as f64).ln();
        }
        let nl = n as f64 * lx;
        let mut log_mag = nl - ln_fact;
        let mut scale = nl.abs() + ln_fact;
        let mut sign = if n % 2 == 1 { -1.0 } else { 1.0 };
        for q in &denominator {
            let (l, s) = ln_gamma_signed(q.at(n))?;
            log_mag -= l;
            scale += l.abs();
            sign *= s;
        }
        for p in &numerator {
            let Some((l, s)) = ln_gamma_signed(p.at(n)) else {
                pole.get_or_insert((p.at(n), n));
                return None;
            };
            log_mag += l;
            scale += l.abs();
            sign *= s;
        }
        Some((log_mag, sign, scale))
    });
    if let Some((arg, n)) = pole {
        return Err(domain(format!("numerator gamma pole at Γ({arg}) for n = {n}")));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::specfn::{gamma_fn, mittag_leffler_general};

    #[test]
    fn value_at_zero_is_gamma_ratio() {
        let num = [WrightPair::new(1.5, 0.3), WrightPair::new(2.0, 1.0)];
        let den = [WrightPair::new(0.7, 0.5), WrightPair::new(3.0, 0.2)];
        let v = fox_wright_2psi2(num, den, 0.0, &SeriesPolicy::default()).unwrap();
        let expected = gamma_fn(1.5).unwrap() * gamma_fn(2.0).unwrap()
            / (gamma_fn(0.7).unwrap() * gamma_fn(3.0).unwrap());
        assert!((v.value - expected).abs() < 1e-14);
        assert_eq!(v.terms, 1);
    }

    #[test]
    fn reduces_to_generalized_mittag_leffler() {
        // ρ = α, γ = β: Γ(σ) ₂Ψ₂ = Γ(σ) E_{β,α+σ}(x)
        let (alpha, beta, sigma) = (1.3, 0.6, 0.8);
        let num = [WrightPair::new(alpha, beta), WrightPair::new(1.0, 1.0)];
        let den = [WrightPair::new(alpha, beta), WrightPair::new(sigma + alpha, beta)];
        for &x in &[-0.5, -2.0, -6.0] {
            let ml = mittag_leffler_general(beta, alpha + sigma, x).unwrap();
            match fox_wright_2psi2(num, den, x, &SeriesPolicy::default()) {
                Ok(psi) => assert!((psi.value - ml).abs() < 1e-10, "x={x}: {} vs {ml}", psi.value),
                Err(Error::AccuracyLoss { .. }) => assert!(x < -5.0),
                Err(e) => panic!("{e}"),
            }
        }
        // E_{0.6,2.1}(-6), 60-digit series oracle
        let ml = mittag_leffler_general(beta, alpha + sigma, -6.0).unwrap();
        assert!((ml - 0.163_774_012_007_398_959_8).abs() < 1e-13);
    }

    #[test]
    fn pggbm_parameters_match_direct_series() {
        let h = 0.25;
        let beta = 0.5;
        let num = [WrightPair::new(1.0, 2.0 * h), WrightPair::new(1.0, 1.0)];
        let den = [WrightPair::new(1.0, beta), WrightPair::new(2.0, 2.0 * h)];
        let psi = fox_wright_2psi2(num, den, -1.0, &SeriesPolicy::default()).unwrap();
        // direct summation of Σ (-1)^n / ((1 + 2Hn) Γ(1 + βn))
        let mut oracle = 0.0;
        for n in 0..60 {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            oracle += sign / ((1.0 + 2.0 * h * n as f64) * gamma_fn(1.0 + beta * n as f64).unwrap());
        }
        assert!((psi.value - oracle).abs() < 1e-10);
    }

    #[test]
    fn numerator_pole_is_rejected_and_denominator_pole_is_zero() {
        let p = SeriesPolicy::default();
        let bad = [WrightPair::new(-1.0, 0.5), WrightPair::new(1.0, 1.0)];
        let den = [WrightPair::new(1.0, 1.0), WrightPair::new(1.0, 1.0)];
        assert!(fox_wright_2psi2(bad, den, -1.0, &p).is_err());
        // 1/Γ(1 - n) vanishes for n ≥ 1: only the n = 0 term survives
        let num = [WrightPair::new(1.0, 0.0), WrightPair::new(1.0, 1.0)];
        let den = [WrightPair::new(1.0, -1.0), WrightPair::new(1.0, 0.0)];
        let short = SeriesPolicy::new(50, 1e-10, 30.0).unwrap();
        match fox_wright_2psi2(num, den, -3.0, &short) {
            Err(Error::Convergence { partial, .. }) => assert_eq!(partial, 1.0),
            Ok(v) => assert_eq!(v.value, 1.0),
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn reports_convergence_failure() {
        let p = SeriesPolicy::new(10, 1e-10, 30.0).unwrap();
        let num = [WrightPair::new(1.0, 0.0), WrightPair::new(1.0, 1.0)];
        let den = [WrightPair::new(1.0, 0.0), WrightPair::new(1.0, 0.0)];
        // Σ (-x)^n with x = 0.9: geometric, far from converged at 10 terms
        assert!(matches!(
            fox_wright_2psi2(num, den, -0.9, &p),
            Err(Error::Convergence { terms: 10, .. })
        ));
    }
}
