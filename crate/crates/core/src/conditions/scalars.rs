//! Scalar threshold calculators.

use serde::{Deserialize, Serialize};

use super::ConditionError;

/// Normalizer `m(n, d) = (ln n · ln ln ln n) / (ln ln n · ln d)`.
///
/// Needs `ln ln ln n > 0` (n ≥ 16) and `ln d > 0`.
pub fn m_value(n: u64, d: f64) -> Result<f64, ConditionError> {
    let ln = (n as f64).ln();
    let lln = ln.ln();
    let llln = lln.ln();
    if !(ln > 0.0 && lln > 0.0 && llln > 0.0) {
        return Err(ConditionError::Domain(format!(
            "ln ln ln n must be positive, n = {n}"
        )));
    }
    let ld = d.ln();
    if !(ld > 0.0) {
        return Err(ConditionError::Domain(format!("ln d must be positive, d = {d}")));
    }
    Ok(ln * llln / (lln * ld))
}

/// `α(τ) = (1/9) · (4τ)^(−τ)`.
pub fn alpha_value(tau: u32) -> f64 {
    assert!(tau >= 1, "tau must be at least 1");
    (4.0 * f64::from(tau)).powi(-(tau as i32)) / 9.0
}

/// Union bound on the probability that `G(n, p)` has two disjoint
/// `s`-sets with no edge between them: `C(n, s)² · (1 − p)^(s²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct P2Bound {
    /// Set size, rounded up from `n / (constant · m(n, d))`.
    pub s: u64,
    /// Natural log of the bound; `-inf` when `p = 1`.
    pub log_bound: f64,
    pub bound: f64,
    /// The bound is at least 1 and says nothing.
    pub vacuous: bool,
}

/// Evaluates the bound in log space so that it never overflows.
pub fn p2_failure_bound(n: u64, p: f64, d: f64, constant: f64) -> Result<P2Bound, ConditionError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(ConditionError::InvalidParameter(format!("p = {p} outside [0, 1]")));
    }
    let m = m_value(n, d)?;
    let raw = n as f64 / (constant * m);
    let s = (raw.ceil() as u64).clamp(1, n);
    let log_binom = ln_binomial(n, s);
    let sf = s as f64;
    let log_bound = 2.0 * log_binom + sf * sf * (-p).ln_1p();
    let bound = log_bound.exp();
    Ok(P2Bound {
        s,
        log_bound,
        bound,
        vacuous: bound >= 1.0,
    })
}

/// `ln C(n, k)`. Sums `ln((n − k + i) / i)` directly for moderate `k` and
/// falls back to log-gamma otherwise.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    assert!(k <= n);
    let k = k.min(n - k);
    if k <= 100_000 {
        (1..=k)
            .map(|i| ((n - k + i) as f64 / i as f64).ln())
            .sum()
    } else {
        libm::lgamma(n as f64 + 1.0) - libm::lgamma(k as f64 + 1.0) - libm::lgamma((n - k) as f64 + 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m_value_examples() {
        let m = m_value(1_000_000, 12.0).unwrap();
        assert!((m - 2.044).abs() < 5e-4, "{m}");
        assert!(m_value(100_000_000, 12.0).unwrap() > m);
        assert!(matches!(m_value(15, 12.0), Err(ConditionError::Domain(_))));
        assert!(m_value(16, 12.0).is_ok());
        assert!(matches!(m_value(1000, 1.0), Err(ConditionError::Domain(_))));
    }

    #[test]
    fn alpha_examples() {
        assert!((alpha_value(1) - 1.0 / 36.0).abs() < 1e-15);
        assert!((alpha_value(2) - 1.0 / 576.0).abs() < 1e-15);
        for t in 1..10 {
            assert!(alpha_value(t + 1) < alpha_value(t));
        }
    }

    #[test]
    fn p2_bound_extremes() {
        let zero = p2_failure_bound(10_000, 0.0, 12.0, 4130.0).unwrap();
        assert!(zero.vacuous);
        assert!(zero.bound >= 1.0);
        assert!((zero.log_bound - 2.0 * ln_binomial(10_000, zero.s)).abs() < 1e-9);
        let one = p2_failure_bound(10_000, 1.0, 12.0, 4130.0).unwrap();
        assert_eq!(one.bound, 0.0);
        assert!(!one.vacuous);
        assert!(p2_failure_bound(10_000, 1.5, 12.0, 4130.0).is_err());
    }

    #[test]
    fn p2_bound_is_vacuous_at_a_million() {
        // s is only about 12 here, far too small for (1-p)^{s^2} to beat C(n,s)^2
        let n = 1_000_000u64;
        let ln = (n as f64).ln();
        let p = (ln + ln.ln() + 5.0) / n as f64;
        let r = p2_failure_bound(n, p, ln.powf(0.1), 4130.0).unwrap();
        assert!(r.vacuous);
        assert!(r.log_bound > 250.0);
    }

    #[test]
    fn ln_binomial_small_cases() {
        assert!((ln_binomial(5, 2) - 10f64.ln()).abs() < 1e-14);
        assert_eq!(ln_binomial(7, 0), 0.0);
        assert_eq!(ln_binomial(7, 7), 0.0);
        let direct = libm::lgamma(300_001.0) - 2.0 * libm::lgamma(150_001.0);
        assert!((ln_binomial(300_000, 150_000) - direct).abs() / direct < 1e-12);
    }
}
