//! Closed-form single-queue mathematics: M/M/1 sojourn terms, M/D/1 transit
//! means, and the M/D/1 waiting-time CDF.
//!
//! The waiting-time CDF has an exact finite-sum expression
//!
//!   P(W <= t) = (1 - rho) * sum_{j=0}^{floor(t/D)} [lambda (jD - t)]^j / j! * e^{-lambda (jD - t)}
//!
//! whose terms alternate in sign and grow like e^{lambda t}, so it is only
//! evaluated while its cancellation budget is safe for f64 (log-domain term
//! evaluation, signed log-sum-exp). Outside that envelope the equivalent
//! integral equation F(t) = (1 - rho) + lambda * int_{t-D}^{t} F(u) du is
//! solved on a grid, which is stable for every rho < 1.

use crate::dist::EmpiricalCdf;
use crate::error::{Error, Result};

fn check_stable(lambda: f64, mu: f64) -> Result<()> {
    if mu.is_nan() || mu <= 0.0 || !lambda.is_finite() || lambda < 0.0 {
        return Err(Error::InvalidInput(format!(
            "rates must satisfy 0 <= lambda (got {lambda}), mu > 0 (got {mu})"
        )));
    }
    if lambda >= mu {
        return Err(Error::Instability { lambda, mu });
    }
    Ok(())
}

/// Mean M/M/1 sojourn time 1/(mu - lambda): the per-node term of the
/// open-network transit delay.
pub fn mm1_sojourn_mean(lambda: f64, mu: f64) -> Result<f64> {
    check_stable(lambda, mu)?;
    Ok(1.0 / (mu - lambda))
}

/// Mean one-way M/D/1 transit: 2/mu (processing + transmission at the node)
/// plus the queueing delay lambda / (2 mu^2 (1 - rho)).
pub fn md1_transit_mean(lambda: f64, mu: f64) -> Result<f64> {
    check_stable(lambda, mu)?;
    Ok(2.0 / mu + md1_wait_mean_unchecked(lambda, mu))
}

/// Mean M/D/1 waiting time (zero when the queue is idle, unchecked rates).
pub(crate) fn md1_wait_mean_unchecked(lambda: f64, mu: f64) -> f64 {
    let rho = lambda / mu;
    lambda / (2.0 * mu * mu * (1.0 - rho))
}

pub fn md1_wait_mean(lambda: f64, mu: f64) -> Result<f64> {
    check_stable(lambda, mu)?;
    Ok(md1_wait_mean_unchecked(lambda, mu))
}

/// P(W <= t) for the M/D/1 waiting time.
pub fn md1_wait_cdf(lambda: f64, mu: f64, t: f64) -> Result<f64> {
    check_stable(lambda, mu)?;
    if t < 0.0 {
        return Err(Error::InvalidInput(format!("t must be >= 0, got {t}")));
    }
    if lambda == 0.0 {
        return Ok(1.0);
    }
    let rho = lambda / mu;
    if t == 0.0 {
        return Ok(1.0 - rho);
    }
    let d = 1.0 / mu;
    let k = (t / d).floor() as usize;
    if k <= 4096 {
        if let Some(v) = md1_wait_cdf_exact_sum(lambda, d, t, k, rho) {
            return Ok(v);
        }
    }
    Ok(md1_wait_volterra_point(lambda, mu, t))
}

/// Exact finite sum in log domain. Returns None when catastrophic
/// cancellation would leave fewer than ~3 significant digits.
fn md1_wait_cdf_exact_sum(lambda: f64, d: f64, t: f64, k: usize, rho: f64) -> Option<f64> {
    // term_j = (-1)^j * x^j e^x / j!,  x = lambda (t - jD) >= 0
    let mut logs = Vec::with_capacity(k + 1);
    let mut ln_fact = 0.0;
    let mut max_log = f64::NEG_INFINITY;
    for j in 0..=k {
        if j > 0 {
            ln_fact += (j as f64).ln();
        }
        let x = lambda * (t - j as f64 * d);
        let lg = if j == 0 {
            x
        } else if x <= 0.0 {
            f64::NEG_INFINITY
        } else {
            (j as f64) * x.ln() + x - ln_fact
        };
        max_log = max_log.max(lg);
        logs.push(lg);
    }
    let mut acc = 0.0f64;
    for (j, &lg) in logs.iter().enumerate() {
        let term = (lg - max_log).exp();
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    // |acc| ~ e^{ln(result) - max_log}; when it vanishes relative to the
    // rounding noise of the summation the digits are gone.
    if acc.is_nan() || acc <= (k as f64 + 1.0) * 1e-13 {
        return None;
    }
    let v = (1.0 - rho) * (max_log + acc.ln()).exp();
    if v.is_finite() {
        Some(v.clamp(0.0, 1.0))
    } else {
        None
    }
}

const VOLTERRA_SUBSTEPS: usize = 32;

/// Stable point evaluation via the integral equation, sweeping from 0 to t.
fn md1_wait_volterra_point(lambda: f64, mu: f64, t: f64) -> f64 {
    let rho = lambda / mu;
    let d = 1.0 / mu;
    let h = d / VOLTERRA_SUBSTEPS as f64;
    let steps = (t / h).ceil() as usize;
    let mut f = Vec::with_capacity(steps + 1);
    let mut integral = Vec::with_capacity(steps + 1);
    f.push(1.0 - rho);
    integral.push(0.0);
    let denom = 1.0 - lambda * h / 2.0;
    for k in 1..=steps {
        let base = integral[k - 1] + 0.5 * h * f[k - 1];
        let low = if k >= VOLTERRA_SUBSTEPS { integral[k - VOLTERRA_SUBSTEPS] } else { 0.0 };
        let fk = (((1.0 - rho) + lambda * (base - low)) / denom).clamp(0.0, 1.0);
        f.push(fk);
        integral.push(base + 0.5 * h * fk);
    }
    // interpolate between the last two grid points
    if steps == 0 {
        return f[0];
    }
    let t_prev = (steps - 1) as f64 * h;
    let frac = ((t - t_prev) / h).clamp(0.0, 1.0);
    f[steps - 1] + frac * (f[steps] - f[steps - 1])
}

/// The M/D/1 waiting-time distribution on a grid, out to a CDF of
/// 1 - tail_eps. This is the building block for core-network latency
/// distributions.
///
/// For rho > 0.999 the waiting time is, to well under a percent, the
/// heavy-traffic limit: an atom 1 - rho at zero plus an exponential tail; a
/// mean-exact surrogate replaces the sweep there to keep grids bounded.
pub fn md1_wait_grid(lambda: f64, mu: f64, tail_eps: f64) -> Result<EmpiricalCdf> {
    check_stable(lambda, mu)?;
    let rho = lambda / mu;
    if lambda == 0.0 {
        return EmpiricalCdf::new(vec![0.0, 1.0 / mu], vec![1.0, 1.0]);
    }
    let d = 1.0 / mu;
    if rho > 0.999 {
        let mean_wait = md1_wait_mean_unchecked(lambda, mu);
        let scale = mean_wait / rho;
        let horizon = scale * (rho / tail_eps).ln();
        let n = 4096usize;
        let h = horizon / n as f64;
        let mut ts = Vec::with_capacity(n + 1);
        let mut fs = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let t = k as f64 * h;
            ts.push(t);
            fs.push(1.0 - rho * (-t / scale).exp());
        }
        return EmpiricalCdf::new(ts, fs);
    }

    let h = d / VOLTERRA_SUBSTEPS as f64;
    let denom = 1.0 - lambda * h / 2.0;
    let mut f = vec![1.0 - rho];
    let mut integral = vec![0.0];
    let cap = 64_000_000usize; // safety stop; never reached for rho <= 0.999
    let mut k = 0usize;
    while 1.0 - f[k] > tail_eps && k < cap {
        k += 1;
        let base = integral[k - 1] + 0.5 * h * f[k - 1];
        let low = if k >= VOLTERRA_SUBSTEPS { integral[k - VOLTERRA_SUBSTEPS] } else { 0.0 };
        let fk = (((1.0 - rho) + lambda * (base - low)) / denom).clamp(0.0, 1.0);
        f.push(fk);
        integral.push(base + 0.5 * h * fk);
    }
    let ts = (0..f.len()).map(|i| i as f64 * h).collect();
    EmpiricalCdf::new(ts, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mm1_sojourn_examples() {
        // mu = alpha * C / B with alpha = 0.01, C = 10 Gb/s, B = 2400 bits
        let v = mm1_sojourn_mean(2080.0, 41666.7).unwrap();
        assert!((v - 2.526e-5).abs() < 1e-8, "got {v}");
        assert_eq!(mm1_sojourn_mean(0.0, 1000.0).unwrap(), 1e-3);
        assert!(matches!(
            mm1_sojourn_mean(1000.0, 1000.0),
            Err(Error::Instability { .. })
        ));
    }

    #[test]
    fn md1_transit_examples() {
        let v = md1_transit_mean(0.0, 2.5e7).unwrap();
        assert!((v - 8e-8).abs() < 1e-20);
        let v = md1_transit_mean(1.25e7, 2.5e7).unwrap();
        assert!((v - 1e-7).abs() < 1e-18, "got {v}");
        assert!(matches!(md1_transit_mean(2.5e7, 2.5e7), Err(Error::Instability { .. })));
    }

    #[test]
    fn means_are_monotone_in_rates_on_the_stable_region() {
        // strictly decreasing in mu, strictly increasing in lambda
        for f in [mm1_sojourn_mean, md1_transit_mean] {
            let mut prev = f64::INFINITY;
            for i in 0..30 {
                let mu = 1200.0 + 400.0 * i as f64;
                let v = f(1000.0, mu).unwrap();
                assert!(v < prev);
                prev = v;
            }
            let mut prev = 0.0;
            for i in 0..30 {
                let lambda = 50.0 * i as f64;
                let v = f(lambda, 2000.0).unwrap();
                assert!(v > prev);
                prev = v;
            }
        }
    }

    #[test]
    fn md1_wait_cdf_boundaries() {
        // t = 0 gives the probability of finding the system empty
        for &(l, m) in &[(0.3, 1.0), (0.8, 1.0), (2080.0, 41666.7)] {
            let f0 = md1_wait_cdf(l, m, 0.0).unwrap();
            assert!((f0 - (1.0 - l / m)).abs() < 1e-12);
        }
        // lambda -> 0: no queueing at all
        assert_eq!(md1_wait_cdf(0.0, 1.0, 3.0).unwrap(), 1.0);
        assert_eq!(md1_wait_cdf(0.0, 1.0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn md1_wait_cdf_nondecreasing_in_t() {
        // deterministic pseudo-random (lambda, mu, t) triples
        let mut state = 0x243f6a8885a308d3u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..40 {
            let mu = 0.5 + 4.0 * next();
            let rho = 0.05 + 0.9 * next();
            let lambda = rho * mu;
            let mut prev = 0.0;
            for i in 0..25 {
                let t = i as f64 * 0.8 / mu;
                let f = md1_wait_cdf(lambda, mu, t).unwrap();
                assert!(f >= prev - 1e-9, "decreasing at rho={rho} t={t}");
                assert!((0.0..=1.0).contains(&f));
                prev = f;
            }
        }
    }

    #[test]
    fn volterra_agrees_with_exact_sum() {
        for &rho in &[0.2, 0.5, 0.8, 0.95] {
            let mu = 1.0;
            let lambda = rho;
            for i in 1..=20 {
                let t = i as f64 * 1.2;
                let k = t.floor() as usize;
                if let Some(exact) = md1_wait_cdf_exact_sum(lambda, 1.0, t, k, rho) {
                    let volt = md1_wait_volterra_point(lambda, mu, t);
                    assert!(
                        (exact - volt).abs() < 5e-4,
                        "rho={rho} t={t}: exact {exact} vs volterra {volt}"
                    );
                }
            }
        }
    }

    #[test]
    fn grid_matches_point_evaluation_and_mean() {
        for &rho in &[0.3, 0.8] {
            let mu = 2.5e7;
            let lambda = rho * mu;
            let grid = md1_wait_grid(lambda, mu, 1e-7).unwrap();
            for &q in &[0.3, 0.6, 0.9, 0.99] {
                let t = grid.percentile(q).unwrap();
                if q <= 1.0 - rho {
                    // quantile sits inside the atom at zero
                    assert_eq!(t, 0.0, "rho={rho} q={q}");
                } else {
                    // smallest grid point with F >= q: the point before it
                    // must still be below q
                    let f = md1_wait_cdf(lambda, mu, t).unwrap();
                    assert!(f >= q - 2e-3, "rho={rho} q={q}: F={f}");
                    let h = 1.0 / (mu * VOLTERRA_SUBSTEPS as f64);
                    let f_prev = md1_wait_cdf(lambda, mu, (t - h).max(0.0)).unwrap();
                    assert!(f_prev < q + 2e-3, "rho={rho} q={q}: F(t-h)={f_prev}");
                }
            }
            let analytic = md1_wait_mean_unchecked(lambda, mu);
            let rel = (grid.mean() - analytic).abs() / analytic;
            assert!(rel < 2e-3, "rho={rho}: grid mean off by {rel}");
        }
    }

    #[test]
    fn extreme_utilization_uses_surrogate_and_keeps_mean() {
        let mu = 1e6;
        let lambda = 0.9995 * mu;
        let grid = md1_wait_grid(lambda, mu, 1e-6).unwrap();
        let analytic = md1_wait_mean_unchecked(lambda, mu);
        let rel = (grid.mean() - analytic).abs() / analytic;
        assert!(rel < 0.02, "surrogate mean off by {rel}");
        assert!((grid.cdf(0.0) - (1.0 - 0.9995)).abs() < 1e-9);
    }

    #[test]
    fn deep_cancellation_regime_still_monotone_and_bounded() {
        // lambda * t far beyond the exact sum's budget
        let mu = 1.0;
        let lambda = 0.9;
        let mut prev = 0.0;
        for i in 0..12 {
            let t = 40.0 + 10.0 * i as f64;
            let f = md1_wait_cdf(lambda, mu, t).unwrap();
            assert!((0.0..=1.0).contains(&f));
            assert!(f >= prev - 1e-9);
            prev = f;
        }
        assert!(prev > 0.999, "tail should be nearly exhausted, got {prev}");
    }
}
