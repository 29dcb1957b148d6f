//! Latency-distribution algebra: the distribution variants used by the model,
//! percentile extraction, means, and numerical CDF convolution.
//!
//! All times are in seconds. Conversions to milliseconds happen only at
//! reporting boundaries.

use crate::error::{Error, Result};
use crate::queueing;

/// Mean plus the two reporting percentiles used throughout the evaluation.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PercentileTriple {
    pub mean: f64,
    pub p90: f64,
    pub p9999: f64,
}

/// A CDF sampled on a finite, increasing grid of time points.
///
/// Between grid points the CDF is treated as linear (each cell carries a
/// uniform mass), which is exactly the representation produced by the
/// convolution engine. The first point may carry an atom (F(t0) > 0).
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct EmpiricalCdf {
    pub ts: Vec<f64>,
    pub fs: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(ts: Vec<f64>, fs: Vec<f64>) -> Result<Self> {
        if ts.len() != fs.len() || ts.is_empty() {
            return Err(Error::InvalidInput(
                "empirical CDF needs equal-length, nonempty t and F vectors".into(),
            ));
        }
        if ts.iter().chain(fs.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("CDF grid values must be finite".into()));
        }
        for w in ts.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::InvalidInput("CDF grid times must be strictly increasing".into()));
            }
        }
        for (i, w) in fs.windows(2).enumerate() {
            if w[1] < w[0] - 1e-12 {
                return Err(Error::InvalidInput(format!(
                    "CDF must be nondecreasing (F[{}]={} > F[{}]={})",
                    i,
                    w[0],
                    i + 1,
                    w[1]
                )));
            }
        }
        if fs.iter().any(|&f| !(-1e-9..=1.0 + 1e-9).contains(&f)) {
            return Err(Error::InvalidInput("CDF values must lie in [0, 1]".into()));
        }
        let fs = fs.iter().map(|&f| f.clamp(0.0, 1.0)).collect();
        Ok(Self { ts, fs })
    }

    /// Build from per-packet samples (step ECDF at the sorted sample points).
    pub fn from_samples(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidInput("no samples".into()));
        }
        samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n = samples.len() as f64;
        let mut ts = Vec::with_capacity(samples.len());
        let mut fs = Vec::with_capacity(samples.len());
        for (i, &s) in samples.iter().enumerate() {
            match ts.last() {
                Some(&last) if s <= last => {
                    *fs.last_mut().unwrap() = (i + 1) as f64 / n;
                }
                _ => {
                    ts.push(s);
                    fs.push((i + 1) as f64 / n);
                }
            }
        }
        Self::new(ts, fs)
    }

    pub fn cdf(&self, t: f64) -> f64 {
        if t < self.ts[0] {
            return 0.0;
        }
        let n = self.ts.len();
        if t >= self.ts[n - 1] {
            return self.fs[n - 1];
        }
        let idx = self.ts.partition_point(|&x| x <= t);
        // ts[idx-1] <= t < ts[idx]
        let (t0, t1) = (self.ts[idx - 1], self.ts[idx]);
        let (f0, f1) = (self.fs[idx - 1], self.fs[idx]);
        f0 + (f1 - f0) * (t - t0) / (t1 - t0)
    }

    /// Smallest grid point with F(t) >= p.
    pub fn percentile(&self, p: f64) -> Result<f64> {
        if !(0.0 < p && p < 1.0) {
            return Err(Error::InvalidInput(format!("percentile p={p} outside (0,1)")));
        }
        let idx = self.fs.partition_point(|&f| f < p);
        if idx >= self.ts.len() {
            // Grid does not reach p; report the last point (tail mass below eps).
            return Ok(*self.ts.last().unwrap());
        }
        Ok(self.ts[idx])
    }

    /// Mean by integration of the survival function over the grid
    /// (exact for the piecewise-linear representation; mass beyond the last
    /// grid point is ignored).
    pub fn mean(&self) -> f64 {
        let mut m = self.ts[0] * self.fs[0]; // atom at the first point
        // contribution of t * dF over each cell: mass * cell midpoint
        for i in 1..self.ts.len() {
            let mass = self.fs[i] - self.fs[i - 1];
            m += mass * 0.5 * (self.ts[i] + self.ts[i - 1]);
        }
        // Residual tail mass is assigned to the last grid point.
        m += (1.0 - self.fs[self.ts.len() - 1]).max(0.0) * self.ts[self.ts.len() - 1];
        m
    }

    pub fn shift_by(&self, dt: f64) -> Self {
        Self {
            ts: self.ts.iter().map(|t| t + dt).collect(),
            fs: self.fs.clone(),
        }
    }
}

/// Monotone CDF anchored at measured percentile points.
///
/// Shape: F rises from the minimum latency to the first anchor as a power
/// curve (exponent solved so the distribution's mean matches a target where
/// one is given), and the survival function is log-linear between anchors and
/// beyond the last one. The interpolation passes through every anchor
/// exactly.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct AnchoredCdf {
    t_min: f64,
    /// (percentile, value_seconds), strictly increasing in both coordinates.
    anchors: Vec<(f64, f64)>,
    /// survival decay rate on each inter-anchor segment, then the tail rate
    rates: Vec<f64>,
    rise_exponent: f64,
    mean_target: Option<f64>,
}

impl AnchoredCdf {
    pub fn new(t_min: f64, anchors: Vec<(f64, f64)>, mean_target: Option<f64>) -> Result<Self> {
        if anchors.len() < 2 {
            return Err(Error::InvalidInput("anchored CDF needs at least two anchors".into()));
        }
        if t_min < 0.0 {
            return Err(Error::InvalidInput("minimum latency must be >= 0".into()));
        }
        for w in anchors.windows(2) {
            if !(w[1].0 > w[0].0 && w[1].1 > w[0].1) {
                return Err(Error::InvalidInput(
                    "anchors must be strictly increasing in both percentile and value".into(),
                ));
            }
        }
        if anchors[0].1 <= t_min {
            return Err(Error::InvalidInput("first anchor must lie above the minimum latency".into()));
        }
        if !(anchors[0].0 > 0.0 && anchors[anchors.len() - 1].0 < 1.0) {
            return Err(Error::InvalidInput("anchor percentiles must lie in (0,1)".into()));
        }

        let mut rates = Vec::with_capacity(anchors.len());
        for w in anchors.windows(2) {
            let (p0, v0) = w[0];
            let (p1, v1) = w[1];
            rates.push(((1.0 - p0) / (1.0 - p1)).ln() / (v1 - v0));
        }
        // Tail continues at the last inter-anchor rate.
        let tail = *rates.last().unwrap();
        rates.push(tail);

        let mut this = Self {
            t_min,
            anchors,
            rates,
            rise_exponent: 1.0,
            mean_target,
        };
        if let Some(target) = mean_target {
            // Solve the rise exponent so the overall mean hits the target;
            // fall back to a linear rise when the target is out of reach
            // (the achieved mean is then reported by `mean()`).
            let (p1, v1) = this.anchors[0];
            let w = v1 - this.t_min;
            let fixed = this.t_min + this.mean_beyond_first_anchor();
            let c = target - fixed;
            if c > w * (1.0 - p1) + 1e-15 && c < w - 1e-15 {
                this.rise_exponent = p1 * w / (w - c) - 1.0;
            }
        }
        Ok(this)
    }

    fn mean_beyond_first_anchor(&self) -> f64 {
        let mut m = 0.0;
        for (i, w) in self.anchors.windows(2).enumerate() {
            let s0 = 1.0 - w[0].0;
            let s1 = 1.0 - w[1].0;
            m += (s0 - s1) / self.rates[i];
        }
        let s_last = 1.0 - self.anchors.last().unwrap().0;
        m += s_last / *self.rates.last().unwrap();
        m
    }

    pub fn cdf(&self, t: f64) -> f64 {
        if t <= self.t_min {
            return 0.0;
        }
        let (p1, v1) = self.anchors[0];
        if t <= v1 {
            return p1 * ((t - self.t_min) / (v1 - self.t_min)).powf(self.rise_exponent);
        }
        for (i, w) in self.anchors.windows(2).enumerate() {
            let (p0, v0) = w[0];
            let (_, vn) = w[1];
            if t <= vn {
                return 1.0 - (1.0 - p0) * (-(self.rates[i]) * (t - v0)).exp();
            }
        }
        let (pn, vn) = *self.anchors.last().unwrap();
        1.0 - (1.0 - pn) * (-(*self.rates.last().unwrap()) * (t - vn)).exp()
    }

    /// Exact quantile; reproduces every anchor value at its anchor percentile.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0 < p && p < 1.0) {
            return Err(Error::InvalidInput(format!("percentile p={p} outside (0,1)")));
        }
        let (p1, v1) = self.anchors[0];
        if p <= p1 {
            return Ok(self.t_min + (v1 - self.t_min) * (p / p1).powf(1.0 / self.rise_exponent));
        }
        for (i, w) in self.anchors.windows(2).enumerate() {
            let (p0, v0) = w[0];
            let (pn, _) = w[1];
            if p <= pn {
                return Ok(v0 + ((1.0 - p0) / (1.0 - p)).ln() / self.rates[i]);
            }
        }
        let (pn, vn) = *self.anchors.last().unwrap();
        Ok(vn + ((1.0 - pn) / (1.0 - p)).ln() / *self.rates.last().unwrap())
    }

    /// Closed-form mean of the interpolated distribution.
    pub fn mean(&self) -> f64 {
        let (p1, v1) = self.anchors[0];
        let w = v1 - self.t_min;
        self.t_min + w * (1.0 - p1 / (self.rise_exponent + 1.0)) + self.mean_beyond_first_anchor()
    }

    /// The mean the caller asked for, when one was given. `mean()` reports
    /// what the interpolation actually achieves.
    pub fn mean_target(&self) -> Option<f64> {
        self.mean_target
    }

    /// Scale the whole distribution by a positive factor (e.g. 0.5 to turn a
    /// round-trip distribution into a one-way one).
    pub fn scale(&self, factor: f64) -> Result<Self> {
        if factor.is_nan() || factor <= 0.0 {
            return Err(Error::InvalidInput("scale factor must be > 0".into()));
        }
        Ok(Self {
            t_min: self.t_min * factor,
            anchors: self.anchors.iter().map(|&(p, v)| (p, v * factor)).collect(),
            rates: self.rates.iter().map(|r| r / factor).collect(),
            rise_exponent: self.rise_exponent,
            mean_target: self.mean_target.map(|m| m * factor),
        })
    }

    pub fn shift_by(&self, dt: f64) -> Self {
        Self {
            t_min: self.t_min + dt,
            anchors: self.anchors.iter().map(|&(p, v)| (p, v + dt)).collect(),
            rates: self.rates.clone(),
            rise_exponent: self.rise_exponent,
            mean_target: self.mean_target.map(|m| m + dt),
        }
    }

    pub fn anchors(&self) -> &[(f64, f64)] {
        &self.anchors
    }
}

/// A probability distribution over one-way or round-trip latency.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum LatencyDistribution {
    Deterministic { value: f64 },
    /// Deterministic shift plus an exponential excess (the transport-network
    /// latency shape: propagation and processing in the shift, the summed
    /// queueing terms as the exponential mean).
    ShiftedExponential { shift: f64, mean_excess: f64 },
    Uniform { lo: f64, hi: f64 },
    /// One-way M/D/1 transit: deterministic 2/mu (processing + transmission)
    /// plus `deterministic_extra`, plus the M/D/1 waiting time.
    Md1Transit { lambda: f64, mu: f64, deterministic_extra: f64 },
    Empirical(EmpiricalCdf),
    /// Only summary statistics are known (radio-latency table rows).
    Tabulated { mean: f64, p90: Option<f64>, p9999: Option<f64> },
    /// Percentile-anchored empirical model (Internet, peering points).
    Anchored(AnchoredCdf),
}

impl LatencyDistribution {
    pub fn deterministic(value: f64) -> Self {
        LatencyDistribution::Deterministic { value }
    }

    pub fn mean(&self) -> f64 {
        match self {
            Self::Deterministic { value } => *value,
            Self::ShiftedExponential { shift, mean_excess } => shift + mean_excess,
            Self::Uniform { lo, hi } => 0.5 * (lo + hi),
            Self::Md1Transit { lambda, mu, deterministic_extra } => {
                deterministic_extra + 2.0 / mu + queueing::md1_wait_mean_unchecked(*lambda, *mu)
            }
            Self::Empirical(e) => e.mean(),
            Self::Tabulated { mean, .. } => *mean,
            Self::Anchored(a) => a.mean(),
        }
    }

    pub fn cdf(&self, t: f64) -> Result<f64> {
        match self {
            Self::Deterministic { value } => Ok(if t >= *value { 1.0 } else { 0.0 }),
            Self::ShiftedExponential { shift, mean_excess } => {
                if t < *shift {
                    Ok(0.0)
                } else if *mean_excess <= 0.0 {
                    Ok(1.0)
                } else {
                    Ok(1.0 - (-(t - shift) / mean_excess).exp())
                }
            }
            Self::Uniform { lo, hi } => {
                if t < *lo {
                    Ok(0.0)
                } else if t >= *hi {
                    Ok(1.0)
                } else {
                    Ok((t - lo) / (hi - lo))
                }
            }
            Self::Md1Transit { lambda, mu, deterministic_extra } => {
                let det = deterministic_extra + 2.0 / mu;
                if t < det {
                    Ok(0.0)
                } else {
                    queueing::md1_wait_cdf(*lambda, *mu, t - det)
                }
            }
            Self::Empirical(e) => Ok(e.cdf(t)),
            Self::Tabulated { .. } => Err(Error::InvalidInput(
                "tabulated distribution has no CDF; lift it to a parametric surrogate first".into(),
            )),
            Self::Anchored(a) => Ok(a.cdf(t)),
        }
    }

    /// Smallest latency value whose CDF reaches `p`.
    pub fn percentile(&self, p: f64) -> Result<f64> {
        if !(0.0 < p && p < 1.0) {
            return Err(Error::InvalidInput(format!("percentile p={p} outside (0,1)")));
        }
        match self {
            Self::Deterministic { value } => Ok(*value),
            Self::ShiftedExponential { shift, mean_excess } => {
                Ok(shift + mean_excess * (1.0 / (1.0 - p)).ln())
            }
            Self::Uniform { lo, hi } => Ok(lo + p * (hi - lo)),
            Self::Md1Transit { lambda, mu, deterministic_extra } => {
                let det = deterministic_extra + 2.0 / mu;
                let grid = queueing::md1_wait_grid(*lambda, *mu, 1e-7)?;
                Ok(det + grid.percentile(p)?)
            }
            Self::Empirical(e) => e.percentile(p),
            Self::Tabulated { p90, p9999, .. } => {
                if (p - 0.90).abs() < 1e-9 {
                    p90.ok_or(Error::UnsupportedPercentile { requested: p, available: available_tabulated(*p90, *p9999) })
                } else if (p - 0.9999).abs() < 1e-9 {
                    p9999.ok_or(Error::UnsupportedPercentile { requested: p, available: available_tabulated(*p90, *p9999) })
                } else {
                    Err(Error::UnsupportedPercentile { requested: p, available: available_tabulated(*p90, *p9999) })
                }
            }
            Self::Anchored(a) => a.quantile(p),
        }
    }

    pub fn shift_by(&self, dt: f64) -> Self {
        match self {
            Self::Deterministic { value } => Self::Deterministic { value: value + dt },
            Self::ShiftedExponential { shift, mean_excess } => Self::ShiftedExponential {
                shift: shift + dt,
                mean_excess: *mean_excess,
            },
            Self::Uniform { lo, hi } => Self::Uniform { lo: lo + dt, hi: hi + dt },
            Self::Md1Transit { lambda, mu, deterministic_extra } => Self::Md1Transit {
                lambda: *lambda,
                mu: *mu,
                deterministic_extra: deterministic_extra + dt,
            },
            Self::Empirical(e) => Self::Empirical(e.shift_by(dt)),
            Self::Tabulated { mean, p90, p9999 } => Self::Tabulated {
                mean: mean + dt,
                p90: p90.map(|v| v + dt),
                p9999: p9999.map(|v| v + dt),
            },
            Self::Anchored(a) => Self::Anchored(a.shift_by(dt)),
        }
    }
}

fn available_tabulated(p90: Option<f64>, p9999: Option<f64>) -> Vec<f64> {
    let mut v = Vec::new();
    if p90.is_some() {
        v.push(0.90);
    }
    if p9999.is_some() {
        v.push(0.9999);
    }
    v
}

/// Parameters of the numerical convolution grid.
#[derive(Debug, Clone, Copy)]
pub struct ConvolveParams {
    /// Uniform grid step in seconds.
    pub step: f64,
    /// Extend the horizon until both input CDFs reach 1 - tail_eps.
    pub tail_eps: f64,
    /// Hard cap on grid cells per input.
    pub max_cells: usize,
}

impl Default for ConvolveParams {
    fn default() -> Self {
        Self { step: 1e-5, tail_eps: 1e-6, max_cells: 1 << 22 }
    }
}

/// Mass representation of a distribution on a uniform grid: an atom at zero
/// plus one uniform mass per cell ((k-1)h, kh].
#[derive(Debug, Clone)]
pub(crate) struct GridPmf {
    pub step: f64,
    pub atom0: f64,
    pub cells: Vec<f64>,
}

impl GridPmf {
    /// Sample a distribution onto the grid. Returns the pmf and the CDF mass
    /// actually captured (< 1 - tail_eps means the horizon budget ran out).
    pub fn sample(d: &LatencyDistribution, params: &ConvolveParams) -> Result<(Self, f64)> {
        let horizon = horizon_for(d, params.tail_eps)?;
        let n = ((horizon / params.step).ceil() as usize).max(1).min(params.max_cells);
        let atom0 = d.cdf(0.0)?;
        let mut cells = Vec::with_capacity(n);
        let mut prev = atom0;
        for k in 1..=n {
            let f = d.cdf(k as f64 * params.step)?;
            cells.push((f - prev).max(0.0));
            prev = f;
        }
        Ok((Self { step: params.step, atom0, cells }, prev))
    }

    pub fn from_empirical_rebin(e: &EmpiricalCdf, step: f64, max_cells: usize) -> (Self, f64) {
        let last = *e.ts.last().unwrap();
        let n = ((last / step).ceil() as usize).max(1).min(max_cells);
        let atom0 = e.cdf(0.0);
        let mut cells = Vec::with_capacity(n);
        let mut prev = atom0;
        for k in 1..=n {
            let f = e.cdf(k as f64 * step);
            cells.push((f - prev).max(0.0));
            prev = f;
        }
        (Self { step, atom0, cells }, prev)
    }

    /// Exact convolution of two piecewise-uniform grid pmfs on the same step.
    /// Each cell-by-cell product is a triangular density spanning two cells;
    /// its mass splits evenly, which keeps the result's CDF exact at grid
    /// points and the operation symmetric.
    pub fn convolve(&self, other: &GridPmf) -> GridPmf {
        assert!((self.step - other.step).abs() < 1e-18 * (1.0 + self.step));
        let n = self.cells.len();
        let m = other.cells.len();
        let atom0 = self.atom0 * other.atom0;
        let mut cells = vec![0.0f64; n + m];
        // atom x cell terms keep their position
        for (j, &b) in other.cells.iter().enumerate() {
            cells[j] += self.atom0 * b;
        }
        for (i, &a) in self.cells.iter().enumerate() {
            cells[i] += other.atom0 * a;
        }
        // cell x cell: triangular over cells i+j-1 and i+j (1-based)
        let mut conv = vec![0.0f64; n + m + 1];
        for (i, &a) in self.cells.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in other.cells.iter().enumerate() {
                conv[i + j + 2] += a * b;
            }
        }
        for (k, cell) in cells.iter_mut().enumerate() {
            let idx = k + 1; // 1-based cell index
            let mut add = 0.0;
            if idx < conv.len() {
                add += 0.5 * conv[idx];
            }
            if idx + 1 < conv.len() {
                add += 0.5 * conv[idx + 1];
            }
            *cell += add;
        }
        GridPmf { step: self.step, atom0, cells }
    }

    pub fn to_empirical(&self) -> EmpiricalCdf {
        let mut ts = Vec::with_capacity(self.cells.len() + 1);
        let mut fs = Vec::with_capacity(self.cells.len() + 1);
        ts.push(0.0);
        fs.push(self.atom0);
        let mut acc = self.atom0;
        for (k, &c) in self.cells.iter().enumerate() {
            acc += c;
            ts.push((k + 1) as f64 * self.step);
            fs.push(acc.min(1.0));
        }
        EmpiricalCdf { ts, fs }
    }
}

/// Latency value below which the distribution has (almost) no mass left above.
fn horizon_for(d: &LatencyDistribution, tail_eps: f64) -> Result<f64> {
    match d {
        LatencyDistribution::Empirical(e) => Ok(*e.ts.last().unwrap()),
        _ => d.percentile(1.0 - tail_eps),
    }
}

/// Numerical convolution of two latency distributions on a uniform grid.
///
/// Deterministic inputs are folded in as exact shifts. The general path
/// samples both inputs to the grid (extending the horizon until each carries
/// at least 1 - tail_eps of mass) and returns an empirical CDF.
pub fn convolve(a: &LatencyDistribution, b: &LatencyDistribution) -> Result<LatencyDistribution> {
    convolve_with(a, b, &ConvolveParams::default())
}

pub fn convolve_with(
    a: &LatencyDistribution,
    b: &LatencyDistribution,
    params: &ConvolveParams,
) -> Result<LatencyDistribution> {
    use LatencyDistribution as L;
    match (a, b) {
        (L::Deterministic { value }, other) => Ok(other.shift_by(*value)),
        (other, L::Deterministic { value }) => Ok(other.shift_by(*value)),
        (L::Tabulated { .. }, _) | (_, L::Tabulated { .. }) => Err(Error::InvalidInput(
            "tabulated distributions cannot be convolved; lift to a surrogate first".into(),
        )),
        _ => {
            let (pa, mass_a) = GridPmf::sample(a, params)?;
            let (pb, mass_b) = GridPmf::sample(b, params)?;
            // Analytic inputs must reach the target tail within the cell
            // budget. Empirical inputs carry their construction tail (and
            // chains of convolutions accumulate it), so they get slack.
            let limit = |d: &LatencyDistribution| match d {
                L::Empirical(_) => 1.0 - 256.0 * params.tail_eps,
                _ => 1.0 - 1.5 * params.tail_eps,
            };
            if mass_a < limit(a) || mass_b < limit(b) {
                return Err(Error::HorizonExhausted { achieved_mass: mass_a.min(mass_b) });
            }
            Ok(LatencyDistribution::Empirical(pa.convolve(&pb).to_empirical()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_convolution_is_exact() {
        let a = LatencyDistribution::deterministic(1.5e-3);
        let b = LatencyDistribution::deterministic(2.5e-3);
        match convolve(&a, &b).unwrap() {
            LatencyDistribution::Deterministic { value } => assert_eq!(value, 4.0e-3),
            other => panic!("expected deterministic, got {other:?}"),
        }
    }

    #[test]
    fn deterministic_zero_is_identity() {
        let x = LatencyDistribution::ShiftedExponential { shift: 8.3e-4, mean_excess: 5.13e-5 };
        let y = convolve(&LatencyDistribution::deterministic(0.0), &x).unwrap();
        for &t in &[0.0, 8.3e-4, 1e-3, 2e-3, 5e-3] {
            assert!((x.cdf(t).unwrap() - y.cdf(t).unwrap()).abs() < 1e-6);
        }
    }

    #[test]
    fn shifted_exp_pair_matches_erlang_two() {
        // X + Y with X, Y ~ Exp(mean m): CDF 1 - e^{-t/m} (1 + t/m)
        let m = 5e-3;
        let x = LatencyDistribution::ShiftedExponential { shift: 0.0, mean_excess: m };
        let conv = convolve(&x, &x).unwrap();
        let mut worst = 0.0f64;
        for k in 1..=2000 {
            let t = k as f64 * 4e-5;
            let exact = 1.0 - (-t / m).exp() * (1.0 + t / m);
            let got = conv.cdf(t).unwrap();
            worst = worst.max((exact - got).abs());
        }
        assert!(worst < 1e-4, "max CDF deviation {worst}");
    }

    #[test]
    fn convolution_commutes_within_grid_tolerance() {
        let a = LatencyDistribution::ShiftedExponential { shift: 2e-4, mean_excess: 1.2e-3 };
        let b = LatencyDistribution::Uniform { lo: 2.5e-4, hi: 7.5e-4 };
        let ab = convolve(&a, &b).unwrap();
        let ba = convolve(&b, &a).unwrap();
        for k in 0..1500 {
            let t = k as f64 * 1e-5;
            assert!((ab.cdf(t).unwrap() - ba.cdf(t).unwrap()).abs() < 1e-6);
        }
    }

    #[test]
    fn percentile_closed_forms() {
        // Table-anchored shifted-exponential percentile
        let d = LatencyDistribution::ShiftedExponential { shift: 0.83e-3, mean_excess: 0.0513e-3 };
        let p90 = d.percentile(0.90).unwrap();
        assert!((p90 - 0.948e-3).abs() < 1e-6, "p90 = {p90}");

        let u = LatencyDistribution::Uniform { lo: 0.25e-3, hi: 0.75e-3 };
        let p = u.percentile(0.9999).unwrap();
        assert!((p - 0.74995e-3).abs() < 1e-9);

        let det = LatencyDistribution::deterministic(2e-3);
        for &p in &[0.1, 0.5, 0.9, 0.9999] {
            assert_eq!(det.percentile(p).unwrap(), 2e-3);
        }
    }

    #[test]
    fn percentile_is_nondecreasing_in_p() {
        let dists = vec![
            LatencyDistribution::deterministic(1e-3),
            LatencyDistribution::ShiftedExponential { shift: 4e-4, mean_excess: 2.5e-5 },
            LatencyDistribution::Uniform { lo: 1e-4, hi: 9e-4 },
            LatencyDistribution::Md1Transit { lambda: 1.25e7, mu: 2.5e7, deterministic_extra: 0.0 },
            convolve(
                &LatencyDistribution::Uniform { lo: 0.0, hi: 1e-3 },
                &LatencyDistribution::ShiftedExponential { shift: 0.0, mean_excess: 5e-4 },
            )
            .unwrap(),
        ];
        for d in &dists {
            let mut prev = f64::NEG_INFINITY;
            for i in 1..200 {
                let p = i as f64 / 200.0;
                let q = d.percentile(p).unwrap();
                assert!(q >= prev - 1e-15, "percentile decreased at p={p} for {d:?}");
                prev = q;
            }
        }
    }

    #[test]
    fn grid_mean_matches_closed_form() {
        let cases = vec![
            LatencyDistribution::ShiftedExponential { shift: 1e-3, mean_excess: 8e-4 },
            LatencyDistribution::Uniform { lo: 2e-4, hi: 1.4e-3 },
            LatencyDistribution::Anchored(
                AnchoredCdf::new(5e-5, vec![(0.90, 4.31e-4), (0.9999, 1.493e-3)], Some(3.06e-4))
                    .unwrap(),
            ),
        ];
        let params = ConvolveParams { step: 2e-6, tail_eps: 1e-7, max_cells: 1 << 24 };
        for d in &cases {
            let (pmf, _) = GridPmf::sample(d, &params).unwrap();
            let grid_mean = pmf.to_empirical().mean();
            let rel = (grid_mean - d.mean()).abs() / d.mean();
            assert!(rel < 1e-4, "grid mean {grid_mean} vs closed form {} (rel {rel})", d.mean());
        }
    }

    #[test]
    fn tabulated_supports_only_known_percentiles() {
        let t = LatencyDistribution::Tabulated { mean: 1.5e-3, p90: Some(2.0e-3), p9999: None };
        assert_eq!(t.percentile(0.90).unwrap(), 2.0e-3);
        assert!(matches!(t.percentile(0.9999), Err(Error::UnsupportedPercentile { .. })));
        assert!(matches!(t.percentile(0.5), Err(Error::UnsupportedPercentile { .. })));
    }

    #[test]
    fn anchored_cdf_reproduces_anchors_and_mean() {
        // Local peering-point shape
        let a = AnchoredCdf::new(
            5e-5,
            vec![(0.90, 4.31e-4), (0.9999, 1.493e-3)],
            Some(3.06e-4),
        )
        .unwrap();
        assert!((a.quantile(0.90).unwrap() - 4.31e-4).abs() < 1e-12);
        assert!((a.quantile(0.9999).unwrap() - 1.493e-3).abs() < 1e-12);
        assert!((a.mean() - 3.06e-4).abs() < 1e-9, "mean {}", a.mean());
        // CDF passes through anchors
        assert!((a.cdf(4.31e-4) - 0.90).abs() < 1e-12);
        assert!((a.cdf(1.493e-3) - 0.9999).abs() < 1e-12);
        // monotone
        let mut prev = -1.0;
        for k in 0..3000 {
            let f = a.cdf(k as f64 * 1e-6);
            assert!(f >= prev - 1e-15);
            prev = f;
        }

        // halving for one-way use
        let half = a.scale(0.5).unwrap();
        assert!((half.quantile(0.90).unwrap() - 2.155e-4).abs() < 1e-12);
        assert!((half.mean() - 1.53e-4).abs() < 1e-9);
    }

    #[test]
    fn horizon_exhaustion_reports_tail_mass() {
        let slow = LatencyDistribution::ShiftedExponential { shift: 0.0, mean_excess: 10.0 };
        let fast = LatencyDistribution::ShiftedExponential { shift: 0.0, mean_excess: 1e-4 };
        let params = ConvolveParams { step: 1e-3, tail_eps: 1e-6, max_cells: 1000 };
        match convolve_with(&slow, &fast, &params) {
            Err(Error::HorizonExhausted { achieved_mass }) => {
                assert!(achieved_mass < 1.0 - 1e-6);
            }
            other => panic!("expected horizon exhaustion, got {other:?}"),
        }
    }
}
