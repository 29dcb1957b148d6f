//! Internet (UPF-to-AS) and inter-MNO peering-point latency as empirical
//! distributions calibrated to measured anchor points.
//!
//! Only the cited anchor values are treated as ground truth; between them the
//! CDF uses the monotone piecewise shape of [`AnchoredCdf`] (log-linear
//! survival, the simplest form consistent with heavy-tailed Internet RTTs).
//! Users with a fully digitized measurement curve can load it as a
//! two-column CDF file instead.

use crate::dist::{AnchoredCdf, EmpiricalCdf, LatencyDistribution};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatencyMode {
    RoundTrip,
    OneWay,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PeeringKind {
    Local,
    Remote,
}

impl PeeringKind {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Local => "local",
            Self::Remote => "remote",
        }
    }
}

/// Round-trip Internet latency between the PSA UPF and a cloud AS in the same
/// country: 21 ms at the 90th percentile, 43 ms at the 99.99th, 10.3 ms mean.
/// One-way mode halves the round-trip values.
pub fn internet_latency(mode: LatencyMode) -> LatencyDistribution {
    let rt = AnchoredCdf::new(1.0e-3, vec![(0.90, 21.0e-3), (0.9999, 43.0e-3)], Some(10.3e-3))
        .expect("internet anchor set is valid");
    let cdf = match mode {
        LatencyMode::RoundTrip => rt,
        LatencyMode::OneWay => rt.scale(0.5).expect("positive factor"),
    };
    LatencyDistribution::Anchored(cdf)
}

/// Peering-point latency between operators: direct (local/private)
/// interconnects or remote (public) peering through an Internet exchange.
pub fn peering_latency(kind: PeeringKind) -> LatencyDistribution {
    let cdf = match kind {
        PeeringKind::Local => {
            AnchoredCdf::new(0.05e-3, vec![(0.90, 0.431e-3), (0.9999, 1.493e-3)], Some(0.306e-3))
        }
        PeeringKind::Remote => {
            AnchoredCdf::new(1.0e-3, vec![(0.90, 29.867e-3), (0.9999, 99.212e-3)], Some(13.001e-3))
        }
    }
    .expect("peering anchor sets are valid");
    LatencyDistribution::Anchored(cdf)
}

/// Load a full empirical CDF from two-column CSV text. `t_unit_s` scales the
/// first column into seconds (1e-3 for the milliseconds used by the external
/// datasets, 1.0 for raw seconds).
pub fn load_cdf_csv(text: &str, t_unit_s: f64) -> Result<LatencyDistribution> {
    let mut ts = Vec::new();
    let mut fs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split(',').map(str::trim);
        let (t, f) = match (parts.next(), parts.next()) {
            (Some(t), Some(f)) => (t, f),
            _ => return Err(Error::Format(format!("CDF CSV line {}: expected `t,F`", i + 1))),
        };
        if i == 0 && t.parse::<f64>().is_err() {
            continue; // header line
        }
        let t: f64 =
            t.parse().map_err(|e| Error::Format(format!("CDF CSV line {}: {e}", i + 1)))?;
        let f: f64 =
            f.parse().map_err(|e| Error::Format(format!("CDF CSV line {}: {e}", i + 1)))?;
        ts.push(t * t_unit_s);
        fs.push(f);
    }
    Ok(LatencyDistribution::Empirical(EmpiricalCdf::new(ts, fs)?))
}
