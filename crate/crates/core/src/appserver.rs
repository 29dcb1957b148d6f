//! V2X application-server forwarding latency, backlog detection and
//! minimum-processor dimensioning.
//!
//! The AS acts as a forwarder: processing one slot's worth of arrivals costs
//! eta_tt * B * theta cycles spread over the AS's aggregate capacity F, so
//! l_AS = eta_tt * B * theta / F with theta the per-bit forwarding cost.

use crate::dist::LatencyDistribution;
use crate::scenario::{DeploymentKind, Scenario, ThetaModel};
use crate::transport::lambda_as_ul;

/// Offered load and capacity at the AS.
#[derive(Debug, Clone, PartialEq)]
pub struct AsLoad {
    /// Uplink packet rate reaching the AS.
    pub lambda_as_ul: f64,
    /// Packets accumulated per radio slot: lambda_AS^UL * t_tt.
    pub eta_tt: f64,
    /// Aggregate compute capacity in cycles/s.
    pub f_total: f64,
    /// gNBs whose traffic this AS serves.
    pub aggregated_gnbs: u64,
}

/// Default fan-in per deployment: one cell site, one M1 group, or every gNB
/// under an M3.
pub fn default_aggregated_gnbs(s: &Scenario) -> u64 {
    match s.deployment {
        DeploymentKind::MecGnb => 1,
        DeploymentKind::MecM1 => s.topology.g as u64,
        DeploymentKind::MecCn | DeploymentKind::Centralized => s.topology.gnbs_per_m3(),
    }
}

pub fn as_load(s: &Scenario) -> AsLoad {
    let aggregated = s.as_profile.aggregated_gnbs.unwrap_or_else(|| default_aggregated_gnbs(s));
    // lambda_AS^UL approximates the UPF's uplink aggregate; an explicit
    // aggregation override scales from the per-gNB rate instead.
    let lambda = match s.as_profile.aggregated_gnbs {
        Some(n) => n as f64 * s.traffic.lambda_gnb_ul,
        None => lambda_as_ul(s),
    };
    AsLoad {
        lambda_as_ul: lambda,
        eta_tt: lambda * s.as_profile.t_tt_s,
        f_total: s.as_profile.total_capacity(),
        aggregated_gnbs: aggregated,
    }
}

/// Mean AS forwarding latency in seconds (theta at its mean).
pub fn as_mean(s: &Scenario) -> f64 {
    let load = as_load(s);
    load.eta_tt * s.traffic.b_bits * s.as_profile.theta_model.mean() / load.f_total
}

fn scaled_theta_distribution(s: &Scenario, mean_latency: f64) -> LatencyDistribution {
    if mean_latency == 0.0 {
        return LatencyDistribution::deterministic(0.0);
    }
    match s.as_profile.theta_model {
        ThetaModel::Uniform { lo, hi } => {
            let mid = 0.5 * (lo + hi);
            LatencyDistribution::Uniform {
                lo: mean_latency * lo / mid,
                hi: mean_latency * hi / mid,
            }
        }
        ThetaModel::Exponential { .. } => {
            LatencyDistribution::ShiftedExponential { shift: 0.0, mean_excess: mean_latency }
        }
    }
}

/// Distribution of the AS forwarding latency eta_tt * B * theta / F.
pub fn as_latency(s: &Scenario) -> LatencyDistribution {
    scaled_theta_distribution(s, as_mean(s))
}

/// The AS term used in end-to-end composition and dimensioning: the
/// worst-case operating point of a correctly dimensioned AS, whose mean
/// forwarding latency sits at the slot-duration bound t_tt (it must stay at
/// or below t_tt to avoid backlog, and the bound is taken as the budget).
/// With the default uniform theta and t_tt = 0.5 ms this yields the fixed
/// 0.70 / 0.74995 ms percentile pair regardless of load or deployment.
/// The flag reports whether the scenario's actual hardware would backlog
/// (its raw mean exceeds the bound).
pub fn as_latency_slot_bound(s: &Scenario) -> (LatencyDistribution, bool) {
    let would_backlog = as_mean(s) > s.as_profile.t_tt_s;
    (scaled_theta_distribution(s, s.as_profile.t_tt_s), would_backlog)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BacklogStatus {
    Stable,
    /// Mean forwarding latency exceeds the slot time, so each slot's batch
    /// arrives faster than it can be processed.
    Backlogged { mean_ms: f64 },
}

/// Packets backlog at the AS whenever the mean forwarding latency exceeds
/// the radio slot duration.
pub fn backlog_check(s: &Scenario) -> BacklogStatus {
    let mean = as_mean(s);
    if mean > s.as_profile.t_tt_s {
        BacklogStatus::Backlogged { mean_ms: mean * 1e3 }
    } else {
        BacklogStatus::Stable
    }
}

/// Smallest processor count that avoids backlog:
/// ceil(eta_tt * B * mean(theta) / (t_tt * units * frequency)), at least 1.
pub fn min_processors(s: &Scenario) -> u32 {
    let load = as_load(s);
    let per_processor =
        s.as_profile.parallel_units_per_processor as f64 * s.as_profile.frequency_hz;
    let needed = load.eta_tt * s.traffic.b_bits * s.as_profile.theta_model.mean()
        / (s.as_profile.t_tt_s * per_processor);
    (needed.ceil() as u32).max(1)
}
