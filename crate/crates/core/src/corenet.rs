//! Core-network latency: a single local UPF modeled as an M/D/1 queue for
//! the MEC deployments, or a gateway-UPF chain with S intermediate nodes for
//! the Centralized one, plus core propagation.

use crate::dist::{EmpiricalCdf, GridPmf, LatencyDistribution};
use crate::error::{Direction, Error, Result, UnstableNode};
use crate::queueing;
use crate::scenario::{DeploymentKind, Scenario};
use crate::transport::lambda_as_ul;

/// Rates and path shape of the scenario's core-network segment.
#[derive(Debug, Clone, PartialEq)]
pub struct CnPath {
    pub deployment: DeploymentKind,
    pub lambda_upf_ul: f64,
    pub lambda_upf_dl: f64,
    pub mu_upf_ul: f64,
    pub mu_upf_dl: f64,
    /// Intermediate UPFs between the two gateways (Centralized only).
    pub s_intermediate: u32,
    pub d_cn_km: f64,
}

impl CnPath {
    /// Queues traversed per direction (each contributes an M/D/1 wait).
    pub fn queues_per_direction(&self) -> u32 {
        match self.deployment {
            DeploymentKind::Centralized => 2,
            _ => 1,
        }
    }

    /// Deterministic transit per direction: 2/mu per queued UPF plus 2/mu
    /// per intermediate node.
    fn det_one_way(&self, mu: f64) -> f64 {
        (self.queues_per_direction() as f64 + self.s_intermediate as f64) * 2.0 / mu
    }
}

/// Arrival and service rates at the user-plane function(s). The UPF sees the
/// uplink aggregate of the node it attaches to (gNB, M1 or M3); its downlink
/// arrival rate is the AS departure rate M * lambda_AS^UL. MEC UPFs serve the
/// UPF-AS link, the Centralized gateways serve core links.
pub fn cn_rates(s: &Scenario) -> CnPath {
    let t = &s.topology;
    let b = s.traffic.b_bits;
    let lambda_ul = lambda_as_ul(s);
    let lambda_dl = s.traffic.m_copies as f64 * lambda_ul;
    let (c_link, s_intermediate, d_cn_km) = match s.deployment {
        DeploymentKind::Centralized => {
            let s_nodes = (t.d_cn_km / t.d_cn_max_km).floor() as i64 - 1;
            (t.c_cn, s_nodes.max(0) as u32, t.d_cn_km)
        }
        _ => (t.c_upf_as, 0, 0.0),
    };
    CnPath {
        deployment: s.deployment,
        lambda_upf_ul: lambda_ul,
        lambda_upf_dl: lambda_dl,
        mu_upf_ul: s.alpha.alpha_ul * c_link / b,
        mu_upf_dl: s.alpha.alpha_dl * c_link / b,
        s_intermediate,
        d_cn_km,
    }
}

fn check_cn_stable(path: &CnPath) -> Result<()> {
    let mut unstable = Vec::new();
    if path.lambda_upf_ul >= path.mu_upf_ul {
        unstable.push(UnstableNode {
            node: "UPF".into(),
            direction: Direction::Ul,
            rho: path.lambda_upf_ul / path.mu_upf_ul,
        });
    }
    if path.lambda_upf_dl >= path.mu_upf_dl {
        unstable.push(UnstableNode {
            node: "UPF".into(),
            direction: Direction::Dl,
            rho: path.lambda_upf_dl / path.mu_upf_dl,
        });
    }
    if unstable.is_empty() {
        Ok(())
    } else {
        Err(Error::UnstablePath { nodes: unstable })
    }
}

/// Mean one-way transit per direction, in seconds: `(UL, DL)`.
///
/// MEC deployments: 2/mu + lambda/(2 mu^2 (1 - rho)) at the local UPF.
/// Centralized: twice that (both gateway UPFs queue) plus 2/mu per
/// intermediate node, which only adds processing and transmission time.
pub fn cn_transit_means(s: &Scenario) -> Result<(f64, f64)> {
    let path = cn_rates(s);
    check_cn_stable(&path)?;
    let one = |lambda: f64, mu: f64, path: &CnPath| -> Result<f64> {
        let per_queue = queueing::md1_transit_mean(lambda, mu)?;
        Ok(path.queues_per_direction() as f64 * per_queue
            + path.s_intermediate as f64 * 2.0 / mu)
    };
    Ok((one(path.lambda_upf_ul, path.mu_upf_ul, &path)?, one(path.lambda_upf_dl, path.mu_upf_dl, &path)?))
}

/// Round-trip core-network mean, including propagation both ways.
pub fn cn_mean_rt(s: &Scenario) -> Result<f64> {
    let (ul, dl) = cn_transit_means(s)?;
    let path = cn_rates(s);
    Ok(ul + dl + 2.0 * path.d_cn_km / s.topology.v_km_s)
}

/// One-way transit distribution for a direction (no propagation).
pub fn cn_transit_one_way(s: &Scenario, direction: Direction) -> Result<LatencyDistribution> {
    let path = cn_rates(s);
    check_cn_stable(&path)?;
    let (lambda, mu) = match direction {
        Direction::Ul => (path.lambda_upf_ul, path.mu_upf_ul),
        Direction::Dl => (path.lambda_upf_dl, path.mu_upf_dl),
    };
    match s.deployment {
        DeploymentKind::Centralized => {
            let det = path.det_one_way(mu);
            let waits = vec![(lambda, mu), (lambda, mu)];
            Ok(wait_sum_distribution(&waits, det, 8192)?)
        }
        _ => Ok(LatencyDistribution::Md1Transit { lambda, mu, deterministic_extra: 0.0 }),
    }
}

/// Round-trip core-network latency distribution: the deterministic floor
/// (propagation plus per-node service and processing) convolved with the
/// M/D/1 waiting times of every queued UPF on the path.
pub fn cn_latency(s: &Scenario) -> Result<LatencyDistribution> {
    cn_latency_with_resolution(s, 8192)
}

/// Same distribution on a coarser grid; the dimensioning search uses a lower
/// resolution because its feasibility margins are milliseconds wide.
pub fn cn_latency_with_resolution(
    s: &Scenario,
    target_cells: usize,
) -> Result<LatencyDistribution> {
    let path = cn_rates(s);
    check_cn_stable(&path)?;
    let det_rt = 2.0 * path.d_cn_km / s.topology.v_km_s
        + path.det_one_way(path.mu_upf_ul)
        + path.det_one_way(path.mu_upf_dl);
    let per_dir = path.queues_per_direction() as usize;
    let mut waits = Vec::new();
    for _ in 0..per_dir {
        waits.push((path.lambda_upf_ul, path.mu_upf_ul));
    }
    for _ in 0..per_dir {
        waits.push((path.lambda_upf_dl, path.mu_upf_dl));
    }
    wait_sum_distribution(&waits, det_rt, target_cells)
}

/// Distribution of `det + sum of M/D/1 waits`, built on a grid sized to the
/// wait scales (the public convolution grid is far too coarse for
/// sub-microsecond UPF waits).
fn wait_sum_distribution(
    waits: &[(f64, f64)],
    det: f64,
    target_cells: usize,
) -> Result<LatencyDistribution> {
    const TAIL_EPS: f64 = 1e-7;

    // Degenerate case: no arrivals, waits are identically zero.
    if waits.iter().all(|&(l, _)| l == 0.0) {
        return Ok(LatencyDistribution::deterministic(det));
    }

    // Build one grid per distinct (lambda, mu) pair.
    let mut grids: Vec<((f64, f64), EmpiricalCdf)> = Vec::new();
    for &(l, m) in waits {
        if !grids.iter().any(|(k, _)| k.0 == l && k.1 == m) {
            grids.push(((l, m), queueing::md1_wait_grid(l, m, TAIL_EPS)?));
        }
    }
    let horizon: f64 = waits
        .iter()
        .map(|&(l, m)| {
            let g = &grids.iter().find(|(k, _)| k.0 == l && k.1 == m).unwrap().1;
            *g.ts.last().unwrap()
        })
        .sum();
    if horizon <= 0.0 {
        return Ok(LatencyDistribution::deterministic(det));
    }
    let step = horizon / target_cells as f64;

    let mut acc: Option<GridPmf> = None;
    for &(l, m) in waits {
        let g = &grids.iter().find(|(k, _)| k.0 == l && k.1 == m).unwrap().1;
        let (pmf, _) = GridPmf::from_empirical_rebin(g, step, 2 * target_cells);
        acc = Some(match acc {
            None => pmf,
            Some(a) => a.convolve(&pmf),
        });
    }
    let emp = acc.unwrap().to_empirical();
    Ok(LatencyDistribution::Empirical(emp.shift_by(det)))
}

/// (mean, p90, p9999) of the round-trip CN latency in seconds; the mean is
/// the closed-form value, the percentiles come from the numerical
/// distribution.
pub fn cn_stats(s: &Scenario) -> Result<(f64, f64, f64)> {
    let mean = cn_mean_rt(s)?;
    let dist = cn_latency(s)?;
    Ok((mean, dist.percentile(0.90)?, dist.percentile(0.9999)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{reference_scenario, ServiceProfile};

    fn scenario(dep: DeploymentKind, lambda: f64, alpha: f64) -> Scenario {
        reference_scenario(dep, ServiceProfile::lloa(), lambda, alpha).unwrap()
    }

    #[test]
    fn upf_arrival_rates_follow_the_attachment_point() {
        let s = scenario(DeploymentKind::MecCn, 2080.0, 0.01);
        let path = cn_rates(&s);
        assert_eq!(path.lambda_upf_ul, 1728.0 * 2080.0);
        assert_eq!(path.lambda_upf_dl, path.lambda_upf_ul); // M = 1

        let s = scenario(DeploymentKind::MecGnb, 2080.0, 0.01);
        let path = cn_rates(&s);
        assert_eq!(path.lambda_upf_ul, 2080.0);
        assert_eq!(path.d_cn_km, 0.0);
        assert_eq!(path.s_intermediate, 0);
    }

    #[test]
    fn centralized_intermediate_count_follows_floor_rule() {
        let s = scenario(DeploymentKind::Centralized, 2080.0, 0.01);
        assert_eq!(cn_rates(&s).s_intermediate, 1);
        let mut s2 = s.clone();
        s2.topology.d_cn_max_km = 40.0; // floor(200/40) - 1 = 4
        assert_eq!(cn_rates(&s2).s_intermediate, 4);
        s2.topology.d_cn_max_km = 300.0; // floor < 1 clamps to 0
        assert_eq!(cn_rates(&s2).s_intermediate, 0);
    }

    #[test]
    fn centralized_round_trip_mean_matches_published_value() {
        let s = scenario(DeploymentKind::Centralized, 2080.0, 0.01);
        let mean_ms = cn_mean_rt(&s).unwrap() * 1e3;
        assert!((mean_ms - 2.0006).abs() / 2.0006 < 0.02, "mean {mean_ms}");
        // propagation floor
        assert!(mean_ms >= 2.0);
    }

    #[test]
    fn mec_round_trip_mean_is_sub_microsecond_at_high_alpha() {
        let s = scenario(DeploymentKind::MecGnb, 2080.0, 0.1);
        let mean_ms = cn_mean_rt(&s).unwrap() * 1e3;
        // ~2 * 2/mu: 0.000016 ms; the published table prints the one-way 0.00001
        assert!(mean_ms > 0.5e-5 && mean_ms < 2.0e-5, "mean {mean_ms}");
    }

    #[test]
    fn mec_mean_equals_per_direction_transit_sum() {
        for dep in [DeploymentKind::MecGnb, DeploymentKind::MecM1, DeploymentKind::MecCn] {
            let s = scenario(dep, 2080.0, 0.01);
            let path = cn_rates(&s);
            let (ul, dl) = cn_transit_means(&s).unwrap();
            let expect_ul =
                queueing::md1_transit_mean(path.lambda_upf_ul, path.mu_upf_ul).unwrap();
            let expect_dl =
                queueing::md1_transit_mean(path.lambda_upf_dl, path.mu_upf_dl).unwrap();
            assert!((ul - expect_ul).abs() / expect_ul < 1e-9);
            assert!((dl - expect_dl).abs() / expect_dl < 1e-9);
            let rt = cn_mean_rt(&s).unwrap();
            assert!((rt - (ul + dl)).abs() / rt < 1e-9, "{dep}");
        }
    }

    #[test]
    fn distribution_mean_agrees_with_closed_form() {
        for (dep, alpha) in [
            (DeploymentKind::MecCn, 0.01),
            (DeploymentKind::Centralized, 0.01),
            (DeploymentKind::MecGnb, 0.001),
        ] {
            let s = scenario(dep, 8320.0, alpha);
            let closed = cn_mean_rt(&s).unwrap();
            let grid = cn_latency(&s).unwrap().mean();
            let rel = (grid - closed).abs() / closed;
            assert!(rel < 5e-3, "{dep} alpha={alpha}: grid {grid} vs closed {closed}");
        }
    }

    #[test]
    fn near_zero_traffic_collapses_to_the_deterministic_floor() {
        let mut s = scenario(DeploymentKind::Centralized, 2080.0, 0.01);
        s.traffic.lambda_gnb_ul = 1e-6;
        let path = cn_rates(&s);
        let floor = 2.0 * path.d_cn_km / s.topology.v_km_s
            + 2.0 * (2.0 + path.s_intermediate as f64) * 2.0 / path.mu_upf_ul;
        let mean = cn_mean_rt(&s).unwrap();
        assert!((mean - floor).abs() / floor < 1e-6);
    }

    #[test]
    fn instability_is_reported_per_direction() {
        let s = scenario(DeploymentKind::Centralized, 2080.0, 0.001);
        match cn_latency(&s) {
            Err(Error::UnstablePath { nodes }) => {
                assert!(nodes.iter().any(|n| n.node == "UPF"));
            }
            other => panic!("expected instability, got {other:?}"),
        }
    }

    #[test]
    fn cn_mean_monotone_in_alpha_and_lambda() {
        let mut prev = f64::INFINITY;
        for i in 0..20 {
            let alpha = 0.002 + 0.001 * i as f64;
            let m = cn_mean_rt(&scenario(DeploymentKind::MecCn, 2080.0, alpha)).unwrap();
            assert!(m < prev);
            prev = m;
        }
        let mut prev = 0.0;
        for i in 0..20 {
            let lambda = 200.0 + 400.0 * i as f64;
            let m = cn_mean_rt(&scenario(DeploymentKind::MecCn, lambda, 0.01)).unwrap();
            assert!(m > prev);
            prev = m;
        }
    }

    #[test]
    fn one_way_transit_uses_the_md1_variant_for_mec() {
        let s = scenario(DeploymentKind::MecM1, 2080.0, 0.01);
        match cn_transit_one_way(&s, Direction::Ul).unwrap() {
            LatencyDistribution::Md1Transit { lambda, .. } => assert_eq!(lambda, 12480.0),
            other => panic!("expected M/D/1 transit, got {other:?}"),
        }
    }
}
