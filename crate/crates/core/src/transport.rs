//! Transport-network latency: per-node arrival/service rates along the
//! deployment's uplink and downlink paths (traffic aggregation in the UL,
//! probabilistic splitting in the DL), and the round-trip TN latency
//! distribution — a deterministic shift (propagation plus per-node
//! processing) with the summed queueing terms as an exponential excess.

use crate::dist::{convolve_with, ConvolveParams, LatencyDistribution};
use crate::error::{Direction, Error, Result, UnstableNode};
use crate::scenario::{DeploymentKind, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TnNode {
    Gnb,
    M1,
    M2,
    M3,
}

impl std::fmt::Display for TnNode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TnNode::Gnb => write!(f, "gNB"),
            TnNode::M1 => write!(f, "M1"),
            TnNode::M2 => write!(f, "M2"),
            TnNode::M3 => write!(f, "M3"),
        }
    }
}

/// Arrival and service rate of one queueing node on the TN path.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeRates {
    pub node: TnNode,
    pub direction: Direction,
    pub lambda: f64,
    pub mu: f64,
}

impl NodeRates {
    pub fn rho(&self) -> f64 {
        self.lambda / self.mu
    }

    pub fn is_stable(&self) -> bool {
        self.lambda < self.mu
    }
}

fn split_fraction(split: &Option<Vec<f64>>, children: u32) -> f64 {
    match split {
        Some(p) if !p.is_empty() => p[0],
        _ => 1.0 / children as f64,
    }
}

/// Uplink traffic rate reaching the AS-side UPF for the deployment (the
/// aggregate of every gNB it serves).
pub fn lambda_as_ul(s: &Scenario) -> f64 {
    let l = s.traffic.lambda_gnb_ul;
    let t = &s.topology;
    match s.deployment {
        DeploymentKind::MecGnb => l,
        DeploymentKind::MecM1 => l * t.g as f64,
        DeploymentKind::MecCn | DeploymentKind::Centralized => l * t.gnbs_per_m3() as f64,
    }
}

/// Per-node rates for the scenario's deployment: uplink aggregation
/// (lambda_M1 = g*lambda_gNB and so on up the hierarchy) and downlink
/// splitting (each link queue carries its fraction of the parent's DL flow,
/// rooted at M * lambda_AS^UL leaving the UPF). Only queueing nodes on the
/// deployment's path appear; the gNB contributes processing only in the DL.
pub fn tn_rates(s: &Scenario) -> Vec<NodeRates> {
    let t = &s.topology;
    let b = s.traffic.b_bits;
    let a_ul = s.alpha.alpha_ul;
    let a_dl = s.alpha.alpha_dl;
    let l_gnb = s.traffic.lambda_gnb_ul;
    let l_m1 = l_gnb * t.g as f64;
    let l_m2 = l_m1 * t.m1 as f64;
    let l_m3 = l_m2 * t.m2 as f64;

    let mu_gnb_ul = a_ul * t.c_gnb_m1 / b;
    let mu_m1_ul = a_ul * t.c_m1_m2 / b;
    let mu_m2_ul = a_ul * t.c_m2_m3 / b;
    let mu_m3_ul = a_ul * t.c_cn / b;
    let mu_m1_dl = a_dl * t.c_gnb_m1 / b;
    let mu_m2_dl = a_dl * t.c_m1_m2 / b;
    let mu_m3_dl = a_dl * t.c_m2_m3 / b;

    let lambda_upf_dl = s.traffic.m_copies as f64 * lambda_as_ul(s);
    let p_gnb = split_fraction(&s.traffic.p_split.m1_to_gnb, t.g);
    let p_m1 = split_fraction(&s.traffic.p_split.m2_to_m1, t.m1);
    let p_m2 = split_fraction(&s.traffic.p_split.m3_to_m2, t.m2);

    let mut rates = Vec::new();
    let ul = |node, lambda, mu| NodeRates { node, direction: Direction::Ul, lambda, mu };
    let dl = |node, lambda, mu| NodeRates { node, direction: Direction::Dl, lambda, mu };

    match s.deployment {
        DeploymentKind::MecGnb => {
            rates.push(ul(TnNode::Gnb, l_gnb, mu_gnb_ul));
            // DL: the gNB only processes packets before the radio interface.
        }
        DeploymentKind::MecM1 => {
            rates.push(ul(TnNode::Gnb, l_gnb, mu_gnb_ul));
            rates.push(ul(TnNode::M1, l_m1, mu_m1_ul));
            rates.push(dl(TnNode::M1, p_gnb * lambda_upf_dl, mu_m1_dl));
        }
        DeploymentKind::MecCn | DeploymentKind::Centralized => {
            rates.push(ul(TnNode::Gnb, l_gnb, mu_gnb_ul));
            rates.push(ul(TnNode::M1, l_m1, mu_m1_ul));
            rates.push(ul(TnNode::M2, l_m2, mu_m2_ul));
            rates.push(ul(TnNode::M3, l_m3, mu_m3_ul));
            let l_m3_dl = p_m2 * lambda_upf_dl;
            let l_m2_dl = p_m1 * l_m3_dl;
            let l_m1_dl = p_gnb * l_m2_dl;
            rates.push(dl(TnNode::M3, l_m3_dl, mu_m3_dl));
            rates.push(dl(TnNode::M2, l_m2_dl, mu_m2_dl));
            rates.push(dl(TnNode::M1, l_m1_dl, mu_m1_dl));
        }
    }
    rates
}

/// Number of processing passes (UL + DL) through TN nodes per deployment.
pub fn processing_node_count(deployment: DeploymentKind) -> u32 {
    match deployment {
        DeploymentKind::MecGnb => 2,
        DeploymentKind::MecM1 => 4,
        DeploymentKind::MecCn | DeploymentKind::Centralized => 8,
    }
}

/// Round-trip deterministic components of the TN latency, in seconds:
/// (propagation UL+DL, processing UL+DL).
pub fn tn_shift(s: &Scenario) -> (f64, f64) {
    let prop = 2.0 * s.topology.d_tn_km(s.deployment) / s.topology.v_km_s;
    let proc = processing_node_count(s.deployment) as f64 * s.topology.t_p_s;
    (prop, proc)
}

fn unstable_nodes(rates: &[NodeRates]) -> Vec<UnstableNode> {
    rates
        .iter()
        .filter(|r| !r.is_stable())
        .map(|r| UnstableNode { node: r.node.to_string(), direction: r.direction, rho: r.rho() })
        .collect()
}

/// Round-trip (UL + DL) transport-network latency distribution: a shifted
/// exponential whose shift is the deterministic propagation + processing sum
/// and whose mean excess is the summed per-node queueing terms 1/(mu - lambda).
pub fn tn_latency(s: &Scenario) -> Result<LatencyDistribution> {
    let rates = tn_rates(s);
    let unstable = unstable_nodes(&rates);
    if !unstable.is_empty() {
        return Err(Error::UnstablePath { nodes: unstable });
    }
    let (prop, proc) = tn_shift(s);
    let mean_excess: f64 = rates.iter().map(|r| 1.0 / (r.mu - r.lambda)).sum();
    Ok(LatencyDistribution::ShiftedExponential { shift: prop + proc, mean_excess })
}

/// Exact alternative to the single-exponential excess: the per-node
/// exponential sojourns convolved numerically (hypoexponential when the rates
/// differ). Offered for sensitivity analysis of the summed-mean shape.
pub fn tn_latency_hypoexponential(s: &Scenario) -> Result<LatencyDistribution> {
    let rates = tn_rates(s);
    let unstable = unstable_nodes(&rates);
    if !unstable.is_empty() {
        return Err(Error::UnstablePath { nodes: unstable });
    }
    let (prop, proc) = tn_shift(s);
    let mut terms: Vec<f64> = rates.iter().map(|r| 1.0 / (r.mu - r.lambda)).collect();
    terms.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let longest = terms[0];
    let params = ConvolveParams {
        step: (longest / 2000.0).max(1e-9),
        tail_eps: 1e-7,
        max_cells: 1 << 21,
    };
    let mut acc = LatencyDistribution::deterministic(prop + proc);
    for m in terms {
        let stage = LatencyDistribution::ShiftedExponential { shift: 0.0, mean_excess: m };
        acc = convolve_with(&acc, &stage, &params)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{reference_scenario, ServiceProfile};

    fn scenario(dep: DeploymentKind, lambda: f64, alpha: f64) -> Scenario {
        reference_scenario(dep, ServiceProfile::lloa(), lambda, alpha).unwrap()
    }

    fn scenario_b2400(dep: DeploymentKind, lambda: f64, alpha: f64) -> Scenario {
        let mut s = scenario(dep, lambda, alpha);
        s.traffic.b_bits = 2400.0;
        s
    }

    #[test]
    fn mec_m1_rates_match_hand_arithmetic() {
        // with B = 2400 bits: mu_gNB = 0.01 * 10 Gb/s / B, mu_M1 over 300 Gb/s
        let s = scenario_b2400(DeploymentKind::MecM1, 2080.0, 0.01);
        let rates = tn_rates(&s);
        let gnb_ul = rates
            .iter()
            .find(|r| r.node == TnNode::Gnb && r.direction == Direction::Ul)
            .unwrap();
        assert!((gnb_ul.mu - 41666.666).abs() < 0.1);
        let m1_ul =
            rates.iter().find(|r| r.node == TnNode::M1 && r.direction == Direction::Ul).unwrap();
        assert_eq!(m1_ul.lambda, 12480.0);
        assert!((m1_ul.mu - 1.25e6).abs() < 1e-6);
    }

    #[test]
    fn mec_m1_downlink_splits_uniformly() {
        let s = scenario(DeploymentKind::MecM1, 2080.0, 0.01);
        let rates = tn_rates(&s);
        let m1_dl =
            rates.iter().find(|r| r.node == TnNode::M1 && r.direction == Direction::Dl).unwrap();
        // lambda_M1_total^DL = 12480 split over 6 gNB links
        assert!((m1_dl.lambda - 2080.0).abs() < 1e-9);
    }

    #[test]
    fn unicast_copies_scale_the_downlink_root() {
        let mut s = scenario(DeploymentKind::MecM1, 2080.0, 0.01);
        s.traffic.m_copies = 2;
        let rates = tn_rates(&s);
        let m1_dl =
            rates.iter().find(|r| r.node == TnNode::M1 && r.direction == Direction::Dl).unwrap();
        // lambda_UPF^DL = M * lambda_AS^UL, split over 6 links
        assert!((m1_dl.lambda - 2.0 * 2080.0).abs() < 1e-9);
    }

    #[test]
    fn zero_traffic_means_zero_utilization() {
        let mut s = scenario(DeploymentKind::MecCn, 2080.0, 0.01);
        s.traffic.lambda_gnb_ul = 1e-300; // effectively zero, still > 0 for validation
        for r in tn_rates(&s) {
            assert!(r.rho() < 1e-200);
        }
    }

    #[test]
    fn downlink_flow_is_conserved_at_every_split() {
        for dep in [DeploymentKind::MecM1, DeploymentKind::MecCn, DeploymentKind::Centralized] {
            let s = scenario(dep, 4160.0, 0.01);
            let rates = tn_rates(&s);
            let t = &s.topology;
            let lambda_upf_dl = s.traffic.m_copies as f64 * lambda_as_ul(&s);
            for r in rates.iter().filter(|r| r.direction == Direction::Dl) {
                let (parent_total, children) = match r.node {
                    TnNode::M3 => (lambda_upf_dl, t.m2),
                    TnNode::M2 => (lambda_upf_dl / t.m2 as f64, t.m1),
                    TnNode::M1 if dep == DeploymentKind::MecM1 => (lambda_upf_dl, t.g),
                    TnNode::M1 => (lambda_upf_dl / (t.m2 as f64 * t.m1 as f64), t.g),
                    TnNode::Gnb => unreachable!(),
                };
                // uniform split: children * per-link lambda == parent arrival
                assert!(
                    (children as f64 * r.lambda - parent_total).abs() <= 1e-9 * parent_total,
                    "{dep} {:?}",
                    r.node
                );
            }
        }
    }

    #[test]
    fn shift_components_match_reference_deployment() {
        let expected = [
            (DeploymentKind::MecGnb, 0.0, 0.4e-3),
            (DeploymentKind::MecM1, 0.03e-3, 0.8e-3),
            (DeploymentKind::MecCn, 0.75e-3, 1.6e-3),
            (DeploymentKind::Centralized, 0.75e-3, 1.6e-3),
        ];
        for (dep, prop, proc) in expected {
            let s = scenario(dep, 2080.0, 0.01);
            let (p, q) = tn_shift(&s);
            assert!((p - prop).abs() < 1e-15, "{dep} prop {p} vs {prop}");
            assert!((q - proc).abs() < 1e-15, "{dep} proc {q} vs {proc}");
        }
    }

    #[test]
    fn tn_latency_reproduces_published_mec_m1_row() {
        let s = scenario(DeploymentKind::MecM1, 2080.0, 0.01);
        let d = tn_latency(&s).unwrap();
        let mean_ms = d.mean() * 1e3;
        let p90_ms = d.percentile(0.90).unwrap() * 1e3;
        let p9999_ms = d.percentile(0.9999).unwrap() * 1e3;
        assert!((mean_ms - 0.881).abs() / 0.881 < 0.01, "mean {mean_ms}");
        assert!((p90_ms - 0.949).abs() / 0.949 < 0.01, "p90 {p90_ms}");
        assert!((p9999_ms - 1.304).abs() / 1.304 < 0.015, "p9999 {p9999_ms}");
    }

    #[test]
    fn tn_latency_reproduces_published_mec_gnb_row() {
        let s = scenario(DeploymentKind::MecGnb, 2080.0, 0.01);
        let d = tn_latency(&s).unwrap();
        let mean_ms = d.mean() * 1e3;
        let p9999_ms = d.percentile(0.9999).unwrap() * 1e3;
        assert!((mean_ms - 0.425).abs() / 0.425 < 0.01, "mean {mean_ms}");
        assert!((p9999_ms - 0.633).abs() / 0.633 < 0.015, "p9999 {p9999_ms}");
    }

    #[test]
    fn insufficient_alpha_reports_unstable_nodes() {
        let s = scenario(DeploymentKind::MecCn, 2080.0, 0.001);
        match tn_latency(&s) {
            Err(Error::UnstablePath { nodes }) => {
                assert!(nodes.iter().any(|n| n.node == "M3" && n.rho > 1.0));
            }
            other => panic!("expected instability, got {other:?}"),
        }
    }

    #[test]
    fn mean_equals_shift_plus_excess() {
        for dep in DeploymentKind::ALL {
            let s = scenario(dep, 2080.0, 0.01);
            let (prop, proc) = tn_shift(&s);
            match tn_latency(&s).unwrap() {
                LatencyDistribution::ShiftedExponential { shift, mean_excess } => {
                    let d = LatencyDistribution::ShiftedExponential { shift, mean_excess };
                    let rel = (d.mean() - (prop + proc + mean_excess)).abs() / d.mean();
                    assert!(rel < 1e-9);
                }
                other => panic!("unexpected distribution {other:?}"),
            }
        }
    }

    #[test]
    fn tn_mean_monotone_in_alpha_and_lambda() {
        // decreasing in alpha, increasing in lambda over the stable region
        let mut prev = f64::INFINITY;
        for i in 0..20 {
            let alpha = 0.004 + 0.002 * i as f64;
            let s = scenario(DeploymentKind::MecM1, 2080.0, alpha);
            let m = tn_latency(&s).unwrap().mean();
            assert!(m < prev, "alpha={alpha}");
            prev = m;
        }
        let mut prev = 0.0;
        for i in 0..20 {
            let lambda = 500.0 + 1500.0 * i as f64;
            let s = scenario(DeploymentKind::MecM1, lambda, 0.01);
            let m = tn_latency(&s).unwrap().mean();
            assert!(m > prev, "lambda={lambda}");
            prev = m;
        }
    }

    #[test]
    fn hypoexponential_mode_concentrates_more_than_single_exponential() {
        let s = scenario(DeploymentKind::MecM1, 2080.0, 0.01);
        let approx = tn_latency(&s).unwrap();
        let exact = tn_latency_hypoexponential(&s).unwrap();
        assert!((approx.mean() - exact.mean()).abs() / approx.mean() < 1e-3);
        // the single-exponential approximation is conservative at high percentiles
        let pa = approx.percentile(0.9999).unwrap();
        let pe = exact.percentile(0.9999).unwrap();
        assert!(pa >= pe, "approx {pa} < exact {pe}");
    }
}
