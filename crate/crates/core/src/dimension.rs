//! Link-capacity dimensioning: the smallest alpha (capacity fraction, equal
//! in UL and DL) that keeps every transport- and core-network node stable and
//! meets the service's latency requirement at its reliability percentile.
//!
//! End-to-end latency is strictly decreasing in alpha on the stable region
//! (checked by sampling before each search), so a bisection between the
//! closed-form stability bound and the alpha < 0.5 cap converges to the
//! optimum.

use crate::appserver;
use crate::compose::{self, StatTriple};
use crate::corenet;
use crate::dist::LatencyDistribution;
use crate::error::{Error, Result};
use crate::externals::{internet_latency, peering_latency, LatencyMode};
use crate::scenario::{AlphaAllocation, DeploymentKind, MnoMode, Scenario, ServiceProfile};
use crate::transport;

const REL_TOL: f64 = 1e-4;
const ALPHA_CAP: f64 = 0.5 * (1.0 - 1e-9);

#[derive(Debug, Clone, PartialEq)]
pub enum BindingConstraint {
    /// alpha_min sits on the stability bound of this node.
    Stability { node: String },
    /// alpha_min is set by the latency requirement.
    Latency { l_req_ms: f64 },
    /// No alpha < 0.5 works; the cause says why.
    Infeasible { cause: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DimensioningResult {
    pub alpha_min: Option<f64>,
    pub binding: BindingConstraint,
    /// End-to-end statistics at alpha_min (scenario's MNO mode), ms.
    pub achieved: Option<StatTriple>,
    /// (node, utilization) over the path at alpha_min.
    pub node_utilizations: Vec<(String, f64)>,
}

impl DimensioningResult {
    pub fn is_feasible(&self) -> bool {
        self.alpha_min.is_some()
    }
}

fn with_alpha(template: &Scenario, alpha: f64) -> Scenario {
    let mut s = template.clone();
    s.alpha = AlphaAllocation::symmetric(alpha);
    s
}

/// Largest per-node stability requirement lambda_i * B / C_i over the TN and
/// CN path (alpha must exceed this for every queue to satisfy rho < 1),
/// together with the binding node's name.
pub fn stability_bound(template: &Scenario) -> (f64, String) {
    let probe = with_alpha(template, 0.25);
    let mut worst = (0.0f64, String::from("none"));
    for r in transport::tn_rates(&probe) {
        let bound = 0.25 * r.lambda / r.mu;
        if bound > worst.0 {
            worst = (bound, format!("{} {}", r.node, r.direction));
        }
    }
    let cn = corenet::cn_rates(&probe);
    for (lambda, mu, name) in
        [(cn.lambda_upf_ul, cn.mu_upf_ul, "UPF UL"), (cn.lambda_upf_dl, cn.mu_upf_dl, "UPF DL")]
    {
        let bound = 0.25 * lambda / mu;
        if bound > worst.0 {
            worst = (bound, name.to_string());
        }
    }
    worst
}

fn node_utilizations(s: &Scenario) -> Vec<(String, f64)> {
    let mut out: Vec<(String, f64)> = transport::tn_rates(s)
        .iter()
        .map(|r| (format!("{} {}", r.node, r.direction), r.rho()))
        .collect();
    let cn = corenet::cn_rates(s);
    out.push(("UPF UL".into(), cn.lambda_upf_ul / cn.mu_upf_ul));
    out.push(("UPF DL".into(), cn.lambda_upf_dl / cn.mu_upf_dl));
    out
}

/// Constant (alpha-independent) parts of the end-to-end percentile total:
/// radio at the table value, AS bounded by the slot duration, Internet for
/// Centralized, peering for multi-MNO. Returns None when the radio table has
/// no usable entry.
fn constant_terms_s(template: &Scenario, p: f64) -> Option<f64> {
    let row = template.radio.lookup(&template.service.name, template.traffic.lambda_gnb_ul)?;
    if !row.supported {
        return None;
    }
    let radio_ms = if (p - 0.90).abs() < 1e-9 {
        row.p90_ms?
    } else if (p - 0.9999).abs() < 1e-9 {
        row.p9999_ms?
    } else {
        return None;
    };
    let (as_dist, _) = appserver::as_latency_slot_bound(template);
    let mut total = radio_ms * 1e-3 + as_dist.percentile(p).ok()?;
    if template.deployment == DeploymentKind::Centralized {
        total += internet_latency(LatencyMode::RoundTrip).percentile(p).ok()?;
    }
    if template.mno_mode.is_multi() {
        let kind = compose::effective_peering_kind(template);
        total += peering_latency(kind).percentile(p).ok()?;
    }
    Some(total)
}

/// Alpha-dependent part: TN percentile plus CN percentile, in seconds.
fn path_percentile_s(s: &Scenario, p: f64) -> Result<f64> {
    let tn = transport::tn_latency(s)?;
    let cn = corenet::cn_latency_with_resolution(s, 2048)?;
    Ok(tn.percentile(p)? + cn.percentile(p)?)
}

struct Search<'a> {
    template: &'a Scenario,
    p: f64,
    budget_s: f64,
}

impl Search<'_> {
    /// Total end-to-end percentile at alpha, or None if some node is unstable.
    fn total_s(&self, alpha: f64) -> Option<f64> {
        let s = with_alpha(self.template, alpha);
        match path_percentile_s(&s, self.p) {
            Ok(v) => Some(v),
            Err(Error::UnstablePath { .. }) | Err(Error::Instability { .. }) => None,
            // numeric issues at pathological alphas count as infeasible probes
            Err(_) => None,
        }
    }

    fn feasible(&self, alpha: f64) -> bool {
        self.total_s(alpha).map(|v| v <= self.budget_s).unwrap_or(false)
    }
}

/// Minimize alpha subject to per-node stability, the end-to-end latency
/// requirement at the service percentile, and 0 < alpha < 0.5 with
/// alpha_UL = alpha_DL. The scenario's own alpha is ignored.
///
/// Radio latency is read from the table at the scenario's load (alpha does
/// not affect the radio segment); the AS term is the slot-bounded operating
/// point. An unsupported radio row makes the problem infeasible outright.
pub fn alpha_min(template: &Scenario) -> Result<DimensioningResult> {
    let p = template.service.reliability_percentile;
    let infeasible = |cause: String| DimensioningResult {
        alpha_min: None,
        binding: BindingConstraint::Infeasible { cause },
        achieved: None,
        node_utilizations: Vec::new(),
    };

    let consts = match constant_terms_s(template, p) {
        Some(c) => c,
        None => {
            return Ok(infeasible(format!(
                "radio does not support {} at lambda = {} pkts/s",
                template.service.name, template.traffic.lambda_gnb_ul
            )))
        }
    };
    let budget_s = template.service.l_req_ms * 1e-3 - consts;
    let search = Search { template, p, budget_s };

    let (stab, stab_node) = stability_bound(template);
    if stab >= ALPHA_CAP {
        return Ok(infeasible(format!(
            "stability at node {stab_node} needs alpha >= {stab:.4}, beyond the alpha < 0.5 cap"
        )));
    }
    if budget_s <= 0.0 || !search.feasible(ALPHA_CAP) {
        return Ok(infeasible(format!(
            "latency requirement {} ms unreachable for any alpha < 0.5",
            template.service.l_req_ms
        )));
    }

    // Monotonicity precondition for the bisection: the percentile total must
    // decrease in alpha over the bracket.
    let lo0 = stab * 1.02;
    let mut prev: Option<f64> = None;
    for k in 0..5 {
        let a = lo0 * (ALPHA_CAP / lo0).powf(k as f64 / 4.0);
        if let Some(v) = search.total_s(a) {
            if let Some(pv) = prev {
                if v > pv + 1e-9 {
                    return Err(Error::NotMonotone(format!(
                        "E2E percentile rose from {pv:.6e} to {v:.6e} between sampled alphas"
                    )));
                }
            }
            prev = Some(v);
        }
    }

    let mut lo = stab; // infeasible: at the bound some rho >= 1
    let mut hi = ALPHA_CAP;
    while (hi - lo) / hi > REL_TOL {
        let mid = (lo * hi).sqrt();
        if search.feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    // The latency constraint always binds some finite margin above the
    // stability bound; below 1% we report the bound itself as the driver.
    let binding = if hi <= stab * 1.01 {
        BindingConstraint::Stability { node: stab_node }
    } else {
        BindingConstraint::Latency { l_req_ms: template.service.l_req_ms }
    };
    let at_min = with_alpha(template, hi);
    let breakdown = compose::compose(&at_min)?;
    let achieved = if template.mno_mode.is_multi() {
        breakdown.total_multi
    } else {
        breakdown.total_single
    };
    Ok(DimensioningResult {
        alpha_min: Some(hi),
        binding,
        achieved,
        node_utilizations: node_utilizations(&at_min),
    })
}

/// One row of a dimensioning sweep.
#[derive(Debug, Clone)]
pub struct AlphaMinCell {
    pub deployment: DeploymentKind,
    pub service: ServiceProfile,
    pub lambda: f64,
    pub mno_mode: MnoMode,
    pub outcome: std::result::Result<DimensioningResult, String>,
}

#[derive(Debug, Clone)]
pub struct AlphaMinSweep {
    pub cells: Vec<AlphaMinCell>,
    /// alpha_min never decreased when lambda grew (per deployment, service
    /// and MNO mode); violations are listed.
    pub monotone_in_lambda: bool,
    pub monotonicity_violations: Vec<String>,
}

pub fn alpha_min_sweep(
    base: &Scenario,
    lambdas: &[f64],
    deployments: &[DeploymentKind],
    services: &[ServiceProfile],
    mno_modes: &[MnoMode],
) -> AlphaMinSweep {
    let mut cells = Vec::new();
    let mut violations = Vec::new();
    for &dep in deployments {
        for svc in services {
            for &mno in mno_modes {
                let mut prev: Option<(f64, f64)> = None; // (lambda, alpha_min)
                for &lambda in lambdas {
                    let mut s = base.clone();
                    s.deployment = dep;
                    s.service = svc.clone();
                    s.traffic.lambda_gnb_ul = lambda;
                    s.mno_mode = mno;
                    s.as_profile = crate::scenario::AsHardwareProfile::reference_default(dep);
                    let outcome = alpha_min(&s).map_err(|e| e.to_string());
                    if let Ok(r) = &outcome {
                        if let Some(a) = r.alpha_min {
                            if let Some((pl, pa)) = prev {
                                if a < pa * (1.0 - 4.0 * REL_TOL) {
                                    violations.push(format!(
                                        "{dep} {} {mno:?}: alpha_min fell from {pa:.5} (lambda={pl}) to {a:.5} (lambda={lambda})",
                                        svc.name
                                    ));
                                }
                            }
                            prev = Some((lambda, a));
                        }
                    }
                    cells.push(AlphaMinCell {
                        deployment: dep,
                        service: svc.clone(),
                        lambda,
                        mno_mode: mno,
                        outcome,
                    });
                }
            }
        }
    }
    AlphaMinSweep { monotone_in_lambda: violations.is_empty(), monotonicity_violations: violations, cells }
}

/// Verification helper used by tests: at alpha the scenario meets the
/// requirement; at alpha * (1 - margin) it is unstable or violates.
pub fn boundary_holds(template: &Scenario, alpha: f64, margin: f64) -> Result<bool> {
    let p = template.service.reliability_percentile;
    let consts = constant_terms_s(template, p)
        .ok_or_else(|| Error::InvalidInput("radio row unavailable".into()))?;
    let budget_s = template.service.l_req_ms * 1e-3 - consts;
    let search = Search { template, p, budget_s };
    Ok(search.feasible(alpha) && !search.feasible(alpha * (1.0 - margin)))
}

/// The latency distribution the dimensioning search sees for the TN + CN path
/// at a given alpha (exposed for diagnostics).
pub fn path_distribution(template: &Scenario, alpha: f64) -> Result<LatencyDistribution> {
    let s = with_alpha(template, alpha);
    let tn = transport::tn_latency(&s)?;
    let cn = corenet::cn_latency(&s)?;
    crate::dist::convolve_with(
        &tn,
        &cn,
        &crate::dist::ConvolveParams { step: 1e-6, tail_eps: 1e-6, max_cells: 1 << 22 },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::reference_scenario;

    fn template(dep: DeploymentKind, svc: ServiceProfile, lambda: f64, mno: MnoMode) -> Scenario {
        let mut s = reference_scenario(dep, svc, lambda, 0.01).unwrap();
        s.mno_mode = mno;
        s
    }

    #[test]
    fn mec_gnb_lloa_anchor() {
        let t = template(DeploymentKind::MecGnb, ServiceProfile::lloa(), 8320.0, MnoMode::Single);
        let r = alpha_min(&t).unwrap();
        let a = r.alpha_min.unwrap();
        assert!((a - 0.0019).abs() / 0.0019 < 0.15, "alpha_min {a}");
    }

    #[test]
    fn mec_m1_hloa_single_vs_multi() {
        let single =
            template(DeploymentKind::MecM1, ServiceProfile::hloa(), 2080.0, MnoMode::Single);
        let multi =
            template(DeploymentKind::MecM1, ServiceProfile::hloa(), 2080.0, MnoMode::MultiLocal);
        let a_single = alpha_min(&single).unwrap().alpha_min.unwrap();
        let a_multi = alpha_min(&multi).unwrap().alpha_min.unwrap();
        assert!((a_single - 0.0014).abs() / 0.0014 < 0.15, "single {a_single}");
        assert!((a_multi - 0.0015).abs() / 0.0015 < 0.15, "multi {a_multi}");
        assert!(a_multi > a_single);
    }

    #[test]
    fn unsupported_radio_is_infeasible() {
        let t = template(DeploymentKind::MecM1, ServiceProfile::hloa(), 10400.0, MnoMode::Single);
        let r = alpha_min(&t).unwrap();
        assert!(!r.is_feasible());
        match r.binding {
            BindingConstraint::Infeasible { cause } => assert!(cause.contains("radio")),
            other => panic!("expected radio infeasibility, got {other:?}"),
        }
    }

    #[test]
    fn boundary_property_holds_at_the_optimum() {
        for (dep, svc, lambda, mno) in [
            (DeploymentKind::MecGnb, ServiceProfile::hloa(), 8320.0, MnoMode::Single),
            (DeploymentKind::MecM1, ServiceProfile::hloa(), 2080.0, MnoMode::MultiLocal),
            (DeploymentKind::MecCn, ServiceProfile::lloa(), 2080.0, MnoMode::Single),
        ] {
            let t = template(dep, svc, lambda, mno);
            let r = alpha_min(&t).unwrap();
            let a = r.alpha_min.unwrap();
            assert!(boundary_holds(&t, a, 0.001).unwrap(), "{dep} boundary failed at {a}");
        }
    }

    #[test]
    fn stability_bound_binds_lloa_on_mec_cn() {
        let t = template(DeploymentKind::MecCn, ServiceProfile::lloa(), 2080.0, MnoMode::Single);
        let r = alpha_min(&t).unwrap();
        match &r.binding {
            BindingConstraint::Stability { node } => {
                assert!(node.contains("M3") || node.contains("UPF"), "node {node}");
            }
            other => panic!("expected stability binding, got {other:?}"),
        }
        // LLoA at 2080 needs the same alpha_min in single and multi-MNO:
        // the binding constraint is stability, not latency.
        let tm = template(DeploymentKind::MecCn, ServiceProfile::lloa(), 2080.0, MnoMode::MultiLocal);
        let rm = alpha_min(&tm).unwrap();
        let (a, am) = (r.alpha_min.unwrap(), rm.alpha_min.unwrap());
        assert!((a - am).abs() / a < 1e-3, "single {a} vs multi {am}");
    }

    #[test]
    fn centralized_is_latency_infeasible_for_both_services() {
        for svc in [ServiceProfile::lloa(), ServiceProfile::hloa()] {
            let t = template(DeploymentKind::Centralized, svc, 2080.0, MnoMode::Single);
            let r = alpha_min(&t).unwrap();
            assert!(!r.is_feasible());
        }
    }

    #[test]
    fn light_load_leaves_only_a_small_margin_above_the_stability_floor() {
        // With a 25 ms budget the latency constraint needs mu - lambda of a
        // few hundred 1/s, so alpha_min approaches the stability bound from
        // above as the load grows.
        let light = template(DeploymentKind::MecM1, ServiceProfile::lloa(), 1040.0, MnoMode::Single);
        let r = alpha_min(&light).unwrap();
        let (stab, _) = stability_bound(&light);
        let a = r.alpha_min.unwrap();
        assert!(a >= stab && a <= stab * 1.35, "alpha_min {a} vs stability bound {stab}");

        let heavy = template(DeploymentKind::MecM1, ServiceProfile::lloa(), 20800.0, MnoMode::Single);
        let rh = alpha_min(&heavy).unwrap();
        let (stab_h, _) = stability_bound(&heavy);
        let ah = rh.alpha_min.unwrap();
        assert!(ah / stab_h < a / stab, "relative margin should shrink with load");
        assert!(ah <= stab_h * 1.02, "alpha_min {ah} vs stability bound {stab_h}");
    }

    #[test]
    fn sweep_reports_monotonicity_in_lambda_and_requirements() {
        let base = template(DeploymentKind::MecM1, ServiceProfile::lloa(), 2080.0, MnoMode::Single);
        let sweep = alpha_min_sweep(
            &base,
            &[2080.0, 4160.0, 8320.0],
            &[DeploymentKind::MecGnb, DeploymentKind::MecM1, DeploymentKind::MecCn],
            &[ServiceProfile::lloa(), ServiceProfile::hloa()],
            &[MnoMode::Single],
        );
        assert!(sweep.monotone_in_lambda, "{:?}", sweep.monotonicity_violations);

        // HLoA needs at least as much capacity as LLoA at the same load
        let get = |svc: &str, dep: DeploymentKind, lambda: f64| {
            sweep
                .cells
                .iter()
                .find(|c| c.service.name == svc && c.deployment == dep && c.lambda == lambda)
                .and_then(|c| c.outcome.as_ref().ok())
                .and_then(|r| r.alpha_min)
        };
        for dep in [DeploymentKind::MecGnb, DeploymentKind::MecM1, DeploymentKind::MecCn] {
            if let (Some(l), Some(h)) = (get("LLoA", dep, 2080.0), get("HLoA", dep, 2080.0)) {
                assert!(h >= l * (1.0 - 4.0 * REL_TOL), "{dep}: HLoA {h} < LLoA {l}");
            }
        }

        // deployments closer to the core need more capacity at fixed load
        let order = [DeploymentKind::MecGnb, DeploymentKind::MecM1, DeploymentKind::MecCn];
        let mut prev = 0.0;
        for dep in order {
            let a = get("LLoA", dep, 2080.0).unwrap();
            assert!(a >= prev * (1.0 - 4.0 * REL_TOL), "{dep}: {a} < {prev}");
            prev = a;
        }
    }
}
