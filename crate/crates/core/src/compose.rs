//! End-to-end composition: per-component latency statistics, totals for
//! single- and multi-MNO connections, and a feasibility verdict against the
//! scenario's service profile.
//!
//! The default composition sums per-component statistics at the same
//! percentile level, which is how the published end-to-end tables combine
//! components. The statistically proper alternative — convolving the
//! component CDFs — is available as `CompositionMode::Convolution`; keeping
//! both makes the size of the sum-of-percentiles approximation visible.

use crate::appserver;
use crate::corenet;
use crate::dist::{convolve_with, ConvolveParams, LatencyDistribution};
use crate::error::{Error, Result};
use crate::externals::{internet_latency, peering_latency, LatencyMode, PeeringKind};
use crate::scenario::{
    validate, CompositionMode, DeploymentKind, MnoMode, Scenario, ServiceProfile,
};
use crate::transport;

/// Mean and reporting percentiles in milliseconds; absent entries correspond
/// to '-' cells (a statistic the radio table does not provide, or a segment
/// that cannot carry the load).
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct StatTriple {
    pub mean_ms: Option<f64>,
    pub p90_ms: Option<f64>,
    pub p9999_ms: Option<f64>,
}

impl StatTriple {
    fn from_dist_s(d: &LatencyDistribution) -> Result<Self> {
        Ok(Self {
            mean_ms: Some(d.mean() * 1e3),
            p90_ms: Some(d.percentile(0.90)? * 1e3),
            p9999_ms: Some(d.percentile(0.9999)? * 1e3),
        })
    }

    pub fn at_percentile(&self, p: f64) -> Option<f64> {
        if (p - 0.90).abs() < 1e-9 {
            self.p90_ms
        } else if (p - 0.9999).abs() < 1e-9 {
            self.p9999_ms
        } else {
            None
        }
    }

    fn add(acc: Option<Self>, x: &Self) -> Option<Self> {
        let a = acc?;
        let sum = |u: Option<f64>, v: Option<f64>| match (u, v) {
            (Some(u), Some(v)) => Some(u + v),
            _ => None,
        };
        Some(Self {
            mean_ms: sum(a.mean_ms, x.mean_ms),
            p90_ms: sum(a.p90_ms, x.p90_ms),
            p9999_ms: sum(a.p9999_ms, x.p9999_ms),
        })
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum Verdict {
    Meets,
    Violates,
    Unsupported(String),
}

impl Verdict {
    pub fn is_meets(&self) -> bool {
        matches!(self, Verdict::Meets)
    }
    pub fn is_supported(&self) -> bool {
        !matches!(self, Verdict::Unsupported(_))
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Meets => write!(f, "meets"),
            Verdict::Violates => write!(f, "violates"),
            Verdict::Unsupported(cause) => write!(f, "unsupported: {}", cause.replace(',', ";")),
        }
    }
}

/// Per-segment latency statistics plus totals and verdicts for one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentBreakdown {
    pub deployment: DeploymentKind,
    pub service: ServiceProfile,
    pub lambda: f64,
    pub alpha_ul: f64,
    pub mno_mode: MnoMode,
    pub peering_kind: PeeringKind,

    pub radio: Option<StatTriple>,
    pub radio_supported: bool,
    pub tn: Option<StatTriple>,
    pub tn_note: Option<String>,
    pub cn: Option<StatTriple>,
    pub cn_note: Option<String>,
    /// Internet segment between the PSA UPF and a cloud AS; Centralized only.
    pub upf_as: Option<StatTriple>,
    pub app_server: StatTriple,
    /// The AS mean was bounded by the slot duration (the AS would need
    /// re-dimensioning to actually run there).
    pub as_clamped: bool,
    /// Peering-point statistics for `peering_kind`; enters multi-MNO totals only.
    pub peering: StatTriple,

    pub total_single: Option<StatTriple>,
    pub total_multi: Option<StatTriple>,
    pub verdict_single: Verdict,
    pub verdict_multi: Verdict,
    /// Verdict for the scenario's own MNO mode.
    pub verdict: Verdict,
    /// Mean-based evaluation reaches a different verdict than the
    /// percentile-based one (the reason averages mislead).
    pub mean_disagrees_single: bool,
    pub mean_disagrees_multi: bool,
}

/// Peering flavor used for multi-MNO totals: explicit when the scenario says
/// so, otherwise local for MEC deployments and remote for Centralized.
pub fn effective_peering_kind(s: &Scenario) -> PeeringKind {
    match s.mno_mode {
        MnoMode::MultiLocal => PeeringKind::Local,
        MnoMode::MultiRemote => PeeringKind::Remote,
        MnoMode::Single => match s.deployment {
            DeploymentKind::Centralized => PeeringKind::Remote,
            _ => PeeringKind::Local,
        },
    }
}

fn verdict_of(total: &Option<StatTriple>, p: f64, l_req_ms: f64, causes: &[String]) -> Verdict {
    if let Some(t) = total {
        if let Some(v) = t.at_percentile(p) {
            return if v <= l_req_ms { Verdict::Meets } else { Verdict::Violates };
        }
    }
    let cause = if causes.is_empty() {
        "required component statistic unavailable".to_string()
    } else {
        causes.join("; ")
    };
    Verdict::Unsupported(cause)
}

fn mean_verdict(total: &Option<StatTriple>, l_req_ms: f64) -> Option<bool> {
    total.and_then(|t| t.mean_ms).map(|m| m <= l_req_ms)
}

/// Lift a tabulated radio row to a shifted-exponential surrogate that matches
/// its mean and its service percentile (needed only in convolution mode).
fn radio_surrogate(stats: &StatTriple, p: f64) -> Option<LatencyDistribution> {
    let mean = stats.mean_ms? * 1e-3;
    let (q, ln_term) = if (p - 0.90).abs() < 1e-9 {
        (stats.p90_ms? * 1e-3, (10.0f64).ln())
    } else if (p - 0.9999).abs() < 1e-9 {
        (stats.p9999_ms? * 1e-3, (1e4f64).ln())
    } else {
        return None;
    };
    let mean_excess = ((q - mean) / (ln_term - 1.0)).max(0.0);
    let shift = (mean - mean_excess).max(0.0);
    Some(LatencyDistribution::ShiftedExponential { shift, mean_excess })
}

/// Replacements for the built-in Internet and peering-point models, e.g.
/// a digitized measurement CDF loaded from file.
#[derive(Debug, Clone, Default)]
pub struct ExternalOverrides {
    /// Round-trip UPF-to-AS (Internet) latency.
    pub internet_rt: Option<LatencyDistribution>,
    /// Peering-point latency used for multi-MNO totals.
    pub peering: Option<LatencyDistribution>,
}

/// Evaluate one scenario into its component breakdown.
pub fn compose(s: &Scenario) -> Result<ComponentBreakdown> {
    compose_with(s, &ExternalOverrides::default())
}

pub fn compose_with(s: &Scenario, externals: &ExternalOverrides) -> Result<ComponentBreakdown> {
    let violations = validate(s);
    if !violations.is_empty() {
        return Err(Error::InvalidScenario { violations });
    }
    let mut causes: Vec<String> = Vec::new();

    let radio_row = s.radio.lookup(&s.service.name, s.traffic.lambda_gnb_ul);
    let radio_supported = radio_row.map(|r| r.supported).unwrap_or(false);
    let radio = radio_row.map(|r| StatTriple {
        mean_ms: r.mean_ms,
        p90_ms: r.p90_ms,
        p9999_ms: r.p9999_ms,
    });
    if !radio_supported {
        causes.push(format!(
            "radio cannot satisfy the latency requirement at lambda={}",
            s.traffic.lambda_gnb_ul
        ));
    }

    let (tn_dist, tn, tn_note) = match transport::tn_latency(s) {
        Ok(d) => {
            let stats = StatTriple::from_dist_s(&d)?;
            (Some(d), Some(stats), None)
        }
        Err(e @ Error::UnstablePath { .. }) => {
            causes.push(format!("TN: {e}"));
            (None, None, Some(e.to_string()))
        }
        Err(e) => return Err(e),
    };

    let (cn_dist, cn, cn_note) = match corenet::cn_latency(s) {
        Ok(d) => {
            let mean = corenet::cn_mean_rt(s)? * 1e3;
            let stats = StatTriple {
                mean_ms: Some(mean),
                p90_ms: Some(d.percentile(0.90)? * 1e3),
                p9999_ms: Some(d.percentile(0.9999)? * 1e3),
            };
            (Some(d), Some(stats), None)
        }
        Err(e @ Error::UnstablePath { .. }) => {
            causes.push(format!("CN: {e}"));
            (None, None, Some(e.to_string()))
        }
        Err(e) => return Err(e),
    };

    let (as_dist, as_clamped) = appserver::as_latency_slot_bound(s);
    let app_server = StatTriple::from_dist_s(&as_dist)?;

    let internet = externals
        .internet_rt
        .clone()
        .unwrap_or_else(|| internet_latency(LatencyMode::RoundTrip));
    let upf_as = match s.deployment {
        DeploymentKind::Centralized => Some(StatTriple::from_dist_s(&internet)?),
        _ => None,
    };

    let peering_kind = effective_peering_kind(s);
    let pp_dist = externals.peering.clone().unwrap_or_else(|| peering_latency(peering_kind));
    let peering = StatTriple::from_dist_s(&pp_dist)?;

    let p = s.service.reliability_percentile;
    let (total_single, total_multi) = match s.composition_mode {
        CompositionMode::PercentileSum => {
            let mut single = radio;
            if let Some(t) = &tn {
                single = StatTriple::add(single, t);
            } else {
                single = None;
            }
            if let Some(c) = &cn {
                single = StatTriple::add(single, c);
            } else {
                single = None;
            }
            if s.deployment == DeploymentKind::Centralized {
                if let Some(u) = &upf_as {
                    single = StatTriple::add(single, u);
                }
            }
            single = StatTriple::add(single, &app_server);
            let multi = StatTriple::add(single, &peering);
            (single, multi)
        }
        CompositionMode::Convolution => {
            let surrogate = radio.as_ref().filter(|_| radio_supported).and_then(|r| {
                let d = radio_surrogate(r, p);
                if d.is_none() {
                    causes.push(format!(
                        "radio row lacks the statistics needed for a percentile-{p} surrogate"
                    ));
                }
                d
            });
            match (surrogate, &tn_dist, &cn_dist) {
                (Some(radio_d), Some(tn_d), Some(cn_d)) => {
                    let params = ConvolveParams { step: 1e-5, tail_eps: 1e-6, max_cells: 1 << 22 };
                    let mut acc = convolve_with(&radio_d, tn_d, &params)?;
                    acc = convolve_with(&acc, cn_d, &params)?;
                    acc = convolve_with(&acc, &as_dist, &params)?;
                    if s.deployment == DeploymentKind::Centralized {
                        acc = convolve_with(&acc, &internet, &params)?;
                    }
                    let single_mean: Option<f64> =
                        radio.and_then(|r| r.mean_ms).map(|radio_mean_ms| {
                            let mut m = radio_mean_ms * 1e-3 + tn_d.mean() + cn_d.mean()
                                + as_dist.mean();
                            if s.deployment == DeploymentKind::Centralized {
                                m += internet.mean();
                            }
                            m
                        });
                    let single = Some(StatTriple {
                        mean_ms: single_mean.map(|v| v * 1e3),
                        p90_ms: Some(acc.percentile(0.90)? * 1e3),
                        p9999_ms: Some(acc.percentile(0.9999)? * 1e3),
                    });
                    let with_pp = convolve_with(&acc, &pp_dist, &params)?;
                    let multi = Some(StatTriple {
                        mean_ms: single_mean.map(|v| (v + pp_dist.mean()) * 1e3),
                        p90_ms: Some(with_pp.percentile(0.90)? * 1e3),
                        p9999_ms: Some(with_pp.percentile(0.9999)? * 1e3),
                    });
                    (single, multi)
                }
                _ => (None, None),
            }
        }
    };

    let l_req = s.service.l_req_ms;
    let verdict_single = verdict_of(&total_single, p, l_req, &causes);
    let verdict_multi = verdict_of(&total_multi, p, l_req, &causes);
    let verdict =
        if s.mno_mode.is_multi() { verdict_multi.clone() } else { verdict_single.clone() };
    let mean_disagrees = |total: &Option<StatTriple>, v: &Verdict| match (mean_verdict(total, l_req), v)
    {
        (Some(mean_meets), Verdict::Meets) => !mean_meets,
        (Some(mean_meets), Verdict::Violates) => mean_meets,
        _ => false,
    };

    Ok(ComponentBreakdown {
        deployment: s.deployment,
        service: s.service.clone(),
        lambda: s.traffic.lambda_gnb_ul,
        alpha_ul: s.alpha.alpha_ul,
        mno_mode: s.mno_mode,
        peering_kind,
        radio,
        radio_supported,
        tn,
        tn_note,
        cn,
        cn_note,
        upf_as,
        app_server,
        as_clamped,
        peering,
        mean_disagrees_single: mean_disagrees(&total_single, &verdict_single),
        mean_disagrees_multi: mean_disagrees(&total_multi, &verdict_multi),
        total_single,
        total_multi,
        verdict_single,
        verdict_multi,
        verdict,
    })
}

/// One evaluated cell of a sweep.
#[derive(Debug, Clone)]
pub struct SweepCell {
    pub deployment: DeploymentKind,
    pub service: ServiceProfile,
    pub lambda: f64,
    pub alpha: f64,
    pub outcome: std::result::Result<ComponentBreakdown, String>,
}

/// Cross-product evaluation over (deployments x services x lambdas x alphas),
/// in that order. Per-cell errors are recorded in the row and never abort the
/// sweep. The base scenario supplies everything not on an axis; its AS
/// profile follows each cell's deployment default unless the base overrides
/// its own deployment's default.
pub fn sweep(
    base: &Scenario,
    lambdas: &[f64],
    alphas: &[f64],
    deployments: &[DeploymentKind],
    services: &[ServiceProfile],
) -> Vec<SweepCell> {
    let base_as_is_default =
        base.as_profile == crate::scenario::AsHardwareProfile::reference_default(base.deployment);
    let mut cells = Vec::with_capacity(
        deployments.len() * services.len() * lambdas.len() * alphas.len(),
    );
    for &dep in deployments {
        for svc in services {
            for &lambda in lambdas {
                for &alpha in alphas {
                    let mut s = base.clone();
                    s.deployment = dep;
                    s.service = svc.clone();
                    s.traffic.lambda_gnb_ul = lambda;
                    s.alpha = crate::scenario::AlphaAllocation::symmetric(alpha);
                    if base_as_is_default {
                        s.as_profile = crate::scenario::AsHardwareProfile::reference_default(dep);
                    }
                    let outcome = compose(&s).map_err(|e| e.to_string());
                    cells.push(SweepCell { deployment: dep, service: svc.clone(), lambda, alpha, outcome });
                }
            }
        }
    }
    cells
}

// ---------------------------------------------------------------------------
// rendering

pub const SWEEP_HEADER: [&str; 31] = [
    "deployment",
    "service",
    "lambda",
    "alpha",
    "mno",
    "radio_mean_ms",
    "radio_p90_ms",
    "radio_p9999_ms",
    "tn_mean_ms",
    "tn_p90_ms",
    "tn_p9999_ms",
    "cn_mean_ms",
    "cn_p90_ms",
    "cn_p9999_ms",
    "upf_as_mean_ms",
    "upf_as_p90_ms",
    "upf_as_p9999_ms",
    "as_mean_ms",
    "as_p90_ms",
    "as_p9999_ms",
    "pp_mean_ms",
    "pp_p90_ms",
    "pp_p9999_ms",
    "single_mean_ms",
    "single_p90_ms",
    "single_p9999_ms",
    "multi_mean_ms",
    "multi_p90_ms",
    "multi_p9999_ms",
    "verdict_single",
    "verdict_multi",
];

/// Fixed-width significant-digit formatting shared by text and CSV output so
/// the two renderings always agree byte-for-byte.
pub fn format_ms(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let formatted = format!("{v:.6e}");
    // normalize exponent formatting into plain decimal where reasonable
    let x: f64 = formatted.parse().unwrap_or(v);
    let abs = x.abs();
    let s = if (1e-4..1e7).contains(&abs) {
        let digits = 6 - abs.log10().floor().clamp(-4.0, 6.0) as i32;
        format!("{x:.*}", digits.clamp(0, 10) as usize)
    } else {
        formatted
    };
    let trimmed = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.') } else { &s };
    trimmed.to_string()
}

fn opt_ms(v: Option<f64>) -> String {
    v.map(format_ms).unwrap_or_else(|| "-".into())
}

fn triple_cells(t: &Option<StatTriple>, out: &mut Vec<String>) {
    match t {
        Some(t) => {
            out.push(opt_ms(t.mean_ms));
            out.push(opt_ms(t.p90_ms));
            out.push(opt_ms(t.p9999_ms));
        }
        None => {
            out.push("-".into());
            out.push("-".into());
            out.push("-".into());
        }
    }
}

pub fn sweep_rows(cells: &[SweepCell]) -> Vec<Vec<String>> {
    let mut rows = Vec::with_capacity(cells.len());
    for cell in cells {
        let mut row: Vec<String> = vec![
            cell.deployment.label().into(),
            cell.service.name.clone(),
            format_ms(cell.lambda),
            format_ms(cell.alpha),
        ];
        match &cell.outcome {
            Ok(b) => {
                row.push(match b.mno_mode {
                    MnoMode::Single => "single".into(),
                    MnoMode::MultiLocal => "multi-local".into(),
                    MnoMode::MultiRemote => "multi-remote".into(),
                });
                triple_cells(&b.radio, &mut row);
                triple_cells(&b.tn, &mut row);
                triple_cells(&b.cn, &mut row);
                triple_cells(&b.upf_as, &mut row);
                triple_cells(&Some(b.app_server), &mut row);
                triple_cells(&Some(b.peering), &mut row);
                triple_cells(&b.total_single, &mut row);
                triple_cells(&b.total_multi, &mut row);
                row.push(b.verdict_single.to_string());
                row.push(b.verdict_multi.to_string());
            }
            Err(e) => {
                row.push("-".into());
                for _ in 0..24 {
                    row.push("-".into());
                }
                row.push(format!("error: {}", e.replace(',', ";")));
                row.push("-".into());
            }
        }
        rows.push(row);
    }
    rows
}

pub fn render_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Format("empty CSV".into()))?
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    Ok((header, rows))
}

/// Aligned text table; cells are rendered with exactly the same strings as
/// the CSV form, so CSV -> parse -> render is byte-identical.
pub fn render_table(header: &[String], rows: &[Vec<String>]) -> String {
    let cols = header.len();
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate().take(cols) {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    let push_row = |cells: &[String], out: &mut String| {
        for (i, cell) in cells.iter().enumerate().take(cols) {
            if i > 0 {
                out.push_str("  ");
            }
            out.push_str(cell);
            for _ in cell.len()..widths[i] {
                out.push(' ');
            }
        }
        while out.ends_with(' ') {
            out.pop();
        }
        out.push('\n');
    };
    push_row(header, &mut out);
    for row in rows {
        push_row(row, &mut out);
    }
    out
}
