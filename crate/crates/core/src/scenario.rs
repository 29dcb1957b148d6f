//! Domain types, the default evaluation scenario (topology, traffic, service
//! profiles, radio-latency tables, AS hardware), and scenario validation.

use crate::error::{Error, Result, Violation};
use serde::{Deserialize, Serialize};

/// V2X service class: latency requirement plus the reliability percentile at
/// which it must hold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ServiceProfile {
    pub name: String,
    /// Maximum end-to-end latency in milliseconds.
    pub l_req_ms: f64,
    /// Fraction of packets that must meet the requirement, in (0,1).
    pub reliability_percentile: f64,
}

impl ServiceProfile {
    /// Low level of automation: 25 ms at the 90th percentile.
    pub fn lloa() -> Self {
        Self { name: "LLoA".into(), l_req_ms: 25.0, reliability_percentile: 0.90 }
    }

    /// High level of automation: 10 ms at the 99.99th percentile.
    pub fn hloa() -> Self {
        Self { name: "HLoA".into(), l_req_ms: 10.0, reliability_percentile: 0.9999 }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "lloa" | "low" => Some(Self::lloa()),
            "hloa" | "high" => Some(Self::hloa()),
            _ => None,
        }
    }
}

/// Where the V2X application server (and its UPF) sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DeploymentKind {
    #[serde(rename = "mec-gnb")]
    MecGnb,
    #[serde(rename = "mec-m1")]
    MecM1,
    #[serde(rename = "mec-cn")]
    MecCn,
    #[serde(rename = "centralized")]
    Centralized,
}

impl DeploymentKind {
    pub const ALL: [DeploymentKind; 4] =
        [Self::MecGnb, Self::MecM1, Self::MecCn, Self::Centralized];

    pub fn label(&self) -> &'static str {
        match self {
            Self::MecGnb => "MEC@gNB",
            Self::MecM1 => "MEC@M1",
            Self::MecCn => "MEC@CN",
            Self::Centralized => "Centralized",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "mec-gnb" | "mec@gnb" | "gnb" => Some(Self::MecGnb),
            "mec-m1" | "mec@m1" | "m1" => Some(Self::MecM1),
            "mec-cn" | "mec@cn" | "cn" => Some(Self::MecCn),
            "centralized" | "cloud" => Some(Self::Centralized),
            _ => None,
        }
    }
}

impl std::fmt::Display for DeploymentKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Hierarchical transport/core topology: fan-in counts, link distances,
/// capacities, propagation speed and per-node processing delay.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Topology {
    /// gNBs multiplexed per M1 node.
    pub g: u32,
    /// M1 nodes aggregated per M2 node.
    pub m1: u32,
    /// M2 nodes aggregated per M3 node.
    pub m2: u32,
    pub d_gnb_m1_km: f64,
    pub d_m1_m2_km: f64,
    pub d_m2_m3_km: f64,
    /// Distance across the core network (M3 to the PSA UPF).
    pub d_cn_km: f64,
    /// Maximum distance between two core-network nodes; sets the number of
    /// intermediate UPFs on the centralized path.
    pub d_cn_max_km: f64,
    /// Link capacities in bits/s.
    pub c_gnb_m1: f64,
    pub c_m1_m2: f64,
    pub c_m2_m3: f64,
    pub c_cn: f64,
    /// UPF-to-AS link used by the MEC deployments.
    pub c_upf_as: f64,
    /// Propagation speed over the optical medium, km/s.
    pub v_km_s: f64,
    /// Per-node processing delay, seconds.
    pub t_p_s: f64,
}

impl Default for Topology {
    fn default() -> Self {
        Self {
            g: 6,
            m1: 24,
            m2: 12,
            d_gnb_m1_km: 3.0,
            d_m1_m2_km: 12.0,
            d_m2_m3_km: 60.0,
            d_cn_km: 200.0,
            d_cn_max_km: 100.0,
            c_gnb_m1: 10e9,
            c_m1_m2: 300e9,
            c_m2_m3: 6e12,
            c_cn: 6e12,
            c_upf_as: 6e12,
            v_km_s: 200_000.0,
            t_p_s: 0.2e-3,
        }
    }
}

impl Topology {
    /// gNBs aggregated at each level of the hierarchy.
    pub fn gnbs_per_m1(&self) -> u64 {
        self.g as u64
    }
    pub fn gnbs_per_m2(&self) -> u64 {
        self.g as u64 * self.m1 as u64
    }
    pub fn gnbs_per_m3(&self) -> u64 {
        self.g as u64 * self.m1 as u64 * self.m2 as u64
    }

    /// One-way distance packets travel through the transport network.
    pub fn d_tn_km(&self, deployment: DeploymentKind) -> f64 {
        match deployment {
            DeploymentKind::MecGnb => 0.0,
            DeploymentKind::MecM1 => self.d_gnb_m1_km,
            DeploymentKind::MecCn | DeploymentKind::Centralized => {
                self.d_gnb_m1_km + self.d_m1_m2_km + self.d_m2_m3_km
            }
        }
    }
}

/// Optional non-uniform downlink split fractions, index 0 being the child on
/// the observed path. Each vector must sum to 1 and have one entry per child.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DlSplits {
    /// Fractions across the g gNB links under an M1 node.
    pub m1_to_gnb: Option<Vec<f64>>,
    /// Fractions across the m1 M1 links under an M2 node.
    pub m2_to_m1: Option<Vec<f64>>,
    /// Fractions across the m2 M2 links under an M3 node.
    pub m3_to_m2: Option<Vec<f64>>,
}

/// Offered V2X traffic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrafficSpec {
    /// Packets/s arriving at each gNB in the uplink.
    pub lambda_gnb_ul: f64,
    /// Packet size in bits.
    pub b_bits: f64,
    /// Per-vehicle packet rate (informational when lambda is given directly).
    pub t_p_rate: Option<f64>,
    /// Vehicles under one gNB (informational when lambda is given directly).
    pub n_ue: Option<u32>,
    /// Residual uplink radio loss fraction in [0,1).
    pub p_loss: f64,
    /// Downlink copies forwarded per uplink packet (1 = broadcast).
    pub m_copies: u32,
    pub p_split: DlSplits,
}

impl TrafficSpec {
    pub fn new(lambda_gnb_ul: f64) -> Self {
        Self {
            lambda_gnb_ul,
            b_bits: DEFAULT_PACKET_BITS,
            t_p_rate: None,
            n_ue: None,
            p_loss: 0.0,
            m_copies: 1,
            p_split: DlSplits::default(),
        }
    }

    /// Derive the per-gNB arrival rate from a vehicle population:
    /// lambda = N_UE * T_p * (1 - P_loss).
    pub fn from_vehicles(n_ue: u32, packets_per_vehicle_s: f64, p_loss: f64) -> Self {
        let lambda = n_ue as f64 * packets_per_vehicle_s * (1.0 - p_loss);
        Self {
            lambda_gnb_ul: lambda,
            b_bits: DEFAULT_PACKET_BITS,
            t_p_rate: Some(packets_per_vehicle_s),
            n_ue: Some(n_ue),
            p_loss,
            m_copies: 1,
            p_split: DlSplits::default(),
        }
    }
}

/// Fraction of each link's capacity reserved for the V2X service, per
/// direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaAllocation {
    pub alpha_ul: f64,
    pub alpha_dl: f64,
}

impl AlphaAllocation {
    pub fn symmetric(alpha: f64) -> Self {
        Self { alpha_ul: alpha, alpha_dl: alpha }
    }
}

/// One row of the radio-latency table: UL+DL radio latency statistics for a
/// (service, per-gNB load) pair. Unsupported rows have no usable percentile
/// (too many packets dropped to measure one) but may still carry a mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadioRow {
    pub service: String,
    pub lambda: f64,
    pub mean_ms: Option<f64>,
    pub p90_ms: Option<f64>,
    pub p9999_ms: Option<f64>,
    pub supported: bool,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RadioLatencyTable {
    pub rows: Vec<RadioRow>,
}

impl RadioLatencyTable {
    pub fn lookup(&self, service: &str, lambda: f64) -> Option<&RadioRow> {
        self.rows.iter().find(|r| {
            r.service.eq_ignore_ascii_case(service)
                && (r.lambda - lambda).abs() <= 1e-9 * lambda.max(1.0)
        })
    }

    /// The default table shipped with the model: UL+DL radio latency for the
    /// reference NR configuration (30 kHz SCS, 14 symbols, 20 MHz), LLoA rows
    /// carrying the 90th percentile and HLoA rows the 99.99th.
    pub fn reference_default() -> Self {
        let lambdas = REFERENCE_LAMBDAS;
        let lloa_mean = [1.50, 1.50, 1.50, 1.50, 1.50, 1.50, 1.50, 1.50, 1.56, 3.09];
        let lloa_p90 = [
            Some(2.00),
            Some(2.00),
            Some(2.00),
            Some(2.00),
            Some(2.00),
            Some(2.00),
            Some(2.00),
            Some(2.32),
            Some(6.07),
            None,
        ];
        let hloa_mean = [1.50, 1.50, 1.51, 1.52, 1.53, 1.58, 1.67, 7.31, 11.81, 14.23];
        let hloa_p9999 = [
            Some(2.60),
            Some(2.77),
            Some(3.08),
            Some(3.58),
            Some(3.58),
            Some(4.55),
            None,
            None,
            None,
            None,
        ];
        let mut rows = Vec::with_capacity(20);
        for (i, &l) in lambdas.iter().enumerate() {
            rows.push(RadioRow {
                service: "LLoA".into(),
                lambda: l,
                mean_ms: Some(lloa_mean[i]),
                p90_ms: lloa_p90[i],
                p9999_ms: None,
                supported: lloa_p90[i].is_some(),
            });
        }
        for (i, &l) in lambdas.iter().enumerate() {
            rows.push(RadioRow {
                service: "HLoA".into(),
                lambda: l,
                mean_ms: Some(hloa_mean[i]),
                p90_ms: None,
                p9999_ms: hloa_p9999[i],
                supported: hloa_p9999[i].is_some(),
            });
        }
        Self { rows }
    }

    /// Load from CSV with header `service,lambda,mean_ms,p90_ms,p9999_ms,supported`.
    /// Empty fields or `-` mean "not available".
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("radio CSV is empty".into()))?
            .1
            .trim();
        let expect = "service,lambda,mean_ms,p90_ms,p9999_ms,supported";
        if header.replace(' ', "") != expect {
            return Err(Error::Format(format!("radio CSV header must be `{expect}`, got `{header}`")));
        }
        for (ln, line) in lines {
            let parts: Vec<&str> = line.split(',').map(str::trim).collect();
            if parts.len() != 6 {
                return Err(Error::Format(format!("radio CSV line {}: expected 6 fields", ln + 1)));
            }
            let opt = |s: &str| -> Result<Option<f64>> {
                if s.is_empty() || s == "-" {
                    Ok(None)
                } else {
                    s.parse::<f64>()
                        .map(Some)
                        .map_err(|e| Error::Format(format!("radio CSV line {}: {e}", ln + 1)))
                }
            };
            rows.push(RadioRow {
                service: parts[0].to_string(),
                lambda: parts[1]
                    .parse()
                    .map_err(|e| Error::Format(format!("radio CSV line {}: {e}", ln + 1)))?,
                mean_ms: opt(parts[2])?,
                p90_ms: opt(parts[3])?,
                p9999_ms: opt(parts[4])?,
                supported: matches!(parts[5].to_ascii_lowercase().as_str(), "true" | "1" | "yes"),
            });
        }
        Ok(Self { rows })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("service,lambda,mean_ms,p90_ms,p9999_ms,supported\n");
        let fmt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_else(|| "-".into());
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.service,
                r.lambda,
                fmt(r.mean_ms),
                fmt(r.p90_ms),
                fmt(r.p9999_ms),
                r.supported
            ));
        }
        out
    }
}

/// How the AS forwarding-cost factor theta (cycles/bit) is distributed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum ThetaModel {
    Uniform { lo: f64, hi: f64 },
    Exponential { mean: f64 },
}

impl ThetaModel {
    pub fn mean(&self) -> f64 {
        match self {
            Self::Uniform { lo, hi } => 0.5 * (lo + hi),
            Self::Exponential { mean } => *mean,
        }
    }
}

impl Default for ThetaModel {
    fn default() -> Self {
        Self::Uniform { lo: 100.0, hi: 300.0 }
    }
}

/// Compute capacity available to the V2X application server.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsHardwareProfile {
    pub processors: u32,
    /// Hardware threads (or cores) usable per processor.
    pub parallel_units_per_processor: u32,
    /// Cycles/s per parallel unit.
    pub frequency_hz: f64,
    pub theta_model: ThetaModel,
    /// Radio slot duration: the window over which arriving packets are
    /// batched at the AS.
    pub t_tt_s: f64,
    /// Override for the number of gNBs whose uplink traffic this AS
    /// aggregates; None uses the deployment fan-in.
    pub aggregated_gnbs: Option<u64>,
}

impl AsHardwareProfile {
    /// Reference hardware per deployment: MEC sites run 24-core/48-thread 3.6 GHz
    /// processors (2 at the cell site, 4 elsewhere); the cloud runs
    /// 28-core/56-thread 4.3 GHz processors.
    pub fn reference_default(deployment: DeploymentKind) -> Self {
        let (processors, units, freq) = match deployment {
            DeploymentKind::MecGnb => (2, 48, 3.6e9),
            DeploymentKind::MecM1 | DeploymentKind::MecCn => (4, 48, 3.6e9),
            DeploymentKind::Centralized => (23, 56, 4.3e9),
        };
        Self {
            processors,
            parallel_units_per_processor: units,
            frequency_hz: freq,
            theta_model: ThetaModel::default(),
            t_tt_s: 0.5e-3,
            aggregated_gnbs: None,
        }
    }

    /// Aggregate cycles/s across all processors and parallel units.
    pub fn total_capacity(&self) -> f64 {
        self.processors as f64 * self.parallel_units_per_processor as f64 * self.frequency_hz
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MnoMode {
    Single,
    MultiLocal,
    MultiRemote,
}

impl MnoMode {
    pub fn is_multi(&self) -> bool {
        !matches!(self, Self::Single)
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "single" => Some(Self::Single),
            "multi-local" | "multi_local" => Some(Self::MultiLocal),
            "multi-remote" | "multi_remote" => Some(Self::MultiRemote),
            // bare "multi" resolves to the deployment default at compose time
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompositionMode {
    /// Sum per-component statistics at the same percentile level.
    PercentileSum,
    /// Convolve the component CDFs and read percentiles off the total.
    Convolution,
}

/// Everything needed to evaluate one configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub deployment: DeploymentKind,
    pub topology: Topology,
    pub traffic: TrafficSpec,
    pub alpha: AlphaAllocation,
    pub radio: RadioLatencyTable,
    pub as_profile: AsHardwareProfile,
    pub service: ServiceProfile,
    pub mno_mode: MnoMode,
    pub composition_mode: CompositionMode,
}

impl Scenario {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(format!("scenario JSON: {e}")))
    }
}

/// The per-gNB arrival rates evaluated by the reference study (packets/s).
pub const REFERENCE_LAMBDAS: [f64; 10] =
    [1040.0, 2080.0, 4160.0, 5200.0, 6240.0, 8320.0, 10400.0, 20800.0, 31200.0, 41600.0];

/// Default V2X packet size in bits. Not stated by the evaluation; calibrated
/// so the transport-network model reproduces the published TN latency table
/// (the alpha = 0.001 column pins it tightly). Configurable per scenario.
pub const DEFAULT_PACKET_BITS: f64 = 2471.0;

/// Build the reference evaluation scenario: hierarchical optical transport
/// network (6 gNBs per M1, 144 gNBs per M2, 1728 per M3; 3/12/60 km hops;
/// 10 Gb/s / 300 Gb/s / 6 Tb/s links), 200 km core at 6 Tb/s, 0.2 ms per-node
/// processing, and the deployment's AS hardware.
pub fn reference_scenario(
    deployment: DeploymentKind,
    service: ServiceProfile,
    lambda_gnb_ul: f64,
    alpha: f64,
) -> Result<Scenario> {
    let scenario = Scenario {
        deployment,
        topology: Topology::default(),
        traffic: TrafficSpec::new(lambda_gnb_ul),
        alpha: AlphaAllocation::symmetric(alpha),
        radio: RadioLatencyTable::reference_default(),
        as_profile: AsHardwareProfile::reference_default(deployment),
        service,
        mno_mode: MnoMode::Single,
        composition_mode: CompositionMode::PercentileSum,
    };
    let violations = validate(&scenario);
    if violations.is_empty() {
        Ok(scenario)
    } else {
        Err(Error::InvalidScenario { violations })
    }
}

fn check_split(field: &str, split: &Option<Vec<f64>>, children: u32, out: &mut Vec<Violation>) {
    if let Some(p) = split {
        if p.len() != children as usize {
            out.push(Violation {
                field: field.into(),
                message: format!("needs one fraction per child link ({children}), got {}", p.len()),
            });
            return;
        }
        if p.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
            out.push(Violation {
                field: field.into(),
                message: "split fractions must lie in [0,1]".into(),
            });
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            out.push(Violation {
                field: field.into(),
                message: format!("split fractions must sum to 1, got {sum}"),
            });
        }
    }
}

/// Check every type invariant; the returned list is empty iff the scenario is
/// valid. Each violation names the offending field and bound.
pub fn validate(s: &Scenario) -> Vec<Violation> {
    let mut v = Vec::new();
    fn req(v: &mut Vec<Violation>, cond: bool, field: &str, message: String) {
        if !cond {
            v.push(Violation { field: field.into(), message });
        }
    }

    // service
    req(&mut v, s.service.l_req_ms > 0.0, "service.l_req_ms", "latency requirement must be > 0".into());
    req(
        &mut v,
        s.service.reliability_percentile > 0.0 && s.service.reliability_percentile < 1.0,
        "service.reliability_percentile",
        "must lie strictly between 0 and 1".into(),
    );

    // topology
    let t = &s.topology;
    req(&mut v, t.g >= 1 && t.m1 >= 1 && t.m2 >= 1, "topology.fan_in", "all fan-in counts must be >= 1".into());
    for (name, d) in [
        ("topology.d_gnb_m1_km", t.d_gnb_m1_km),
        ("topology.d_m1_m2_km", t.d_m1_m2_km),
        ("topology.d_m2_m3_km", t.d_m2_m3_km),
        ("topology.d_cn_km", t.d_cn_km),
    ] {
        req(&mut v, d >= 0.0, name, "distances must be >= 0".into());
    }
    req(&mut v, t.d_cn_max_km > 0.0, "topology.d_cn_max_km", "must be > 0".into());
    for (name, c) in [
        ("topology.c_gnb_m1", t.c_gnb_m1),
        ("topology.c_m1_m2", t.c_m1_m2),
        ("topology.c_m2_m3", t.c_m2_m3),
        ("topology.c_cn", t.c_cn),
        ("topology.c_upf_as", t.c_upf_as),
    ] {
        req(&mut v, c > 0.0, name, "link capacities must be > 0".into());
    }
    req(&mut v, t.v_km_s > 0.0, "topology.v_km_s", "propagation speed must be > 0".into());
    req(&mut v, t.t_p_s >= 0.0, "topology.t_p_s", "processing delay must be >= 0".into());

    // traffic
    let tr = &s.traffic;
    req(&mut v, tr.lambda_gnb_ul > 0.0, "traffic.lambda_gnb_ul", "arrival rate must be > 0".into());
    req(&mut v, tr.b_bits > 0.0, "traffic.b_bits", "packet size must be > 0".into());
    req(
        &mut v,
        (0.0..1.0).contains(&tr.p_loss),
        "traffic.p_loss",
        "residual loss must lie in [0,1)".into(),
    );
    req(&mut v, tr.m_copies >= 1, "traffic.m_copies", "at least one downlink copy is forwarded".into());
    check_split("traffic.p_split.m1_to_gnb", &tr.p_split.m1_to_gnb, t.g, &mut v);
    check_split("traffic.p_split.m2_to_m1", &tr.p_split.m2_to_m1, t.m1, &mut v);
    check_split("traffic.p_split.m3_to_m2", &tr.p_split.m3_to_m2, t.m2, &mut v);

    // alpha: 0 < alpha_X < 0.5 and alpha_UL + alpha_DL < 1
    let a = &s.alpha;
    req(
        &mut v,
        a.alpha_ul > 0.0 && a.alpha_ul < 0.5,
        "alpha.alpha_ul",
        format!("must satisfy 0 < alpha_UL < 0.5, got {}", a.alpha_ul),
    );
    req(
        &mut v,
        a.alpha_dl > 0.0 && a.alpha_dl < 0.5,
        "alpha.alpha_dl",
        format!("must satisfy 0 < alpha_DL < 0.5, got {}", a.alpha_dl),
    );
    req(
        &mut v,
        a.alpha_ul + a.alpha_dl < 1.0,
        "alpha",
        format!("alpha_UL + alpha_DL must be < 1, got {}", a.alpha_ul + a.alpha_dl),
    );

    // radio table
    for (i, r) in s.radio.rows.iter().enumerate() {
        if let (Some(m), Some(p90)) = (r.mean_ms, r.p90_ms) {
            req(&mut v, m <= p90 + 1e-12, &format!("radio.rows[{i}]"), "mean must be <= p90".into());
        }
        if let (Some(p90), Some(p9999)) = (r.p90_ms, r.p9999_ms) {
            req(&mut v, p90 <= p9999 + 1e-12, &format!("radio.rows[{i}]"), "p90 must be <= p9999".into());
        }
        if !r.supported {
            req(
        &mut v,
                r.p90_ms.is_none() && r.p9999_ms.is_none(),
                &format!("radio.rows[{i}]"),
                "unsupported rows carry no percentile values".into(),
            );
        }
    }

    // AS hardware
    let h = &s.as_profile;
    req(&mut v, h.processors >= 1, "as_profile.processors", "at least one processor".into());
    req(
        &mut v,
        h.parallel_units_per_processor >= 1,
        "as_profile.parallel_units_per_processor",
        "at least one parallel unit".into(),
    );
    req(&mut v, h.frequency_hz > 0.0, "as_profile.frequency_hz", "frequency must be > 0".into());
    req(&mut v, h.t_tt_s > 0.0, "as_profile.t_tt_s", "slot duration must be > 0".into());
    match h.theta_model {
        ThetaModel::Uniform { lo, hi } => {
            req(&mut v, lo >= 0.0 && hi > lo, "as_profile.theta_model", "need 0 <= lo < hi".into())
        }
        ThetaModel::Exponential { mean } => {
            req(&mut v, mean > 0.0, "as_profile.theta_model", "mean must be > 0".into())
        }
    }

    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_scenario_matches_reference_deployment() {
        let s = reference_scenario(DeploymentKind::MecM1, ServiceProfile::lloa(), 2080.0, 0.01)
            .unwrap();
        assert_eq!(s.topology.d_gnb_m1_km, 3.0);
        assert_eq!(s.topology.d_m1_m2_km, 12.0);
        assert_eq!(s.topology.d_m2_m3_km, 60.0);
        assert_eq!(s.topology.t_p_s, 0.2e-3);
        assert_eq!(s.topology.gnbs_per_m2(), 144);
        assert_eq!(s.topology.gnbs_per_m3(), 1728);
    }

    #[test]
    fn centralized_defaults_give_one_intermediate_node() {
        let s = reference_scenario(
            DeploymentKind::Centralized,
            ServiceProfile::lloa(),
            2080.0,
            0.01,
        )
        .unwrap();
        assert_eq!(s.topology.d_cn_km, 200.0);
        assert_eq!(s.topology.d_cn_max_km, 100.0);
        let cn = crate::corenet::cn_rates(&s);
        assert_eq!(cn.s_intermediate, 1);
    }

    #[test]
    fn invalid_alpha_is_rejected_with_the_violated_bound() {
        let err = reference_scenario(DeploymentKind::MecGnb, ServiceProfile::hloa(), 2080.0, 0.6)
            .unwrap_err();
        match err {
            Error::InvalidScenario { violations } => {
                assert!(violations.iter().any(|v| v.field.starts_with("alpha")));
            }
            other => panic!("expected invalid scenario, got {other:?}"),
        }
    }

    #[test]
    fn boundary_alpha_half_violates() {
        let mut s = reference_scenario(DeploymentKind::MecM1, ServiceProfile::lloa(), 2080.0, 0.01)
            .unwrap();
        s.alpha.alpha_ul = 0.5;
        let v = validate(&s);
        assert!(v.iter().any(|x| x.field == "alpha.alpha_ul"));
    }

    #[test]
    fn bad_split_fractions_are_reported() {
        let mut s = reference_scenario(DeploymentKind::MecM1, ServiceProfile::lloa(), 2080.0, 0.01)
            .unwrap();
        s.traffic.p_split.m1_to_gnb = Some(vec![0.15; 6]); // sums to 0.9
        let v = validate(&s);
        assert!(v.iter().any(|x| x.field == "traffic.p_split.m1_to_gnb"));
    }

    #[test]
    fn defaults_validate_for_all_paper_loads_and_alphas() {
        for &lambda in &REFERENCE_LAMBDAS {
            for &alpha in &[0.001, 0.01, 0.1] {
                for dep in DeploymentKind::ALL {
                    let s = reference_scenario(dep, ServiceProfile::hloa(), lambda, alpha)
                        .unwrap();
                    assert!(validate(&s).is_empty());
                }
            }
        }
    }

    #[test]
    fn default_scenario_is_deterministic() {
        let a = reference_scenario(DeploymentKind::MecCn, ServiceProfile::hloa(), 8320.0, 0.01)
            .unwrap();
        let b = reference_scenario(DeploymentKind::MecCn, ServiceProfile::hloa(), 8320.0, 0.01)
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn scenario_json_round_trips() {
        let s = reference_scenario(DeploymentKind::Centralized, ServiceProfile::hloa(), 4160.0, 0.01)
            .unwrap();
        let json = s.to_json();
        let back = Scenario::from_json(&json).unwrap();
        assert_eq!(s, back);
    }

    #[test]
    fn radio_csv_round_trips() {
        let table = RadioLatencyTable::reference_default();
        let csv = table.to_csv();
        let back = RadioLatencyTable::from_csv(&csv).unwrap();
        assert_eq!(table, back);
        let row = back.lookup("LLoA", 31200.0).unwrap();
        assert_eq!(row.p90_ms, Some(6.07));
        let row = back.lookup("HLoA", 10400.0).unwrap();
        assert!(!row.supported);
        assert_eq!(row.mean_ms, Some(1.67));
    }

    #[test]
    fn vehicle_derivation_applies_residual_loss() {
        let t = TrafficSpec::from_vehicles(40, 52.0, 0.0);
        assert!((t.lambda_gnb_ul - 2080.0).abs() < 1e-9);
        let t = TrafficSpec::from_vehicles(40, 52.0, 0.1);
        assert!((t.lambda_gnb_ul - 1872.0).abs() < 1e-9);
    }
}
