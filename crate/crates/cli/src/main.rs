//! Command-line front end: build scenarios (defaults, file, flag overrides),
//! run compose/sweep/dimension/simulate, and reproduce the published
//! evaluation tables with per-cell deviations.
//!
//! Exit codes: 0 success (including red/violates verdicts), 2 bad input,
//! 3 computation infeasible (unsupported radio load or an unstable path).

mod reproduce;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::path::PathBuf;
use v2x_latency::compose::{self, format_ms, StatTriple, Verdict};
use v2x_latency::dimension::{self, BindingConstraint};
use v2x_latency::sim::{self, NodeSpec, SimConfig};
use v2x_latency::{
    reference_scenario, CompositionMode, DeploymentKind, MnoMode, RadioLatencyTable, Scenario,
    ServiceProfile, ThetaModel,
};

const EXIT_BAD_INPUT: i32 = 2;
const EXIT_INFEASIBLE: i32 = 3;

#[derive(Parser)]
#[command(
    name = "v2x-latency",
    version,
    about = "End-to-end latency and link dimensioning for 5G V2N/V2N2V deployments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    PercentileSum,
    Convolution,
}

#[derive(Clone, Copy, ValueEnum)]
enum Discipline {
    Exp,
    Det,
}

/// Scenario construction shared by the computing subcommands: the built-in
/// defaults, optionally replaced by a scenario file, then overridden by flags.
#[derive(Args, Clone)]
struct ScenarioArgs {
    /// Deployment: mec-gnb, mec-m1, mec-cn or centralized
    #[arg(long)]
    deployment: Option<String>,
    /// Service profile: lloa (25 ms @ 90%) or hloa (10 ms @ 99.99%)
    #[arg(long)]
    service: Option<String>,
    /// Per-gNB uplink packet rate (packets/s)
    #[arg(long)]
    lambda: Option<f64>,
    /// Capacity fraction reserved per direction
    #[arg(long)]
    alpha: Option<f64>,
    /// single, multi (deployment default peering), multi-local or multi-remote
    #[arg(long, default_value = "single")]
    mno: String,
    /// percentile-sum (published-table composition) or convolution
    #[arg(long, value_enum, default_value = "percentile-sum")]
    mode: Mode,
    /// Scenario JSON file used instead of the built-in defaults
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Radio-latency table CSV replacing the built-in dataset
    #[arg(long)]
    radio_csv: Option<PathBuf>,
    /// Packet size in bits
    #[arg(long)]
    b_bits: Option<f64>,
    /// Downlink copies forwarded per uplink packet
    #[arg(long)]
    m_copies: Option<u32>,
    /// Radio slot duration in ms (AS batching window)
    #[arg(long)]
    t_tt_ms: Option<f64>,
    /// AS processors available
    #[arg(long)]
    processors: Option<u32>,
    /// Parallel units (threads) per processor
    #[arg(long)]
    parallel_units: Option<u32>,
    /// Per-unit frequency in GHz
    #[arg(long)]
    frequency_ghz: Option<f64>,
    /// Forwarding cost model: uniform or exponential
    #[arg(long)]
    theta: Option<String>,
    /// gNBs aggregated at the AS (defaults to the deployment fan-in)
    #[arg(long)]
    aggregated_gnbs: Option<u64>,
    /// Core-network distance in km
    #[arg(long)]
    d_cn_km: Option<f64>,
    /// Maximum distance between core nodes in km
    #[arg(long)]
    d_cn_max_km: Option<f64>,
    /// UPF-AS link capacity in bits/s
    #[arg(long)]
    c_upf_as: Option<f64>,
    /// Residual uplink radio loss fraction
    #[arg(long)]
    p_loss: Option<f64>,
}

impl ScenarioArgs {
    fn deployment(&self) -> anyhow::Result<DeploymentKind> {
        let text = self.deployment.as_deref().unwrap_or("mec-gnb");
        DeploymentKind::parse(text)
            .ok_or_else(|| anyhow::anyhow!("unknown deployment `{text}` (mec-gnb, mec-m1, mec-cn, centralized)"))
    }

    fn service(&self) -> anyhow::Result<ServiceProfile> {
        let text = self.service.as_deref().unwrap_or("lloa");
        ServiceProfile::by_name(text)
            .ok_or_else(|| anyhow::anyhow!("unknown service `{text}` (lloa, hloa)"))
    }

    fn mno(&self, deployment: DeploymentKind) -> anyhow::Result<MnoMode> {
        match self.mno.to_ascii_lowercase().as_str() {
            "multi" => Ok(match deployment {
                DeploymentKind::Centralized => MnoMode::MultiRemote,
                _ => MnoMode::MultiLocal,
            }),
            other => MnoMode::parse(other)
                .ok_or_else(|| anyhow::anyhow!("unknown MNO mode `{other}` (single, multi, multi-local, multi-remote)")),
        }
    }

    fn build(&self) -> anyhow::Result<Scenario> {
        let deployment = self.deployment()?;
        let mut s = match &self.scenario {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))?;
                Scenario::from_json(&text)?
            }
            None => reference_scenario(
                deployment,
                self.service()?,
                self.lambda.unwrap_or(2080.0),
                self.alpha.unwrap_or(0.01),
            )?,
        };
        // flags override whatever the file provided
        if self.deployment.is_some() || self.scenario.is_none() {
            s.deployment = deployment;
            if self.scenario.is_none() {
                // deployment-specific AS hardware for pure-default scenarios
                s.as_profile = v2x_latency::AsHardwareProfile::reference_default(deployment);
            }
        }
        if self.service.is_some() {
            s.service = self.service()?;
        }
        if let Some(lambda) = self.lambda {
            s.traffic.lambda_gnb_ul = lambda;
        }
        if let Some(alpha) = self.alpha {
            s.alpha = v2x_latency::AlphaAllocation::symmetric(alpha);
        }
        s.mno_mode = self.mno(s.deployment)?;
        s.composition_mode = match self.mode {
            Mode::PercentileSum => CompositionMode::PercentileSum,
            Mode::Convolution => CompositionMode::Convolution,
        };
        if let Some(path) = &self.radio_csv {
            let text = std::fs::read_to_string(path)
                .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))?;
            s.radio = RadioLatencyTable::from_csv(&text)?;
        }
        if let Some(b) = self.b_bits {
            s.traffic.b_bits = b;
        }
        if let Some(m) = self.m_copies {
            s.traffic.m_copies = m;
        }
        if let Some(p) = self.p_loss {
            s.traffic.p_loss = p;
        }
        if let Some(t) = self.t_tt_ms {
            s.as_profile.t_tt_s = t * 1e-3;
        }
        if let Some(n) = self.processors {
            s.as_profile.processors = n;
        }
        if let Some(u) = self.parallel_units {
            s.as_profile.parallel_units_per_processor = u;
        }
        if let Some(f) = self.frequency_ghz {
            s.as_profile.frequency_hz = f * 1e9;
        }
        if let Some(theta) = &self.theta {
            s.as_profile.theta_model = match theta.to_ascii_lowercase().as_str() {
                "uniform" => ThetaModel::Uniform { lo: 100.0, hi: 300.0 },
                "exponential" => ThetaModel::Exponential { mean: 200.0 },
                other => anyhow::bail!("unknown theta model `{other}` (uniform, exponential)"),
            };
        }
        if let Some(n) = self.aggregated_gnbs {
            s.as_profile.aggregated_gnbs = Some(n);
        }
        if let Some(d) = self.d_cn_km {
            s.topology.d_cn_km = d;
        }
        if let Some(d) = self.d_cn_max_km {
            s.topology.d_cn_max_km = d;
        }
        if let Some(c) = self.c_upf_as {
            s.topology.c_upf_as = c;
        }
        Ok(s)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one scenario into its per-component breakdown and verdict
    Compose {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Two-column CDF CSV (t_ms,F) replacing the built-in Internet model
        #[arg(long)]
        internet_cdf: Option<PathBuf>,
        /// Two-column CDF CSV (t_ms,F) replacing the built-in peering model
        #[arg(long)]
        peering_cdf: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Write the rendering to a file instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Cross-product evaluation over lambdas/alphas/deployments/services
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Comma-separated per-gNB loads; default: the evaluated load set
        #[arg(long)]
        lambdas: Option<String>,
        /// Comma-separated capacity fractions
        #[arg(long, default_value = "0.001,0.01")]
        alphas: String,
        /// Comma-separated deployments; default: all four
        #[arg(long)]
        deployments: Option<String>,
        /// Comma-separated services; default: lloa,hloa
        #[arg(long, default_value = "lloa,hloa")]
        services: String,
        /// Worker threads (default: available parallelism)
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Solve for the minimum capacity fraction alpha
    Dimension {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Sweep these comma-separated loads instead of a single solve
        #[arg(long)]
        lambdas: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Discrete-event simulation of a single queue or a full deployment chain
    Simulate {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Simulate the scenario's TN+CN chain instead of a single queue
        #[arg(long)]
        chain: bool,
        /// Single-queue service rate (packets/s)
        #[arg(long)]
        mu: Option<f64>,
        #[arg(long, value_enum, default_value = "exp")]
        discipline: Discipline,
        /// Deterministic delay appended after the queue, seconds
        #[arg(long, default_value_t = 0.0)]
        extra: f64,
        #[arg(long, default_value_t = 100_000)]
        packets: usize,
        /// Warmup packets discarded (default: 10% of packets)
        #[arg(long)]
        warmup: Option<usize>,
        #[arg(long)]
        seed: u64,
        /// Dump per-packet sojourn samples to a CSV file
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Recompute a published evaluation table and show per-cell deviations
    ReproduceTable {
        /// Table identifier: V, VI, VII, VIII, IX, X, XI, XII, XIII, XIV, XV
        id: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> anyhow::Result<Vec<T>> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<T>().map_err(|_| anyhow::anyhow!("bad {what} value `{t}`")))
        .collect()
}

fn emit(text: &str, output: &Option<PathBuf>) -> anyhow::Result<()> {
    match output {
        Some(path) => {
            let mut f = std::fs::File::create(path)?;
            f.write_all(text.as_bytes())?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn triple_row(label: &str, t: &Option<StatTriple>, note: Option<&str>) -> Vec<String> {
    let cell = |v: Option<f64>| v.map(format_ms).unwrap_or_else(|| "-".into());
    match t {
        Some(t) => vec![
            label.into(),
            cell(t.mean_ms),
            cell(t.p90_ms),
            cell(t.p9999_ms),
            note.unwrap_or("").into(),
        ],
        None => vec![label.into(), "-".into(), "-".into(), "-".into(), note.unwrap_or("").into()],
    }
}

fn render_breakdown(b: &compose::ComponentBreakdown) -> String {
    let header: Vec<String> =
        ["component", "mean_ms", "p90_ms", "p9999_ms", "notes"].iter().map(|s| s.to_string()).collect();
    let mut rows = Vec::new();
    rows.push(triple_row(
        "radio",
        &b.radio,
        (!b.radio_supported).then_some("unsupported load").or(None),
    ));
    rows.push(triple_row("transport", &b.tn, b.tn_note.as_deref()));
    rows.push(triple_row("core", &b.cn, b.cn_note.as_deref()));
    if b.upf_as.is_some() {
        rows.push(triple_row("internet (UPF-AS)", &b.upf_as, None));
    }
    rows.push(triple_row(
        "app server",
        &Some(b.app_server),
        b.as_clamped.then_some("needs re-dimensioning to run at this bound"),
    ));
    rows.push(triple_row(
        &format!("peering ({})", b.peering_kind.label()),
        &Some(b.peering),
        Some("multi-MNO totals only"),
    ));
    rows.push(triple_row("e2e single-MNO", &b.total_single, None));
    rows.push(triple_row("e2e multi-MNO", &b.total_multi, None));

    let mut out = format!(
        "{} | {} | lambda {} pkts/s | alpha {} | {}\n",
        b.deployment,
        b.service.name,
        format_ms(b.lambda),
        format_ms(b.alpha_ul),
        match b.mno_mode {
            MnoMode::Single => "single-MNO",
            MnoMode::MultiLocal => "multi-MNO (local peering)",
            MnoMode::MultiRemote => "multi-MNO (remote peering)",
        }
    );
    out.push_str(&compose::render_table(&header, &rows));
    out.push_str(&format!(
        "verdict (single-MNO): {}\nverdict (multi-MNO):  {}\nrequirement: {} ms at the {}th percentile\n",
        b.verdict_single,
        b.verdict_multi,
        format_ms(b.service.l_req_ms),
        format_ms(b.service.reliability_percentile * 100.0),
    ));
    if b.mean_disagrees_single || b.mean_disagrees_multi {
        out.push_str(
            "note: a mean-based evaluation reaches the opposite verdict; averages mislead here\n",
        );
    }
    out
}

fn load_cdf(path: &Option<PathBuf>) -> anyhow::Result<Option<v2x_latency::LatencyDistribution>> {
    match path {
        None => Ok(None),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", p.display()))?;
            Ok(Some(v2x_latency::externals::load_cdf_csv(&text, 1e-3)?))
        }
    }
}

fn run_compose(
    scenario: &ScenarioArgs,
    internet_cdf: &Option<PathBuf>,
    peering_cdf: &Option<PathBuf>,
    format: Format,
    output: &Option<PathBuf>,
) -> anyhow::Result<i32> {
    let s = scenario.build()?;
    let externals = compose::ExternalOverrides {
        internet_rt: load_cdf(internet_cdf)?,
        peering: load_cdf(peering_cdf)?,
    };
    let b = compose::compose_with(&s, &externals)?;
    let text = match format {
        Format::Text => render_breakdown(&b),
        Format::Csv => {
            let cell = compose::SweepCell {
                deployment: b.deployment,
                service: b.service.clone(),
                lambda: b.lambda,
                alpha: b.alpha_ul,
                outcome: Ok(b.clone()),
            };
            compose::render_csv(&compose::SWEEP_HEADER, &compose::sweep_rows(&[cell]))
        }
    };
    emit(&text, output)?;
    if let Verdict::Unsupported(cause) = &b.verdict {
        eprintln!("infeasible: {cause}");
        return Ok(EXIT_INFEASIBLE);
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn run_sweep(
    scenario: &ScenarioArgs,
    lambdas: &Option<String>,
    alphas: &str,
    deployments: &Option<String>,
    services: &str,
    jobs: Option<usize>,
    format: Format,
    output: &Option<PathBuf>,
) -> anyhow::Result<i32> {
    let base = scenario.build()?;
    let lambdas: Vec<f64> = match lambdas {
        Some(text) => parse_list(text, "lambda")?,
        None => v2x_latency::scenario::REFERENCE_LAMBDAS.to_vec(),
    };
    let alphas: Vec<f64> = parse_list(alphas, "alpha")?;
    let deployments: Vec<DeploymentKind> = match deployments {
        Some(text) => text
            .split(',')
            .map(str::trim)
            .map(|t| DeploymentKind::parse(t).ok_or_else(|| anyhow::anyhow!("unknown deployment `{t}`")))
            .collect::<anyhow::Result<_>>()?,
        None => DeploymentKind::ALL.to_vec(),
    };
    let services: Vec<ServiceProfile> = services
        .split(',')
        .map(str::trim)
        .map(|t| ServiceProfile::by_name(t).ok_or_else(|| anyhow::anyhow!("unknown service `{t}`")))
        .collect::<anyhow::Result<_>>()?;

    let jobs = jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
        .max(1);
    let cells = if jobs == 1 {
        compose::sweep(&base, &lambdas, &alphas, &deployments, &services)
    } else {
        sweep_parallel(&base, &lambdas, &alphas, &deployments, &services, jobs)
    };
    let rows = compose::sweep_rows(&cells);
    let text = match format {
        Format::Csv => compose::render_csv(&compose::SWEEP_HEADER, &rows),
        Format::Text => {
            let header: Vec<String> = compose::SWEEP_HEADER.iter().map(|s| s.to_string()).collect();
            compose::render_table(&header, &rows)
        }
    };
    emit(&text, output)?;
    Ok(0)
}

/// Parallel sweep with results identical (and identically ordered) to the
/// sequential evaluation: the cross-product cells are computed by index.
fn sweep_parallel(
    base: &Scenario,
    lambdas: &[f64],
    alphas: &[f64],
    deployments: &[DeploymentKind],
    services: &[ServiceProfile],
    jobs: usize,
) -> Vec<compose::SweepCell> {
    let mut axes = Vec::new();
    for &dep in deployments {
        for svc in services {
            for &lambda in lambdas {
                for &alpha in alphas {
                    axes.push((dep, svc.clone(), lambda, alpha));
                }
            }
        }
    }
    let mut cells: Vec<Option<compose::SweepCell>> = vec![None; axes.len()];
    let counter = std::sync::atomic::AtomicUsize::new(0);
    let slots: Vec<std::sync::Mutex<&mut Option<compose::SweepCell>>> =
        cells.iter_mut().map(std::sync::Mutex::new).collect();
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(axes.len()) {
            scope.spawn(|| loop {
                let i = counter.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= axes.len() {
                    break;
                }
                let (dep, svc, lambda, alpha) = &axes[i];
                let got = compose::sweep(base, &[*lambda], &[*alpha], &[*dep], std::slice::from_ref(svc));
                **slots[i].lock().unwrap() = got.into_iter().next();
            });
        }
    });
    cells.into_iter().map(|c| c.expect("all cells computed")).collect()
}

fn render_dimension(cells: &[dimension::AlphaMinCell]) -> (Vec<String>, Vec<Vec<String>>) {
    let header: Vec<String> =
        ["deployment", "service", "lambda", "mno", "alpha_min", "binding", "achieved_ms"]
            .iter()
            .map(|s| s.to_string())
            .collect();
    let rows = cells
        .iter()
        .map(|c| {
            let mno = match c.mno_mode {
                MnoMode::Single => "single",
                MnoMode::MultiLocal => "multi-local",
                MnoMode::MultiRemote => "multi-remote",
            };
            match &c.outcome {
                Ok(r) => {
                    let alpha = r.alpha_min.map(|a| format!("{a:.6}")).unwrap_or_else(|| "-".into());
                    let binding = match &r.binding {
                        BindingConstraint::Stability { node } => format!("stability({node})"),
                        BindingConstraint::Latency { l_req_ms } => {
                            format!("latency({} ms)", format_ms(*l_req_ms))
                        }
                        BindingConstraint::Infeasible { cause } => {
                            format!("infeasible: {}", cause.replace(',', ";"))
                        }
                    };
                    let achieved = r
                        .achieved
                        .and_then(|t| t.at_percentile(c.service.reliability_percentile))
                        .map(format_ms)
                        .unwrap_or_else(|| "-".into());
                    vec![
                        c.deployment.label().into(),
                        c.service.name.clone(),
                        format_ms(c.lambda),
                        mno.into(),
                        alpha,
                        binding,
                        achieved,
                    ]
                }
                Err(e) => vec![
                    c.deployment.label().into(),
                    c.service.name.clone(),
                    format_ms(c.lambda),
                    mno.into(),
                    "-".into(),
                    format!("error: {}", e.replace(',', ";")),
                    "-".into(),
                ],
            }
        })
        .collect();
    (header, rows)
}

fn run_dimension(
    scenario: &ScenarioArgs,
    lambdas: &Option<String>,
    format: Format,
    output: &Option<PathBuf>,
) -> anyhow::Result<i32> {
    let base = scenario.build()?;
    let mut monotonicity_note = String::new();
    let cells = match lambdas {
        Some(text) => {
            let lambdas: Vec<f64> = parse_list(text, "lambda")?;
            let sweep = dimension::alpha_min_sweep(
                &base,
                &lambdas,
                &[base.deployment],
                std::slice::from_ref(&base.service),
                &[base.mno_mode],
            );
            monotonicity_note = if sweep.monotone_in_lambda {
                "alpha_min is nondecreasing in lambda across the sweep\n".to_string()
            } else {
                format!(
                    "alpha_min monotonicity violations: {}\n",
                    sweep.monotonicity_violations.join("; ")
                )
            };
            sweep.cells
        }
        None => {
            let outcome = dimension::alpha_min(&base).map_err(|e| e.to_string());
            vec![dimension::AlphaMinCell {
                deployment: base.deployment,
                service: base.service.clone(),
                lambda: base.traffic.lambda_gnb_ul,
                mno_mode: base.mno_mode,
                outcome,
            }]
        }
    };
    let (header, rows) = render_dimension(&cells);
    let text = match format {
        Format::Csv => {
            let head: Vec<&str> = header.iter().map(String::as_str).collect();
            compose::render_csv(&head, &rows)
        }
        Format::Text => {
            let mut t = compose::render_table(&header, &rows);
            t.push_str(&monotonicity_note);
            t
        }
    };
    emit(&text, output)?;
    let any_infeasible = cells.iter().any(|c| {
        matches!(
            &c.outcome,
            Ok(r) if !r.is_feasible()
        ) || c.outcome.is_err()
    });
    Ok(if any_infeasible { EXIT_INFEASIBLE } else { 0 })
}

#[allow(clippy::too_many_arguments)]
fn run_simulate(
    scenario: &ScenarioArgs,
    chain: bool,
    mu: Option<f64>,
    discipline: Discipline,
    extra: f64,
    packets: usize,
    warmup: Option<usize>,
    seed: u64,
    dump: &Option<PathBuf>,
) -> anyhow::Result<i32> {
    if chain {
        let s = scenario.build()?;
        let r = sim::simulate_deployment(&s, packets, seed)?;
        println!(
            "deployment chain {} | lambda {} | alpha {} | {} round-trip samples",
            s.deployment,
            format_ms(s.traffic.lambda_gnb_ul),
            format_ms(s.alpha.alpha_ul),
            r.samples
        );
        let dev = r.relative_deviation();
        println!(
            "simulated   mean {:.6} ms | p90 {:.6} ms | p99.99 {:.6} ms",
            r.empirical.mean * 1e3,
            r.empirical.p90 * 1e3,
            r.empirical.p9999 * 1e3
        );
        println!(
            "analytical  mean {:.6} ms | p90 {:.6} ms | p99.99 {:.6} ms",
            r.analytical.mean * 1e3,
            r.analytical.p90 * 1e3,
            r.analytical.p9999 * 1e3
        );
        println!(
            "deviation   mean {:.2}% | p90 {:.2}% | p99.99 {:.2}%",
            dev.mean * 100.0,
            dev.p90 * 100.0,
            dev.p9999 * 100.0
        );
        return Ok(0);
    }
    let lambda = scenario
        .lambda
        .ok_or_else(|| anyhow::anyhow!("--lambda is required for a single-queue simulation"))?;
    let mu = mu.ok_or_else(|| anyhow::anyhow!("--mu is required for a single-queue simulation"))?;
    let config = SimConfig {
        seed,
        n_packets: packets,
        warmup: warmup.unwrap_or(packets / 10),
        arrival_rate: lambda,
        chain: vec![NodeSpec {
            discipline: match discipline {
                Discipline::Exp => sim::ServiceDiscipline::Exp,
                Discipline::Det => sim::ServiceDiscipline::Det,
            },
            rate: mu,
            extra_delay: extra,
        }],
    };
    let r = sim::simulate(&config)?;
    match &r.stats {
        Some(stats) => println!(
            "{} samples | mean {:.6e} s | p90 {:.6e} s | p99.99 {:.6e} s | converged: {}",
            r.samples.len(),
            stats.mean,
            stats.p90,
            stats.p9999,
            r.converged
        ),
        None => println!("0 samples recorded (arrivals disabled)"),
    }
    if let Some(path) = dump {
        std::fs::write(path, r.samples_csv())?;
        println!("samples written to {}", path.display());
    }
    Ok(0)
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Compose { scenario, internet_cdf, peering_cdf, format, output } => {
            run_compose(scenario, internet_cdf, peering_cdf, *format, output)
        }
        Command::Sweep { scenario, lambdas, alphas, deployments, services, jobs, format, output } => {
            run_sweep(scenario, lambdas, alphas, deployments, services, *jobs, *format, output)
        }
        Command::Dimension { scenario, lambdas, format, output } => {
            run_dimension(scenario, lambdas, *format, output)
        }
        Command::Simulate { scenario, chain, mu, discipline, extra, packets, warmup, seed, dump } => {
            run_simulate(scenario, *chain, *mu, *discipline, *extra, *packets, *warmup, *seed, dump)
        }
        Command::ReproduceTable { id, format, output } => {
            reproduce::run(id, matches!(format, Format::Csv)).and_then(|text| {
                emit(&text, output)?;
                Ok(0)
            })
        }
    };
    match result {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            // infeasible computations exit 3; everything else is bad input
            let text = err.to_string();
            if text.contains("not sufficient to support") || text.contains("no supported entry") {
                std::process::exit(EXIT_INFEASIBLE);
            }
            std::process::exit(EXIT_BAD_INPUT);
        }
    }
}
