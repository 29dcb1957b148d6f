//! Discrete-event simulation of single queues and of the deployment's
//! tandem TN/CN chain: the independent oracle for the analytical results.
//!
//! Queues are FIFO with Poisson arrivals; each node is a single server with
//! exponential (TN) or deterministic (UPF) service, matching the per-node
//! abstraction of the analytical model. Tandem runs inject cross traffic at
//! every aggregation stage (departures of an M/M/1 stage are Poisson, so a
//! fresh stream is exact in distribution) and preserve the tagged packets'
//! correlation across their whole path — the thing the single-exponential
//! transit approximation ignores.

use crate::corenet;
use crate::dist::{convolve_with, ConvolveParams, EmpiricalCdf, PercentileTriple};
use crate::error::{Direction, Error, Result};
use crate::scenario::{DeploymentKind, Scenario};
use crate::transport::{self, TnNode};
use rand::rngs::StdRng;
use rand::SeedableRng;
use rand_distr::{Distribution, Exp};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ServiceDiscipline {
    Exp,
    Det,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeSpec {
    pub discipline: ServiceDiscipline,
    /// Service rate mu (packets/s); deterministic service takes exactly 1/mu.
    pub rate: f64,
    /// Pure delay added after the node (processing, propagation).
    pub extra_delay: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub seed: u64,
    pub n_packets: usize,
    pub warmup: usize,
    /// Poisson arrival rate into the chain.
    pub arrival_rate: f64,
    pub chain: Vec<NodeSpec>,
}

#[derive(Debug, Clone)]
pub struct SimResult {
    /// Per-packet end-to-end sojourn times after warmup, in arrival order.
    pub samples: Vec<f64>,
    pub stats: Option<PercentileTriple>,
    /// False when the mean was still growing over the last two quartiles of
    /// the run (the signature of an unstable chain).
    pub converged: bool,
}

impl SimResult {
    pub fn cdf(&self) -> Option<EmpiricalCdf> {
        if self.samples.is_empty() {
            None
        } else {
            EmpiricalCdf::from_samples(self.samples.clone()).ok()
        }
    }

    pub fn samples_csv(&self) -> String {
        let mut out = String::from("sojourn_s\n");
        for s in &self.samples {
            out.push_str(&format!("{s}\n"));
        }
        out
    }
}

/// Smallest sample value covering fraction `p` of the sorted data.
pub fn sample_quantile(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    let idx = ((p * n as f64).ceil() as usize).clamp(1, n) - 1;
    sorted[idx]
}

fn stats_of(samples: &[f64]) -> Option<PercentileTriple> {
    if samples.is_empty() {
        return None;
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mean = sorted.iter().sum::<f64>() / sorted.len() as f64;
    Some(PercentileTriple {
        mean,
        p90: sample_quantile(&sorted, 0.90),
        p9999: sample_quantile(&sorted, 0.9999),
    })
}

fn growth_flag(samples: &[f64]) -> bool {
    // mean of the last quartile vs the one before it
    let n = samples.len();
    if n < 8 {
        return true;
    }
    let q3 = &samples[n / 2..3 * n / 4];
    let q4 = &samples[3 * n / 4..];
    let m3 = q3.iter().sum::<f64>() / q3.len() as f64;
    let m4 = q4.iter().sum::<f64>() / q4.len() as f64;
    m4 <= m3 * 1.10
}

/// Kolmogorov-Smirnov distance between a sorted sample set and a reference
/// CDF, sup_t |F_emp(t) - F(t)|. Atoms come out of a simulation smeared over
/// a few ulps of clock arithmetic, so ties are grouped within a relative
/// tolerance and the CDF's left limit is probed just below each group;
/// `cdf` must return 0 for negative arguments.
pub fn ks_distance<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> f64 {
    let n = sorted.len() as f64;
    let mut worst = 0.0f64;
    let mut i = 0usize;
    while i < sorted.len() {
        let x = sorted[i];
        let hi = x * (1.0 + 1e-9) + 1e-300;
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] <= hi {
            j += 1;
        }
        let below = i as f64 / n;
        let upto = (j + 1) as f64 / n;
        let left = x * (1.0 - 1e-9) - 1e-300;
        let right = sorted[j] * (1.0 + 1e-9) + 1e-300;
        worst = worst.max((cdf(left) - below).abs());
        worst = worst.max((cdf(right) - upto).abs());
        i = j + 1;
    }
    worst
}

// --- event streams -------------------------------------------------------

const BG: u32 = u32::MAX;

type Stream = Vec<(f64, u32)>;

fn poisson_arrivals(rng: &mut StdRng, rate: f64, n: usize) -> Stream {
    let exp = Exp::new(rate).expect("positive rate");
    let mut t = 0.0;
    let mut out = Vec::with_capacity(n);
    for id in 0..n {
        t += exp.sample(rng);
        out.push((t, id as u32));
    }
    out
}

fn poisson_background(rng: &mut StdRng, rate: f64, horizon: f64) -> Stream {
    if rate <= 0.0 {
        return Vec::new();
    }
    let exp = Exp::new(rate).expect("positive rate");
    let mut t = exp.sample(rng);
    let mut out = Vec::with_capacity((rate * horizon) as usize + 16);
    while t <= horizon {
        out.push((t, BG));
        t += exp.sample(rng);
    }
    out
}

fn merge(a: Stream, b: Stream) -> Stream {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i].0 <= b[j].0 {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// FIFO single-server queue: departure = max(arrival, previous departure) + service.
fn queue(stream: &mut Stream, discipline: ServiceDiscipline, mu: f64, rng: &mut StdRng) {
    match discipline {
        ServiceDiscipline::Det => {
            let d = 1.0 / mu;
            let mut clock = f64::NEG_INFINITY;
            for ev in stream.iter_mut() {
                clock = ev.0.max(clock) + d;
                ev.0 = clock;
            }
        }
        ServiceDiscipline::Exp => {
            let exp = Exp::new(mu).expect("positive rate");
            let mut clock = f64::NEG_INFINITY;
            for ev in stream.iter_mut() {
                clock = ev.0.max(clock) + exp.sample(rng);
                ev.0 = clock;
            }
        }
    }
}

fn delay(stream: &mut Stream, d: f64) {
    if d != 0.0 {
        for ev in stream.iter_mut() {
            ev.0 += d;
        }
    }
}

/// Keep every tagged packet, keep background with probability `keep_p`.
fn thin(stream: Stream, keep_p: f64, rng: &mut StdRng) -> Stream {
    use rand::Rng;
    stream
        .into_iter()
        .filter(|&(_, id)| id != BG || rng.random::<f64>() < keep_p)
        .collect()
}

// --- public operations ----------------------------------------------------

/// Simulate a single Poisson-fed chain of queues and record per-packet
/// sojourn times after warmup. Deterministic for a given seed.
pub fn simulate(config: &SimConfig) -> Result<SimResult> {
    if config.warmup >= config.n_packets && config.arrival_rate > 0.0 {
        return Err(Error::InvalidInput(format!(
            "need n_packets ({}) > warmup ({})",
            config.n_packets, config.warmup
        )));
    }
    if config.arrival_rate < 0.0 {
        return Err(Error::InvalidInput("arrival rate must be >= 0".into()));
    }
    if config.arrival_rate == 0.0 || config.n_packets == 0 {
        // arrivals disabled: zero samples after warmup, reported as such
        return Ok(SimResult { samples: Vec::new(), stats: None, converged: true });
    }
    let mut rng = StdRng::seed_from_u64(config.seed);
    let arrivals = poisson_arrivals(&mut rng, config.arrival_rate, config.n_packets);
    let mut stream = arrivals.clone();
    for node in &config.chain {
        if node.rate.is_nan() || node.rate <= 0.0 {
            return Err(Error::InvalidInput("node service rates must be > 0".into()));
        }
        queue(&mut stream, node.discipline, node.rate, &mut rng);
        delay(&mut stream, node.extra_delay);
    }
    let samples: Vec<f64> = stream
        .iter()
        .zip(arrivals.iter())
        .skip(config.warmup)
        .map(|(out, arr)| out.0 - arr.0)
        .collect();
    let converged = growth_flag(&samples);
    Ok(SimResult { stats: stats_of(&samples), samples, converged })
}

#[derive(Debug, Clone)]
pub struct DeploymentSimResult {
    pub samples: usize,
    /// Simulated round-trip TN + CN latency (radio and AS excluded).
    pub empirical: PercentileTriple,
    /// The analytical distribution of the same chain (TN convolved with CN).
    pub analytical: PercentileTriple,
}

impl DeploymentSimResult {
    pub fn relative_deviation(&self) -> PercentileTriple {
        PercentileTriple {
            mean: (self.empirical.mean - self.analytical.mean).abs() / self.analytical.mean,
            p90: (self.empirical.p90 - self.analytical.p90).abs() / self.analytical.p90,
            p9999: (self.empirical.p9999 - self.analytical.p9999).abs() / self.analytical.p9999,
        }
    }
}

fn rate_of(rates: &[transport::NodeRates], node: TnNode, dir: Direction) -> Option<(f64, f64)> {
    rates.iter().find(|r| r.node == node && r.direction == dir).map(|r| (r.lambda, r.mu))
}

/// Simulate the scenario's full TN + CN round trip for `n_packets` tagged
/// packets originating at one gNB, with cross traffic at every aggregation
/// point, and compare against the analytical distribution.
pub fn simulate_deployment(s: &Scenario, n_packets: usize, seed: u64) -> Result<DeploymentSimResult> {
    let violations = crate::scenario::validate(s);
    if !violations.is_empty() {
        return Err(Error::InvalidScenario { violations });
    }
    if s.traffic.m_copies != 1 {
        return Err(Error::InvalidInput(
            "the deployment simulator models broadcast forwarding (M = 1)".into(),
        ));
    }
    let rates = transport::tn_rates(s);
    if let Some(unstable) = rates.iter().find(|r| !r.is_stable()) {
        return Err(Error::UnstablePath {
            nodes: vec![crate::error::UnstableNode {
                node: unstable.node.to_string(),
                direction: unstable.direction,
                rho: unstable.rho(),
            }],
        });
    }
    let cn = corenet::cn_rates(s);
    let lambda_tagged = s.traffic.lambda_gnb_ul;
    let cross_ratio = cn.lambda_upf_ul / lambda_tagged;
    if n_packets as f64 * cross_ratio > 5e7 {
        return Err(Error::InvalidInput(format!(
            "cross-traffic volume ~{:.1e} events is too large; lower n_packets",
            n_packets as f64 * cross_ratio
        )));
    }

    let t = &s.topology;
    let tp = t.t_p_s;
    let d1 = t.d_gnb_m1_km / t.v_km_s;
    let d2 = t.d_m1_m2_km / t.v_km_s;
    let d3 = t.d_m2_m3_km / t.v_km_s;
    let dcn = cn.d_cn_km / t.v_km_s;

    let mut rng = StdRng::seed_from_u64(seed);
    let tagged = poisson_arrivals(&mut rng, lambda_tagged, n_packets);
    let horizon = tagged.last().map(|e| e.0).unwrap_or(0.0);
    let mut stream = tagged.clone();

    // --- uplink TN ---
    let (_, mu_gnb) = rate_of(&rates, TnNode::Gnb, Direction::Ul).expect("gNB UL");
    delay(&mut stream, tp);
    queue(&mut stream, ServiceDiscipline::Exp, mu_gnb, &mut rng);
    let mut carried = lambda_tagged;
    for (node, hop) in [(TnNode::M1, d1), (TnNode::M2, d2), (TnNode::M3, d3)] {
        if let Some((lambda, mu)) = rate_of(&rates, node, Direction::Ul) {
            delay(&mut stream, hop);
            let bg = poisson_background(&mut rng, lambda - carried, horizon);
            stream = merge(stream, bg);
            delay(&mut stream, tp);
            queue(&mut stream, ServiceDiscipline::Exp, mu, &mut rng);
            carried = lambda;
        }
    }

    // --- uplink CN ---
    queue(&mut stream, ServiceDiscipline::Det, cn.mu_upf_ul, &mut rng);
    delay(&mut stream, 1.0 / cn.mu_upf_ul);
    if s.deployment == DeploymentKind::Centralized {
        delay(&mut stream, cn.s_intermediate as f64 * 2.0 / cn.mu_upf_ul + dcn);
        queue(&mut stream, ServiceDiscipline::Det, cn.mu_upf_ul, &mut rng);
        delay(&mut stream, 1.0 / cn.mu_upf_ul);
    }

    // --- AS turnaround (forwarding; AS latency itself is a separate segment)
    // --- downlink CN ---
    queue(&mut stream, ServiceDiscipline::Det, cn.mu_upf_dl, &mut rng);
    delay(&mut stream, 1.0 / cn.mu_upf_dl);
    if s.deployment == DeploymentKind::Centralized {
        delay(&mut stream, cn.s_intermediate as f64 * 2.0 / cn.mu_upf_dl + dcn);
        queue(&mut stream, ServiceDiscipline::Det, cn.mu_upf_dl, &mut rng);
        delay(&mut stream, 1.0 / cn.mu_upf_dl);
    }

    // --- downlink TN ---
    let mut upstream_rate = cn.lambda_upf_dl;
    for (node, hop) in [(TnNode::M3, d3), (TnNode::M2, d2), (TnNode::M1, d1)] {
        if let Some((lambda, mu)) = rate_of(&rates, node, Direction::Dl) {
            // thin the background down to this link's share, keep tagged
            let keep_p = if upstream_rate - lambda_tagged > 0.0 {
                ((lambda - lambda_tagged) / (upstream_rate - lambda_tagged)).clamp(0.0, 1.0)
            } else {
                0.0
            };
            stream = thin(stream, keep_p, &mut rng);
            delay(&mut stream, tp);
            queue(&mut stream, ServiceDiscipline::Exp, mu, &mut rng);
            delay(&mut stream, hop);
            upstream_rate = lambda;
        }
    }
    delay(&mut stream, tp); // gNB downlink processing

    // --- collect round trips ---
    let mut completion = vec![f64::NAN; n_packets];
    for &(time, id) in &stream {
        if id != BG {
            completion[id as usize] = time;
        }
    }
    let samples: Vec<f64> = tagged
        .iter()
        .skip(s_warmup(n_packets))
        .map(|&(t0, id)| completion[id as usize] - t0)
        .collect();
    let empirical = stats_of(&samples)
        .ok_or_else(|| Error::InvalidInput("no samples survived warmup".into()))?;

    // --- analytical counterpart ---
    let tn = transport::tn_latency(s)?;
    let cn_dist = corenet::cn_latency(s)?;
    let total = convolve_with(
        &tn,
        &cn_dist,
        &ConvolveParams { step: 1e-6, tail_eps: 1e-7, max_cells: 1 << 22 },
    )?;
    let analytical = PercentileTriple {
        mean: tn.mean() + corenet::cn_mean_rt(s)?,
        p90: total.percentile(0.90)?,
        p9999: total.percentile(0.9999)?,
    };

    Ok(DeploymentSimResult { samples: samples.len(), empirical, analytical })
}

fn s_warmup(n: usize) -> usize {
    n / 10
}
