//! Error and violation types shared across the model.

use std::fmt;

/// Direction of a traffic flow through the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Direction {
    #[serde(rename = "UL")]
    Ul,
    #[serde(rename = "DL")]
    Dl,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::Ul => write!(f, "UL"),
            Direction::Dl => write!(f, "DL"),
        }
    }
}

/// A queueing node that cannot sustain its offered load (utilization >= 1).
#[derive(Debug, Clone, PartialEq)]
pub struct UnstableNode {
    pub node: String,
    pub direction: Direction,
    pub rho: f64,
}

impl fmt::Display for UnstableNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} (rho = {:.4})", self.node, self.direction, self.rho)
    }
}

/// A scenario invariant violation. Violations are data, not errors: `validate`
/// collects them so callers can report every problem at once.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub field: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A single queue was asked for a stationary quantity at rho >= 1.
    /// Packets would never depart such a node in finite time.
    Instability { lambda: f64, mu: f64 },
    /// One or more nodes on the scenario's path are unstable; this value of
    /// alpha is not sufficient to support the offered traffic.
    UnstablePath { nodes: Vec<UnstableNode> },
    /// Scenario invariants do not hold.
    InvalidScenario { violations: Vec<Violation> },
    /// No radio-latency row for the requested (service, lambda), or the row
    /// is marked unsupported.
    UnsupportedRadio { service: String, lambda: f64 },
    /// A tabulated distribution only knows specific percentiles.
    UnsupportedPercentile { requested: f64, available: Vec<f64> },
    /// Numeric convolution could not reach the requested tail mass within
    /// its horizon budget.
    HorizonExhausted { achieved_mass: f64 },
    /// Input that does not satisfy an operation's precondition.
    InvalidInput(String),
    /// Latency is not monotone in alpha over the sampled bracket, so the
    /// bisection's correctness precondition does not hold.
    NotMonotone(String),
    /// File or format problem for CSV/JSON interfaces.
    Format(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Instability { lambda, mu } => write!(
                f,
                "unstable queue: lambda = {lambda} >= mu = {mu} (rho = {:.4}); \
                 packets would never depart",
                if *mu > 0.0 { lambda / mu } else { f64::INFINITY }
            ),
            Error::UnstablePath { nodes } => {
                write!(
                    f,
                    "this value of alpha is not sufficient to support the traffic; unstable nodes: "
                )?;
                for (i, n) in nodes.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{n}")?;
                }
                Ok(())
            }
            Error::InvalidScenario { violations } => {
                write!(f, "invalid scenario ({} violations):", violations.len())?;
                for v in violations {
                    write!(f, " [{v}]")?;
                }
                Ok(())
            }
            Error::UnsupportedRadio { service, lambda } => write!(
                f,
                "radio table has no supported entry for service {service} at lambda = {lambda} pkts/s"
            ),
            Error::UnsupportedPercentile { requested, available } => write!(
                f,
                "tabulated distribution supports only percentiles {available:?}, requested {requested}"
            ),
            Error::HorizonExhausted { achieved_mass } => write!(
                f,
                "convolution horizon exhausted before reaching target tail mass (achieved CDF {achieved_mass})"
            ),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::NotMonotone(msg) => write!(f, "monotonicity precondition failed: {msg}"),
            Error::Format(msg) => write!(f, "format error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
