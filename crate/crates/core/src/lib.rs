//! End-to-end latency model for 5G V2N/V2N2V connections.
//!
//! The library composes per-segment latency distributions — radio (tabulated),
//! transport network (Jackson-style M/M/1 chain), core network (M/D/1 user
//! plane functions), Internet, inter-operator peering points, and the V2X
//! application server — into an end-to-end latency figure for four network
//! deployments (MEC at the gNB, at the first multiplexing stage, at the core,
//! or fully centralized in the cloud), and solves the link-dimensioning
//! problem: the smallest capacity fraction `alpha` that keeps every node
//! stable and meets a service's latency requirement at its reliability
//! percentile.
//!
//! A discrete-event simulator of the same queueing chains doubles as an
//! independent oracle for the analytical results.
//!
//! ```
//! use v2x_latency::{reference_scenario, DeploymentKind, ServiceProfile};
//! use v2x_latency::{compose, dimension};
//!
//! let s = reference_scenario(
//!     DeploymentKind::MecM1, ServiceProfile::hloa(), 2080.0, 0.01,
//! )?;
//! let breakdown = compose::compose(&s)?;
//! assert!(breakdown.verdict.is_meets());
//!
//! let result = dimension::alpha_min(&s)?;
//! assert!(result.alpha_min.unwrap() < 0.01);
//! # Ok::<(), v2x_latency::Error>(())
//! ```

pub mod appserver;
pub mod compose;
pub mod corenet;
pub mod dimension;
pub mod dist;
pub mod error;
pub mod externals;
pub mod published;
pub mod queueing;
pub mod scenario;
pub mod sim;
pub mod transport;

pub use dist::{convolve, AnchoredCdf, EmpiricalCdf, LatencyDistribution, PercentileTriple};
pub use error::{Direction, Error, Result, Violation};
pub use scenario::{
    reference_scenario, validate, AlphaAllocation, AsHardwareProfile, CompositionMode,
    DeploymentKind, MnoMode, RadioLatencyTable, Scenario, ServiceProfile, ThetaModel, Topology,
    TrafficSpec,
};
