//! Published reference values from the evaluation study this model
//! reproduces. They are used exclusively for deviation reporting
//! (`reproduce-table`) and acceptance checks — never as computation inputs.
//!
//! All latency values are in milliseconds. `None` marks cells the published
//! tables leave empty ('-' or '*': unsupported radio load or an alpha too
//! small to keep the path stable).

/// Round-trip propagation and processing shifts per deployment, ms.
/// Order: MEC@gNB, MEC@M1, MEC@CN, Centralized.
pub const TABLE_V: [(f64, f64); 4] = [(0.0, 0.4), (0.03, 0.8), (0.75, 1.6), (0.75, 1.6)];

pub const TABLE_VI_ALPHAS: [f64; 3] = [0.001, 0.01, 0.1];

/// Transport-network latency (mean, p90, p99.99) at lambda = 2080 pkts/s per
/// deployment and alpha. MEC@CN and Centralized share one published row.
pub const TABLE_VI: [[Option<(f64, f64, f64)>; 3]; 4] = [
    [Some((0.908, 1.571, 5.083)), Some((0.425, 0.458, 0.633)), Some((0.402, 0.410, 0.422))],
    [Some((1.856, 3.192, 10.279)), Some((0.881, 0.949, 1.304)), Some((0.835, 0.841, 0.875))],
    [None, Some((2.402, 2.471, 2.833)), Some((2.355, 2.361, 2.396))],
    [None, Some((2.402, 2.471, 2.833)), Some((2.355, 2.361, 2.396))],
];

/// Core-network latency rows. The MEC rows are shared by the three MEC
/// deployments; their percentile entries print one-way (per-direction)
/// transit values. The Centralized row is round-trip.
pub const TABLE_VII_MEC: [Option<(f64, f64, f64)>; 3] = [
    Some((0.0016, 0.0008, 0.0008)),
    Some((0.0001, 0.00008, 0.00008)),
    Some((0.00001, 0.00001, 0.00001)),
];
pub const TABLE_VII_CENTRALIZED: [Option<(f64, f64, f64)>; 3] =
    [None, Some((2.0006, 2.0006, 2.0007)), Some((2.0000, 2.0001, 2.0001))];

/// Peering-point latency (mean, p90, p99.99), ms.
pub const TABLE_VIII_LOCAL: (f64, f64, f64) = (0.306, 0.431, 1.493);
pub const TABLE_VIII_REMOTE: (f64, f64, f64) = (13.001, 29.867, 99.212);

/// Internet (UPF-AS) round-trip anchors: p90 and p99.99, ms, plus the
/// same-country average.
pub const INTERNET_P90: f64 = 21.0;
pub const INTERNET_P9999: f64 = 43.0;
pub const INTERNET_MEAN: f64 = 10.3;

/// AS latency (mean, p90, p99.99) at lambda in {2080, 41600}, per deployment.
/// The Centralized entries span the published 110-to-23-processor range.
pub const TABLE_IX_LAMBDAS: [f64; 2] = [2080.0, 41600.0];
pub const TABLE_IX_MEC_GNB: [(f64, f64, f64); 2] =
    [(0.0027, 0.039, 0.042), (0.0031, 0.042, 0.046)];
pub const TABLE_IX_MEC_M1: [(f64, f64, f64); 2] = [(0.0048, 0.068, 0.073), (0.0917, 0.128, 0.137)];
pub const TABLE_IX_MEC_CN: [(f64, f64, f64); 2] = [(1.320, 1.843, 1.980), (2.640, 3.662, 3.955)];
pub type MsRange = (f64, f64);
pub const TABLE_IX_CENTRALIZED_RANGE: [(MsRange, MsRange, MsRange); 2] = [
    ((0.035, 0.165), (0.0482, 0.231), (0.0517, 0.247)),
    ((0.689, 3.295), (0.701, 4.633), (0.750, 4.940)),
];

/// Minimum processors to avoid AS backlog, per deployment, at lambda in
/// {2080, 41600}.
pub const TABLE_X: [(&str, [u32; 2]); 4] =
    [("MEC@gNB", [1, 1]), ("MEC@M1", [1, 1]), ("MEC@CN", [6, 212]), ("Centralized", [4, 152])];

/// One column of an end-to-end table: the (alpha, service, lambda)
/// configuration it reports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct E2eColumn {
    pub alpha: f64,
    pub service: &'static str,
    pub lambda: f64,
}

pub const E2E_COLUMNS: [E2eColumn; 9] = [
    E2eColumn { alpha: 0.001, service: "LLoA", lambda: 2080.0 },
    E2eColumn { alpha: 0.001, service: "LLoA", lambda: 8320.0 },
    E2eColumn { alpha: 0.001, service: "HLoA", lambda: 2080.0 },
    E2eColumn { alpha: 0.001, service: "HLoA", lambda: 8320.0 },
    E2eColumn { alpha: 0.01, service: "LLoA", lambda: 2080.0 },
    E2eColumn { alpha: 0.01, service: "LLoA", lambda: 8320.0 },
    E2eColumn { alpha: 0.01, service: "LLoA", lambda: 31200.0 },
    E2eColumn { alpha: 0.01, service: "HLoA", lambda: 2080.0 },
    E2eColumn { alpha: 0.01, service: "HLoA", lambda: 8320.0 },
];

/// One published end-to-end table: per-component rows and totals, at the
/// service's own percentile (p90 for LLoA, p99.99 for HLoA).
#[derive(Debug, Clone, Copy)]
pub struct E2eTable {
    pub deployment: &'static str,
    pub radio: [Option<f64>; 9],
    pub tn: [Option<f64>; 9],
    pub cn: [Option<f64>; 9],
    /// Internet component; Centralized only.
    pub upf_as: [Option<f64>; 9],
    pub app_server: [Option<f64>; 9],
    pub single: [Option<f64>; 9],
    pub peering: [Option<f64>; 9],
    pub multi: [Option<f64>; 9],
}

const RADIO_ROW: [Option<f64>; 9] = [
    Some(2.00),
    Some(2.00),
    Some(2.77),
    Some(4.55),
    Some(2.00),
    Some(2.00),
    Some(6.07),
    Some(2.77),
    Some(4.55),
];

const AS_ROW: [Option<f64>; 9] = [
    Some(0.6977),
    Some(0.6977),
    Some(0.7499),
    Some(0.7499),
    Some(0.6977),
    Some(0.6977),
    Some(0.6977),
    Some(0.7499),
    Some(0.7499),
];

const PP_LOCAL_ROW: [Option<f64>; 9] = [
    Some(0.431),
    Some(0.431),
    Some(1.493),
    Some(1.493),
    Some(0.431),
    Some(0.431),
    Some(0.431),
    Some(1.493),
    Some(1.493),
];

const PP_REMOTE_ROW: [Option<f64>; 9] = [
    Some(29.867),
    Some(29.867),
    Some(99.212),
    Some(99.212),
    Some(29.867),
    Some(29.867),
    Some(29.867),
    Some(99.212),
    Some(99.212),
];

const NONE_ROW: [Option<f64>; 9] = [None; 9];

pub const TABLE_XI: E2eTable = E2eTable {
    deployment: "MEC@gNB",
    radio: RADIO_ROW,
    tn: [
        Some(1.571),
        None,
        Some(5.083),
        None,
        Some(0.458),
        Some(0.470),
        Some(0.665),
        Some(0.633),
        Some(0.680),
    ],
    cn: [
        Some(0.001),
        Some(0.001),
        Some(0.001),
        Some(0.014),
        Some(0.0001),
        Some(0.0001),
        Some(0.001),
        Some(0.0001),
        Some(0.001),
    ],
    upf_as: NONE_ROW,
    app_server: AS_ROW,
    single: [
        Some(4.265),
        None,
        Some(8.603),
        None,
        Some(3.152),
        Some(3.164),
        Some(7.435),
        Some(4.153),
        Some(5.979),
    ],
    peering: PP_LOCAL_ROW,
    multi: [
        Some(4.696),
        None,
        Some(10.096),
        None,
        Some(3.582),
        Some(3.595),
        Some(7.866),
        Some(5.646),
        Some(7.473),
    ],
};

pub const TABLE_XII: E2eTable = E2eTable {
    deployment: "MEC@M1",
    radio: RADIO_ROW,
    tn: [
        Some(3.192),
        None,
        Some(10.279),
        None,
        Some(0.949),
        Some(0.972),
        Some(1.364),
        Some(1.304),
        Some(1.398),
    ],
    cn: [
        Some(0.001),
        Some(0.001),
        Some(0.001),
        Some(0.016),
        Some(0.0001),
        Some(0.0001),
        Some(0.002),
        Some(0.0001),
        Some(0.002),
    ],
    upf_as: NONE_ROW,
    app_server: AS_ROW,
    single: [
        Some(5.897),
        None,
        Some(13.80),
        None,
        Some(3.653),
        Some(3.671),
        Some(8.127),
        Some(4.824),
        Some(6.697),
    ],
    peering: PP_LOCAL_ROW,
    multi: [
        Some(6.327),
        None,
        Some(15.293),
        None,
        Some(4.083),
        Some(4.102),
        Some(8.558),
        Some(6.317),
        Some(8.190),
    ],
};

pub const TABLE_XIII: E2eTable = E2eTable {
    deployment: "MEC@CN",
    radio: RADIO_ROW,
    tn: [None, None, None, None, Some(2.471), Some(2.494), None, Some(2.833), Some(2.928)],
    cn: [None, None, None, None, Some(0.001), Some(0.003), None, Some(0.001), Some(0.005)],
    upf_as: NONE_ROW,
    app_server: AS_ROW,
    single: [None, None, None, None, Some(5.174), Some(5.203), None, Some(6.353), Some(8.227)],
    peering: PP_LOCAL_ROW,
    multi: [None, None, None, None, Some(5.604), Some(5.634), None, Some(7.846), Some(9.720)],
};

pub const TABLE_XIV: E2eTable = E2eTable {
    deployment: "Centralized",
    radio: RADIO_ROW,
    tn: TABLE_XIII.tn,
    cn: [None, None, None, None, Some(2.001), Some(2.001), None, Some(2.001), Some(2.001)],
    upf_as: [
        Some(21.0),
        Some(21.0),
        Some(43.0),
        Some(43.0),
        Some(21.0),
        Some(21.0),
        Some(21.0),
        Some(43.0),
        Some(43.0),
    ],
    app_server: AS_ROW,
    single: [None, None, None, None, Some(28.17), Some(28.19), None, Some(51.35), Some(53.23)],
    peering: PP_REMOTE_ROW,
    multi: [None, None, None, None, Some(58.04), Some(58.06), None, Some(150.57), Some(152.44)],
};

/// Average UL+DL radio latency per load, ms (LLoA row then HLoA row).
pub const TABLE_XV_LLOA: [f64; 10] =
    [1.50, 1.50, 1.50, 1.50, 1.50, 1.50, 1.50, 1.50, 1.56, 3.09];
pub const TABLE_XV_HLOA: [f64; 10] =
    [1.50, 1.50, 1.51, 1.52, 1.53, 1.58, 1.67, 7.31, 11.81, 14.23];

/// Reported minimum-alpha dimensioning results:
/// (deployment, service, lambda, multi-MNO?, alpha_min).
pub const ALPHA_MIN_ANCHORS: [(&str, &str, f64, bool, f64); 15] = [
    ("MEC@gNB", "LLoA", 8320.0, false, 0.0019),
    ("MEC@gNB", "HLoA", 2080.0, true, 0.00102),
    ("MEC@gNB", "HLoA", 8320.0, false, 0.0026),
    ("MEC@gNB", "HLoA", 8320.0, true, 0.0029),
    ("MEC@M1", "HLoA", 2080.0, false, 0.0014),
    ("MEC@M1", "HLoA", 2080.0, true, 0.0015),
    ("MEC@M1", "HLoA", 8320.0, false, 0.0033),
    ("MEC@M1", "HLoA", 8320.0, true, 0.004),
    ("MEC@CN", "LLoA", 2080.0, false, 0.0014),
    ("MEC@CN", "HLoA", 2080.0, false, 0.0016),
    ("MEC@CN", "HLoA", 2080.0, true, 0.0021),
    ("MEC@CN", "LLoA", 8320.0, false, 0.0055),
    ("MEC@CN", "HLoA", 8320.0, false, 0.0061),
    ("MEC@CN", "HLoA", 8320.0, true, 0.0074),
    ("MEC@CN", "LLoA", 31200.0, false, 0.021),
];
