//! Re-derive the published evaluation tables from the model's defaults and
//! print them beside the published values with per-cell deviations. The
//! published numbers are display-only reference data, never inputs.

use v2x_latency::appserver;
use v2x_latency::compose::{self, format_ms};
use v2x_latency::corenet;
use v2x_latency::externals::{internet_latency, peering_latency, LatencyMode, PeeringKind};
use v2x_latency::published as pubdata;
use v2x_latency::transport;
use v2x_latency::{
    reference_scenario, DeploymentKind, Error, MnoMode, Scenario, ServiceProfile,
};

fn scenario(dep: DeploymentKind, lambda: f64, alpha: f64) -> Scenario {
    reference_scenario(dep, ServiceProfile::lloa(), lambda, alpha).unwrap()
}

fn dev_pct(computed: f64, published: f64) -> String {
    if published == 0.0 {
        return "-".into();
    }
    format!("{:+.2}%", (computed - published) / published.abs() * 100.0)
}

fn render(header: &[&str], rows: Vec<Vec<String>>, csv: bool) -> String {
    if csv {
        compose::render_csv(header, &rows)
    } else {
        let header: Vec<String> = header.iter().map(|s| s.to_string()).collect();
        compose::render_table(&header, &rows)
    }
}

fn table_v(csv: bool) -> String {
    let mut rows = Vec::new();
    for (i, dep) in DeploymentKind::ALL.iter().enumerate() {
        let s = scenario(*dep, 2080.0, 0.01);
        let (prop, proc) = transport::tn_shift(&s);
        let (ppub, tpub) = pubdata::TABLE_V[i];
        rows.push(vec![
            dep.label().into(),
            format_ms(prop * 1e3),
            format_ms(ppub),
            format_ms(proc * 1e3),
            format_ms(tpub),
        ]);
    }
    render(
        &["deployment", "t_prop_ms", "t_prop_published", "t_p_ms", "t_p_published"],
        rows,
        csv,
    )
}

fn table_vi(csv: bool) -> String {
    let mut rows = Vec::new();
    for (d, dep) in DeploymentKind::ALL.iter().enumerate() {
        for (a, &alpha) in pubdata::TABLE_VI_ALPHAS.iter().enumerate() {
            let s = scenario(*dep, 2080.0, alpha);
            match (transport::tn_latency(&s), pubdata::TABLE_VI[d][a]) {
                (Ok(dist), Some((mean, p90, p9999))) => {
                    for (metric, got, published) in [
                        ("mean", dist.mean() * 1e3, mean),
                        ("p90", dist.percentile(0.90).unwrap() * 1e3, p90),
                        ("p99.99", dist.percentile(0.9999).unwrap() * 1e3, p9999),
                    ] {
                        rows.push(vec![
                            dep.label().into(),
                            format_ms(alpha),
                            metric.into(),
                            format!("{got:.4}"),
                            format!("{published}"),
                            dev_pct(got, published),
                        ]);
                    }
                }
                (Err(Error::UnstablePath { .. }), None) => rows.push(vec![
                    dep.label().into(),
                    format_ms(alpha),
                    "all".into(),
                    "*".into(),
                    "*".into(),
                    "-".into(),
                ]),
                (got, published) => rows.push(vec![
                    dep.label().into(),
                    format_ms(alpha),
                    "all".into(),
                    format!("{got:?}"),
                    format!("{published:?}"),
                    "MISMATCH".into(),
                ]),
            }
        }
    }
    render(&["deployment", "alpha", "metric", "computed_ms", "published_ms", "deviation"], rows, csv)
}

fn table_vii(csv: bool) -> String {
    let mut rows = Vec::new();
    for dep in DeploymentKind::ALL {
        let published_col = match dep {
            DeploymentKind::Centralized => &pubdata::TABLE_VII_CENTRALIZED,
            _ => &pubdata::TABLE_VII_MEC,
        };
        for (a, &alpha) in pubdata::TABLE_VI_ALPHAS.iter().enumerate() {
            let s = scenario(dep, 2080.0, alpha);
            match corenet::cn_mean_rt(&s) {
                Ok(rt) => {
                    let (ul, dl) = corenet::cn_transit_means(&s).unwrap();
                    let one_way = 0.5 * (ul + dl);
                    // the published MEC rows print one-way transit values;
                    // the Centralized row is round-trip
                    let (basis, got) = match dep {
                        DeploymentKind::Centralized => ("round-trip", rt * 1e3),
                        _ => ("one-way", one_way * 1e3),
                    };
                    let published = published_col[a].map(|(m, _, _)| m);
                    rows.push(vec![
                        dep.label().into(),
                        format_ms(alpha),
                        format!("{:.6}", rt * 1e3),
                        format!("{:.6}", one_way * 1e3),
                        basis.into(),
                        published.map(|p| format!("{p}")).unwrap_or_else(|| "*".into()),
                        published.map(|p| dev_pct(got, p)).unwrap_or_else(|| "-".into()),
                    ]);
                }
                Err(Error::UnstablePath { .. }) => rows.push(vec![
                    dep.label().into(),
                    format_ms(alpha),
                    "*".into(),
                    "*".into(),
                    "-".into(),
                    "*".into(),
                    "-".into(),
                ]),
                Err(e) => rows.push(vec![dep.label().into(), format_ms(alpha), e.to_string(), String::new(), String::new(), String::new(), String::new()]),
            }
        }
    }
    render(
        &[
            "deployment",
            "alpha",
            "rt_mean_ms",
            "one_way_mean_ms",
            "published_basis",
            "published_mean_ms",
            "deviation",
        ],
        rows,
        csv,
    )
}

fn table_viii(csv: bool) -> String {
    let mut rows = Vec::new();
    for (kind, published) in [
        (PeeringKind::Remote, pubdata::TABLE_VIII_REMOTE),
        (PeeringKind::Local, pubdata::TABLE_VIII_LOCAL),
    ] {
        let d = peering_latency(kind);
        for (metric, got, publ) in [
            ("mean", d.mean() * 1e3, published.0),
            ("p90", d.percentile(0.90).unwrap() * 1e3, published.1),
            ("p99.99", d.percentile(0.9999).unwrap() * 1e3, published.2),
        ] {
            rows.push(vec![
                kind.label().into(),
                metric.into(),
                format!("{got:.3}"),
                format!("{publ}"),
                dev_pct(got, publ),
            ]);
        }
    }
    let internet = internet_latency(LatencyMode::RoundTrip);
    for (metric, got, publ) in [
        ("mean", internet.mean() * 1e3, pubdata::INTERNET_MEAN),
        ("p90", internet.percentile(0.90).unwrap() * 1e3, pubdata::INTERNET_P90),
        ("p99.99", internet.percentile(0.9999).unwrap() * 1e3, pubdata::INTERNET_P9999),
    ] {
        rows.push(vec![
            "internet".into(),
            metric.into(),
            format!("{got:.3}"),
            format!("{publ}"),
            dev_pct(got, publ),
        ]);
    }
    render(&["segment", "metric", "computed_ms", "published_ms", "deviation"], rows, csv)
}

fn as_stats(s: &Scenario) -> (f64, f64, f64) {
    let d = appserver::as_latency(s);
    (
        d.mean() * 1e3,
        d.percentile(0.90).unwrap() * 1e3,
        d.percentile(0.9999).unwrap() * 1e3,
    )
}

fn table_ix(csv: bool) -> String {
    let mut rows = Vec::new();
    let mut push = |label: &str, s: &Scenario, published: (f64, f64, f64)| {
        let (mean, p90, p9999) = as_stats(s);
        for (metric, got, publ) in
            [("mean", mean, published.0), ("p90", p90, published.1), ("p99.99", p9999, published.2)]
        {
            rows.push(vec![
                label.to_string(),
                format_ms(s.traffic.lambda_gnb_ul),
                metric.into(),
                format!("{got:.4}"),
                format!("{publ}"),
                dev_pct(got, publ),
            ]);
        }
    };
    for (i, &lambda) in pubdata::TABLE_IX_LAMBDAS.iter().enumerate() {
        push("MEC@gNB", &scenario(DeploymentKind::MecGnb, lambda, 0.01), pubdata::TABLE_IX_MEC_GNB[i]);
        push("MEC@M1", &scenario(DeploymentKind::MecM1, lambda, 0.01), pubdata::TABLE_IX_MEC_M1[i]);
        push("MEC@CN", &scenario(DeploymentKind::MecCn, lambda, 0.01), pubdata::TABLE_IX_MEC_CN[i]);
        // the published cloud row spans 110 down to 23 processors
        let range = pubdata::TABLE_IX_CENTRALIZED_RANGE[i];
        let mut hi = scenario(DeploymentKind::Centralized, lambda, 0.01);
        hi.as_profile.processors = 110;
        push("Centralized(110 procs)", &hi, (range.0 .0, range.1 .0, range.2 .0));
        let mut lo = scenario(DeploymentKind::Centralized, lambda, 0.01);
        lo.as_profile.processors = 23;
        push("Centralized(23 procs)", &lo, (range.0 .1, range.1 .1, range.2 .1));
    }
    render(&["deployment", "lambda", "metric", "computed_ms", "published_ms", "deviation"], rows, csv)
}

fn table_x(csv: bool) -> String {
    let mut rows = Vec::new();
    for (label, published) in pubdata::TABLE_X {
        let dep = DeploymentKind::parse(label).unwrap();
        for (i, &lambda) in pubdata::TABLE_IX_LAMBDAS.iter().enumerate() {
            let s = scenario(dep, lambda, 0.01);
            let got = appserver::min_processors(&s);
            rows.push(vec![
                label.to_string(),
                format_ms(lambda),
                got.to_string(),
                published[i].to_string(),
                format!("{:.2}x", got as f64 / published[i] as f64),
            ]);
        }
    }
    render(&["deployment", "lambda", "computed_min_processors", "published", "ratio"], rows, csv)
}

fn e2e_table(table: &pubdata::E2eTable, csv: bool) -> String {
    let dep = DeploymentKind::parse(table.deployment).unwrap();
    let mno = match dep {
        DeploymentKind::Centralized => MnoMode::MultiRemote,
        _ => MnoMode::MultiLocal,
    };
    let mut rows = Vec::new();
    for (c, col) in pubdata::E2E_COLUMNS.iter().enumerate() {
        let mut s = reference_scenario(
            dep,
            ServiceProfile::by_name(col.service).unwrap(),
            col.lambda,
            col.alpha,
        )
        .unwrap();
        s.mno_mode = mno;
        let b = compose::compose(&s).unwrap();
        let p = s.service.reliability_percentile;
        let l_req = s.service.l_req_ms;

        let mut push = |component: &str, got: Option<f64>, published: Option<f64>| {
            rows.push(vec![
                format_ms(col.alpha),
                col.service.into(),
                format_ms(col.lambda),
                component.into(),
                got.map(|v| format!("{v:.4}")).unwrap_or_else(|| "-".into()),
                published.map(|v| format!("{v}")).unwrap_or_else(|| "-".into()),
                match (got, published) {
                    (Some(g), Some(pv)) => dev_pct(g, pv),
                    _ => "-".into(),
                },
            ]);
        };
        push("radio", b.radio.and_then(|t| t.at_percentile(p)), table.radio[c]);
        push("tn", b.tn.and_then(|t| t.at_percentile(p)), table.tn[c]);
        push("cn", b.cn.and_then(|t| t.at_percentile(p)), table.cn[c]);
        if dep == DeploymentKind::Centralized {
            push("upf_as", b.upf_as.and_then(|t| t.at_percentile(p)), table.upf_as[c]);
        }
        push("as", b.app_server.at_percentile(p), table.app_server[c]);
        push("e2e_single", b.total_single.and_then(|t| t.at_percentile(p)), table.single[c]);
        push("pp", b.peering.at_percentile(p), table.peering[c]);
        push("e2e_multi", b.total_multi.and_then(|t| t.at_percentile(p)), table.multi[c]);

        let verdict_text = |total: Option<f64>| match total {
            Some(v) if v <= l_req => "meets".to_string(),
            Some(_) => "violates".to_string(),
            None => "-".to_string(),
        };
        rows.push(vec![
            format_ms(col.alpha),
            col.service.into(),
            format_ms(col.lambda),
            "verdict_single".into(),
            if b.verdict_single.is_supported() {
                if b.verdict_single.is_meets() { "meets".into() } else { "violates".into() }
            } else {
                "-".to_string()
            },
            verdict_text(table.single[c]),
            "-".into(),
        ]);
        rows.push(vec![
            format_ms(col.alpha),
            col.service.into(),
            format_ms(col.lambda),
            "verdict_multi".into(),
            if b.verdict_multi.is_supported() {
                if b.verdict_multi.is_meets() { "meets".into() } else { "violates".into() }
            } else {
                "-".to_string()
            },
            verdict_text(table.multi[c]),
            "-".into(),
        ]);
    }
    render(
        &["alpha", "service", "lambda", "component", "computed_ms", "published_ms", "deviation"],
        rows,
        csv,
    )
}

fn table_xv(csv: bool) -> String {
    let table = v2x_latency::RadioLatencyTable::reference_default();
    let mut rows = Vec::new();
    for (service, published) in
        [("LLoA", &pubdata::TABLE_XV_LLOA), ("HLoA", &pubdata::TABLE_XV_HLOA)]
    {
        for (i, &lambda) in v2x_latency::scenario::REFERENCE_LAMBDAS.iter().enumerate() {
            let got = table.lookup(service, lambda).and_then(|r| r.mean_ms);
            rows.push(vec![
                service.into(),
                format_ms(lambda),
                got.map(format_ms).unwrap_or_else(|| "-".into()),
                format_ms(published[i]),
                got.map(|g| dev_pct(g, published[i])).unwrap_or_else(|| "-".into()),
            ]);
        }
    }
    render(&["service", "lambda", "dataset_mean_ms", "published_ms", "deviation"], rows, csv)
}

pub fn run(id: &str, csv: bool) -> anyhow::Result<String> {
    let normalized = id.trim().to_ascii_uppercase();
    let text = match normalized.as_str() {
        "V" => table_v(csv),
        "VI" => table_vi(csv),
        "VII" => table_vii(csv),
        "VIII" => table_viii(csv),
        "IX" => table_ix(csv),
        "X" => table_x(csv),
        "XI" => e2e_table(&pubdata::TABLE_XI, csv),
        "XII" => e2e_table(&pubdata::TABLE_XII, csv),
        "XIII" => e2e_table(&pubdata::TABLE_XIII, csv),
        "XIV" => e2e_table(&pubdata::TABLE_XIV, csv),
        "XV" => table_xv(csv),
        other => anyhow::bail!(
            "unknown table id `{other}`; expected one of V, VI, VII, VIII, IX, X, XI, XII, XIII, XIV, XV"
        ),
    };
    Ok(text)
}
