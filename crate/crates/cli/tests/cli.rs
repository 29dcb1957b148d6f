//! End-to-end checks of the command-line surface: exit codes, CSV/text
//! round-trips, determinism, and the reproduce-table identifiers.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_v2x-latency"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn compose_reproduces_the_published_cell_and_exits_zero() {
    let out = run(&[
        "compose",
        "--deployment",
        "mec-gnb",
        "--service",
        "lloa",
        "--lambda",
        "2080",
        "--alpha",
        "0.001",
        "--mno",
        "single",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("verdict (single-MNO): meets"), "{text}");
    // p90 total ~ 4.265 ms
    let total_line = text.lines().find(|l| l.starts_with("e2e single-MNO")).unwrap();
    let p90: f64 = total_line.split_whitespace().nth(3).unwrap().parse().unwrap();
    assert!((p90 - 4.265).abs() < 0.05, "p90 {p90}");
}

#[test]
fn violating_verdict_is_still_success() {
    let out = run(&[
        "compose",
        "--deployment",
        "centralized",
        "--service",
        "hloa",
        "--lambda",
        "2080",
        "--alpha",
        "0.01",
        "--mno",
        "multi-remote",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("violates"));
}

#[test]
fn unsupported_radio_load_exits_three_with_structured_error() {
    let out = run(&[
        "compose",
        "--deployment",
        "mec-gnb",
        "--service",
        "hloa",
        "--lambda",
        "20800",
        "--alpha",
        "0.01",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("infeasible"));
}

#[test]
fn unknown_table_id_exits_two() {
    let out = run(&["reproduce-table", "XVI"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown table id"));
}

#[test]
fn all_table_ids_render() {
    for id in ["V", "VI", "VII", "VIII", "IX", "X", "XI", "XII", "XIII", "XIV", "XV"] {
        let out = run(&["reproduce-table", id]);
        assert_eq!(out.status.code(), Some(0), "table {id}");
        assert!(stdout(&out).lines().count() > 2, "table {id} is empty");
    }
}

#[test]
fn sweep_csv_round_trips_to_identical_text() {
    let dir = std::env::temp_dir().join(format!("v2x-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv_path = dir.join("sweep.csv");
    let args_base = [
        "sweep",
        "--lambdas",
        "2080,8320",
        "--alphas",
        "0.001,0.01",
        "--deployments",
        "mec-m1,centralized",
        "--services",
        "lloa,hloa",
        "--jobs",
        "1",
    ];
    let text_run = run(&{
        let mut a = args_base.to_vec();
        a.extend(["--format", "text"]);
        a
    });
    assert_eq!(text_run.status.code(), Some(0));
    let csv_run = run(&{
        let mut a = args_base.to_vec();
        a.extend(["--format", "csv", "--output", csv_path.to_str().unwrap()]);
        a
    });
    assert_eq!(csv_run.status.code(), Some(0));

    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let (header, rows) = v2x_latency::compose::parse_csv(&csv).unwrap();
    let rendered = v2x_latency::compose::render_table(&header, &rows);
    assert_eq!(rendered, stdout(&text_run), "CSV-derived table differs from the direct rendering");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn parallel_sweep_matches_sequential() {
    let args = |jobs: &'static str| {
        let out = run(&[
            "sweep",
            "--lambdas",
            "2080,4160,8320",
            "--alphas",
            "0.001,0.01",
            "--services",
            "lloa,hloa",
            "--format",
            "csv",
            "--jobs",
            jobs,
        ]);
        assert_eq!(out.status.code(), Some(0));
        stdout(&out)
    };
    assert_eq!(args("1"), args("4"));
}

#[test]
fn dimension_matches_published_anchor_and_infeasible_exits_three() {
    let out = run(&[
        "dimension",
        "--deployment",
        "mec-m1",
        "--service",
        "hloa",
        "--lambda",
        "2080",
        "--mno",
        "multi",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let alpha: f64 = text
        .lines()
        .nth(1)
        .unwrap()
        .split_whitespace()
        .nth(4)
        .unwrap()
        .parse()
        .unwrap();
    assert!((alpha - 0.0015).abs() / 0.0015 < 0.15, "alpha_min {alpha}");

    let out = run(&[
        "dimension",
        "--deployment",
        "mec-m1",
        "--service",
        "hloa",
        "--lambda",
        "20800",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("infeasible"));
}

#[test]
fn simulate_is_deterministic_per_seed() {
    let args = ["simulate", "--lambda", "1000", "--mu", "2500", "--packets", "30000", "--seed", "42"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(out_line(&a), out_line(&b));
    let c = run(&[
        "simulate", "--lambda", "1000", "--mu", "2500", "--packets", "30000", "--seed", "43",
    ]);
    assert_ne!(out_line(&a), out_line(&c));
}

fn out_line(out: &Output) -> String {
    stdout(out).lines().next().unwrap_or_default().to_string()
}

#[test]
fn scenario_file_round_trip_drives_compose() {
    let dir = std::env::temp_dir().join(format!("v2x-cli-scn-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("scenario.json");
    let s = v2x_latency::reference_scenario(
        v2x_latency::DeploymentKind::MecM1,
        v2x_latency::ServiceProfile::hloa(),
        2080.0,
        0.01,
    )
    .unwrap();
    std::fs::write(&path, s.to_json()).unwrap();
    let out = run(&["compose", "--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("MEC@M1"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn custom_peering_cdf_overrides_the_anchors() {
    let dir = std::env::temp_dir().join(format!("v2x-cli-cdf-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("pp.csv");
    std::fs::write(&path, "t_ms,F\n0.1,0.5\n5.0,0.9\n9.0,0.9999\n12.0,1.0\n").unwrap();
    let out = run(&[
        "compose",
        "--deployment",
        "mec-gnb",
        "--service",
        "lloa",
        "--lambda",
        "2080",
        "--alpha",
        "0.01",
        "--mno",
        "multi-local",
        "--peering-cdf",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let pp_line = text.lines().find(|l| l.starts_with("peering")).unwrap();
    // p90 column reproduces the file's 5 ms point
    assert!(pp_line.split_whitespace().any(|c| c == "5"), "{pp_line}");
    std::fs::remove_dir_all(&dir).ok();
}
