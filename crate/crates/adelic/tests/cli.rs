use std::path::Path;
use std::process::Command;
use std::sync::Arc;

use adelic_image::cli::{run, Cli};
use adelic_image::client::{Client, RecordingTransport, Response, Transport};
use adelic_image::fixtures;
use adelic_image::schema::{parse_newform, NewformJson};
use adelic_image::AppError;
use clap::Parser;
use serde_json::json;

/// Shares one recording transport between the client and the test.
struct Shared(Arc<RecordingTransport>);

impl Transport for Shared {
    fn get(&self, url: &str) -> Result<Response, String> {
        self.0.get(url)
    }
}

fn client(dir: &Path, offline: bool, responses: Vec<(String, Response)>) -> (Client, Arc<RecordingTransport>) {
    let t = Arc::new(RecordingTransport { responses, ..Default::default() });
    (Client::new(Box::new(Shared(t.clone())), dir.to_path_buf(), offline), t)
}

fn exec(args: &[&str], client: &Client) -> Result<String, AppError> {
    let cli =
        Cli::try_parse_from(std::iter::once("adelic-image").chain(args.iter().copied())).expect("arguments parse");
    let mut out = Vec::new();
    run(&cli, client, &mut out)?;
    Ok(String::from_utf8(out).expect("utf-8"))
}

fn bin(args: &[&str], cache: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_adelic-image"))
        .args(args)
        .env("ADELIC_IMAGE_CACHE", cache)
        .output()
        .expect("binary runs")
}

/// LMFDB-shaped records for the rational fixture `11.2.a.a`.
fn lmfdb_records() -> (serde_json::Value, serde_json::Value) {
    let j = NewformJson::parse(fixtures::get("11.2.a.a").unwrap()).unwrap();
    let ap: Vec<Vec<i64>> = j.ap.iter().map(|a| a.coords.iter().map(|c| c.parse().unwrap()).collect()).collect();
    let nf = json!({"data": [{"label": "11.2.a.a", "level": 11, "weight": 2, "char_values": [11, 1, [2], [0]]}]});
    let hecke =
        json!({"data": [{"label": "11.2.a.a", "field_poly": [0, 1], "hecke_ring_power_basis": true, "ap": ap}]});
    (nf, hecke)
}

#[test]
fn offline_cold_cache_is_an_offline_miss_without_requests() {
    let dir = tempfile::tempdir().unwrap();
    let (c, t) = client(dir.path(), true, Vec::new());
    let err = exec(&["analyze", "99.2.a.a", "--primes", "5..7"], &c).unwrap_err();
    assert!(matches!(err, AppError::OfflineMiss { .. }));
    assert_eq!(err.exit_code(), 6);
    assert!(t.requested().is_empty());
}

#[test]
fn unknown_label_reports_the_http_status() {
    let dir = tempfile::tempdir().unwrap();
    let probe = Client::new(Box::new(RecordingTransport::default()), dir.path().to_path_buf(), false);
    let url = probe.newform_url("1.2.a.z");
    let (c, t) = client(dir.path(), false, vec![(url.clone(), Response { status: 404, body: String::new() })]);
    let err = c.fetch("1.2.a.z").unwrap_err();
    assert!(matches!(err, AppError::Fetch { status: Some(404), .. }), "{err:?}");
    assert_eq!(err.exit_code(), 5);
    assert_eq!(t.requested(), vec![url]);
    // nothing half-written is left behind
    assert!(!c.form_path("1.2.a.z").exists());
}

#[test]
fn empty_record_is_a_fetch_error() {
    let dir = tempfile::tempdir().unwrap();
    let probe = Client::new(Box::new(RecordingTransport::default()), dir.path().to_path_buf(), false);
    let url = probe.newform_url("1.2.a.z");
    let (c, _) = client(dir.path(), false, vec![(url, Response { status: 200, body: "{\"data\": []}".into() })]);
    assert!(matches!(c.fetch("1.2.a.z"), Err(AppError::Fetch { status: None, .. })));
}

#[test]
fn fetch_converts_and_warm_cache_makes_no_requests() {
    let dir = tempfile::tempdir().unwrap();
    let probe = Client::new(Box::new(RecordingTransport::default()), dir.path().to_path_buf(), false);
    let (nf, hecke) = lmfdb_records();
    let responses = vec![
        (probe.newform_url("11.2.a.a"), Response { status: 200, body: nf.to_string() }),
        (probe.hecke_url("11.2.a.a"), Response { status: 200, body: hecke.to_string() }),
    ];
    let (c, t) = client(dir.path(), false, responses);
    let path = c.fetch("11.2.a.a").unwrap();
    assert_eq!(t.requested().len(), 2);
    let loaded = parse_newform(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let vendored = parse_newform(fixtures::get("11.2.a.a").unwrap()).unwrap();
    assert_eq!(loaded.form.ap, vendored.form.ap);

    let (warm, t2) = client(dir.path(), false, Vec::new());
    assert_eq!(warm.fetch("11.2.a.a").unwrap(), path);
    exec(&["analyze", "11.2.a.a", "--primes", "5..7"], &warm).unwrap();
    assert!(t2.requested().is_empty());

    // an offline client serves the warm cache too
    let (off, t3) = client(dir.path(), true, Vec::new());
    assert!(off.fetch("11.2.a.a").is_ok());
    assert!(t3.requested().is_empty());
}

#[test]
fn non_power_basis_records_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let probe = Client::new(Box::new(RecordingTransport::default()), dir.path().to_path_buf(), false);
    let (nf, mut hecke) = lmfdb_records();
    hecke["data"][0]["hecke_ring_power_basis"] = json!(false);
    let responses = vec![
        (probe.newform_url("11.2.a.a"), Response { status: 200, body: nf.to_string() }),
        (probe.hecke_url("11.2.a.a"), Response { status: 200, body: hecke.to_string() }),
    ];
    let (c, _) = client(dir.path(), false, responses);
    let err = c.fetch("11.2.a.a").unwrap_err();
    assert!(matches!(err, AppError::NotPowerBasis));
    assert_eq!(err.exit_code(), 4);
}

#[test]
fn exit_codes_from_the_binary() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let miss = bin(&["--offline", "analyze", "99.2.a.a"], &cache);
    assert_eq!(miss.status.code(), Some(6));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"label\": \"x\", \"level\": ").unwrap();
    let schema = bin(&["--offline", "analyze", bad.to_str().unwrap()], &cache);
    assert_eq!(schema.status.code(), Some(3));

    let usage = bin(&["--offline", "analyze", "11.2.a.a", "--primes", "9-3"], &cache);
    assert_eq!(usage.status.code(), Some(2));
    assert_eq!(bin(&["frobnicate"], &cache).status.code(), Some(2));

    let low = bin(&["--offline", "analyze", "11.2.a.a", "--bound", "20"], &cache);
    assert_eq!(low.status.code(), Some(2));
    let high = bin(&["--offline", "analyze", "11.2.a.a", "--bound", "100000"], &cache);
    assert_eq!(high.status.code(), Some(8));
}

#[test]
fn reports_are_byte_identical_across_runs_and_workers() {
    let dir = tempfile::tempdir().unwrap();
    let args = |w: &'static str| {
        ["--offline", "--workers", w, "pair", "11.2.a.a", "13.2.e.a", "--primes", "5..13", "--hyp", "--json", "-"]
    };
    let a = bin(&args("1"), dir.path());
    let b = bin(&args("1"), dir.path());
    let c = bin(&args("4"), dir.path());
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["command"], "pair");
    assert!(v["assumptions"].as_array().unwrap().len() >= 3);
}

#[test]
fn json_file_output_matches_stdout_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let file =
        bin(&["--offline", "analyze", "13.2.e.a", "--primes", "5..11", "--json", out.to_str().unwrap()], dir.path());
    assert!(file.status.success());
    let stdout = bin(&["--offline", "analyze", "13.2.e.a", "--primes", "5..11", "--json", "-"], dir.path());
    assert_eq!(std::fs::read(&out).unwrap(), stdout.stdout);
    assert!(String::from_utf8_lossy(&file.stdout).contains("13.2.e.a"));
}

#[test]
fn selftest_subcommand_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin(&["selftest", "counterexample"], dir.path());
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("PASS counterexample"));
    assert_eq!(bin(&["selftest", "nope"], dir.path()).status.code(), Some(2));
}
