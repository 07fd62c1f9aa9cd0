mod common;

use common::{check_golden, golden_output, run, run_env, scenario, FR1, FR2, GOLDEN};
use redcap_dim::scenario::{parse_scenario, ErrorClass};
use serde_json::Value;

fn errors(stderr: &str) -> Vec<Value> {
    let v: Value = serde_json::from_str(stderr.trim()).expect("stderr is one JSON object");
    v["errors"].as_array().unwrap().clone()
}

fn write_temp(text: &str) -> tempfile::NamedTempFile {
    let f = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(f.path(), text).unwrap();
    f
}

#[test]
fn shipped_scenarios_round_trip() {
    for name in [FR1, FR2] {
        let text = std::fs::read_to_string(scenario(name)).unwrap();
        let a = parse_scenario(&text).unwrap();
        let canon = a.scenario.to_text();
        let b = parse_scenario(&canon).unwrap();
        assert_eq!(a.scenario, b.scenario, "{name}");
        assert_eq!(canon, b.scenario.to_text());
    }
}

#[test]
fn export_matches_canonical_text() {
    let (code, out, _) = run(&["export", "--scenario", &scenario(FR1)]);
    assert_eq!(code, 0);
    let parsed = parse_scenario(&out).unwrap();
    assert!(parsed.defaulted.is_empty());
    assert_eq!(out, parsed.scenario.to_text());
}

#[test]
fn empty_file_reports_missing_profiles() {
    let f = write_temp("");
    let (code, out, err) = run(&["datarate", "--scenario", f.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    let e = errors(&err);
    assert_eq!(e[0]["class"], "missing_section");
    assert_eq!(e[0]["message"], "missing required section: profiles");
}

#[test]
fn wide_redcap_profile_is_an_invariant_error() {
    let text = std::fs::read_to_string(scenario(FR1)).unwrap().replacen(
        "\"max_bandwidth_mhz\": 20",
        "\"max_bandwidth_mhz\": 40",
        1,
    );
    let e = parse_scenario(&text).unwrap_err();
    assert_eq!(e[0].class, ErrorClass::Invariant);
    assert!(e[0].message.contains("20 MHz"), "{}", e[0].message);
    assert_eq!(e[0].path.as_deref(), Some("profiles[2].capability"));
    assert!(e[0].line.is_some());
}

#[test]
fn unknown_key_carries_location() {
    let text = std::fs::read_to_string(scenario(FR2))
        .unwrap()
        .replace("\"reference_profile\": \"reference_fr2\"", "\"reference_profile\": \"reference_fr2\", \"trp\": 23");
    let f = write_temp(&text);
    let (code, _, err) = run(&["linkbudget", "--scenario", f.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    let e = errors(&err);
    assert_eq!(e[0]["class"], "unknown_key");
    assert_eq!(e[0]["path"], "linkbudget.trp");
    assert!(e[0]["line"].as_u64().unwrap() > 1);
}

#[test]
fn battery_grid_cardinality() {
    let (code, out, _) = run(&[
        "battery",
        "--scenario",
        &scenario(FR1),
        "--cycles",
        "2.56,61.44,655.36",
        "--iats",
        "600,3600,86400",
    ]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert!(lines.next().unwrap().starts_with("cycle_s,iat_s,"));
    assert_eq!(lines.count(), 9);
}

#[test]
fn battery_rejects_cycles_beyond_limits() {
    let (code, _, err) = run(&["battery", "--scenario", &scenario(FR1), "--cycles", "20000"]);
    assert_eq!(code, 2);
    assert_eq!(errors(&err)[0]["path"], "power.cycles_s[0]");
}

#[test]
fn fr2_full_power_flags_downlink() {
    let (code, out, _) = run(&["linkbudget", "--scenario", &scenario(FR2), "--trp", "23", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let flagged: Vec<&str> = v["flagged"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert_eq!(flagged, ["Msg2_PDSCH", "Msg4_PDSCH", "PDSCH"]);
    let (_, out, _) = run(&["linkbudget", "--scenario", &scenario(FR2), "--trp", "12", "--format", "json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["flagged"].as_array().unwrap().is_empty());
}

#[test]
fn flag_profiles_must_resolve() {
    let (code, _, err) = run(&["linkbudget", "--scenario", &scenario(FR1), "--profile", "reference_fr1"]);
    assert_eq!(code, 2);
    assert_eq!(errors(&err)[0]["class"], "invariant");
    let (code, _, err) = run(&["datarate", "--scenario", &scenario(FR1), "--carrier", "nope"]);
    assert_eq!(code, 2);
    assert_eq!(errors(&err)[0]["class"], "reference");
}

#[test]
fn infeasible_bwp_is_an_analysis_error() {
    let (code, out, err) = run(&["bwp", "--scenario", &scenario(FR2), "--features", "none"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    let e = errors(&err);
    assert_eq!(e[0]["class"], "analysis");
    assert!(e[0]["message"].as_str().unwrap().contains("binding"));
}

#[test]
fn report_has_every_section() {
    let (code, out, _) = run(&["report", "--scenario", &scenario(FR1)]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    for key in ["datarate", "lifetime", "linkbudget", "bwp", "access", "requirements"] {
        assert!(!v[key].is_null(), "{key}");
        assert!(v[key].get("error").is_none(), "{key}");
    }
}

#[test]
fn seed_precedence() {
    let s = scenario(FR1);
    let base = ["access-sim", "--scenario", s.as_str(), "--devices", "300"];
    let seeded = |flag: Option<&str>, env: Option<&str>| {
        let mut args = base.to_vec();
        if let Some(f) = flag {
            args.extend(["--seed", f]);
        }
        run_env(&args, env).1
    };
    assert_eq!(seeded(None, None), seeded(Some("1"), None));
    assert_eq!(seeded(None, Some("9")), seeded(Some("9"), None));
    assert_eq!(seeded(Some("5"), Some("9")), seeded(Some("5"), None));
    assert_ne!(seeded(Some("5"), None), seeded(Some("9"), None));
    let (code, _, err) = run_env(&base, Some("many"));
    assert_eq!(code, 2);
    assert!(err.contains("REDCAP_DIM_SEED"));
}

#[test]
fn output_directory_gets_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (code, stdout, _) = run(&["access-sim", "--scenario", &scenario(FR1), "--devices", "40", "--out", out]);
    assert_eq!(code, 0);
    assert_eq!(stdout.lines().count(), 2);
    let outcomes: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("access_outcomes.json")).unwrap()).unwrap();
    assert_eq!(outcomes["outcomes"].as_array().unwrap().len(), 40);
    assert!(dir.path().join("access_summary.csv").exists());
}

#[test]
fn capacity_writes_one_file_per_fraction() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let args = [
        "capacity-sim",
        "--scenario",
        &scenario(FR1),
        "--fractions",
        "0,0.5",
        "--drops",
        "1",
        "--load-points",
        "2",
        "--users-per-cell",
        "4",
        "--out",
        out,
    ];
    assert_eq!(run(&args).0, 0);
    for f in ["capacity.csv", "capacity_f0.csv", "capacity_f0.5.csv"] {
        let text = std::fs::read_to_string(dir.path().join(f)).unwrap();
        assert!(text.lines().next().unwrap().contains("load_bps,p5,p50,p95,utilization"), "{f}");
    }
}

#[test]
fn golden_outputs_are_stable() {
    for (name, scn, args) in GOLDEN {
        let a = golden_output(scn, args);
        assert_eq!(a, golden_output(scn, args), "{name}");
        check_golden(name, &a).unwrap();
    }
}

#[test]
fn streams_stay_separate_in_the_binary() {
    let bin = env!("CARGO_BIN_EXE_redcap-dim");
    let ok = std::process::Command::new(bin)
        .args(["datarate", "--scenario", &scenario(FR1)])
        .output()
        .unwrap();
    assert!(ok.status.success());
    assert!(ok.stderr.is_empty());
    let bad = std::process::Command::new(bin)
        .args(["datarate", "--scenario", "/nonexistent/scenario.json"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(bad.stdout.is_empty());
    let v: Value = serde_json::from_slice(&bad.stderr).unwrap();
    assert_eq!(v["subcommand"], "datarate");
    let help = std::process::Command::new(bin).args(["battery", "--help"]).output().unwrap();
    assert!(help.status.success());
    assert!(String::from_utf8_lossy(&help.stdout).contains("--cycles"));
}
