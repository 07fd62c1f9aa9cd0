#![allow(dead_code)]

use std::path::PathBuf;

pub fn scenario(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name);
    p.to_string_lossy().into_owned()
}

pub const FR1: &str = "fr1_urban_micro.json";
pub const FR2: &str = "fr2_indoor.json";

/// Runs the tool in-process with no seed in the environment.
pub fn run(args: &[&str]) -> (i32, String, String) {
    run_env(args, None)
}

pub fn run_env(args: &[&str], env_seed: Option<&str>) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("redcap-dim").chain(args.iter().copied());
    let code = redcap_dim::run_with_env(argv, env_seed.map(str::to_string), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

/// Golden report files: name, scenario, extra arguments.
pub const GOLDEN: &[(&str, &str, &[&str])] = &[
    ("datarate_fr1.csv", FR1, &["datarate"]),
    ("datarate_fr2.json", FR2, &["datarate", "--format", "json"]),
    ("battery_fr1.csv", FR1, &["battery"]),
    ("linkbudget_fr1.csv", FR1, &["linkbudget"]),
    ("linkbudget_fr2_trp23.csv", FR2, &["linkbudget", "--trp", "23"]),
    ("bwp_fr1.txt", FR1, &["bwp"]),
    ("access_fr1.csv", FR1, &["access-sim", "--devices", "200"]),
    ("report_fr1.json", FR1, &["report"]),
];

pub fn golden_output(scn: &str, args: &[&str]) -> String {
    let path = scenario(scn);
    let mut full = args.to_vec();
    full.extend(["--scenario", path.as_str()]);
    let (code, out, err) = run(&full);
    assert_eq!(code, 0, "{args:?}: {err}");
    out
}

/// Compares `actual` with the stored golden file. `REDCAP_DIM_BLESS=1`
/// rewrites the file instead.
pub fn check_golden(name: &str, actual: &str) -> Result<(), String> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("REDCAP_DIM_BLESS").is_some() {
        std::fs::write(&path, actual).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let expected = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected == actual {
        Ok(())
    } else {
        Err(format!("{name} differs from its golden file"))
    }
}
