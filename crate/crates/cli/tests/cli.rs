use std::process::{Command, Output};

use serde_json::Value;

fn tuckerlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tuckerlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.push("--json");
    let out = tuckerlab(&full);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}\n{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    });
    (out.status.code().unwrap(), v)
}

#[test]
fn tucker_sampling_all_witnessed() {
    let (code, v) = json(&["check", "--theorem", "tucker", "--gen", "cross:2", "--samples", "2000", "--seed", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["witnesses"], 2000);
    assert_eq!(v["global"]["seed"], 1);
    assert_eq!(v["config"]["theorem"], "tucker");
    assert!(v["version"].is_string());
}

#[test]
fn exhaustive_checks() {
    let (code, v) = json(&["check", "--theorem", "oct_cub", "--gen", "cross:2", "--exhaustive", "--budget", "1000000"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["valid_labellings"], 64);
    assert_eq!(v["result"]["witnesses"], 64);

    let (code, v) = json(&["check", "--theorem", "sperner", "--gen", "simplex:2:k=1", "--exhaustive"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["valid_labellings"], 1);

    let out = tuckerlab(&["check", "--theorem", "tucker", "--gen", "bary(cross:2,rounds=1)", "--exhaustive", "--budget", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn parity_commands() {
    let (code, v) = json(&["parity", "--rule", "tucker", "--labels", "cross:3", "--gen", "cross:2", "--seed", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["chain"]["closed_form"], true);
    assert_eq!(v["result"]["completed"], 1);
    let counts: Vec<u64> = serde_json::from_value(v["result"]["runs"][0]["counts"].clone()).unwrap();
    assert!(counts[1..].iter().all(|c| c % 2 == 1));

    let (code, v) = json(&["parity", "--rule", "tucker", "--labels", "cross:2", "--gen", "cross:2", "--seed", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["aborted"], 1);
    assert!(v["result"]["runs"][0]["forbidden"].is_array());

    let (code, v) = json(&[
        "parity", "--rule", "cubical", "--labels", "cube:3", "--gen", "bary(cross:2,rounds=1)", "--search-nonforbidden", "--seed", "2",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["chain"]["phi_bound"], true);

    // no non-neutral labelling exists with three coordinates on the coarse cross
    let out = tuckerlab(&["parity", "--rule", "cubical", "--labels", "cube:3", "--gen", "cross:2", "--search-nonforbidden"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reduce_configs() {
    for (cfg, gen) in [
        ("oct-in-2oct", "cross:2"),
        ("oct-in-2oct", "bary(cross:2,rounds=1)"),
        ("cube-in-2oct", "cube:2:k=1"),
        ("oct-in-2cube", "cross:2"),
    ] {
        let (code, v) = json(&["reduce", "--config", cfg, "--gen", gen, "--samples", "30", "--seed", "3"]);
        assert_eq!(code, 0, "{cfg} {gen}");
        assert_eq!(v["result"]["inner_witnesses"], 30);
    }
}

#[test]
fn reports_are_reproducible() {
    let args = ["reduce", "--config", "oct-in-2oct", "--gen", "cross:3", "--samples", "5", "--seed", "9"];
    assert_eq!(json(&args).1, json(&args).1);
}

#[test]
fn gen_roundtrip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let tri = dir.path().join("t.json");
    let lab = dir.path().join("l.json");
    let ext = dir.path().join("ext.json");
    let out = tuckerlab(&[
        "gen", "--gen", "cross:2", "--theorem", "tucker", "--seed", "4",
        "--out", tri.to_str().unwrap(), "--labels-out", lab.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&tri).unwrap()).unwrap();
    assert_eq!(doc["vertices"].as_array().unwrap().len(), 5);
    assert_eq!(doc["domain"]["kind"], "CROSS");

    let (code, v) = json(&[
        "check", "--theorem", "tucker", "--triangulation", tri.to_str().unwrap(), "--labelling", lab.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["check"]["witness"]["kind"], "COMPLEMENTARY_EDGE");

    let out = tuckerlab(&[
        "reduce", "--config", "oct-in-2oct", "--triangulation", tri.to_str().unwrap(), "--extension", ext.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let e: Value = serde_json::from_str(&std::fs::read_to_string(&ext).unwrap()).unwrap();
    assert_eq!(e["triangulation"]["vertices"].as_array().unwrap().len(), 9);
    assert_eq!(e["provenance"].as_array().unwrap().len(), 12);
}

#[test]
fn crosscheck_command() {
    let (code, v) = json(&["crosscheck", "--labels", "cross:3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["mismatches"], 0);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(tuckerlab(&["check", "--theorem", "brouwer", "--gen", "cross:2"]).status.code(), Some(2));
    assert_eq!(tuckerlab(&["check", "--theorem", "tucker", "--gen", "torus:2"]).status.code(), Some(2));
    assert_eq!(tuckerlab(&["reduce", "--config", "cube-in-2oct", "--gen", "cube:3"]).status.code(), Some(2));
    assert_eq!(tuckerlab(&["check", "--theorem", "tucker"]).status.code(), Some(2));
}
