use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn hamlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hamlab"))
        .args(args)
        .env_remove("HAMLAB_WORK_BUDGET")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hamlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn gen_writes_a_header_and_is_deterministic() {
    let args = ["gen", "--family", "gnp", "--n", "1000", "--p", "0.014", "--seed", "7"];
    let a = hamlab(&args);
    assert_eq!(code(&a), 0);
    let out = stdout(&a);
    let header: Vec<&str> = out.lines().next().unwrap().split(' ').collect();
    assert_eq!(header[0], "1000");
    let m: usize = header[1].parse().unwrap();
    assert_eq!(out.lines().count(), m + 1);
    assert_eq!(a.stdout, hamlab(&args).stdout);

    let file = tmp("g.txt");
    let o = hamlab(&["gen", "--family", "gnp", "--n", "1000", "--p", "0.014", "--seed", "7", "--out", file.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(std::fs::read_to_string(&file).unwrap(), out);
}

#[test]
fn gen_rejects_bad_parameters() {
    let o = hamlab(&["gen", "--family", "cycle", "--n", "2"]);
    assert_eq!(code(&o), 64);
    assert_eq!(code(&hamlab(&["gen", "--family", "gnp", "--n", "5"])), 64);
    assert_eq!(code(&hamlab(&["frobnicate"])), 64);
    assert_eq!(code(&hamlab(&["hamilton", "--family", "complete", "--n", "5", "--mode", "fast"])), 64);
    assert_eq!(code(&hamlab(&["--help"])), 0);
}

#[test]
fn check_exit_codes() {
    let o = hamlab(&["check", "--joined", "--s", "2", "--family", "clique_plus_isolated", "--clique", "5", "--isolated", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["verdict"], "holds");
    assert_eq!(json(&o)["schema"], 1);

    let o = hamlab(&["check", "--expansion", "--s", "2", "--d", "2", "--family", "cycle", "--n", "6"]);
    assert_eq!(code(&o), 1);
    let w = &json(&o)["witness"];
    assert_eq!(w["kind"], "set");
    assert!(w["neighborhood"].as_array().unwrap().len() < 2 * w["set"].as_array().unwrap().len());

    let o = hamlab(&["check", "--fconn", "--preset", "paper", "--family", "cycle", "--n", "10"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["witness"]["kind"], "separation");

    // exact search with a one-node budget cannot finish
    let o = hamlab(&["check", "--expansion", "--s", "3", "--d", "1", "--family", "complete", "--n", "12", "--work-budget", "1"]);
    assert_eq!(code(&o), 2);
    let o = Command::new(env!("CARGO_BIN_EXE_hamlab"))
        .args(["check", "--expansion", "--s", "3", "--d", "1", "--family", "complete", "--n", "12"])
        .env("HAMLAB_WORK_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);

    // exactly one condition must be named
    assert_eq!(code(&hamlab(&["check", "--family", "cycle", "--n", "6"])), 64);
}

#[test]
fn hamilton_examples() {
    let o = hamlab(&["hamilton", "--family", "complete", "--n", "25"]);
    assert_eq!(code(&o), 0);
    let mut vs: Vec<usize> = stdout(&o).split_whitespace().map(|t| t.parse().unwrap()).collect();
    vs.sort_unstable();
    assert_eq!(vs, (0..25).collect::<Vec<_>>());

    let o = hamlab(&["hamilton", "--family", "petersen", "--budget", "10^6"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["found"], false);

    let o = hamlab(&["hamilton", "--family", "petersen", "--mode", "proof_faithful"]);
    assert_eq!(code(&o), 1);
    let stage = json(&o)["stage"].as_str().unwrap().to_string();
    assert!(!stage.is_empty());
    assert!(json(&o)["stats"]["rotations"].is_u64());
}

#[test]
fn hamilton_reads_edge_lists() {
    let file = tmp("c7.txt");
    std::fs::write(&file, "7 7\n0 1\n1 2\n2 3\n3 4\n4 5\n5 6\n6 0\n").unwrap();
    let o = hamlab(&["hamilton", "--graph", file.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["cycle"].as_array().unwrap().len(), 7);
    std::fs::write(&file, "7 8\n0 1\n").unwrap();
    assert_eq!(code(&hamlab(&["hamilton", "--graph", file.to_str().unwrap()])), 64);
}

#[test]
fn path_and_cycle_k() {
    let o = hamlab(&["path", "--family", "complete", "--n", "7", "--u", "2", "--v", "5"]);
    assert_eq!(code(&o), 0);
    let p: Vec<usize> = stdout(&o).split_whitespace().map(|t| t.parse().unwrap()).collect();
    assert_eq!((p[0], p[6], p.len()), (2, 5, 7));
    let o = hamlab(&["path", "--family", "path", "--n", "3", "--u", "0", "--v", "1"]);
    assert_eq!(code(&o), 1);
    assert_eq!(code(&hamlab(&["path", "--family", "path", "--n", "3", "--u", "1", "--v", "1"])), 64);

    let o = hamlab(&["cycle-k", "--family", "complete", "--n", "10", "--k", "5", "--format", "json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["cycle"].as_array().unwrap().len(), 5);
    let o = hamlab(&["cycle-k", "--family", "cycle", "--n", "9", "--k", "5", "--mode", "heuristic"]);
    assert_eq!(code(&o), 1);
    assert_eq!(code(&hamlab(&["cycle-k", "--family", "cycle", "--n", "9", "--k", "2"])), 64);
}

#[test]
fn pivot_audit_examples() {
    let o = hamlab(&["pivot-audit", "--family", "complete", "--n", "8"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["bad"], serde_json::json!([]));
    assert_eq!(v["l"], 8);
    assert_eq!(v["certificate_valid"], true);

    let o = hamlab(&["pivot-audit", "--family", "path", "--n", "50"]);
    let v = json(&o);
    assert_eq!(v["bad"].as_array().unwrap().len(), 48);
    assert!(v["per_pivot_sizes"].as_object().unwrap().values().all(|s| s == 1));
    assert_eq!(v["certificate_valid"], true);

    let o = hamlab(&["pivot-audit", "--family", "cycle", "--n", "6", "--path", "0 2 1 3 4 5"]);
    assert_eq!(code(&o), 64);
}

#[test]
fn sweep_rows_and_determinism() {
    let out = tmp("sweep.csv");
    let args = [
        "sweep", "--n", "150", "--pmin", "0.01", "--pmax", "0.09", "--steps", "9", "--trials", "50", "--seed", "4",
        "--mode", "heuristic", "--jobs", "2", "--out", out.to_str().unwrap(),
    ];
    assert_eq!(code(&hamlab(&args)), 0);
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 1 + 9 * 50);
    assert_eq!(csv.lines().next().unwrap(), "trial,seed,n,p,success,rotations,ms");
    assert_eq!(code(&hamlab(&args)), 0);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), csv);

    let agg: Value = serde_json::from_str(&std::fs::read_to_string(out.with_extension("aggregate.json")).unwrap()).unwrap();
    let rates: Vec<f64> = agg["points"].as_array().unwrap().iter().map(|p| p["rate"].as_f64().unwrap()).collect();
    assert_eq!(rates.len(), 9);
    for i in 0..rates.len() {
        for j in i + 1..rates.len() {
            assert!(rates[j] >= rates[i] - 0.15, "rates not monotone: {rates:?}");
        }
    }
    // rows come out in trial order whatever the thread count
    let one = hamlab(&[
        "sweep", "--n", "150", "--pmin", "0.01", "--pmax", "0.09", "--steps", "9", "--trials", "50", "--seed", "4",
        "--mode", "heuristic", "--jobs", "1",
    ]);
    assert_eq!(stdout(&one), csv);
    assert_eq!(code(&hamlab(&["sweep", "--n", "10", "--pmin", "0.5", "--pmax", "0.2"])), 64);
}

#[test]
fn fconn_pipeline_examples() {
    let o = hamlab(&["fconn-pipeline", "--family", "complete", "--n", "30"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["certified"], true);
    let o = hamlab(&["fconn-pipeline", "--family", "cycle", "--n", "10"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!((v["certified"].clone(), v["failed_hypothesis"].clone()), (false.into(), "f_connected".into()));
    let o = hamlab(&["fconn-pipeline", "--family", "complete_bipartite", "--a", "2", "--b", "3", "--fconst", "0"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn emitted_configs_replay() {
    let cfg = tmp("cfg.json");
    let args = ["hamilton", "--family", "gnp", "--n", "80", "--p", "0.12", "--seed", "3", "--format", "json"];
    let emitted = hamlab(&[&["--emit-config"], &args[..]].concat());
    assert_eq!(code(&emitted), 0);
    std::fs::write(&cfg, &emitted.stdout).unwrap();
    let direct = hamlab(&args);
    let replay = hamlab(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(direct.stdout, replay.stdout);
    assert_eq!(code(&direct), code(&replay));
}

#[test]
fn golden_configs() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for name in ["gen_gnp", "hamilton_gnp", "sweep_small"] {
        let cfg = dir.join(format!("{name}.json"));
        let expected = std::fs::read_to_string(dir.join(format!("{name}.out"))).unwrap();
        let o = hamlab(&["--config", cfg.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{name}");
        assert!(stdout(&o) == expected, "{name}: output differs from the stored run");
    }
}
