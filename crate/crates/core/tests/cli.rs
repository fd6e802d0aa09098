use std::path::Path;
use std::process::{Command, Output};

fn kronlow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kronlow"))
        .args(args)
        .env_remove("KRONLOW_THREADS")
        .output()
        .expect("run kronlow")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn eval_centre_point() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("c.csv");
    std::fs::write(&file, "d=2,n=1\n0.5,0.5\n").unwrap();
    for extra in [&[][..], &["--oracle"][..]] {
        let mut args = vec!["eval", "--in", path(&file)];
        args.extend_from_slice(extra);
        let out = kronlow(&args);
        assert!(out.status.success());
        let v = json(&out);
        assert_eq!(v["value"], 0.75);
        assert_eq!(v["witness"], serde_json::json!([0.5, 0.5]));
        assert_eq!(v["side"], "closed");
        assert_eq!((v["n"].as_u64(), v["d"].as_u64()), (Some(1), Some(2)));
        assert!(v["millis"].as_f64().unwrap() >= 0.0);
    }
}

#[test]
fn generate_then_eval_matches_published_cell() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("set.csv");
    let out = kronlow(&[
        "generate",
        "--family",
        "kronecker",
        "--n",
        "100",
        "--d",
        "3",
        "--params",
        "0.71810558,0.81422429",
        "--shifted",
        "--out",
        path(&file),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let manifest: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("set.csv.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["subcommand"], "generate");
    assert_eq!(manifest["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(manifest["outputs"][0], path(&file));
    assert!(manifest["args"]
        .as_array()
        .unwrap()
        .iter()
        .any(|a| a == "--shifted"));

    let v = json(&kronlow(&["eval", "--in", path(&file)]));
    assert!((v["value"].as_f64().unwrap() - 0.06020).abs() < 1e-4);
}

#[test]
fn json_outputs_name_their_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("opt.json");
    let out = kronlow(&[
        "optimize",
        "--n",
        "12",
        "--budget",
        "30",
        "--seed",
        "1",
        "--out",
        path(&file),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(v["manifest"], "opt.json.manifest.json");
    assert_eq!(v["evals_used"], 30);
    let m: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("opt.json.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(m["seed"], 1);
    assert!(m["wall_clock_secs"].as_f64().unwrap() >= 0.0);
}

#[test]
fn usage_errors_exit_2() {
    let cases: [&[&str]; 6] = [
        &["optimize", "--n", "100", "--budget", "10"],
        &["eval"],
        &["frobnicate"],
        &[
            "generate",
            "--family",
            "kronecker",
            "--n",
            "10",
            "--d",
            "3",
            "--params",
            "0.1,0.2,0.3,0.4",
        ],
        &["bench", "table1", "--columns", "L2_Subset"],
        &["eval", "--in", "x.csv", "--bogus"],
    ];
    for args in cases {
        assert_eq!(kronlow(args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(kronlow(&["--help"]).status.code(), Some(0));
}

#[test]
fn runtime_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "d=3,n=2\n0.1,0.2,0.3\n0.1,0.2\n").unwrap();
    let out = kronlow(&["eval", "--in", path(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    assert_eq!(
        kronlow(&["eval", "--in", path(&dir.path().join("missing.csv"))])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn tune_accepts_scenario_files() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("s.json");
    std::fs::write(
        &scenario,
        r#"{"n_lo": 5, "n_hi": 30, "budget_pairs": 200, "seed": 9, "instances": {"sampled": 6}}"#,
    )
    .unwrap();
    let a = kronlow(&["tune", "--scenario", path(&scenario)]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let v = json(&a);
    assert_eq!(v["scenario"]["seed"], 9);
    assert_eq!(v["params"].as_array().unwrap().len(), 2);
    assert!(v["evals_used"].as_u64().unwrap() <= 200);
    let b = kronlow(&[
        "tune",
        "--n-lo",
        "5",
        "--n-hi",
        "30",
        "--budget",
        "200",
        "--seed",
        "9",
        "--instances",
        "6",
    ]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(
        kronlow(&["tune", "--n-lo", "5", "--n-hi", "30", "--budget", "200"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn tune_interval_study_writes_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = dir.path().join("m.csv");
    let out = kronlow(&[
        "tune",
        "--intervals",
        "5-15,16-30",
        "--budget",
        "120",
        "--seed",
        "4",
        "--instances",
        "6",
        "--probes",
        "3",
        "--matrix",
        path(&matrix),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    assert_eq!(v["configs"].as_array().unwrap().len(), 2);
    let text = std::fs::read_to_string(&matrix).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.starts_with("config,n=5,n=10,n=15,n=16,n=23,n=30\n"));
}

#[test]
fn bench_subcommands() {
    let out = kronlow(&["bench", "heatmap", "--n", "10", "--res", "2"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 5);

    let out = kronlow(&["bench", "inverse", "--targets", "1.0,1e-9"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("I_2500,1,20\n"));
    assert!(text.contains("I_2500,0.000000001,unreached\n"));

    let v = json(&kronlow(&["bench", "reference", "--table", "table3"]));
    let records = v["records"].as_array().unwrap();
    assert!(records
        .iter()
        .any(|r| r["method"] == "Sobol'" && r["n"] == 16 && r["value"] == 0.13672));
    assert!(records.iter().all(|r| r["provenance"] == "paper_reference"));

    let out = kronlow(&[
        "bench",
        "table1",
        "--columns",
        "I_2500",
        "--ns",
        "100",
        "--format",
        "json",
    ]);
    let v = json(&out);
    let cell = &v["cells"][0];
    assert_eq!(cell["reference"], 0.0602);
    assert_eq!(cell["within_tolerance"], true);
}
