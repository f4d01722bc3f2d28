use std::process::{Command, Output};

fn frogsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frogsim"))
        .args(args)
        .env_remove("FROGSIM_SEED")
        .output()
        .expect("spawn frogsim")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn exact_prints_pmf_csv() {
    let out = frogsim(&["exact", "--p", "0.5", "--N", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "v,mass");
    let masses: Vec<f64> = rows[1..].iter().map(|r| r.split(',').nth(1).unwrap().parse().unwrap()).collect();
    for (got, want) in masses.iter().zip([0.5, 2.0 / 9.0, 5.0 / 18.0]) {
        assert!((got - want).abs() < 1e-12);
    }
    let echo = String::from_utf8(out.stderr).unwrap();
    assert!(echo.contains("p=0.5") && echo.contains("N=3") && echo.contains("version="));
}

#[test]
fn constants_json_embeds_config() {
    let out = frogsim(&["constants", "--p", "0.75", "--N", "1001", "--seed", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((value["limit_small"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-15);
    assert_eq!(value["feasible"], false);
    assert_eq!(value["config"]["seed"], 4);
    assert_eq!(value["config"]["N"], 1001);
}

#[test]
fn simulate_with_zero_survival_visits_root_only() {
    let out = frogsim(&["simulate", "--p", "0", "--N", "5", "--seed", "1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["trajectories"][0]["v_infinity"], 1);
}

#[test]
fn seed_falls_back_to_environment() {
    let run = |env: Option<&str>, args: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_frogsim"));
        cmd.args(args).env_remove("FROGSIM_SEED");
        if let Some(seed) = env {
            cmd.env("FROGSIM_SEED", seed);
        }
        let out = cmd.output().unwrap();
        serde_json::from_slice::<serde_json::Value>(&out.stdout).unwrap()["config"]["seed"].clone()
    };
    let args = ["constants", "--p", "0.75", "--N", "101"];
    assert_eq!(run(Some("9"), &args), 9);
    let mut flagged = args.to_vec();
    flagged.extend(["--seed", "2"]);
    assert_eq!(run(Some("9"), &flagged), 2);
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("frogsim-cli-test-{}.csv", std::process::id()));
    let out = frogsim(&["exact", "--p", "0.3", "--N", "4", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(text.starts_with("v,mass\n1,0.7"));
}

#[test]
fn exit_codes() {
    assert_eq!(frogsim(&["simulate", "--p"]).status.code(), Some(1));
    assert_eq!(frogsim(&["bogus"]).status.code(), Some(1));
    assert_eq!(frogsim(&["--help"]).status.code(), Some(0));
    assert_eq!(frogsim(&["exact", "--p", "1.0", "--N", "3"]).status.code(), Some(2));
    assert_eq!(frogsim(&["constants", "--p", "0.4", "--N", "100"]).status.code(), Some(2));
    assert_eq!(frogsim(&["exact", "--p", "0.5", "--N", "600"]).status.code(), Some(2));
    assert_eq!(frogsim(&["constants", "--p", "0.75", "--N", "100", "--format", "csv"]).status.code(), Some(2));
}

#[test]
fn couple_check_passes_on_valid_coupling() {
    let out = frogsim(&["couple-check", "--p", "0.75", "--N", "10001", "--replicas", "200", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["outcome_violations"], 0);
    assert_eq!(value["replicas"], 200);
}

#[test]
fn sweep_csv_has_fixed_header() {
    let out = frogsim(&["sweep", "--p", "0.4,0.75", "--N", "501", "--replicas", "100", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().next().unwrap(), frogsim::experiments::REPORT_CSV_HEADER);
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn frog_reads_graph_file() {
    let path = std::env::temp_dir().join(format!("frogsim-graph-{}.txt", std::process::id()));
    std::fs::write(&path, "4 3 0\n0 1\n1 2\n2 3\n").unwrap();
    let out = frogsim(&["frog", "--p", "0.5", "--graph-file", path.to_str().unwrap(), "--replicas", "5", "--format", "csv"]);
    std::fs::write(&path, "4 2 0\n0 1\n2 3\n").unwrap();
    let disconnected = frogsim(&["frog", "--p", "0.5", "--graph-file", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 6);
    assert_eq!(disconnected.status.code(), Some(2));
}
