use std::process::{Command, Output};

fn schurand(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schurand"))
        .args(args)
        .env_remove("SCHURAND_THREADS")
        .output()
        .expect("binary runs")
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| {
            // split on commas outside quotes
            let mut fields = vec![String::new()];
            let mut quoted = false;
            for ch in l.chars() {
                match ch {
                    '"' => quoted = !quoted,
                    ',' if !quoted => fields.push(String::new()),
                    _ => fields.last_mut().unwrap().push(ch),
                }
            }
            fields
        })
        .collect()
}

#[test]
fn dims_lists_sectors_and_their_total() {
    let out = schurand(&["dims", "--n", "4", "--d", "2"]);
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.lines().any(|l| l == "lambda,dim,mult,product"));
    let rows = data_rows(&csv);
    let (sectors, total) = rows.split_at(rows.len() - 1);
    assert_eq!(sectors.len(), 3);
    let sum: u64 = sectors.iter().map(|r| r[3].parse::<u64>().unwrap()).sum();
    assert_eq!(sum, 16);
    assert_eq!(total[0], ["total", "", "", "16"]);
    for r in sectors {
        assert_eq!(r[1].parse::<u64>().unwrap() * r[2].parse::<u64>().unwrap(), r[3].parse::<u64>().unwrap());
    }
}

#[test]
fn otoc_sweep_writes_rows_and_fit() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("o.csv");
    let out = schurand(&[
        "otoc", "--mode", "sym", "--d", "2", "--n-min", "4", "--n-max", "14", "--seed", "7", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("# schurand otoc {"));
    assert!(csv.lines().any(|l| l == "n,d,mode,r,F,stderr,n_samples,seed"));
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 11);
    assert!(rows.iter().all(|r| r[4].parse::<f64>().unwrap() > 0.0));
    let fit_line = csv.lines().find(|l| l.starts_with("# fit ")).unwrap();
    let fit: serde_json::Value = serde_json::from_str(&fit_line[6..]).unwrap();
    assert!(fit["slope"].as_f64().unwrap() < 0.0);
    // stdout carries the same fit as a one-line summary
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary, fit);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let path = dir.path().join(format!("run{i}.csv"));
            let out = schurand(&[
                "--threads", "3", "code", "--mode", "sample", "--n", "4", "--samples", "60", "--seed", "5", "--out",
                path.to_str().unwrap(),
            ]);
            assert!(out.status.success());
            std::fs::read(&path).unwrap()
        })
        .collect();
    // the file records its own path, which differs between runs
    let strip = |b: &[u8]| String::from_utf8(b.to_vec()).unwrap().lines().skip(1).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&runs[0]), strip(&runs[1]));
    let a = schurand(&["haar-sample", "--n", "4", "--d", "3", "--seed", "9", "--count", "3"]);
    let b = schurand(&["haar-sample", "--n", "4", "--d", "3", "--seed", "9", "--count", "3"]);
    assert_eq!(a.stdout, b.stdout);
    let q1 = schurand(&["qntk", "--n", "4", "--lambda", "3,1", "--layers", "2", "--steps", "5", "--seed", "2"]);
    let q2 = schurand(&["qntk", "--n", "4", "--lambda", "3,1", "--layers", "2", "--steps", "5", "--seed", "2"]);
    assert!(q1.status.success());
    assert_eq!(q1.stdout, q2.stdout);
}

#[test]
fn thread_count_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_schurand"))
        .args(["otoc", "--n-min", "4", "--n-max", "4", "--samples", "20", "--seed", "1"])
        .env("SCHURAND_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.lines().next().unwrap().contains("\"threads\":2"));
}

#[test]
fn qntk_emits_trajectory_and_summary() {
    let out = schurand(&["qntk", "--n", "4", "--d", "2", "--lambda", "3,1", "--layers", "8", "--steps", "20", "--seed", "3"]);
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.lines().any(|l| l == "t,eps,K"));
    assert_eq!(data_rows(&csv).len(), 21);
    let summary: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(summary["kbar"].as_f64().unwrap() > 0.0);
    assert!(summary["fitted_rate"].as_f64().unwrap() < 0.0);
    assert!(summary["heuristic_kbar"].as_f64().is_some());
}

#[test]
fn code_modes_share_one_column_layout() {
    for args in [
        vec!["code", "--mode", "avg", "--n", "6"],
        vec!["code", "--mode", "fig2", "--k", "1"],
        vec!["code", "--mode", "mi", "--n", "4", "--t", "2"],
    ] {
        let out = schurand(&args);
        assert!(out.status.success(), "{args:?}");
        let csv = String::from_utf8(out.stdout).unwrap();
        assert!(csv.lines().any(|l| l == "n,k,d,mode,value,stderr,approx"));
        assert!(data_rows(&csv).iter().all(|r| r.len() == 7));
    }
}

#[test]
fn failures_have_distinct_exit_codes() {
    let code = |args: &[&str]| schurand(args).status.code().unwrap();
    assert_eq!(code(&["no-such-command"]), 3);
    assert_eq!(code(&["dims", "--n", "four", "--d", "2"]), 2);
    assert_eq!(code(&["haar-sample", "--n", "3", "--d", "2"]), 2);
    assert_eq!(code(&["qntk", "--n", "5", "--lambda", "3,1", "--seed", "1"]), 2);
    assert_eq!(code(&["schur", "--n", "13", "--d", "2"]), 4);
    assert_eq!(code(&["otoc", "--mode", "pauli", "--d", "3", "--n-min", "2", "--n-max", "3"]), 5);
    assert_eq!(code(&["dims", "--n", "3", "--d", "2", "--out", "/nonexistent-dir/x.csv"]), 6);
    let out = schurand(&["schur", "--n", "13", "--d", "2"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}
