use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_union-channel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_with_threads(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_union-channel"))
        .args(args)
        .env("UNION_CHANNEL_THREADS", threads)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn capacity_q4_matches_table_row() {
    let o = run(&["capacity", "--q", "4"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("0.81250"), "{s}");
    assert!(s.contains("0.83044"), "{s}");
    assert!(s.contains("0.82946"), "{s}");
    assert!(s.contains("q34_LG_intersection"), "{s}");
}

#[test]
fn capacity_q2() {
    let s = stdout(&run(&["capacity", "--q", "2"]));
    for v in ["0.75000", "0.79113", "0.77291", "q2_FG_intersection"] {
        assert!(s.contains(v), "{v} missing in {s}");
    }
}

#[test]
fn capacity_rejects_q1() {
    let o = run(&["capacity", "--q", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
}

#[test]
fn capacity_jsonl_keeps_full_precision() {
    let s = stdout(&run(&["capacity", "--q", "3", "--format", "jsonl"]));
    let v: serde_json::Value = serde_json::from_str(s.trim()).unwrap();
    assert_eq!(v["case_tag"], "q34_LG_intersection");
    let r = v["r_ef"].as_f64().unwrap();
    assert!((r - 0.81510).abs() < 5e-6);
    assert!(s.contains(&format!("{r}")));
}

#[test]
fn table_rows() {
    let o = run(&["table", "--q-max", "6", "--format", "csv"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines.len(), 6);
    assert!(lines[0].starts_with("q,"));

    let single = stdout(&run(&["table", "--q-max", "2", "--format", "jsonl"]));
    assert_eq!(single.lines().count(), 1);
}

#[test]
fn table_large_q_uses_closed_form() {
    let o = run(&["table", "--q-max", "50", "--format", "jsonl"]);
    assert!(o.status.success());
    for line in stdout(&o).lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        let q = v["q"].as_u64().unwrap() as f64;
        if q >= 5.0 {
            let naive = 0.5 * ((q + 1.0) * q / 2.0).ln() / q.ln();
            assert!((v["r_ef"].as_f64().unwrap() - naive).abs() < 1e-12);
            assert_eq!(v["case_tag"], "qge5_G_peak");
        }
    }
}

#[test]
fn table_human_has_five_decimals() {
    let s = stdout(&run(&["table"]));
    assert!(s.contains("0.79113"));
    assert!(s.contains("0.84959"));
    assert!(s.contains("0.78969"));
}

#[test]
fn lemma_binary_grid_passes() {
    let o = run(&[
        "lemma",
        "--q",
        "2",
        "--theta",
        "0.75",
        "--resolution",
        "1e-4",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("PASS"));
}

#[test]
fn lemma_at_one_over_q() {
    let o = run(&[
        "lemma",
        "--q",
        "3",
        "--theta",
        "0.3333333",
        "--format",
        "jsonl",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!((v["oracle_max"].as_f64().unwrap() - 2.0).abs() < 1e-6);
    assert!((v["closed_form"].as_f64().unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn lemma_sampler_passes() {
    let o = run(&[
        "lemma",
        "--q",
        "5",
        "--theta",
        "0.5",
        "--samples",
        "100000",
        "--seed",
        "7",
        "--format",
        "jsonl",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["pass"], true);
    assert!(v["oracle_max"].as_f64().unwrap() <= v["closed_form"].as_f64().unwrap() + 1e-9);
}

#[test]
fn lemma_sampler_refuses_theta_below_one_over_q() {
    let o = run(&["lemma", "--q", "4", "--theta", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("below 1/q"));
}

#[test]
fn lemma_rejects_out_of_range_theta() {
    let o = run(&["lemma", "--q", "2", "--theta", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["lemma", "--q", "2", "--theta", "-0.1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn codec_refuses_infeasible() {
    let o = run(&["codec", "--q", "2", "--n", "17", "--m", "17", "--B", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains("LHS") && e.contains("131072"), "{e}");
    assert!(e.contains("RHS") && e.contains("= 1"), "{e}");
}

#[test]
fn codec_ternary_runs_clean() {
    let o = run(&[
        "codec", "--q", "3", "--n", "10", "--m", "7", "--B", "2", "--trials", "100",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let s = stdout(&o);
    assert!(s.contains("errors           0"), "{s}");
}

#[test]
fn codec_binary_17_13_parameters() {
    let o = run(&[
        "codec", "--q", "2", "--n", "17", "--m", "13", "--B", "3", "--trials", "1000", "--seed",
        "1", "--format", "jsonl",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines.len(), 1001);
    let summary: serde_json::Value = serde_json::from_str(lines[1000]).unwrap();
    assert_eq!(summary["errors"], 0);
    let max_u: u64 = summary["max_uncertainty"]
        .as_str()
        .unwrap()
        .parse()
        .unwrap();
    assert!(max_u <= 35840);
    let uses: u64 = summary["max_uses"].as_str().unwrap().parse().unwrap();
    assert!(uses <= 67);
}

#[test]
fn machine_output_is_deterministic_across_thread_counts() {
    let args = [
        "codec", "--q", "2", "--n", "6", "--m", "4", "--B", "3", "--trials", "200", "--seed", "9",
        "--format", "jsonl",
    ];
    let a = run_with_threads(&args, "1");
    let b = run_with_threads(&args, "4");
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);

    let args = [
        "lemma",
        "--q",
        "4",
        "--theta",
        "0.6",
        "--samples",
        "20000",
        "--format",
        "csv",
    ];
    assert_eq!(
        run_with_threads(&args, "1").stdout,
        run_with_threads(&args, "3").stdout
    );
}

#[test]
fn bad_thread_override_is_rejected() {
    let o = run_with_threads(&["capacity", "--q", "2"], "zero");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("UNION_CHANNEL_THREADS"));
}

#[test]
fn params_listing() {
    let s = stdout(&run(&[
        "params", "--q", "2", "--n-max", "17", "--format", "csv",
    ]));
    assert!(s.lines().any(|l| l.starts_with("2,17,13,0.7647")), "{s}");

    let o = run(&["params", "--q", "2", "--n-max", "64", "--format", "jsonl"]);
    let first: serde_json::Value =
        serde_json::from_str(stdout(&o).lines().next().unwrap()).unwrap();
    assert!(first["rate"].as_f64().unwrap() < 0.77291);
    assert_eq!(first["below_root"], true);

    let empty = run(&["params", "--q", "6", "--n-max", "1", "--format", "jsonl"]);
    assert!(empty.status.success());
    assert!(empty.stdout.is_empty());
}

#[test]
fn params_rejects_large_n_max() {
    let o = run(&["params", "--q", "2", "--n-max", "65"]);
    assert_eq!(o.status.code(), Some(2));
}
