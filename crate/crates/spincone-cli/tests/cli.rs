//! End-to-end coverage of the command surface: flags, exit codes, file
//! formats, and determinism.

use std::process::{Command, Output};

fn spincone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spincone"))
        .args(args)
        .output()
        .expect("spawn spincone")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn derive_check_passes_and_prints_the_system() {
    let out = spincone(&["derive", "--check"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for name in ["dA1 =", "dA2 =", "dA3 =", "dB =", "dC ="] {
        assert!(text.contains(name), "missing {name} in output");
    }
}

#[test]
fn derive_bc_equal_prints_four_equations() {
    let out = spincone(&["derive", "--bc-equal", "--check"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("dB ="));
    assert!(!text.contains("dC ="), "B = C system has no separate dC equation");
}

#[test]
fn derive_show_dphi_lists_five_components() {
    let out = spincone(&["derive", "--show-dphi"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let count = text.lines().filter(|l| l.starts_with('[')).count();
    assert_eq!(count, 5, "expected 5 degree-5 components:\n{text}");
}

#[test]
fn derive_json_format_is_well_formed() {
    let out = spincone(&["derive", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    for key in ["dA1", "dA2", "dA3", "dB", "dC"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn verify_runs_all_five_suites() {
    let out = spincone(&["verify"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["all_pass"], serde_json::json!(true));
    assert_eq!(v["suites"].as_array().unwrap().len(), 5);
}

#[test]
fn verify_single_suite_filter() {
    let out = spincone(&["verify", "--suite", "f-identity"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let suites = v["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 1);
    assert_eq!(suites[0]["name"], serde_json::json!("f-identity"));
}

#[test]
fn verify_corrupted_table_hook_fails_naming_the_table() {
    let out = Command::new(env!("CARGO_BIN_EXE_spincone"))
        .args(["verify"])
        .env("SPIN7_TEST_CORRUPT_TABLE", "1")
        .output()
        .expect("spawn spincone");
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("horizontal table"), "failure must name the table:\n{text}");
}

#[test]
fn family_sweep_is_deterministic_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let csv1 = dir.path().join("a.csv");
    let csv2 = dir.path().join("b.csv");
    for csv in [&csv1, &csv2] {
        let out = spincone(&[
            "family",
            "--alpha",
            "0.5",
            "--output",
            csv.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let b1 = std::fs::read(&csv1).unwrap();
    let b2 = std::fs::read(&csv2).unwrap();
    assert_eq!(b1, b2, "identical runs must be byte-identical");
    let text = String::from_utf8(b1).unwrap();
    assert_eq!(text.lines().count(), 201); // header + 200 grid rows
    assert!(text.starts_with("alpha,r,t_deriv,A1,A2,A3,B,C,res1,res2,res3,res4,res5"));
}

#[test]
fn family_summary_reports_limits_and_evidence() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("fam.csv");
    let out = spincone(&[
        "family",
        "--alpha",
        "0.9",
        "--r-samples",
        "40",
        "--output",
        csv.to_str().unwrap(),
        "--summary",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["residual_ok"], serde_json::json!(true));
    let lim = &v["smoothness_limits"][0]["limits"];
    assert!((lim["abs_da1_dt"].as_f64().unwrap() - 4.0).abs() < 1e-6);
    assert_eq!(
        v["holonomy_evidence"][0]["label"],
        serde_json::json!("SU(4) evidence")
    );
}

#[test]
fn family_domain_error_exits_2() {
    let out = spincone(&["family", "--alpha", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn family_plot_script_references_the_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("fam.csv");
    let gp = dir.path().join("fam.gp");
    let out = spincone(&[
        "family",
        "--alpha",
        "0.3",
        "--r-samples",
        "16",
        "--output",
        csv.to_str().unwrap(),
        "--plot-script",
        gp.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let script = std::fs::read_to_string(&gp).unwrap();
    assert!(script.contains(csv.to_str().unwrap()));
    assert!(script.contains("plot "));
}

#[test]
fn integrate_until_a2_writes_trajectory_and_monitor() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("traj.csv");
    let out = spincone(&[
        "integrate",
        "--from-family-r",
        "1.2",
        "--alpha",
        "0.3",
        "--until-a2",
        "3",
        "--output",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("t,A1,A2,A3,B,C"));
    let last = text.lines().last().unwrap();
    let a2: f64 = last.split(',').nth(2).unwrap().parse().unwrap();
    assert!((a2.abs() - 3.0).abs() < 1e-9, "landed at |A2| = {}", a2.abs());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["drift"]["b2_minus_c2"].as_f64().unwrap() < 1e-8);
}

#[test]
fn integrate_seed_short_run() {
    let out = spincone(&[
        "integrate",
        "--seed",
        "symmetric",
        "--alpha",
        "0.6",
        "--t-end",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("final_state"));
}

#[test]
fn integrate_singular_state_exits_2() {
    let out = spincone(&["integrate", "--state", "0.1,-1e-15,-1,1,1,1", "--t-end", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_holonomy_labels() {
    let out = spincone(&["check-holonomy", "--alpha", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v[0]["label"], serde_json::json!("Sp(2) evidence"));

    let out = spincone(&["check-holonomy", "--alpha", "0.5"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v[0]["label"], serde_json::json!("SU(4) evidence"));
}

#[test]
fn explore_alc_reports_the_stable_circle() {
    let out = spincone(&["explore-alc", "--a", "0.5", "--b", "1", "--t-end", "30"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["stable_function"], serde_json::json!("A3"));
    assert!(v["stable_rel_change"].as_f64().unwrap() < 0.05);
    assert_eq!(v["drift"]["b2_minus_c2"], serde_json::json!(0.0));
}

#[test]
fn config_file_applies_and_cli_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    std::fs::write(&conf, "r_samples = 50\nr_max = 10\n").unwrap();
    let csv = dir.path().join("a.csv");
    let out = spincone(&[
        "--config",
        conf.to_str().unwrap(),
        "family",
        "--alpha",
        "0.3",
        "--output",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 51);

    // The explicit flag beats the file.
    let out = spincone(&[
        "--config",
        conf.to_str().unwrap(),
        "family",
        "--alpha",
        "0.3",
        "--r-samples",
        "10",
        "--output",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 11);
}

#[test]
fn thread_cap_leaves_output_identical() {
    let dir = tempfile::tempdir().unwrap();
    let csv1 = dir.path().join("p1.csv");
    let csvn = dir.path().join("pn.csv");
    for (csv, threads) in [(&csv1, "1"), (&csvn, "4")] {
        let out = Command::new(env!("CARGO_BIN_EXE_spincone"))
            .args(["family", "--alpha", "0.6", "--r-samples", "64", "--output", csv.to_str().unwrap()])
            .env("SPIN7_THREADS", threads)
            .output()
            .expect("spawn spincone");
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&csv1).unwrap(), std::fs::read(&csvn).unwrap());
}
