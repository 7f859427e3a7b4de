use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_transduction-lab"));
    c.env_remove("TRANSDUCTION_LAB_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("transduction-lab-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn presets_lists_every_figure() {
    let o = run(&["presets"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for name in ["fig2a", "fig2e", "fig3d", "appfig1", "fig5a", "fig5f"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
}

#[test]
fn point_prints_named_metrics() {
    let o = run(&["point", "--set", "c_g=0.5", "--set", "c_nu=0.1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let eta = text.lines().find_map(|l| l.strip_prefix("eta = ")).unwrap();
    let expected = 2.0 / (2.25 - 0.4);
    assert!((eta.parse::<f64>().unwrap() - expected).abs() < 1e-12);
    assert!(text.contains("stable = 1.0000000000000000e0"));
}

#[test]
fn half_matched_point_has_infinite_capacity() {
    let o = run(&["point", "--set", "c_g=0.25", "--set", "c_nu=0.140625"]);
    assert!(stdout(&o).contains("q_lb = inf"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["sweep", "--grid", "bogus:0:1:3"]).status.code(), Some(1));
    assert_eq!(run(&["sweep", "--preset", "fig9"]).status.code(), Some(1));
    assert_eq!(run(&["point", "--set", "zeta_o=1.5"]).status.code(), Some(1));
    assert_eq!(run(&["point", "--set", "c_g"]).status.code(), Some(1));
    assert_eq!(run(&["point", "--set", "chi_o=0.1", "--set", "beta=0.5"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["sweep", "--grid", "c_g:0:1:3", "--out", "/nonexistent/dir/t.csv"]).status.code(), Some(1));
    assert_eq!(run(&["point", "--set", "c_g=1e300"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    let o = bin().env("TRANSDUCTION_LAB_THREADS", "zero").args(["sweep", "--grid", "c_g:0:1:3"]).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unstable_points_are_reported_not_dropped() {
    let o = run(&["sweep", "--set", "c_g=0.5", "--grid", "c_nu:0:2:5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().any(|r| r.ends_with(",,,,,0.0000000000000000e0,")));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["sweep", "--preset", "fig2a"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["sweep", "--preset", "fig3c", "--format", "json"];
    let outputs: Vec<Vec<u8>> = ["1", "3", "8"]
        .iter()
        .map(|n| bin().env("TRANSDUCTION_LAB_THREADS", n).args(args).output().unwrap().stdout)
        .collect();
    assert!(!outputs[0].is_empty());
    assert!(outputs.iter().all(|o| *o == outputs[0]));
}

#[test]
fn output_file_format_follows_extension() {
    let path = scratch("grid.json");
    let o = run(&["sweep", "--grid", "c_g:0.1:1:4", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let text = fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
}

#[test]
fn config_file_drives_a_sweep() {
    let cfg = scratch("sweep.toml");
    let out = scratch("from_config.csv");
    fs::write(
        &cfg,
        format!(
            "direction = \"m2o\"\nout = {:?}\n\n[set]\nc_nu = 0.1\n\n[[axis]]\ngrid = \"c_g:0.1:2:7\"\n",
            out.to_str().unwrap()
        ),
    )
    .unwrap();
    let o = run(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.contains("# direction: m2o"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 8);

    fs::write(&cfg, "colour = \"blue\"\n").unwrap();
    assert_eq!(run(&["sweep", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn check_subcommand_reports_every_criterion() {
    let o = run(&["check"]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 9, "{text}");
    assert!(text.lines().all(|l| l.starts_with("PASS ") || l.starts_with("FAIL ")));
    assert_eq!(o.status.code(), Some(if text.contains("FAIL ") { 2 } else { 0 }));
}
