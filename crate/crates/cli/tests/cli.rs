use std::path::Path;
use std::process::{Command, Output};

use unimodal_cli::RunConfig;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_unimodal"));
    c.env_remove("UNIMODAL_N").env_remove("UNIMODAL_SEED").env_remove("UNIMODAL_DEGREE_BUDGET");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn nz_reports_and_exit_codes() {
    let o = run(&["nz", "--coeffs", "1,1,1,1,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["nz"], 4);

    let o = run(&["nz", "--coeffs", "1,1,-1,-1,1", "--check", "skew"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["nz"], 0);

    assert_eq!(run(&["nz", "--coeffs", "1,,x"]).status.code(), Some(2));
    assert_eq!(run(&["nz", "--coeffs", "1,2,3"]).status.code(), Some(3));
    assert_eq!(run(&["nz", "--coeffs", "0"]).status.code(), Some(3));
    assert_eq!(run(&["nz", "--coeffs", "1,1,1", "--check", "skew"]).status.code(), Some(3));
    assert_eq!(run(&["nz", "--bogus"]).status.code(), Some(2));

    let o = run(&["nz", "--coeffs", "1,2,3", "--lift"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["route"], "product");
}

#[test]
fn nz_reads_json_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    std::fs::write(&path, r#"{"coeffs": [1, "1", 1]}"#).unwrap();
    let o = run(&["nz", "--file", path.to_str().unwrap(), "--bits", "40"]);
    assert_eq!(json(&o)["nz"], 2);
    std::fs::write(&path, "[1, 1,").unwrap();
    assert_eq!(run(&["nz", "--file", path.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["nz", "--file", "/nonexistent/p.json"]).status.code(), Some(2));
}

#[test]
fn census_rows_and_minima() {
    let o = run(&["census", "--family", "sr-littlewood", "--n", "1..16"]);
    assert_eq!(o.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 16);
    let minima: Vec<u32> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
    assert_eq!(minima, [1, 2, 3, 2, 3, 2, 3, 2, 3, 2, 3, 2, 5, 6, 3, 4]);
    assert_eq!(&rows[4][5], "9/2");
    let hist: serde_json::Value = serde_json::from_str(&rows[4][6]).unwrap();
    assert_eq!(hist["5"], 6);
}

#[test]
fn census_over_budget_skips_with_warning() {
    let o = run(&["census", "--n", "4..20", "--budget", "100"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("sr-littlewood,20,") && l.ends_with(",skipped")));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn config_layers_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# test\nn = 1..3\nseed = 5\ndegree_budget = 900\n").unwrap();
    let dump = |extra_env: &[(&str, &str)], flags: &[&str]| {
        let mut c = bin();
        c.args(["--config", cfg.to_str().unwrap(), "--dump-config", "census"]).args(flags);
        for (k, v) in extra_env {
            c.env(k, v);
        }
        RunConfig::from_text(&stdout(&c.output().unwrap())).unwrap()
    };
    let file_only = dump(&[], &[]);
    assert_eq!((file_only.n.hi, file_only.seed, file_only.degree_budget), (3, 5, 900));
    let env = dump(&[("UNIMODAL_N", "1..4"), ("UNIMODAL_DEGREE_BUDGET", "77")], &[]);
    assert_eq!((env.n.hi, env.degree_budget), (4, 77));
    let flags = dump(&[("UNIMODAL_N", "1..4")], &["--n", "1..5"]);
    assert_eq!(flags.n.hi, 5);
    assert_eq!(flags.command.as_deref(), Some("census"));
}

#[test]
fn bad_config_values_are_parse_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "epsilon = 2\n").unwrap();
    assert_eq!(run(&["--config", cfg.to_str().unwrap(), "census"]).status.code(), Some(2));
    std::fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(run(&["--config", cfg.to_str().unwrap(), "census"]).status.code(), Some(2));
    let o = bin().env("UNIMODAL_ENUM_BUDGET", "0").args(["census", "--n", "2"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(run(&["scatter", "--eps", "0"]).status.code(), Some(2));
}

#[test]
fn config_round_trips() {
    let mut c = RunConfig::default();
    for (k, v) in [("family", "skew-littlewood"), ("n", "4..12"), ("coeff_set", "-2,0,5"), ("epsilon", "0.123456789"),
        ("seed", "18446744073709551615"), ("count", "9"), ("quad_tol", "3.5e-13"), ("workers", "2"), ("output", "out.csv")]
    {
        c.set(k, v).unwrap();
    }
    assert_eq!(RunConfig::from_text(&c.to_text()).unwrap(), c);
    assert_eq!(RunConfig::from_text(&RunConfig::default().to_text()).unwrap(), RunConfig::default());
}

#[test]
fn verify_summary_and_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rows.csv");
    let o = run(&["verify", "--suite", "littlewood-l1", "--count", "200", "--seed", "7", "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("littlewood-l1: 200/200 pass"));
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 201);
    assert_eq!(run(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
    assert!(stdout(&run(&["verify", "--list"])).contains("integer-solve"));
}

#[test]
fn fekete_and_plot_files() {
    let dir = tempfile::tempdir().unwrap();
    let plot = dir.path().join("fekete.dat");
    let o = run(&["fekete", "--p", "3..60", "--oracle", "--plot", plot.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1 + 16);
    assert!(text.lines().skip(1).all(|l| l.split(',').nth(2) == Some("0")));
    let data = std::fs::read_to_string(&plot).unwrap();
    assert_eq!(data.lines().count(), 16);
    assert!(data.lines().all(|l| l.split(' ').count() == 2));
    assert_eq!(run(&["fekete", "--p", "24..28"]).status.code(), Some(3));
}

#[test]
fn scatter_is_reproducible() {
    let args = ["scatter", "--random", "--n", "6..14", "--count", "25", "--seed", "3", "--coeff-set", "-2,-1,0,1,2"];
    let a = run(&args);
    let b = run(&[&args[..], &["--workers", "1"]].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 26);
    assert_eq!(run(&["scatter", "--family", "skew-littlewood", "--n", "4"]).status.code(), Some(3));
}

#[test]
fn counterexample_rows() {
    let o = run(&["counterexample", "--n", "1..20"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 21);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true,2,2")));
    assert_eq!(run(&["counterexample", "--n", "0..2"]).status.code(), Some(3));
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.csv");
    let o = run(&["census", "--n", "3", "--output", out.to_str().unwrap()]);
    assert!(o.stdout.is_empty());
    assert!(Path::new(&out).exists());
}
