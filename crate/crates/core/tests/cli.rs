use rtsfair::cli::{run, RunConfig, EXIT_INPUT, EXIT_OK, EXIT_RUNTIME};

fn cli(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("rtsfair").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn spec_pretty_prints_and_annotates_errors() {
    let (code, out, _) = cli(&["spec", "SC^h_1{E_140, C_0, P_0.90}"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("SC^h_1{E_140, C_0, P_0.90}\n"));
    assert!(out.contains("EPM limit: 140 per minute"));

    let (code, _, err) = cli(&["spec", "SC^r_3{E_180, C_7}"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains('^'), "{err}");

    let (code, out, _) = cli(&["spec", "--preset", "level4"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("SC^h_0{E_120, C_0, P_0.85}"));
    assert_eq!(cli(&["spec", "--preset", "level9"]).0, EXIT_INPUT);
}

#[test]
fn dump_defaults_round_trips() {
    let (code, out, _) = cli(&["--dump-defaults"]);
    assert_eq!(code, EXIT_OK);
    let parsed: RunConfig = toml::from_str(&out).unwrap();
    assert_eq!(parsed, RunConfig::default());
}

#[test]
fn config_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(&path, "[train]\nlearning_rat = 0.1\n").unwrap();
    let (code, _, err) = cli(&["sim", "--config", path.to_str().unwrap(), "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_RUNTIME);
    assert!(err.contains("learning_rat"), "{err}");
}

#[test]
fn sim_writes_log_with_manifest_and_analyze_reads_it() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let (code, out, err) = cli(&["sim", "--seed", "4", "--out-dir", d]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.contains("return: 23"), "{out}");
    let log = dir.path().join("sim_scripted_4.frlog");
    let text = std::fs::read_to_string(&log).unwrap();
    assert!(text.lines().next().unwrap().contains("seed=4\\nout_dir="));

    let csv = dir.path().join("m.csv");
    let (code, out, err) = cli(&["analyze", log.to_str().unwrap(), "--csv", csv.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.contains("agent"));
    assert!(std::fs::read_to_string(csv).unwrap().contains("label,side,apm,epm,co,ao,ncr,nc_epm"));
}

#[test]
fn sim_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert_eq!(cli(&["sim", "--steps", "0", "--out-dir", d]).0, EXIT_RUNTIME);
    assert_eq!(cli(&["sim", "--preset", "level3", "--out-dir", d]).0, EXIT_RUNTIME);
    assert_eq!(cli(&["sim", "--spec", "SC^q_1{}", "--out-dir", d]).0, EXIT_INPUT);
    assert_eq!(cli(&["sim", "--policy", "clever"]).0, EXIT_INPUT);
}

#[test]
fn random_sim_is_throttled_by_the_limiter() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let (code, out, _) = cli(&["sim", "--policy", "random", "--steps", "800", "--out-dir", d]);
    assert_eq!(code, EXIT_OK);
    let line = out.lines().find(|l| l.starts_with("actions:")).unwrap();
    let rejected: usize = line.split_whitespace().nth(5).unwrap().parse().unwrap();
    assert!(rejected > 0, "{line}");
}

#[test]
fn analyze_errors_are_input_errors() {
    assert_eq!(cli(&["analyze"]).0, EXIT_INPUT);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.frlog");
    std::fs::write(&bad, "not a log\n").unwrap();
    let (code, _, err) = cli(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("line 1"), "{err}");
    assert_eq!(cli(&["analyze", "/nonexistent/x.frlog"]).0, EXIT_INPUT);
}

#[test]
fn train_then_report() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let (code, out, err) = cli(&["train", "raw", "--episodes", "8", "--seed", "2", "--out-dir", d]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.contains("first-10 mean"));
    let csv = dir.path().join("train_raw_2.csv");
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("# rtsfair train"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 9);
    let svg = std::fs::read_to_string(dir.path().join("train_raw_2.svg")).unwrap();
    assert!(svg.contains("<desc>") && svg.contains("seed=2"));

    let out_svg = dir.path().join("both.svg");
    let (code, out, _) = cli(&["report", csv.to_str().unwrap(), "--out", out_svg.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("train_raw_2: episodes 8"));
    assert!(out_svg.exists());

    assert_eq!(cli(&["train", "human", "--preset", "level1", "--out-dir", d]).0, EXIT_INPUT);
}

#[test]
fn verify_tables_reports_each_check() {
    let (code, out, _) = cli(&["verify-paper-tables"]);
    assert!(out.lines().filter(|l| l.starts_with("PASS")).count() > 100);
    let failed = out.lines().filter(|l| l.starts_with("FAIL")).count();
    assert_eq!(code, if failed == 0 { EXIT_OK } else { EXIT_RUNTIME });
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/data/tables");
    let (code_dir, out_dir, _) = cli(&["verify-paper-tables", dir]);
    assert_eq!((code_dir, out_dir), (code, out));
    assert_eq!(cli(&["verify-paper-tables", "/nonexistent"]).0, EXIT_INPUT);
}
