//! Drives the command-line front end in-process: sim, analyze, then the table check.

fn run(args: &[&str]) -> i32 {
    let argv = std::iter::once("rtsfair").chain(args.iter().copied());
    rtsfair::cli::run(argv, &mut std::io::stdout(), &mut std::io::stderr())
}

fn main() {
    let dir = std::env::temp_dir().join("rtsfair-cli-example");
    let d = dir.to_str().expect("utf-8 temp dir");
    assert_eq!(run(&["sim", "--out-dir", d]), 0);
    let log = dir.join("sim_scripted_0.frlog");
    assert_eq!(run(&["analyze", log.to_str().expect("utf-8")]), 0);
    let code = run(&["verify-paper-tables"]);
    println!("verify-paper-tables exit code {code}");
}
