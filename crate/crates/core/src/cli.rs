//! Command-line front end. Exit codes: 0 success, 1 runtime or config failure,
//! 2 input or parse failure.

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::fairness::{format_spec, parse_spec, InterfaceKind, Preset, ProblemSpec};
use crate::replay::{aggregate, analyze_log, read_log, verify_table_dir, write_log, Check, MetricsReport, Side, TableSet};
use crate::replay::verify_tables;
use crate::report::{curves_svg, metrics_csv, read_curve_csv, summarize};
use crate::rl::env::{Env, EnvConfig};
use crate::rl::policy::{greedy_action, uniform_action};
use crate::rl::{run_experiment, Experiment, TrainConfig};
use crate::sim::SimConfig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

pub const SEED_ENV: &str = "RTSFAIR_SEED";

/// Contents of a `--config` file; every section and field is optional.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub sim: SimConfig,
    pub env: EnvConfig,
    pub train: TrainConfig,
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = fs::read_to_string(path).map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn hash_hex(&self) -> String {
        hex::encode(Sha256::digest(self.to_toml().as_bytes()))
    }
}

/// Everything needed to reproduce an output; written into every artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub spec: String,
    pub config_path: String,
    pub config_hash: String,
    pub seed: u64,
    pub out_dir: String,
    pub params: Vec<(String, String)>,
}

impl fmt::Display for RunManifest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rtsfair {} {}", self.command, env!("CARGO_PKG_VERSION"))?;
        writeln!(f, "spec={}", self.spec)?;
        writeln!(f, "config={}", self.config_path)?;
        writeln!(f, "config_sha256={}", self.config_hash)?;
        writeln!(f, "seed={}", self.seed)?;
        write!(f, "out_dir={}", self.out_dir)?;
        for (k, v) in &self.params {
            write!(f, "\n{k}={v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn runtime(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_RUNTIME,
            message: message.into(),
        }
    }

    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

#[derive(Debug, Parser)]
#[command(name = "rtsfair", version, about = "Fairness-constrained RTS economy experiments and replay analytics")]
pub struct Cli {
    /// Print the default configuration as TOML and exit.
    #[arg(long, global = true)]
    pub dump_defaults: bool,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and pretty-print a problem spec.
    Spec(SpecArgs),
    /// Run one episode and write its action log.
    Sim(SimArgs),
    /// Train a policy on one interface and write its learning curve.
    Train(TrainArgs),
    /// Compute APM/EPM/camera metrics of action logs.
    Analyze(AnalyzeArgs),
    /// Check the transcribed replay tables against the published means.
    VerifyPaperTables(VerifyArgs),
    /// Plot learning-curve CSVs as one SVG.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct SpecArgs {
    /// Spec text, e.g. "SC^r_3{E_180, C_1, P_1.00}".
    #[arg(conflicts_with = "preset", required_unless_present = "preset")]
    pub text: Option<String>,
    #[arg(long)]
    pub preset: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, env = SEED_ENV)]
    pub seed: Option<u64>,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Problem spec text; overrides --preset.
    #[arg(long)]
    pub spec: Option<String>,
    #[arg(long)]
    pub preset: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimPolicy {
    Scripted,
    Random,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value = "scripted")]
    pub policy: SimPolicy,
    /// Episode length in simulation steps (overrides the config).
    #[arg(long)]
    pub steps: Option<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IfaceArg {
    Raw,
    Human,
}

impl IfaceArg {
    fn kind(self) -> InterfaceKind {
        match self {
            IfaceArg::Raw => InterfaceKind::Raw,
            IfaceArg::Human => InterfaceKind::Human,
        }
    }

    fn name(self) -> &'static str {
        match self {
            IfaceArg::Raw => "raw",
            IfaceArg::Human => "human",
        }
    }
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(value_enum)]
    pub interface: IfaceArg,
    #[command(flatten)]
    pub common: Common,
    /// Defaults to 100 for raw and 300 for human.
    #[arg(long)]
    pub episodes: Option<usize>,
    /// Parallel episode workers (overrides the config).
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(required = true)]
    pub logs: Vec<PathBuf>,
    /// Also write the metrics as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Directory holding protoss.csv, terran.csv and zerg.csv; defaults to the built-in copies.
    pub dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(required = true)]
    pub curves: Vec<PathBuf>,
    #[arg(long, default_value = "curves.svg")]
    pub out: PathBuf,
    #[arg(long, default_value = "Learning curves")]
    pub title: String,
}

/// Parses `args` (including the program name), runs, and returns the exit code.
/// Normal output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn std::io::Write, err: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            if code == EXIT_OK {
                let _ = write!(out, "{e}");
            } else {
                let _ = write!(err, "{e}");
            }
            return code;
        }
    };
    if cli.dump_defaults {
        let _ = write!(out, "{}", RunConfig::default().to_toml());
        return EXIT_OK;
    }
    let Some(command) = cli.command else {
        let _ = writeln!(err, "no subcommand given; see --help");
        return EXIT_INPUT;
    };
    let result = match command {
        Command::Spec(a) => cmd_spec(&a, out),
        Command::Sim(a) => cmd_sim(&a, out),
        Command::Train(a) => cmd_train(&a, out),
        Command::Analyze(a) => cmd_analyze(&a, out),
        Command::VerifyPaperTables(a) => cmd_verify(&a, out),
        Command::Report(a) => cmd_report(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::runtime(format!("{}: {e}", path.display()))
}

fn resolve_spec(text: Option<&str>, preset: Option<&str>, fallback: ProblemSpec) -> Result<ProblemSpec, CliError> {
    if let Some(t) = text {
        return parse_spec(t).map_err(|e| CliError::input(e.annotate(t)));
    }
    match preset {
        Some(name) => Preset::from_name(name)
            .map(|p| p.spec())
            .ok_or_else(|| CliError::input(format!("unknown preset `{name}` (level1..level4)"))),
        None => Ok(fallback),
    }
}

fn cmd_spec(a: &SpecArgs, out: &mut dyn std::io::Write) -> Result<i32, CliError> {
    let spec = resolve_spec(a.text.as_deref(), a.preset.as_deref(), Preset::Level1.spec())?;
    let w = |out: &mut dyn std::io::Write, s: String| writeln!(out, "{s}").map_err(|e| CliError::runtime(e.to_string()));
    w(out, format_spec(&spec))?;
    w(out, format!("  interface: {:?}", spec.interface))?;
    w(out, format!("  human data level: {}", spec.human_data_level))?;
    w(
        out,
        format!(
            "  EPM limit: {}",
            spec.epm_limit.map_or("none".to_string(), |x| format!("{x} per minute"))
        ),
    )?;
    w(out, format!("  camera: {:?}", spec.camera_mode))?;
    w(out, format!("  precision: {:.2}", spec.precision_value()))?;
    Ok(EXIT_OK)
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn seed_of(c: &Common, cfg: &RunConfig) -> u64 {
    c.seed.unwrap_or(cfg.train.seed)
}

fn cmd_sim(a: &SimArgs, out: &mut dyn std::io::Write) -> Result<i32, CliError> {
    let c = &a.common;
    let mut cfg = RunConfig::load(c.config.as_deref())?;
    if let Some(steps) = a.steps {
        cfg.sim.max_steps = steps;
    }
    cfg.sim.validate().map_err(|e| CliError::runtime(e.to_string()))?;
    let spec = resolve_spec(c.spec.as_deref(), c.preset.as_deref(), Preset::Level1.spec())?;
    let seed = seed_of(c, &cfg);
    if a.policy == SimPolicy::Scripted && spec.interface != InterfaceKind::Raw {
        return Err(CliError::runtime("the scripted policy drives the raw interface only"));
    }
    let mut env_cfg = cfg.env.clone();
    env_cfg.record_log = true;
    if a.policy == SimPolicy::Random {
        // Random play issues an action every simulation step.
        env_cfg.step_mul = 1;
    }
    let policy = match a.policy {
        SimPolicy::Scripted => "scripted",
        SimPolicy::Random => "random",
    };
    let manifest = RunManifest {
        command: "sim".into(),
        spec: spec.to_string(),
        config_path: c.config.as_ref().map_or("<defaults>".into(), |p| p.display().to_string()),
        config_hash: cfg.hash_hex(),
        seed,
        out_dir: c.out_dir.display().to_string(),
        params: vec![
            ("policy".into(), policy.into()),
            ("max_steps".into(), cfg.sim.max_steps.to_string()),
            ("step_mul".into(), env_cfg.step_mul.to_string()),
        ],
    };
    let mut env = Env::new(cfg.sim.clone(), env_cfg, spec, seed).map_err(|e| CliError::runtime(e.to_string()))?;
    env.log.header.manifest = manifest.to_string();
    let layout = env.layout();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(7);
    let mut episode_return = 0.0;
    while !env.is_done() {
        let action = match a.policy {
            SimPolicy::Scripted => greedy_action(&env),
            SimPolicy::Random => {
                let (k, args) = uniform_action(&layout, &mut rng);
                env.decode(k, &args)
            }
        };
        episode_return += env.step(&action).map_err(|e| CliError::runtime(e.to_string()))?.reward;
    }
    fs::create_dir_all(&c.out_dir).map_err(|e| io_err(&c.out_dir, e))?;
    let path = c.out_dir.join(format!("sim_{policy}_{seed}.frlog"));
    let text = write_log(&env.log);
    fs::write(&path, &text).map_err(|e| io_err(&path, e))?;
    let w = |out: &mut dyn std::io::Write, s: String| writeln!(out, "{s}").map_err(|e| CliError::runtime(e.to_string()));
    w(out, format!("log: {}", path.display()))?;
    w(out, format!("sha256: {}", sha256_hex(text.as_bytes())))?;
    w(out, format!("steps: {}", env.state.step))?;
    w(out, format!("final workers: {}", env.state.worker_count()))?;
    w(out, format!("return: {episode_return}"))?;
    w(
        out,
        format!(
            "actions: {} effective: {} rejected: {} perturbed: {}",
            env.counters.decisions, env.counters.effective, env.counters.rejected, env.counters.perturbed
        ),
    )?;
    Ok(EXIT_OK)
}

fn cmd_train(a: &TrainArgs, out: &mut dyn std::io::Write) -> Result<i32, CliError> {
    let c = &a.common;
    let cfg = RunConfig::load(c.config.as_deref())?;
    let fallback = ProblemSpec {
        interface: a.interface.kind(),
        ..Preset::Level1.spec()
    };
    let spec = resolve_spec(c.spec.as_deref(), c.preset.as_deref(), fallback)?;
    if spec.interface != a.interface.kind() {
        return Err(CliError::input(format!(
            "spec {spec} does not use the {} interface",
            a.interface.name()
        )));
    }
    let episodes = a.episodes.unwrap_or(match a.interface {
        IfaceArg::Raw => 100,
        IfaceArg::Human => 300,
    });
    let mut exp = Experiment::new(spec);
    exp.sim = cfg.sim.clone();
    exp.env = EnvConfig {
        record_log: false,
        ..cfg.env.clone()
    };
    exp.train = cfg.train.clone();
    exp.train.seed = seed_of(c, &cfg);
    if let Some(w) = a.workers {
        exp.train.workers = w;
    }
    let manifest = RunManifest {
        command: "train".into(),
        spec: spec.to_string(),
        config_path: c.config.as_ref().map_or("<defaults>".into(), |p| p.display().to_string()),
        config_hash: cfg.hash_hex(),
        seed: exp.train.seed,
        out_dir: c.out_dir.display().to_string(),
        params: vec![
            ("interface".into(), a.interface.name().into()),
            ("episodes".into(), episodes.to_string()),
            ("workers".into(), exp.train.workers.to_string()),
        ],
    };
    let curve = run_experiment(&exp, episodes).map_err(|e| CliError::runtime(e.to_string()))?;
    fs::create_dir_all(&c.out_dir).map_err(|e| io_err(&c.out_dir, e))?;
    let stem = format!("train_{}_{}", a.interface.name(), exp.train.seed);
    let csv_path = c.out_dir.join(format!("{stem}.csv"));
    let svg_path = c.out_dir.join(format!("{stem}.svg"));
    let manifest_text = manifest.to_string();
    let csv = curve.to_csv(&manifest_text);
    fs::write(&csv_path, &csv).map_err(|e| io_err(&csv_path, e))?;
    let returns = curve.returns();
    let svg = curves_svg(
        &format!("{} interface, {spec}", a.interface.name()),
        &[(a.interface.name().to_string(), returns.clone())],
        &manifest_text,
    );
    fs::write(&svg_path, svg).map_err(|e| io_err(&svg_path, e))?;
    let w = |out: &mut dyn std::io::Write, s: String| writeln!(out, "{s}").map_err(|e| CliError::runtime(e.to_string()));
    w(out, format!("curve: {}", csv_path.display()))?;
    w(out, format!("plot: {}", svg_path.display()))?;
    w(out, format!("sha256: {}", sha256_hex(csv.as_bytes())))?;
    if !returns.is_empty() {
        let s = summarize(&returns);
        w(
            out,
            format!(
                "episodes: {} first-10 mean: {:.2} final-10 mean: {:.2} overall mean: {:.2}",
                s.episodes, s.first10, s.final10, s.mean
            ),
        )?;
    }
    Ok(EXIT_OK)
}

fn cmd_analyze(a: &AnalyzeArgs, out: &mut dyn std::io::Write) -> Result<i32, CliError> {
    let mut reports: Vec<MetricsReport> = Vec::new();
    for path in &a.logs {
        let bytes = fs::read(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        let log = read_log(&bytes).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        let report =
            analyze_log(&log, &path.display().to_string()).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        reports.push(report);
    }
    let w = |out: &mut dyn std::io::Write, s: String| writeln!(out, "{s}").map_err(|e| CliError::runtime(e.to_string()));
    w(out, format!("{:<40} {:<6} {:>9} {:>9} {:>6} {:>6} {:>7} {:>9}", "log", "side", "apm", "epm", "co", "ao", "ncr", "nc_epm"))?;
    for r in &reports {
        for side in Side::ALL {
            if let Some(m) = r.side(side) {
                w(
                    out,
                    format!(
                        "{:<40} {:<6} {:>9.2} {:>9.2} {:>6} {:>6} {:>7.4} {:>9.2}",
                        r.label,
                        side.name(),
                        m.apm,
                        m.epm,
                        m.co,
                        m.ao,
                        m.ncr,
                        m.nc_epm
                    ),
                )?;
            }
        }
    }
    if reports.len() > 1 {
        let opts: Vec<Option<MetricsReport>> = reports.iter().cloned().map(Some).collect();
        if let Ok(agg) = aggregate(&opts) {
            for side in Side::ALL {
                if let Some(m) = agg.mean.side(side) {
                    w(
                        out,
                        format!(
                            "{:<40} {:<6} {:>9.2} {:>9.2} {:>6.1} {:>6.1} {:>7.4} {:>9.2}",
                            "mean",
                            side.name(),
                            m.apm,
                            m.epm,
                            m.co,
                            m.ao,
                            m.ncr,
                            m.nc_epm
                        ),
                    )?;
                }
            }
        }
    }
    if let Some(path) = &a.csv {
        let manifest = format!("rtsfair analyze {}", env!("CARGO_PKG_VERSION"));
        fs::write(path, metrics_csv(&reports, &manifest)).map_err(|e| io_err(path, e))?;
    }
    Ok(EXIT_OK)
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn std::io::Write) -> Result<i32, CliError> {
    let checks: Vec<Check> = match &a.dir {
        Some(dir) => verify_table_dir(dir),
        None => TableSet::embedded().and_then(|t| verify_tables(&t)),
    }
    .map_err(|e| CliError::input(e.to_string()))?;
    let mut failed = 0;
    for c in &checks {
        writeln!(out, "{c}").map_err(|e| CliError::runtime(e.to_string()))?;
        if c.passed() == Some(false) {
            failed += 1;
        }
    }
    let total = checks.iter().filter(|c| c.passed().is_some()).count();
    writeln!(out, "{} of {total} checks passed", total - failed).map_err(|e| CliError::runtime(e.to_string()))?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_RUNTIME })
}

fn cmd_report(a: &ReportArgs, out: &mut dyn std::io::Write) -> Result<i32, CliError> {
    let mut series = Vec::new();
    for path in &a.curves {
        let text = fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        let returns = read_curve_csv(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        let name = path.file_stem().map_or("curve".into(), |s| s.to_string_lossy().into_owned());
        let s = summarize(&returns);
        writeln!(
            out,
            "{name}: episodes {} first-10 {:.2} final-10 {:.2} mean {:.2}",
            s.episodes, s.first10, s.final10, s.mean
        )
        .map_err(|e| CliError::runtime(e.to_string()))?;
        series.push((name, returns));
    }
    let sources: Vec<String> = a.curves.iter().map(|p| p.display().to_string()).collect();
    let manifest = format!("rtsfair report {}\nsources={}", env!("CARGO_PKG_VERSION"), sources.join(","));
    fs::write(&a.out, curves_svg(&a.title, &series, &manifest)).map_err(|e| io_err(&a.out, e))?;
    writeln!(out, "plot: {}", a.out.display()).map_err(|e| CliError::runtime(e.to_string()))?;
    Ok(EXIT_OK)
}
