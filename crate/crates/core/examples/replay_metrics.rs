//! Records a random-play episode, round-trips its log, and computes APM/EPM/NCR.
//! Then checks the bundled replay tables.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rtsfair::fairness::Preset;
use rtsfair::replay::{analyze_log, read_log, verify_tables, write_log, TableSet};
use rtsfair::rl::env::{Env, EnvConfig};
use rtsfair::rl::policy::uniform_action;
use rtsfair::sim::SimConfig;

fn main() {
    let cfg = EnvConfig {
        step_mul: 4,
        ..EnvConfig::default()
    };
    let mut env = Env::new(SimConfig::default(), cfg, Preset::Level3.spec(), 5).expect("valid config");
    let layout = env.layout();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    while !env.is_done() {
        let (k, args) = uniform_action(&layout, &mut rng);
        let action = env.decode(k, &args);
        env.step(&action).expect("episode running");
    }
    let text = write_log(&env.log);
    let log = read_log(text.as_bytes()).expect("own output parses");
    assert_eq!(log, env.log);
    let report = analyze_log(&log, "random human play").expect("non-degenerate");
    let m = report.agent.expect("agent side");
    println!("{} records, {} bytes", log.records.len(), text.len());
    println!("APM {:.1} EPM {:.1} camera ops {} of {} (NCR {:.3})", m.apm, m.epm, m.co, m.ao, m.ncr);

    let checks = verify_tables(&TableSet::embedded().expect("tables parse")).expect("tables verify");
    for c in checks.iter().filter(|c| c.name.contains("mean EPM") || c.name.contains("non-camera")) {
        println!("{c}");
    }
}
