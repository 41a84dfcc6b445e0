//! Plays one episode with the greedy scripted policy and prints the economy every 30 game-seconds.

use rtsfair::fairness::Preset;
use rtsfair::rl::env::{Env, EnvConfig};
use rtsfair::rl::policy::greedy_action;
use rtsfair::sim::SimConfig;

fn main() {
    let sim = SimConfig::default();
    let sps = i64::from(sim.steps_per_second);
    let mut env = Env::new(sim, EnvConfig::default(), Preset::Level1.spec(), 0).expect("valid config");
    let mut total = 0.0;
    println!("{:>6} {:>8} {:>8} {:>9} {:>7}", "time", "minerals", "workers", "food", "pylons");
    while !env.is_done() {
        let action = greedy_action(&env);
        total += env.step(&action).expect("episode running").reward;
        let s = &env.state;
        if s.step % (30 * sps) < env.cfg.step_mul as i64 {
            println!(
                "{:>5}s {:>8} {:>8} {:>4}/{:<4} {:>7}",
                s.step / sps,
                s.minerals,
                s.worker_count(),
                s.food_used,
                s.food_cap,
                s.completed_pylons()
            );
        }
    }
    println!("return {total}, {} effective of {} decisions", env.counters.effective, env.counters.decisions);
}
