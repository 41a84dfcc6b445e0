//! Trains on the raw interface for a few batches and prints the learning curve.
//! Pass an episode count as the first argument (default 32).

use rtsfair::fairness::Preset;
use rtsfair::report::summarize;
use rtsfair::rl::{random_oracle, run_experiment, Experiment};

fn main() {
    let episodes: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(32);
    let exp = Experiment::new(Preset::Level1.spec());
    let oracle = random_oracle(&exp, 16).expect("valid experiment");
    println!("random policy mean {:.2}", oracle.iter().sum::<f64>() / oracle.len() as f64);
    let curve = run_experiment(&exp, episodes).expect("training runs");
    for p in curve.points.iter().step_by(4) {
        println!(
            "episode {:>3} return {:>4} effective {:>3} loss {:+.3}",
            p.episode, p.episode_return, p.counters.effective, p.loss.total
        );
    }
    let s = summarize(&curve.returns());
    println!("first-10 {:.2} final-10 {:.2}", s.first10, s.final10);
}
