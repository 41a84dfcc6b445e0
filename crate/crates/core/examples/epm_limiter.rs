//! Feeds a 10 actions-per-second stream through an E_180 limiter and a P_0.95 precision injector.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rtsfair::fairness::{inject_precision_error, GateDecision, PrecisionConfig, RateLimiter};
use rtsfair::geom::Point;
use rtsfair::action::RawAction;

fn main() {
    let sps = 16;
    let mut limiter = RateLimiter::new(Some(180), sps);
    println!("cap per 5 s window: {:?}", limiter.cap());
    let mut admitted = Vec::new();
    for i in 0..300 {
        let now = i * 16 / 10;
        if limiter.epm_gate(now) == GateDecision::Admitted {
            admitted.push(now);
        }
    }
    let minutes = 300.0 / 10.0 / 60.0;
    println!(
        "offered 300 actions over 30 s, admitted {} ({:.0} per minute)",
        admitted.len(),
        admitted.len() as f64 / minutes
    );

    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let cfg = PrecisionConfig::new(0.95);
    let action = RawAction::build_pylon(2, Point::new(18.0, 12.0));
    for _ in 0..100 {
        let (out, aspect) = inject_precision_error(&mut rng, &action, &cfg);
        if let Some(a) = aspect {
            println!("perturbed {a:?}: {out:?}");
        }
    }
}
