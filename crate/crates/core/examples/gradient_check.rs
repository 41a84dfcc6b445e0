//! Checks the hand-written backward pass against central differences.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rtsfair::fairness::Preset;
use rtsfair::rl::env::{Env, EnvConfig};
use rtsfair::rl::gradcheck::{check_gradient, spread_indices};
use rtsfair::rl::losses::{compute_targets, loss_and_grad};
use rtsfair::rl::policy::{rollout, sample_action};
use rtsfair::rl::{build_net, TrainConfig};
use rtsfair::sim::SimConfig;

fn main() {
    let sim = SimConfig::default();
    let env_cfg = EnvConfig::default();
    let cfg = TrainConfig::default();
    for preset in [Preset::Level1, Preset::Level3] {
        let spec = preset.spec();
        let net = build_net(spec.interface, &env_cfg, &sim, &cfg);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let params = net.init_params(&mut rng);
        let mut env = Env::new(sim.clone(), env_cfg.clone(), spec, 1).expect("valid config");
        let traj = rollout(&mut env, |_, obs, masks| sample_action(&net, &params, obs, masks, &mut rng));
        let steps = &traj.steps[64..96];
        let targets = compute_targets(&net, &params, steps, Some(&traj.steps[96].obs), &cfg).expect("finite");
        let (parts, grad) = loss_and_grad(&net, &params, steps, &targets, &cfg, true);
        let idx = spread_indices(params.len(), 300);
        let r = check_gradient(&net, &params, &grad, steps, &targets, &cfg, &idx, 1e-5);
        println!(
            "{spec}: {} params, loss {:.4}, max relative error {:.2e} over {} checked (worst index {})",
            params.len(),
            parts.total,
            r.max_rel_error,
            r.checked,
            r.worst_index
        );
    }
}
