//! Central finite-difference check of the analytic loss gradient.

use crate::rl::losses::{loss_and_grad, Targets};
use crate::rl::nn::PolicyNet;
use crate::rl::policy::StepRecord;
use crate::rl::TrainConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct GradCheck {
    pub checked: usize,
    pub max_rel_error: f64,
    pub worst_index: usize,
}

/// Relative error |a - n| / max(|a|, |n|, floor).
pub fn rel_error(analytic: f64, numeric: f64, floor: f64) -> f64 {
    (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(floor)
}

/// Compares `grad` against central differences of the total loss at `indices`,
/// holding `targets` fixed.
#[allow(clippy::too_many_arguments)]
pub fn check_gradient(
    net: &PolicyNet,
    params: &[f64],
    grad: &[f64],
    steps: &[StepRecord],
    targets: &Targets,
    cfg: &TrainConfig,
    indices: &[usize],
    h: f64,
) -> GradCheck {
    let mut p = params.to_vec();
    let mut out = GradCheck {
        checked: 0,
        max_rel_error: 0.0,
        worst_index: 0,
    };
    for &i in indices {
        let orig = p[i];
        p[i] = orig + h;
        let up = loss_and_grad(net, &p, steps, targets, cfg, false).0.total;
        p[i] = orig - h;
        let down = loss_and_grad(net, &p, steps, targets, cfg, false).0.total;
        p[i] = orig;
        let numeric = (up - down) / (2.0 * h);
        let err = rel_error(grad[i], numeric, 1e-6);
        if err > out.max_rel_error {
            out.max_rel_error = err;
            out.worst_index = i;
        }
        out.checked += 1;
    }
    out
}

/// Spreads `count` indices over `[0, n)` so every layer is touched.
pub fn spread_indices(n: usize, count: usize) -> Vec<usize> {
    let count = count.min(n);
    (0..count).map(|k| k * n / count + (k * 7919) % (n / count).max(1)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fairness::Preset;
    use crate::rl::env::{Env, EnvConfig};
    use crate::rl::losses::compute_targets;
    use crate::rl::policy::{rollout, sample_action};
    use crate::rl::train::build_net;
    use crate::sim::SimConfig;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup(preset: Preset) -> (PolicyNet, Vec<f64>, Vec<StepRecord>, Targets, TrainConfig) {
        let sim = SimConfig::default();
        let env_cfg = EnvConfig {
            record_log: false,
            ..EnvConfig::default()
        };
        let cfg = TrainConfig {
            hidden: 8,
            core: 8,
            embed: 4,
            ..TrainConfig::default()
        };
        let spec = preset.spec();
        let net = build_net(spec.interface, &env_cfg, &sim, &cfg);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // Larger init than training so the heads are not near-uniform.
        let params: Vec<f64> = net.init_params(&mut rng).iter().map(|w| w * 3.0).collect();
        let mut env = Env::new(sim, env_cfg, spec, 3).unwrap();
        let traj = rollout(&mut env, |_, obs, masks| sample_action(&net, &params, obs, masks, &mut rng));
        let steps = traj.steps[100..112].to_vec();
        let targets = compute_targets(&net, &params, &steps, Some(&traj.steps[112].obs), &cfg).unwrap();
        (net, params, steps, targets, cfg)
    }

    #[test]
    fn raw_gradient_matches_finite_differences() {
        let (net, params, steps, targets, cfg) = setup(Preset::Level1);
        let (_, grad) = loss_and_grad(&net, &params, &steps, &targets, &cfg, true);
        let idx = spread_indices(params.len(), 150);
        let r = check_gradient(&net, &params, &grad, &steps, &targets, &cfg, &idx, 1e-5);
        assert!(r.checked >= 100);
        assert!(r.max_rel_error < 1e-4, "{r:?}");
    }

    #[test]
    fn human_gradient_matches_finite_differences() {
        let (net, params, steps, targets, cfg) = setup(Preset::Level3);
        let (_, grad) = loss_and_grad(&net, &params, &steps, &targets, &cfg, true);
        let idx = spread_indices(params.len(), 150);
        let r = check_gradient(&net, &params, &grad, &steps, &targets, &cfg, &idx, 1e-5);
        assert!(r.max_rel_error < 1e-4, "{r:?}");
    }

    #[test]
    fn corrupted_gradient_is_detected() {
        let (net, params, steps, targets, cfg) = setup(Preset::Level1);
        let (_, mut grad) = loss_and_grad(&net, &params, &steps, &targets, &cfg, true);
        let idx = spread_indices(params.len(), 150);
        let victim = idx[idx.len() / 2];
        grad[victim] = grad[victim] * 1.01 + 1e-3;
        let r = check_gradient(&net, &params, &grad, &steps, &targets, &cfg, &idx, 1e-5);
        assert!(r.max_rel_error > 1e-3);
        assert_eq!(r.worst_index, victim);
    }

    #[test]
    fn zero_loss_weights_give_zero_gradient() {
        let (net, params, steps, targets, mut cfg) = setup(Preset::Level1);
        let zero = Targets {
            vs: steps.iter().map(|s| net.trunk(&params, &s.obs).value).collect(),
            vtrace_adv: vec![0.0; steps.len()],
            upgo_adv: vec![0.0; steps.len()],
        };
        let _ = targets;
        cfg.entropy_weight = 0.0;
        let (parts, grad) = loss_and_grad(&net, &params, &steps, &zero, &cfg, true);
        assert!(parts.total.abs() < 1e-12);
        assert!(grad.iter().all(|g| g.abs() < 1e-12));
    }
}
