//! V-trace and UPGO targets, and the actor-critic loss with its gradient.

use serde::{Deserialize, Serialize};

use crate::rl::dist::{grad_log_prob, grad_normalized_entropy, log_prob, masked_softmax, normalized_entropy};
use crate::rl::nn::{PolicyNet, Trunk};
use crate::rl::policy::StepRecord;
use crate::rl::{TrainConfig, TrainError};

/// V-trace targets `vs` and policy-gradient advantages.
/// `discounts[t]` is gamma, or 0 after a terminal step.
#[allow(clippy::too_many_arguments)]
pub fn vtrace(
    behavior_logp: &[f64],
    target_logp: &[f64],
    rewards: &[f64],
    discounts: &[f64],
    values: &[f64],
    bootstrap: f64,
    rho_bar: f64,
    c_bar: f64,
) -> (Vec<f64>, Vec<f64>) {
    let n = rewards.len();
    let mut vs = vec![0.0; n];
    let mut adv = vec![0.0; n];
    let mut acc = 0.0; // vs_{t+1} - V_{t+1}
    for t in (0..n).rev() {
        let ratio = (target_logp[t] - behavior_logp[t]).exp();
        let rho = ratio.min(rho_bar);
        let c = ratio.min(c_bar);
        let next_v = if t + 1 < n { values[t + 1] } else { bootstrap };
        let delta = rho * (rewards[t] + discounts[t] * next_v - values[t]);
        acc = delta + discounts[t] * c * acc;
        vs[t] = values[t] + acc;
    }
    for t in 0..n {
        let ratio = (target_logp[t] - behavior_logp[t]).exp();
        let next_vs = if t + 1 < n { vs[t + 1] } else { bootstrap };
        adv[t] = ratio.min(rho_bar) * (rewards[t] + discounts[t] * next_vs - values[t]);
    }
    (vs, adv)
}

/// G_t = r_t + d_t * ((1 - l_t) * next_values[t] + l_t * G_{t+1}), with G_n = next_values[n-1].
pub fn lambda_returns(next_values: &[f64], rewards: &[f64], discounts: &[f64], lambdas: &[f64]) -> Vec<f64> {
    let n = rewards.len();
    let mut g = vec![0.0; n];
    let mut acc = next_values.last().copied().unwrap_or(0.0);
    for t in (0..n).rev() {
        acc = rewards[t] + discounts[t] * ((1.0 - lambdas[t]) * next_values[t] + lambdas[t] * acc);
        g[t] = acc;
    }
    g
}

/// Upgoing returns: follow the observed return while it beats the value estimate,
/// otherwise bootstrap from the value.
pub fn upgo_returns(values: &[f64], rewards: &[f64], discounts: &[f64], bootstrap: f64) -> Vec<f64> {
    let n = rewards.len();
    let next_values: Vec<f64> = (0..n).map(|t| if t + 1 < n { values[t + 1] } else { bootstrap }).collect();
    let raw: Vec<f64> = (0..n)
        .map(|t| if rewards[t] + discounts[t] * next_values[t] >= values[t] { 1.0 } else { 0.0 })
        .collect();
    // Shift left so the decision at t+1 governs whether G_t follows G_{t+1}.
    let mut lambdas: Vec<f64> = raw.into_iter().skip(1).collect();
    lambdas.push(1.0);
    lambda_returns(&next_values, rewards, discounts, &lambdas)
}

/// Stop-gradient quantities for one unroll.
#[derive(Debug, Clone, PartialEq)]
pub struct Targets {
    pub vs: Vec<f64>,
    pub vtrace_adv: Vec<f64>,
    pub upgo_adv: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LossParts {
    pub policy: f64,
    pub value: f64,
    pub entropy: f64,
    pub total: f64,
}

struct StepEval {
    trunk: Trunk,
    kind_probs: Vec<f64>,
    head_probs: Vec<(usize, Vec<f64>)>,
    logp: f64,
}

fn eval_step(net: &PolicyNet, params: &[f64], s: &StepRecord) -> StepEval {
    let trunk = net.trunk(params, &s.obs);
    let kind_probs = masked_softmax(&trunk.kind_logits, s.kind_mask.as_deref());
    let mut logp = log_prob(&kind_probs, s.kind);
    let mut head_probs = Vec::new();
    for &h in &net.layout.active[s.kind] {
        let logits = net.arg_logits(params, &trunk, s.kind, h);
        let p = masked_softmax(&logits, s.head_masks[h].as_deref());
        logp += log_prob(&p, s.args[h]);
        head_probs.push((h, p));
    }
    StepEval {
        trunk,
        kind_probs,
        head_probs,
        logp,
    }
}

fn discounts(steps: &[StepRecord], gamma: f64) -> Vec<f64> {
    steps.iter().map(|s| if s.done { 0.0 } else { gamma }).collect()
}

/// Value of the state after the unroll, or 0 when the unroll ends the episode.
pub fn bootstrap_value(net: &PolicyNet, params: &[f64], steps: &[StepRecord], next_obs: Option<&[f64]>) -> f64 {
    match (steps.last(), next_obs) {
        (Some(last), Some(obs)) if !last.done => net.trunk(params, obs).value,
        _ => 0.0,
    }
}

/// V-trace and UPGO targets under the current parameters.
pub fn compute_targets(
    net: &PolicyNet,
    params: &[f64],
    steps: &[StepRecord],
    next_obs: Option<&[f64]>,
    cfg: &TrainConfig,
) -> Result<Targets, TrainError> {
    if steps.is_empty() {
        return Err(TrainError::DegenerateInput("empty trajectory".into()));
    }
    let evals: Vec<StepEval> = steps.iter().map(|s| eval_step(net, params, s)).collect();
    let values: Vec<f64> = evals.iter().map(|e| e.trunk.value).collect();
    let target_logp: Vec<f64> = evals.iter().map(|e| e.logp).collect();
    let behavior: Vec<f64> = steps.iter().map(|s| s.behavior_logp).collect();
    let rewards: Vec<f64> = steps.iter().map(|s| s.reward).collect();
    let disc = discounts(steps, cfg.gamma);
    let boot = bootstrap_value(net, params, steps, next_obs);
    let (vs, vtrace_adv) = vtrace(&behavior, &target_logp, &rewards, &disc, &values, boot, cfg.rho_bar, cfg.c_bar);
    let upgo = upgo_returns(&values, &rewards, &disc, boot);
    let upgo_adv = (0..steps.len())
        .map(|t| (target_logp[t] - behavior[t]).exp().min(1.0) * (upgo[t] - values[t]))
        .collect();
    Ok(Targets {
        vs,
        vtrace_adv,
        upgo_adv,
    })
}

/// Loss for fixed targets and its gradient with respect to `params`.
///
/// L = mean_t [ -(A_vtrace + w_upgo * A_upgo) log pi + w_v * (vs - V)^2 / 2 - w_e * H ]
/// where H sums the normalized entropies of the kind head and the heads the taken kind uses.
pub fn loss_and_grad(
    net: &PolicyNet,
    params: &[f64],
    steps: &[StepRecord],
    targets: &Targets,
    cfg: &TrainConfig,
    want_grad: bool,
) -> (LossParts, Vec<f64>) {
    let n = steps.len() as f64;
    let mut grad = if want_grad { vec![0.0; params.len()] } else { Vec::new() };
    let mut parts = LossParts::default();
    for (t, s) in steps.iter().enumerate() {
        let e = eval_step(net, params, s);
        let adv = targets.vtrace_adv[t] + cfg.upgo_weight * targets.upgo_adv[t];
        // Mean normalized entropy over the heads this decision used.
        let heads_used = (1 + e.head_probs.len()) as f64;
        let mut ent = normalized_entropy(&e.kind_probs);
        for (_, p) in &e.head_probs {
            ent += normalized_entropy(p);
        }
        ent /= heads_used;
        let verr = e.trunk.value - targets.vs[t];
        parts.policy += -adv * e.logp / n;
        parts.value += 0.5 * verr * verr / n;
        parts.entropy += -ent / n;
        if !want_grad {
            continue;
        }
        let head_grad = |probs: &[f64], a: usize| -> Vec<f64> {
            let gl = grad_log_prob(probs, a);
            let ge = grad_normalized_entropy(probs);
            gl.iter()
                .zip(&ge)
                .map(|(l, h)| (-adv * l - cfg.entropy_weight * h / heads_used) / n)
                .collect()
        };
        let d_kind = head_grad(&e.kind_probs, s.kind);
        let d_args: Vec<(usize, Vec<f64>)> = e.head_probs.iter().map(|(h, p)| (*h, head_grad(p, s.args[*h]))).collect();
        let d_value = cfg.value_weight * verr / n;
        net.backward(params, &mut grad, &e.trunk, s.kind, &d_kind, &d_args, d_value);
    }
    parts.total = parts.policy + cfg.value_weight * parts.value + cfg.entropy_weight * parts.entropy;
    (parts, grad)
}
