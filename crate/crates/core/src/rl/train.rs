use std::fmt::Write as _;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::fairness::{InterfaceKind, ProblemSpec};
use crate::rl::adam::{adam_step, AdamState};
use crate::rl::env::{action_layout, Env, EnvConfig, EnvCounters};
use crate::rl::losses::{compute_targets, loss_and_grad, LossParts};
use crate::rl::nn::{NetShape, PolicyNet};
use crate::rl::policy::{rollout, sample_action, uniform_action, Trajectory};
use crate::rl::TrainError;
use crate::sim::SimConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    pub weight_decay: f64,
    pub entropy_weight: f64,
    pub value_weight: f64,
    pub upgo_weight: f64,
    pub gamma: f64,
    pub rho_bar: f64,
    pub c_bar: f64,
    /// Episodes collected in parallel with one parameter snapshot.
    pub workers: usize,
    /// Decisions per trajectory segment in one gradient step.
    pub unroll: usize,
    /// Trajectories averaged into one gradient step.
    pub minibatch: usize,
    /// Passes over each batch of episodes.
    pub epochs: usize,
    pub hidden: usize,
    pub core: usize,
    pub embed: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            lr: 1e-3,
            beta1: 0.0,
            beta2: 0.99,
            eps: 1e-5,
            weight_decay: 1e-5,
            entropy_weight: 1.0,
            value_weight: 0.1,
            upgo_weight: 1.0,
            gamma: 0.999,
            rho_bar: 1.0,
            c_bar: 1.0,
            workers: 8,
            unroll: 128,
            minibatch: 1,
            epochs: 16,
            hidden: 64,
            core: 64,
            embed: 16,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), TrainError> {
        let positive = [
            ("lr", self.lr),
            ("eps", self.eps),
            ("gamma", self.gamma),
            ("rho_bar", self.rho_bar),
            ("c_bar", self.c_bar),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(TrainError::Config(format!("{name} must be positive")));
            }
        }
        if !(0.0..1.0).contains(&self.beta1) || !(0.0..1.0).contains(&self.beta2) {
            return Err(TrainError::Config("adam betas must lie in [0, 1)".into()));
        }
        if self.gamma > 1.0 {
            return Err(TrainError::Config("gamma must not exceed 1".into()));
        }
        if self.workers == 0 || self.unroll == 0 || self.minibatch == 0 || self.epochs == 0 || self.hidden == 0 || self.core == 0 {
            return Err(TrainError::Config("workers, unroll, epochs and layer sizes must be positive".into()));
        }
        if self.weight_decay < 0.0 || self.entropy_weight < 0.0 || self.value_weight < 0.0 || self.upgo_weight < 0.0 {
            return Err(TrainError::Config("loss weights and weight decay must be non-negative".into()));
        }
        Ok(())
    }
}

type LossAndGrad = (LossParts, Vec<f64>);

/// One row per episode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub episode: usize,
    pub episode_return: f64,
    pub loss: LossParts,
    pub counters: EnvCounters,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct LearningCurve {
    pub points: Vec<CurvePoint>,
}

impl LearningCurve {
    pub fn returns(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.episode_return).collect()
    }

    /// Mean return over episodes [from, to).
    pub fn mean_return(&self, from: usize, to: usize) -> f64 {
        let r = &self.points[from..to];
        r.iter().map(|p| p.episode_return).sum::<f64>() / r.len() as f64
    }

    pub fn to_csv(&self, manifest: &str) -> String {
        let mut out = String::new();
        for line in manifest.lines() {
            writeln!(out, "# {line}").expect("write to string");
        }
        out.push_str("episode,return,policy_loss,value_loss,entropy_loss,total_loss,decisions,effective,rejected\n");
        for p in &self.points {
            writeln!(
                out,
                "{},{},{:.9},{:.9},{:.9},{:.9},{},{},{}",
                p.episode,
                p.episode_return,
                p.loss.policy,
                p.loss.value,
                p.loss.entropy,
                p.loss.total,
                p.counters.decisions,
                p.counters.effective,
                p.counters.rejected
            )
            .expect("write to string");
        }
        out
    }
}

pub fn build_net(interface: InterfaceKind, env_cfg: &EnvConfig, sim: &SimConfig, cfg: &TrainConfig) -> PolicyNet {
    PolicyNet::new(
        action_layout(interface, env_cfg, sim),
        NetShape {
            input: Env::obs_width(interface, sim),
            hidden: cfg.hidden,
            core: cfg.core,
            embed: cfg.embed,
        },
    )
}

const STREAMS_PER_EPISODE: u64 = 4;
const STREAM_INIT: u64 = 0;
const STREAM_ENV: u64 = 1;
const STREAM_POLICY: u64 = 2;
const STREAM_ORACLE: u64 = 3;

/// Independent generator per (episode, purpose) under one run seed.
fn episode_rng(seed: u64, episode: usize, purpose: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(episode as u64 * STREAMS_PER_EPISODE + purpose);
    rng
}

fn env_seed(seed: u64, episode: usize) -> u64 {
    episode_rng(seed, episode, STREAM_ENV).next_u64()
}

/// Everything `run_experiment` needs besides the episode count.
#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub sim: SimConfig,
    pub env: EnvConfig,
    pub train: TrainConfig,
    pub spec: ProblemSpec,
}

impl Experiment {
    pub fn new(spec: ProblemSpec) -> Self {
        Self {
            sim: SimConfig::default(),
            env: EnvConfig {
                record_log: false,
                ..EnvConfig::default()
            },
            train: TrainConfig::default(),
            spec,
        }
    }
}

/// Trains a fresh policy on the spec's interface for `episodes` episodes. Batches of
/// `workers` episodes are collected in parallel under one parameter snapshot, then the
/// learner takes one Adam step per unroll. Deterministic for a fixed seed regardless of
/// thread count.
pub fn run_experiment(exp: &Experiment, episodes: usize) -> Result<LearningCurve, TrainError> {
    train_policy(exp, episodes).map(|t| t.curve)
}

/// Final parameters alongside the curve.
#[derive(Debug, Clone)]
pub struct TrainedPolicy {
    pub net: PolicyNet,
    pub params: Vec<f64>,
    pub curve: LearningCurve,
}

pub fn train_policy(exp: &Experiment, episodes: usize) -> Result<TrainedPolicy, TrainError> {
    let cfg = &exp.train;
    cfg.validate()?;
    exp.sim.validate()?;
    let interface = exp.spec.interface;
    let net = build_net(interface, &exp.env, &exp.sim, cfg);
    let mut params = net.init_params(&mut episode_rng(cfg.seed, 0, STREAM_INIT));
    let mut adam = AdamState::new(params.len());
    let mut curve = LearningCurve::default();

    let mut next = 0;
    while next < episodes {
        let batch: Vec<usize> = (next..episodes.min(next + cfg.workers)).collect();
        let snapshot = &params;
        let collected: Vec<Result<(Trajectory, EnvCounters), TrainError>> = batch
            .par_iter()
            .map(|&e| {
                let mut env = Env::new(exp.sim.clone(), exp.env.clone(), exp.spec, env_seed(cfg.seed, e))?;
                let mut rng = episode_rng(cfg.seed, e, STREAM_POLICY);
                let traj = rollout(&mut env, |_, obs, masks| sample_action(&net, snapshot, obs, masks, &mut rng));
                Ok((traj, env.counters))
            })
            .collect();

        let trajs: Vec<(Trajectory, EnvCounters)> = collected.into_iter().collect::<Result<_, _>>()?;
        let mut batch_loss = vec![(LossParts::default(), 0usize); batch.len()];
        for _ in 0..cfg.epochs {
            for (ci, chunk) in trajs.chunks(cfg.minibatch).enumerate() {
                let longest = chunk.iter().map(|(t, _)| t.steps.len()).max().unwrap_or(0);
                let mut start = 0;
                while start < longest {
                    // One Adam step per unroll index, averaging the gradient over the
                    // minibatch trajectories that reach it.
                    let snapshot = &params;
                    let per_traj: Vec<Option<Result<LossAndGrad, TrainError>>> = chunk
                        .par_iter()
                        .map(|(traj, _)| {
                            let steps = &traj.steps;
                            if start >= steps.len() {
                                return None;
                            }
                            let end = (start + cfg.unroll).min(steps.len());
                            let next_obs = steps.get(end).map(|s| s.obs.as_slice());
                            Some(compute_targets(&net, snapshot, &steps[start..end], next_obs, cfg).map(|targets| {
                                loss_and_grad(&net, snapshot, &steps[start..end], &targets, cfg, true)
                            }))
                        })
                        .collect();
                    let mut grad = vec![0.0; params.len()];
                    let mut used = 0usize;
                    for (k, item) in per_traj.into_iter().enumerate() {
                        let Some(item) = item else { continue };
                        let (parts, g) = item?;
                        for (a, b) in grad.iter_mut().zip(&g) {
                            *a += b;
                        }
                        used += 1;
                        let acc = &mut batch_loss[ci * cfg.minibatch + k];
                        acc.0.policy += parts.policy;
                        acc.0.value += parts.value;
                        acc.0.entropy += parts.entropy;
                        acc.0.total += parts.total;
                        acc.1 += 1;
                    }
                    let scale = 1.0 / used as f64;
                    grad.iter_mut().for_each(|g| *g *= scale);
                    adam_step(&mut params, &grad, &mut adam, cfg)?;
                    start += cfg.unroll;
                }
            }
        }
        for (bi, (traj, counters)) in trajs.iter().enumerate() {
            let (mut l, k) = batch_loss[bi];
            if k > 0 {
                let k = k as f64;
                l = LossParts {
                    policy: l.policy / k,
                    value: l.value / k,
                    entropy: l.entropy / k,
                    total: l.total / k,
                };
            }
            curve.points.push(CurvePoint {
                episode: batch[bi],
                episode_return: traj.episode_return(),
                loss: l,
                counters: *counters,
            });
        }
        next += batch.len();
    }
    Ok(TrainedPolicy { net, params, curve })
}

/// Per-episode returns of the uniform random policy over the interface's full action space
/// (no unit-type mask).
pub fn random_oracle(exp: &Experiment, episodes: usize) -> Result<Vec<f64>, TrainError> {
    exp.sim.validate()?;
    let layout = action_layout(exp.spec.interface, &exp.env, &exp.sim);
    (0..episodes)
        .into_par_iter()
        .map(|e| {
            let mut env = Env::new(exp.sim.clone(), exp.env.clone(), exp.spec, env_seed(exp.train.seed, e))?;
            let mut rng = episode_rng(exp.train.seed, e, STREAM_ORACLE);
            let traj = rollout(&mut env, |_, _, _| {
                let (k, a) = uniform_action(&layout, &mut rng);
                (k, a, 0.0)
            });
            Ok(traj.episode_return())
        })
        .collect()
}
