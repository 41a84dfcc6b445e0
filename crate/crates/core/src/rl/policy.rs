//! Action selection: the learned policy, the uniform random oracle, and a scripted greedy baseline.

use rand::Rng;

use crate::action::{RawAction, RawKind};
use crate::geom::Point;
use crate::rl::dist::{log_prob, masked_softmax, sample};
use crate::rl::env::{ActionMasks, AgentAction, Env};
use crate::rl::nn::{ActionLayout, PolicyNet};
use crate::sim::{entity_view, GameState, Order, UnitKind};

/// One decision as the learner needs it.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub obs: Vec<f64>,
    pub kind_mask: Option<Vec<bool>>,
    /// Masks of every argument head for the chosen kind.
    pub head_masks: Vec<Option<Vec<bool>>>,
    pub kind: usize,
    /// One entry per head; only heads active for `kind` are meaningful.
    pub args: Vec<usize>,
    pub behavior_logp: f64,
    pub reward: f64,
    pub done: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub steps: Vec<StepRecord>,
}

impl Trajectory {
    pub fn episode_return(&self) -> f64 {
        self.steps.iter().map(|s| s.reward).sum()
    }
}

/// Samples kind, then the kind's argument heads; returns (kind, args, log-prob).
pub fn sample_action<R: Rng + ?Sized>(
    net: &PolicyNet,
    params: &[f64],
    obs: &[f64],
    masks: &ActionMasks,
    rng: &mut R,
) -> (usize, Vec<usize>, f64) {
    let trunk = net.trunk(params, obs);
    let pk = masked_softmax(&trunk.kind_logits, masks.kind.as_deref());
    let kind = sample(rng, &pk);
    let mut logp = log_prob(&pk, kind);
    let mut args = vec![0; net.layout.heads.len()];
    for &h in &net.layout.active[kind] {
        let logits = net.arg_logits(params, &trunk, kind, h);
        let p = masked_softmax(&logits, masks.heads[kind][h].as_deref());
        args[h] = sample(rng, &p);
        logp += log_prob(&p, args[h]);
    }
    (kind, args, logp)
}

/// Uniform over every kind and argument, ignoring masks.
pub fn uniform_action<R: Rng + ?Sized>(layout: &ActionLayout, rng: &mut R) -> (usize, Vec<usize>) {
    let kind = rng.gen_range(0..layout.kinds);
    let args = layout.heads.iter().map(|&n| rng.gen_range(0..n)).collect();
    (kind, args)
}

/// Runs one episode with `choose` picking (kind, args, behavior log-prob) for each decision.
pub fn rollout<F>(env: &mut Env, mut choose: F) -> Trajectory
where
    F: FnMut(&Env, &[f64], &ActionMasks) -> (usize, Vec<usize>, f64),
{
    let mut traj = Trajectory::default();
    while !env.is_done() {
        let obs = env.observe();
        let masks = env.masks();
        let (kind, args, logp) = choose(env, &obs, &masks);
        let action = env.decode(kind, &args);
        let out = env.step(&action).expect("episode not done");
        traj.steps.push(StepRecord {
            obs,
            kind_mask: masks.kind.clone(),
            head_masks: masks.heads[kind].clone(),
            kind,
            args,
            behavior_logp: logp,
            reward: out.reward,
            done: out.done,
        });
    }
    traj
}

/// Valid Pylon site closest to the Nexus among cell centers of a `grid` x `grid` map grid.
pub fn nearest_valid_site(state: &GameState, grid: u32) -> Option<Point> {
    let cfg = &state.config;
    let nexus = cfg.nexus_pos();
    let (cw, ch) = (f64::from(cfg.map_w) / f64::from(grid), f64::from(cfg.map_h) / f64::from(grid));
    (0..grid * grid)
        .map(|c| Point::new((f64::from(c % grid) + 0.5) * cw, (f64::from(c / grid) + 0.5) * ch))
        .filter(|p| state.placement_valid(*p))
        .min_by(|a, b| a.dist(nexus).total_cmp(&b.dist(nexus)))
}

/// Scripted baseline: keep the Nexus producing, add a Pylon before supply runs out,
/// and send idle Probes back to the minerals.
pub fn greedy_raw(state: &GameState, grid: u32) -> RawAction {
    let view = entity_view(state);
    let cfg = &state.config;
    let nexus_idle = state.own_nexus().is_some_and(|n| n.current_order.is_none());
    let pending = state
        .entities
        .iter()
        .filter(|e| {
            matches!(e.current_order, Some(Order::MoveToBuild { .. })) || (e.kind == UnitKind::Pylon && !e.is_complete())
        })
        .count() as i64;
    let supply_left = i64::from(state.food_cap) + i64::from(cfg.pylon_food) * pending - i64::from(state.food_used);
    if nexus_idle && state.food_used + cfg.probe_food <= state.food_cap && state.minerals >= cfg.probe_cost {
        return RawAction::new(RawKind::ProduceProbe, 0);
    }
    if supply_left < 3 && state.minerals >= cfg.pylon_cost {
        if let Some(site) = nearest_valid_site(state, grid) {
            let builder = view
                .rows
                .iter()
                .rposition(|r| r.kind == UnitKind::Probe)
                .unwrap_or(1);
            return RawAction::build_pylon(builder, site);
        }
    }
    if let Some(i) = view.rows.iter().position(|r| r.kind == UnitKind::Probe && r.entity.is_idle()) {
        return RawAction::new(RawKind::CollectMineral, i);
    }
    // Harmless filler: rejected while the Nexus is busy or supply is capped.
    RawAction::new(RawKind::ProduceProbe, 0)
}

pub fn greedy_action(env: &Env) -> AgentAction {
    AgentAction::Raw(greedy_raw(&env.state, env.cfg.raw_grid))
}
