//! Episode runner: applies the problem-spec constraints around the simulator and
//! records every agent decision in a replay log.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::action::{
    resolve_human, resolve_raw, unit_type_action_mask, CameraMode, HumanAction, HumanConfig, HumanKind, RawAction,
    RawKind, UiState,
};
use crate::fairness::{
    classify_effective, inject_precision_error, GateDecision, InterfaceKind, PrecisionConfig, ProblemSpec,
    RateLimiter,
};
use crate::geom::{Point, Rect};
use crate::replay::{ActionRecord, ReplayLog, Side};
use crate::rl::nn::ActionLayout;
use crate::sim::{entity_view, GameState, Order, ResolvedCommand, SimConfig, SimError, UnitKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnvConfig {
    /// Simulation steps per agent decision.
    pub step_mul: u32,
    /// Raw BuildPylon targets: a square grid over the map.
    pub raw_grid: u32,
    /// Human screen-point grid (columns, rows).
    pub screen_grid_w: u32,
    pub screen_grid_h: u32,
    /// Human minimap-click grid per side.
    pub minimap_grid: u32,
    pub jitter_radius: f64,
    pub record_log: bool,
}

impl Default for EnvConfig {
    fn default() -> Self {
        Self {
            step_mul: 8,
            raw_grid: 32,
            screen_grid_w: 16,
            screen_grid_h: 10,
            minimap_grid: 8,
            jitter_radius: 2.0,
            record_log: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum AgentAction {
    Raw(RawAction),
    Human(HumanAction),
}

impl AgentAction {
    pub fn kind_name(&self) -> &'static str {
        match self {
            AgentAction::Raw(a) => match a.kind {
                RawKind::BuildPylon => "BuildPylon",
                RawKind::ProduceProbe => "ProduceProbe",
                RawKind::CollectMineral => "CollectMineral",
            },
            AgentAction::Human(a) => human_kind_name(a.kind),
        }
    }

    pub fn payload(&self) -> String {
        let pt = |p: Option<Point>| p.map_or("-".to_string(), |p| format!("{},{}", p.x, p.y));
        match self {
            AgentAction::Raw(a) => format!("i={} t={}", a.selected_index, pt(a.target_location)),
            AgentAction::Human(a) => format!(
                "s={} r={} m={} d={}",
                pt(a.screen_point),
                a.screen_rect.map_or("-".into(), |r| format!("{},{},{},{}", r.min.x, r.min.y, r.max.x, r.max.y)),
                pt(a.minimap_point),
                a.scroll.map_or("-".into(), |d| format!("{d:?}")),
            ),
        }
    }
}

pub fn human_kind_name(k: HumanKind) -> &'static str {
    match k {
        HumanKind::BuildPylon => "BuildPylon",
        HumanKind::ProduceProbe => "ProduceProbe",
        HumanKind::CollectMineral => "CollectMineral",
        HumanKind::SelectPoint => "SelectPoint",
        HumanKind::SelectRect => "SelectRect",
        HumanKind::MoveCamera => "MoveCamera",
    }
}

/// Head layout of the policy for an interface.
pub fn action_layout(interface: InterfaceKind, cfg: &EnvConfig, sim: &SimConfig) -> ActionLayout {
    match interface {
        InterfaceKind::Raw => ActionLayout {
            kinds: 3,
            heads: vec![sim.max_entities, cfg.raw_grid as usize, cfg.raw_grid as usize],
            head_names: vec!["index".into(), "target_x".into(), "target_y".into()],
            active: vec![vec![0, 1, 2], vec![0], vec![0]],
        },
        InterfaceKind::Human => {
            let (sw, sh, mm) = (cfg.screen_grid_w as usize, cfg.screen_grid_h as usize, cfg.minimap_grid as usize);
            ActionLayout {
                kinds: 6,
                heads: vec![sw, sh, sw, sh, mm, mm],
                head_names: ["point_x", "point_y", "corner_x", "corner_y", "minimap_x", "minimap_y"]
                    .map(String::from)
                    .to_vec(),
                active: vec![vec![0, 1], vec![], vec![], vec![0, 1], vec![0, 1, 2, 3], vec![4, 5]],
            }
        }
    }
}

/// What one decision did.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepOutcome {
    pub reward: f64,
    pub done: bool,
    pub effective: bool,
    pub rejected: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnvCounters {
    pub decisions: u64,
    pub rejected: u64,
    pub effective: u64,
    pub perturbed: u64,
}

pub const ENTITY_FEATURES: usize = 10;
pub const SCALAR_FEATURES: usize = 8;
pub const HUMAN_SCALARS: usize = 3;
/// Side of the coarse structure-occupancy grid.
pub const SPATIAL_GRID: usize = 8;

#[derive(Debug, Clone)]
pub struct Env {
    pub cfg: EnvConfig,
    pub spec: ProblemSpec,
    pub human: HumanConfig,
    pub state: GameState,
    pub ui: UiState,
    pub counters: EnvCounters,
    pub log: ReplayLog,
    limiter: RateLimiter,
    precision: PrecisionConfig,
    noise: ChaCha8Rng,
}

impl Env {
    pub fn new(sim: SimConfig, cfg: EnvConfig, spec: ProblemSpec, seed: u64) -> Result<Self, SimError> {
        if cfg.step_mul == 0 || cfg.raw_grid == 0 || cfg.screen_grid_w == 0 || cfg.screen_grid_h == 0 || cfg.minimap_grid == 0 {
            return Err(SimError::Config("env grids and step_mul must be positive".into()));
        }
        let hash = sim.hash_hex();
        let sps = sim.steps_per_second;
        let state = GameState::new_game(sim, seed)?;
        let ui = UiState::initial(&state);
        let mut noise = ChaCha8Rng::seed_from_u64(seed);
        noise.set_stream(1);
        let precision = PrecisionConfig {
            jitter_radius: cfg.jitter_radius,
            index_count: state.config.max_entities,
            ..PrecisionConfig::new(spec.precision_value())
        };
        Ok(Self {
            limiter: RateLimiter::new(spec.epm_limit, sps),
            log: ReplayLog::new(&spec, seed, &hash, vec![Side::Agent], sps),
            cfg,
            spec,
            human: HumanConfig::default(),
            state,
            ui,
            counters: EnvCounters::default(),
            precision,
            noise,
        })
    }

    pub fn interface(&self) -> InterfaceKind {
        self.spec.interface
    }

    pub fn layout(&self) -> ActionLayout {
        action_layout(self.spec.interface, &self.cfg, &self.state.config)
    }

    pub fn is_done(&self) -> bool {
        self.state.is_terminal()
    }

    pub fn obs_width(interface: InterfaceKind, sim: &SimConfig) -> usize {
        let rows = sim.max_entities;
        match interface {
            InterfaceKind::Raw => rows * ENTITY_FEATURES + SCALAR_FEATURES + SPATIAL_GRID * SPATIAL_GRID,
            InterfaceKind::Human => {
                rows * (ENTITY_FEATURES + 1) + SCALAR_FEATURES + SPATIAL_GRID * SPATIAL_GRID + HUMAN_SCALARS
            }
        }
    }

    /// Flat observation, every feature in [-1, 1].
    pub fn observe(&self) -> Vec<f64> {
        let s = &self.state;
        let cfg = &s.config;
        let human = self.interface() == InterfaceKind::Human;
        let view = entity_view(s);
        let cam = self.ui.camera.rect();
        let hidden_by_camera = |e: &crate::sim::Entity| {
            human
                && self.spec.camera_mode == CameraMode::Real
                && !cam.intersects_disc(e.position, e.kind.radius(cfg))
        };
        let (mw, mh) = (f64::from(cfg.map_w), f64::from(cfg.map_h));
        let mut x = Vec::with_capacity(Self::obs_width(self.interface(), cfg));
        for i in 0..cfg.max_entities {
            let row = view.get(i).filter(|r| !hidden_by_camera(&r.entity));
            let width = ENTITY_FEATURES + usize::from(human);
            match row {
                None => x.extend(std::iter::repeat_n(0.0, width)),
                Some(r) => {
                    let e = &r.entity;
                    let b = |v: bool| if v { 1.0 } else { 0.0 };
                    x.extend_from_slice(&[
                        1.0,
                        b(e.kind == UnitKind::Nexus),
                        b(e.kind == UnitKind::Probe),
                        e.position.x / mw * 2.0 - 1.0,
                        e.position.y / mh * 2.0 - 1.0,
                        e.build_progress(),
                        b(e.is_harvesting()),
                        b(matches!(e.current_order, Some(Order::MoveToBuild { .. }))),
                        b(matches!(e.current_order, Some(Order::Produce { .. }))),
                        b(e.is_idle()),
                    ]);
                    if human {
                        x.push(b(self.ui.selection.contains(&e.tag)));
                    }
                }
            }
        }
        let clip = |v: f64| v.clamp(-1.0, 1.0);
        let pending = s
            .entities
            .iter()
            .filter(|e| (e.kind == UnitKind::Pylon && !e.is_complete()) || matches!(e.current_order, Some(Order::MoveToBuild { .. })))
            .count();
        x.extend_from_slice(&[
            clip(f64::from(s.minerals) / 400.0),
            clip(f64::from(s.food_used) / 40.0),
            clip(f64::from(s.food_cap) / 40.0),
            clip((f64::from(s.food_cap) - f64::from(s.food_used)) / 8.0),
            clip(s.step as f64 / cfg.max_steps as f64),
            if s.minerals >= cfg.probe_cost { 1.0 } else { 0.0 },
            if s.minerals >= cfg.pylon_cost { 1.0 } else { 0.0 },
            clip(pending as f64 / 4.0),
        ]);
        let mut spatial = [0.0; SPATIAL_GRID * SPATIAL_GRID];
        for e in s.entities.iter().filter(|e| e.kind == UnitKind::Pylon && !hidden_by_camera(e)) {
            let gx = ((e.position.x / mw * SPATIAL_GRID as f64) as usize).min(SPATIAL_GRID - 1);
            let gy = ((e.position.y / mh * SPATIAL_GRID as f64) as usize).min(SPATIAL_GRID - 1);
            spatial[gy * SPATIAL_GRID + gx] = 1.0;
        }
        x.extend_from_slice(&spatial);
        if human {
            let c = self.ui.camera.center();
            x.push(c.x / mw * 2.0 - 1.0);
            x.push(c.y / mh * 2.0 - 1.0);
            x.push(clip(self.ui.selection.len() as f64 / 8.0));
        }
        x
    }

    /// Kind mask, and per-kind masks for each argument head (`None` = unmasked).
    /// The raw interface masks index rows by unit type; the human interface is unmasked.
    pub fn masks(&self) -> ActionMasks {
        match self.interface() {
            InterfaceKind::Raw => {
                let view = entity_view(&self.state);
                let m = unit_type_action_mask(&view);
                let rows = self.state.config.max_entities;
                let index: Vec<Vec<bool>> = RawKind::ALL
                    .iter()
                    .map(|k| (0..rows).map(|i| m.get(i).is_some_and(|r| r[k.index()])).collect())
                    .collect();
                let kind = index.iter().map(|v| v.iter().any(|b| *b)).collect();
                ActionMasks {
                    kind: Some(kind),
                    heads: index
                        .into_iter()
                        .map(|ix| vec![Some(ix), None, None])
                        .collect(),
                }
            }
            InterfaceKind::Human => ActionMasks {
                kind: None,
                heads: vec![vec![None; 6]; 6],
            },
        }
    }

    /// Turns head choices into an interface action. `args[h]` is read only for heads
    /// the kind uses.
    pub fn decode(&self, kind: usize, args: &[usize]) -> AgentAction {
        let cfg = &self.state.config;
        match self.interface() {
            InterfaceKind::Raw => {
                let k = RawKind::ALL[kind];
                let g = f64::from(self.cfg.raw_grid);
                let cell = |i: usize, extent: u32| (i as f64 + 0.5) * f64::from(extent) / g;
                let target = k
                    .needs_target()
                    .then(|| Point::new(cell(args[1], cfg.map_w), cell(args[2], cfg.map_h)));
                AgentAction::Raw(RawAction {
                    kind: k,
                    selected_index: args[0],
                    target_location: target,
                })
            }
            InterfaceKind::Human => {
                let k = HumanKind::ALL[kind];
                let d = &self.human.display;
                let (gw, gh) = (f64::from(self.cfg.screen_grid_w), f64::from(self.cfg.screen_grid_h));
                let screen = |ix: usize, iy: usize| {
                    Point::new((ix as f64 + 0.5) * d.screen_w / gw, (iy as f64 + 0.5) * d.screen_h / gh)
                };
                let mg = f64::from(self.cfg.minimap_grid);
                let mut a = HumanAction {
                    kind: k,
                    screen_point: None,
                    screen_rect: None,
                    minimap_point: None,
                    scroll: None,
                };
                match k {
                    HumanKind::BuildPylon | HumanKind::SelectPoint => a.screen_point = Some(screen(args[0], args[1])),
                    HumanKind::SelectRect => {
                        a.screen_rect = Some(Rect::from_corners(screen(args[0], args[1]), screen(args[2], args[3])))
                    }
                    HumanKind::MoveCamera => {
                        a.minimap_point = Some(Point::new(
                            (args[4] as f64 + 0.5) * d.minimap_w / mg,
                            (args[5] as f64 + 0.5) * d.minimap_h / mg,
                        ))
                    }
                    HumanKind::ProduceProbe | HumanKind::CollectMineral => {}
                }
                AgentAction::Human(a)
            }
        }
    }

    /// One agent decision: EPM gate, precision noise, resolution, effectiveness, then
    /// `step_mul` simulation steps.
    pub fn step(&mut self, action: &AgentAction) -> Result<StepOutcome, SimError> {
        if self.is_done() {
            return Err(SimError::Terminal);
        }
        let now = self.state.step;
        let prev_workers = self.state.worker_count();
        self.counters.decisions += 1;
        let rejected = self.limiter.epm_gate(now) == GateDecision::Rejected;
        let mut effective = false;
        let mut command = ResolvedCommand::noop();
        if !rejected {
            let (noisy, aspect) = match action {
                AgentAction::Raw(a) => {
                    let (b, asp) = inject_precision_error(&mut self.noise, a, &self.precision);
                    (AgentAction::Raw(b), asp)
                }
                AgentAction::Human(a) => {
                    let (b, asp) = inject_precision_error(&mut self.noise, a, &self.precision);
                    (AgentAction::Human(b), asp)
                }
            };
            if aspect.is_some() {
                self.counters.perturbed += 1;
            }
            let pre_state = self.state.clone();
            let pre_ui = self.ui.clone();
            match &noisy {
                AgentAction::Raw(a) => {
                    if let Ok(cmd) = resolve_raw(&self.state, a) {
                        command = cmd;
                    }
                }
                AgentAction::Human(a) => {
                    let (ui, r) = resolve_human(&self.state, &self.ui, a, self.spec.camera_mode, &self.human);
                    self.ui = ui;
                    if let Ok(Some(cmd)) = r {
                        command = cmd;
                    }
                }
            }
            self.state.apply_command(&command);
            effective = match noisy {
                AgentAction::Raw(_) => classify_effective(&pre_state, &self.state, None, None),
                AgentAction::Human(_) => classify_effective(&pre_state, &self.state, Some(&pre_ui), Some(&self.ui)),
            };
        } else {
            self.counters.rejected += 1;
        }
        if effective {
            self.counters.effective += 1;
        }
        if self.cfg.record_log {
            self.log.records.push(
                ActionRecord::new(now, Side::Agent, action.kind_name(), effective, rejected).with_payload(action.payload()),
            );
        }
        for _ in 0..self.cfg.step_mul {
            if self.state.is_terminal() {
                break;
            }
            self.state.advance();
        }
        self.log.duration_steps = self.state.step;
        Ok(StepOutcome {
            reward: self.state.worker_count() as f64 - prev_workers as f64,
            done: self.is_done(),
            effective,
            rejected,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionMasks {
    pub kind: Option<Vec<bool>>,
    /// `heads[kind][head]`
    pub heads: Vec<Vec<Option<Vec<bool>>>>,
}
