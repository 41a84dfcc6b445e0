use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geom::Point;
use crate::sim::{Entity, Order, Owner, ResolvedCommand, SimConfig, SimError, Tag, UnitKind, Verb};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RejectReason {
    MissingActor,
    IncompatibleActor,
    MissingTarget,
    InsufficientMinerals,
    FoodCapReached,
    NexusBusy,
    InvalidPlacement,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Event {
    /// Production or construction started; `tag` is the producer (Nexus) or the new structure.
    UnitStarted { tag: Tag, kind: UnitKind },
    UnitCompleted { tag: Tag, kind: UnitKind },
    OrderRejected {
        actor: Option<Tag>,
        verb: Verb,
        reason: RejectReason,
    },
}

/// Everything one `tick` did, including the mineral flows needed to audit conservation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TickOutcome {
    pub events: Vec<Event>,
    pub income: u32,
    pub spend: u32,
}

impl TickOutcome {
    pub fn rejections(&self) -> impl Iterator<Item = RejectReason> + '_ {
        self.events.iter().filter_map(|e| match e {
            Event::OrderRejected { reason, .. } => Some(*reason),
            _ => None,
        })
    }
}

/// Authoritative simulation state.
#[derive(Debug, Clone)]
pub struct GameState {
    pub config: SimConfig,
    pub step: i64,
    pub minerals: u32,
    pub food_used: u32,
    pub food_cap: u32,
    pub entities: Vec<Entity>,
    pub terminal: bool,
    /// Worker-steps of harvesting not yet converted to whole minerals.
    harvest_acc: u32,
    next_tag: u64,
    rng: ChaCha8Rng,
}

impl PartialEq for GameState {
    fn eq(&self, other: &Self) -> bool {
        self.canonical_bytes() == other.canonical_bytes()
    }
}

impl GameState {
    /// Starts an episode: one Nexus, the mineral field, and the starting Probes harvesting.
    pub fn new_game(config: SimConfig, seed: u64) -> Result<Self, SimError> {
        let mut state = Self::empty(config, seed)?;
        let cfg = state.config.clone();
        state.spawn(UnitKind::Nexus, Owner::Own, cfg.nexus_pos(), None);
        state.spawn(UnitKind::MineralField, Owner::Neutral, cfg.mineral_pos(), None);
        for _ in 0..cfg.starting_probes {
            let pos = state.mineral_line_spot();
            state.spawn(UnitKind::Probe, Owner::Own, pos, Some(Order::Harvest));
        }
        state.minerals = cfg.starting_minerals;
        state.food_used = cfg.starting_probes * cfg.probe_food;
        Ok(state)
    }

    /// A state with no entities; used to build synthetic scenarios.
    pub fn empty(config: SimConfig, seed: u64) -> Result<Self, SimError> {
        config.validate()?;
        Ok(Self {
            step: 0,
            minerals: 0,
            food_used: 0,
            food_cap: config.base_food_cap,
            entities: Vec::new(),
            terminal: false,
            harvest_acc: 0,
            next_tag: 1,
            rng: ChaCha8Rng::seed_from_u64(seed),
            config,
        })
    }

    /// Adds a fully built entity; returns its fresh tag.
    pub fn spawn(&mut self, kind: UnitKind, owner: Owner, position: Point, order: Option<Order>) -> Tag {
        let tag = Tag(self.next_tag);
        self.next_tag += 1;
        self.entities.push(Entity {
            tag,
            kind,
            owner,
            position,
            build_elapsed: 0,
            build_total: 0,
            current_order: order,
        });
        tag
    }

    /// Removes an entity (e.g. to model a loss); its tag is never reissued.
    pub fn remove(&mut self, tag: Tag) -> Option<Entity> {
        let idx = self.entities.iter().position(|e| e.tag == tag)?;
        Some(self.entities.remove(idx))
    }

    pub fn entity(&self, tag: Tag) -> Option<&Entity> {
        self.entities.iter().find(|e| e.tag == tag)
    }

    fn entity_mut(&mut self, tag: Tag) -> Option<&mut Entity> {
        self.entities.iter_mut().find(|e| e.tag == tag)
    }

    pub fn own_nexus(&self) -> Option<&Entity> {
        self.entities
            .iter()
            .filter(|e| e.owner == Owner::Own && e.kind == UnitKind::Nexus)
            .min_by_key(|e| e.tag)
    }

    pub fn worker_count(&self) -> usize {
        self.entities
            .iter()
            .filter(|e| e.owner == Owner::Own && e.kind == UnitKind::Probe)
            .count()
    }

    pub fn harvesting_count(&self) -> usize {
        self.entities
            .iter()
            .filter(|e| e.owner == Owner::Own && e.is_harvesting())
            .count()
    }

    pub fn completed_pylons(&self) -> usize {
        self.entities
            .iter()
            .filter(|e| e.owner == Owner::Own && e.kind == UnitKind::Pylon && e.is_complete())
            .count()
    }

    pub fn is_terminal(&self) -> bool {
        self.step >= self.config.max_steps
    }

    fn mineral_line_spot(&mut self) -> Point {
        let cfg = &self.config;
        let m = cfg.mineral_pos();
        let n = cfg.nexus_pos();
        let d = m.dist(n).max(1e-9);
        let reach = cfg.mineral_radius + 1.0;
        let base = Point::new(m.x + (n.x - m.x) / d * reach, m.y + (n.y - m.y) / d * reach);
        let jx: f64 = self.rng.gen_range(-1.0..1.0);
        let jy: f64 = self.rng.gen_range(-1.0..1.0);
        Point::new(base.x + jx, base.y + jy)
    }

    /// Whether a Pylon could be placed at `site` right now.
    pub fn placement_valid(&self, site: Point) -> bool {
        let cfg = &self.config;
        let r = cfg.pylon_radius;
        if !cfg.map_rect_contains(site, r) {
            return false;
        }
        if cfg.build_radius > 0.0 {
            match self.own_nexus() {
                Some(nexus) if nexus.position.dist(site) <= cfg.build_radius => {}
                _ => return false,
            }
        }
        self.entities
            .iter()
            .filter(|e| e.kind.blocks_placement())
            .all(|e| e.position.dist(site) >= e.kind.radius(cfg) + r)
    }

    /// Runs one simulation step: apply `command`, then advance the economy.
    pub fn tick(&mut self, command: &ResolvedCommand) -> Result<TickOutcome, SimError> {
        if self.terminal || self.is_terminal() {
            return Err(SimError::Terminal);
        }
        let mut out = self.apply_command(command);
        let adv = self.advance();
        out.events.extend(adv.events);
        out.income += adv.income;
        out.spend += adv.spend;
        Ok(out)
    }

    /// Applies the command's immediate effect without advancing time. Separated from
    /// [`GameState::advance`] so an action's own effect can be isolated.
    pub fn apply_command(&mut self, command: &ResolvedCommand) -> TickOutcome {
        let mut out = TickOutcome::default();
        let reject = |out: &mut TickOutcome, actor, reason| {
            out.events.push(Event::OrderRejected {
                actor,
                verb: command.verb,
                reason,
            })
        };
        match command.verb {
            Verb::NoOp => {}
            Verb::ProduceProbe => {
                let actor = command.actor();
                let Some(nexus) = actor.and_then(|t| self.entity(t)) else {
                    reject(&mut out, actor, RejectReason::MissingActor);
                    return out;
                };
                if nexus.owner != Owner::Own || nexus.kind != UnitKind::Nexus || !nexus.is_complete() {
                    reject(&mut out, actor, RejectReason::IncompatibleActor);
                } else if nexus.current_order.is_some() {
                    reject(&mut out, actor, RejectReason::NexusBusy);
                } else if self.food_used + self.config.probe_food > self.food_cap {
                    reject(&mut out, actor, RejectReason::FoodCapReached);
                } else if self.minerals < self.config.probe_cost {
                    reject(&mut out, actor, RejectReason::InsufficientMinerals);
                } else {
                    let tag = nexus.tag;
                    self.minerals -= self.config.probe_cost;
                    out.spend += self.config.probe_cost;
                    self.food_used += self.config.probe_food;
                    self.entity_mut(tag).expect("nexus exists").current_order =
                        Some(Order::Produce { elapsed: 0 });
                    out.events.push(Event::UnitStarted {
                        tag,
                        kind: UnitKind::Probe,
                    });
                }
            }
            Verb::BuildPylon => {
                let actor = command.actor();
                let Some(probe) = actor.and_then(|t| self.entity(t)) else {
                    reject(&mut out, actor, RejectReason::MissingActor);
                    return out;
                };
                if probe.owner != Owner::Own || probe.kind != UnitKind::Probe {
                    reject(&mut out, actor, RejectReason::IncompatibleActor);
                    return out;
                }
                let Some(site) = command.target_location else {
                    reject(&mut out, actor, RejectReason::MissingTarget);
                    return out;
                };
                if !self.placement_valid(site) {
                    reject(&mut out, actor, RejectReason::InvalidPlacement);
                } else if self.minerals < self.config.pylon_cost {
                    reject(&mut out, actor, RejectReason::InsufficientMinerals);
                } else {
                    let tag = probe.tag;
                    self.entity_mut(tag).expect("probe exists").current_order =
                        Some(Order::MoveToBuild { target: site });
                }
            }
            Verb::CollectMineral => {
                if command.actors.is_empty() {
                    reject(&mut out, None, RejectReason::MissingActor);
                }
                let mineral = self.config.mineral_pos();
                let range = self.config.mining_range;
                for &tag in &command.actors {
                    match self.entity_mut(tag) {
                        None => reject(&mut out, Some(tag), RejectReason::MissingActor),
                        Some(e) if e.owner != Owner::Own || e.kind != UnitKind::Probe => {
                            reject(&mut out, Some(tag), RejectReason::IncompatibleActor)
                        }
                        Some(e) => {
                            if matches!(e.current_order, Some(Order::Harvest | Order::ReturnToMinerals)) {
                                continue;
                            }
                            e.current_order = if e.position.dist(mineral) <= range {
                                Some(Order::Harvest)
                            } else {
                                Some(Order::ReturnToMinerals)
                            };
                        }
                    }
                }
            }
        }
        out
    }

    /// Advances the economy by one simulation step.
    pub fn advance(&mut self) -> TickOutcome {
        let mut out = TickOutcome::default();
        let step_dist = self.config.probe_step_distance();
        let mineral = self.config.mineral_pos();
        let range = self.config.mining_range;

        // Movement and arrivals.
        let mut arrivals = Vec::new();
        for e in self.entities.iter_mut() {
            match e.current_order {
                Some(Order::MoveToBuild { target }) => {
                    if move_towards(&mut e.position, target, step_dist) {
                        arrivals.push((e.tag, target));
                    }
                }
                Some(Order::ReturnToMinerals) => {
                    let d = e.position.dist(mineral);
                    if d <= range {
                        e.current_order = Some(Order::Harvest);
                    } else {
                        let goal_dist = (d - range).max(0.0);
                        if goal_dist <= step_dist {
                            move_towards(&mut e.position, mineral, goal_dist);
                            e.current_order = Some(Order::Harvest);
                        } else {
                            move_towards(&mut e.position, mineral, step_dist);
                        }
                    }
                }
                _ => {}
            }
        }
        for (tag, site) in arrivals {
            if let Some(e) = self.entity_mut(tag) {
                e.current_order = None;
            }
            let reason = if !self.placement_valid(site) {
                Some(RejectReason::InvalidPlacement)
            } else if self.minerals < self.config.pylon_cost {
                Some(RejectReason::InsufficientMinerals)
            } else {
                None
            };
            match reason {
                Some(reason) => out.events.push(Event::OrderRejected {
                    actor: Some(tag),
                    verb: Verb::BuildPylon,
                    reason,
                }),
                None => {
                    self.minerals -= self.config.pylon_cost;
                    out.spend += self.config.pylon_cost;
                    let pylon = self.spawn(UnitKind::Pylon, Owner::Own, site, None);
                    let total = self.config.pylon_build_steps();
                    let p = self.entity_mut(pylon).expect("just spawned");
                    p.build_total = total;
                    out.events.push(Event::UnitStarted {
                        tag: pylon,
                        kind: UnitKind::Pylon,
                    });
                }
            }
        }

        // Income.
        let harvesting = self.harvesting_count() as u32;
        self.harvest_acc += harvesting * self.config.income_per_worker;
        let sps = self.config.steps_per_second;
        let income = self.harvest_acc / sps;
        self.harvest_acc %= sps;
        self.minerals += income;
        out.income += income;

        // Production.
        let build_steps = self.config.probe_build_steps();
        let mut finished = Vec::new();
        for e in self.entities.iter_mut() {
            if let Some(Order::Produce { elapsed }) = &mut e.current_order {
                *elapsed += 1;
                if *elapsed >= build_steps {
                    e.current_order = None;
                    finished.push(e.tag);
                }
            }
        }
        for _ in finished {
            let pos = self.mineral_line_spot();
            let tag = self.spawn(UnitKind::Probe, Owner::Own, pos, Some(Order::Harvest));
            out.events.push(Event::UnitCompleted {
                tag,
                kind: UnitKind::Probe,
            });
        }

        // Construction.
        let mut completed = Vec::new();
        for e in self.entities.iter_mut() {
            if e.build_elapsed < e.build_total {
                e.build_elapsed += 1;
                if e.build_elapsed == e.build_total {
                    completed.push((e.tag, e.kind, e.owner));
                }
            }
        }
        for (tag, kind, owner) in completed {
            if kind == UnitKind::Pylon && owner == Owner::Own {
                self.food_cap += self.config.pylon_food;
            }
            out.events.push(Event::UnitCompleted { tag, kind });
        }

        self.step += 1;
        self.terminal = self.is_terminal();
        out
    }

    /// Canonical little-endian encoding of the full state, including the RNG position.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut b = Vec::with_capacity(64 + self.entities.len() * 48);
        b.extend_from_slice(self.config.hash_hex().as_bytes());
        b.extend_from_slice(&self.step.to_le_bytes());
        b.extend_from_slice(&self.minerals.to_le_bytes());
        b.extend_from_slice(&self.food_used.to_le_bytes());
        b.extend_from_slice(&self.food_cap.to_le_bytes());
        b.extend_from_slice(&self.harvest_acc.to_le_bytes());
        b.extend_from_slice(&self.next_tag.to_le_bytes());
        b.push(u8::from(self.terminal));
        b.extend_from_slice(&self.rng.get_seed());
        b.extend_from_slice(&self.rng.get_stream().to_le_bytes());
        b.extend_from_slice(&self.rng.get_word_pos().to_le_bytes());
        b.extend_from_slice(&(self.entities.len() as u64).to_le_bytes());
        for e in &self.entities {
            b.extend_from_slice(&e.tag.0.to_le_bytes());
            b.push(e.kind as u8);
            b.push(e.owner as u8);
            b.extend_from_slice(&e.position.x.to_bits().to_le_bytes());
            b.extend_from_slice(&e.position.y.to_bits().to_le_bytes());
            b.extend_from_slice(&e.build_elapsed.to_le_bytes());
            b.extend_from_slice(&e.build_total.to_le_bytes());
            match e.current_order {
                None => b.push(0),
                Some(Order::Harvest) => b.push(1),
                Some(Order::ReturnToMinerals) => b.push(2),
                Some(Order::MoveToBuild { target }) => {
                    b.push(3);
                    b.extend_from_slice(&target.x.to_bits().to_le_bytes());
                    b.extend_from_slice(&target.y.to_bits().to_le_bytes());
                }
                Some(Order::Produce { elapsed }) => {
                    b.push(4);
                    b.extend_from_slice(&elapsed.to_le_bytes());
                }
            }
        }
        b
    }
}

/// Moves `pos` towards `goal` by at most `dist`; returns true on arrival.
fn move_towards(pos: &mut Point, goal: Point, dist: f64) -> bool {
    let d = pos.dist(goal);
    if d <= dist {
        *pos = goal;
        true
    } else {
        pos.x += (goal.x - pos.x) / d * dist;
        pos.y += (goal.y - pos.y) / d * dist;
        false
    }
}

/// Worker-count difference between successive states; no scaling.
pub fn reward(prev: &GameState, next: &GameState) -> f64 {
    next.worker_count() as f64 - prev.worker_count() as f64
}
