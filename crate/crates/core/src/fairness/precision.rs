use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::action::{HumanAction, HumanKind, RawAction, RawKind};
use crate::geom::{Point, Rect};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Aspect {
    Kind,
    Selection,
    Target,
}

impl Aspect {
    pub const ALL: [Aspect; 3] = [Aspect::Kind, Aspect::Selection, Aspect::Target];
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecisionConfig {
    /// Probability an action passes unchanged.
    pub p: f64,
    /// Weights over kind, selection, target; sum to 1.
    pub weights: [f64; 3],
    /// Target jitter radius in game units.
    pub jitter_radius: f64,
    /// Raw index range a selection error may land in.
    pub index_count: usize,
    /// Screen pixels per game unit, for human geometry.
    pub screen_scale: f64,
    /// Minimap pixels per game unit.
    pub minimap_scale: f64,
    /// Selection-point shift for human clicks, in game units.
    pub selection_shift: f64,
}

impl PrecisionConfig {
    pub fn new(p: f64) -> Self {
        Self {
            p,
            weights: [1.0 / 3.0; 3],
            jitter_radius: 2.0,
            index_count: 8,
            screen_scale: 8.0,
            minimap_scale: 1.0,
            selection_shift: 1.0,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.p > 0.0 && self.p <= 1.0) {
            return Err(format!("precision p = {} outside (0, 1]", self.p));
        }
        let sum: f64 = self.weights.iter().sum();
        if self.weights.iter().any(|w| *w < 0.0) || (sum - 1.0).abs() > 1e-9 {
            return Err("aspect weights must be non-negative and sum to 1".into());
        }
        Ok(())
    }
}

/// Actions whose control can be perturbed along the three aspects.
pub trait Perturb: Sized + Clone {
    /// Applies `aspect` if it is meaningful for this action; returns whether it did.
    fn perturb<R: Rng + ?Sized>(&mut self, aspect: Aspect, rng: &mut R, cfg: &PrecisionConfig) -> bool;
}

/// With probability 1 - p, perturbs one aspect drawn by weight, falling through to the
/// following aspects (cyclically) when it does not apply. Returns the applied aspect.
pub fn inject_precision_error<A: Perturb, R: Rng + ?Sized>(
    rng: &mut R,
    action: &A,
    cfg: &PrecisionConfig,
) -> (A, Option<Aspect>) {
    if cfg.p >= 1.0 || rng.gen::<f64>() < cfg.p {
        return (action.clone(), None);
    }
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut first = 2;
    for (i, w) in cfg.weights.iter().enumerate() {
        acc += w;
        if u < acc {
            first = i;
            break;
        }
    }
    let mut out = action.clone();
    for k in 0..3 {
        let aspect = Aspect::ALL[(first + k) % 3];
        if cfg.weights[aspect as usize] == 0.0 {
            continue;
        }
        if out.perturb(aspect, rng, cfg) {
            return (out, Some(aspect));
        }
    }
    (action.clone(), None)
}

fn jitter<R: Rng + ?Sized>(rng: &mut R, p: Point, radius: f64) -> Point {
    let r = radius * rng.gen::<f64>().sqrt();
    let theta = rng.gen_range(0.0..std::f64::consts::TAU);
    Point::new(p.x + r * theta.cos(), p.y + r * theta.sin())
}

fn neighbor_shift<R: Rng + ?Sized>(rng: &mut R, dist: f64) -> (f64, f64) {
    const DIRS: [(f64, f64); 8] = [
        (1.0, 0.0),
        (-1.0, 0.0),
        (0.0, 1.0),
        (0.0, -1.0),
        (1.0, 1.0),
        (1.0, -1.0),
        (-1.0, 1.0),
        (-1.0, -1.0),
    ];
    let (dx, dy) = DIRS[rng.gen_range(0..8)];
    (dx * dist, dy * dist)
}

impl Perturb for RawAction {
    fn perturb<R: Rng + ?Sized>(&mut self, aspect: Aspect, rng: &mut R, cfg: &PrecisionConfig) -> bool {
        match aspect {
            Aspect::Kind => {
                let others: Vec<RawKind> = RawKind::ALL.into_iter().filter(|k| *k != self.kind).collect();
                self.kind = others[rng.gen_range(0..others.len())];
                true
            }
            Aspect::Selection => {
                let n = cfg.index_count;
                let i = self.selected_index;
                let options: Vec<usize> = [i.checked_sub(1), Some(i + 1)]
                    .into_iter()
                    .flatten()
                    .filter(|j| *j < n)
                    .collect();
                if options.is_empty() {
                    return false;
                }
                self.selected_index = options[rng.gen_range(0..options.len())];
                true
            }
            Aspect::Target => match self.target_location {
                Some(t) => {
                    self.target_location = Some(jitter(rng, t, cfg.jitter_radius));
                    true
                }
                None => false,
            },
        }
    }
}

impl Perturb for HumanAction {
    fn perturb<R: Rng + ?Sized>(&mut self, aspect: Aspect, rng: &mut R, cfg: &PrecisionConfig) -> bool {
        match aspect {
            Aspect::Kind => {
                let others: Vec<HumanKind> = HumanKind::ALL.into_iter().filter(|k| *k != self.kind).collect();
                self.kind = others[rng.gen_range(0..others.len())];
                true
            }
            Aspect::Selection => {
                let (dx, dy) = neighbor_shift(rng, cfg.selection_shift * cfg.screen_scale);
                match self.kind {
                    HumanKind::SelectPoint => match self.screen_point.as_mut() {
                        Some(p) => {
                            *p = Point::new(p.x + dx, p.y + dy);
                            true
                        }
                        None => false,
                    },
                    HumanKind::SelectRect => match self.screen_rect.as_mut() {
                        Some(r) => {
                            *r = Rect {
                                min: Point::new(r.min.x + dx, r.min.y + dy),
                                max: Point::new(r.max.x + dx, r.max.y + dy),
                            };
                            true
                        }
                        None => false,
                    },
                    _ => false,
                }
            }
            Aspect::Target => match self.kind {
                HumanKind::BuildPylon => match self.screen_point {
                    Some(p) => {
                        self.screen_point = Some(jitter(rng, p, cfg.jitter_radius * cfg.screen_scale));
                        true
                    }
                    None => false,
                },
                HumanKind::MoveCamera => match self.minimap_point {
                    Some(p) => {
                        self.minimap_point = Some(jitter(rng, p, cfg.jitter_radius * cfg.minimap_scale));
                        true
                    }
                    None => false,
                },
                _ => false,
            },
        }
    }
}
