use serde::{Deserialize, Serialize};

use crate::action::Camera;
use crate::geom::Point;
use crate::sim::{Entity, GameState, Order, Owner, Tag, UnitKind};

/// One entity as the agent sees it. Display-only stubs carry kind/owner/position alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservedEntity {
    pub tag: Option<Tag>,
    pub kind: UnitKind,
    pub owner: Owner,
    pub position: Point,
    pub build_progress: Option<f64>,
    pub current_order: Option<Order>,
    pub display_only: bool,
}

impl ObservedEntity {
    fn full(e: &Entity) -> Self {
        Self {
            tag: Some(e.tag),
            kind: e.kind,
            owner: e.owner,
            position: e.position,
            build_progress: Some(e.build_progress()),
            current_order: e.current_order,
            display_only: false,
        }
    }

    fn stub(e: &Entity) -> Self {
        Self {
            tag: None,
            kind: e.kind,
            owner: e.owner,
            position: e.position,
            build_progress: None,
            current_order: None,
            display_only: true,
        }
    }
}

/// Coarse per-cell unit counts over the whole map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimapGrid {
    pub cells_w: usize,
    pub cells_h: usize,
    pub own: Vec<u32>,
    pub opponent: Vec<u32>,
}

pub const MINIMAP_CELLS: usize = 16;

impl MinimapGrid {
    pub fn build(state: &GameState, cells_w: usize, cells_h: usize) -> Self {
        let mut grid = Self {
            cells_w,
            cells_h,
            own: vec![0; cells_w * cells_h],
            opponent: vec![0; cells_w * cells_h],
        };
        let (mw, mh) = (f64::from(state.config.map_w), f64::from(state.config.map_h));
        for e in &state.entities {
            let cx = ((e.position.x / mw * cells_w as f64) as usize).min(cells_w - 1);
            let cy = ((e.position.y / mh * cells_h as f64) as usize).min(cells_h - 1);
            let i = cy * cells_w + cx;
            match e.owner {
                Owner::Own => grid.own[i] += 1,
                Owner::Opponent => grid.opponent[i] += 1,
                Owner::Neutral => {}
            }
        }
        grid
    }

    pub fn cell_of(&self, state: &GameState, p: Point) -> (usize, usize) {
        let (mw, mh) = (f64::from(state.config.map_w), f64::from(state.config.map_h));
        (
            ((p.x / mw * self.cells_w as f64) as usize).min(self.cells_w - 1),
            ((p.y / mh * self.cells_h as f64) as usize).min(self.cells_h - 1),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub entities: Vec<ObservedEntity>,
    pub minimap: MinimapGrid,
}

impl Observation {
    pub fn find(&self, tag: Tag) -> Option<&ObservedEntity> {
        self.entities.iter().find(|o| o.tag == Some(tag))
    }
}

fn on_camera(state: &GameState, camera: &Camera, e: &Entity) -> bool {
    camera.rect().intersects_disc(e.position, e.kind.radius(&state.config))
}

/// C_1: only off-camera opponents are reduced to display-only stubs.
pub fn virtual_camera_filter(state: &GameState, camera: &Camera) -> Observation {
    let entities = state
        .entities
        .iter()
        .map(|e| {
            if e.owner == Owner::Opponent && !on_camera(state, camera, e) {
                ObservedEntity::stub(e)
            } else {
                ObservedEntity::full(e)
            }
        })
        .collect();
    Observation {
        entities,
        minimap: MinimapGrid::build(state, MINIMAP_CELLS, MINIMAP_CELLS),
    }
}

/// C_0: the screen shows only entities touching the camera; the rest survive as minimap counts.
pub fn real_camera_filter(state: &GameState, camera: &Camera) -> Observation {
    let entities = state
        .entities
        .iter()
        .filter(|e| on_camera(state, camera, e))
        .map(ObservedEntity::full)
        .collect();
    Observation {
        entities,
        minimap: MinimapGrid::build(state, MINIMAP_CELLS, MINIMAP_CELLS),
    }
}
