use std::fmt;

use serde::{Deserialize, Serialize};

use crate::geom::Point;
use crate::sim::SimConfig;

/// Engine-assigned entity identifier, unique within one episode and never reused.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Tag(pub u64);

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum UnitKind {
    Nexus,
    Probe,
    Pylon,
    MineralField,
}

impl UnitKind {
    pub const ALL: [UnitKind; 4] = [
        UnitKind::Nexus,
        UnitKind::Probe,
        UnitKind::Pylon,
        UnitKind::MineralField,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn radius(self, cfg: &SimConfig) -> f64 {
        match self {
            UnitKind::Nexus => cfg.nexus_radius,
            UnitKind::Probe => cfg.probe_radius,
            UnitKind::Pylon => cfg.pylon_radius,
            UnitKind::MineralField => cfg.mineral_radius,
        }
    }

    /// Structures and resources block building placement; units do not.
    pub fn blocks_placement(self) -> bool {
        !matches!(self, UnitKind::Probe)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Owner {
    Own,
    Opponent,
    Neutral,
}

/// What an entity is currently doing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Order {
    /// Probe gathering at the mineral line.
    Harvest,
    /// Probe walking back to the mineral line before harvesting.
    ReturnToMinerals,
    /// Probe walking to a site to place a Pylon.
    MoveToBuild { target: Point },
    /// Nexus producing a Probe; `elapsed` counts simulation steps so far.
    Produce { elapsed: u32 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entity {
    pub tag: Tag,
    pub kind: UnitKind,
    pub owner: Owner,
    pub position: Point,
    /// Construction steps done; equal to the kind's build time once complete.
    pub build_elapsed: u32,
    pub build_total: u32,
    pub current_order: Option<Order>,
}

impl Entity {
    pub fn build_progress(&self) -> f64 {
        if self.build_total == 0 {
            1.0
        } else {
            f64::from(self.build_elapsed) / f64::from(self.build_total)
        }
    }

    pub fn is_complete(&self) -> bool {
        self.build_elapsed >= self.build_total
    }

    pub fn is_harvesting(&self) -> bool {
        self.kind == UnitKind::Probe && matches!(self.current_order, Some(Order::Harvest))
    }

    pub fn is_idle(&self) -> bool {
        self.current_order.is_none()
    }
}
