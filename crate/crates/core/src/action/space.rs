use serde::{Deserialize, Serialize};

use crate::action::{HumanKind, RawKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Interface {
    Raw,
    Human,
    Macro,
}

/// Dimensions that determine the flat cardinality of each action space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionSpaceConfig {
    pub max_entities: u64,
    pub placement_grid_w: u64,
    pub placement_grid_h: u64,
    pub screen_w: u64,
    pub screen_h: u64,
    pub minimap_w: u64,
    pub minimap_h: u64,
    pub macros: u64,
}

impl ActionSpaceConfig {
    /// Economy prototype: 8 view rows, BuildPylon on a 64x64 grid.
    pub fn prototype() -> Self {
        Self {
            max_entities: 8,
            placement_grid_w: 64,
            placement_grid_h: 64,
            screen_w: 256,
            screen_h: 160,
            minimap_w: 64,
            minimap_h: 64,
            macros: 0,
        }
    }

    /// Full-game scale: 64-row entity list on a 256x256 map.
    pub fn full_game() -> Self {
        Self {
            max_entities: 64,
            placement_grid_w: 256,
            placement_grid_h: 256,
            ..Self::prototype()
        }
    }

    pub fn raw_targets(&self, kind: RawKind) -> u64 {
        if kind.needs_target() {
            self.placement_grid_w * self.placement_grid_h
        } else {
            1
        }
    }

    /// Number of distinct argument tuples a human action of `kind` can carry.
    /// Rectangles are counted as unordered pairs of pixel rows and columns (degenerate
    /// rectangles included). Scrolling is not counted: every scroll lands on a camera
    /// position a minimap click also reaches.
    pub fn human_args(&self, kind: HumanKind) -> u64 {
        let screen = self.screen_w * self.screen_h;
        match kind {
            HumanKind::BuildPylon | HumanKind::SelectPoint => screen,
            HumanKind::ProduceProbe | HumanKind::CollectMineral => 1,
            HumanKind::SelectRect => {
                self.screen_w * (self.screen_w + 1) / 2 * (self.screen_h * (self.screen_h + 1) / 2)
            }
            HumanKind::MoveCamera => self.minimap_w * self.minimap_h,
        }
    }
}

/// Flat cardinality of the composite action space.
pub fn action_space_size(interface: Interface, cfg: &ActionSpaceConfig) -> u64 {
    match interface {
        Interface::Raw => RawKind::ALL
            .iter()
            .map(|k| cfg.max_entities * cfg.raw_targets(*k))
            .sum(),
        Interface::Human => HumanKind::ALL.iter().map(|k| cfg.human_args(*k)).sum(),
        Interface::Macro => cfg.macros,
    }
}
