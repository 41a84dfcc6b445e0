use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::geom::Point;
use crate::sim::SimError;

/// Parameters of the economy prototype. Loaded from the `[sim]` section of a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub map_w: u32,
    pub map_h: u32,
    pub max_steps: i64,
    /// Capacity of the entity view the raw interface addresses.
    pub max_entities: usize,
    pub steps_per_second: u32,

    pub starting_minerals: u32,
    pub starting_probes: u32,
    pub base_food_cap: u32,
    /// Minerals per harvesting worker per game-second.
    pub income_per_worker: u32,

    pub probe_cost: u32,
    pub probe_food: u32,
    pub probe_build_seconds: u32,
    pub pylon_cost: u32,
    pub pylon_food: u32,
    pub pylon_build_seconds: u32,

    /// Probe travel speed in game units per game-second.
    pub probe_speed: f64,
    /// Distance from the mineral field within which a probe counts as being at the mineral line.
    pub mining_range: f64,
    /// Pylons may only be placed within this distance of the own Nexus. Zero disables the rule.
    pub build_radius: f64,

    pub nexus_x: f64,
    pub nexus_y: f64,
    pub mineral_x: f64,
    pub mineral_y: f64,

    pub nexus_radius: f64,
    pub pylon_radius: f64,
    pub probe_radius: f64,
    pub mineral_radius: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            map_w: 64,
            map_h: 64,
            max_steps: 4500,
            max_entities: 8,
            steps_per_second: 16,
            starting_minerals: 50,
            starting_probes: 12,
            base_food_cap: 15,
            income_per_worker: 1,
            probe_cost: 50,
            probe_food: 1,
            probe_build_seconds: 12,
            pylon_cost: 100,
            pylon_food: 8,
            pylon_build_seconds: 18,
            probe_speed: 2.8125,
            mining_range: 4.0,
            build_radius: 5.0,
            nexus_x: 16.0,
            nexus_y: 16.0,
            mineral_x: 8.0,
            mineral_y: 8.0,
            nexus_radius: 2.75,
            pylon_radius: 1.0,
            probe_radius: 0.375,
            mineral_radius: 2.0,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |what: &str| Err(SimError::Config(what.to_string()));
        if self.map_w == 0 || self.map_h == 0 {
            return bad("map size must be non-zero");
        }
        if self.max_steps <= 0 {
            return bad("max_steps must be positive");
        }
        if self.steps_per_second == 0 {
            return bad("steps_per_second must be positive");
        }
        if self.max_entities == 0 {
            return bad("max_entities must be positive");
        }
        if self.probe_build_seconds == 0 || self.pylon_build_seconds == 0 {
            return bad("build times must be positive");
        }
        if !(self.probe_speed > 0.0 && self.probe_speed.is_finite()) {
            return bad("probe_speed must be positive");
        }
        if !self.map_rect_contains(self.nexus_pos(), self.nexus_radius)
            || !self.map_rect_contains(self.mineral_pos(), self.mineral_radius)
        {
            return bad("base layout lies outside the map");
        }
        Ok(())
    }

    pub fn nexus_pos(&self) -> Point {
        Point::new(self.nexus_x, self.nexus_y)
    }

    pub fn mineral_pos(&self) -> Point {
        Point::new(self.mineral_x, self.mineral_y)
    }

    pub fn probe_build_steps(&self) -> u32 {
        self.probe_build_seconds * self.steps_per_second
    }

    pub fn pylon_build_steps(&self) -> u32 {
        self.pylon_build_seconds * self.steps_per_second
    }

    /// Distance a probe covers in one simulation step.
    pub fn probe_step_distance(&self) -> f64 {
        self.probe_speed / f64::from(self.steps_per_second)
    }

    pub fn map_rect_contains(&self, p: Point, radius: f64) -> bool {
        p.x - radius >= 0.0
            && p.y - radius >= 0.0
            && p.x + radius <= f64::from(self.map_w)
            && p.y + radius <= f64::from(self.map_h)
    }

    /// Stable digest of the config, recorded in replay headers.
    pub fn hash_hex(&self) -> String {
        let text = toml::to_string(self).expect("config serializes");
        hex::encode(&Sha256::digest(text.as_bytes())[..8])
    }
}
