use serde::{Deserialize, Serialize};

use crate::geom::Point;
use crate::sim::Tag;

/// Engine-level verb both action interfaces lower to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Verb {
    ProduceProbe,
    BuildPylon,
    CollectMineral,
    NoOp,
}

impl Verb {
    pub fn name(self) -> &'static str {
        match self {
            Verb::ProduceProbe => "produce_probe",
            Verb::BuildPylon => "build_pylon",
            Verb::CollectMineral => "collect_mineral",
            Verb::NoOp => "noop",
        }
    }
}

/// A validated, tag-addressed command ready for the simulation.
///
/// `actors` is non-empty for every verb except `NoOp`. Single-actor verbs
/// (`ProduceProbe`, `BuildPylon`) carry exactly one tag; `CollectMineral` may fan
/// out over a multi-selection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolvedCommand {
    pub verb: Verb,
    pub actors: Vec<Tag>,
    pub target_location: Option<Point>,
    pub target_tag: Option<Tag>,
}

impl ResolvedCommand {
    pub fn noop() -> Self {
        Self {
            verb: Verb::NoOp,
            actors: Vec::new(),
            target_location: None,
            target_tag: None,
        }
    }

    pub fn single(verb: Verb, actor: Tag) -> Self {
        Self {
            verb,
            actors: vec![actor],
            target_location: None,
            target_tag: None,
        }
    }

    pub fn with_target(mut self, target: Point) -> Self {
        self.target_location = Some(target);
        self
    }

    /// First (primary) actor.
    pub fn actor(&self) -> Option<Tag> {
        self.actors.first().copied()
    }
}

impl Default for ResolvedCommand {
    fn default() -> Self {
        Self::noop()
    }
}
