use serde::{Deserialize, Serialize};

use crate::action::ActionError;
use crate::geom::Point;
use crate::sim::{entity_view, EntityView, GameState, ResolvedCommand, UnitKind, Verb};

/// The three raw action kinds of the economy prototype.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RawKind {
    BuildPylon,
    ProduceProbe,
    CollectMineral,
}

impl RawKind {
    pub const ALL: [RawKind; 3] = [RawKind::BuildPylon, RawKind::ProduceProbe, RawKind::CollectMineral];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn verb(self) -> Verb {
        match self {
            RawKind::BuildPylon => Verb::BuildPylon,
            RawKind::ProduceProbe => Verb::ProduceProbe,
            RawKind::CollectMineral => Verb::CollectMineral,
        }
    }

    pub fn needs_target(self) -> bool {
        self == RawKind::BuildPylon
    }

    /// Whether a unit of `kind` can carry out this action.
    pub fn compatible_with(self, kind: UnitKind) -> bool {
        matches!(
            (self, kind),
            (RawKind::ProduceProbe, UnitKind::Nexus)
                | (RawKind::BuildPylon, UnitKind::Probe)
                | (RawKind::CollectMineral, UnitKind::Probe)
        )
    }
}

/// Index-addressed action: the policy names a row of the entity view, never a tag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawAction {
    pub kind: RawKind,
    pub selected_index: usize,
    pub target_location: Option<Point>,
}

impl RawAction {
    pub fn new(kind: RawKind, selected_index: usize) -> Self {
        Self {
            kind,
            selected_index,
            target_location: None,
        }
    }

    pub fn build_pylon(selected_index: usize, target: Point) -> Self {
        Self {
            kind: RawKind::BuildPylon,
            selected_index,
            target_location: Some(target),
        }
    }
}

/// Maps the selected index to a tag through the entity view and validates the pairing.
pub fn resolve_raw(state: &GameState, action: &RawAction) -> Result<ResolvedCommand, ActionError> {
    resolve_raw_in_view(&entity_view(state), action)
}

pub fn resolve_raw_in_view(view: &EntityView, action: &RawAction) -> Result<ResolvedCommand, ActionError> {
    let row = view
        .get(action.selected_index)
        .ok_or(ActionError::InvalidIndex(action.selected_index))?;
    if !action.kind.compatible_with(row.kind) {
        return Err(ActionError::IncompatibleActor);
    }
    let mut cmd = ResolvedCommand::single(action.kind.verb(), row.tag);
    if action.kind.needs_target() {
        cmd.target_location = Some(action.target_location.ok_or(ActionError::MissingTarget)?);
    }
    Ok(cmd)
}

/// Per-index mask over [`RawKind::ALL`]: `mask[i][k]` is true iff kind `k` suits the unit at index `i`.
pub fn unit_type_action_mask(view: &EntityView) -> Vec<[bool; 3]> {
    view.rows
        .iter()
        .map(|row| RawKind::ALL.map(|k| k.compatible_with(row.kind)))
        .collect()
}
