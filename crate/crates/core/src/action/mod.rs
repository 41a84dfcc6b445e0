//! Raw (index-addressed) and human (selection + screen + camera) action interfaces.
//! Both lower to [`crate::sim::ResolvedCommand`].

mod camera;
mod human;
mod raw;
mod space;

use thiserror::Error;

pub use camera::{
    minimap_to_world, move_camera_click, move_camera_scroll, screen_to_world, screen_world_transform,
    world_to_screen, Camera, Direction, Display, ScrollDir, CAMERA_HEIGHT, CAMERA_WIDTH,
};
pub use human::{resolve_human, CameraMode, HumanAction, HumanConfig, HumanKind, UiState};
pub use space::{action_space_size, ActionSpaceConfig, Interface};
pub use raw::{resolve_raw, resolve_raw_in_view, unit_type_action_mask, RawAction, RawKind};

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum ActionError {
    #[error("index {0} is outside the entity view")]
    InvalidIndex(usize),
    #[error("selected unit cannot perform this action")]
    IncompatibleActor,
    #[error("action requires a target location")]
    MissingTarget,
    #[error("no unit selected")]
    NoSelection,
    #[error("point lies outside the screen")]
    OutOfScreen,
    #[error("no unit under the selection")]
    NothingSelected,
}
