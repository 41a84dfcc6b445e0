//! Deterministic economy prototype: one Nexus, Probes, Pylons, and a mineral field.
//!
//! Time runs in simulation steps (`steps_per_second` per game-second). A [`GameState`]
//! is a plain value; episodes share nothing and may run on any thread.

mod command;
mod config;
mod entity;
mod state;
mod view;

use thiserror::Error;

pub use command::{ResolvedCommand, Verb};
pub use config::SimConfig;
pub use entity::{Entity, Order, Owner, Tag, UnitKind};
pub use state::{reward, Event, GameState, RejectReason, TickOutcome};
pub use view::{entity_view, EntityView, ViewRow};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("episode already terminal")]
    Terminal,
}

pub fn new_game(config: SimConfig, seed: u64) -> Result<GameState, SimError> {
    GameState::new_game(config, seed)
}

pub fn is_terminal(state: &GameState) -> bool {
    state.is_terminal()
}
