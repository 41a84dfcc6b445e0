//! Actor-critic harness: observation encoding, a small hand-differentiated policy
//! network, V-trace/UPGO losses, Adam, and the raw-versus-human training experiment.

pub mod adam;
pub mod dist;
pub mod env;
pub mod gradcheck;
pub mod losses;
pub mod nn;
pub mod policy;
mod train;

use thiserror::Error;

use crate::sim::SimError;

pub use train::{
    build_net, random_oracle, run_experiment, train_policy, CurvePoint, Experiment, LearningCurve, TrainConfig, TrainedPolicy,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrainError {
    #[error("invalid train config: {0}")]
    Config(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("non-finite gradient {value} at parameter {index}")]
    NonFiniteGradient { index: usize, value: f64 },
    #[error(transparent)]
    Sim(#[from] SimError),
}
