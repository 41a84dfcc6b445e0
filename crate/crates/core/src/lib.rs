//! Mini-RTS economy environment with raw and human action interfaces, fairness
//! constraints (EPM limits, camera models, control precision), replay APM/EPM
//! analytics, and a compact actor-critic harness for comparing interfaces.

pub mod action;
pub mod cli;
pub mod fairness;
pub mod geom;
pub mod replay;
pub mod report;
pub mod rl;
pub mod sim;
