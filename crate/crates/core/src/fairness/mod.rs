//! Constraint middleware: problem-spec strings, EPM limiting, effectiveness,
//! camera observation filters and control-precision errors.

mod dsl;
mod effective;
mod filter;
mod limiter;
mod precision;

pub use dsl::{format_spec, parse_spec, InterfaceKind, ParseError, Precision, Preset, ProblemSpec};
pub use effective::classify_effective;
pub use filter::{
    real_camera_filter, virtual_camera_filter, MinimapGrid, ObservedEntity, Observation, MINIMAP_CELLS,
};
pub use limiter::{epm_cap, GateDecision, RateLimiter, EPM_WINDOW_SECONDS};
pub use precision::{inject_precision_error, Aspect, Perturb, PrecisionConfig};
