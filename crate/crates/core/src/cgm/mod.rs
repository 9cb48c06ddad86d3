//! Concurrent game models, their file format, SCOS and model builders.

mod builders;
mod model;
mod raw;
mod scos;

pub use builders::{
    build_password_model, build_river_crossing, build_river_crossing_limited, sheep_names, wolf_names, CrossingMode,
    DEFAULT_STATE_LIMIT,
};
pub use model::{AgentMask, Blocks, Cgm};
pub use raw::{validate, RawModel, RawState, RawTransition, Violation};
pub use scos::{scos, Scos};
