//! Model generators: the helicopter/rover grid world, a street network
//! with stochastic consumption, and random models for property tests.
//!
//! Every generator returns an [`Instance`](crate::model::Instance) whose
//! model passes [`validate`](crate::model::validate), and is deterministic
//! in its seed.

mod grid;
mod random;
mod streets;

pub use grid::{gen_grid, Cell, GridSpec, RoverControl};
pub use random::{gen_random, RandomSpec};
pub use streets::{add_stochastic_edge, gen_streets, StreetSpec};

/// Upper bound on the number of states any generator will produce.
pub const MAX_GENERATED_STATES: usize = 5_000_000;
