//! Qualitative controller synthesis for consumption Markov decision processes.
//!
//! A consumption MDP attaches a non-negative resource cost to every action
//! and resets the resource at reload states. The [`solvers`] compute, per
//! state, the least initial load that suffices for safety, positive
//! reachability and almost-sure Büchi objectives, together with
//! finite-counter strategies ([`strategy`]). The [`explicit`] module unfolds
//! the resource level into the state space and answers the same questions
//! on the resulting finite MDP, which makes it an independent check.

pub mod bench;
pub mod cli;
pub mod error;
pub mod explicit;
pub mod ext;
pub mod gen;
pub mod graph;
pub mod model;
pub mod solvers;
pub mod strategy;

pub use error::{Error, Result};
pub use ext::{ExtNat, Level};
pub use model::{example_model, ActionId, Cmdp, CmdpBuilder, History, Instance, StateId};
pub use solvers::{SemanticsMode, ValueVector};
pub use strategy::{CounterSelector, SelectionRule};
