//! Model checking for the temporal logic of coalitional goal assignments.
//!
//! The crate covers concurrent game models, the play-based fixpoint checker,
//! formula transformations, a bounded strategy oracle, bisimulation,
//! one-step satisfiability and game-theoretic constructors.

pub mod bisim;
pub mod cgm;
pub mod checker;
pub mod corpus;
pub mod error;
pub mod gametheory;
pub mod onestep;
pub mod random;
pub mod strategies;
pub mod syntax;
pub mod transform;

pub use error::{Error, Result};
