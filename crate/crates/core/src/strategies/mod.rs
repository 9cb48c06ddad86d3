//! Finite-memory strategy profiles, witness verification, a bounded
//! witness search and a forcing-based ATL checker.

mod atl;
mod lasso;
mod memory;
mod search;
mod verify;

pub use atl::atl_check;
pub use lasso::{eval_on_lasso, path_labels, play_lasso, Lasso};
pub use memory::{reachable_memories, FiniteStrategyProfile, Memory, MemoryMode, MAX_MEMORY};
pub use search::{find_witness, search_witness, OracleConfig, OracleOutcome, DEFAULT_NODE_LIMIT, DEFAULT_SEARCH_LIMIT};
pub use verify::{goal_labels, verify_witness};

#[cfg(test)]
mod tests;
