//! Operator-inequality witnesses for the quantum marginal problem.

pub mod bipartite;
pub mod cli;
pub mod combinatorics;
pub mod diagram;
pub mod error;
pub mod keyl;
pub mod limits;
pub mod operators;
pub mod parallel;
pub mod random;
pub mod scenario;
pub mod witness;

pub use error::{Error, Result};
pub use limits::Limits;
pub use parallel::Execution;
