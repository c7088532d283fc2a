//! Frank-Wolfe toolkit: vanilla, away-step and decomposition-invariant
//! solvers with open-loop, line-search, short-step and constant step rules;
//! lp-ball and simplex oracles; kernel herding on the Bernoulli-kernel RKHS;
//! and convergence-rate analysis.
//!
//! The runnable programs under `examples/` show each capability:
//!
//! ```text
//! cargo run --release --example step_rules
//! cargo run --release --example wolfe_face
//! cargo run --release --example away_and_pairwise
//! cargo run --release --example kernel_herding
//! cargo run --release --example local_rates
//! cargo run --release --example gap_recurrence
//! cargo run --release --example sparsity_bound
//! cargo run --release --example figure_batch
//! ```

pub mod analysis;
pub mod base;
pub mod error;
pub mod harness;
pub mod herding;
pub mod objectives;
pub mod regions;
pub mod solvers;

pub use base::{Point, Problem, RunTrace, StepRule};
pub use error::{Error, Result};
