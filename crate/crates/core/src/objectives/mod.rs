//! Least-squares objectives, seeded instance families with a controlled
//! optimum location, and reference optima.

mod eigen;
mod instance;
mod quadratic;
mod reference;

pub use eigen::{largest_eigenvalue, smallest_eigenvalue};
pub use instance::{generate_instance, Instance, InstanceSpec, Location, RegionSpec};
pub use quadratic::{Design, QuadraticObjective};
pub use reference::{cached_reference, reference_optimum, REFERENCE_BUDGET};
