//! Kernel herding on `[0, 1]` with the Bernoulli-polynomial kernel, run as
//! Frank-Wolfe over the marginal polytope.

mod density;
mod kernel;
mod run;
mod state;

pub use density::{Density, FourierDensity};
pub use kernel::{bernoulli_b2, kernel, kernel_checked};
pub use run::{herding_run, herding_run_observed, HerdingView};
pub use state::HerdingState;
