//! Feasible regions: lp balls, the probability simplex, and the sparsity
//! lower bound on the simplex.

mod jaggi;
mod lp_ball;
mod simplex;

pub use jaggi::jaggi_lower_bound;
pub use lp_ball::{lp_ball_lmo, lp_norm, LpBall};
pub use simplex::{project_onto_simplex, simplex_away_lmo, simplex_lmo, ProbabilitySimplex};
