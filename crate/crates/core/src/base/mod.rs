//! Shared vocabulary: points, oracle traits, step rules, run traces and the
//! gap recurrence.

mod objective;
mod problem;
pub mod recurrence;
mod region;
pub mod scaling;
mod step;
mod trace;

pub use objective::{Heb, Objective};
pub use problem::{Problem, Reference};
pub use region::{FeasibleRegion, SimplexLike, UniformConvexity};
pub use step::{golden_section, open_loop, step_length, StepContext, StepRule};
pub use trace::{converged, read_gaps_csv, RunTrace, StepKind, TraceMeta, TraceRecord};
pub(crate) use trace::checked_gap;
pub use trace::sci;

/// Dense iterate or vertex in R^d.
pub type Point = nalgebra::DVector<f64>;

/// Deterministic generator used for every seeded draw in the crate.
pub type SeededRng = rand_chacha::ChaCha8Rng;

/// Builds the seeded generator for `seed`.
pub fn seeded_rng(seed: u64) -> SeededRng {
    use rand::SeedableRng;
    SeededRng::seed_from_u64(seed)
}

/// Standard unit vector e_i in R^d.
pub fn unit(d: usize, i: usize) -> Point {
    let mut e = Point::zeros(d);
    e[i] = 1.0;
    e
}

pub(crate) fn all_finite(x: &Point) -> bool {
    x.iter().all(|v| v.is_finite())
}

/// Index of the smallest entry, first one on ties.
pub fn argmin(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate().skip(1) {
        if x < v[best] {
            best = i;
        }
    }
    best
}
