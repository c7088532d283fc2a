//! A point with t nonzero entries cannot beat 1/t - 1/d on min ||x||^2
//! over the simplex. Open-loop steps replace the start with a vertex at
//! t = 0, so x_t has at most t atoms; line search keeps the start and has
//! at most t + 1.
//!
//! ```text
//! cargo run --release --example sparsity_bound
//! ```

use std::sync::Arc;

use fwkit::base::{unit, Reference};
use fwkit::objectives::QuadraticObjective;
use fwkit::regions::{jaggi_lower_bound, ProbabilitySimplex};
use fwkit::solvers::fw_run;
use fwkit::{Point, Problem, StepRule};

fn main() -> fwkit::Result<()> {
    let d = 8;
    let f = QuadraticObjective::scaled_identity(2f64.sqrt(), Point::zeros(d));
    let xstar = Point::from_element(d, 1.0 / d as f64);
    let reference = Reference {
        fstar: 1.0 / d as f64,
        xstar,
        certified: true,
    };
    let problem = Problem::new(Arc::new(f), Arc::new(ProbabilitySimplex::new(d)), reference);
    let open = fw_run(&problem, StepRule::OpenLoop { ell: 2 }, &unit(d, 0), d)?;
    let exact = fw_run(&problem, StepRule::LineSearch, &unit(d, 0), d)?;

    let best = |k: usize| jaggi_lower_bound(d, k.min(d)).map(|v| v - 1.0 / d as f64);
    println!("{:>3} {:>10} {:>10} {:>10} {:>10}", "t", "t atoms", "openloop", "t+1 atoms", "linesearch");
    for t in 1..=d {
        println!(
            "{t:>3} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
            best(t)?,
            open.gap(t),
            best(t + 1)?,
            exact.gap(t)
        );
    }
    Ok(())
}
