//! The face-optimum simplex family: line search zig-zags at a sublinear
//! rate when the target sits inside the face, and lands exactly on it after
//! d/2 steps when the target is pushed outside.
//!
//! ```text
//! cargo run --release --example wolfe_face
//! ```

use fwkit::analysis::fit_rate;
use fwkit::objectives::{generate_instance, InstanceSpec, Location, RegionSpec};
use fwkit::solvers::fw_run;
use fwkit::{RunTrace, StepRule};

fn slope(trace: &RunTrace, from: usize, to: usize) -> f64 {
    let series: Vec<_> = trace.records.iter().map(|r| (r.t, r.h)).collect();
    fit_rate(&series, from, to).map_or(f64::NAN, |r| r.slope)
}

fn main() -> fwkit::Result<()> {
    let d = 100;
    for rho in [0.25, 2.0] {
        let spec = InstanceSpec::new(Location::Face(rho), 0, RegionSpec::Simplex { dimension: d });
        let problem = generate_instance(&spec)?.problem()?;
        let x0 = problem.region.default_start();
        let ls = fw_run(&problem, StepRule::LineSearch, &x0, 10_000)?;
        let ol = fw_run(&problem, StepRule::OpenLoop { ell: 4 }, &x0, 10_000)?;
        println!("rho = {rho}");
        println!("  line search slope over [1e3, 1e4]: {:.3}", slope(&ls, 1000, 10_000));
        println!("  open loop   slope over [1e3, 1e4]: {:.3}", slope(&ol, 1000, 10_000));
        if let Some(r) = ls.records.iter().find(|r| r.h <= 1e-14) {
            println!("  line search reaches h <= 1e-14 at t = {}", r.t);
        }
    }
    Ok(())
}
