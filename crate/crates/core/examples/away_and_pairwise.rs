//! Away-step and pairwise variants on the simplex, side by side with plain
//! Frank-Wolfe.
//!
//! ```text
//! cargo run --release --example away_and_pairwise
//! ```

use fwkit::base::StepKind;
use fwkit::objectives::{generate_instance, InstanceSpec, Location, RegionSpec};
use fwkit::solvers::{afw_run, difw_run, fw_run};
use fwkit::StepRule;

fn main() -> fwkit::Result<()> {
    let d = 100;
    let iters = 5000;
    for loc in [Location::Interior, Location::Boundary, Location::Exterior] {
        let spec = InstanceSpec::new(loc, 0, RegionSpec::Simplex { dimension: d });
        let problem = generate_instance(&spec)?.problem()?;
        let x0 = problem.region.default_start();

        println!("{loc} optimum");
        let fw = fw_run(&problem, StepRule::OpenLoop { ell: 4 }, &x0, iters)?;
        println!("  fw   openloop:4   h = {:.3e}", fw.gap(iters));

        for rule in [StepRule::OpenLoop { ell: 4 }, StepRule::LineSearch] {
            let afw = afw_run(&problem, rule, &x0, iters)?;
            let drops = afw.records.iter().filter(|r| r.kind == StepKind::Drop).count();
            let size = afw.records.last().and_then(|r| r.active_set_size).unwrap_or(0);
            println!(
                "  afw  {:<12} h = {:.3e}  drops = {drops}  active atoms = {size}",
                rule.to_string(),
                afw.gap(iters)
            );
        }

        let difw = difw_run(&problem, StepRule::OpenLoop { ell: 8 }, &x0, iters)?;
        println!("  difw openloop:8   h = {:.3e}", difw.gap(iters));
    }
    Ok(())
}
