//! Frank-Wolfe on an l2-ball instance under every step rule.
//!
//! ```text
//! cargo run --release --example step_rules
//! ```

use fwkit::objectives::{generate_instance, InstanceSpec, Location, RegionSpec};
use fwkit::solvers::{constant_rule_for, fw_run};
use fwkit::StepRule;

fn main() -> fwkit::Result<()> {
    let region = RegionSpec::LpBall {
        p: 2.0,
        radius: 1.0,
        dimension: 50,
    };
    let problem = generate_instance(&InstanceSpec::new(Location::Exterior, 7, region))?.problem()?;
    let x0 = problem.region.default_start();

    let mut rules = vec![
        StepRule::OpenLoop { ell: 1 },
        StepRule::OpenLoop { ell: 4 },
        StepRule::LineSearch,
        StepRule::ShortStep,
    ];
    rules.push(constant_rule_for(&problem)?);

    println!("{}", problem.label());
    println!("{:<24} {:>12} {:>12} {:>12}", "rule", "h_10", "h_100", "h_1000");
    for rule in rules {
        let trace = fw_run(&problem, rule, &x0, 1000)?;
        println!(
            "{:<24} {:>12.3e} {:>12.3e} {:>12.3e}",
            rule.to_string(),
            trace.gap(10),
            trace.gap(100),
            trace.gap(1000)
        );
    }
    Ok(())
}
