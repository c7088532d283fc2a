//! Kernel herding on [0, 1]. With the uniform density and the 1/t rule the
//! iterates at powers of two are the regular grid and the objective is
//! exactly 1/(24 t^2).
//!
//! ```text
//! cargo run --release --example kernel_herding
//! ```

use fwkit::analysis::fit_rate;
use fwkit::herding::{herding_run, herding_run_observed, Density};
use fwkit::StepRule;

fn main() -> fwkit::Result<()> {
    println!("{:>6} {:>14} {:>14}", "t", "f(x_t)", "1/(24 t^2)");
    herding_run_observed(&Density::Uniform, StepRule::OpenLoop { ell: 1 }, 64, |v| {
        if v.t.is_power_of_two() {
            let t = v.t as f64;
            println!("{:>6} {:>14.6e} {:>14.6e}", v.t, v.value, 1.0 / (24.0 * t * t));
        }
    })?;

    let random = Density::from_arg("random:0")?;
    for density in [Density::Uniform, random] {
        println!("\n{density}");
        for rule in [
            StepRule::OpenLoop { ell: 1 },
            StepRule::OpenLoop { ell: 2 },
            StepRule::LineSearch,
        ] {
            let (trace, state) = herding_run(&density, rule, 512)?;
            let series: Vec<_> = trace.records.iter().map(|r| (r.t, r.h)).collect();
            let slope = fit_rate(&series, 32, 512).map_or(f64::NAN, |r| r.slope);
            println!(
                "  {:<12} slope {slope:.2}, {} atoms, total mass {:.3e}",
                rule.to_string(),
                state.len(),
                state.total_mass()
            );
        }
    }
    Ok(())
}
