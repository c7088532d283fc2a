//! Sliding-window convergence rates and the iteration where the open-loop
//! rate settles near 2, for growing dimension.
//!
//! ```text
//! cargo run --release --example local_rates
//! ```

use fwkit::analysis::{rate_contour, ContourFamily};

fn main() {
    let dims = [10, 20, 50];
    for family in [ContourFamily::Interior, ContourFamily::Face] {
        println!("{family}");
        for row in rate_contour(family, &dims, 1500, 100, 1.8) {
            let tail: Vec<String> = row
                .cells
                .iter()
                .step_by(250)
                .map(|c| format!("{}:{:.2}", c.t, c.slope))
                .collect();
            let burn = row.burn_in.map_or("never".to_string(), |t| t.to_string());
            println!("  d = {:<4} burn-in {burn:<6} {}", row.d, tail.join("  "));
        }
    }
}
