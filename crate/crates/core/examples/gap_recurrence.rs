//! The gap recurrence h_{t+1} <= (1 - eta_t) h_t + eta_t^2 C with open-loop
//! steps, simulated with its worst case and compared against the closed
//! form bound.
//!
//! ```text
//! cargo run --release --example gap_recurrence
//! ```

use fwkit::base::recurrence::{recurrence_bound, simulate_recurrence, RecurrenceParams};

fn main() -> fwkit::Result<()> {
    let params = RecurrenceParams {
        a: 1.0,
        b: 0.5,
        c: 2.0,
        psi: 0.5,
    };
    let (s, h_s) = (10, 1.0);
    let h = simulate_recurrence(params, |_| params.c, s, h_s, s + 10_000)?;
    println!("{params:?}");
    println!("{:>8} {:>14} {:>14}", "t", "h_t", "bound");
    for k in [0, 10, 100, 1000, 10_000] {
        let t = s + k;
        println!("{t:>8} {:>14.6e} {:>14.6e}", h[k], recurrence_bound(params, s, h_s, t));
    }
    Ok(())
}
