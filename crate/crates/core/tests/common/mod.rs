#![allow(dead_code)]

use fwkit::analysis::fit_rate;
use fwkit::objectives::{generate_instance, InstanceSpec, Location, RegionSpec};
use fwkit::{Problem, RunTrace};

pub fn simplex_problem(location: Location, d: usize) -> Problem {
    let spec = InstanceSpec::new(location, 0, RegionSpec::Simplex { dimension: d });
    generate_instance(&spec).unwrap().problem().unwrap()
}

pub fn ball_problem(p: f64, location: Location, d: usize, seed: u64) -> Problem {
    let region = RegionSpec::LpBall {
        p,
        radius: 1.0,
        dimension: d,
    };
    generate_instance(&InstanceSpec::new(location, seed, region))
        .unwrap()
        .problem()
        .unwrap()
}

pub fn series(trace: &RunTrace) -> Vec<(usize, f64)> {
    trace.records.iter().map(|r| (r.t, r.h)).collect()
}

/// Minus the log-log slope of the gaps over `[from, to]`.
pub fn slope(trace: &RunTrace, from: usize, to: usize) -> f64 {
    fit_rate(&series(trace), from, to).map_or(f64::NAN, |r| r.slope)
}

/// Prints the criterion's verdict line, then fails the test when it did not
/// pass.
pub fn verdict(n: u32, name: &str, ok: bool, detail: &str) {
    println!("{} criterion {n} ({name}): {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} ({name}) failed: {detail}");
}
