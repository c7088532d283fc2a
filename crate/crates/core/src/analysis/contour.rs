//! Local-rate sweeps over the dimension.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use super::rates::{burn_in_end, local_rates};
use crate::base::StepRule;
use crate::error::Result;
use crate::objectives::{generate_instance, InstanceSpec, Location, RegionSpec};
use crate::solvers::fw_run;

/// Simplex instance families with `f(x) = 1/2 ||x - b||^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContourFamily {
    /// `b = (1/d) 1`, optimum in the interior.
    Interior,
    /// `b = 2 * 1bar`, optimum in the relative interior of a face.
    Face,
}

impl ContourFamily {
    pub fn spec(&self, d: usize, seed: u64) -> InstanceSpec {
        let location = match self {
            ContourFamily::Interior => Location::Interior,
            ContourFamily::Face => Location::Exterior,
        };
        InstanceSpec::new(location, seed, RegionSpec::Simplex { dimension: d })
    }
}

impl fmt::Display for ContourFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ContourFamily::Interior => "interior",
            ContourFamily::Face => "face",
        })
    }
}

impl FromStr for ContourFamily {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "interior" => Ok(ContourFamily::Interior),
            "face" => Ok(ContourFamily::Face),
            _ => Err(format!("unknown contour family {s:?}; expected interior or face")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContourCell {
    pub t: usize,
    pub slope: f64,
    pub r_squared: f64,
}

/// Local rates of one dimension, or the reason the run failed.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourRow {
    pub d: usize,
    pub cells: Vec<ContourCell>,
    /// First `t` whose local rate reaches the threshold passed to
    /// [`rate_contour`].
    pub burn_in: Option<usize>,
    pub error: Option<String>,
}

/// Runs FW with `eta_t = 4/(t+4)` for `iters` iterations at each dimension
/// and records local rates over windows of `window` iterations.
pub fn rate_contour(
    family: ContourFamily,
    dims: &[usize],
    iters: usize,
    window: usize,
    threshold: f64,
) -> Vec<ContourRow> {
    dims.par_iter()
        .map(|&d| match contour_row(family, d, iters, window, threshold) {
            Ok(row) => row,
            Err(e) => ContourRow {
                d,
                cells: Vec::new(),
                burn_in: None,
                error: Some(e.to_string()),
            },
        })
        .collect()
}

fn contour_row(family: ContourFamily, d: usize, iters: usize, window: usize, threshold: f64) -> Result<ContourRow> {
    let inst = generate_instance(&family.spec(d, 0))?;
    let problem = inst.problem()?;
    let x0 = problem.region.default_start();
    let trace = fw_run(&problem, StepRule::OpenLoop { ell: 4 }, &x0, iters)?;
    let series: Vec<(usize, f64)> = trace.records.iter().map(|r| (r.t, r.h)).collect();
    let cells = local_rates(&series, window)
        .into_iter()
        .map(|r| ContourCell {
            t: r.start,
            slope: r.slope,
            r_squared: r.r_squared,
        })
        .collect();
    Ok(ContourRow {
        d,
        cells,
        burn_in: burn_in_end(&series, threshold, window),
        error: None,
    })
}

/// Writes `d,t,slope,r2` rows; failed dimensions are skipped.
pub fn write_contour_csv(rows: &[ContourRow], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["d", "t", "slope", "r2"]).map_err(csv_err)?;
    for row in rows {
        for c in &row.cells {
            w.write_record([
                row.d.to_string(),
                c.t.to_string(),
                crate::base::sci(c.slope),
                crate::base::sci(c.r_squared),
            ])
            .map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> crate::error::Error {
    crate::error::Error::Io(e.into())
}
