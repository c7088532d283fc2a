//! Frank-Wolfe solvers: vanilla, away-step and decomposition-invariant
//! pairwise.

pub mod afw;
pub mod difw;
pub mod fw;

pub use afw::{afw_run, afw_run_observed, ActiveSet, AfwView};
pub use difw::{difw_run, difw_run_observed, dyadic_step, DifwView};
pub use fw::{constant_rule_for, fw_run, fw_run_observed, FwView};

use crate::base::{Point, Problem, TraceMeta};
use crate::error::{Error, Result};

const FEASIBILITY_TOL: f64 = 1e-8;

fn check_start(problem: &Problem, x0: &Point) -> Result<()> {
    let d = problem.region.dimension();
    if x0.len() != d || problem.objective.dimension() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: x0.len(),
        });
    }
    if !crate::base::all_finite(x0) || !problem.region.contains(x0, FEASIBILITY_TOL) {
        return Err(Error::InfeasibleStart);
    }
    Ok(())
}

fn meta(problem: &Problem, rule: &crate::base::StepRule) -> TraceMeta {
    TraceMeta {
        rule: rule.to_string(),
        region: problem.region.label(),
        objective: problem.objective.label(),
        seed: None,
        early_exit: None,
        fstar_certified: problem.reference.certified,
    }
}
