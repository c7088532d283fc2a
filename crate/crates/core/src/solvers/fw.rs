//! Vanilla Frank-Wolfe.

use super::{check_start, meta, FEASIBILITY_TOL};
use crate::base::{
    checked_gap, converged, step_length, Point, Problem, RunTrace, StepContext, StepKind, StepRule,
    TraceRecord,
};
use crate::error::{Error, Result, StepError};

/// Snapshot handed to observers after each recorded iteration.
pub struct FwView<'a> {
    pub t: usize,
    pub x: &'a Point,
    pub vertex: &'a Point,
    pub gradient: &'a Point,
    pub value: f64,
    pub eta: f64,
}

/// Runs `iters` Frank-Wolfe iterations from `x0`, recording `iters + 1`
/// states.
pub fn fw_run(problem: &Problem, rule: StepRule, x0: &Point, iters: usize) -> Result<RunTrace> {
    fw_run_observed(problem, rule, x0, iters, |_| {})
}

/// [`fw_run`] with a callback invoked at every iteration before the update.
pub fn fw_run_observed(
    problem: &Problem,
    rule: StepRule,
    x0: &Point,
    iters: usize,
    mut observe: impl FnMut(&FwView<'_>),
) -> Result<RunTrace> {
    check_start(problem, x0)?;
    rule.validate()?;
    let f = problem.objective.as_ref();
    let region = problem.region.as_ref();
    let mut trace = RunTrace::new(meta(problem, &rule));
    let mut x = x0.clone();
    for t in 0..=iters {
        let value = f.value(&x);
        if !value.is_finite() {
            return Err(Error::NonFinite(t));
        }
        let g = f.gradient(&x);
        let p = region.lmo(&g);
        let d = &p - &x;
        let fw_gap = -g.dot(&d);
        let h = checked_gap(t, problem.raw_gap(&x))?;
        let mut record = TraceRecord {
            t,
            h,
            fw_gap,
            eta: 0.0,
            kind: StepKind::Fw,
            active_set_size: None,
        };
        let done = converged(fw_gap, value);
        let eta = if done {
            None
        } else {
            let ctx = StepContext {
                x: &x,
                gradient: &g,
                direction: &d,
                cap: 1.0,
                objective: f,
            };
            match step_length(&rule, t, &ctx) {
                Ok(eta) => Some(eta),
                Err(StepError::DegenerateDirection) => None,
                Err(e) => return Err(e.into()),
            }
        };
        record.eta = eta.unwrap_or(0.0);
        trace.push(record);
        observe(&FwView {
            t,
            x: &x,
            vertex: &p,
            gradient: &g,
            value,
            eta: eta.unwrap_or(0.0),
        });
        let Some(eta) = eta else {
            trace.pad_until(iters);
            break;
        };
        if t == iters {
            break;
        }
        x.axpy(eta, &d, 1.0);
        if !region.contains(&x, FEASIBILITY_TOL) {
            return Err(Error::Invariant {
                t: t + 1,
                what: "iterate left the region".into(),
            });
        }
    }
    Ok(trace)
}

/// Constant step `alpha * lambda / (2L)` with `lambda = 0.9 ||grad f(x*)||`
/// and `alpha` from the region's uniform convexity.
pub fn constant_rule_for(problem: &Problem) -> Result<StepRule> {
    let uc = problem
        .region
        .uniform_convexity()
        .ok_or_else(|| Error::InvalidInput("constant rule needs a uniformly convex region".into()))?;
    let lambda = 0.9 * problem.objective.gradient(&problem.reference.xstar).norm();
    let eta = uc.alpha * lambda / (2.0 * problem.smoothness());
    let rule = StepRule::Constant { eta: eta.min(1.0) };
    rule.validate()?;
    Ok(rule)
}
