//! Decomposition-invariant pairwise Frank-Wolfe over simplex-like polytopes.
//!
//! No active set is stored: the away vertex comes from the support of the
//! iterate.

use super::{check_start, meta};
use crate::base::{
    checked_gap, converged, step_length, Point, Problem, RunTrace, SimplexLike, StepContext,
    StepKind, StepRule, TraceRecord,
};
use crate::error::{Error, Result, StepError};

/// Feasibility tolerances checked after every step.
const NONNEG_TOL: f64 = 1e-12;
const RESIDUAL_TOL: f64 = 1e-10;

/// Open-loop step `ell / (t + ell)` rounded down to a power of two.
///
/// Returns `(delta, 2^-delta)` with the smallest `delta` such that
/// `2^-delta <= ell / (t + ell)`, decided in integers.
pub fn dyadic_step(ell: u32, t: usize) -> (u32, f64) {
    let num = t as u128 + ell as u128;
    let ell = ell as u128;
    let mut delta = 0u32;
    while num > ell << delta {
        delta += 1;
    }
    (delta, 0.5f64.powi(delta as i32))
}

/// Snapshot handed to observers after each pairwise step.
pub struct DifwView<'a> {
    pub t: usize,
    /// Iterate before the step.
    pub x: &'a Point,
    pub gradient: &'a Point,
    pub plus: &'a Point,
    pub minus: &'a Point,
    pub gamma: f64,
}

fn support(x: &Point) -> usize {
    x.iter().filter(|&&v| v > NONNEG_TOL).count()
}

/// Runs the pairwise method for `iters` iterations from the feasible `x0`.
pub fn difw_run(problem: &Problem, rule: StepRule, x0: &Point, iters: usize) -> Result<RunTrace> {
    difw_run_observed(problem, rule, x0, iters, |_| {})
}

/// [`difw_run`] with a callback invoked after every pairwise step.
pub fn difw_run_observed(
    problem: &Problem,
    rule: StepRule,
    x0: &Point,
    iters: usize,
    mut observe: impl FnMut(&DifwView<'_>),
) -> Result<RunTrace> {
    check_start(problem, x0)?;
    rule.validate()?;
    if !matches!(rule, StepRule::OpenLoop { .. } | StepRule::LineSearch) {
        return Err(Error::InvalidInput(format!(
            "the pairwise method supports open-loop and line-search rules, not {rule}"
        )));
    }
    let region: &dyn SimplexLike = problem
        .region
        .as_simplex_like()
        .ok_or_else(|| Error::InvalidInput("the pairwise method needs a simplex-like region".into()))?;
    let f = problem.objective.as_ref();
    let mut trace = RunTrace::new(meta(problem, &rule));

    // t = 0: jump to the vertex returned by the LMO
    let g0 = f.gradient(x0);
    let first = region.lmo(&g0);
    trace.push(TraceRecord {
        t: 0,
        h: checked_gap(0, problem.raw_gap(x0))?,
        fw_gap: g0.dot(&(x0 - &first)),
        eta: 1.0,
        kind: StepKind::Fw,
        active_set_size: None,
    });
    let mut x = first;

    for t in 1..=iters {
        let value = f.value(&x);
        if !value.is_finite() {
            return Err(Error::NonFinite(t));
        }
        let g = f.gradient(&x);
        let plus = region.lmo(&g);
        let minus = region.away_vertex(&g, &x);
        let fw_gap = g.dot(&(&x - &plus));
        let h = checked_gap(t, problem.raw_gap(&x))?;
        let mut record = TraceRecord {
            t,
            h,
            fw_gap,
            eta: 0.0,
            kind: StepKind::Pairwise,
            active_set_size: None,
        };
        if t == iters {
            trace.push(record);
            break;
        }
        if converged(fw_gap, value) {
            trace.push(record);
            trace.pad_until(iters);
            break;
        }
        if plus == minus {
            return Err(Error::Invariant {
                t,
                what: format!("pairwise vertices coincide with FW gap {fw_gap:e}"),
            });
        }
        let d = &plus - &minus;
        let cap = d
            .iter()
            .zip(x.iter())
            .filter(|(di, _)| **di < 0.0)
            .map(|(di, xi)| xi / -di)
            .fold(f64::INFINITY, f64::min);
        let gamma = match rule {
            StepRule::OpenLoop { ell } => dyadic_step(ell, t).1,
            _ => {
                let ctx = StepContext {
                    x: &x,
                    gradient: &g,
                    direction: &d,
                    cap,
                    objective: f,
                };
                match step_length(&rule, t, &ctx) {
                    Ok(s) => s,
                    Err(StepError::DegenerateDirection) => 0.0,
                    Err(e) => return Err(e.into()),
                }
            }
        };
        let before = support(&x);
        let x_before = x.clone();
        x.axpy(gamma, &d, 1.0);
        if gamma == cap {
            // coordinates hit exactly zero in exact arithmetic
            for (xi, di) in x.iter_mut().zip(d.iter()) {
                if *di < 0.0 && xi.abs() <= NONNEG_TOL {
                    *xi = 0.0;
                }
            }
        }
        let residual = region.constraint_residual(&x);
        if x.iter().any(|&v| v < -NONNEG_TOL) || residual > RESIDUAL_TOL {
            return Err(Error::Invariant {
                t: t + 1,
                what: format!(
                    "iterate left the polytope (min {:e}, residual {residual:e}, gamma {gamma}, x_t {:?})",
                    x.min(),
                    x_before.as_slice()
                ),
            });
        }
        record.eta = gamma;
        if support(&x) < before {
            record.kind = StepKind::Drop;
        }
        trace.push(record);
        observe(&DifwView {
            t,
            x: &x_before,
            gradient: &g,
            plus: &plus,
            minus: &minus,
            gamma,
        });
    }
    Ok(trace)
}
