//! Reference optima used to measure primal gaps.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::Cholesky;

use super::quadratic::{Design, QuadraticObjective};
use crate::base::{FeasibleRegion, Objective, Point, Reference, StepRule};
use crate::error::Result;
use crate::solvers::afw::Engine;

/// Iteration budget of the iterative fallback.
pub const REFERENCE_BUDGET: usize = 1_000_000;

const CONTAINS_TOL: f64 = 1e-10;
const CHECK_EVERY: usize = 100;

fn width_ok(upper: f64, lower: f64) -> bool {
    upper - lower <= 1e-12 * (1.0 + upper.abs())
}

/// Computes `f*` and a minimizer of `objective` over `region`.
///
/// Uses the unconstrained minimizer when it is feasible, the Euclidean
/// projection when the design is a multiple of the identity, and otherwise
/// an iterative line-search run whose value is sandwiched by the FW gap.
pub fn reference_optimum(objective: &QuadraticObjective, region: &dyn FeasibleRegion) -> Result<Reference> {
    if objective.strong_convexity().is_some_and(|a| a > 0.0) {
        let xhat = match objective.design() {
            Design::ScaledIdentity(s) => objective.target() / *s,
            Design::Dense(_) => match Cholesky::new(objective.gram()) {
                Some(ch) => ch.solve(objective.atb()),
                None => Point::from_element(0, 0.0),
            },
        };
        if xhat.len() == objective.dimension() && region.contains(&xhat, CONTAINS_TOL) {
            return Ok(exact(objective, xhat));
        }
    }
    if let Design::ScaledIdentity(s) = objective.design() {
        if let Some(x) = region.euclidean_projection(&(objective.target() / *s)) {
            return Ok(exact(objective, x));
        }
    }
    if let Some((center, radius)) = region.euclidean_ball() {
        if let Some(r) = ball_reference(objective, region, &center, radius) {
            return Ok(r);
        }
    }
    if region.is_polytope() {
        Ok(away_step_reference(objective, region))
    } else {
        Ok(fw_reference(objective, region))
    }
}

fn exact(objective: &QuadraticObjective, xstar: Point) -> Reference {
    Reference {
        fstar: objective.value(&xstar),
        xstar,
        certified: true,
    }
}

/// Solves `min f(c + z)` over `||z|| <= r` through the eigendecomposition
/// of `A^T A`: the minimizer is `z = (A^T A + nu I)^+ A^T (b - A c)` with the
/// multiplier `nu >= 0` fixed by `||z|| = r` when the constraint is active.
fn ball_reference(
    objective: &QuadraticObjective,
    region: &dyn FeasibleRegion,
    center: &Point,
    radius: f64,
) -> Option<Reference> {
    let eig = objective.gram().symmetric_eigen();
    let rhs = objective.atb() - objective.apply_gram(center);
    let coef = eig.eigenvectors.tr_mul(&rhs);
    let scale = eig.eigenvalues.amax().max(f64::MIN_POSITIVE);
    let solve = |nu: f64| -> Point {
        let w = Point::from_fn(coef.len(), |i, _| {
            let lam = eig.eigenvalues[i].max(0.0) + nu;
            if lam <= 1e-12 * scale {
                0.0
            } else {
                coef[i] / lam
            }
        });
        &eig.eigenvectors * w
    };
    let mut z = solve(0.0);
    if z.norm() > radius {
        let (mut lo, mut hi) = (0.0, rhs.norm() / radius);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if solve(mid).norm() > radius {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        z = solve(hi);
    }
    let x = center + z;
    let value = objective.value(&x);
    let g = objective.gradient(&x);
    let gap = g.dot(&(&x - region.lmo(&g)));
    if !region.contains(&x, CONTAINS_TOL) || gap > 1e-12 * (1.0 + value.abs()) {
        return None;
    }
    Some(Reference {
        fstar: value - gap.max(0.0),
        xstar: x,
        certified: true,
    })
}

/// Line-search FW with an incrementally updated gradient.
fn fw_reference(objective: &QuadraticObjective, region: &dyn FeasibleRegion) -> Reference {
    let atb = objective.atb();
    let mut x = region.default_start();
    let mut gram_x = objective.apply_gram(&x);
    let mut best = (objective.value(&x), x.clone());
    let mut lower = f64::NEG_INFINITY;
    for t in 0..REFERENCE_BUDGET {
        if t % (100 * CHECK_EVERY) == 0 {
            gram_x = objective.apply_gram(&x);
        }
        let g = &gram_x - atb;
        let v = region.lmo(&g);
        let d = &v - &x;
        let gap = -g.dot(&d);
        if t % CHECK_EVERY == 0 || gap <= 0.0 {
            let value = objective.value(&x);
            lower = lower.max(value - gap.max(0.0));
            if value < best.0 {
                best = (value, x.clone());
            }
            if width_ok(best.0, lower) {
                break;
            }
        }
        if gap <= 0.0 {
            break;
        }
        let gram_v = objective.apply_gram(&v);
        let gram_d = &gram_v - &gram_x;
        let curvature = d.dot(&gram_d);
        if curvature <= 0.0 {
            break;
        }
        let gamma = (gap / curvature).min(1.0);
        x.axpy(gamma, &d, 1.0);
        gram_x.axpy(gamma, &gram_d, 1.0);
    }
    finish(objective, best, lower)
}

fn away_step_reference(objective: &QuadraticObjective, region: &dyn FeasibleRegion) -> Reference {
    let x0 = region.default_start();
    let mut engine = Engine::new(objective, region, StepRule::LineSearch, x0.clone());
    let mut best = (objective.value(&x0), x0);
    let mut lower = f64::NEG_INFINITY;
    for t in 0..REFERENCE_BUDGET {
        let value = objective.value(&engine.x);
        let step = match engine.step(t, value) {
            Ok(s) => s,
            Err(_) => break,
        };
        lower = lower.max(value - step.fw_gap.max(0.0));
        if value < best.0 {
            best = (value, engine.x.clone());
        }
        if step.converged || width_ok(best.0, lower) {
            break;
        }
    }
    let value = objective.value(&engine.x);
    if value < best.0 {
        best = (value, engine.x.clone());
    }
    finish(objective, best, lower)
}

fn finish(objective: &QuadraticObjective, best: (f64, Point), lower: f64) -> Reference {
    let (upper, xstar) = best;
    let certified = width_ok(upper, lower);
    let fstar = lower.min(upper).max(0.0);
    debug_assert!(objective.value(&xstar) >= fstar);
    Reference {
        fstar,
        xstar,
        certified,
    }
}

type Slot = Arc<Mutex<Option<Reference>>>;

/// [`reference_optimum`] memoized per `key` for the life of the process.
pub fn cached_reference(
    key: &str,
    objective: &QuadraticObjective,
    region: &dyn FeasibleRegion,
) -> Result<Reference> {
    static CACHE: OnceLock<Mutex<HashMap<String, Slot>>> = OnceLock::new();
    let slot = {
        let mut map = CACHE.get_or_init(Default::default).lock().unwrap_or_else(|e| e.into_inner());
        map.entry(key.to_string()).or_default().clone()
    };
    let mut entry = slot.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(r) = entry.as_ref() {
        return Ok(r.clone());
    }
    let r = reference_optimum(objective, region)?;
    *entry = Some(r.clone());
    Ok(r)
}
