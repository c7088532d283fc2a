//! Away-step Frank-Wolfe with an explicit active set.
//!
//! Open-loop rules run in the weakly open loop form: the step index is the
//! number of progress steps so far rather than the iteration counter.

use super::{check_start, meta};
use crate::base::{
    checked_gap, converged, open_loop, step_length, FeasibleRegion, Objective, Point, Problem,
    RunTrace, StepContext, StepKind, StepRule, TraceRecord,
};
use crate::error::{Error, Result, StepError};

/// Weights at or below this value are removed from the active set.
pub const DROP_TOL: f64 = 1e-12;

/// Vertices with positive weights whose combination is the iterate.
#[derive(Debug, Clone, PartialEq)]
pub struct ActiveSet {
    atoms: Vec<Point>,
    weights: Vec<f64>,
}

impl ActiveSet {
    pub fn singleton(v: Point) -> Self {
        ActiveSet {
            atoms: vec![v],
            weights: vec![1.0],
        }
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[Point] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    fn position(&self, v: &Point) -> Option<usize> {
        self.atoms.iter().position(|a| a == v)
    }

    /// `sum_i w_i a_i`.
    pub fn reconstruct(&self) -> Point {
        let mut x = Point::zeros(self.atoms[0].len());
        for (a, &w) in self.atoms.iter().zip(&self.weights) {
            x.axpy(w, a, 1.0);
        }
        x
    }

    /// Weight sum, nonnegativity and agreement with `x`.
    pub fn check(&self, x: &Point, t: usize) -> Result<()> {
        let fail = |what: String| Err(Error::Invariant { t, what });
        let sum: f64 = self.weights.iter().sum();
        if (sum - 1.0).abs() > 1e-10 {
            return fail(format!("active weights sum to {sum}"));
        }
        if self.weights.iter().any(|&w| w < 0.0) {
            return fail("negative active weight".into());
        }
        let err = (self.reconstruct() - x).amax();
        if err > 1e-9 {
            return fail(format!("active set reconstruction off by {err:e}"));
        }
        Ok(())
    }

    /// FW update toward `v` with step `gamma`.
    fn toward(&mut self, v: &Point, gamma: f64) {
        if gamma >= 1.0 {
            *self = ActiveSet::singleton(v.clone());
            return;
        }
        for w in &mut self.weights {
            *w *= 1.0 - gamma;
        }
        match self.position(v) {
            Some(i) => self.weights[i] += gamma,
            None => {
                self.atoms.push(v.clone());
                self.weights.push(gamma);
            }
        }
    }

    /// Away update from atom `i` with step `gamma`; `exact_drop` marks
    /// `gamma` equal to the maximal away step.
    fn away_from(&mut self, i: usize, gamma: f64, exact_drop: bool) {
        let old = self.weights[i];
        for w in &mut self.weights {
            *w *= 1.0 + gamma;
        }
        let updated = (1.0 + gamma) * old - gamma;
        if exact_drop || updated <= DROP_TOL {
            self.atoms.remove(i);
            self.weights.remove(i);
        } else {
            self.weights[i] = updated;
        }
    }
}

/// Snapshot handed to observers after each step.
pub struct AfwView<'a> {
    pub t: usize,
    /// Iterate before the step.
    pub x: &'a Point,
    pub gradient: &'a Point,
    pub fw_vertex: &'a Point,
    pub away_vertex: &'a Point,
    /// Active set after the step.
    pub active: &'a ActiveSet,
    /// Number of progress steps after the step.
    pub progress_steps: usize,
    pub kind: StepKind,
    /// Result of the progress test; `None` for rules without the counter.
    pub progress: Option<bool>,
    pub gamma: f64,
}

pub(crate) struct Step {
    pub fw_vertex: Point,
    pub away_vertex: Point,
    pub gradient: Point,
    pub fw_gap: f64,
    pub gamma: f64,
    pub kind: StepKind,
    pub progress: Option<bool>,
    pub converged: bool,
}

/// Iteration state shared by [`afw_run`] and the reference solver.
pub(crate) struct Engine<'a> {
    f: &'a dyn Objective,
    region: &'a dyn FeasibleRegion,
    rule: StepRule,
    pub x: Point,
    pub active: ActiveSet,
    pub progress_steps: usize,
    /// `L * delta^2` for the progress test.
    curvature: f64,
}

impl<'a> Engine<'a> {
    pub fn new(f: &'a dyn Objective, region: &'a dyn FeasibleRegion, rule: StepRule, x0: Point) -> Self {
        let curvature = f.smoothness() * region.diameter().powi(2);
        Engine {
            f,
            region,
            rule,
            active: ActiveSet::singleton(x0.clone()),
            x: x0,
            progress_steps: 0,
            curvature,
        }
    }

    /// Computes and applies one step from the current iterate. `value` is
    /// `f(x)`, used only for the convergence test.
    pub fn step(&mut self, t: usize, value: f64) -> Result<Step> {
        let g = self.f.gradient(&self.x);
        let p_fw = self.region.lmo(&g);
        let mut a = 0;
        let mut best = f64::NEG_INFINITY;
        for (i, v) in self.active.atoms.iter().enumerate() {
            let s = g.dot(v);
            if s > best {
                best = s;
                a = i;
            }
        }
        let p_a = self.active.atoms[a].clone();
        let gx = g.dot(&self.x);
        let fw_gap = gx - g.dot(&p_fw);
        let away_gap = best - gx;
        let mut step = Step {
            fw_vertex: p_fw,
            away_vertex: p_a,
            gradient: g,
            fw_gap,
            gamma: 0.0,
            kind: StepKind::Fw,
            progress: None,
            converged: converged(fw_gap, value),
        };
        if step.converged {
            return Ok(step);
        }
        let toward = fw_gap >= away_gap;
        let lambda_a = self.active.weights[a];
        let (d, cap) = if toward {
            (&step.fw_vertex - &self.x, 1.0)
        } else {
            if lambda_a >= 1.0 {
                return Err(Error::Invariant {
                    t,
                    what: "away step chosen from a singleton active set".into(),
                });
            }
            (&self.x - &step.away_vertex, lambda_a / (1.0 - lambda_a))
        };
        let scheduled = match self.rule {
            StepRule::OpenLoop { ell } => Some(open_loop(ell, self.progress_steps)),
            _ => None,
        };
        let gamma = match scheduled {
            Some(eta) => eta.min(cap),
            None => {
                let ctx = StepContext {
                    x: &self.x,
                    gradient: &step.gradient,
                    direction: &d,
                    cap,
                    objective: self.f,
                };
                match step_length(&self.rule, t, &ctx) {
                    Ok(s) => s,
                    Err(StepError::DegenerateDirection) => {
                        step.converged = true;
                        return Ok(step);
                    }
                    Err(e) => return Err(e.into()),
                }
            }
        };
        let before = self.active.len();
        if toward {
            self.active.toward(&step.fw_vertex, gamma);
        } else {
            self.active.away_from(a, gamma, gamma == cap);
        }
        self.x.axpy(gamma, &d, 1.0);
        if let Some(eta) = scheduled {
            let spread = step.gradient.dot(&(&step.away_vertex - &step.fw_vertex));
            let progress = (eta - gamma) * spread <= (eta * eta - gamma * gamma) * self.curvature;
            if progress {
                self.progress_steps += 1;
            }
            step.progress = Some(progress);
        }
        let shrank = self.active.len() < before;
        step.kind = if step.progress == Some(false) {
            StepKind::NonProgress
        } else if shrank {
            StepKind::Drop
        } else if toward {
            StepKind::Fw
        } else {
            StepKind::Away
        };
        step.gamma = gamma;
        Ok(step)
    }
}

/// Runs away-step Frank-Wolfe from the vertex `x0`.
pub fn afw_run(problem: &Problem, rule: StepRule, x0: &Point, iters: usize) -> Result<RunTrace> {
    afw_run_observed(problem, rule, x0, iters, |_| {})
}

/// [`afw_run`] with a callback invoked after every step.
pub fn afw_run_observed(
    problem: &Problem,
    rule: StepRule,
    x0: &Point,
    iters: usize,
    mut observe: impl FnMut(&AfwView<'_>),
) -> Result<RunTrace> {
    check_start(problem, x0)?;
    rule.validate()?;
    let f = problem.objective.as_ref();
    let mut engine = Engine::new(f, problem.region.as_ref(), rule, x0.clone());
    let mut trace = RunTrace::new(meta(problem, &rule));
    for t in 0..=iters {
        let value = f.value(&engine.x);
        if !value.is_finite() {
            return Err(Error::NonFinite(t));
        }
        let h = checked_gap(t, problem.raw_gap(&engine.x))?;
        let size = engine.active.len();
        let x_before = engine.x.clone();
        let step = if t < iters {
            engine.step(t, value)?
        } else {
            // the last state is recorded without moving
            let g = f.gradient(&engine.x);
            let p = problem.region.lmo(&g);
            let gap = g.dot(&(&engine.x - &p));
            Step {
                fw_vertex: p.clone(),
                away_vertex: p,
                gradient: g,
                fw_gap: gap,
                gamma: 0.0,
                kind: StepKind::Fw,
                progress: None,
                converged: true,
            }
        };
        trace.push(TraceRecord {
            t,
            h,
            fw_gap: step.fw_gap,
            eta: step.gamma,
            kind: step.kind,
            active_set_size: Some(size),
        });
        if step.converged {
            if t < iters {
                trace.pad_until(iters);
            }
            break;
        }
        engine.active.check(&engine.x, t + 1)?;
        observe(&AfwView {
            t,
            x: &x_before,
            gradient: &step.gradient,
            fw_vertex: &step.fw_vertex,
            away_vertex: &step.away_vertex,
            active: &engine.active,
            progress_steps: engine.progress_steps,
            kind: step.kind,
            progress: step.progress,
            gamma: step.gamma,
        });
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::unit;

    #[test]
    fn maximal_away_step_for_half_weight() {
        let lambda: f64 = 0.5;
        assert_eq!(lambda / (1.0 - lambda), 1.0);
    }

    #[test]
    fn exact_drop_removes_the_atom() {
        let mut s = ActiveSet::singleton(unit(3, 0));
        s.toward(&unit(3, 1), 0.25);
        assert_eq!(s.weights(), &[0.75, 0.25]);
        // away from e_2 with the maximal step 0.25/0.75
        let cap = 0.25 / 0.75;
        s.away_from(1, cap, true);
        assert_eq!(s.len(), 1);
        assert_eq!(s.atoms()[0], unit(3, 0));
    }

    #[test]
    fn full_fw_step_resets_the_set() {
        let mut s = ActiveSet::singleton(unit(3, 0));
        s.toward(&unit(3, 1), 0.5);
        s.toward(&unit(3, 2), 1.0);
        assert_eq!(s, ActiveSet::singleton(unit(3, 2)));
    }

    #[test]
    fn repeated_vertex_accumulates_weight() {
        let mut s = ActiveSet::singleton(unit(2, 0));
        s.toward(&unit(2, 1), 0.5);
        s.toward(&unit(2, 0), 0.5);
        assert_eq!(s.weights(), &[0.75, 0.25]);
        s.check(&Point::from_vec(vec![0.75, 0.25]), 0).unwrap();
    }
}
