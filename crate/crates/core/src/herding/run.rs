use super::density::Density;
use super::state::HerdingState;
use crate::base::{checked_gap, open_loop, RunTrace, StepKind, StepRule, TraceMeta, TraceRecord};
use crate::error::{Error, Result};

/// Self inner product `k(y, y)` of every feature vector.
const FEATURE_NORM_SQ: f64 = 1.0 / 12.0;

/// State handed to observers at each recorded iteration, before the step.
pub struct HerdingView<'a> {
    pub t: usize,
    pub state: &'a HerdingState,
    pub value: f64,
    /// Atom chosen by the LMO.
    pub vertex: f64,
    pub eta: f64,
}

/// Runs kernel herding for iterations `t = 1..=iters`, starting from the
/// single atom returned by the LMO on the empty state.
pub fn herding_run(density: &Density, rule: StepRule, iters: usize) -> Result<(RunTrace, HerdingState)> {
    herding_run_observed(density, rule, iters, |_| {})
}

/// [`herding_run`] with a callback invoked at every iteration.
pub fn herding_run_observed(
    density: &Density,
    rule: StepRule,
    iters: usize,
    mut observe: impl FnMut(&HerdingView<'_>),
) -> Result<(RunTrace, HerdingState)> {
    if iters == 0 {
        return Err(Error::InvalidInput("herding needs at least one iteration".into()));
    }
    rule.validate()?;
    let mut trace = RunTrace::new(TraceMeta {
        rule: rule.to_string(),
        region: "marginal_polytope([0,1])".into(),
        objective: format!("herding({density})"),
        fstar_certified: true,
        ..TraceMeta::default()
    });
    let mut state = HerdingState::new();
    state.add(state.lmo(density), 1.0, density);
    for t in 1..=iters {
        let value = state.objective(density);
        let cached = state.objective_cached(density);
        if (value - cached).abs() > 1e-10 {
            return Err(Error::Invariant {
                t,
                what: format!("cached objective {cached:e} drifted from {value:e}"),
            });
        }
        let sum: f64 = state.weights().iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::Invariant {
                t,
                what: format!("weights sum to {sum}"),
            });
        }
        let h = checked_gap(t, value)?;
        let y = state.lmo(density);
        let xx = state.norm_sq();
        let kx = state.kernel_sum(y) / state.total_mass();
        let gap = xx - kx - state.mean_inner() + density.mean_embedding(y);
        let eta = match rule {
            StepRule::OpenLoop { ell } => open_loop(ell, t),
            StepRule::Constant { eta } => eta,
            StepRule::LineSearch | StepRule::ShortStep => {
                let curvature = xx - 2.0 * kx + FEATURE_NORM_SQ;
                if curvature > 0.0 {
                    (gap / curvature).clamp(0.0, 1.0)
                } else {
                    0.0
                }
            }
        };
        trace.push(TraceRecord {
            t,
            h,
            fw_gap: gap,
            eta,
            kind: StepKind::Fw,
            active_set_size: None,
        });
        observe(&HerdingView {
            t,
            state: &state,
            value,
            vertex: y,
            eta,
        });
        if t == iters {
            break;
        }
        let mass = match rule {
            StepRule::OpenLoop { ell } => ell as f64 * state.total_mass() / t as f64,
            _ if eta >= 1.0 => f64::INFINITY,
            _ => eta / (1.0 - eta) * state.total_mass(),
        };
        if mass > 0.0 {
            state.add(y, mass, density);
        }
    }
    Ok((trace, state))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_iterates_by_hand() {
        let mut seen = Vec::new();
        herding_run_observed(&Density::Uniform, StepRule::OpenLoop { ell: 1 }, 2, |v| {
            seen.push((v.t, v.value, v.state.atoms().to_vec()))
        })
        .unwrap();
        assert_eq!(seen[0], (1, 1.0 / 24.0, vec![0.0]));
        assert_eq!(seen[1], (2, 1.0 / 96.0, vec![0.0, 0.5]));
    }

    #[test]
    fn open_loop_one_keeps_unit_masses() {
        let (trace, state) = herding_run(&Density::Uniform, StepRule::OpenLoop { ell: 1 }, 37).unwrap();
        assert_eq!(trace.len(), 37);
        assert!(state.masses().iter().all(|&m| m == 1.0));
        assert_eq!(state.total_mass(), 37.0);
    }

    #[test]
    fn zero_iterations_rejected() {
        assert!(herding_run(&Density::Uniform, StepRule::LineSearch, 0).is_err());
    }
}
