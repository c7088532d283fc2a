use std::sync::Arc;

use super::{FeasibleRegion, Objective, Point};

/// Reference optimum used to turn objective values into primal gaps.
#[derive(Debug, Clone, PartialEq)]
pub struct Reference {
    /// Optimal value, or a certified lower bound on it.
    pub fstar: f64,
    /// Best known minimizer.
    pub xstar: Point,
    /// False when the lower/upper sandwich on `fstar` stayed wider than the
    /// certification tolerance.
    pub certified: bool,
}

/// An objective, a region and the optimum of the pair.
#[derive(Clone)]
pub struct Problem {
    pub objective: Arc<dyn Objective>,
    pub region: Arc<dyn FeasibleRegion>,
    pub reference: Reference,
    /// `f(xstar) - fstar`, nonnegative.
    offset: f64,
}

impl Problem {
    pub fn new(
        objective: Arc<dyn Objective>,
        region: Arc<dyn FeasibleRegion>,
        reference: Reference,
    ) -> Self {
        let offset = (objective.value(&reference.xstar) - reference.fstar).max(0.0);
        Problem {
            objective,
            region,
            reference,
            offset,
        }
    }

    /// Unclamped primal gap `f(x) - f*`.
    pub fn raw_gap(&self, x: &Point) -> f64 {
        self.objective.value_difference(x, &self.reference.xstar) + self.offset
    }

    pub fn smoothness(&self) -> f64 {
        self.objective.smoothness()
    }

    pub fn diameter(&self) -> f64 {
        self.region.diameter()
    }

    pub fn label(&self) -> String {
        format!("{} on {}", self.objective.label(), self.region.label())
    }
}

impl std::fmt::Debug for Problem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Problem")
            .field("objective", &self.objective.label())
            .field("region", &self.region.label())
            .field("fstar", &self.reference.fstar)
            .field("certified", &self.reference.certified)
            .finish()
    }
}
