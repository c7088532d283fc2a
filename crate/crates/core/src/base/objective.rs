use super::Point;

/// Hölderian error bound parameters: `mu * h^theta >= dist(x, X*)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Heb {
    pub mu: f64,
    pub theta: f64,
}

/// A smooth convex objective with first-order oracle and curvature metadata.
pub trait Objective: Send + Sync {
    fn dimension(&self) -> usize;
    fn value(&self, x: &Point) -> f64;
    fn gradient(&self, x: &Point) -> Point;
    /// Smoothness constant L.
    fn smoothness(&self) -> f64;
    /// Strong convexity modulus, `None` when the objective is merely convex.
    fn strong_convexity(&self) -> Option<f64>;

    fn heb(&self) -> Option<Heb> {
        self.strong_convexity().map(|a| Heb {
            mu: (2.0 / a).sqrt(),
            theta: 0.5,
        })
    }

    /// Smallest minimizer of `s -> f(x + s d)` on `[0, cap]` when it has a
    /// closed form. `grad` is the gradient at `x`.
    fn exact_line_step(&self, _x: &Point, _grad: &Point, _d: &Point, _cap: f64) -> Option<f64> {
        None
    }

    /// `f(x) - f(y)`, evaluated without cancellation where the structure allows.
    fn value_difference(&self, x: &Point, y: &Point) -> f64 {
        self.value(x) - self.value(y)
    }

    fn label(&self) -> String;
}
