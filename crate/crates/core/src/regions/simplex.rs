use rand::Rng;

use crate::base::{argmin, unit, FeasibleRegion, Point, SeededRng, SimplexLike, UniformConvexity};

/// Coordinates at or below this value count as outside the support.
pub const SUPPORT_TOL: f64 = 1e-12;

/// `e_i` at the first minimizing coordinate of `c`.
pub fn simplex_lmo(c: &Point) -> Point {
    unit(c.len(), argmin(c.as_slice()))
}

/// `e_i` at the first coordinate of `supp(x)` maximizing `c`.
///
/// Panics when `x` has no coordinate above the support tolerance.
pub fn simplex_away_lmo(c: &Point, x: &Point) -> Point {
    let mut best: Option<usize> = None;
    for i in 0..x.len() {
        if x[i] > SUPPORT_TOL && best.is_none_or(|b| c[i] > c[b]) {
            best = Some(i);
        }
    }
    let i = best.expect("away oracle called on a point with empty support");
    unit(c.len(), i)
}

/// Euclidean projection onto the probability simplex by the sorted-threshold
/// rule.
pub fn project_onto_simplex(v: &Point) -> Point {
    let mut u: Vec<f64> = v.iter().copied().collect();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut tau = 0.0;
    for (k, &uk) in u.iter().enumerate() {
        cumsum += uk;
        let candidate = (cumsum - 1.0) / (k as f64 + 1.0);
        if uk - candidate > 0.0 {
            tau = candidate;
        }
    }
    v.map(|vi| (vi - tau).max(0.0))
}

/// `{x in R^d : x >= 0, sum x = 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProbabilitySimplex {
    dimension: usize,
}

impl ProbabilitySimplex {
    pub fn new(dimension: usize) -> Self {
        assert!(dimension >= 1, "simplex dimension must be positive");
        ProbabilitySimplex { dimension }
    }
}

impl FeasibleRegion for ProbabilitySimplex {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn lmo(&self, c: &Point) -> Point {
        simplex_lmo(c)
    }

    fn diameter(&self) -> f64 {
        if self.dimension >= 2 {
            std::f64::consts::SQRT_2
        } else {
            0.0
        }
    }

    fn uniform_convexity(&self) -> Option<UniformConvexity> {
        None
    }

    fn contains(&self, x: &Point, tol: f64) -> bool {
        x.len() == self.dimension && x.iter().all(|&v| v >= -tol) && (x.sum() - 1.0).abs() <= tol
    }

    fn inner_radius(&self, x: &Point) -> f64 {
        x.min().max(0.0)
    }

    fn default_start(&self) -> Point {
        unit(self.dimension, 0)
    }

    fn sample(&self, rng: &mut SeededRng) -> Point {
        // exponential weights give a uniform draw; sometimes restrict the support
        let keep = if rng.gen_bool(0.3) {
            rng.gen_range(1..=self.dimension)
        } else {
            self.dimension
        };
        let mut w = Point::from_fn(self.dimension, |_, _| -rng.gen::<f64>().max(f64::MIN_POSITIVE).ln());
        for i in keep..self.dimension {
            w[i] = 0.0;
        }
        let s = w.sum();
        w / s
    }

    fn label(&self) -> String {
        format!("simplex(d={})", self.dimension)
    }

    fn euclidean_projection(&self, v: &Point) -> Option<Point> {
        Some(project_onto_simplex(v))
    }

    fn is_polytope(&self) -> bool {
        true
    }

    fn as_simplex_like(&self) -> Option<&dyn SimplexLike> {
        Some(self)
    }
}

impl SimplexLike for ProbabilitySimplex {
    fn away_vertex(&self, c: &Point, x: &Point) -> Point {
        simplex_away_lmo(c, x)
    }

    fn constraint_residual(&self, x: &Point) -> f64 {
        (x.sum() - 1.0).abs()
    }
}
