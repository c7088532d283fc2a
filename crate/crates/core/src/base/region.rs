use super::{Point, SeededRng};

/// `(alpha, q)`-uniform convexity of a set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformConvexity {
    pub alpha: f64,
    pub q: f64,
}

/// A compact convex set accessed through its linear minimization oracle.
pub trait FeasibleRegion: Send + Sync {
    fn dimension(&self) -> usize;
    /// A minimizer of `<c, v>` over the region.
    fn lmo(&self, c: &Point) -> Point;
    /// Euclidean diameter.
    fn diameter(&self) -> f64;
    fn uniform_convexity(&self) -> Option<UniformConvexity>;
    fn contains(&self, x: &Point, tol: f64) -> bool;
    /// Radius of a Euclidean ball around `x`, intersected with the affine
    /// hull, that stays inside the region. Zero outside or on the boundary.
    fn inner_radius(&self, x: &Point) -> f64;
    /// The first standard vertex used as a start point in experiments.
    fn default_start(&self) -> Point;
    /// A random feasible point.
    fn sample(&self, rng: &mut SeededRng) -> Point;
    fn label(&self) -> String;

    /// Euclidean projection, when the region has a closed form for it.
    fn euclidean_projection(&self, _v: &Point) -> Option<Point> {
        None
    }

    /// Center and radius when the region is a Euclidean ball.
    fn euclidean_ball(&self) -> Option<(Point, f64)> {
        None
    }

    fn is_polytope(&self) -> bool {
        false
    }

    fn as_simplex_like(&self) -> Option<&dyn SimplexLike> {
        None
    }
}

/// Polytope `{x >= 0, Ax = b}` whose vertices are 0/1 vectors.
pub trait SimplexLike: FeasibleRegion {
    /// Vertex maximizing `<c, v>` among vertices supported inside `supp(x)`.
    fn away_vertex(&self, c: &Point, x: &Point) -> Point;
    /// `||Ax - b||_inf`.
    fn constraint_residual(&self, x: &Point) -> f64;
}
