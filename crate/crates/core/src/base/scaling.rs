//! Scaling inequalities as checkable `lhs >= rhs` pairs.
//!
//! Each function evaluates both sides at a given point so property tests can
//! confirm the inequality numerically.

use super::{Heb, Point, UniformConvexity};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inequality {
    pub lhs: f64,
    pub rhs: f64,
}

impl Inequality {
    pub fn holds(&self, tol: f64) -> bool {
        self.lhs >= self.rhs - tol
    }
}

/// Interior-optimum scaling: `<g, x-p>/||x-p|| >= (beta/delta) ||g||` for `x`
/// within `beta` of an optimum whose `beta`-ball (in the affine hull) is
/// feasible. For regions that are not full-dimensional pass the gradient
/// component parallel to the affine hull.
pub fn interior(grad: &Point, x: &Point, p: &Point, beta: f64, delta: f64) -> Inequality {
    let d = x - p;
    let n = d.norm();
    let lhs = if n == 0.0 { 0.0 } else { grad.dot(&d) / n };
    Inequality {
        lhs,
        rhs: beta / delta * grad.norm(),
    }
}

/// Error-bound scaling: `<g, x-x*>/||x-x*|| >= h^(1-theta)/mu`.
pub fn error_bound(grad: &Point, x: &Point, xstar: &Point, h: f64, heb: Heb) -> Inequality {
    let d = x - xstar;
    let n = d.norm();
    let lhs = if n == 0.0 { 0.0 } else { grad.dot(&d) / n };
    Inequality {
        lhs,
        rhs: h.max(0.0).powf(1.0 - heb.theta) / heb.mu,
    }
}

/// Uniformly convex region scaling:
/// `<g, x-p>/||x-p||^2 >= (alpha/2 ||g||)^(2/q) h^(1-2/q)`.
pub fn uniform(grad: &Point, x: &Point, p: &Point, h: f64, uc: UniformConvexity) -> Inequality {
    let d = x - p;
    let n2 = d.norm_squared();
    let lhs = if n2 == 0.0 { f64::INFINITY } else { grad.dot(&d) / n2 };
    let e = 2.0 / uc.q;
    Inequality {
        lhs,
        rhs: (uc.alpha / 2.0 * grad.norm()).powf(e) * h.max(0.0).powf(1.0 - e),
    }
}

/// Sign part of the away-step scaling: `<g, p_away - p_fw> >= 0`.
pub fn away_sign(grad: &Point, p_away: &Point, p_fw: &Point) -> Inequality {
    Inequality {
        lhs: grad.dot(&(p_away - p_fw)),
        rhs: 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_bound_on_a_bowl() {
        // f = 1/2 ||x||^2, x* = 0: lhs = ||x|| = 5, rhs = sqrt(12.5)/sqrt(2) = 2.5
        let x = Point::from_vec(vec![3.0, 4.0]);
        let h = 12.5;
        let heb = Heb {
            mu: 2f64.sqrt(),
            theta: 0.5,
        };
        let ineq = error_bound(&x, &x, &Point::zeros(2), h, heb);
        assert!((ineq.lhs - 5.0).abs() < 1e-12);
        assert!((ineq.rhs - 2.5).abs() < 1e-12);
        assert!(ineq.holds(1e-12));
    }

    #[test]
    fn uniform_on_the_unit_disc_boundary_is_tight() {
        // x on the unit circle with a tangent gradient
        let x = Point::from_vec(vec![1.0, 0.0]);
        let g = Point::from_vec(vec![0.0, 1.0]);
        let p = Point::from_vec(vec![0.0, -1.0]);
        let uc = UniformConvexity { alpha: 1.0, q: 2.0 };
        let ineq = uniform(&g, &x, &p, 0.3, uc);
        // lhs = 1/2, rhs = (1/2 * 1)^1 * h^0
        assert!((ineq.lhs - 0.5).abs() < 1e-15);
        assert!((ineq.rhs - 0.5).abs() < 1e-15);
    }
}
