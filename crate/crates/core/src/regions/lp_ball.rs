use rand::Rng;
use rand_distr::StandardNormal;

use crate::base::{unit, FeasibleRegion, Point, SeededRng, UniformConvexity};
use crate::error::{Error, Result};

/// `||v||_p`, computed with max-scaling so large exponents do not overflow.
pub fn lp_norm(v: &Point, p: f64) -> f64 {
    let m = v.amax();
    if m == 0.0 {
        return 0.0;
    }
    if p == 1.0 {
        return v.iter().map(|x| x.abs()).sum();
    }
    if p == 2.0 {
        return v.norm();
    }
    m * v.iter().map(|x| (x.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
}

/// Minimizer of `<c, x>` over `{x : ||x - center||_p <= radius}`.
///
/// A zero cost returns the center.
pub fn lp_ball_lmo(c: &Point, p: f64, radius: f64, center: &Point) -> Point {
    let m = c.amax();
    if m == 0.0 {
        return center.clone();
    }
    if p == 1.0 {
        let mut i = 0;
        for (j, v) in c.iter().enumerate() {
            if v.abs() > c[i].abs() {
                i = j;
            }
        }
        let mut x = center.clone();
        x[i] -= radius * c[i].signum();
        return x;
    }
    let e = 1.0 / (p - 1.0);
    let v = c.map(|ci| (ci / m).signum() * (ci.abs() / m).powf(e));
    let n = lp_norm(&v, p);
    center - v * (radius / n)
}

/// Ball of radius `radius` around `center` in the lp norm, `p >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpBall {
    p: f64,
    radius: f64,
    center: Point,
}

impl LpBall {
    pub fn new(p: f64, radius: f64, dimension: usize) -> Result<Self> {
        Self::with_center(p, radius, Point::zeros(dimension))
    }

    pub fn with_center(p: f64, radius: f64, center: Point) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) || !(radius > 0.0 && radius.is_finite()) || center.is_empty() {
            return Err(Error::InvalidInput(format!(
                "lp ball needs finite p >= 1, radius > 0, d >= 1 (p={p}, r={radius}, d={})",
                center.len()
            )));
        }
        Ok(LpBall { p, radius, center })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    /// `||x - center||_p`.
    pub fn distance_from_center(&self, x: &Point) -> f64 {
        lp_norm(&(x - &self.center), self.p)
    }

    /// Largest `||v||_2 / ||v||_p` over nonzero `v`.
    fn euclid_per_lp(&self) -> f64 {
        let d = self.center.len() as f64;
        d.powf(0.5 - 1.0 / self.p).max(1.0)
    }

    /// Largest `||v||_p / ||v||_2` over nonzero `v`.
    fn lp_per_euclid(&self) -> f64 {
        let d = self.center.len() as f64;
        d.powf(1.0 / self.p - 0.5).max(1.0)
    }
}

impl FeasibleRegion for LpBall {
    fn dimension(&self) -> usize {
        self.center.len()
    }

    fn lmo(&self, c: &Point) -> Point {
        lp_ball_lmo(c, self.p, self.radius, &self.center)
    }

    fn diameter(&self) -> f64 {
        2.0 * self.radius * self.euclid_per_lp()
    }

    /// For `p` in `(1, 2]` the modulus `(p - 1)/r` is an approximation. For
    /// `p > 2` the modulus follows from the scalar inequality
    /// `g|a|^p + (1-g)|b|^p - |ga + (1-g)b|^p >= 2^(2-p) g(1-g)|a-b|^p`
    /// and the comparison `||v||_p >= d^(1/p - 1/2) ||v||_2`.
    fn uniform_convexity(&self) -> Option<UniformConvexity> {
        let (p, r) = (self.p, self.radius);
        if p == 1.0 {
            None
        } else if p <= 2.0 {
            Some(UniformConvexity {
                alpha: (p - 1.0) / r,
                q: 2.0,
            })
        } else {
            let d = self.center.len() as f64;
            Some(UniformConvexity {
                alpha: 2f64.powf(3.0 - p) * d.powf(1.0 - p / 2.0) / (p * r.powf(p - 1.0)),
                q: p,
            })
        }
    }

    fn contains(&self, x: &Point, tol: f64) -> bool {
        x.len() == self.center.len() && self.distance_from_center(x) <= self.radius + tol
    }

    fn inner_radius(&self, x: &Point) -> f64 {
        let slack = self.radius - self.distance_from_center(x);
        if slack <= 0.0 {
            0.0
        } else {
            slack / self.lp_per_euclid()
        }
    }

    fn default_start(&self) -> Point {
        &self.center + unit(self.center.len(), 0) * self.radius
    }

    fn sample(&self, rng: &mut SeededRng) -> Point {
        let d = self.center.len();
        let g = Point::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal));
        let scale = self.radius * rng.gen::<f64>() / lp_norm(&g, self.p);
        &self.center + g * scale
    }

    fn euclidean_ball(&self) -> Option<(Point, f64)> {
        (self.p == 2.0).then(|| (self.center.clone(), self.radius))
    }

    fn euclidean_projection(&self, v: &Point) -> Option<Point> {
        if self.p != 2.0 {
            return None;
        }
        let off = v - &self.center;
        let n = off.norm();
        Some(if n <= self.radius {
            v.clone()
        } else {
            &self.center + off * (self.radius / n)
        })
    }

    fn label(&self) -> String {
        format!("lp_ball(p={},r={},d={})", self.p, self.radius, self.center.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::seeded_rng;

    fn pt(v: &[f64]) -> Point {
        Point::from_row_slice(v)
    }

    #[test]
    fn lmo_examples() {
        let x = lp_ball_lmo(&pt(&[3.0, -4.0]), 2.0, 1.0, &Point::zeros(2));
        assert!((x - pt(&[-0.6, 0.8])).amax() < 1e-15);
        let x = lp_ball_lmo(&pt(&[0.2, -5.0, 1.0]), 1.0, 1.0, &Point::zeros(3));
        assert_eq!(x, pt(&[0.0, 1.0, 0.0]));
        let x = lp_ball_lmo(&pt(&[1.0, 0.0]), 5.0, 2.0, &Point::zeros(2));
        assert_eq!(x, pt(&[-2.0, 0.0]));
    }

    #[test]
    fn lmo_ties_and_zero_cost() {
        let x = lp_ball_lmo(&pt(&[2.0, -2.0]), 1.0, 1.0, &Point::zeros(2));
        assert_eq!(x, pt(&[-1.0, 0.0]));
        let c = pt(&[1.0, 1.0]);
        assert_eq!(lp_ball_lmo(&Point::zeros(2), 3.0, 1.0, &c), c);
    }

    #[test]
    fn lmo_lands_on_the_sphere() {
        let mut rng = seeded_rng(3);
        for p in [1.0, 1.5, 2.0, 3.0, 5.0, 12.0] {
            let ball = LpBall::new(p, 1.7, 9).unwrap();
            for _ in 0..50 {
                let c = ball.sample(&mut rng);
                let v = ball.lmo(&c);
                assert!((ball.distance_from_center(&v) - 1.7).abs() < 1e-10, "p={p}");
            }
        }
    }

    #[test]
    fn euclidean_diameter() {
        let b = LpBall::new(5.0, 1.0, 100).unwrap();
        // corners (±1,...,±1) d^(-1/5) are at Euclidean distance 2 * 100^(0.3)
        assert!((b.diameter() - 2.0 * 100f64.powf(0.3)).abs() < 1e-12);
        assert_eq!(LpBall::new(1.0, 2.0, 100).unwrap().diameter(), 4.0);
    }

    #[test]
    fn euclidean_ball_modulus_is_inverse_radius() {
        let uc = LpBall::new(2.0, 4.0, 7).unwrap().uniform_convexity().unwrap();
        assert_eq!((uc.alpha, uc.q), (0.25, 2.0));
        assert!(LpBall::new(1.0, 1.0, 3).unwrap().uniform_convexity().is_none());
    }

    #[test]
    fn inner_radius_of_the_euclidean_ball_is_exact() {
        let b = LpBall::new(2.0, 2.0, 3).unwrap();
        assert!((b.inner_radius(&pt(&[1.0, 0.0, 0.0])) - 1.0).abs() < 1e-15);
        assert_eq!(b.inner_radius(&pt(&[3.0, 0.0, 0.0])), 0.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(LpBall::new(0.5, 1.0, 3).is_err());
        assert!(LpBall::new(2.0, 0.0, 3).is_err());
        assert!(LpBall::new(2.0, 1.0, 0).is_err());
    }
}
