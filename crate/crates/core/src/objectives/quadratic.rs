use nalgebra::DMatrix;

use super::eigen::{largest_eigenvalue, smallest_eigenvalue};
use crate::base::{Objective, Point};
use crate::error::{Error, Result};

/// The matrix `A` of `1/2 ||Ax - b||^2`.
#[derive(Debug, Clone, PartialEq)]
pub enum Design {
    /// `A = s I`.
    ScaledIdentity(f64),
    Dense(DMatrix<f64>),
}

/// `f(x) = 1/2 ||Ax - b||^2` with its curvature extremes.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticObjective {
    design: Design,
    b: Point,
    /// `A^T A` for dense designs.
    gram: Option<DMatrix<f64>>,
    /// `A^T b`.
    atb: Point,
    smoothness: f64,
    strong_convexity: f64,
    seed: Option<u64>,
    label: String,
}

impl QuadraticObjective {
    pub fn new(a: DMatrix<f64>, b: Point) -> Result<Self> {
        if !a.is_square() || a.nrows() != b.len() {
            return Err(Error::DimensionMismatch {
                expected: a.nrows(),
                got: b.len(),
            });
        }
        if a.iter().chain(b.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite design or target".into()));
        }
        let gram = a.transpose() * &a;
        let atb = a.tr_mul(&b);
        let smoothness = largest_eigenvalue(&gram);
        let strong_convexity = smallest_eigenvalue(&gram, smoothness);
        Ok(QuadraticObjective {
            label: format!("quadratic(d={})", b.len()),
            design: Design::Dense(a),
            b,
            gram: Some(gram),
            atb,
            smoothness,
            strong_convexity,
            seed: None,
        })
    }

    /// `1/2 ||s x - b||^2`.
    pub fn scaled_identity(s: f64, b: Point) -> Self {
        assert!(s.is_finite() && s != 0.0, "scale must be finite and nonzero");
        QuadraticObjective {
            label: format!("quadratic(A={s}I,d={})", b.len()),
            atb: &b * s,
            design: Design::ScaledIdentity(s),
            b,
            gram: None,
            smoothness: s * s,
            strong_convexity: s * s,
            seed: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn design(&self) -> &Design {
        &self.design
    }

    pub fn target(&self) -> &Point {
        &self.b
    }

    /// `A^T b`.
    pub fn atb(&self) -> &Point {
        &self.atb
    }

    /// `A^T A` as a dense matrix.
    pub fn gram(&self) -> DMatrix<f64> {
        match (&self.design, &self.gram) {
            (_, Some(g)) => g.clone(),
            (Design::ScaledIdentity(s), None) => DMatrix::identity(self.b.len(), self.b.len()) * (s * s),
            (Design::Dense(a), None) => a.transpose() * a,
        }
    }

    /// `A v`.
    pub fn apply(&self, v: &Point) -> Point {
        match &self.design {
            Design::ScaledIdentity(s) => v * *s,
            Design::Dense(a) => a * v,
        }
    }

    /// `A^T v`.
    pub fn apply_transpose(&self, v: &Point) -> Point {
        match &self.design {
            Design::ScaledIdentity(s) => v * *s,
            Design::Dense(a) => a.tr_mul(v),
        }
    }

    /// `A^T A v`.
    pub fn apply_gram(&self, v: &Point) -> Point {
        match (&self.design, &self.gram) {
            (Design::ScaledIdentity(s), _) => v * (s * s),
            (_, Some(g)) => g * v,
            (Design::Dense(_), None) => self.apply_transpose(&self.apply(v)),
        }
    }
}

impl Objective for QuadraticObjective {
    fn dimension(&self) -> usize {
        self.b.len()
    }

    fn value(&self, x: &Point) -> f64 {
        0.5 * (self.apply(x) - &self.b).norm_squared()
    }

    fn gradient(&self, x: &Point) -> Point {
        self.apply_gram(x) - &self.atb
    }

    fn smoothness(&self) -> f64 {
        self.smoothness
    }

    fn strong_convexity(&self) -> Option<f64> {
        (self.strong_convexity > 0.0).then_some(self.strong_convexity)
    }

    fn exact_line_step(&self, _x: &Point, grad: &Point, d: &Point, cap: f64) -> Option<f64> {
        let slope = -grad.dot(d);
        if slope <= 0.0 {
            return Some(0.0);
        }
        let curvature = self.apply(d).norm_squared();
        Some(if curvature <= 0.0 {
            cap
        } else {
            (slope / curvature).min(cap)
        })
    }

    /// `<grad f(y), x - y> + 1/2 ||A (x - y)||^2`, exact for quadratics.
    fn value_difference(&self, x: &Point, y: &Point) -> f64 {
        let delta = x - y;
        self.gradient(y).dot(&delta) + 0.5 * self.apply(&delta).norm_squared()
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}
