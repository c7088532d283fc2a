use std::fmt;
use std::str::FromStr;

use super::{Objective, Point};
use crate::error::StepError;

/// Step-size rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepRule {
    /// `ell / (t + ell)`.
    OpenLoop { ell: u32 },
    /// Exact minimization of the objective along the step segment.
    LineSearch,
    /// Minimizer of the smoothness upper bound.
    ShortStep,
    /// A fixed step in `(0, 1]`.
    Constant { eta: f64 },
}

impl StepRule {
    pub fn validate(&self) -> Result<(), StepError> {
        match *self {
            StepRule::Constant { eta } if !(eta > 0.0 && eta <= 1.0) => {
                Err(StepError::ConstantOutOfRange(eta))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for StepRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepRule::OpenLoop { ell } => write!(f, "openloop:{ell}"),
            StepRule::LineSearch => f.write_str("linesearch"),
            StepRule::ShortStep => f.write_str("shortstep"),
            StepRule::Constant { eta } => write!(f, "constant:{eta}"),
        }
    }
}

impl FromStr for StepRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        match (head, arg) {
            ("openloop", Some(a)) => {
                let ell: u32 = a.parse().map_err(|_| format!("bad ell in {s:?}"))?;
                if ell == 0 {
                    return Err("openloop needs ell >= 1".into());
                }
                Ok(StepRule::OpenLoop { ell })
            }
            ("linesearch", None) => Ok(StepRule::LineSearch),
            ("shortstep", None) => Ok(StepRule::ShortStep),
            ("constant", Some(a)) => {
                let eta: f64 = a.parse().map_err(|_| format!("bad eta in {s:?}"))?;
                let rule = StepRule::Constant { eta };
                rule.validate().map_err(|e| e.to_string())?;
                Ok(rule)
            }
            _ => Err(format!(
                "unknown rule {s:?}; expected openloop:<ell>, linesearch, shortstep or constant:<eta>"
            )),
        }
    }
}

/// `ell / (t + ell)`.
pub fn open_loop(ell: u32, t: usize) -> f64 {
    let ell = ell as f64;
    ell / (t as f64 + ell)
}

/// Inputs for one step-length evaluation along `x + s * direction`, `s in [0, cap]`.
pub struct StepContext<'a> {
    pub x: &'a Point,
    pub gradient: &'a Point,
    pub direction: &'a Point,
    pub cap: f64,
    pub objective: &'a dyn Objective,
}

/// Step length for iteration `t`. For Frank-Wolfe the direction is `p - x`
/// and the cap is 1.
pub fn step_length(rule: &StepRule, t: usize, ctx: &StepContext<'_>) -> Result<f64, StepError> {
    let cap = ctx.cap;
    match *rule {
        StepRule::OpenLoop { ell } => Ok(open_loop(ell, t).min(cap)),
        StepRule::Constant { eta } => {
            rule.validate()?;
            Ok(eta.min(cap))
        }
        StepRule::ShortStep => {
            let dd = ctx.direction.norm_squared();
            if dd == 0.0 {
                return Err(StepError::DegenerateDirection);
            }
            let slope = -ctx.gradient.dot(ctx.direction);
            let l = ctx.objective.smoothness();
            Ok((slope / (l * dd)).clamp(0.0, cap))
        }
        StepRule::LineSearch => {
            if let Some(s) = ctx
                .objective
                .exact_line_step(ctx.x, ctx.gradient, ctx.direction, cap)
            {
                return Ok(s);
            }
            let phi = |s: f64| ctx.objective.value(&(ctx.x + ctx.direction * s));
            let s = golden_section(phi, 0.0, cap, 1e-12);
            if s.is_finite() {
                Ok(s)
            } else {
                Err(StepError::LineSearchFailed)
            }
        }
    }
}

/// Golden-section search for a minimizer of a unimodal `phi` on `[lo, hi]`.
/// Endpoints are compared against the interior estimate so that boundary
/// minimizers are returned exactly.
pub fn golden_section(phi: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (phi(c), phi(d));
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = phi(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = phi(d);
        }
    }
    let mid = 0.5 * (a + b);
    let candidates = [(lo, phi(lo)), (mid, phi(mid)), (hi, phi(hi))];
    let mut best = candidates[0];
    for &(s, v) in &candidates[1..] {
        if v < best.1 {
            best = (s, v);
        }
    }
    best.0
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Bowl;
    impl Objective for Bowl {
        fn dimension(&self) -> usize {
            2
        }
        fn value(&self, x: &Point) -> f64 {
            0.5 * x.norm_squared()
        }
        fn gradient(&self, x: &Point) -> Point {
            x.clone()
        }
        fn smoothness(&self) -> f64 {
            1.0
        }
        fn strong_convexity(&self) -> Option<f64> {
            Some(1.0)
        }
        fn label(&self) -> String {
            "bowl".into()
        }
    }

    fn ctx<'a>(x: &'a Point, g: &'a Point, d: &'a Point) -> StepContext<'a> {
        StepContext {
            x,
            gradient: g,
            direction: d,
            cap: 1.0,
            objective: &Bowl,
        }
    }

    #[test]
    fn open_loop_values() {
        let x = Point::from_vec(vec![1.0, 0.0]);
        let d = Point::from_vec(vec![-1.0, 0.0]);
        let c = ctx(&x, &x, &d);
        assert_eq!(step_length(&StepRule::OpenLoop { ell: 4 }, 0, &c).unwrap(), 1.0);
        assert_eq!(step_length(&StepRule::OpenLoop { ell: 2 }, 2, &c).unwrap(), 0.5);
    }

    #[test]
    fn short_step_substitution() {
        // gradient (1,0), x - p = (1,0), L = 1
        let x = Point::from_vec(vec![1.0, 0.0]);
        let g = Point::from_vec(vec![1.0, 0.0]);
        let d = Point::from_vec(vec![-1.0, 0.0]);
        let s = step_length(&StepRule::ShortStep, 0, &ctx(&x, &g, &d)).unwrap();
        assert_eq!(s, 1.0);
    }

    #[test]
    fn short_step_degenerate() {
        let x = Point::from_vec(vec![1.0, 0.0]);
        let d = Point::zeros(2);
        let r = step_length(&StepRule::ShortStep, 0, &ctx(&x, &x, &d));
        assert_eq!(r, Err(StepError::DegenerateDirection));
    }

    #[test]
    fn constant_from_geometry() {
        let (alpha, lambda, l) = (1.0, 0.5, 1.0);
        let rule = StepRule::Constant {
            eta: alpha * lambda / (2.0 * l),
        };
        let x = Point::from_vec(vec![1.0, 0.0]);
        let d = Point::from_vec(vec![-1.0, 0.0]);
        assert_eq!(step_length(&rule, 7, &ctx(&x, &x, &d)).unwrap(), 0.25);
        assert!(StepRule::Constant { eta: 1.5 }.validate().is_err());
        assert!(StepRule::Constant { eta: 0.0 }.validate().is_err());
    }

    #[test]
    fn golden_section_matches_closed_form() {
        // f(x + s d) with x = (1, 0), d = (-2, 1): minimizer s = 2/5
        let x = Point::from_vec(vec![1.0, 0.0]);
        let d = Point::from_vec(vec![-2.0, 1.0]);
        let s = step_length(&StepRule::LineSearch, 0, &ctx(&x, &x, &d)).unwrap();
        assert!((s - 0.4).abs() < 1e-7, "{s}");
    }

    #[test]
    fn golden_section_hits_endpoints() {
        assert_eq!(golden_section(|s| s, 0.0, 1.0, 1e-12), 0.0);
        assert_eq!(golden_section(|s| -s, 0.0, 1.0, 1e-12), 1.0);
    }

    #[test]
    fn rule_strings_round_trip() {
        for s in ["openloop:4", "linesearch", "shortstep", "constant:0.25"] {
            let r: StepRule = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert!("openloop:0".parse::<StepRule>().is_err());
        assert!("constant:2".parse::<StepRule>().is_err());
        assert!("wolfe".parse::<StepRule>().is_err());
    }
}
