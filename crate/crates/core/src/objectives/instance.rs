use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::quadratic::QuadraticObjective;
use super::reference::cached_reference;
use crate::base::{seeded_rng, FeasibleRegion, Objective, Point, Problem};
use crate::error::{Error, Result};
use crate::regions::{lp_norm, project_onto_simplex, LpBall, ProbabilitySimplex};

/// Where the unconstrained minimizer sits relative to the region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Location {
    Interior,
    Boundary,
    Exterior,
    /// Simplex only: target `rho` on the last `floor(d/2)` coordinates.
    Face(f64),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Interior => f.write_str("interior"),
            Location::Boundary => f.write_str("boundary"),
            Location::Exterior => f.write_str("exterior"),
            Location::Face(rho) => write!(f, "face:{rho}"),
        }
    }
}

impl FromStr for Location {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "interior" => Ok(Location::Interior),
            "boundary" => Ok(Location::Boundary),
            "exterior" => Ok(Location::Exterior),
            other => match other.strip_prefix("face:") {
                Some(rho) => rho
                    .parse()
                    .map(Location::Face)
                    .map_err(|_| format!("bad face parameter in {s:?}")),
                None => Err(format!(
                    "unknown location {s:?}; expected interior, boundary, exterior or face:<rho>"
                )),
            },
        }
    }
}

impl Serialize for Location {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Location {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Region block of an instance config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RegionSpec {
    LpBall { p: f64, radius: f64, dimension: usize },
    Simplex { dimension: usize },
    /// Simplex-like polytope; the probability simplex is the shipped instance.
    Slp { dimension: usize },
}

impl RegionSpec {
    pub fn dimension(&self) -> usize {
        match *self {
            RegionSpec::LpBall { dimension, .. }
            | RegionSpec::Simplex { dimension }
            | RegionSpec::Slp { dimension } => dimension,
        }
    }

    pub fn build(&self) -> Result<Arc<dyn FeasibleRegion>> {
        Ok(match *self {
            RegionSpec::LpBall { p, radius, dimension } => Arc::new(LpBall::new(p, radius, dimension)?),
            RegionSpec::Simplex { dimension } | RegionSpec::Slp { dimension } => {
                if dimension == 0 {
                    return Err(Error::InvalidInput("simplex dimension must be positive".into()));
                }
                Arc::new(ProbabilitySimplex::new(dimension))
            }
        })
    }

    fn is_simplex(&self) -> bool {
        !matches!(self, RegionSpec::LpBall { .. })
    }
}

/// Seeded description of one least-squares instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub location: Location,
    pub dimension: usize,
    pub seed: u64,
    pub region: RegionSpec,
}

impl InstanceSpec {
    pub fn new(location: Location, seed: u64, region: RegionSpec) -> Self {
        InstanceSpec {
            location,
            dimension: region.dimension(),
            seed,
            region,
        }
    }

    fn cache_key(&self) -> String {
        format!("{self:?}")
    }
}

/// A generated instance: objective, region and the unconstrained target.
#[derive(Clone)]
pub struct Instance {
    pub spec: InstanceSpec,
    pub objective: Arc<QuadraticObjective>,
    pub region: Arc<dyn FeasibleRegion>,
    /// Unconstrained minimizer `x_hat` with `b = A x_hat`.
    pub target: Point,
    /// Row-space direction certifying that every unconstrained minimizer of
    /// a rank-deficient exterior instance lies outside the region.
    certificate: Option<Point>,
}

/// Indicator of the last `floor(d/2)` coordinates.
fn upper_half(d: usize) -> Point {
    Point::from_fn(d, |i, _| if i >= d - d / 2 { 1.0 } else { 0.0 })
}

fn normal_vector(rng: &mut crate::base::SeededRng, d: usize) -> Point {
    Point::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal))
}

/// Builds the objective and region described by `spec`.
///
/// Simplex instances use `A = I` with targets `(1/d) 1` (interior), the
/// uniform point on the upper half (boundary), twice the upper-half
/// indicator (exterior) and `rho` times it (face). Ball instances draw
/// `A = I + 0.1 G`; exterior ball instances zero the last `ceil(d/2)` rows of
/// `A` so the objective is merely convex.
pub fn generate_instance(spec: &InstanceSpec) -> Result<Instance> {
    let d = spec.dimension;
    if d != spec.region.dimension() {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: spec.region.dimension(),
        });
    }
    let region = spec.region.build()?;
    let tag = format!("{}-seed{}", spec.location, spec.seed);
    let mut certificate = None;
    let (objective, target) = if spec.region.is_simplex() {
        if d < 2 && spec.location != Location::Interior {
            return Err(Error::InvalidInput("simplex boundary targets need d >= 2".into()));
        }
        let half = upper_half(d);
        let target = match spec.location {
            Location::Interior => Point::from_element(d, 1.0 / d as f64),
            Location::Boundary => &half / (d / 2) as f64,
            Location::Exterior => &half * 2.0,
            Location::Face(rho) if rho > 0.0 => &half * rho,
            Location::Face(rho) => {
                return Err(Error::InvalidInput(format!("face parameter must be positive, got {rho}")))
            }
        };
        let f = QuadraticObjective::scaled_identity(1.0, target.clone());
        (f, target)
    } else {
        let RegionSpec::LpBall { p, radius, .. } = spec.region else {
            unreachable!()
        };
        if let Location::Face(_) = spec.location {
            return Err(Error::InvalidInput("face locations need a simplex region".into()));
        }
        let mut rng = seeded_rng(spec.seed);
        let g = DMatrix::from_fn(d, d, |_, _| rng.sample::<f64, _>(StandardNormal));
        let mut a = DMatrix::identity(d, d) + g * 0.1;
        let target = match spec.location {
            Location::Interior | Location::Boundary => {
                let u = normal_vector(&mut rng, d);
                let u = &u / lp_norm(&u, p);
                let scale = if spec.location == Location::Interior { 0.5 } else { 1.0 };
                u * (scale * radius)
            }
            _ => {
                for i in d - d.div_ceil(2)..d {
                    a.row_mut(i).fill(0.0);
                }
                let w = normal_vector(&mut rng, d);
                let u = a.tr_mul(&w);
                let q = if p == 1.0 { f64::INFINITY } else { p / (p - 1.0) };
                let dual = if q.is_infinite() { u.amax() } else { lp_norm(&u, q) };
                let s = 2.0 * radius * dual / u.norm_squared();
                certificate = Some(u.clone());
                u * s
            }
        };
        let b = &a * &target;
        (QuadraticObjective::new(a, b)?.with_seed(spec.seed), target)
    };
    let objective = objective.with_label(format!("quadratic({tag},d={d})"));
    let inst = Instance {
        spec: spec.clone(),
        objective: Arc::new(objective),
        region,
        target,
        certificate,
    };
    inst.verify_location()?;
    Ok(inst)
}

impl Instance {
    /// Checks that the unconstrained minimizer sits where `location` says,
    /// with tolerance `1e-8`.
    pub fn verify_location(&self) -> Result<()> {
        const TOL: f64 = 1e-8;
        let x = &self.target;
        let fail = |what: &str| Err(Error::InvalidInput(format!("{}: {what}", self.objective.label())));
        match (&self.spec.region, self.spec.location) {
            (RegionSpec::LpBall { p, radius, .. }, loc) => {
                let dist = lp_norm(x, *p);
                let ok = match loc {
                    Location::Interior => dist <= radius - TOL,
                    Location::Boundary => (dist - radius).abs() <= TOL * radius.max(1.0),
                    Location::Exterior => {
                        // every minimizer y satisfies <u, y> = <u, x_hat>, so
                        // ||y||_p >= <u, x_hat> / ||u||_q
                        let u = self.certificate.as_ref().expect("exterior certificate");
                        let q = if *p == 1.0 { f64::INFINITY } else { p / (p - 1.0) };
                        let dual = if q.is_infinite() { u.amax() } else { lp_norm(u, q) };
                        u.dot(x) / dual >= radius + TOL
                    }
                    Location::Face(_) => false,
                };
                if ok {
                    Ok(())
                } else {
                    fail(&format!("target at lp distance {dist} does not match {loc}"))
                }
            }
            (_, loc) => {
                let d = x.len();
                let inside = x.iter().all(|&v| v >= -TOL) && (x.sum() - 1.0).abs() <= TOL;
                let ok = match loc {
                    Location::Interior => inside && x.min() > TOL,
                    Location::Boundary => inside && x.min().abs() <= TOL,
                    Location::Exterior => !inside,
                    Location::Face(_) => {
                        let proj = project_onto_simplex(x);
                        (0..d).all(|i| (proj[i] > TOL) == (i >= d - d / 2))
                    }
                };
                if ok {
                    Ok(())
                } else {
                    fail(&format!("target does not match {loc}"))
                }
            }
        }
    }

    /// The instance with its (cached) reference optimum.
    pub fn problem(&self) -> Result<Problem> {
        let reference = cached_reference(&self.spec.cache_key(), &self.objective, self.region.as_ref())?;
        Ok(Problem::new(
            self.objective.clone() as Arc<dyn Objective>,
            self.region.clone(),
            reference,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simplex(d: usize) -> RegionSpec {
        RegionSpec::Simplex { dimension: d }
    }

    #[test]
    fn location_strings() {
        for s in ["interior", "boundary", "exterior", "face:0.25"] {
            assert_eq!(s.parse::<Location>().unwrap().to_string(), s);
        }
        assert!("middle".parse::<Location>().is_err());
    }

    #[test]
    fn simplex_targets() {
        let inst = generate_instance(&InstanceSpec::new(Location::Exterior, 0, simplex(4))).unwrap();
        assert_eq!(inst.target.as_slice(), &[0.0, 0.0, 2.0, 2.0]);
        let inst = generate_instance(&InstanceSpec::new(Location::Boundary, 0, simplex(100))).unwrap();
        assert_eq!(inst.target[99], 0.02);
        assert_eq!(inst.target[49], 0.0);
        let inst = generate_instance(&InstanceSpec::new(Location::Face(0.25), 0, simplex(100))).unwrap();
        assert_eq!(inst.target[60], 0.25);
    }

    #[test]
    fn ball_locations_verify() {
        for p in [1.0, 2.0, 3.0, 5.0] {
            for loc in [Location::Interior, Location::Boundary, Location::Exterior] {
                let region = RegionSpec::LpBall {
                    p,
                    radius: 1.0,
                    dimension: 12,
                };
                let inst = generate_instance(&InstanceSpec::new(loc, 5, region)).unwrap();
                inst.verify_location().unwrap();
                let merely_convex = inst.objective.strong_convexity().is_none();
                assert_eq!(merely_convex, loc == Location::Exterior, "p={p} {loc}");
            }
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let spec = InstanceSpec::new(
            Location::Interior,
            42,
            RegionSpec::LpBall {
                p: 2.0,
                radius: 1.0,
                dimension: 8,
            },
        );
        let a = generate_instance(&spec).unwrap();
        let b = generate_instance(&spec).unwrap();
        assert_eq!(a.objective, b.objective);
        assert_eq!(a.target, b.target);
    }

    #[test]
    fn rejects_mismatches() {
        let mut spec = InstanceSpec::new(Location::Interior, 0, simplex(4));
        spec.dimension = 5;
        assert!(matches!(generate_instance(&spec), Err(Error::DimensionMismatch { .. })));
        let ball = RegionSpec::LpBall {
            p: 2.0,
            radius: 1.0,
            dimension: 4,
        };
        assert!(generate_instance(&InstanceSpec::new(Location::Face(0.5), 0, ball)).is_err());
    }
}
