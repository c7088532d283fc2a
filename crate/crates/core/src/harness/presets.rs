use std::path::PathBuf;

use super::config::{Algorithm, ExperimentConfig};
use crate::error::{Error, Result};
use crate::objectives::{InstanceSpec, Location, RegionSpec};

pub const PRESETS: [&str; 5] = ["nonpolytope", "wolfe", "afw-difw", "local-rate", "herding"];

/// Iteration budget of the polytope and ball presets.
pub fn budget(full: bool) -> usize {
    if full {
        100_000
    } else {
        10_000
    }
}

/// Dimensions swept by the `local-rate` preset and its iteration count.
pub fn local_rate_grid(full: bool) -> (Vec<usize>, usize) {
    if full {
        ((10..=1000).step_by(10).collect(), 1000)
    } else {
        (vec![10, 20, 50, 100], 2000)
    }
}

fn strings(rules: &[&str]) -> Vec<String> {
    rules.iter().map(|s| s.to_string()).collect()
}

fn config(
    name: String,
    algorithm: Algorithm,
    rules: &[&str],
    iterations: usize,
    output: &str,
    instance: InstanceSpec,
) -> ExperimentConfig {
    ExperimentConfig {
        name,
        algorithm,
        rules: strings(rules),
        iterations,
        seed: instance.seed,
        output: PathBuf::from(output),
        density: None,
        instance: Some(instance),
    }
}

fn simplex(location: Location, d: usize) -> InstanceSpec {
    InstanceSpec::new(location, 0, RegionSpec::Simplex { dimension: d })
}

/// The experiment batch behind a named figure.
pub fn figure_preset(name: &str, full: bool) -> Result<Vec<ExperimentConfig>> {
    let d = 100;
    let iters = budget(full);
    let configs = match name {
        "nonpolytope" => {
            let panels = [
                (1.0, Location::Interior),
                (2.0, Location::Interior),
                (5.0, Location::Interior),
                (2.0, Location::Boundary),
                (3.0, Location::Boundary),
                (5.0, Location::Boundary),
                (2.0, Location::Exterior),
                (3.0, Location::Exterior),
                (5.0, Location::Exterior),
            ];
            panels
                .into_iter()
                .map(|(p, loc)| {
                    let mut rules = vec!["linesearch", "shortstep", "openloop:1", "openloop:2", "openloop:4"];
                    if loc == Location::Exterior {
                        rules.extend(["openloop:6", "constant"]);
                    }
                    let region = RegionSpec::LpBall {
                        p,
                        radius: 1.0,
                        dimension: d,
                    };
                    config(
                        format!("l{p}_{loc}"),
                        Algorithm::Fw,
                        &rules,
                        iters,
                        "nonpolytope",
                        InstanceSpec::new(loc, 0, region),
                    )
                })
                .collect()
        }
        "wolfe" => [("quarter", 0.25), ("two", 2.0)]
            .into_iter()
            .map(|(tag, rho)| {
                config(
                    format!("rho_{tag}"),
                    Algorithm::Fw,
                    &["linesearch", "openloop:1", "openloop:2", "openloop:4"],
                    iters,
                    "wolfe",
                    simplex(Location::Face(rho), d),
                )
            })
            .collect(),
        "afw-difw" => {
            let mut out = Vec::new();
            for loc in [Location::Interior, Location::Boundary, Location::Exterior] {
                out.push(config(
                    format!("afw_{loc}"),
                    Algorithm::Afw,
                    &["linesearch", "openloop:2", "openloop:4"],
                    iters,
                    "afw-difw",
                    simplex(loc, d),
                ));
                out.push(config(
                    format!("difw_{loc}"),
                    Algorithm::Difw,
                    &["linesearch", "openloop:2", "openloop:4", "openloop:8"],
                    iters,
                    "afw-difw",
                    simplex(loc, d),
                ));
            }
            out
        }
        "local-rate" => {
            let (dims, iters) = local_rate_grid(full);
            let mut out = Vec::new();
            for (family, loc) in [("interior", Location::Interior), ("face", Location::Exterior)] {
                for &dim in &dims {
                    out.push(config(
                        format!("{family}_d{dim}"),
                        Algorithm::Fw,
                        &["openloop:4"],
                        iters,
                        "local-rate",
                        simplex(loc, dim),
                    ));
                }
            }
            out
        }
        "herding" => ["uniform", "random"]
            .into_iter()
            .map(|density| ExperimentConfig {
                name: density.to_string(),
                algorithm: Algorithm::Herding,
                rules: strings(&["openloop:1", "openloop:2", "openloop:4", "linesearch"]),
                iterations: 1000,
                seed: 0,
                output: PathBuf::from("herding"),
                density: Some(density.to_string()),
                instance: None,
            })
            .collect(),
        _ => {
            return Err(Error::Config(format!(
                "unknown preset {name:?}; expected one of {}",
                PRESETS.join(", ")
            )))
        }
    };
    Ok(configs)
}
