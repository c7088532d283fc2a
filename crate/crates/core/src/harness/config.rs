use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::base::{Problem, StepRule};
use crate::error::{Error, Result};
use crate::herding::Density;
use crate::objectives::InstanceSpec;
use crate::solvers::constant_rule_for;

/// Environment variable that replaces every config seed when set.
pub const SEED_ENV: &str = "FW_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Fw,
    Afw,
    Difw,
    Herding,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Fw => "fw",
            Algorithm::Afw => "afw",
            Algorithm::Difw => "difw",
            Algorithm::Herding => "herding",
        })
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "fw" => Ok(Algorithm::Fw),
            "afw" => Ok(Algorithm::Afw),
            "difw" => Ok(Algorithm::Difw),
            "herding" => Ok(Algorithm::Herding),
            _ => Err(format!("unknown algorithm {s:?}; expected fw, afw, difw or herding")),
        }
    }
}

/// One experiment: an instance (or a density for herding) solved once per
/// listed rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub algorithm: Algorithm,
    /// `openloop:<ell>`, `linesearch`, `shortstep`, `constant:<eta>`, or
    /// `constant` for the step derived from the instance.
    pub rules: Vec<String>,
    pub iterations: usize,
    /// Seeds the instance generator (replacing `instance.seed`) and random
    /// densities.
    pub seed: u64,
    /// Output directory for the trace CSVs, relative to the batch directory.
    pub output: PathBuf,
    /// `uniform`, `fourier:<file>`, `random` or `random:<seed>[:<degree>]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<InstanceSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    experiment: Vec<ExperimentConfig>,
}

impl ExperimentConfig {
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads either a single experiment or an `[[experiment]]` list.
    pub fn parse_many(text: &str) -> Result<Vec<Self>> {
        if let Ok(file) = toml::from_str::<ConfigFile>(text) {
            for cfg in &file.experiment {
                cfg.validate()?;
            }
            return Ok(file.experiment);
        }
        Ok(vec![ExperimentConfig::from_toml(text)?])
    }

    pub fn many_to_toml(configs: &[ExperimentConfig]) -> Result<String> {
        toml::to_string(&ConfigFile {
            experiment: configs.to_vec(),
        })
        .map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: String| Err(Error::Config(format!("{}: {what}", self.name)));
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return bad("name must be nonempty and contain no path separators".into());
        }
        for r in &self.rules {
            if r != "constant" {
                r.parse::<StepRule>().map_err(|e| Error::Config(format!("{}: {e}", self.name)))?;
            }
        }
        match self.algorithm {
            Algorithm::Herding => {
                if self.iterations == 0 {
                    return bad("herding needs at least one iteration".into());
                }
                if self.instance.is_some() {
                    return bad("herding takes a density, not an instance".into());
                }
            }
            _ => {
                let Some(inst) = &self.instance else {
                    return bad(format!("{} needs an [instance] table", self.algorithm));
                };
                if inst.dimension != inst.region.dimension() {
                    return bad("instance dimension differs from the region dimension".into());
                }
                if self.density.is_some() {
                    return bad("density applies to herding only".into());
                }
            }
        }
        Ok(())
    }

    /// The instance with the config seed applied.
    pub fn instance_spec(&self) -> Result<InstanceSpec> {
        let mut spec = self
            .instance
            .clone()
            .ok_or_else(|| Error::Config(format!("{}: missing instance", self.name)))?;
        spec.seed = self.seed;
        Ok(spec)
    }

    pub fn density(&self) -> Result<Density> {
        match self.density.as_deref() {
            None | Some("uniform") => Ok(Density::Uniform),
            Some("random") => Density::from_arg(&format!("random:{}", self.seed)),
            Some(s) => Density::from_arg(s),
        }
    }

    /// Replaces the seed with `FW_SEED` when that variable is set.
    pub fn apply_seed_env(&mut self) -> Result<()> {
        if let Ok(v) = std::env::var(SEED_ENV) {
            self.seed = v
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("{SEED_ENV}={v:?} is not an unsigned integer")))?;
        }
        Ok(())
    }
}

/// Resolves a rule string; `constant` needs the problem to derive its step.
pub fn resolve_rule(rule: &str, problem: Option<&Problem>) -> Result<StepRule> {
    if rule == "constant" {
        let problem = problem.ok_or_else(|| Error::Config("bare constant rule needs an instance".into()))?;
        return constant_rule_for(problem);
    }
    rule.parse().map_err(Error::Config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{Location, RegionSpec};

    fn sample() -> ExperimentConfig {
        ExperimentConfig {
            name: "ball".into(),
            algorithm: Algorithm::Fw,
            rules: vec!["openloop:4".into(), "linesearch".into(), "constant".into()],
            iterations: 100,
            seed: 7,
            output: "out".into(),
            density: None,
            instance: Some(InstanceSpec::new(
                Location::Exterior,
                7,
                RegionSpec::LpBall {
                    p: 2.0,
                    radius: 1.0,
                    dimension: 5,
                },
            )),
        }
    }

    #[test]
    fn toml_round_trip() {
        let cfg = sample();
        let text = cfg.to_toml().unwrap();
        assert_eq!(ExperimentConfig::from_toml(&text).unwrap(), cfg);
        let many = ExperimentConfig::many_to_toml(&[cfg.clone(), cfg.clone()]).unwrap();
        assert_eq!(ExperimentConfig::parse_many(&many).unwrap(), vec![cfg.clone(), cfg]);
    }

    #[test]
    fn documented_layout_parses() {
        let text = r#"
name = "wolfe_quarter"
algorithm = "fw"
rules = ["linesearch", "openloop:4"]
iterations = 1000
seed = 0
output = "wolfe"

[instance]
location = "face:0.25"
dimension = 100
seed = 0

[instance.region]
kind = "simplex"
dimension = 100
"#;
        let cfg = ExperimentConfig::from_toml(text).unwrap();
        assert_eq!(cfg.instance.unwrap().location, Location::Face(0.25));
    }

    #[test]
    fn rejects_bad_rules_and_missing_instance() {
        let mut cfg = sample();
        cfg.rules.push("openloop:0".into());
        assert!(cfg.validate().is_err());
        let mut cfg = sample();
        cfg.instance = None;
        assert!(cfg.validate().is_err());
    }
}
