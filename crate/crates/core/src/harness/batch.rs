use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use super::config::{resolve_rule, Algorithm, ExperimentConfig};
use crate::base::RunTrace;
use crate::error::{Error, Result};
use crate::herding::herding_run;
use crate::objectives::generate_instance;
use crate::solvers::{afw_run, difw_run, fw_run};

pub const MANIFEST: &str = "manifest.csv";

/// Runs one rule of one experiment.
pub fn run_experiment(cfg: &ExperimentConfig, rule: &str) -> Result<RunTrace> {
    let mut trace = match cfg.algorithm {
        Algorithm::Herding => {
            let rule = resolve_rule(rule, None)?;
            herding_run(&cfg.density()?, rule, cfg.iterations)?.0
        }
        algo => {
            let inst = generate_instance(&cfg.instance_spec()?)?;
            let problem = inst.problem()?;
            let rule = resolve_rule(rule, Some(&problem))?;
            let x0 = problem.region.default_start();
            match algo {
                Algorithm::Fw => fw_run(&problem, rule, &x0, cfg.iterations)?,
                Algorithm::Afw => afw_run(&problem, rule, &x0, cfg.iterations)?,
                _ => difw_run(&problem, rule, &x0, cfg.iterations)?,
            }
        }
    };
    trace.meta.seed = Some(cfg.seed);
    Ok(trace)
}

/// One line of the batch manifest.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    /// Trace path relative to the batch directory.
    pub file: String,
    pub config: String,
    pub rule: String,
    pub seed: u64,
    /// Empty for failed runs.
    pub sha256: String,
    /// `ok` or `failed: <reason>`.
    pub status: String,
    pub fstar_certified: bool,
    pub early_exit: Option<usize>,
}

impl ManifestEntry {
    pub fn ok(&self) -> bool {
        self.status == "ok"
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BatchReport {
    pub entries: Vec<ManifestEntry>,
}

impl BatchReport {
    pub fn success(&self) -> bool {
        self.entries.iter().all(ManifestEntry::ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ManifestEntry> {
        self.entries.iter().filter(|e| !e.ok())
    }
}

pub fn trace_file_name(cfg: &ExperimentConfig, rule: &str) -> PathBuf {
    cfg.output.join(format!("{}_{}.csv", cfg.name, rule.replace([':', '.'], "-")))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn run_one(dir: &Path, cfg: &ExperimentConfig, rule: &str) -> Result<ManifestEntry> {
    let rel = trace_file_name(cfg, rule);
    let mut entry = ManifestEntry {
        file: rel.to_string_lossy().replace('\\', "/"),
        config: cfg.name.clone(),
        rule: rule.to_string(),
        seed: cfg.seed,
        sha256: String::new(),
        status: "ok".into(),
        fstar_certified: false,
        early_exit: None,
    };
    match run_experiment(cfg, rule) {
        Ok(trace) => {
            let bytes = trace.to_csv_string().into_bytes();
            let path = dir.join(&rel);
            if let Some(parent) = path.parent() {
                fs::create_dir_all(parent)?;
            }
            fs::write(&path, &bytes)?;
            entry.sha256 = sha256_hex(&bytes);
            entry.fstar_certified = trace.meta.fstar_certified;
            entry.early_exit = trace.meta.early_exit;
        }
        Err(e) => entry.status = format!("failed: {e}"),
    }
    Ok(entry)
}

/// Runs every (config, rule) pair on a pool of `jobs` threads, writing the
/// traces and `manifest.csv` under `dir`. Solver failures are recorded in
/// the manifest; only I/O errors abort the batch.
pub fn run_batch(configs: &[ExperimentConfig], dir: &Path, jobs: usize) -> Result<BatchReport> {
    for cfg in configs {
        cfg.validate()?;
    }
    fs::create_dir_all(dir)?;
    let work: Vec<(&ExperimentConfig, &str)> = configs
        .iter()
        .flat_map(|c| c.rules.iter().map(move |r| (c, r.as_str())))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let entries = pool.install(|| {
        work.par_iter()
            .map(|(cfg, rule)| run_one(dir, cfg, rule))
            .collect::<Result<Vec<_>>>()
    })?;
    let report = BatchReport { entries };
    write_manifest(&report, &dir.join(MANIFEST))?;
    Ok(report)
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidInput(format!("manifest: {e}"))
}

pub fn write_manifest(report: &BatchReport, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(["file", "config", "rule", "seed", "sha256", "status", "fstar_certified", "early_exit"])
        .map_err(csv_err)?;
    for e in &report.entries {
        w.write_record([
            e.file.clone(),
            e.config.clone(),
            e.rule.clone(),
            e.seed.to_string(),
            e.sha256.clone(),
            e.status.clone(),
            e.fstar_certified.to_string(),
            e.early_exit.map(|t| t.to_string()).unwrap_or_default(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_manifest(path: &Path) -> Result<Vec<ManifestEntry>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    let mut out = Vec::new();
    for row in r.records() {
        let row = row.map_err(csv_err)?;
        let field = |i: usize| row.get(i).unwrap_or("").to_string();
        let bad = || Error::InvalidInput(format!("manifest row {:?} is malformed", row));
        out.push(ManifestEntry {
            file: field(0),
            config: field(1),
            rule: field(2),
            seed: field(3).parse().map_err(|_| bad())?,
            sha256: field(4),
            status: field(5),
            fstar_certified: field(6).parse().map_err(|_| bad())?,
            early_exit: match field(7).as_str() {
                "" => None,
                s => Some(s.parse().map_err(|_| bad())?),
            },
        });
    }
    Ok(out)
}

/// Files under `dir` whose checksum no longer matches the manifest.
pub fn verify_manifest(dir: &Path) -> Result<Vec<String>> {
    let mut bad = Vec::new();
    for e in read_manifest(&dir.join(MANIFEST))?.into_iter().filter(ManifestEntry::ok) {
        match fs::read(dir.join(&e.file)) {
            Ok(bytes) if sha256_hex(&bytes) == e.sha256 => {}
            _ => bad.push(e.file),
        }
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{InstanceSpec, Location, RegionSpec};

    fn small() -> ExperimentConfig {
        ExperimentConfig {
            name: "tiny".into(),
            algorithm: Algorithm::Fw,
            rules: vec!["openloop:2".into()],
            iterations: 20,
            seed: 1,
            output: "runs".into(),
            density: None,
            instance: Some(InstanceSpec::new(Location::Interior, 1, RegionSpec::Simplex { dimension: 6 })),
        }
    }

    #[test]
    fn empty_batch_writes_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let report = run_batch(&[], dir.path(), 2).unwrap();
        assert!(report.success());
        let text = fs::read_to_string(dir.path().join(MANIFEST)).unwrap();
        assert_eq!(text.lines().count(), 1);
    }

    #[test]
    fn single_run_and_corruption_check() {
        let dir = tempfile::tempdir().unwrap();
        let report = run_batch(&[small()], dir.path(), 1).unwrap();
        assert_eq!(report.entries.len(), 1);
        assert!(report.success());
        assert_eq!(read_manifest(&dir.path().join(MANIFEST)).unwrap(), report.entries);
        assert!(verify_manifest(dir.path()).unwrap().is_empty());
        let file = dir.path().join(&report.entries[0].file);
        let mut bytes = fs::read(&file).unwrap();
        bytes[40] ^= 1;
        fs::write(&file, bytes).unwrap();
        assert_eq!(verify_manifest(dir.path()).unwrap(), vec![report.entries[0].file.clone()]);
    }

    #[test]
    fn failed_run_is_flagged() {
        let mut cfg = small();
        cfg.algorithm = Algorithm::Difw;
        cfg.rules = vec!["shortstep".into()];
        let dir = tempfile::tempdir().unwrap();
        let report = run_batch(&[cfg], dir.path(), 1).unwrap();
        assert!(!report.success());
        assert!(report.entries[0].status.starts_with("failed"));
    }
}
