use std::io::{Read, Write};

use crate::error::{Error, Result};

/// How an iteration moved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    Fw,
    Away,
    /// The active set (or the support) shrank.
    Drop,
    /// A step that failed the progress test of the weakly open-loop rule.
    NonProgress,
    /// Pairwise move between two vertices.
    Pairwise,
}

impl StepKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            StepKind::Fw => "fw",
            StepKind::Away => "away",
            StepKind::Drop => "drop",
            StepKind::NonProgress => "non_progress",
            StepKind::Pairwise => "pairwise",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "fw" => StepKind::Fw,
            "away" => StepKind::Away,
            "drop" => StepKind::Drop,
            "non_progress" => StepKind::NonProgress,
            "pairwise" => StepKind::Pairwise,
            _ => return None,
        })
    }
}

/// State at iteration `t` and the step taken from it.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub t: usize,
    /// Primal gap, clamped at zero.
    pub h: f64,
    pub fw_gap: f64,
    pub eta: f64,
    pub kind: StepKind,
    pub active_set_size: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TraceMeta {
    pub rule: String,
    pub region: String,
    pub objective: String,
    pub seed: Option<u64>,
    /// Iteration at which the run converged and the rest was padded.
    pub early_exit: Option<usize>,
    pub fstar_certified: bool,
}

/// Per-iteration records of one run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunTrace {
    pub records: Vec<TraceRecord>,
    pub meta: TraceMeta,
}

/// Convergence test shared by every solver.
pub fn converged(fw_gap: f64, value: f64) -> bool {
    fw_gap <= 1e-14 * (1.0 + value.abs())
}

pub(crate) fn checked_gap(t: usize, raw: f64) -> Result<f64> {
    if !raw.is_finite() {
        return Err(Error::NonFinite(t));
    }
    if raw < -1e-9 {
        return Err(Error::NegativeGap { t, h: raw });
    }
    Ok(raw.max(0.0))
}

impl RunTrace {
    pub fn new(meta: TraceMeta) -> Self {
        RunTrace {
            records: Vec::new(),
            meta,
        }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn push(&mut self, record: TraceRecord) {
        self.records.push(record);
    }

    pub fn gaps(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.h).collect()
    }

    /// Gap at iteration `t`.
    pub fn gap(&self, t: usize) -> f64 {
        self.records[t - self.records[0].t].h
    }

    pub fn min_prefix(&self) -> Vec<f64> {
        crate::analysis::min_prefix(&self.gaps())
    }

    /// Repeats the last record until the trace ends at iteration `last_t`.
    pub(crate) fn pad_until(&mut self, last_t: usize) {
        let Some(last) = self.records.last().cloned() else {
            return;
        };
        if last.t < last_t {
            self.meta.early_exit.get_or_insert(last.t);
        }
        for t in last.t + 1..=last_t {
            self.records.push(TraceRecord {
                t,
                eta: 0.0,
                ..last.clone()
            });
        }
    }

    fn has_active_set(&self) -> bool {
        self.records.iter().any(|r| r.active_set_size.is_some())
    }

    /// Writes `t,h,h_min_prefix,fw_gap,eta,step_kind` (plus
    /// `active_set_size` when recorded) with 17 significant digits.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let with_set = self.has_active_set();
        let mut header = vec!["t", "h", "h_min_prefix", "fw_gap", "eta", "step_kind"];
        if with_set {
            header.push("active_set_size");
        }
        w.write_record(&header).map_err(csv_err)?;
        let prefix = self.min_prefix();
        for (r, m) in self.records.iter().zip(prefix) {
            let mut row = vec![
                r.t.to_string(),
                sci(r.h),
                sci(m),
                sci(r.fw_gap),
                sci(r.eta),
                r.kind.as_str().to_string(),
            ];
            if with_set {
                row.push(r.active_set_size.map(|n| n.to_string()).unwrap_or_default());
            }
            w.write_record(&row).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}

/// `(t, h)` pairs from a trace CSV.
pub fn read_gaps_csv<R: Read>(input: R) -> Result<Vec<(usize, f64)>> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers().map_err(csv_err)?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::InvalidInput(format!("trace CSV lacks a {name} column")))
    };
    let (ti, hi) = (col("t")?, col("h")?);
    let mut out = Vec::new();
    for row in r.records() {
        let row = row.map_err(csv_err)?;
        let parse = |i: usize| {
            row.get(i)
                .ok_or_else(|| Error::InvalidInput("short CSV row".into()))
        };
        let t = parse(ti)?
            .parse()
            .map_err(|_| Error::InvalidInput("bad t".into()))?;
        let h = parse(hi)?
            .parse()
            .map_err(|_| Error::InvalidInput("bad h".into()))?;
        out.push((t, h));
    }
    Ok(out)
}

/// Scientific notation with 17 significant digits.
pub fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidInput(format!("csv: {e}"))
}
