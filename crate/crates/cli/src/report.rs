//! Verification reports and their two renderings.
//!
//! Rationals are written as `"num/den"` strings in JSON. Wall-clock time is
//! not part of the report, so identical configurations render to identical
//! bytes.

use std::fmt::Write;

use serde::Serialize;
use symord_core::rational;

use crate::config::{Command, OutputFormat, RunConfig};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfigEcho {
    pub command: Command,
    pub n: usize,
    pub k: usize,
    pub n_max: u32,
    pub d: u32,
    pub trials: usize,
    pub seed: u64,
    pub sc_path: Option<String>,
    pub sparsity: String,
}

impl ConfigEcho {
    pub fn from_config(c: &RunConfig) -> Self {
        ConfigEcho {
            command: c.command,
            n: c.n,
            k: c.k,
            n_max: c.n_max,
            d: c.effective_d(),
            trials: c.trials,
            seed: c.seed,
            sc_path: c.sc_path.as_ref().map(|p| p.display().to_string()),
            sparsity: rational::to_fraction_string(&c.sparsity),
        }
    }
}

/// One checked instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub index: usize,
    pub seed: Option<u64>,
    pub label: String,
    /// One-based word letters.
    pub word: Option<Vec<usize>>,
    pub passed: bool,
    pub residual_terms: usize,
    pub first_offending: Option<String>,
    pub value: Option<String>,
    pub detail: Option<String>,
}

impl TrialRecord {
    pub fn new(index: usize, label: impl Into<String>) -> Self {
        TrialRecord {
            index,
            seed: None,
            label: label.into(),
            word: None,
            passed: true,
            residual_terms: 0,
            first_offending: None,
            value: None,
            detail: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Aggregate {
    pub trials_run: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub config: ConfigEcho,
    pub trials: Vec<TrialRecord>,
    pub aggregate: Aggregate,
    pub passed: bool,
}

impl Report {
    pub fn new(config: &RunConfig, trials: Vec<TrialRecord>) -> Self {
        let failures = trials.iter().filter(|t| !t.passed).count();
        Report {
            schema_version: SCHEMA_VERSION,
            config: ConfigEcho::from_config(config),
            aggregate: Aggregate { trials_run: trials.len(), failures },
            passed: failures == 0,
            trials,
        }
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            OutputFormat::Text => self.to_text(),
        }
    }

    pub fn to_text(&self) -> String {
        let c = &self.config;
        let mut out = String::new();
        writeln!(out, "symord {}", c.command).unwrap();
        write!(
            out,
            "config: n={} k={} n_max={} d={} trials={} seed={} sparsity={}",
            c.n, c.k, c.n_max, c.d, c.trials, c.seed, c.sparsity
        )
        .unwrap();
        if let Some(p) = &c.sc_path {
            write!(out, " sc={p}").unwrap();
        }
        out.push('\n');
        for t in &self.trials {
            write!(out, "[{}] {} {}", if t.passed { "PASS" } else { "FAIL" }, t.index, t.label).unwrap();
            if let Some(seed) = t.seed {
                write!(out, " seed={seed}").unwrap();
            }
            if let Some(w) = &t.word {
                let letters: Vec<String> = w.iter().map(|l| l.to_string()).collect();
                write!(out, " word=({})", letters.join(",")).unwrap();
            }
            if let Some(v) = &t.value {
                let short = rational::parse(v).map(|r| rational::to_string(&r)).unwrap_or_else(|| v.clone());
                write!(out, " value={short}").unwrap();
            }
            if let Some(d) = &t.detail {
                write!(out, " {d}").unwrap();
            }
            if !t.passed {
                write!(out, " residual_terms={}", t.residual_terms).unwrap();
                if let Some(m) = &t.first_offending {
                    write!(out, " first={m}").unwrap();
                }
            }
            out.push('\n');
        }
        writeln!(
            out,
            "summary: {} trials, {} failures: {}",
            self.aggregate.trials_run,
            self.aggregate.failures,
            if self.passed { "PASS" } else { "FAIL" }
        )
        .unwrap();
        out
    }
}
