//! Reproducible verification suites and their JSON reports.
//!
//! Every random draw comes from a generator seeded by
//! `SHA-256(seed, category, check, index)`, so results do not depend on the
//! thread count and the report body is identical for any `jobs` value.

mod axioms;
mod completions;
mod intp;
mod presheaf;
mod report;

pub use axioms::{axiom_entry, axioms_suite};
pub use completions::completions_suite;
pub use intp::intp_suite;
pub use presheaf::presheaf_suite;
pub use report::{float, matrix_value, strip_timing, to_canonical_json, validate_report, SCHEMA};

use crate::cats::axioms::AxiomId;
use crate::cats::gen::SampleRng;
use crate::cats::CategoryId;
use crate::mat::Tol;
use rand::SeedableRng;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::time::Instant;

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Samples per (category, axiom).
    pub samples: usize,
    /// Optional cap on atom dimensions, applied on top of each category's own cap.
    pub dim_max: Option<usize>,
    pub tol: Tol,
    pub categories: Vec<CategoryId>,
    pub axioms: Vec<AxiomId>,
    pub jobs: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 42,
            samples: 200,
            dim_max: None,
            tol: Tol::default(),
            categories: CategoryId::ALL.to_vec(),
            axioms: AxiomId::ALL.to_vec(),
            jobs: 1,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.samples == 0 {
            return Err("samples must be at least 1".into());
        }
        if self.dim_max == Some(0) {
            return Err("dim-max must be at least 1".into());
        }
        if self.jobs == 0 {
            return Err("jobs must be at least 1".into());
        }
        if self.categories.is_empty() || self.axioms.is_empty() {
            return Err("select at least one category and one axiom".into());
        }
        self.tol.validate().map_err(|e| e.to_string())
    }

    /// The configuration as recorded in the report; `jobs` is omitted since it does not affect results.
    fn to_value(&self) -> Value {
        json!({
            "seed": self.seed,
            "samples": self.samples,
            "dim_max": self.dim_max,
            "eq_tol": float(self.tol.eq_tol),
            "rank_tol": float(self.tol.rank_tol),
            "psd_tol": float(self.tol.psd_tol),
            "categories": self.categories.iter().map(|c| c.name()).collect::<Vec<_>>(),
            "axioms": self.axioms.iter().map(|a| a.name()).collect::<Vec<_>>(),
        })
    }
}

/// The generator for one sample of one check.
pub fn sample_rng(seed: u64, scope: &str, check: &str, index: u64) -> SampleRng {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    for part in [scope, check] {
        h.update((part.len() as u64).to_le_bytes());
        h.update(part.as_bytes());
    }
    h.update(index.to_le_bytes());
    SampleRng::from_seed(h.finalize().into())
}

/// Which suites to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteKind {
    Axioms,
    Intp,
    Completions,
    Presheaf,
}

impl SuiteKind {
    pub const ALL: [SuiteKind; 4] = [
        SuiteKind::Axioms,
        SuiteKind::Intp,
        SuiteKind::Completions,
        SuiteKind::Presheaf,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SuiteKind::Axioms => "axioms",
            SuiteKind::Intp => "intp",
            SuiteKind::Completions => "completions",
            SuiteKind::Presheaf => "presheaf",
        }
    }
}

/// A named property check with its case count and worst deviation.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckRecord {
    pub name: String,
    pub pass: bool,
    pub cases: usize,
    pub max_deviation: Option<f64>,
    pub detail: Value,
}

impl CheckRecord {
    pub fn new(
        name: &str,
        pass: bool,
        cases: usize,
        max_deviation: Option<f64>,
        detail: Value,
    ) -> CheckRecord {
        CheckRecord {
            name: name.to_string(),
            pass,
            cases,
            max_deviation,
            detail,
        }
    }

    pub fn to_value(&self) -> Value {
        json!({
            "name": self.name,
            "pass": self.pass,
            "cases": self.cases,
            "max_deviation": self.max_deviation.map(float),
            "detail": self.detail,
        })
    }
}

/// Largest of a list of optional deviations.
pub(crate) fn max_dev(devs: impl IntoIterator<Item = f64>) -> Option<f64> {
    devs.into_iter()
        .fold(None, |m, d| Some(m.map_or(d, |m: f64| m.max(d))))
}

pub(crate) fn checks_section(checks: &[CheckRecord], started: Instant) -> Value {
    json!({
        "pass": checks.iter().all(|c| c.pass),
        "checks": checks.iter().map(CheckRecord::to_value).collect::<Vec<_>>(),
        "wall_time_s": float(started.elapsed().as_secs_f64()),
    })
}

/// Runs one suite inside a pool of `cfg.jobs` threads.
pub fn run_suite(kind: SuiteKind, cfg: &SuiteConfig) -> Value {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .expect("thread pool");
    pool.install(|| match kind {
        SuiteKind::Axioms => axioms_suite(cfg),
        SuiteKind::Intp => intp_suite(cfg),
        SuiteKind::Completions => completions_suite(cfg),
        SuiteKind::Presheaf => presheaf_suite(cfg),
    })
}

/// Runs the given suites and assembles the report.
pub fn run(kinds: &[SuiteKind], cfg: &SuiteConfig) -> Value {
    let started = Instant::now();
    let mut suites = serde_json::Map::new();
    for k in kinds {
        suites.insert(k.name().to_string(), run_suite(*k, cfg));
    }
    let pass = suites.values().all(|s| s["pass"] == Value::Bool(true));
    json!({
        "schema": SCHEMA,
        "config": cfg.to_value(),
        "suites": suites,
        "pass": pass,
        "wall_time_s": float(started.elapsed().as_secs_f64()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn sample_seeds_separate_scopes() {
        let a = sample_rng(42, "VECT_OPLUS_INV", "Naturality", 0).next_u64();
        let b = sample_rng(42, "VECT_OPLUS_INV", "Naturality", 1).next_u64();
        let c = sample_rng(42, "VECT_OPLUS_IN", "VNaturality", 0).next_u64();
        let d = sample_rng(42, "VECT_OPLUS_INV", "Naturality", 0).next_u64();
        assert!(a != b && a != c);
        assert_eq!(a, d);
    }

    #[test]
    fn config_validation() {
        assert!(SuiteConfig::default().validate().is_ok());
        let bad = SuiteConfig {
            samples: 0,
            ..SuiteConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}
