//! Versioned JSON account of an inversion run.

use std::fs;
use std::path::Path;

use intrecover_core::inversion::{InversionReport, SubproblemRecord, SubproblemStatus};
use intrecover_core::lattice::Beta;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamsJson {
    pub beta0: f64,
    /// Number, or `"auto"`.
    pub beta1: serde_json::Value,
    pub beta2: serde_json::Value,
    pub beta3: f64,
    pub delta: f64,
    pub eps: Option<f64>,
    pub digits: u32,
    pub p: f64,
    pub entry_bound: Option<u64>,
    pub max_m: Option<usize>,
    pub retry: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetasJson {
    pub beta0: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    pub k: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LllJson {
    pub swaps: u64,
    pub size_reductions: u64,
    pub refreshes: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubproblemJson {
    pub rep: [u64; 2],
    #[serde(rename = "D")]
    pub big_d: u64,
    /// `trivial`, `guess`, `lattice` or `failed`.
    pub status: String,
    pub wall_secs: Option<f64>,
    pub m: usize,
    pub attempts: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub betas: Option<BetasJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lll: Option<LllJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailedClass {
    pub rep: [u64; 2],
    #[serde(rename = "D")]
    pub big_d: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub schema_version: u32,
    pub success: bool,
    pub n1: u64,
    pub n2: u64,
    pub digits: u32,
    pub params: ParamsJson,
    pub solves: usize,
    pub total_secs: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_class: Option<FailedClass>,
    pub subproblems: Vec<SubproblemJson>,
}

fn beta_json(b: Beta) -> serde_json::Value {
    match b {
        Beta::Auto => serde_json::Value::from("auto"),
        Beta::Fixed(v) => serde_json::Value::from(v),
    }
}

pub fn status_name(s: SubproblemStatus) -> &'static str {
    match s {
        SubproblemStatus::Trivial => "trivial",
        SubproblemStatus::GuessPath => "guess",
        SubproblemStatus::LatticeSolved => "lattice",
        SubproblemStatus::Failed => "failed",
    }
}

fn record_json(r: &SubproblemRecord) -> SubproblemJson {
    SubproblemJson {
        rep: [r.key.rep.0, r.key.rep.1],
        big_d: r.key.big_d,
        status: status_name(r.status).into(),
        wall_secs: r.wall_secs,
        m: r.m,
        attempts: r.attempts,
        betas: r.betas.map(|b| BetasJson {
            beta0: b.beta0,
            beta1: b.beta1,
            beta2: b.beta2,
            beta3: b.beta3,
            k: b.k,
        }),
        lll: r.lll.map(|s| LllJson {
            swaps: s.swaps,
            size_reductions: s.size_reductions,
            refreshes: s.refreshes,
        }),
        error: r.error.as_ref().map(ToString::to_string),
    }
}

impl ReportFile {
    pub fn new(report: &InversionReport, error: Option<String>, total_secs: f64) -> Self {
        let p = &report.params;
        ReportFile {
            schema_version: SCHEMA_VERSION,
            success: error.is_none(),
            n1: report.shape.0,
            n2: report.shape.1,
            digits: report.digits,
            params: ParamsJson {
                beta0: p.beta.beta0,
                beta1: beta_json(p.beta.beta1),
                beta2: beta_json(p.beta.beta2),
                beta3: p.beta.beta3,
                delta: p.beta.delta,
                eps: p.beta.eps,
                digits: p.beta.digits,
                p: p.beta.p,
                entry_bound: p.entry_bound,
                max_m: p.max_m,
                retry: p.retry,
            },
            solves: report.solves,
            total_secs,
            error,
            failed_class: report.failed_key.map(|k| FailedClass {
                rep: [k.rep.0, k.rep.1],
                big_d: k.big_d,
            }),
            subproblems: report.records.iter().map(record_json).collect(),
        }
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(self).expect("report serialization is infallible");
        fs::write(path, text + "\n").map_err(|e| CliError::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::InvalidSpectrum(format!("report: {e}")))
    }
}
