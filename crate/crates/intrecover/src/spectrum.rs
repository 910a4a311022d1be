//! JSON form of a minimal spectrum.
//!
//! Complex parts are decimal strings so values keep every digit of the declared
//! precision; the strings are carried through unchanged on read and write.

use std::fs;
use std::path::Path;

use intrecover_core::real::Real;
use intrecover_core::sampling::{MinimalSpectrum, SampledClass};
use intrecover_core::Complex;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub lambda: u64,
    pub re: String,
    pub im: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumClass {
    pub rep: [u64; 2],
    #[serde(rename = "D")]
    pub big_d: u64,
    pub entries: Vec<SpectrumEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumFile {
    pub n1: u64,
    pub n2: u64,
    pub digits: u32,
    /// Maxval of the sampled image; an optional hint for the `K` estimate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maxval: Option<u64>,
    pub classes: Vec<SpectrumClass>,
}

impl SpectrumFile {
    pub fn from_spectrum<R: Real>(spec: &MinimalSpectrum<R>, maxval: Option<u64>) -> Self {
        let digits = spec.digits as usize;
        let classes = spec
            .classes
            .iter()
            .map(|c| SpectrumClass {
                rep: [c.rep.0, c.rep.1],
                big_d: c.big_d,
                entries: c
                    .entries
                    .iter()
                    .map(|&(lambda, v)| SpectrumEntry {
                        lambda,
                        re: v.re.to_scientific(digits),
                        im: v.im.to_scientific(digits),
                    })
                    .collect(),
            })
            .collect();
        SpectrumFile {
            n1: spec.n1,
            n2: spec.n2,
            digits: spec.digits,
            maxval,
            classes,
        }
    }

    pub fn to_spectrum<R: Real>(&self) -> Result<MinimalSpectrum<R>, CliError> {
        let parse = |s: &str| {
            R::parse_decimal(s).ok_or_else(|| CliError::InvalidSpectrum(format!("not a decimal number: {s:?}")))
        };
        let mut classes = Vec::with_capacity(self.classes.len());
        for c in &self.classes {
            let mut entries = Vec::with_capacity(c.entries.len());
            for e in &c.entries {
                entries.push((e.lambda, Complex::new(parse(&e.re)?, parse(&e.im)?)));
            }
            classes.push(SampledClass {
                rep: (c.rep[0], c.rep[1]),
                big_d: c.big_d,
                entries,
            });
        }
        let spec = MinimalSpectrum {
            n1: self.n1,
            n2: self.n2,
            digits: self.digits,
            classes,
        };
        spec.validate().map_err(|e| CliError::InvalidSpectrum(e.to_string()))?;
        Ok(spec)
    }

    pub fn coefficient_count(&self) -> usize {
        self.classes.iter().map(|c| c.entries.len()).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spectrum serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::InvalidSpectrum(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        SpectrumFile::from_json(&text)
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        fs::write(path, self.to_json() + "\n").map_err(|e| CliError::io(path, e))
    }
}
