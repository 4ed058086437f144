//! File formats for distributions and samples.
//!
//! * distribution: `{"support": [...], "probs": [...]}`
//! * pair: `{"p": <distribution>, "q": <distribution>}`
//! * sample: one observation per line (blank lines and `#` comments are
//!   ignored), or a counts object `{"support": [...], "counts": [...]}`
//!
//! Validation failures carry the path of the offending field, e.g.
//! `q.probs[2] = -0.1 is not strictly positive`.

use serde::{Deserialize, Serialize};

use crate::distribution::{FinitePmf, PairedPmfs};
use crate::error::{Error, Result};
use crate::estimators::{fit_empirical, EmpiricalDist, Sample};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistFile {
    pub support: Vec<f64>,
    pub probs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairFile {
    pub p: DistFile,
    pub q: DistFile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountsFile {
    pub support: Vec<f64>,
    pub counts: Vec<u64>,
}

impl DistFile {
    pub fn validate(self) -> Result<FinitePmf> {
        FinitePmf::new(self.support, self.probs).map_err(locate_dist_error)
    }
}

impl From<&FinitePmf> for DistFile {
    fn from(p: &FinitePmf) -> Self {
        DistFile {
            support: p.support().to_vec(),
            probs: p.probs().to_vec(),
        }
    }
}

impl PairFile {
    pub fn validate(self) -> Result<PairedPmfs> {
        let p = self.p.validate().map_err(|e| e.at("p"))?;
        let q = self.q.validate().map_err(|e| e.at("q"))?;
        PairedPmfs::new(p, q)
    }
}

fn locate_dist_error(e: Error) -> Error {
    match e {
        Error::NonPositiveProb { .. } | Error::SumNotOne { .. } => e.at("probs"),
        Error::UnsortedSupport { .. } | Error::NonPositiveSupport { .. } => e.at("support"),
        other => other,
    }
}

fn parse_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn parse_dist(text: &str) -> Result<FinitePmf> {
    parse_json::<DistFile>(text)?.validate()
}

pub fn parse_pair(text: &str) -> Result<PairedPmfs> {
    parse_json::<PairFile>(text)?.validate()
}

/// A support-only file: `{"support": [...]}` or a plain JSON array.
pub fn parse_support(text: &str) -> Result<Vec<f64>> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum SupportFile {
        Wrapped { support: Vec<f64> },
        Bare(Vec<f64>),
    }
    let support = match parse_json::<SupportFile>(text)? {
        SupportFile::Wrapped { support } | SupportFile::Bare(support) => support,
    };
    crate::distribution::validate_support(&support).map_err(|e| e.at("support"))?;
    Ok(support)
}

/// Observed data, either raw or already tallied.
#[derive(Debug, Clone, PartialEq)]
pub enum SampleData {
    Values(Sample),
    Counts(CountsFile),
}

impl SampleData {
    /// Tallies the data on `support`; a counts file must declare the same
    /// support.
    pub fn fit(self, support: &[f64]) -> Result<EmpiricalDist> {
        match self {
            SampleData::Values(s) => fit_empirical(&s, support),
            SampleData::Counts(c) => {
                if c.support != support {
                    return Err(Error::SupportMismatch.at("support"));
                }
                EmpiricalDist::from_counts(c.support, c.counts)
            }
        }
    }
}

pub fn parse_sample(text: &str) -> Result<SampleData> {
    if text.trim_start().starts_with('{') {
        return Ok(SampleData::Counts(parse_json(text)?));
    }
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let v: f64 = line
            .parse()
            .map_err(|_| Error::Parse(format!("line {}: {line:?} is not a number", lineno + 1)))?;
        values.push(v);
    }
    Ok(SampleData::Values(Sample::new(values)?))
}
