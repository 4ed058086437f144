//! Exact information and lifetime measures, in nats.
//!
//! Every measure is evaluated from a [`Profile`] (cells, cdf and survival at
//! the support points) so the plug-in estimators in
//! [`crate::estimators`] run exactly the same arithmetic on empirical
//! frequencies.
//!
//! Residual-type sums follow an [`IndexConvention`]. The default,
//! [`IndexConvention::PaperInclusive`], sums `k = j..r` including the cell
//! at `x_j` itself; this is what the published Weibull II and
//! actual/experimenter tables were computed with, and it is why
//! `R_X(x_5) = -5 log 5` comes out negative for the Weibull II lifetime.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distribution::{FinitePmf, PairedPmfs, Profile, TimeIndex};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureId {
    Shannon,
    ResidualEntropy,
    PastEntropy,
    CumResidualEntropy,
    CumPastEntropy,
    MeanResidual,
    MeanPast,
    Inaccuracy,
    ResidualInaccuracy,
    PastInaccuracy,
    CumResidualInaccuracy,
    CumPastInaccuracy,
    KlDivergence,
}

impl MeasureId {
    pub const ALL: [MeasureId; 13] = [
        MeasureId::Shannon,
        MeasureId::ResidualEntropy,
        MeasureId::PastEntropy,
        MeasureId::CumResidualEntropy,
        MeasureId::CumPastEntropy,
        MeasureId::MeanResidual,
        MeasureId::MeanPast,
        MeasureId::Inaccuracy,
        MeasureId::ResidualInaccuracy,
        MeasureId::PastInaccuracy,
        MeasureId::CumResidualInaccuracy,
        MeasureId::CumPastInaccuracy,
        MeasureId::KlDivergence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MeasureId::Shannon => "shannon",
            MeasureId::ResidualEntropy => "residual-entropy",
            MeasureId::PastEntropy => "past-entropy",
            MeasureId::CumResidualEntropy => "cum-residual-entropy",
            MeasureId::CumPastEntropy => "cum-past-entropy",
            MeasureId::MeanResidual => "mean-residual",
            MeasureId::MeanPast => "mean-past",
            MeasureId::Inaccuracy => "inaccuracy",
            MeasureId::ResidualInaccuracy => "residual-inaccuracy",
            MeasureId::PastInaccuracy => "past-inaccuracy",
            MeasureId::CumResidualInaccuracy => "cum-residual-inaccuracy",
            MeasureId::CumPastInaccuracy => "cum-past-inaccuracy",
            MeasureId::KlDivergence => "kl-divergence",
        }
    }

    /// Measures evaluated at a time index `x_j`.
    pub fn needs_index(self) -> bool {
        matches!(
            self,
            MeasureId::ResidualEntropy
                | MeasureId::PastEntropy
                | MeasureId::MeanResidual
                | MeasureId::MeanPast
                | MeasureId::ResidualInaccuracy
                | MeasureId::PastInaccuracy
        )
    }

    /// Measures conditioned on survival past `x_j`; undefined at `j = r`.
    pub fn is_residual(self) -> bool {
        matches!(
            self,
            MeasureId::ResidualEntropy | MeasureId::MeanResidual | MeasureId::ResidualInaccuracy
        )
    }

    /// Measures that involve the experimenter's distribution `q`.
    pub fn is_paired(self) -> bool {
        matches!(
            self,
            MeasureId::Inaccuracy
                | MeasureId::ResidualInaccuracy
                | MeasureId::PastInaccuracy
                | MeasureId::CumResidualInaccuracy
                | MeasureId::CumPastInaccuracy
                | MeasureId::KlDivergence
        )
    }

    /// The entropy measure that the inaccuracy measure reduces to when `q = p`.
    pub fn entropy_counterpart(self) -> Option<MeasureId> {
        match self {
            MeasureId::Inaccuracy => Some(MeasureId::Shannon),
            MeasureId::ResidualInaccuracy => Some(MeasureId::ResidualEntropy),
            MeasureId::PastInaccuracy => Some(MeasureId::PastEntropy),
            MeasureId::CumResidualInaccuracy => Some(MeasureId::CumResidualEntropy),
            MeasureId::CumPastInaccuracy => Some(MeasureId::CumPastEntropy),
            _ => None,
        }
    }
}

impl fmt::Display for MeasureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeasureId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        MeasureId::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = MeasureId::ALL.iter().map(|m| m.name()).collect();
                format!(
                    "unknown measure '{s}'; valid measures: {}",
                    names.join(", ")
                )
            })
    }
}

/// Summation range for residual-type measures at `x_j`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexConvention {
    /// `k = j..r`, including the cell at `x_j`.
    #[default]
    PaperInclusive,
    /// `k = j+1..r`, so the weights `p_k / P̄(x_j)` form a probability vector.
    ConditionalProper,
}

impl IndexConvention {
    /// First zero-based cell of the residual sum at zero-based position `j`.
    pub(crate) fn residual_start(self, j: usize) -> usize {
        match self {
            IndexConvention::PaperInclusive => j,
            IndexConvention::ConditionalProper => j + 1,
        }
    }
}

// ---------------------------------------------------------------------------
// Kernels over profiles. Zero checks only fire for empirical profiles.

fn tail(p: &Profile, j: usize) -> Result<f64> {
    match p.surv[j] {
        s if s > 0.0 => Ok(s),
        _ => Err(Error::EmptyTail(j + 1)),
    }
}

fn head(p: &Profile, j: usize) -> Result<f64> {
    match p.cdf[j] {
        c if c > 0.0 => Ok(c),
        _ => Err(Error::EmptyHead(j + 1)),
    }
}

/// `sum_k w_k ln w_k` with `w_k = p_k / scale` over `range`.
fn weighted_xlogx(p: &Profile, range: std::ops::Range<usize>, scale: f64) -> Result<f64> {
    let mut acc = 0.0;
    for k in range {
        if p.probs[k] == 0.0 {
            return Err(Error::ZeroCellInRange(k + 1));
        }
        let w = p.probs[k] / scale;
        acc += w * w.ln();
    }
    Ok(acc)
}

/// `sum_k (p_k / scale) ln(q_k / q_scale)` over `range`.
fn weighted_cross(
    p: &Profile,
    q: &Profile,
    range: std::ops::Range<usize>,
    scale: f64,
    q_scale: f64,
) -> f64 {
    let mut acc = 0.0;
    for k in range {
        let w = p.probs[k] / scale;
        acc += w * (q.probs[k] / q_scale).ln();
    }
    acc
}

pub(crate) fn shannon_k(p: &Profile) -> Result<f64> {
    Ok(-weighted_xlogx(p, 0..p.len(), 1.0)?)
}

pub(crate) fn residual_entropy_k(p: &Profile, j: usize, conv: IndexConvention) -> Result<f64> {
    let s = tail(p, j)?;
    Ok(-weighted_xlogx(p, conv.residual_start(j)..p.len(), s)?)
}

pub(crate) fn past_entropy_k(p: &Profile, j: usize) -> Result<f64> {
    let c = head(p, j)?;
    Ok(-weighted_xlogx(p, 0..j + 1, c)?)
}

pub(crate) fn cum_residual_entropy_k(p: &Profile) -> Result<f64> {
    let mut acc = 0.0;
    for j in 0..p.len() - 1 {
        let s = tail(p, j)?;
        acc += s * s.ln();
    }
    Ok(-acc)
}

pub(crate) fn cum_past_entropy_k(p: &Profile) -> Result<f64> {
    let mut acc = 0.0;
    for j in 0..p.len() {
        let c = head(p, j)?;
        acc += c * c.ln();
    }
    Ok(-acc)
}

pub(crate) fn mean_residual_k(p: &Profile, j: usize) -> Result<f64> {
    let s = tail(p, j)?;
    let total: f64 = p.surv[j..p.len() - 1].iter().sum();
    Ok(total / s)
}

pub(crate) fn mean_past_k(p: &Profile, j: usize) -> Result<f64> {
    let c = head(p, j)?;
    let total: f64 = p.cdf[..=j].iter().sum();
    Ok(total / c)
}

pub(crate) fn inaccuracy_k(p: &Profile, q: &Profile) -> f64 {
    -weighted_cross(p, q, 0..p.len(), 1.0, 1.0)
}

pub(crate) fn residual_inaccuracy_k(
    p: &Profile,
    q: &Profile,
    j: usize,
    conv: IndexConvention,
) -> Result<f64> {
    let s = tail(p, j)?;
    let qs = q.surv[j];
    Ok(-weighted_cross(
        p,
        q,
        conv.residual_start(j)..p.len(),
        s,
        qs,
    ))
}

pub(crate) fn past_inaccuracy_k(p: &Profile, q: &Profile, j: usize) -> Result<f64> {
    let c = head(p, j)?;
    let qc = q.cdf[j];
    Ok(-weighted_cross(p, q, 0..j + 1, c, qc))
}

pub(crate) fn cum_residual_inaccuracy_k(p: &Profile, q: &Profile) -> f64 {
    let mut acc = 0.0;
    for j in 0..p.len() - 1 {
        acc += p.surv[j] * q.surv[j].ln();
    }
    -acc
}

pub(crate) fn cum_past_inaccuracy_k(p: &Profile, q: &Profile) -> f64 {
    let mut acc = 0.0;
    for j in 0..p.len() {
        acc += p.cdf[j] * q.cdf[j].ln();
    }
    -acc
}

pub(crate) fn kl_divergence_k(p: &Profile, q: &Profile) -> Result<f64> {
    let mut acc = 0.0;
    for k in 0..p.len() {
        if p.probs[k] == 0.0 {
            return Err(Error::ZeroCellInRange(k + 1));
        }
        acc += p.probs[k] * (p.probs[k] / q.probs[k]).ln();
    }
    Ok(acc)
}

/// Evaluates any measure on a profile. `q` must share `p`'s support.
pub(crate) fn evaluate_profile(
    p: &Profile,
    q: Option<&Profile>,
    measure: MeasureId,
    j: Option<TimeIndex>,
    conv: IndexConvention,
) -> Result<f64> {
    let r = p.len();
    let q = || q.ok_or(Error::MissingQ(measure.name()));
    let index = || j.ok_or(Error::MissingIndex(measure.name()));
    match measure {
        MeasureId::Shannon => shannon_k(p),
        MeasureId::ResidualEntropy => residual_entropy_k(p, index()?.residual_position(r)?, conv),
        MeasureId::PastEntropy => past_entropy_k(p, index()?.position(r)?),
        MeasureId::CumResidualEntropy => cum_residual_entropy_k(p),
        MeasureId::CumPastEntropy => cum_past_entropy_k(p),
        MeasureId::MeanResidual => mean_residual_k(p, index()?.residual_position(r)?),
        MeasureId::MeanPast => mean_past_k(p, index()?.position(r)?),
        MeasureId::Inaccuracy => Ok(inaccuracy_k(p, q()?)),
        MeasureId::ResidualInaccuracy => {
            let q = q()?;
            residual_inaccuracy_k(p, q, index()?.residual_position(r)?, conv)
        }
        MeasureId::PastInaccuracy => {
            let q = q()?;
            past_inaccuracy_k(p, q, index()?.position(r)?)
        }
        MeasureId::CumResidualInaccuracy => Ok(cum_residual_inaccuracy_k(p, q()?)),
        MeasureId::CumPastInaccuracy => Ok(cum_past_inaccuracy_k(p, q()?)),
        MeasureId::KlDivergence => kl_divergence_k(p, q()?),
    }
}

/// Evaluates `measure` on an exact distribution (with `q` for paired
/// measures, `j` for time-indexed ones).
pub fn evaluate(
    p: &FinitePmf,
    q: Option<&FinitePmf>,
    measure: MeasureId,
    j: Option<TimeIndex>,
    conv: IndexConvention,
) -> Result<f64> {
    if let Some(q) = q {
        if q.support() != p.support() {
            return Err(Error::SupportMismatch);
        }
    }
    evaluate_profile(p.profile(), q.map(FinitePmf::profile), measure, j, conv)
}

// Public per-measure entry points. Cells of a validated pmf are strictly
// positive, so only index errors can surface.

const VALID: &str = "validated pmf has no empty cells";

pub fn shannon_entropy(p: &FinitePmf) -> f64 {
    shannon_k(p.profile()).expect(VALID)
}

pub fn residual_entropy(p: &FinitePmf, j: TimeIndex, conv: IndexConvention) -> Result<f64> {
    residual_entropy_k(p.profile(), j.residual_position(p.len())?, conv)
}

pub fn past_entropy(p: &FinitePmf, j: TimeIndex) -> Result<f64> {
    past_entropy_k(p.profile(), j.position(p.len())?)
}

pub fn cum_residual_entropy(p: &FinitePmf) -> f64 {
    cum_residual_entropy_k(p.profile()).expect(VALID)
}

pub fn cum_past_entropy(p: &FinitePmf) -> f64 {
    cum_past_entropy_k(p.profile()).expect(VALID)
}

pub fn mean_residual(p: &FinitePmf, j: TimeIndex) -> Result<f64> {
    mean_residual_k(p.profile(), j.residual_position(p.len())?)
}

pub fn mean_past(p: &FinitePmf, j: TimeIndex) -> Result<f64> {
    mean_past_k(p.profile(), j.position(p.len())?)
}

pub fn inaccuracy(pq: &PairedPmfs) -> f64 {
    inaccuracy_k(pq.p().profile(), pq.q().profile())
}

pub fn residual_inaccuracy(pq: &PairedPmfs, j: TimeIndex, conv: IndexConvention) -> Result<f64> {
    let j = j.residual_position(pq.p().len())?;
    residual_inaccuracy_k(pq.p().profile(), pq.q().profile(), j, conv)
}

pub fn past_inaccuracy(pq: &PairedPmfs, j: TimeIndex) -> Result<f64> {
    let j = j.position(pq.p().len())?;
    past_inaccuracy_k(pq.p().profile(), pq.q().profile(), j)
}

pub fn cum_residual_inaccuracy(pq: &PairedPmfs) -> f64 {
    cum_residual_inaccuracy_k(pq.p().profile(), pq.q().profile())
}

pub fn cum_past_inaccuracy(pq: &PairedPmfs) -> f64 {
    cum_past_inaccuracy_k(pq.p().profile(), pq.q().profile())
}

pub fn kl_divergence(pq: &PairedPmfs) -> f64 {
    kl_divergence_k(pq.p().profile(), pq.q().profile()).expect(VALID)
}
