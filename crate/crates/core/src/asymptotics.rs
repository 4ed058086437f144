//! Almost-sure bound constants and asymptotic variances of the plug-in
//! estimators.
//!
//! Every estimator is a smooth function of the empirical cell frequencies,
//! so `sqrt(n) (estimate - truth)` is asymptotically `g . Z` with `g` the
//! gradient at the true pmf and `Z ~ N(0, diag(p) - p p^T)`. The gradient is
//! split into two blocks:
//!
//! * block 1: dependence through the cells (or cdf/survival values) summed
//!   in the numerator,
//! * block 2: dependence through the normalizer `P̄(x_j)` or `P(x_j)`.
//!
//! `sigma1_sq` and `sigma2_sq` are the variances of the two blocks and
//! `cov_term` their covariance, so that
//! `sigma_sq = sigma1_sq + sigma2_sq + 2 cov_term`. For cell-based measures
//! `sigma1_sq` equals `Σ p_k(1-p_k) c_k² - 2 Σ_{k<k'} p_k p_k' c_k c_k'`;
//! survival/cdf blocks use the exact covariance of nested indicators,
//! `Cov(1{X>x_i}, 1{X>x_k}) = P̄(x_max(i,k)) - P̄(x_i) P̄(x_k)`.
//!
//! [`CovMode::PaperIndependent`] treats the two blocks as independent and
//! drops `cov_term`; [`CovMode::DeltaMethod`] keeps it.

use serde::{Deserialize, Serialize};

use crate::distribution::{FinitePmf, Profile, TimeIndex};
use crate::error::{Error, Result};
use crate::estimators::DeviationStats;
use crate::measures::{IndexConvention, MeasureId};

/// `ψ(x) = x ln x`
pub fn psi(x: f64) -> f64 {
    x * x.ln()
}

/// `ψ'(x) = 1 + ln x`
pub fn psi_prime(x: f64) -> f64 {
    1.0 + x.ln()
}

/// `ψ''(x) = 1 / x`
pub fn psi_second(x: f64) -> f64 {
    1.0 / x
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CovMode {
    /// Cross-block covariance set to zero.
    #[serde(rename = "paper-independent")]
    PaperIndependent,
    /// Cross-block covariance from the multinomial indicator covariances.
    #[default]
    #[serde(rename = "delta")]
    DeltaMethod,
}

/// Bound constant and asymptotic variance of one estimator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticSpec {
    pub measure: MeasureId,
    pub j: Option<usize>,
    #[serde(rename = "A")]
    pub a_bound: f64,
    pub sigma_sq: f64,
    pub sigma1_sq: f64,
    pub sigma2_sq: f64,
    pub cov_term: f64,
    pub cov_mode: CovMode,
}

/// Which sup-deviation controls the almost-sure rate of an estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeviationKind {
    /// `a_{R,n}(p)`
    ResidualRatio,
    /// `a_{P,n}(p)`
    PastRatio,
    /// `a_n(P)`
    Cdf,
    /// `a_n(P̄)`
    Survival,
}

impl DeviationKind {
    pub fn of(measure: MeasureId) -> Result<Self> {
        Ok(match measure {
            MeasureId::ResidualEntropy | MeasureId::ResidualInaccuracy => {
                DeviationKind::ResidualRatio
            }
            MeasureId::Shannon
            | MeasureId::PastEntropy
            | MeasureId::Inaccuracy
            | MeasureId::PastInaccuracy => DeviationKind::PastRatio,
            MeasureId::CumResidualEntropy
            | MeasureId::CumResidualInaccuracy
            | MeasureId::MeanResidual => DeviationKind::Survival,
            MeasureId::CumPastEntropy | MeasureId::CumPastInaccuracy | MeasureId::MeanPast => {
                DeviationKind::Cdf
            }
            MeasureId::KlDivergence => return Err(Error::UnsupportedMeasure(measure.name())),
        })
    }

    /// Picks the matching deviation; `None` if it is undefined for the sample.
    pub fn select(self, d: &DeviationStats) -> Option<f64> {
        match self {
            DeviationKind::ResidualRatio => d.a_rn_p,
            DeviationKind::PastRatio => d.a_pn_p,
            DeviationKind::Cdf => Some(d.a_n_cdf),
            DeviationKind::Survival => Some(d.a_n_surv),
        }
    }
}

/// Shannon entropy and inaccuracy are the past versions at `j = r`.
fn normalize_target(
    measure: MeasureId,
    j: Option<TimeIndex>,
    r: usize,
) -> Result<(MeasureId, Option<usize>)> {
    let at = |j: Option<TimeIndex>| j.ok_or(Error::MissingIndex(measure.name()));
    Ok(match measure {
        MeasureId::Shannon => (MeasureId::PastEntropy, Some(r - 1)),
        MeasureId::Inaccuracy => (MeasureId::PastInaccuracy, Some(r - 1)),
        MeasureId::KlDivergence => return Err(Error::UnsupportedMeasure(measure.name())),
        m if m.is_residual() => (m, Some(at(j)?.residual_position(r)?)),
        m if m.needs_index() => (m, Some(at(j)?.position(r)?)),
        m => (m, None),
    })
}

fn q_or_missing(measure: MeasureId, q: Option<&Profile>) -> Result<&Profile> {
    q.ok_or(Error::MissingQ(measure.name()))
}

/// Gradient of the estimator with respect to the cell frequencies, split
/// into the numerator block and the normalizer block.
pub(crate) struct Gradient {
    pub block1: Vec<f64>,
    pub block2: Vec<f64>,
}

pub(crate) fn gradient(
    measure: MeasureId,
    p: &Profile,
    q: Option<&Profile>,
    j: Option<usize>,
    conv: IndexConvention,
) -> Result<Gradient> {
    let r = p.len();
    let mut g1 = vec![0.0; r];
    let mut g2 = vec![0.0; r];
    let pos = j.unwrap_or(0);
    let last = pos + 1 == r;
    match measure {
        MeasureId::ResidualEntropy | MeasureId::ResidualInaccuracy => {
            let s = p.surv[pos];
            let coeff: Box<dyn Fn(usize) -> f64> = if measure == MeasureId::ResidualEntropy {
                Box::new(|k| psi_prime(p.probs[k] / s))
            } else {
                let q = q_or_missing(measure, q)?;
                let qs = q.surv[pos];
                Box::new(move |k| (q.probs[k] / qs).ln())
            };
            let mut b = 0.0;
            for (k, gk) in g1.iter_mut().enumerate().skip(conv.residual_start(pos)) {
                let c = coeff(k);
                *gk = -c / s;
                b += p.probs[k] * c;
            }
            let b = b / (s * s);
            g2[pos + 1..].fill(b);
        }
        MeasureId::PastEntropy | MeasureId::PastInaccuracy => {
            let c = p.cdf[pos];
            let coeff: Box<dyn Fn(usize) -> f64> = if measure == MeasureId::PastEntropy {
                Box::new(|k| psi_prime(p.probs[k] / c))
            } else {
                let q = q_or_missing(measure, q)?;
                let qc = q.cdf[pos];
                Box::new(move |k| (q.probs[k] / qc).ln())
            };
            let mut b = 0.0;
            for (k, gk) in g1.iter_mut().enumerate().take(pos + 1) {
                let ck = coeff(k);
                *gk = -ck / c;
                b += p.probs[k] * ck;
            }
            // P_n(x_r) = 1 identically, so the normalizer carries no noise.
            if !last {
                g2[..=pos].fill(b / (c * c));
            }
        }
        MeasureId::CumResidualEntropy | MeasureId::CumResidualInaccuracy => {
            let coeff: Vec<f64> = if measure == MeasureId::CumResidualEntropy {
                p.surv[..r - 1].iter().map(|&s| psi_prime(s)).collect()
            } else {
                let q = q_or_missing(measure, q)?;
                q.surv[..r - 1].iter().map(|s| s.ln()).collect()
            };
            // P̄(x_i) contains cell m iff i < m.
            let mut acc = 0.0;
            for m in 1..r {
                acc += coeff[m - 1];
                g1[m] = -acc;
            }
        }
        MeasureId::CumPastEntropy | MeasureId::CumPastInaccuracy => {
            let coeff: Vec<f64> = if measure == MeasureId::CumPastEntropy {
                p.cdf.iter().map(|&c| psi_prime(c)).collect()
            } else {
                let q = q_or_missing(measure, q)?;
                q.cdf.iter().map(|c| c.ln()).collect()
            };
            // P(x_i) contains cell m iff i >= m.
            let mut acc = 0.0;
            for m in (0..r).rev() {
                acc += coeff[m];
                g1[m] = -acc;
            }
        }
        MeasureId::MeanResidual => {
            let s = p.surv[pos];
            let total: f64 = p.surv[pos..r - 1].iter().sum();
            for (m, g) in g1.iter_mut().enumerate() {
                let terms = (pos..r - 1).filter(|&k| k < m).count();
                *g = terms as f64 / s;
            }
            g2[pos + 1..].fill(-total / (s * s));
        }
        MeasureId::MeanPast => {
            let c = p.cdf[pos];
            let total: f64 = p.cdf[..=pos].iter().sum();
            for (m, g) in g1.iter_mut().enumerate().take(pos + 1) {
                *g = (pos + 1 - m) as f64 / c;
            }
            if !last {
                g2[..=pos].fill(-total / (c * c));
            }
        }
        MeasureId::Shannon | MeasureId::Inaccuracy | MeasureId::KlDivergence => {
            unreachable!("normalized away before computing gradients")
        }
    }
    Ok(Gradient {
        block1: g1,
        block2: g2,
    })
}

fn centred(p: &[f64], g: &[f64]) -> Vec<f64> {
    let mean: f64 = p.iter().zip(g).map(|(p, g)| p * g).sum();
    g.iter().map(|g| g - mean).collect()
}

/// `Cov(g . 1{X = x}, h . 1{X = x})` under the pmf `p`.
fn covariance(p: &[f64], g: &[f64], h: &[f64]) -> f64 {
    let (g, h) = (centred(p, g), centred(p, h));
    p.iter()
        .zip(g.iter().zip(&h))
        .map(|(p, (g, h))| p * g * h)
        .sum()
}

fn variance(p: &[f64], g: &[f64]) -> f64 {
    centred(p, g).iter().zip(p).map(|(g, p)| p * g * g).sum()
}

fn bound_profile(
    measure: MeasureId,
    p: &Profile,
    q: Option<&Profile>,
    j: Option<usize>,
    conv: IndexConvention,
) -> Result<f64> {
    let r = p.len();
    let pos = j.unwrap_or(0);
    let abs_sum = |it: &mut dyn Iterator<Item = f64>| it.map(f64::abs).sum::<f64>();
    Ok(match measure {
        MeasureId::ResidualEntropy => {
            let s = p.surv[pos];
            abs_sum(&mut (conv.residual_start(pos)..r).map(|k| psi_prime(p.probs[k] / s))) / s
        }
        MeasureId::PastEntropy => {
            let c = p.cdf[pos];
            abs_sum(&mut (0..=pos).map(|k| psi_prime(p.probs[k] / c))) / c
        }
        MeasureId::CumResidualEntropy => {
            abs_sum(&mut p.surv[..r - 1].iter().map(|&s| psi_prime(s)))
        }
        MeasureId::CumPastEntropy => abs_sum(&mut p.cdf.iter().map(|&c| psi_prime(c))),
        MeasureId::MeanResidual => {
            let s = p.surv[pos];
            let total: f64 = p.surv[pos..r - 1].iter().sum();
            (r - pos - 1) as f64 / s + total / (s * s)
        }
        MeasureId::MeanPast => {
            let c = p.cdf[pos];
            let total: f64 = p.cdf[..=pos].iter().sum();
            (pos + 1) as f64 / c + total / (c * c)
        }
        MeasureId::ResidualInaccuracy => {
            let q = q_or_missing(measure, q)?;
            let qs = q.surv[pos];
            abs_sum(&mut (conv.residual_start(pos)..r).map(|k| (q.probs[k] / qs).ln()))
        }
        MeasureId::PastInaccuracy => {
            let q = q_or_missing(measure, q)?;
            let qc = q.cdf[pos];
            abs_sum(&mut (0..=pos).map(|k| (q.probs[k] / qc).ln()))
        }
        MeasureId::CumResidualInaccuracy => {
            let q = q_or_missing(measure, q)?;
            abs_sum(&mut q.surv[..r - 1].iter().map(|s| s.ln()))
        }
        MeasureId::CumPastInaccuracy => {
            let q = q_or_missing(measure, q)?;
            abs_sum(&mut q.cdf.iter().map(|c| c.ln()))
        }
        MeasureId::Shannon | MeasureId::Inaccuracy | MeasureId::KlDivergence => {
            unreachable!("normalized away before computing bounds")
        }
    })
}

/// Estimators that do not depend on the sample at all: `P(x_1)`,
/// `P_(X,Y)(x_1)` and `μ_P(x_1)` look at a single cell relative to itself,
/// and `μ_R(x_{r-1}) = P̄(x_{r-1}) / P̄(x_{r-1}) = 1`.
fn is_constant_estimator(measure: MeasureId, pos: Option<usize>, r: usize) -> bool {
    match (measure, pos) {
        (MeasureId::PastEntropy | MeasureId::PastInaccuracy | MeasureId::MeanPast, Some(0)) => true,
        (MeasureId::MeanResidual, Some(pos)) => pos + 2 == r,
        _ => false,
    }
}

fn check_q(p: &FinitePmf, q: Option<&FinitePmf>) -> Result<()> {
    match q {
        Some(q) if q.support() != p.support() => Err(Error::SupportMismatch),
        _ => Ok(()),
    }
}

/// The almost-sure bound constant `A` of the estimator of `measure`.
pub fn as_bound(
    measure: MeasureId,
    p: &FinitePmf,
    q: Option<&FinitePmf>,
    j: Option<TimeIndex>,
    conv: IndexConvention,
) -> Result<f64> {
    check_q(p, q)?;
    let (target, pos) = normalize_target(measure, j, p.len())?;
    bound_profile(target, p.profile(), q.map(FinitePmf::profile), pos, conv)
}

/// Bound constant and asymptotic variance of the estimator of `measure`.
pub fn sigma_sq(
    measure: MeasureId,
    p: &FinitePmf,
    q: Option<&FinitePmf>,
    j: Option<TimeIndex>,
    conv: IndexConvention,
    mode: CovMode,
) -> Result<AsymptoticSpec> {
    check_q(p, q)?;
    let (target, pos) = normalize_target(measure, j, p.len())?;
    let (pp, qp) = (p.profile(), q.map(FinitePmf::profile));
    let a_bound = bound_profile(target, pp, qp, pos, conv)?;
    let grad = gradient(target, pp, qp, pos, conv)?;
    let probs = &pp.probs;

    let sigma1_sq = variance(probs, &grad.block1);
    let sigma2_sq = variance(probs, &grad.block2);
    let (cov_term, sigma_sq) = match mode {
        CovMode::PaperIndependent => (0.0, sigma1_sq + sigma2_sq),
        // The delta-method variance of a constant estimator is exactly 0;
        // the two blocks would otherwise cancel only up to rounding.
        CovMode::DeltaMethod if is_constant_estimator(target, pos, p.len()) => {
            (covariance(probs, &grad.block1, &grad.block2), 0.0)
        }
        CovMode::DeltaMethod => {
            let total: Vec<f64> = grad
                .block1
                .iter()
                .zip(&grad.block2)
                .map(|(a, b)| a + b)
                .collect();
            (
                covariance(probs, &grad.block1, &grad.block2),
                variance(probs, &total),
            )
        }
    };
    if sigma_sq < 0.0 {
        return Err(Error::NegativeVariance(sigma_sq));
    }
    Ok(AsymptoticSpec {
        measure,
        j: if measure.needs_index() {
            j.map(TimeIndex::get)
        } else {
            None
        },
        a_bound,
        sigma_sq,
        sigma1_sq,
        sigma2_sq,
        cov_term,
        cov_mode: mode,
    })
}

/// `sqrt(n) (estimate - truth) / sigma`.
pub fn standardize(estimate: f64, truth: f64, n: u64, spec: &AsymptoticSpec) -> Result<f64> {
    if !(spec.sigma_sq > 0.0) {
        return Err(Error::ZeroVariance);
    }
    Ok((n as f64).sqrt() * (estimate - truth) / spec.sigma_sq.sqrt())
}
