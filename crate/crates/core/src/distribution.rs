//! Finite discrete lifetime distributions.
//!
//! A [`FinitePmf`] lives on a strictly increasing, positive support
//! `x_1 < ... < x_r` with every cell strictly positive. The cdf and the
//! survival function are evaluated at the support points once, at
//! construction, and shared by every measure and estimator.
//!
//! The survival function is the strict tail `P̄(x) = P(X > x)`, so
//! `P̄(x_j)` excludes `p_j` and `P̄(x_r) = 0`.

use crate::error::{Error, Result};

const SUM_TOLERANCE: f64 = 1e-12;

/// Cell probabilities together with the cdf and survival function at the
/// support points.
///
/// Built from any nonnegative probability vector, so the empirical
/// distribution uses the very same arithmetic as the exact one.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Profile {
    pub probs: Vec<f64>,
    /// `cdf[j] = P(x_{j+1})`; the last entry is exactly 1.
    pub cdf: Vec<f64>,
    /// `surv[j] = P̄(x_{j+1})`; the last entry is exactly 0.
    pub surv: Vec<f64>,
}

impl Profile {
    pub fn from_probs(probs: Vec<f64>) -> Self {
        let r = probs.len();
        let mut cdf = Vec::with_capacity(r);
        let mut acc = 0.0;
        for &p in &probs {
            acc += p;
            cdf.push(acc);
        }
        let mut surv = vec![0.0; r];
        let mut tail = 0.0;
        for k in (0..r.saturating_sub(1)).rev() {
            tail += probs[k + 1];
            surv[k] = tail;
        }
        if let Some(last) = cdf.last_mut() {
            *last = 1.0;
        }
        Profile { probs, cdf, surv }
    }

    /// Plain running sums without pinning `P(x_r)` to 1, so that every
    /// cell perturbation is visible to finite differences.
    #[cfg(test)]
    pub fn from_probs_unclamped(probs: Vec<f64>) -> Self {
        let mut profile = Profile::from_probs(probs);
        profile.cdf = profile
            .probs
            .iter()
            .scan(0.0, |acc, p| {
                *acc += p;
                Some(*acc)
            })
            .collect();
        profile
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }
}

/// A 1-based time index `j` into the support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TimeIndex(usize);

impl TimeIndex {
    pub fn new(j: usize) -> Result<Self> {
        if j == 0 {
            return Err(Error::IndexOutOfRange { j, r: 0 });
        }
        Ok(TimeIndex(j))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Zero-based position, after checking `1 <= j <= r`.
    pub(crate) fn position(self, r: usize) -> Result<usize> {
        if self.0 > r {
            return Err(Error::IndexOutOfRange { j: self.0, r });
        }
        Ok(self.0 - 1)
    }

    /// Zero-based position for residual quantities, which need `j <= r - 1`.
    pub(crate) fn residual_position(self, r: usize) -> Result<usize> {
        let pos = self.position(r)?;
        if pos + 1 == r {
            return Err(Error::ResidualAtTerminal(self.0));
        }
        Ok(pos)
    }
}

impl std::fmt::Display for TimeIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Checks the support on its own: length, positivity, strict ordering.
pub(crate) fn validate_support(support: &[f64]) -> Result<()> {
    if support.len() < 2 {
        return Err(Error::TooFewPoints(support.len()));
    }
    for (index, &value) in support.iter().enumerate() {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::NonPositiveSupport { index, value });
        }
        if index > 0 && !(value > support[index - 1]) {
            return Err(Error::UnsortedSupport { index });
        }
    }
    Ok(())
}

/// A validated finite discrete lifetime distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct FinitePmf {
    support: Vec<f64>,
    profile: Profile,
}

impl FinitePmf {
    /// Validates and stores the distribution. Probabilities are kept exactly
    /// as given; nothing is renormalized.
    pub fn new(support: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if support.len() != probs.len() {
            return Err(Error::LengthMismatch {
                support: support.len(),
                probs: probs.len(),
            });
        }
        validate_support(&support)?;
        for (index, &value) in probs.iter().enumerate() {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::NonPositiveProb { index, value });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::SumNotOne { sum });
        }
        Ok(FinitePmf {
            support,
            profile: Profile::from_probs(probs),
        })
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn probs(&self) -> &[f64] {
        &self.profile.probs
    }

    /// Number of support points `r`.
    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// `P(x_j)` at each support point.
    pub fn cdf_values(&self) -> &[f64] {
        &self.profile.cdf
    }

    /// `P̄(x_j)` at each support point.
    pub fn survival_values(&self) -> &[f64] {
        &self.profile.surv
    }

    pub(crate) fn profile(&self) -> &Profile {
        &self.profile
    }

    /// `P(X <= x)`, a right-continuous step function.
    pub fn cdf_at(&self, x: f64) -> f64 {
        let below = self.support.partition_point(|&s| s <= x);
        match below {
            0 => 0.0,
            k => self.profile.cdf[k - 1],
        }
    }

    /// `P(X > x)`, the strict tail.
    pub fn survival_at(&self, x: f64) -> f64 {
        let below = self.support.partition_point(|&s| s <= x);
        match below {
            0 => 1.0,
            k => self.profile.surv[k - 1],
        }
    }

    /// Position of `x` in the support, if it is a support point.
    pub fn index_of(&self, x: f64) -> Option<usize> {
        index_in(&self.support, x)
    }
}

pub(crate) fn index_in(support: &[f64], x: f64) -> Option<usize> {
    let pos = support.partition_point(|&s| s < x);
    (pos < support.len() && support[pos] == x).then_some(pos)
}

/// The discrete Weibull distribution of type II on `{1, ..., r}`:
/// `p_k = (k/r) * prod_{i<k} (1 - i/r)`.
pub fn weibull_type2(r: usize) -> Result<FinitePmf> {
    if r < 2 {
        return Err(Error::InvalidR(r));
    }
    let rf = r as f64;
    let mut probs = Vec::with_capacity(r);
    let mut survive = 1.0;
    for k in 1..=r {
        probs.push(k as f64 / rf * survive);
        survive *= 1.0 - k as f64 / rf;
    }
    let support = (1..=r).map(|k| k as f64).collect();
    FinitePmf::new(support, probs)
}

/// Actual distribution `p` and the experimenter's distribution `q` on a
/// shared support.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedPmfs {
    p: FinitePmf,
    q: FinitePmf,
}

impl PairedPmfs {
    pub fn new(p: FinitePmf, q: FinitePmf) -> Result<Self> {
        if p.support() != q.support() {
            return Err(Error::SupportMismatch);
        }
        Ok(PairedPmfs { p, q })
    }

    pub fn p(&self) -> &FinitePmf {
        &self.p
    }

    pub fn q(&self) -> &FinitePmf {
        &self.q
    }

    pub fn into_parts(self) -> (FinitePmf, FinitePmf) {
        (self.p, self.q)
    }
}

/// Worked examples: the Weibull II lifetime with `r = 6`, and the
/// actual/experimenter pair on `{1, 2, 3, 4}` with `q_k = k^3 / 100`.
pub mod examples {
    use super::*;

    pub fn weibull6() -> FinitePmf {
        weibull_type2(6).expect("r = 6 is valid")
    }

    pub fn example2_p() -> FinitePmf {
        FinitePmf::new(
            vec![1.0, 2.0, 3.0, 4.0],
            vec![7.0 / 40.0, 11.0 / 20.0, 1.0 / 4.0, 1.0 / 40.0],
        )
        .expect("valid pmf")
    }

    pub fn example2_q() -> FinitePmf {
        let probs = (1..=4).map(|k| f64::from(k * k * k) / 100.0).collect();
        FinitePmf::new(vec![1.0, 2.0, 3.0, 4.0], probs).expect("valid pmf")
    }

    pub fn example2() -> PairedPmfs {
        PairedPmfs::new(example2_p(), example2_q()).expect("shared support")
    }
}
