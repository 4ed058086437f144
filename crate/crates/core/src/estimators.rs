//! Empirical distributions and plug-in estimators.
//!
//! The plug-in estimate of a measure is the exact formula evaluated on the
//! empirical frequencies `p_n^(k) = count_k / n`. The experimenter's `q`
//! side of inaccuracy measures stays exact. An empirical cell of zero inside
//! a logarithm is reported as an error instead of being dropped.

use crate::distribution::{index_in, validate_support, FinitePmf, Profile, TimeIndex};
use crate::error::{Error, Result};
use crate::measures::{evaluate_profile, IndexConvention, MeasureId};

/// Observations `X_1, ..., X_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        Ok(Sample { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Occurrence counts on a declared support.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDist {
    support: Vec<f64>,
    counts: Vec<u64>,
    n: u64,
    profile: Profile,
}

impl EmpiricalDist {
    /// Builds the empirical distribution straight from counts.
    pub fn from_counts(support: Vec<f64>, counts: Vec<u64>) -> Result<Self> {
        if support.len() != counts.len() {
            return Err(Error::LengthMismatch {
                support: support.len(),
                probs: counts.len(),
            });
        }
        validate_support(&support)?;
        let n: u64 = counts.iter().sum();
        if n == 0 {
            return Err(Error::EmptySample);
        }
        let nf = n as f64;
        let probs = counts.iter().map(|&c| c as f64 / nf).collect();
        Ok(EmpiricalDist {
            support,
            counts,
            n,
            profile: Profile::from_probs(probs),
        })
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `p_n^(j)` for every support point.
    pub fn probs(&self) -> &[f64] {
        &self.profile.probs
    }

    /// `P_n(x_j)` for every support point.
    pub fn cdf_values(&self) -> &[f64] {
        &self.profile.cdf
    }

    /// `P̄_n(x_j)` for every support point.
    pub fn survival_values(&self) -> &[f64] {
        &self.profile.surv
    }
}

/// Tallies a sample against a declared support.
pub fn fit_empirical(sample: &Sample, support: &[f64]) -> Result<EmpiricalDist> {
    validate_support(support)?;
    let mut counts = vec![0u64; support.len()];
    for (index, &value) in sample.values().iter().enumerate() {
        let k = index_in(support, value).ok_or(Error::ValueOutsideSupport { index, value })?;
        counts[k] += 1;
    }
    EmpiricalDist::from_counts(support.to_vec(), counts)
}

/// Plug-in estimate of `measure`. For paired measures `q` is the known
/// experimenter distribution on the same support.
pub fn plugin_measure(
    emp: &EmpiricalDist,
    measure: MeasureId,
    j: Option<TimeIndex>,
    q: Option<&FinitePmf>,
    conv: IndexConvention,
) -> Result<f64> {
    if let Some(q) = q {
        if q.support() != emp.support() {
            return Err(Error::SupportMismatch);
        }
    }
    evaluate_profile(&emp.profile, q.map(FinitePmf::profile), measure, j, conv)
}

/// Sup-deviations between an empirical distribution and the truth.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct DeviationStats {
    /// `sup_j |p_n^(j) - p_j|`
    pub a_n_p: f64,
    /// `sup_j |P_n(x_j) - P(x_j)|`
    pub a_n_cdf: f64,
    /// `sup_{j <= r-1} |P̄_n(x_j) - P̄(x_j)|`
    pub a_n_surv: f64,
    /// `sup_{k in [j, r]} |p_n^(k)/P̄_n(x_j) - p_k/P̄(x_j)|`; `None` when the
    /// empirical tail at `x_j` is empty or `j = r`.
    pub a_rn_p: Option<f64>,
    /// `sup_{k in [1, j]} |p_n^(k)/P_n(x_j) - p_k/P(x_j)|`; `None` when
    /// `P_n(x_j) = 0`.
    pub a_pn_p: Option<f64>,
}

fn sup_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn deviation_stats(
    emp: &EmpiricalDist,
    truth: &FinitePmf,
    j: TimeIndex,
) -> Result<DeviationStats> {
    if emp.support() != truth.support() {
        return Err(Error::SupportMismatch);
    }
    let r = truth.len();
    let pos = j.position(r)?;
    let (en, tr) = (&emp.profile, truth.profile());

    let a_rn_p = (pos + 1 < r && en.surv[pos] > 0.0).then(|| {
        (pos..r)
            .map(|k| (en.probs[k] / en.surv[pos] - tr.probs[k] / tr.surv[pos]).abs())
            .fold(0.0, f64::max)
    });
    let a_pn_p = (en.cdf[pos] > 0.0).then(|| {
        (0..=pos)
            .map(|k| (en.probs[k] / en.cdf[pos] - tr.probs[k] / tr.cdf[pos]).abs())
            .fold(0.0, f64::max)
    });

    Ok(DeviationStats {
        a_n_p: sup_abs_diff(&en.probs, &tr.probs),
        a_n_cdf: sup_abs_diff(&en.cdf, &tr.cdf),
        a_n_surv: sup_abs_diff(&en.surv[..r - 1], &tr.surv[..r - 1]),
        a_rn_p,
        a_pn_p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::examples::weibull6;
    use crate::measures::{self, IndexConvention::PaperInclusive};

    fn t(j: usize) -> TimeIndex {
        TimeIndex::new(j).unwrap()
    }

    #[test]
    fn tally_small_sample() {
        let s = Sample::new(vec![1.0, 1.0, 2.0]).unwrap();
        let emp = fit_empirical(&s, &[1.0, 2.0]).unwrap();
        assert_eq!(emp.counts(), &[2, 1]);
        assert_eq!(emp.probs(), &[2.0 / 3.0, 1.0 / 3.0]);
    }

    #[test]
    fn point_mass_at_maximum() {
        let s = Sample::new(vec![6.0; 25]).unwrap();
        let emp = fit_empirical(&s, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        assert_eq!(emp.survival_values(), &[1.0, 1.0, 1.0, 1.0, 1.0, 0.0]);
        assert_eq!(
            plugin_measure(
                &emp,
                MeasureId::MeanResidual,
                Some(t(5)),
                None,
                PaperInclusive
            )
            .unwrap(),
            1.0
        );
    }

    #[test]
    fn population_profile_reproduces_pmf() {
        let pmf = weibull6();
        let emp = EmpiricalDist::from_counts(pmf.support().to_vec(), vec![54, 90, 90, 60, 25, 5])
            .unwrap();
        assert_eq!(emp.n(), 324);
        for (a, b) in emp.probs().iter().zip(pmf.probs()) {
            assert!((a - b).abs() < 1e-16);
        }
        let h = plugin_measure(&emp, MeasureId::Shannon, None, None, PaperInclusive).unwrap();
        assert!((h - 1.5846).abs() < 1e-4);
    }

    #[test]
    fn rejects_values_outside_support() {
        let s = Sample::new(vec![1.0, 7.0, 2.0]).unwrap();
        let support: Vec<f64> = (1..=6).map(f64::from).collect();
        assert_eq!(
            fit_empirical(&s, &support),
            Err(Error::ValueOutsideSupport {
                index: 1,
                value: 7.0
            })
        );
        assert_eq!(Sample::new(vec![]), Err(Error::EmptySample));
    }

    #[test]
    fn zero_cells_and_empty_tails_are_reported() {
        let emp = EmpiricalDist::from_counts(vec![1.0, 2.0, 3.0], vec![3, 0, 2]).unwrap();
        assert_eq!(
            plugin_measure(&emp, MeasureId::Shannon, None, None, PaperInclusive),
            Err(Error::ZeroCellInRange(2))
        );
        let emp = EmpiricalDist::from_counts(vec![1.0, 2.0, 3.0], vec![3, 2, 0]).unwrap();
        assert_eq!(
            plugin_measure(
                &emp,
                MeasureId::MeanResidual,
                Some(t(2)),
                None,
                PaperInclusive
            ),
            Err(Error::EmptyTail(2))
        );
        let emp = EmpiricalDist::from_counts(vec![1.0, 2.0, 3.0], vec![0, 2, 1]).unwrap();
        assert_eq!(
            plugin_measure(&emp, MeasureId::CumPastEntropy, None, None, PaperInclusive),
            Err(Error::EmptyHead(1))
        );
    }

    #[test]
    fn cum_past_entropy_of_half_half() {
        let emp = EmpiricalDist::from_counts(vec![1.0, 2.0], vec![5, 5]).unwrap();
        let v =
            plugin_measure(&emp, MeasureId::CumPastEntropy, None, None, PaperInclusive).unwrap();
        assert!((v - 0.346574).abs() < 1e-6);
    }

    #[test]
    fn plugin_matches_exact_on_full_support_bitwise() {
        let counts = vec![3u64, 7, 11, 5, 2, 1];
        let support: Vec<f64> = (1..=6).map(f64::from).collect();
        let emp = EmpiricalDist::from_counts(support.clone(), counts).unwrap();
        let pmf = FinitePmf::new(support, emp.probs().to_vec()).unwrap();
        for m in MeasureId::ALL.into_iter().filter(|m| !m.is_paired()) {
            let j = m.needs_index().then(|| t(2));
            let a = plugin_measure(&emp, m, j, None, PaperInclusive).unwrap();
            let b = measures::evaluate(&pmf, None, m, j, PaperInclusive).unwrap();
            assert_eq!(a.to_bits(), b.to_bits(), "{m}");
        }
    }

    #[test]
    fn deviations() {
        let truth = FinitePmf::new(vec![1.0, 2.0], vec![0.5, 0.5]).unwrap();
        let emp = EmpiricalDist::from_counts(vec![1.0, 2.0], vec![2, 1]).unwrap();
        let d = deviation_stats(&emp, &truth, t(1)).unwrap();
        assert!((d.a_n_p - 1.0 / 6.0).abs() < 1e-15);
        assert!((d.a_n_cdf - 1.0 / 6.0).abs() < 1e-15);
        assert!((d.a_n_surv - 1.0 / 6.0).abs() < 1e-15);

        let same = EmpiricalDist::from_counts(vec![1.0, 2.0], vec![4, 4]).unwrap();
        let d = deviation_stats(&same, &truth, t(1)).unwrap();
        assert_eq!(d.a_n_p, 0.0);
        assert_eq!(d.a_n_cdf, 0.0);
        assert_eq!(d.a_n_surv, 0.0);
        assert_eq!(d.a_rn_p, Some(0.0));
        assert_eq!(d.a_pn_p, Some(0.0));

        let other = EmpiricalDist::from_counts(vec![1.0, 3.0], vec![4, 4]).unwrap();
        assert_eq!(
            deviation_stats(&other, &truth, t(1)),
            Err(Error::SupportMismatch)
        );
    }
}
