//! Seeded sampling, replication studies, convergence traces and the
//! statistical checks built on them.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`), which produces the same
//! stream on every platform. A master seed and a stream number select a
//! generator: replication `i` of a study uses stream `i`, so replications
//! can run in any order, or in parallel, without changing the report.
//! Draws use inverse-cdf lookup of a uniform `[0, 1)` variate in the sorted
//! cumulative probabilities.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::asymptotics::{sigma_sq, standardize, CovMode, DeviationKind};
use crate::distribution::{FinitePmf, TimeIndex};
use crate::error::{Error, Result};
use crate::estimators::{deviation_stats, plugin_measure, EmpiricalDist, Sample};
use crate::measures::{evaluate, IndexConvention, MeasureId};

/// The generator for `(seed, stream)`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn draw_index(cdf: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let u: f64 = rng.gen();
    // cdf[r-1] is exactly 1 and u < 1, so the index is always in range.
    cdf.partition_point(|&c| c <= u)
}

/// Adds `n` draws from `pmf` to `counts`.
fn add_draws(pmf: &FinitePmf, n: u64, rng: &mut ChaCha8Rng, counts: &mut [u64]) {
    let cdf = pmf.cdf_values();
    for _ in 0..n {
        counts[draw_index(cdf, rng)] += 1;
    }
}

/// `n` i.i.d. draws from `pmf`, from stream 0 of `seed`.
pub fn sample(pmf: &FinitePmf, n: usize, seed: u64) -> Sample {
    sample_stream(pmf, n, seed, 0)
}

/// `n` i.i.d. draws from `pmf`, from the given stream of `seed`.
pub fn sample_stream(pmf: &FinitePmf, n: usize, seed: u64, stream: u64) -> Sample {
    let mut rng = rng_for(seed, stream);
    let cdf = pmf.cdf_values();
    let values = (0..n)
        .map(|_| pmf.support()[draw_index(cdf, &mut rng)])
        .collect();
    Sample::new(values).expect("n >= 1")
}

/// Tallies of `n` draws from the given stream; identical to fitting
/// [`sample_stream`] but without materializing the observations.
pub fn sample_counts(pmf: &FinitePmf, n: u64, seed: u64, stream: u64) -> Vec<u64> {
    let mut counts = vec![0; pmf.len()];
    add_draws(pmf, n, &mut rng_for(seed, stream), &mut counts);
    counts
}

fn empirical(pmf: &FinitePmf, counts: Vec<u64>) -> EmpiricalDist {
    EmpiricalDist::from_counts(pmf.support().to_vec(), counts).expect("counts come from pmf")
}

/// `Some(estimate)`, or `None` when the sample leaves a needed cell empty.
fn estimate_or_undefined(
    emp: &EmpiricalDist,
    measure: MeasureId,
    j: Option<TimeIndex>,
    q: Option<&FinitePmf>,
    conv: IndexConvention,
) -> Result<Option<f64>> {
    match plugin_measure(emp, measure, j, q, conv) {
        Ok(v) => Ok(Some(v)),
        Err(e) if e.is_data_dependent() => Ok(None),
        Err(e) => Err(e),
    }
}

/// Standard normal cdf.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// One-sample Kolmogorov-Smirnov distance between the empirical cdf of
/// `draws` and the standard normal cdf.
pub fn ks_statistic(draws: &[f64]) -> Result<f64> {
    if draws.len() < 2 {
        return Err(Error::TooFewDraws(draws.len()));
    }
    let mut sorted = draws.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    Ok(sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = normal_cdf(x);
            let above = (i + 1) as f64 / n - f;
            let below = f - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max))
}

/// Asymptotic 95% critical value of the KS distance for `r` draws.
pub fn ks_critical_95(r: usize) -> f64 {
    1.36 / (r as f64).sqrt()
}

/// A replication study of one estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct McStudy {
    pub p: FinitePmf,
    pub q: Option<FinitePmf>,
    pub measure: MeasureId,
    pub j: Option<TimeIndex>,
    pub n: u64,
    pub replications: usize,
    pub seed: u64,
    pub cov_mode: CovMode,
    pub conv: IndexConvention,
}

impl McStudy {
    pub fn new(p: FinitePmf, measure: MeasureId, n: u64, replications: usize, seed: u64) -> Self {
        McStudy {
            p,
            q: None,
            measure,
            j: None,
            n,
            replications,
            seed,
            cov_mode: CovMode::default(),
            conv: IndexConvention::default(),
        }
    }

    pub fn with_q(mut self, q: FinitePmf) -> Self {
        self.q = Some(q);
        self
    }

    pub fn at(mut self, j: usize) -> Result<Self> {
        self.j = Some(TimeIndex::new(j)?);
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidStudy(
                "sample size n must be at least 1".into(),
            ));
        }
        if self.replications < 2 {
            return Err(Error::TooFewDraws(self.replications));
        }
        Ok(())
    }
}

/// One surviving replication.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McDraw {
    pub replication: usize,
    pub estimate: f64,
    /// `sqrt(n) (estimate - truth)`
    pub raw_error: f64,
    /// `raw_error / sigma`
    pub standardized: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct McReport {
    pub measure: MeasureId,
    pub j: Option<usize>,
    pub n: u64,
    pub replications: usize,
    pub truth: f64,
    pub sigma_sq: f64,
    pub draws: Vec<McDraw>,
    pub skipped: usize,
    /// Sample variance of the raw errors.
    pub empirical_variance: f64,
    pub ks_stat: f64,
}

/// Machine-readable digest of an [`McReport`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McSummary {
    pub measure: MeasureId,
    pub j: Option<usize>,
    pub n: u64,
    #[serde(rename = "R")]
    pub replications: usize,
    pub skipped: usize,
    pub truth: f64,
    pub empirical_variance: f64,
    pub sigma_sq: f64,
    pub variance_ratio: f64,
    pub ks_stat: f64,
    pub ks_critical_95: f64,
}

impl McReport {
    pub fn ks_critical_95(&self) -> f64 {
        ks_critical_95(self.draws.len())
    }

    pub fn ks_passes(&self) -> bool {
        self.ks_stat <= self.ks_critical_95()
    }

    pub fn variance_ratio(&self) -> f64 {
        self.empirical_variance / self.sigma_sq
    }

    pub fn summary(&self) -> McSummary {
        McSummary {
            measure: self.measure,
            j: self.j,
            n: self.n,
            replications: self.replications,
            skipped: self.skipped,
            truth: self.truth,
            empirical_variance: self.empirical_variance,
            sigma_sq: self.sigma_sq,
            variance_ratio: self.variance_ratio(),
            ks_stat: self.ks_stat,
            ks_critical_95: self.ks_critical_95(),
        }
    }

    /// One row per surviving replication.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for d in &self.draws {
            w.serialize(d).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }
}

fn sample_variance(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
}

/// Runs `study.replications` independent estimates and standardizes them.
///
/// Replications whose sample leaves a needed cell empty are skipped and
/// counted rather than imputed.
pub fn run_study(study: &McStudy) -> Result<McReport> {
    study.validate()?;
    let q = study.q.as_ref();
    let truth = evaluate(&study.p, q, study.measure, study.j, study.conv)?;
    let spec = sigma_sq(
        study.measure,
        &study.p,
        q,
        study.j,
        study.conv,
        study.cov_mode,
    )?;
    if !(spec.sigma_sq > 0.0) {
        return Err(Error::ZeroVariance);
    }

    let estimates: Vec<Option<f64>> = (0..study.replications)
        .into_par_iter()
        .map(|i| {
            let counts = sample_counts(&study.p, study.n, study.seed, i as u64);
            let emp = empirical(&study.p, counts);
            estimate_or_undefined(&emp, study.measure, study.j, q, study.conv)
        })
        .collect::<Result<_>>()?;

    let root_n = (study.n as f64).sqrt();
    let mut draws = Vec::with_capacity(estimates.len());
    for (replication, estimate) in estimates.iter().enumerate() {
        if let Some(estimate) = *estimate {
            draws.push(McDraw {
                replication,
                estimate,
                raw_error: root_n * (estimate - truth),
                standardized: standardize(estimate, truth, study.n, &spec)?,
            });
        }
    }
    let skipped = study.replications - draws.len();
    if draws.is_empty() {
        return Err(Error::AllReplicationsSkipped);
    }
    let standardized: Vec<f64> = draws.iter().map(|d| d.standardized).collect();
    let raw: Vec<f64> = draws.iter().map(|d| d.raw_error).collect();
    let (empirical_variance, ks_stat) = if draws.len() >= 2 {
        (sample_variance(&raw), ks_statistic(&standardized)?)
    } else {
        return Err(Error::TooFewDraws(draws.len()));
    };

    Ok(McReport {
        measure: study.measure,
        j: study.j.map(TimeIndex::get),
        n: study.n,
        replications: study.replications,
        truth,
        sigma_sq: spec.sigma_sq,
        draws,
        skipped,
        empirical_variance,
        ks_stat,
    })
}

/// The sample sizes `100, 200, ..., 30000`.
pub fn default_trace_grid() -> Vec<u64> {
    (1..=300).map(|k| 100 * k).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TracePoint {
    pub n: u64,
    /// `None` when the sample so far leaves a needed cell empty.
    pub estimate: Option<f64>,
    pub truth: f64,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceResult {
    pub measure: MeasureId,
    pub j: Option<usize>,
    pub truth: f64,
    pub points: Vec<TracePoint>,
}

impl TraceResult {
    pub fn n_grid(&self) -> Vec<u64> {
        self.points.iter().map(|p| p.n).collect()
    }

    pub fn estimates(&self) -> Vec<Option<f64>> {
        self.points.iter().map(|p| p.estimate).collect()
    }

    /// Columns `n, estimate, truth, status`; undefined estimates are empty.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for p in &self.points {
            w.serialize(p).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }
}

/// Estimates along one growing sample: each grid size extends the draws of
/// the previous one.
pub fn run_trace(
    p: &FinitePmf,
    q: Option<&FinitePmf>,
    measure: MeasureId,
    j: Option<TimeIndex>,
    conv: IndexConvention,
    n_grid: &[u64],
    seed: u64,
) -> Result<TraceResult> {
    if n_grid.is_empty() || n_grid[0] == 0 {
        return Err(Error::InvalidStudy(
            "trace grid must start at n >= 1".into(),
        ));
    }
    if n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidStudy(
            "trace grid must be strictly increasing".into(),
        ));
    }
    let truth = evaluate(p, q, measure, j, conv)?;
    let mut rng = rng_for(seed, 0);
    let mut counts = vec![0; p.len()];
    let mut drawn = 0;
    let mut points = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        add_draws(p, n - drawn, &mut rng, &mut counts);
        drawn = n;
        let emp = empirical(p, counts.clone());
        let point = match plugin_measure(&emp, measure, j, q, conv) {
            Ok(v) => TracePoint {
                n,
                estimate: Some(v),
                truth,
                status: "ok".into(),
            },
            Err(e) if e.is_data_dependent() => TracePoint {
                n,
                estimate: None,
                truth,
                status: format!("undefined: {e}"),
            },
            Err(e) => return Err(e),
        };
        points.push(point);
    }
    Ok(TraceResult {
        measure,
        j: j.map(TimeIndex::get),
        truth,
        points,
    })
}

/// A measure and, if it needs one, its time index.
pub type Target = (MeasureId, Option<TimeIndex>);

/// Outcome of the small-n versus large-n error comparison for one target.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyResult {
    pub measure: MeasureId,
    pub j: Option<usize>,
    /// Paths on which both estimates were defined.
    pub compared: usize,
    /// Paths on which the large-n error was strictly smaller.
    pub improved: usize,
    /// Paths discarded because an estimate was undefined.
    pub undefined: usize,
}

/// For each target, compares `|estimate(n_large) - truth|` with
/// `|estimate(n_small) - truth|` along nested sample paths (streams
/// `0, 1, ...` of `seed`) until `paths` comparisons with both estimates
/// defined have been made. Paths whose small sample leaves a needed cell
/// empty are replaced, up to `10 * paths` streams in total.
#[allow(clippy::too_many_arguments)]
pub fn run_consistency(
    p: &FinitePmf,
    q: Option<&FinitePmf>,
    targets: &[Target],
    conv: IndexConvention,
    n_small: u64,
    n_large: u64,
    paths: usize,
    seed: u64,
) -> Result<Vec<ConsistencyResult>> {
    if n_small == 0 || n_small >= n_large {
        return Err(Error::InvalidStudy("need 1 <= n_small < n_large".into()));
    }
    let truths: Vec<f64> = targets
        .iter()
        .map(|&(m, j)| evaluate(p, q, m, j, conv))
        .collect::<Result<_>>()?;
    let mut results: Vec<ConsistencyResult> = targets
        .iter()
        .map(|&(measure, j)| ConsistencyResult {
            measure,
            j: j.map(TimeIndex::get),
            compared: 0,
            improved: 0,
            undefined: 0,
        })
        .collect();

    let max_streams = 10 * paths as u64;
    let batch = paths as u64;
    let mut next = 0u64;
    while next < max_streams && results.iter().any(|r| r.compared < paths) {
        let streams: Vec<u64> = (next..(next + batch).min(max_streams)).collect();
        next += streams.len() as u64;
        let outcomes: Vec<Vec<(Option<f64>, Option<f64>)>> = streams
            .par_iter()
            .map(|&s| {
                let mut rng = rng_for(seed, s);
                let mut counts = vec![0; p.len()];
                add_draws(p, n_small, &mut rng, &mut counts);
                let small = empirical(p, counts.clone());
                add_draws(p, n_large - n_small, &mut rng, &mut counts);
                let large = empirical(p, counts);
                targets
                    .iter()
                    .map(|&(m, j)| {
                        Ok((
                            estimate_or_undefined(&small, m, j, q, conv)?,
                            estimate_or_undefined(&large, m, j, q, conv)?,
                        ))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        for per_path in outcomes {
            for ((res, truth), pair) in results.iter_mut().zip(&truths).zip(per_path) {
                if res.compared == paths {
                    continue;
                }
                match pair {
                    (Some(small), Some(large)) => {
                        res.compared += 1;
                        if (large - truth).abs() < (small - truth).abs() {
                            res.improved += 1;
                        }
                    }
                    _ => res.undefined += 1,
                }
            }
        }
    }
    Ok(results)
}

/// Outcome of the almost-sure bound check for one estimator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub measure: MeasureId,
    pub j: Option<usize>,
    #[serde(rename = "A")]
    pub a_bound: f64,
    pub replications: usize,
    /// Replications with `|error| <= slack * A * a_n`.
    pub within: usize,
    /// Replications where the estimate or the deviation was undefined.
    pub undefined: usize,
    /// Largest observed `|error| / a_n`.
    pub max_ratio: f64,
}

impl BoundCheck {
    pub fn fraction_within(&self) -> f64 {
        self.within as f64 / self.replications as f64
    }
}

/// Checks `|estimate - truth| <= slack * A * a_n` on `replications`
/// independent samples of size `n`, where `a_n` is the sup-deviation that
/// controls the estimator's almost-sure rate.
#[allow(clippy::too_many_arguments)]
pub fn run_bound_check(
    p: &FinitePmf,
    q: Option<&FinitePmf>,
    (measure, j): Target,
    conv: IndexConvention,
    n: u64,
    replications: usize,
    slack: f64,
    seed: u64,
) -> Result<BoundCheck> {
    if n == 0 || replications == 0 {
        return Err(Error::InvalidStudy(
            "need n >= 1 and at least one replication".into(),
        ));
    }
    let kind = DeviationKind::of(measure)?;
    let truth = evaluate(p, q, measure, j, conv)?;
    let a_bound = crate::asymptotics::as_bound(measure, p, q, j, conv)?;
    let dev_index = match j {
        Some(j) if measure.needs_index() => j,
        _ => TimeIndex::new(p.len())?,
    };

    let ratios: Vec<Option<f64>> = (0..replications)
        .into_par_iter()
        .map(|i| {
            let emp = empirical(p, sample_counts(p, n, seed, i as u64));
            let Some(estimate) = estimate_or_undefined(&emp, measure, j, q, conv)? else {
                return Ok(None);
            };
            let dev = deviation_stats(&emp, p, dev_index)?;
            let error = (estimate - truth).abs();
            Ok(kind.select(&dev).map(|a_n| {
                if a_n > 0.0 {
                    error / a_n
                } else if error == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }))
        })
        .collect::<Result<_>>()?;

    let defined: Vec<f64> = ratios.iter().flatten().copied().collect();
    Ok(BoundCheck {
        measure,
        j: j.map(TimeIndex::get),
        a_bound,
        replications,
        within: defined.iter().filter(|&&r| r <= slack * a_bound).count(),
        undefined: replications - defined.len(),
        max_ratio: defined.iter().copied().fold(0.0, f64::max),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::examples::weibull6;
    use crate::estimators::fit_empirical;
    use proptest::prelude::*;

    fn two_point(a: f64) -> FinitePmf {
        FinitePmf::new(vec![1.0, 2.0], vec![a, 1.0 - a]).unwrap()
    }

    #[test]
    fn fair_coin_counts_within_four_sigma() {
        for seed in [0, 1, 42, 12345] {
            let emp = fit_empirical(&sample(&two_point(0.5), 10_000, seed), &[1.0, 2.0]).unwrap();
            for &c in emp.counts() {
                assert!((4600..=5400).contains(&c), "seed {seed}: {c}");
            }
        }
    }

    #[test]
    fn sampling_is_deterministic_and_closed() {
        let p = two_point(0.9);
        assert_eq!(sample(&p, 10, 7), sample(&p, 10, 7));
        assert!(sample(&p, 10, 7)
            .values()
            .iter()
            .all(|v| *v == 1.0 || *v == 2.0));
        assert_ne!(sample_stream(&p, 50, 7, 0), sample_stream(&p, 50, 7, 1));
    }

    #[test]
    fn counts_match_materialized_sample() {
        let w = weibull6();
        let s = sample_stream(&w, 5000, 3, 9);
        let emp = fit_empirical(&s, w.support()).unwrap();
        assert_eq!(emp.counts(), sample_counts(&w, 5000, 3, 9).as_slice());
    }

    /// Standard normal quantile by bisection on [`normal_cdf`].
    fn normal_quantile(p: f64) -> f64 {
        let (mut lo, mut hi) = (-40.0f64, 40.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if normal_cdf(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn ks_of_normal_quantiles_is_tiny() {
        let r = 1000;
        let draws: Vec<f64> = (1..=r)
            .map(|i| normal_quantile((i as f64 - 0.5) / r as f64))
            .collect();
        assert!(ks_statistic(&draws).unwrap() <= 0.5 / r as f64 + 1e-12);
    }

    #[test]
    fn ks_edge_cases() {
        assert_eq!(ks_statistic(&[0.0; 10]).unwrap(), 0.5);
        assert!((ks_statistic(&[-10.0, 10.0]).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(ks_statistic(&[1.0]), Err(Error::TooFewDraws(1)));
        assert!((ks_critical_95(2000) - 0.030411).abs() < 1e-6);
    }

    #[test]
    fn normal_cdf_reference_values() {
        assert_eq!(normal_cdf(0.0), 0.5);
        assert!((normal_cdf(1.959963984540054) - 0.975).abs() < 1e-12);
        assert!((normal_cdf(-1.0) - 0.15865525393145707).abs() < 1e-12);
    }

    #[test]
    fn smallest_study_runs() {
        let study = McStudy::new(two_point(0.5), MeasureId::CumPastEntropy, 1, 10, 0);
        match run_study(&study) {
            Ok(rep) => {
                assert_eq!(rep.draws.len() + rep.skipped, 10);
                assert!(rep.draws.iter().all(|d| d.standardized.is_finite()));
            }
            Err(Error::AllReplicationsSkipped) | Err(Error::TooFewDraws(_)) => {}
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn study_validation() {
        let study = McStudy::new(two_point(0.5), MeasureId::Shannon, 100, 1, 0);
        assert_eq!(run_study(&study), Err(Error::TooFewDraws(1)));
        let study = McStudy::new(two_point(0.5), MeasureId::Shannon, 0, 10, 0);
        assert!(matches!(run_study(&study), Err(Error::InvalidStudy(_))));
        // Uniform two-point Shannon has a degenerate first-order term.
        let study = McStudy::new(two_point(0.5), MeasureId::Shannon, 100, 10, 0);
        assert_eq!(run_study(&study), Err(Error::ZeroVariance));
    }

    #[test]
    fn study_is_deterministic() {
        let study = McStudy::new(weibull6(), MeasureId::CumResidualEntropy, 500, 64, 42);
        let a = run_study(&study).unwrap();
        let b = run_study(&study).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(a.draws.len() + a.skipped, 64);
    }

    #[test]
    fn replication_matches_standalone_sample() {
        let w = weibull6();
        let study = McStudy::new(w.clone(), MeasureId::CumPastEntropy, 300, 8, 5);
        let rep = run_study(&study).unwrap();
        for d in &rep.draws {
            let emp = fit_empirical(
                &sample_stream(&w, 300, 5, d.replication as u64),
                w.support(),
            )
            .unwrap();
            let est = plugin_measure(
                &emp,
                MeasureId::CumPastEntropy,
                None,
                None,
                Default::default(),
            )
            .unwrap();
            assert_eq!(est, d.estimate);
        }
    }

    #[test]
    fn trace_is_nested_and_exact_truth() {
        let w = weibull6();
        let grid = [10, 20, 40];
        let t = run_trace(
            &w,
            None,
            MeasureId::CumResidualEntropy,
            None,
            Default::default(),
            &grid,
            1,
        )
        .unwrap();
        assert_eq!(t.n_grid(), grid);
        assert_eq!(
            t.truth.to_bits(),
            crate::measures::cum_residual_entropy(&w).to_bits()
        );
        // The first 10 draws of the path are the standalone 10-draw sample.
        let emp = fit_empirical(&sample(&w, 10, 1), w.support()).unwrap();
        let first = plugin_measure(
            &emp,
            MeasureId::CumResidualEntropy,
            None,
            None,
            Default::default(),
        );
        match first {
            Ok(v) => assert_eq!(t.points[0].estimate, Some(v)),
            Err(_) => assert_eq!(t.points[0].estimate, None),
        }
    }

    #[test]
    fn trace_rejects_bad_grids() {
        let w = weibull6();
        for grid in [&[][..], &[0, 10][..], &[10, 10][..], &[20, 10][..]] {
            assert!(matches!(
                run_trace(
                    &w,
                    None,
                    MeasureId::Shannon,
                    None,
                    Default::default(),
                    grid,
                    0
                ),
                Err(Error::InvalidStudy(_))
            ));
        }
    }

    #[test]
    fn two_point_shannon_trace_bounded_by_log2() {
        let t = run_trace(
            &two_point(0.5),
            None,
            MeasureId::Shannon,
            None,
            Default::default(),
            &[1, 2, 5, 50, 500],
            3,
        )
        .unwrap();
        for p in &t.points {
            if let Some(v) = p.estimate {
                assert!(v <= std::f64::consts::LN_2 + 1e-15);
            }
        }
    }

    #[test]
    fn default_grid_shape() {
        let g = default_trace_grid();
        assert_eq!(g.len(), 300);
        assert_eq!((g[0], g[299]), (100, 30_000));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        /// Each cell frequency is unbiased with binomial variance.
        #[test]
        fn cell_frequencies_unbiased(seed in any::<u64>()) {
            let w = weibull6();
            let (n, reps) = (200u64, 400u64);
            let k = 2;
            let freqs: Vec<f64> = (0..reps)
                .map(|s| sample_counts(&w, n, seed, s)[k] as f64 / n as f64)
                .collect();
            let mean = freqs.iter().sum::<f64>() / reps as f64;
            let pk = w.probs()[k];
            let var = pk * (1.0 - pk) / n as f64;
            // Mean of 400 frequencies: 5 standard errors.
            prop_assert!((mean - pk).abs() < 5.0 * (var / reps as f64).sqrt());
            let sv = sample_variance(&freqs);
            prop_assert!((sv / var - 1.0).abs() < 0.4);
        }

        /// Along one nested path the cell sup-deviation shrinks over decades.
        #[test]
        fn cell_deviation_shrinks_over_decades(seed in any::<u64>()) {
            let w = weibull6();
            let mut rng = rng_for(seed, 0);
            let mut counts = vec![0; w.len()];
            let mut drawn = 0;
            let mut devs = Vec::new();
            for n in [100u64, 1_000, 10_000, 100_000] {
                add_draws(&w, n - drawn, &mut rng, &mut counts);
                drawn = n;
                let emp = empirical(&w, counts.clone());
                let d = deviation_stats(&emp, &w, TimeIndex::new(1).unwrap()).unwrap();
                devs.push(d.a_n_p);
            }
            prop_assert!(devs[3] < devs[0], "{devs:?}");
        }
    }
}
