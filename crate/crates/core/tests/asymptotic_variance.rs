//! Asymptotic variances checked against an explicit multinomial covariance
//! matrix applied to numerically differentiated oracle functions, and
//! against simulation.

mod common;

use common::oracle;
use lifetime_info::distribution::examples::{example2, weibull6};
use lifetime_info::{
    as_bound, run_study, sigma_sq, CovMode, Error, FinitePmf, IndexConvention, McStudy, MeasureId,
    TimeIndex,
};
use proptest::prelude::*;

const CONVENTIONS: [IndexConvention; 2] = [
    IndexConvention::PaperInclusive,
    IndexConvention::ConditionalProper,
];

/// Every admissible (measure, j) for a pmf of size r; KL has no theory.
fn targets(r: usize, paired: bool) -> Vec<(MeasureId, Option<usize>)> {
    MeasureId::ALL
        .into_iter()
        .filter(|m| m.is_paired() == paired && *m != MeasureId::KlDivergence)
        .flat_map(|m| {
            let js: Vec<Option<usize>> = if !m.needs_index() {
                vec![None]
            } else if m.is_residual() {
                (1..r).map(Some).collect()
            } else {
                (1..=r).map(Some).collect()
            };
            js.into_iter().map(move |j| (m, j))
        })
        .collect()
}

fn tj(j: Option<usize>) -> Option<TimeIndex> {
    j.map(|j| TimeIndex::new(j).unwrap())
}

fn oracle_variance(
    m: MeasureId,
    p: &FinitePmf,
    q: Option<&FinitePmf>,
    j: Option<usize>,
    conv: IndexConvention,
) -> f64 {
    let proper = conv == IndexConvention::ConditionalProper;
    let g = oracle::numerical_gradient(
        m,
        p.support(),
        p.probs(),
        q.map(FinitePmf::probs),
        j,
        proper,
    );
    oracle::multinomial_quadratic_form(p.probs(), &g)
}

fn assert_matches_oracle(p: &FinitePmf, q: Option<&FinitePmf>) {
    for (m, j) in targets(p.len(), q.is_some()) {
        for conv in CONVENTIONS {
            let spec = sigma_sq(m, p, q, tj(j), conv, CovMode::DeltaMethod).unwrap();
            let want = oracle_variance(m, p, q, j, conv);
            let tol = 1e-6 * want.abs().max(1.0);
            assert!(
                (spec.sigma_sq - want).abs() <= tol,
                "{m} j={j:?} {conv:?}: {} vs {want}",
                spec.sigma_sq
            );
        }
    }
}

#[test]
fn delta_variance_matches_covariance_matrix_oracle_on_examples() {
    assert_matches_oracle(&weibull6(), None);
    let pq = example2();
    assert_matches_oracle(pq.p(), None);
    assert_matches_oracle(pq.p(), Some(pq.q()));
}

#[test]
#[allow(clippy::approx_constant)]
fn printed_two_point_values() {
    let u = FinitePmf::new(vec![1.0, 2.0], vec![0.5, 0.5]).unwrap();
    let conv = IndexConvention::PaperInclusive;
    let spec = sigma_sq(
        MeasureId::CumResidualEntropy,
        &u,
        None,
        None,
        conv,
        CovMode::DeltaMethod,
    )
    .unwrap();
    assert!((spec.a_bound - 0.306853).abs() < 1e-6);
    let hand = 0.25 * (1.0 + 0.5f64.ln()).powi(2);
    assert!((spec.sigma_sq - hand).abs() < 1e-15);
    assert!((spec.sigma_sq - 0.0235397).abs() < 1e-7);
    let a = as_bound(MeasureId::CumResidualInaccuracy, &u, Some(&u), None, conv).unwrap();
    assert!((a - 0.693147).abs() < 1e-6);
}

#[test]
fn mean_residual_at_terminal_index_is_rejected() {
    let r = sigma_sq(
        MeasureId::MeanResidual,
        &weibull6(),
        None,
        tj(Some(6)),
        IndexConvention::PaperInclusive,
        CovMode::DeltaMethod,
    );
    assert_eq!(r, Err(Error::ResidualAtTerminal(6)));
}

#[test]
fn cumulative_inaccuracy_variance_is_mode_independent() {
    let pq = example2();
    let conv = IndexConvention::PaperInclusive;
    for m in [
        MeasureId::CumResidualInaccuracy,
        MeasureId::CumPastInaccuracy,
    ] {
        let a = sigma_sq(m, pq.p(), Some(pq.q()), None, conv, CovMode::DeltaMethod).unwrap();
        let b = sigma_sq(
            m,
            pq.p(),
            Some(pq.q()),
            None,
            conv,
            CovMode::PaperIndependent,
        )
        .unwrap();
        assert_eq!(a.sigma_sq.to_bits(), b.sigma_sq.to_bits(), "{m}");
    }
}

/// The delta-method variance for every admissible target on both examples
/// agrees with the simulated variance of `sqrt(n) (estimate - truth)`.
/// Targets whose estimator is a constant (zero variance) are skipped.
#[test]
fn delta_variance_matches_simulation_on_examples() {
    let w = weibull6();
    let pq = example2();
    let cases = [(&w, None), (pq.p(), None), (pq.p(), Some(pq.q()))];
    let mut checked = 0;
    for (p, q) in cases {
        for (m, j) in targets(p.len(), q.is_some()) {
            let mut study = McStudy::new(p.clone(), m, 10_000, 5000, 42);
            study.q = q.cloned();
            study.j = tj(j);
            match run_study(&study) {
                Ok(rep) => {
                    let ratio = rep.variance_ratio();
                    assert!((ratio - 1.0).abs() <= 0.10, "{m} j={j:?}: ratio {ratio}");
                    checked += 1;
                }
                Err(Error::ZeroVariance) => {}
                Err(e) => panic!("{m} j={j:?}: {e}"),
            }
        }
    }
    assert!(checked >= 40, "{checked}");
}

fn random_pmf() -> impl Strategy<Value = FinitePmf> {
    (2usize..=7).prop_flat_map(|r| {
        prop::collection::vec(1u32..=50, r).prop_map(|w| {
            let total: u32 = w.iter().sum();
            let r = w.len();
            let mut probs: Vec<f64> = w.iter().map(|&v| v as f64 / total as f64).collect();
            let head: f64 = probs[..r - 1].iter().sum();
            probs[r - 1] = 1.0 - head;
            FinitePmf::new((1..=r).map(|k| k as f64).collect(), probs).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn delta_variance_is_nonnegative_and_matches_oracle(p in random_pmf(), q in random_pmf()) {
        let q = FinitePmf::new(p.support().to_vec(), resize(q.probs(), p.len())).unwrap();
        for (paired, qq) in [(false, None), (true, Some(&q))] {
            for (m, j) in targets(p.len(), paired) {
                for conv in CONVENTIONS {
                    let spec = sigma_sq(m, &p, qq, tj(j), conv, CovMode::DeltaMethod).unwrap();
                    prop_assert!(spec.sigma_sq >= 0.0);
                    let want = oracle_variance(m, &p, qq, j, conv);
                    prop_assert!((spec.sigma_sq - want).abs() <= 1e-5 * want.abs().max(1.0),
                        "{} j={:?}: {} vs {}", m, j, spec.sigma_sq, want);
                }
            }
        }
    }

    #[test]
    fn constants_ignore_support_labels(p in random_pmf(), shift in 0.5f64..10.0, scale in 0.1f64..5.0) {
        let relabeled: Vec<f64> = p.support().iter().map(|x| shift + scale * x).collect();
        let p2 = FinitePmf::new(relabeled, p.probs().to_vec()).unwrap();
        for (m, j) in targets(p.len(), false) {
            for mode in [CovMode::DeltaMethod, CovMode::PaperIndependent] {
                let conv = IndexConvention::PaperInclusive;
                let a = sigma_sq(m, &p, None, tj(j), conv, mode).unwrap();
                let b = sigma_sq(m, &p2, None, tj(j), conv, mode).unwrap();
                prop_assert_eq!(a, b);
            }
        }
    }
}

/// Reuses the weights of `probs` for a pmf of length `r`.
fn resize(probs: &[f64], r: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..r).map(|k| probs[k % probs.len()] + 0.01).collect();
    let total: f64 = w.iter().sum();
    let mut out: Vec<f64> = w.iter().map(|v| v / total).collect();
    let head: f64 = out[..r - 1].iter().sum();
    out[r - 1] = 1.0 - head;
    out
}
