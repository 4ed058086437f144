//! Shannon-type information measures of discrete lifetime distributions,
//! their plug-in estimators, asymptotic theory and Monte Carlo checks.
//!
//! * [`distribution`]: validated pmfs on a sorted support, cdf and survival.
//! * [`measures`]: exact residual/past/cumulative entropies, mean residual
//!   and past lifetimes, and the inaccuracy family.
//! * [`estimators`]: empirical distributions and plug-in estimates.
//! * [`asymptotics`]: almost-sure bound constants and asymptotic variances.
//! * [`montecarlo`]: seeded sampling, replication studies and traces.
//! * [`formats`]: JSON and text file formats.

// Validation is written as `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod distribution;
pub mod error;
pub mod estimators;
pub mod formats;
pub mod measures;
pub mod montecarlo;

pub use asymptotics::{as_bound, sigma_sq, standardize, AsymptoticSpec, CovMode, DeviationKind};
pub use distribution::{FinitePmf, PairedPmfs, TimeIndex};
pub use error::{Error, Result};
pub use estimators::{
    deviation_stats, fit_empirical, plugin_measure, DeviationStats, EmpiricalDist, Sample,
};
pub use measures::{evaluate, IndexConvention, MeasureId};
pub use montecarlo::{ks_statistic, run_study, run_trace, McReport, McStudy, TraceResult};
