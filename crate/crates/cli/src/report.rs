//! Rendering of command results as text, CSV or JSON.
//!
//! Undefined cells ("×" in the published tables) are `null` in JSON and an
//! empty field in CSV, always accompanied by a status string; they are never
//! written as NaN. Numbers are printed in shortest round-trip form, so every
//! digit needed to reproduce the double is present.

use lifetime_info::{Error, MeasureId};
use serde::Serialize;

pub const CROSS: &str = "×";

/// Machine-readable status of a cell.
pub fn status_code(e: &Error) -> &'static str {
    match e.root() {
        Error::ResidualAtTerminal(_) => "residual-at-terminal",
        Error::ZeroCellInRange(_) => "zero-cell-in-range",
        Error::EmptyTail(_) => "empty-tail",
        Error::EmptyHead(_) => "empty-head",
        _ => "error",
    }
}

pub fn num(v: f64) -> String {
    format!("{v}")
}

pub fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn opt_index(j: Option<usize>) -> String {
    j.map(|j| j.to_string()).unwrap_or_default()
}

/// Value for human-readable output.
pub fn display(v: Option<f64>) -> String {
    v.map(num).unwrap_or_else(|| CROSS.to_string())
}

pub fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

pub fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

/// An exact measure value at one time index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cell {
    pub measure: MeasureId,
    pub j: Option<usize>,
    pub value: Option<f64>,
    pub status: String,
}

impl Cell {
    pub fn new(measure: MeasureId, j: Option<usize>, result: &Result<f64, Error>) -> Self {
        let (value, status) = match result {
            Ok(v) => (Some(*v), "ok".to_string()),
            Err(e) => (None, status_code(e).to_string()),
        };
        Cell {
            measure,
            j,
            value,
            status,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactReport {
    pub measure: MeasureId,
    pub convention: lifetime_info::IndexConvention,
    pub cells: Vec<Cell>,
}

impl ExactReport {
    pub fn text(&self) -> String {
        let mut s = format!("{} ({:?})\n", self.measure, self.convention);
        for c in &self.cells {
            let j = c.j.map(|j| format!("j={j}")).unwrap_or_else(|| "-".into());
            match c.value {
                Some(v) => s.push_str(&format!("{j:<6} {}\n", num(v))),
                None => s.push_str(&format!("{j:<6} {CROSS}  ({})\n", c.status)),
            }
        }
        s
    }

    pub fn csv(&self) -> String {
        csv_table(
            &["measure", "j", "value", "status"],
            self.cells.iter().map(|c| {
                vec![
                    c.measure.to_string(),
                    opt_index(c.j),
                    opt(c.value),
                    c.status.clone(),
                ]
            }),
        )
    }
}

/// A plug-in estimate at one time index, with the error against the truth
/// when a true distribution was supplied.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateCell {
    pub measure: MeasureId,
    pub j: Option<usize>,
    pub estimate: Option<f64>,
    pub status: String,
    pub truth: Option<f64>,
    pub error: Option<f64>,
    pub deviations: Option<lifetime_info::DeviationStats>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateReport {
    pub measure: MeasureId,
    pub convention: lifetime_info::IndexConvention,
    pub n: u64,
    pub counts: Vec<u64>,
    pub cells: Vec<EstimateCell>,
}

impl EstimateReport {
    pub fn text(&self) -> String {
        let mut s = format!("{} ({:?}), n = {}\n", self.measure, self.convention, self.n);
        for c in &self.cells {
            let j = c.j.map(|j| format!("j={j}")).unwrap_or_else(|| "-".into());
            s.push_str(&format!("{j:<6} estimate {}", display(c.estimate)));
            if c.estimate.is_none() {
                s.push_str(&format!("  ({})", c.status));
            }
            if let Some(t) = c.truth {
                s.push_str(&format!("  truth {}  error {}", num(t), display(c.error)));
            }
            if let Some(d) = &c.deviations {
                s.push_str(&format!(
                    "  a_n(p) {}  a_n(P) {}  a_n(P̄) {}",
                    num(d.a_n_p),
                    num(d.a_n_cdf),
                    num(d.a_n_surv)
                ));
            }
            s.push('\n');
        }
        s
    }

    pub fn csv(&self) -> String {
        csv_table(
            &[
                "measure", "j", "estimate", "status", "truth", "error", "a_n_p", "a_n_cdf",
                "a_n_surv", "a_rn_p", "a_pn_p",
            ],
            self.cells.iter().map(|c| {
                let d = c.deviations.as_ref();
                vec![
                    c.measure.to_string(),
                    opt_index(c.j),
                    opt(c.estimate),
                    c.status.clone(),
                    opt(c.truth),
                    opt(c.error),
                    opt(d.map(|d| d.a_n_p)),
                    opt(d.map(|d| d.a_n_cdf)),
                    opt(d.map(|d| d.a_n_surv)),
                    opt(d.and_then(|d| d.a_rn_p)),
                    opt(d.and_then(|d| d.a_pn_p)),
                ]
            }),
        )
    }
}

pub fn spec_text(spec: &lifetime_info::AsymptoticSpec) -> String {
    format!(
        "measure    {}\nj          {}\nA          {}\nsigma_sq   {}\nsigma1_sq  {}\nsigma2_sq  {}\ncov_term   {}\ncov_mode   {:?}\n",
        spec.measure,
        spec.j.map(|j| j.to_string()).unwrap_or_else(|| "-".into()),
        num(spec.a_bound),
        num(spec.sigma_sq),
        num(spec.sigma1_sq),
        num(spec.sigma2_sq),
        num(spec.cov_term),
        spec.cov_mode
    )
}

pub fn spec_csv(spec: &lifetime_info::AsymptoticSpec) -> String {
    csv_table(
        &[
            "measure",
            "j",
            "A",
            "sigma_sq",
            "sigma1_sq",
            "sigma2_sq",
            "cov_term",
            "cov_mode",
        ],
        [vec![
            spec.measure.to_string(),
            opt_index(spec.j),
            num(spec.a_bound),
            num(spec.sigma_sq),
            num(spec.sigma1_sq),
            num(spec.sigma2_sq),
            num(spec.cov_term),
            match spec.cov_mode {
                lifetime_info::CovMode::PaperIndependent => "paper-independent".into(),
                lifetime_info::CovMode::DeltaMethod => "delta".into(),
            },
        ]],
    )
}

pub fn mc_summary_text(s: &lifetime_info::montecarlo::McSummary) -> String {
    format!(
        "measure              {}\nj                    {}\nn                    {}\nR                    {}\nskipped              {}\ntruth                {}\nempirical_variance   {}\nsigma_sq             {}\nvariance_ratio       {}\nks_stat              {}\nks_critical_95       {}\n",
        s.measure,
        s.j.map(|j| j.to_string()).unwrap_or_else(|| "-".into()),
        s.n,
        s.replications,
        s.skipped,
        num(s.truth),
        num(s.empirical_variance),
        num(s.sigma_sq),
        num(s.variance_ratio),
        num(s.ks_stat),
        num(s.ks_critical_95)
    )
}

pub fn mc_summary_csv(s: &lifetime_info::montecarlo::McSummary) -> String {
    csv_table(
        &[
            "measure",
            "j",
            "n",
            "R",
            "skipped",
            "truth",
            "empirical_variance",
            "sigma_sq",
            "variance_ratio",
            "ks_stat",
            "ks_critical_95",
        ],
        [vec![
            s.measure.to_string(),
            opt_index(s.j),
            s.n.to_string(),
            s.replications.to_string(),
            s.skipped.to_string(),
            num(s.truth),
            num(s.empirical_variance),
            num(s.sigma_sq),
            num(s.variance_ratio),
            num(s.ks_stat),
            num(s.ks_critical_95),
        ]],
    )
}

pub fn trace_text(t: &lifetime_info::TraceResult) -> String {
    let mut s = format!(
        "{}{} truth {}\n",
        t.measure,
        t.j.map(|j| format!(" j={j}")).unwrap_or_default(),
        num(t.truth)
    );
    for p in &t.points {
        s.push_str(&format!("{:>8} {}", p.n, display(p.estimate)));
        if p.estimate.is_none() {
            s.push_str(&format!("  ({})", p.status));
        }
        s.push('\n');
    }
    s
}

#[derive(Serialize)]
pub struct TraceJson<'a> {
    pub measure: MeasureId,
    pub j: Option<usize>,
    pub truth: f64,
    pub points: &'a [lifetime_info::montecarlo::TracePoint],
}

pub fn tables_text(rows: &[crate::tables::TableRow]) -> String {
    let mut s = String::new();
    let mut current = 0;
    for r in rows {
        if r.table != current {
            current = r.table;
            s.push_str(&format!("Table {current}\n"));
        }
        let j = r.j.map(|j| format!("({j})")).unwrap_or_default();
        s.push_str(&format!(
            "  {:<14} printed {:<12} computed {:<22} {:?}",
            format!("{}{j}", r.quantity),
            display(r.printed),
            display(r.computed),
            r.verdict
        ));
        if let Some(note) = r.note {
            s.push_str(&format!("  [{note}]"));
        }
        s.push('\n');
    }
    let mismatches = rows
        .iter()
        .filter(|r| r.verdict == crate::tables::Verdict::Mismatch)
        .count();
    s.push_str(&format!("{mismatches} mismatching cell(s)\n"));
    s
}

pub fn tables_csv(rows: &[crate::tables::TableRow]) -> String {
    csv_table(
        &[
            "table",
            "quantity",
            "j",
            "printed",
            "computed",
            "status",
            "abs_diff",
            "tolerance",
            "verdict",
            "note",
        ],
        rows.iter().map(|r| {
            vec![
                r.table.to_string(),
                r.quantity.to_string(),
                opt_index(r.j),
                opt(r.printed),
                opt(r.computed),
                r.status.clone(),
                opt(r.abs_diff),
                num(r.tolerance),
                serde_json::to_value(r.verdict)
                    .ok()
                    .and_then(|v| v.as_str().map(String::from))
                    .unwrap_or_default(),
                r.note.unwrap_or_default().to_string(),
            ]
        }),
    )
}
