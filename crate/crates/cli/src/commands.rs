use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use lifetime_info::formats::{parse_dist, parse_pair, parse_sample, parse_support};
use lifetime_info::montecarlo::{run_study, run_trace, McStudy};
use lifetime_info::{
    deviation_stats, evaluate, plugin_measure, sigma_sq, Error, FinitePmf, IndexConvention,
    MeasureId, TimeIndex,
};

use crate::args::{
    AsymptoticsArgs, Command, EstimateArgs, ExactArgs, Format, McArgs, MeasureArgs, ModelArgs,
    TablesArgs, TraceArgs,
};
use crate::error::{exit, CliError};
use crate::report::{self, Cell, EstimateCell, EstimateReport, ExactReport};
use crate::tables::{evaluate_tables, Verdict};

type Result<T> = std::result::Result<T, CliError>;

/// Runs one command; returns the process exit code.
pub fn run(command: Command, stdout: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Exact(a) => cmd_exact(a, stdout),
        Command::Estimate(a) => cmd_estimate(a, stdout),
        Command::Asymptotics(a) => cmd_asymptotics(a, stdout),
        Command::Mc(a) => cmd_mc(a, stdout),
        Command::Trace(a) => cmd_trace(a, stdout),
        Command::Tables(a) => cmd_tables(a, stdout),
    }
}

/// The true distribution and, for inaccuracy measures, the experimenter's.
pub struct Model {
    pub p: FinitePmf,
    pub q: Option<FinitePmf>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_file<T>(path: &Path, parse: impl Fn(&str) -> lifetime_info::Result<T>) -> Result<T> {
    parse(&read(path)?).map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })
}

fn load_pair(path: &Path) -> Result<Model> {
    let (p, q) = parse_file(path, parse_pair)?.into_parts();
    Ok(Model { p, q: Some(q) })
}

pub fn load_model(args: &ModelArgs) -> Result<Model> {
    match (&args.dist, &args.pair) {
        (Some(path), None) => Ok(Model {
            p: parse_file(path, parse_dist)?,
            q: None,
        }),
        (None, Some(path)) => load_pair(path),
        _ => Err(CliError::Usage(
            "exactly one of --dist or --pair is required".into(),
        )),
    }
}

fn q_for(measure: MeasureId, model: &Model) -> Result<Option<&FinitePmf>> {
    if !measure.is_paired() {
        return Ok(None);
    }
    model
        .q
        .as_ref()
        .map(Some)
        .ok_or_else(|| CliError::Usage(format!("measure {measure} needs --pair")))
}

/// The requested index, or every index when an indexed measure gets none.
fn indices(m: &MeasureArgs, r: usize) -> Result<Vec<Option<TimeIndex>>> {
    match (m.measure.needs_index(), m.j) {
        (false, None) => Ok(vec![None]),
        (false, Some(_)) => Err(CliError::Usage(format!(
            "measure {} does not take --j",
            m.measure
        ))),
        (true, Some(j)) => {
            if j == 0 || j > r {
                return Err(Error::IndexOutOfRange { j, r }.into());
            }
            Ok(vec![Some(TimeIndex::new(j)?)])
        }
        (true, None) => (1..=r).map(|j| Ok(Some(TimeIndex::new(j)?))).collect(),
    }
}

fn single_index(m: &MeasureArgs, r: usize) -> Result<Option<TimeIndex>> {
    if m.measure.needs_index() && m.j.is_none() {
        return Err(Error::MissingIndex(m.measure.name()).into());
    }
    Ok(indices(m, r)?.pop().flatten())
}

/// Errors that describe the request rather than a cell.
fn cell_or_fail(result: lifetime_info::Result<f64>) -> Result<lifetime_info::Result<f64>> {
    match result {
        Err(e) if !e.is_data_dependent() && !matches!(e, Error::ResidualAtTerminal(_)) => {
            Err(e.into())
        }
        other => Ok(other),
    }
}

fn emit(out: &Option<PathBuf>, stdout: &mut dyn Write, content: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, content).map_err(|source| CliError::Write {
            path: path.clone(),
            source,
        }),
        None => Ok(stdout.write_all(content.as_bytes())?),
    }
}

pub fn exact_report(model: &Model, m: &MeasureArgs) -> Result<ExactReport> {
    let q = q_for(m.measure, model)?;
    let conv: IndexConvention = m.convention.into();
    let cells = indices(m, model.p.len())?
        .into_iter()
        .map(|j| {
            let result = cell_or_fail(evaluate(&model.p, q, m.measure, j, conv))?;
            Ok(Cell::new(m.measure, j.map(TimeIndex::get), &result))
        })
        .collect::<Result<_>>()?;
    Ok(ExactReport {
        measure: m.measure,
        convention: conv,
        cells,
    })
}

fn cmd_exact(a: ExactArgs, stdout: &mut dyn Write) -> Result<i32> {
    let model = load_model(&a.model)?;
    let rep = exact_report(&model, &a.measure)?;
    let text = match a.output.format.unwrap_or(Format::Text) {
        Format::Text => rep.text(),
        Format::Csv => rep.csv(),
        Format::Json => report::json(&rep),
    };
    emit(&a.output.out, stdout, &text)?;
    Ok(exit::SUCCESS)
}

fn cmd_estimate(a: EstimateArgs, stdout: &mut dyn Write) -> Result<i32> {
    let model = match (&a.dist, &a.pair, &a.support) {
        (Some(path), None, None) => Some(Model {
            p: parse_file(path, parse_dist)?,
            q: None,
        }),
        (None, Some(path), None) => Some(load_pair(path)?),
        (None, None, Some(_)) => None,
        _ => {
            return Err(CliError::Usage(
                "exactly one of --dist, --pair or --support is required".into(),
            ))
        }
    };
    let support = match (&model, &a.support) {
        (Some(m), _) => m.p.support().to_vec(),
        (None, Some(path)) => parse_file(path, parse_support)?,
        (None, None) => unreachable!("checked above"),
    };
    let q = match &model {
        Some(m) => q_for(a.measure.measure, m)?,
        None if a.measure.measure.is_paired() => {
            return Err(CliError::Usage(format!(
                "measure {} needs --pair for the experimenter distribution",
                a.measure.measure
            )))
        }
        None => None,
    };
    let data = parse_file(&a.sample, parse_sample)?;
    let emp = data.fit(&support).map_err(|source| CliError::Input {
        path: a.sample.clone(),
        source,
    })?;

    let m = &a.measure;
    let conv: IndexConvention = m.convention.into();
    let r = support.len();
    let mut data_problem = false;
    let mut cells = Vec::new();
    for j in indices(m, r)? {
        let result = cell_or_fail(plugin_measure(&emp, m.measure, j, q, conv))?;
        data_problem |= matches!(&result, Err(e) if e.is_data_dependent());
        let cell = Cell::new(m.measure, j.map(TimeIndex::get), &result);
        let (truth, deviations) = match &model {
            Some(model) => {
                let truth = evaluate(&model.p, q, m.measure, j, conv).ok();
                let dev_j = j.unwrap_or(TimeIndex::new(r)?);
                (truth, Some(deviation_stats(&emp, &model.p, dev_j)?))
            }
            None => (None, None),
        };
        cells.push(EstimateCell {
            measure: cell.measure,
            j: cell.j,
            estimate: cell.value,
            status: cell.status,
            truth,
            error: cell.value.zip(truth).map(|(e, t)| e - t),
            deviations,
        });
    }
    let rep = EstimateReport {
        measure: m.measure,
        convention: conv,
        n: emp.n(),
        counts: emp.counts().to_vec(),
        cells,
    };
    let text = match a.output.format.unwrap_or(Format::Text) {
        Format::Text => rep.text(),
        Format::Csv => rep.csv(),
        Format::Json => report::json(&rep),
    };
    emit(&a.output.out, stdout, &text)?;
    Ok(if data_problem {
        exit::DATA
    } else {
        exit::SUCCESS
    })
}

fn cmd_asymptotics(a: AsymptoticsArgs, stdout: &mut dyn Write) -> Result<i32> {
    let model = load_model(&a.model)?;
    let q = q_for(a.measure.measure, &model)?;
    let j = single_index(&a.measure, model.p.len())?;
    let spec = sigma_sq(
        a.measure.measure,
        &model.p,
        q,
        j,
        a.measure.convention.into(),
        a.cov_mode.into(),
    )?;
    let text = match a.output.format.unwrap_or(Format::Json) {
        Format::Text => report::spec_text(&spec),
        Format::Csv => report::spec_csv(&spec),
        Format::Json => report::json(&spec),
    };
    emit(&a.output.out, stdout, &text)?;
    Ok(exit::SUCCESS)
}

/// Draws CSV and summary JSON of one study, as written by `mc`.
pub fn mc_artifacts(report: &lifetime_info::McReport) -> (String, String) {
    (report.to_csv(), report::json(&report.summary()))
}

fn cmd_mc(a: McArgs, stdout: &mut dyn Write) -> Result<i32> {
    let model = load_model(&a.model)?;
    let q = q_for(a.measure.measure, &model)?.cloned();
    let study = McStudy {
        j: single_index(&a.measure, model.p.len())?,
        p: model.p,
        q,
        measure: a.measure.measure,
        n: a.n,
        replications: a.reps,
        seed: a.seed,
        cov_mode: a.cov_mode.into(),
        conv: a.measure.convention.into(),
    };
    let rep = run_study(&study)?;
    let (draws, summary_json) = mc_artifacts(&rep);
    if let Some(path) = &a.out {
        emit(&Some(path.clone()), stdout, &draws)?;
    }
    if let Some(path) = &a.summary {
        emit(&Some(path.clone()), stdout, &summary_json)?;
    }
    let summary = rep.summary();
    let text = match a.format.unwrap_or(Format::Json) {
        Format::Text => report::mc_summary_text(&summary),
        Format::Csv => report::mc_summary_csv(&summary),
        Format::Json => summary_json,
    };
    stdout.write_all(text.as_bytes())?;
    let passes = rep.ks_passes() && (rep.variance_ratio() - 1.0).abs() <= 0.10;
    Ok(if a.assert && !passes {
        exit::STATISTICAL
    } else {
        exit::SUCCESS
    })
}

fn cmd_trace(a: TraceArgs, stdout: &mut dyn Write) -> Result<i32> {
    if a.step == 0 || a.n < a.step {
        return Err(CliError::Usage("need 1 <= --step <= --n".into()));
    }
    let model = load_model(&a.model)?;
    let q = q_for(a.measure.measure, &model)?;
    let j = single_index(&a.measure, model.p.len())?;
    let grid: Vec<u64> = (1..=a.n / a.step).map(|k| k * a.step).collect();
    let trace = run_trace(
        &model.p,
        q,
        a.measure.measure,
        j,
        a.measure.convention.into(),
        &grid,
        a.seed,
    )?;
    let text = match a.output.format.unwrap_or(Format::Csv) {
        Format::Text => report::trace_text(&trace),
        Format::Csv => trace.to_csv(),
        Format::Json => report::json(&report::TraceJson {
            measure: trace.measure,
            j: trace.j,
            truth: trace.truth,
            points: &trace.points,
        }),
    };
    emit(&a.output.out, stdout, &text)?;
    Ok(exit::SUCCESS)
}

fn cmd_tables(a: TablesArgs, stdout: &mut dyn Write) -> Result<i32> {
    let rows = evaluate_tables();
    let mismatches = rows
        .iter()
        .filter(|r| r.verdict == Verdict::Mismatch)
        .count();
    let text = match a.output.format.unwrap_or(Format::Text) {
        Format::Text => report::tables_text(&rows),
        Format::Csv => report::tables_csv(&rows),
        Format::Json => report::json(&serde_json::json!({
            "rows": rows,
            "mismatches": mismatches,
        })),
    };
    emit(&a.output.out, stdout, &text)?;
    Ok(if mismatches == 0 {
        exit::SUCCESS
    } else {
        exit::GOLDEN
    })
}
