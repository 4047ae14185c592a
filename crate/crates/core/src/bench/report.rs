use std::fmt::Write as _;

use serde::Serialize;

use super::{kernel_reference, linear_reference, Mode, RunResult, TOOL_VERSION};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Markdown,
    Csv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "md" | "markdown" => Ok(ReportFormat::Markdown),
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::InvalidArgument(format!("unknown report format {other:?}"))),
        }
    }
}

#[derive(Serialize)]
struct JsonReport<'a> {
    tool_version: &'a str,
    results: Vec<&'a RunResult>,
}

fn sorted(results: &[RunResult]) -> Vec<&RunResult> {
    let mut v: Vec<&RunResult> = results.iter().collect();
    v.sort_by(|a, b| a.dataset.cmp(&b.dataset).then_with(|| a.mode.label().cmp(b.mode.label())));
    v
}

fn pm(mean: f64, std: f64) -> String {
    if mean.is_nan() {
        "n/a".into()
    } else {
        format!("{mean:.2} ± {std:.2}")
    }
}

fn published(r: &RunResult) -> (String, String) {
    match r.mode {
        Mode::Linear => linear_reference(&r.dataset).map_or_else(
            || ("".into(), "".into()),
            |p| {
                (
                    pm(p.mcm_accuracy.mean, p.mcm_accuracy.std),
                    pm(p.svm_accuracy.mean, p.svm_accuracy.std),
                )
            },
        ),
        Mode::Kernel(_) => kernel_reference(&r.dataset).map_or_else(
            || ("".into(), "".into()),
            |p| {
                (
                    format!("{} ({} SVs)", pm(p.mcm_accuracy.mean, p.mcm_accuracy.std), pm(p.mcm_svs.mean, p.mcm_svs.std)),
                    format!("{} ({} SVs)", pm(p.svm_accuracy.mean, p.svm_accuracy.std), pm(p.svm_svs.mean, p.svm_svs.std)),
                )
            },
        ),
    }
}

/// Renders one row per result, sorted by dataset name.
///
/// The CSV layout keeps every column numeric except the trailing `dataset`
/// column, so it loads back through [`crate::data::load_csv`] with that
/// column as the label. `gamma` is 0 when the mode has no width parameter.
pub fn emit_report(results: &[RunResult], format: ReportFormat) -> Result<String> {
    if results.is_empty() {
        return Err(Error::InvalidArgument("no results to report".into()));
    }
    let rows = sorted(results);
    let mut out = String::new();
    match format {
        ReportFormat::Markdown => {
            out.push_str("| Dataset | Size | Mode | Accuracy (%) | #SVs | C | gamma | Converged folds | Published MCM | Published SVM |\n");
            out.push_str("|---|---|---|---|---|---|---|---|---|---|\n");
            for r in rows {
                let (mcm, svm) = published(r);
                let gamma = r.chosen_gamma.map_or_else(|| "-".to_string(), |g| format!("{g}"));
                writeln!(
                    out,
                    "| {} | {} × {} | {} | {} | {} | {} | {} | {}/{} | {} | {} |",
                    r.dataset,
                    r.n_samples,
                    r.n_features,
                    r.mode.label(),
                    pm(r.accuracy_mean, r.accuracy_std),
                    pm(r.sv_mean, r.sv_std),
                    r.chosen_c,
                    gamma,
                    r.converged_folds(),
                    r.n_folds,
                    mcm,
                    svm
                )
                .expect("write to string");
            }
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "samples",
                "features",
                "accuracy_mean",
                "accuracy_std",
                "sv_mean",
                "sv_std",
                "C",
                "gamma",
                "converged_folds",
                "folds",
                "dataset",
            ])?;
            for r in rows {
                w.write_record([
                    r.n_samples.to_string(),
                    r.n_features.to_string(),
                    format!("{:.17e}", r.accuracy_mean),
                    format!("{:.17e}", r.accuracy_std),
                    format!("{:.17e}", r.sv_mean),
                    format!("{:.17e}", r.sv_std),
                    format!("{:.17e}", r.chosen_c),
                    format!("{:.17e}", r.chosen_gamma.unwrap_or(0.0)),
                    r.converged_folds().to_string(),
                    r.n_folds.to_string(),
                    r.dataset.clone(),
                ])?;
            }
            let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(format!("csv writer: {e}")))?;
            out = String::from_utf8(bytes).expect("csv output is utf-8");
        }
        ReportFormat::Json => {
            out = serde_json::to_string_pretty(&JsonReport {
                tool_version: TOOL_VERSION,
                results: rows,
            })?;
            out.push('\n');
        }
    }
    Ok(out)
}
