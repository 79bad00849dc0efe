use std::fs::File;
use std::path::Path;

use crate::error::{Error, Result};
use crate::harness::ExperimentReport;

pub const RESULTS_HEADER: [&str; 9] = [
    "dataset",
    "sampler",
    "budget_fraction",
    "plcc_mean",
    "plcc_std",
    "srocc_mean",
    "srocc_std",
    "repetitions",
    "references",
];

/// One aggregated curve point. Missing statistics are written as empty fields.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultsRow {
    pub dataset: String,
    pub sampler: String,
    pub budget_fraction: f64,
    pub plcc_mean: Option<f64>,
    pub plcc_std: Option<f64>,
    pub srocc_mean: Option<f64>,
    pub srocc_std: Option<f64>,
    pub repetitions: usize,
    pub references: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultsTable {
    pub rows: Vec<ResultsRow>,
}

impl From<&ExperimentReport> for ResultsTable {
    fn from(report: &ExperimentReport) -> Self {
        let rows = report
            .rows
            .iter()
            .map(|r| ResultsRow {
                dataset: report.dataset.clone(),
                sampler: r.sampler.name().to_string(),
                budget_fraction: r.fraction,
                plcc_mean: r.plcc_mean,
                plcc_std: r.plcc_std,
                srocc_mean: r.srocc_mean,
                srocc_std: r.srocc_std,
                repetitions: r.repetitions,
                references: r.references,
            })
            .collect();
        ResultsTable { rows }
    }
}

fn stat(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_default()
}

impl ResultsTable {
    /// CSV text with the fixed header; fractions with 4 decimals, statistics with 6.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::InvalidConfig(format!("csv encoding: {e}"));
        w.write_record(RESULTS_HEADER).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record([
                r.dataset.clone(),
                r.sampler.clone(),
                format!("{:.4}", r.budget_fraction),
                stat(r.plcc_mean),
                stat(r.plcc_std),
                stat(r.srocc_mean),
                stat(r.srocc_std),
                r.repetitions.to_string(),
                r.references.to_string(),
            ])
            .map_err(csv_err)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::InvalidConfig(format!("csv encoding: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

pub fn write_results(table: &ResultsTable, path: &Path) -> Result<()> {
    if table.rows.is_empty() {
        return Err(Error::EmptyTable);
    }
    std::fs::write(path, table.to_csv()?).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_results(path: &Path) -> Result<ResultsTable> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let parse_err = |message: String| Error::Parse {
        path: path.to_path_buf(),
        message,
    };
    let mut reader = csv::Reader::from_reader(file);
    let header = reader.headers().map_err(|e| parse_err(e.to_string()))?.clone();
    if header.iter().ne(RESULTS_HEADER) {
        return Err(parse_err(format!(
            "unexpected header `{}`",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| parse_err(e.to_string()))?;
        let at = |k: usize| record.get(k).unwrap_or("");
        let num = |k: usize| -> Result<f64> {
            at(k).parse().map_err(|_| {
                parse_err(format!("row {}: bad {} `{}`", line + 1, RESULTS_HEADER[k], at(k)))
            })
        };
        let opt = |k: usize| -> Result<Option<f64>> {
            if at(k).is_empty() {
                Ok(None)
            } else {
                num(k).map(Some)
            }
        };
        let int = |k: usize| -> Result<usize> {
            at(k).parse().map_err(|_| {
                parse_err(format!("row {}: bad {} `{}`", line + 1, RESULTS_HEADER[k], at(k)))
            })
        };
        rows.push(ResultsRow {
            dataset: at(0).to_string(),
            sampler: at(1).to_string(),
            budget_fraction: num(2)?,
            plcc_mean: opt(3)?,
            plcc_std: opt(4)?,
            srocc_mean: opt(5)?,
            srocc_std: opt(6)?,
            repetitions: int(7)?,
            references: int(8)?,
        });
    }
    Ok(ResultsTable { rows })
}
