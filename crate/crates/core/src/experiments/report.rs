use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::stats::{summarize, Fit, Summary};
use crate::error::{invalid, Result};
use crate::rng::RngSeed;

/// One trial; `seed` alone regenerates it under the echoed parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub seed: u64,
    pub values: Vec<f64>,
}

/// Summary of `column` over the rows whose `key_column` equals
/// `key_value`, skipping non-finite entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub key_column: String,
    pub key_value: f64,
    pub column: String,
    #[serde(flatten)]
    pub summary: Summary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(invalid(format!("unknown report format {other:?}, expected csv or json"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment_id: String,
    pub parameters: serde_json::Value,
    /// Master seed of the bootstrap streams behind `aggregates`.
    pub bootstrap_seed: u64,
    pub columns: Vec<String>,
    pub rows: Vec<ReportRow>,
    pub aggregates: Vec<Aggregate>,
    pub fits: Vec<Fit>,
    pub notes: Vec<String>,
}

impl ExperimentReport {
    pub fn new(
        experiment_id: &str,
        parameters: &impl Serialize,
        bootstrap_seed: u64,
        columns: &[&str],
    ) -> Result<Self> {
        Ok(Self {
            experiment_id: experiment_id.to_owned(),
            parameters: serde_json::to_value(parameters)?,
            bootstrap_seed,
            columns: columns.iter().map(|c| (*c).to_owned()).collect(),
            rows: Vec::new(),
            aggregates: Vec::new(),
            fits: Vec::new(),
            notes: Vec::new(),
        })
    }

    pub fn push_row(&mut self, seed: u64, values: Vec<f64>) {
        assert_eq!(values.len(), self.columns.len(), "row width must match the columns");
        self.rows.push(ReportRow { seed, values });
    }

    pub fn note(&mut self, note: impl Into<String>) {
        let note = note.into();
        log::info!("{}: {note}", self.experiment_id);
        self.notes.push(note);
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.columns.iter().position(|c| c == name).ok_or_else(|| invalid(format!("no column named {name:?}")))
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let i = self.column_index(name)?;
        Ok(self.rows.iter().map(|r| r.values[i]).collect())
    }

    /// Distinct values of `key_column` in order of first appearance.
    pub fn keys(&self, key_column: &str) -> Result<Vec<f64>> {
        let mut keys: Vec<f64> = Vec::new();
        for v in self.column(key_column)? {
            if !keys.iter().any(|k| k.to_bits() == v.to_bits()) {
                keys.push(v);
            }
        }
        Ok(keys)
    }

    fn summarize_group(&self, key_column: &str, key_value: f64, column: &str) -> Result<Summary> {
        let (ki, ci) = (self.column_index(key_column)?, self.column_index(column)?);
        let values: Vec<f64> = self
            .rows
            .iter()
            .filter(|r| r.values[ki].to_bits() == key_value.to_bits() && r.values[ci].is_finite())
            .map(|r| r.values[ci])
            .collect();
        let stream =
            RngSeed::new(self.bootstrap_seed, format!("{}/{key_column}={key_value}/{column}", self.experiment_id));
        Ok(summarize(&values, &stream))
    }

    /// Adds one aggregate of `column` per distinct `key_column` value.
    pub fn aggregate_by(&mut self, key_column: &str, column: &str) -> Result<()> {
        for key_value in self.keys(key_column)? {
            let summary = self.summarize_group(key_column, key_value, column)?;
            self.aggregates.push(Aggregate {
                key_column: key_column.to_owned(),
                key_value,
                column: column.to_owned(),
                summary,
            });
        }
        Ok(())
    }

    pub fn aggregate(&self, key_column: &str, key_value: f64, column: &str) -> Option<&Summary> {
        self.aggregates
            .iter()
            .find(|a| a.key_column == key_column && a.key_value.to_bits() == key_value.to_bits() && a.column == column)
            .map(|a| &a.summary)
    }

    pub fn fit(&self, name: &str) -> Option<&Fit> {
        self.fits.iter().find(|f| f.name == name)
    }

    /// Recomputes every aggregate from the rows.
    pub fn recompute_aggregates(&self) -> Result<Vec<Aggregate>> {
        self.aggregates
            .iter()
            .map(|a| {
                Ok(Aggregate { summary: self.summarize_group(&a.key_column, a.key_value, &a.column)?, ..a.clone() })
            })
            .collect()
    }

    /// Rows as CSV: a `seed` column followed by the value columns.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["seed".to_owned()];
        header.extend(self.columns.iter().cloned());
        w.write_record(&header)?;
        for row in &self.rows {
            let mut record = vec![row.seed.to_string()];
            record.extend(row.values.iter().map(|v| format_value(*v)));
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Everything except the rows.
    pub fn sidecar(&self) -> serde_json::Value {
        serde_json::json!({
            "experiment_id": self.experiment_id,
            "parameters": self.parameters,
            "bootstrap_seed": self.bootstrap_seed,
            "columns": self.columns,
            "row_count": self.rows.len(),
            "aggregates": self.aggregates,
            "fits": self.fits,
            "notes": self.notes,
        })
    }

    /// Writes `<id>.csv` plus the `<id>.json` sidecar, or the whole report
    /// as `<id>.json`. Returns the files written.
    pub fn save(&self, dir: &Path, format: ReportFormat) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let json_path = dir.join(format!("{}.json", self.experiment_id));
        let mut written = Vec::new();
        let json = match format {
            ReportFormat::Csv => {
                let csv_path = dir.join(format!("{}.csv", self.experiment_id));
                self.write_csv(BufWriter::new(File::create(&csv_path)?))?;
                written.push(csv_path);
                self.sidecar()
            }
            ReportFormat::Json => serde_json::to_value(self)?,
        };
        let mut f = BufWriter::new(File::create(&json_path)?);
        serde_json::to_writer_pretty(&mut f, &json)?;
        f.write_all(b"\n")?;
        f.flush()?;
        written.push(json_path);
        Ok(written)
    }
}

fn format_value(v: f64) -> String {
    if v.is_nan() {
        "nan".to_owned()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_owned()
    } else {
        v.to_string()
    }
}
