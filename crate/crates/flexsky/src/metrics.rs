//! The metrics CSV: one row per executed grid point, header mandatory.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::engine::ExecutionReport;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub strategy: String,
    pub improvements: String,
    pub op: String,
    pub n: usize,
    pub d: usize,
    pub p: usize,
    pub cores: usize,
    pub seed: u64,
    pub t_partition: f64,
    pub t_parallel: f64,
    pub t_sequential: f64,
    pub t_total: f64,
    pub input_size: usize,
    pub union_size: usize,
    pub removed_pct: f64,
    pub result_size: usize,
    /// `ok`, or the error that prevented the run.
    pub status: String,
}

/// Identifies one grid point, independent of its outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct RowKey {
    pub strategy: String,
    pub improvements: String,
    pub op: String,
    pub n: usize,
    pub d: usize,
    pub p: usize,
    pub cores: usize,
    pub seed: u64,
}

impl MetricsRow {
    pub fn from_report(key: RowKey, report: &ExecutionReport) -> Self {
        Self {
            strategy: key.strategy,
            improvements: key.improvements,
            op: key.op,
            n: key.n,
            d: key.d,
            p: key.p,
            cores: key.cores,
            seed: key.seed,
            t_partition: report.t_partition,
            t_parallel: report.t_parallel,
            t_sequential: report.t_sequential,
            t_total: report.t_total,
            input_size: report.input_size,
            union_size: report.union_size,
            removed_pct: report.removed_pct,
            result_size: report.result_ids.len(),
            status: "ok".into(),
        }
    }

    pub fn failed(key: RowKey, error: impl std::fmt::Display) -> Self {
        Self {
            strategy: key.strategy,
            improvements: key.improvements,
            op: key.op,
            n: key.n,
            d: key.d,
            p: key.p,
            cores: key.cores,
            seed: key.seed,
            t_partition: 0.0,
            t_parallel: 0.0,
            t_sequential: 0.0,
            t_total: 0.0,
            input_size: 0,
            union_size: 0,
            removed_pct: 0.0,
            result_size: 0,
            status: error.to_string().replace(['\n', '\r'], " "),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }

    /// Series name used in plot data, e.g. `sliced+rep+noseq/nd`.
    pub fn series(&self) -> String {
        if self.improvements == "base" {
            format!("{}/{}", self.strategy, self.op)
        } else {
            format!("{}+{}/{}", self.strategy, self.improvements, self.op)
        }
    }
}

pub const HEADER: &str = "strategy,improvements,op,n,d,p,cores,seed,t_partition,t_parallel,t_sequential,t_total,input_size,union_size,removed_pct,result_size,status";

/// Appends rows to a metrics file, writing the header only for a new file.
#[derive(Debug)]
pub struct MetricsSink {
    writer: csv::Writer<File>,
}

impl MetricsSink {
    pub fn append(path: &Path) -> anyhow::Result<Self> {
        let existing = path.exists() && std::fs::metadata(path)?.len() > 0;
        if existing {
            let mut first = String::new();
            BufReader::new(File::open(path)?).read_line(&mut first)?;
            anyhow::ensure!(
                first.trim_end() == HEADER,
                "{} has a different metrics schema; refusing to append",
                path.display()
            );
        }
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        let writer = csv::WriterBuilder::new().has_headers(!existing).from_writer(file);
        Ok(Self { writer })
    }

    pub fn write(&mut self, row: &MetricsRow) -> anyhow::Result<()> {
        self.writer.serialize(row)?;
        self.writer.flush()?;
        Ok(())
    }
}

pub fn read_metrics(path: &Path) -> anyhow::Result<Vec<MetricsRow>> {
    let mut rdr = csv::Reader::from_path(path)?;
    rdr.deserialize().map(|r| r.map_err(Into::into)).collect()
}

pub fn write_header_only<W: Write>(mut w: W) -> std::io::Result<()> {
    writeln!(w, "{HEADER}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(seed: u64) -> RowKey {
        RowKey {
            strategy: "sliced".into(),
            improvements: "rep+noseq".into(),
            op: "nd".into(),
            n: 100,
            d: 3,
            p: 4,
            cores: 2,
            seed,
        }
    }

    #[test]
    fn header_matches_serialization() {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.serialize(MetricsRow::failed(key(1), "boom")).unwrap();
        let text = String::from_utf8(w.into_inner().unwrap()).unwrap();
        assert_eq!(text.lines().next().unwrap(), HEADER);
    }

    #[test]
    fn append_keeps_single_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        let report = ExecutionReport { input_size: 100, union_size: 40, removed_pct: 0.6, ..Default::default() };
        for seed in 0..2 {
            let mut sink = MetricsSink::append(&path).unwrap();
            sink.write(&MetricsRow::from_report(key(seed), &report)).unwrap();
        }
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.matches("strategy,").count(), 1);
        let rows = read_metrics(&path).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1].seed, 1);
        assert_eq!(rows[0].series(), "sliced+rep+noseq/nd");
    }

    #[test]
    fn refuses_foreign_schema() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        std::fs::write(&path, "a,b\n1,2\n").unwrap();
        assert!(MetricsSink::append(&path).is_err());
    }
}
