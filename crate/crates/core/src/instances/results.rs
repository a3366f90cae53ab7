//! Tidy CSV output for runs and benchmark summaries.

use std::path::Path;

use super::io::write_atomic;
use crate::error::IoError;
use crate::evolve::TraceRow;
use crate::model::ObjectivePoint;
use crate::neighborhood::{DestroyOp, RepairOp};

/// A row type with a fixed header.
pub trait CsvRecord {
    fn header() -> Vec<String>;
    fn record(&self) -> Vec<String>;
}

/// Final outcome of one benchmark run.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub study: String,
    pub family: String,
    pub size: usize,
    pub mode: String,
    pub algo: String,
    pub setting: String,
    pub run_id: usize,
    pub seed: u64,
    /// Final hypervolume times 1000.
    pub hv: f64,
    pub v1: f64,
    pub v2: f64,
}

impl CsvRecord for ResultRow {
    fn header() -> Vec<String> {
        ["study", "family", "size", "mode", "algo", "setting", "run_id", "seed", "hv", "v1", "v2"]
            .map(String::from)
            .to_vec()
    }

    fn record(&self) -> Vec<String> {
        vec![
            self.study.clone(),
            self.family.clone(),
            self.size.to_string(),
            self.mode.clone(),
            self.algo.clone(),
            self.setting.clone(),
            self.run_id.to_string(),
            self.seed.to_string(),
            self.hv.to_string(),
            self.v1.to_string(),
            self.v2.to_string(),
        ]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrontRow {
    pub f1: f64,
    pub f2: f64,
}

impl CsvRecord for FrontRow {
    fn header() -> Vec<String> {
        vec!["f1".into(), "f2".into()]
    }

    fn record(&self) -> Vec<String> {
        vec![self.f1.to_string(), self.f2.to_string()]
    }
}

/// Hypervolume trace of one run, times 1000.
#[derive(Clone, Debug, PartialEq)]
pub struct HvRow(pub TraceRow);

impl CsvRecord for HvRow {
    fn header() -> Vec<String> {
        vec!["iteration".into(), "hv".into(), "archive_size".into()]
    }

    fn record(&self) -> Vec<String> {
        let t = &self.0;
        vec![t.iteration.to_string(), (t.hv * 1000.0).to_string(), t.archive_size.to_string()]
    }
}

/// Operator weights after each iteration and the uses within it.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightRow(pub TraceRow);

impl CsvRecord for WeightRow {
    fn header() -> Vec<String> {
        let mut h: Vec<String> = vec!["iteration".into()];
        h.extend(DestroyOp::ALL.iter().map(|op| format!("w_{}", op.name())));
        h.extend(RepairOp::ALL.iter().map(|op| format!("w_{}", op.name())));
        h.extend(DestroyOp::ALL.iter().map(|op| format!("n_{}", op.name())));
        h.extend(RepairOp::ALL.iter().map(|op| format!("n_{}", op.name())));
        h
    }

    fn record(&self) -> Vec<String> {
        let t = &self.0;
        let mut r = vec![t.iteration.to_string()];
        r.extend(t.destroy_weights.iter().map(f64::to_string));
        r.extend(t.repair_weights.iter().map(f64::to_string));
        r.extend(t.destroy_uses.iter().map(u32::to_string));
        r.extend(t.repair_uses.iter().map(u32::to_string));
        r
    }
}

/// Final weight of one operator in one run.
#[derive(Clone, Debug, PartialEq)]
pub struct FinalWeightRow {
    pub setting: String,
    pub run_id: usize,
    pub operator: String,
    pub weight: f64,
}

impl CsvRecord for FinalWeightRow {
    fn header() -> Vec<String> {
        ["setting", "run_id", "operator", "weight"].map(String::from).to_vec()
    }

    fn record(&self) -> Vec<String> {
        vec![self.setting.clone(), self.run_id.to_string(), self.operator.clone(), self.weight.to_string()]
    }
}

/// One line of a benchmark summary: means over restarts.
#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub study: String,
    pub family: String,
    pub size: usize,
    pub mode: String,
    pub algo: String,
    /// Free-form setting of the study, such as the taboo policy or λ.
    pub setting: String,
    pub restarts: usize,
    /// Mean final hypervolume times 1000.
    pub hv: f64,
    pub hv_sd: f64,
    pub v1: f64,
    pub v2: f64,
}

impl CsvRecord for SummaryRow {
    fn header() -> Vec<String> {
        ["study", "family", "size", "mode", "algo", "setting", "restarts", "hv", "hv_sd", "v1", "v2"]
            .map(String::from)
            .to_vec()
    }

    fn record(&self) -> Vec<String> {
        vec![
            self.study.clone(),
            self.family.clone(),
            self.size.to_string(),
            self.mode.clone(),
            self.algo.clone(),
            self.setting.clone(),
            self.restarts.to_string(),
            self.hv.to_string(),
            self.hv_sd.to_string(),
            self.v1.to_string(),
            self.v2.to_string(),
        ]
    }
}

fn csv_error(path: &Path, e: csv::Error) -> IoError {
    IoError::Io { path: path.display().to_string(), source: std::io::Error::other(e.to_string()) }
}

pub fn to_csv<T: CsvRecord>(rows: &[T]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(T::header()).expect("in-memory write");
    for row in rows {
        w.write_record(row.record()).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

pub fn write_csv<T: CsvRecord>(path: &Path, rows: &[T]) -> Result<(), IoError> {
    write_atomic(path, to_csv(rows).as_bytes())
}

/// Reads the `f1` and `f2` columns of a front CSV.
pub fn read_front_csv(path: &Path) -> Result<Vec<ObjectivePoint<f64>>, IoError> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let headers = reader.headers().map_err(|e| IoError::Malformed(e.to_string()))?.clone();
    let col = |name: &str| {
        headers.iter().position(|h| h.trim() == name).ok_or_else(|| IoError::Malformed(format!("missing column {name}")))
    };
    let (c1, c2) = (col("f1")?, col("f2")?);
    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| IoError::Malformed(e.to_string()))?;
        let num = |c: usize| -> Result<f64, IoError> {
            rec.get(c)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| IoError::Malformed(format!("bad number in row {:?}", rec.position())))
        };
        out.push(ObjectivePoint::new(num(c1)?, num(c2)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn front_csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("front.csv");
        let rows = vec![FrontRow { f1: 0.2, f2: 0.6 }, FrontRow { f1: 0.6, f2: 0.2 }];
        write_csv(&path, &rows).unwrap();
        let pts = read_front_csv(&path).unwrap();
        assert_eq!(pts, vec![ObjectivePoint::new(0.2, 0.6), ObjectivePoint::new(0.6, 0.2)]);
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "f1,f2\n0.2,0.6\n0.6,0.2\n");
    }

    #[test]
    fn trace_header_matches_records() {
        let row = TraceRow {
            iteration: 3,
            hv: 0.5,
            archive_size: 2,
            destroy_weights: [0.125; 8],
            repair_weights: [0.25; 4],
            destroy_uses: [1; 8],
            repair_uses: [2; 4],
        };
        let hv = to_csv(&[HvRow(row.clone())]);
        assert_eq!(hv, "iteration,hv,archive_size\n3,500,2\n");
        let w = to_csv(&[WeightRow(row)]);
        let lines: Vec<&str> = w.lines().collect();
        assert_eq!(lines[0].split(',').count(), 25);
        assert_eq!(lines[1].split(',').count(), 25);
        assert!(lines[1].starts_with("3,0.125"));
    }
}
