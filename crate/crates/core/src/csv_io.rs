//! Trajectory CSV format.
//!
//! Header: `t`, one `row:<action>` column per Row action, one `col:<action>`
//! column per Col action; sampled runs append `row_action,col_action` label
//! columns. Floats carry 12 significant digits. Plan labels contain commas,
//! so cells are quoted per standard CSV rules.

use std::io::Write;

use crate::dynamics::{Sample, Trajectory};
use crate::error::{Error, Result};

/// 12 significant digits, scientific notation.
fn fmt(v: f64) -> String {
    format!("{v:.11e}")
}

/// Writes a trajectory as CSV.
pub fn write_trajectory<W: Write>(trajectory: &Trajectory, writer: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    let mut header = vec!["t".to_string()];
    header.extend(trajectory.row_labels.iter().map(|l| format!("row:{l}")));
    header.extend(trajectory.col_labels.iter().map(|l| format!("col:{l}")));
    if trajectory.realized.is_some() {
        header.push("row_action".to_string());
        header.push("col_action".to_string());
    }
    out.write_record(&header).map_err(csv_err)?;
    for (i, sample) in trajectory.samples.iter().enumerate() {
        let mut record = vec![fmt(sample.time)];
        record.extend(sample.row.iter().map(|&v| fmt(v)));
        record.extend(sample.col.iter().map(|&v| fmt(v)));
        if let Some(realized) = &trajectory.realized {
            let (r, c) = realized[i];
            record.push(trajectory.row_labels[r].clone());
            record.push(trajectory.col_labels[c].clone());
        }
        out.write_record(&record).map_err(csv_err)?;
    }
    out.flush().map_err(|e| Error::input(format!("csv write failed: {e}")))?;
    Ok(())
}

/// Renders a trajectory to a CSV string.
pub fn trajectory_to_csv(trajectory: &Trajectory) -> String {
    let mut buf = Vec::new();
    write_trajectory(trajectory, &mut buf).expect("in-memory write cannot fail");
    String::from_utf8(buf).expect("csv output is utf-8")
}

/// Parsed CSV contents: labels, samples, and realized actions when present.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryData {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub samples: Vec<Sample>,
    pub realized: Option<Vec<(usize, usize)>>,
}

/// Parses a trajectory CSV back into its samples.
pub fn read_trajectory(text: &str) -> Result<TrajectoryData> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(csv_err)?.clone();
    let names: Vec<&str> = header.iter().collect();
    if names.first() != Some(&"t") {
        return Err(Error::input("trajectory csv must start with a t column"));
    }
    let row_labels: Vec<String> = names
        .iter()
        .filter_map(|n| n.strip_prefix("row:").map(str::to_string))
        .collect();
    let col_labels: Vec<String> = names
        .iter()
        .filter_map(|n| n.strip_prefix("col:").map(str::to_string))
        .collect();
    let sampled = names.ends_with(&["row_action", "col_action"]);
    let expected_len = 1 + row_labels.len() + col_labels.len() + if sampled { 2 } else { 0 };
    if names.len() != expected_len || row_labels.is_empty() || col_labels.is_empty() {
        return Err(Error::input("malformed trajectory csv header"));
    }

    let mut samples = Vec::new();
    let mut realized = sampled.then(Vec::new);
    for record in reader.records() {
        let record = record.map_err(csv_err)?;
        if record.len() != expected_len {
            return Err(Error::input(format!(
                "csv row has {} fields, expected {expected_len}",
                record.len()
            )));
        }
        let parse = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| Error::input(format!("bad float {s:?} in trajectory csv")))
        };
        let time = parse(&record[0])?;
        let row: Vec<f64> = (0..row_labels.len())
            .map(|i| parse(&record[1 + i]))
            .collect::<Result<_>>()?;
        let col: Vec<f64> = (0..col_labels.len())
            .map(|i| parse(&record[1 + row_labels.len() + i]))
            .collect::<Result<_>>()?;
        samples.push(Sample { time, row, col });
        if let Some(log) = realized.as_mut() {
            let r_label = &record[expected_len - 2];
            let c_label = &record[expected_len - 1];
            let r = row_labels
                .iter()
                .position(|l| l == r_label)
                .ok_or_else(|| Error::input(format!("unknown row action {r_label:?}")))?;
            let c = col_labels
                .iter()
                .position(|l| l == c_label)
                .ok_or_else(|| Error::input(format!("unknown col action {c_label:?}")))?;
            log.push((r, c));
        }
    }
    Ok(TrajectoryData {
        row_labels,
        col_labels,
        samples,
        realized,
    })
}

fn csv_err(e: csv::Error) -> Error {
    Error::input(format!("csv error: {e}"))
}
