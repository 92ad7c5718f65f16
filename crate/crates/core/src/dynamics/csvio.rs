//! Trajectory and scan tables as CSV.

use std::io::{Read, Write};

use super::simulate::{ScanRow, Trajectory, TrajectoryRow};
use super::DynamicsError;

pub const TRAJECTORY_HEADER: [&str; 12] =
    ["t", "x", "y", "z", "px", "py", "pz", "H", "X1", "X2", "u", "d_sing"];

pub const SCAN_HEADER: [&str; 11] =
    ["idx", "x0", "y0", "z0", "px0", "py0", "pz0", "E", "min_u", "min_dsing", "class"];

/// 17 significant digits, enough to round-trip any binary64.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn io_err(e: impl std::fmt::Display) -> DynamicsError {
    DynamicsError::Io(e.to_string())
}

pub fn write_trajectory<W: Write>(out: W, traj: &Trajectory) -> Result<(), DynamicsError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRAJECTORY_HEADER).map_err(io_err)?;
    for row in &traj.rows {
        w.write_record(row.values().iter().map(|v| format_f64(*v))).map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

pub fn read_trajectory<R: Read>(input: R) -> Result<Trajectory, DynamicsError> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header = r
        .headers()
        .map_err(|e| DynamicsError::MalformedInput(e.to_string()))?
        .clone();
    if header.iter().map(str::trim).ne(TRAJECTORY_HEADER.iter().copied()) {
        return Err(DynamicsError::MalformedInput(format!(
            "expected header '{}', found '{}'",
            TRAJECTORY_HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| DynamicsError::MalformedInput(e.to_string()))?;
        if rec.len() != 12 {
            return Err(DynamicsError::MalformedInput(format!("row {} has {} fields", i + 1, rec.len())));
        }
        let mut vals = [0.0; 12];
        for (j, field) in rec.iter().enumerate() {
            vals[j] = field.trim().parse().map_err(|_| {
                DynamicsError::MalformedInput(format!("row {} field {}: '{field}' is not a number", i + 1, j + 1))
            })?;
        }
        rows.push(TrajectoryRow::from_values(vals));
    }
    Ok(Trajectory { rows })
}

pub fn write_scan_table<W: Write>(out: W, rows: &[ScanRow]) -> Result<(), DynamicsError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SCAN_HEADER).map_err(io_err)?;
    for r in rows {
        let mut rec = vec![r.idx.to_string()];
        rec.extend(r.q0.iter().chain(r.p0.iter()).map(|v| format_f64(*v)));
        rec.extend([r.energy, r.min_u, r.min_dsing].iter().map(|v| format_f64(*v)));
        rec.push(r.classification.to_string());
        w.write_record(&rec).map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}
