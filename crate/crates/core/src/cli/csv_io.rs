//! Trajectory and Lyapunov CSV files, number formatting and atomic writes.

use std::io::Write;
use std::path::Path;

use crate::analysis::DecayReport;
use crate::cli::CliError;
use crate::model::COMPARTMENTS;
use crate::solver::Trajectory;

pub const TRAJECTORY_HEADER: [&str; 10] = ["t", "mu", "x1", "x2", "x3", "x4", "x5", "x6", "N", "lambda"];
pub const LYAPUNOV_HEADER: [&str; 4] = ["t", "V", "envelope", "ok"];

/// `v` with `digits` significant digits in scientific notation.
pub fn format_real(v: f64, digits: usize) -> String {
    format!("{:.*e}", digits.max(1) - 1, v)
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Csv(e.to_string())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = w.into_inner().map_err(|e| CliError::Csv(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Csv(e.to_string()))
}

pub fn trajectory_csv(traj: &Trajectory, digits: usize) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(TRAJECTORY_HEADER).map_err(csv_err)?;
    for s in &traj.samples {
        let lambda = traj.params.force_of_infection(&s.state).map_err(|e| e.at(s.t))?;
        let mut row = vec![format_real(s.t, digits), format_real(s.mu, digits)];
        row.extend(s.state.as_array().iter().map(|&x| format_real(x, digits)));
        row.push(format_real(s.state.total(), digits));
        row.push(format_real(lambda, digits));
        w.write_record(&row).map_err(csv_err)?;
    }
    finish(w)
}

pub fn lyapunov_csv(report: &DecayReport, digits: usize) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(LYAPUNOV_HEADER).map_err(csv_err)?;
    for p in &report.points {
        w.write_record([
            format_real(p.t, digits),
            format_real(p.v, digits),
            format_real(p.envelope, digits),
            if p.ok() { "1".into() } else { "0".into() },
        ])
        .map_err(csv_err)?;
    }
    finish(w)
}

/// Rows of a CSV file with the named columns picked out, in the given order.
pub fn read_columns(text: &str, names: &[&str]) -> Result<Vec<Vec<f64>>, CliError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let headers = r.headers().map_err(csv_err)?.clone();
    let idx = names
        .iter()
        .map(|n| {
            headers.iter().position(|h| h.trim() == *n).ok_or_else(|| CliError::Csv(format!("missing column `{n}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut rows = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let row = idx
            .iter()
            .zip(names)
            .map(|(&i, n)| {
                let cell = rec.get(i).unwrap_or("");
                cell.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::Csv(format!("row {}: column `{n}` holds `{cell}`, not a number", line + 1)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRow {
    pub t: f64,
    pub mu: f64,
    pub x: [f64; COMPARTMENTS],
    pub total: f64,
    pub lambda: f64,
}

pub fn read_trajectory_csv(text: &str) -> Result<Vec<TrajectoryRow>, CliError> {
    Ok(read_columns(text, &TRAJECTORY_HEADER)?
        .into_iter()
        .map(|r| TrajectoryRow { t: r[0], mu: r[1], x: std::array::from_fn(|i| r[2 + i]), total: r[8], lambda: r[9] })
        .collect())
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io { path: path.display().to_string(), source };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.flush().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}
