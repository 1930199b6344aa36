use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{EmpiricalMeasure, MeasureJson, PointCloudError};

/// Reads `x1,...,xn[,weight]` rows.
///
/// An optional header row names the columns; a column called `weight` (or
/// `w`) holds weights. Without a header, `dim` decides whether a trailing
/// column is a weight: rows with `dim + 1` fields carry one. Without either,
/// every column is a coordinate and the measure is uniform.
pub fn read_csv<R: Read>(
    reader: R,
    dim: Option<usize>,
) -> Result<EmpiricalMeasure, PointCloudError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut weight_col: Option<usize> = None;
    let mut width: Option<usize> = None;
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| PointCloudError::Parse(e.to_string()))?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        if line == 0 && rec.iter().any(|f| f.parse::<f64>().is_err()) {
            weight_col = rec
                .iter()
                .position(|f| f.eq_ignore_ascii_case("weight") || f.eq_ignore_ascii_case("w"));
            width = Some(rec.len());
            continue;
        }
        let vals = rec
            .iter()
            .map(|f| {
                f.parse::<f64>().map_err(|_| {
                    PointCloudError::Parse(format!("row {}: bad number {f:?}", line + 1))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        match width {
            Some(w) if w != vals.len() => {
                return Err(PointCloudError::Parse(format!(
                    "row {} has {} fields, expected {w}",
                    line + 1,
                    vals.len()
                )))
            }
            None => width = Some(vals.len()),
            _ => {}
        }
        rows.push(vals);
    }
    let width = width.ok_or(PointCloudError::Empty)?;
    let weight_col = match (weight_col, dim) {
        (Some(c), _) => Some(c),
        (None, Some(d)) if width == d + 1 => Some(d),
        (None, Some(d)) if width != d => {
            return Err(PointCloudError::DimensionMismatch {
                expected: d,
                found: width,
            })
        }
        _ => None,
    };
    let point_dim = width - usize::from(weight_col.is_some());
    let mut weights = Vec::with_capacity(rows.len());
    let points: Vec<Vec<f64>> = rows
        .into_iter()
        .map(|mut r| {
            if let Some(c) = weight_col {
                weights.push(r.remove(c));
            }
            r
        })
        .collect();
    if weight_col.is_some() {
        EmpiricalMeasure::weighted(point_dim, points, weights)
    } else {
        EmpiricalMeasure::uniform(point_dim, points)
    }
}

/// Writes a header row and one point per row; weights only when non-uniform.
pub fn write_csv<W: Write>(writer: W, measure: &EmpiricalMeasure) -> Result<(), PointCloudError> {
    let mut w = csv::Writer::from_writer(writer);
    let with_weights = !measure.is_uniform();
    let mut header: Vec<String> = (1..=measure.dim()).map(|i| format!("x{i}")).collect();
    if with_weights {
        header.push("weight".into());
    }
    let err = |e: csv::Error| PointCloudError::Parse(e.to_string());
    w.write_record(&header).map_err(err)?;
    for (p, wt) in measure.points().zip(measure.weights()) {
        let mut row: Vec<String> = p.iter().map(|c| c.to_string()).collect();
        if with_weights {
            row.push(wt.to_string());
        }
        w.write_record(&row).map_err(err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_json<R: Read>(reader: R) -> Result<EmpiricalMeasure, PointCloudError> {
    let raw: MeasureJson =
        serde_json::from_reader(reader).map_err(|e| PointCloudError::Parse(e.to_string()))?;
    raw.try_into()
}

pub fn write_json<W: Write>(writer: W, measure: &EmpiricalMeasure) -> Result<(), PointCloudError> {
    serde_json::to_writer(writer, &measure.to_json())
        .map_err(|e| PointCloudError::Parse(e.to_string()))
}

/// Reads a cloud from disk, choosing JSON or CSV by extension.
pub fn read_measure(path: &Path, dim: Option<usize>) -> Result<EmpiricalMeasure, PointCloudError> {
    let file = BufReader::new(File::open(path)?);
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("json") => read_json(file),
        _ => read_csv(file, dim),
    }
}

pub fn write_measure(path: &Path, measure: &EmpiricalMeasure) -> Result<(), PointCloudError> {
    let file = BufWriter::new(File::create(path)?);
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("json") => write_json(file, measure),
        _ => write_csv(file, measure),
    }
}
