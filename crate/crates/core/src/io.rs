//! File formats: edge lists, adjacency/matrix CSV, time-series CSV, TSV manifests, atlas tables.
//!
//! Edge lists are UTF-8, one edge per line as `u v` or `u v w` (0-based), with `#` comments.
//! The optional directive `# vertices: N` fixes the vertex count; without it the count is
//! one more than the largest endpoint.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{
    correlation_graph, GraphGroup, Label, LabelAliases, ObservationGraph, TimeSeriesMatrix,
};
use crate::matrix::SymMatrix;

const SYMMETRY_TOL: f64 = 1e-9;

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Writes through a sibling temporary file and renames it into place.
pub fn atomic_write(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let file_name = path
        .file_name()
        .ok_or_else(|| Error::InvalidArgument(format!("not a file path: {}", path.display())))?;
    let tmp = path.with_file_name(format!(".{}.tmp", file_name.to_string_lossy()));
    fs::write(&tmp, contents).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

pub fn parse_edge_list(
    text: &str,
    path: &Path,
    subject_id: &str,
    label: Label,
) -> Result<ObservationGraph> {
    let mut declared_n = None;
    let mut edges = Vec::new();
    let mut weighted: Option<bool> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(value) = comment.trim().strip_prefix("vertices:") {
                let n = value
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| Error::parse(path, line_no, "bad `# vertices:` directive"))?;
                declared_n = Some(n);
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 && tokens.len() != 3 {
            return Err(Error::parse(path, line_no, "expected `u v` or `u v w`"));
        }
        let has_weight = tokens.len() == 3;
        if *weighted.get_or_insert(has_weight) != has_weight {
            return Err(Error::parse(path, line_no, "mixed weighted and unweighted edges"));
        }
        let vertex = |t: &str| {
            t.parse::<usize>()
                .map_err(|_| Error::parse(path, line_no, format!("bad vertex id {t:?}")))
        };
        let u = vertex(tokens[0])?;
        let v = vertex(tokens[1])?;
        let w = if has_weight {
            tokens[2]
                .parse::<f64>()
                .map_err(|_| Error::parse(path, line_no, format!("bad weight {:?}", tokens[2])))?
        } else {
            1.0
        };
        edges.push((u, v, w, line_no));
    }
    let n = match declared_n {
        Some(n) => n,
        None => edges.iter().map(|e| e.0.max(e.1) + 1).max().unwrap_or(0),
    };
    // surface range and self-loop errors with their line numbers
    for &(u, v, w, line_no) in &edges {
        if u >= n || v >= n {
            return Err(Error::parse(
                path,
                line_no,
                format!("vertex {} out of range for n = {n}", u.max(v)),
            ));
        }
        if u == v {
            return Err(Error::parse(path, line_no, format!("self-loop at vertex {u}")));
        }
        if !w.is_finite() {
            return Err(Error::parse(path, line_no, "non-finite weight"));
        }
    }
    if weighted == Some(true) {
        ObservationGraph::weighted(
            n,
            edges.into_iter().map(|(u, v, w, _)| (u, v, w)),
            subject_id,
            label,
        )
    } else {
        ObservationGraph::new(n, edges.into_iter().map(|(u, v, _, _)| (u, v)), subject_id, label)
    }
}

pub fn read_edge_list(path: &Path, subject_id: &str, label: Label) -> Result<ObservationGraph> {
    parse_edge_list(&read_to_string(path)?, path, subject_id, label)
}

pub fn format_edge_list(g: &ObservationGraph) -> String {
    let mut out = format!("# vertices: {}\n", g.n());
    for (u, v, w) in g.weighted_edges() {
        if g.is_weighted() {
            out.push_str(&format!("{u} {v} {}\n", fmt_f64(w)));
        } else {
            out.push_str(&format!("{u} {v}\n"));
        }
    }
    out
}

/// Shortest round-trip representation; negative zero prints as `0`.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x}")
    }
}

fn read_csv_rows(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = read_to_string(path)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let row = record
            .iter()
            .map(|cell| {
                cell.parse::<f64>()
                    .map_err(|_| Error::parse(path, line, format!("bad number {cell:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = rows.first().map(Vec::len) {
            if row.len() != first {
                return Err(Error::parse(
                    path,
                    line,
                    format!("expected {first} columns, found {}", row.len()),
                ));
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Reads a square symmetric matrix CSV (no header).
pub fn read_matrix_csv(path: &Path) -> Result<SymMatrix> {
    let rows = read_csv_rows(path)?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::parse(path, 1, format!("matrix is not square ({n} rows)")));
    }
    SymMatrix::from_dense(n, rows.concat(), SYMMETRY_TOL).map_err(|e| match e {
        Error::InvalidGraph(msg) => Error::parse(path, 0, msg),
        other => other,
    })
}

/// Full `n x n` CSV in index order.
pub fn format_matrix_csv(m: &SymMatrix) -> String {
    let mut out = String::new();
    for u in 0..m.n() {
        let row: Vec<String> = m.row(u).iter().map(|&x| fmt_f64(x)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Adjacency CSV: an all-0/1 matrix loads as unweighted, anything else as weighted.
pub fn read_adjacency_csv(path: &Path, subject_id: &str, label: Label) -> Result<ObservationGraph> {
    let m = read_matrix_csv(path)?;
    let binary = m.pairs().all(|(_, _, x)| x == 0.0 || x == 1.0);
    let nonzero = m.pairs().filter(|&(_, _, x)| x != 0.0);
    if binary {
        ObservationGraph::new(m.n(), nonzero.map(|(u, v, _)| (u, v)), subject_id, label)
    } else {
        ObservationGraph::weighted(m.n(), nonzero, subject_id, label)
    }
}

/// One ROI per row, one sample per column.
pub fn read_timeseries_csv(path: &Path, subject_id: &str) -> Result<TimeSeriesMatrix> {
    let rows = read_csv_rows(path)?;
    let n_samples = rows.first().map_or(0, Vec::len);
    TimeSeriesMatrix::new(rows.len(), n_samples, rows.concat(), subject_id)
}

/// How manifest paths are turned into graphs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ingest {
    /// `.csv` files are adjacency matrices, anything else is an edge list.
    Graphs,
    /// Files are ROI time series, thresholded at the given percentile.
    TimeSeries { percentile: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ManifestRow {
    pub subject_id: String,
    pub path: PathBuf,
    pub label: Label,
}

/// Parses a TSV manifest with columns `subject_id`, `path`, `label`. Relative paths
/// resolve against the manifest's directory.
pub fn read_manifest(path: &Path, aliases: &LabelAliases) -> Result<Vec<ManifestRow>> {
    let text = read_to_string(path)?;
    let base = path.parent().unwrap_or(Path::new(""));
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::parse(path, 1, format!("missing column `{name}`")))
    };
    let (id_col, path_col, label_col) = (column("subject_id")?, column("path")?, column("label")?);
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let field = |i: usize| {
            record
                .get(i)
                .ok_or_else(|| Error::parse(path, line, "missing field"))
        };
        let raw_label = field(label_col)?;
        let label = aliases
            .resolve(raw_label)
            .ok_or_else(|| Error::parse(path, line, format!("unknown label {raw_label:?}")))?;
        rows.push(ManifestRow {
            subject_id: field(id_col)?.to_string(),
            path: base.join(field(path_col)?),
            label,
        });
    }
    Ok(rows)
}

pub fn format_manifest(rows: &[ManifestRow], base: &Path) -> String {
    let mut out = String::from("subject_id\tpath\tlabel\n");
    for row in rows {
        let rel = row.path.strip_prefix(base).unwrap_or(&row.path);
        out.push_str(&format!("{}\t{}\t{}\n", row.subject_id, rel.display(), row.label));
    }
    out
}

fn load_subject(row: &ManifestRow, ingest: Ingest) -> Result<ObservationGraph> {
    match ingest {
        Ingest::TimeSeries { percentile } => {
            let ts = read_timeseries_csv(&row.path, &row.subject_id)?;
            correlation_graph(&ts, percentile, row.label)
        }
        Ingest::Graphs => {
            let is_csv = row
                .path
                .extension()
                .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
            if is_csv {
                read_adjacency_csv(&row.path, &row.subject_id, row.label)
            } else {
                read_edge_list(&row.path, &row.subject_id, row.label)
            }
        }
    }
}

/// Loads every subject of a manifest, in manifest order. All rows must carry the same label.
pub fn load_group(manifest: &Path, aliases: &LabelAliases, ingest: Ingest) -> Result<GraphGroup> {
    let rows = read_manifest(manifest, aliases)?;
    let label = rows.first().ok_or(Error::EmptyGroup)?.label;
    if let Some(row) = rows.iter().find(|r| r.label != label) {
        return Err(Error::InvalidArgument(format!(
            "{}: mixed labels in one manifest (subject {} is {}, expected {label})",
            manifest.display(),
            row.subject_id,
            row.label
        )));
    }
    let members = rows
        .par_iter()
        .map(|row| load_subject(row, ingest))
        .collect::<Result<Vec<_>>>()?;
    GraphGroup::new(label, members)
}

/// One name per line; line `i` names vertex `i`.
pub fn read_atlas(path: &Path, n: usize) -> Result<Vec<String>> {
    let names: Vec<String> = read_to_string(path)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect();
    if names.len() != n {
        return Err(Error::InvalidArgument(format!(
            "{}: atlas has {} names for {n} vertices",
            path.display(),
            names.len()
        )));
    }
    Ok(names)
}
