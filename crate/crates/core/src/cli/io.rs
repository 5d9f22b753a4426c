//! Text formats read and written by the command line tool.
//!
//! All writers use `\n` line endings and print reals in Rust's shortest
//! round-trip form, so `parse::<f64>()` recovers every value bit for bit.
//!
//! * dataset CSV: optional header, one row per line, optional integer `label` last column
//! * codebook CSV: `id,x0,..,x{n-1},<value>` where value is hits, counter, error or resource
//! * edge list: `a b` or `a b tag` per line (tag is an edge age or a frozen flag)
//! * assignments CSV: `row_index,unit_id`
//! * metrics and config: `key = value` lines, `#` starts a comment

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::common::{Dataset, Vector};
use crate::error::{Error, Result};

pub fn format_f64(v: f64) -> String {
    format!("{v:?}")
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Reads a dataset from comma-separated reals.
///
/// With `has_header`, the first line names the columns and a final column
/// named `label` is read as integer class tags.
pub fn ingest_csv(path: &Path, has_header: bool) -> Result<Dataset> {
    let text = read(path)?;
    parse_dataset_csv(&text, has_header, path)
}

pub fn parse_dataset_csv(text: &str, has_header: bool, path: &Path) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut records = reader.records();
    let mut label_column = false;
    let mut width = None;
    if has_header {
        let header = match records.next() {
            Some(r) => r.map_err(|e| parse_error(path, 1, e.to_string()))?,
            None => return Err(parse_error(path, 1, "empty file")),
        };
        label_column = header.iter().next_back() == Some("label");
        width = Some(header.len());
        if label_column && header.len() < 2 {
            return Err(parse_error(path, 1, "header has a label column but no features"));
        }
    }
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for record in records {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_error(path, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() == 1 && record.get(0) == Some("") {
            continue;
        }
        match width {
            Some(w) if w != record.len() => {
                return Err(parse_error(
                    path,
                    line,
                    format!("expected {w} fields, found {}", record.len()),
                ))
            }
            None => width = Some(record.len()),
            _ => {}
        }
        let features = if label_column { record.len() - 1 } else { record.len() };
        let mut coords = Vec::with_capacity(features);
        for (col, cell) in record.iter().take(features).enumerate() {
            let v: f64 = cell
                .parse()
                .map_err(|_| parse_error(path, line, format!("column {}: `{cell}` is not a number", col + 1)))?;
            if !v.is_finite() {
                return Err(parse_error(path, line, format!("column {}: non-finite value", col + 1)));
            }
            coords.push(v);
        }
        if label_column {
            let cell = &record[features];
            let label: i64 = cell
                .parse()
                .map_err(|_| parse_error(path, line, format!("label `{cell}` is not an integer")))?;
            labels.push(label);
        }
        rows.push(Vector::new(coords).map_err(|e| parse_error(path, line, e.to_string()))?);
    }
    if rows.is_empty() {
        return Err(parse_error(path, 1, "no data rows"));
    }
    let data = Dataset::new(rows)?;
    if label_column {
        data.with_labels(labels)
    } else {
        Ok(data)
    }
}

/// Dataset CSV with an `x0,..` header and a `label` column when labels exist.
pub fn dataset_csv(data: &Dataset) -> String {
    let mut out = String::new();
    let header: Vec<String> = (0..data.dim()).map(|j| format!("x{j}")).collect();
    out.push_str(&header.join(","));
    if data.labels().is_some() {
        out.push_str(",label");
    }
    out.push('\n');
    for (i, row) in data.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|&v| format_f64(v)).collect();
        out.push_str(&cells.join(","));
        if let Some(labels) = data.labels() {
            let _ = write!(out, ",{}", labels[i]);
        }
        out.push('\n');
    }
    out
}

/// A unit as exported: stable id, reference vector and one model-specific scalar.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitRecord {
    pub id: usize,
    pub w: Vector,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    /// Header name of the scalar column.
    pub value_name: String,
    pub units: Vec<UnitRecord>,
}

impl Codebook {
    pub fn dim(&self) -> usize {
        self.units.first().map_or(0, |u| u.w.dim())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("id");
        for j in 0..self.dim() {
            let _ = write!(out, ",x{j}");
        }
        let _ = writeln!(out, ",{}", self.value_name);
        for u in &self.units {
            let _ = write!(out, "{}", u.id);
            for &v in u.w.iter() {
                out.push(',');
                out.push_str(&format_f64(v));
            }
            out.push(',');
            out.push_str(&format_f64(u.value));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (_, header) = lines.next().ok_or_else(|| parse_error(path, 1, "empty codebook"))?;
        let cols: Vec<&str> = header.split(',').collect();
        if cols.len() < 3 || cols[0] != "id" {
            return Err(parse_error(path, 1, "expected header `id,x0,..,value`"));
        }
        let value_name = cols[cols.len() - 1].to_string();
        let dim = cols.len() - 2;
        let mut units = Vec::new();
        for (line, text) in lines.filter(|(_, l)| !l.is_empty()) {
            let cells: Vec<&str> = text.split(',').collect();
            if cells.len() != dim + 2 {
                return Err(parse_error(path, line, format!("expected {} fields, found {}", dim + 2, cells.len())));
            }
            let id = cells[0]
                .parse()
                .map_err(|_| parse_error(path, line, format!("bad id `{}`", cells[0])))?;
            let nums = cells[1..]
                .iter()
                .map(|c| c.parse::<f64>().map_err(|_| parse_error(path, line, format!("`{c}` is not a number"))))
                .collect::<Result<Vec<_>>>()?;
            let value = nums[dim];
            let w = Vector::new(nums[..dim].to_vec()).map_err(|e| parse_error(path, line, e.to_string()))?;
            units.push(UnitRecord { id, w, value });
        }
        Ok(Codebook { value_name, units })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct EdgeRecord {
    pub a: usize,
    pub b: usize,
    pub tag: Option<u64>,
}

pub fn edges_text(edges: &[EdgeRecord]) -> String {
    let mut out = String::new();
    for e in edges {
        match e.tag {
            Some(t) => {
                let _ = writeln!(out, "{} {} {}", e.a, e.b, t);
            }
            None => {
                let _ = writeln!(out, "{} {}", e.a, e.b);
            }
        }
    }
    out
}

pub fn parse_edges(text: &str, path: &Path) -> Result<Vec<EdgeRecord>> {
    let mut edges = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(parse_error(path, line_no, "expected `a b` or `a b tag`"));
        }
        let num = |s: &str| -> Result<u64> {
            s.parse()
                .map_err(|_| parse_error(path, line_no, format!("`{s}` is not a non-negative integer")))
        };
        edges.push(EdgeRecord {
            a: num(fields[0])? as usize,
            b: num(fields[1])? as usize,
            tag: fields.get(2).map(|s| num(s)).transpose()?,
        });
    }
    Ok(edges)
}

pub fn assignments_csv(assignments: &[usize]) -> String {
    let mut out = String::from("row_index,unit_id\n");
    for (i, u) in assignments.iter().enumerate() {
        let _ = writeln!(out, "{i},{u}");
    }
    out
}

pub fn parse_assignments(text: &str, path: &Path) -> Result<Vec<usize>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, "row_index,unit_id")) => {}
        _ => return Err(parse_error(path, 1, "expected header `row_index,unit_id`")),
    }
    let mut out = Vec::new();
    for (i, line) in lines {
        if line.is_empty() {
            continue;
        }
        let line_no = i + 1;
        let (row, unit) = line
            .split_once(',')
            .ok_or_else(|| parse_error(path, line_no, "expected `row_index,unit_id`"))?;
        let row: usize = row.parse().map_err(|_| parse_error(path, line_no, "bad row index"))?;
        if row != out.len() {
            return Err(parse_error(path, line_no, format!("expected row index {}", out.len())));
        }
        out.push(unit.parse().map_err(|_| parse_error(path, line_no, "bad unit id"))?);
    }
    Ok(out)
}

/// Ordered `key = value` pairs, as used by the config and metrics files.
pub type KeyValues = Vec<(String, String)>;

pub fn key_values_text(pairs: &[(String, String)]) -> String {
    let mut out = String::new();
    for (k, v) in pairs {
        let _ = writeln!(out, "{k} = {v}");
    }
    out
}

pub fn parse_key_values(text: &str, path: &Path) -> Result<KeyValues> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| parse_error(path, i + 1, "expected `key = value`"))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(parse_error(path, i + 1, "empty key"));
        }
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

pub fn read_codebook(path: &Path) -> Result<Codebook> {
    Codebook::parse(&read(path)?, path)
}

pub fn read_edges(path: &Path) -> Result<Vec<EdgeRecord>> {
    parse_edges(&read(path)?, path)
}

pub fn read_assignments(path: &Path) -> Result<Vec<usize>> {
    parse_assignments(&read(path)?, path)
}

pub fn read_key_values(path: &Path) -> Result<KeyValues> {
    parse_key_values(&read(path)?, path)
}

/// Writes every `(path, contents)` pair, removing the ones already written if any write fails.
pub fn write_all(files: &[(PathBuf, String)]) -> Result<()> {
    let mut written: Vec<&Path> = Vec::new();
    for (path, contents) in files {
        if let Err(e) = fs::write(path, contents) {
            for done in written {
                let _ = fs::remove_file(done);
            }
            return Err(Error::io(path, e));
        }
        written.push(path);
    }
    Ok(())
}
