//! Plain-text writers and readers for scenario output.
//!
//! Three formats are produced:
//!
//! * **series**: tab-separated columns. The file opens with `# key = value`
//!   header lines echoing the resolved configuration, followed by a single
//!   `# columns: a<TAB>b...` line and one data row per line.
//! * **matrix**: the same header, then `# matrix: R x C`,
//!   `# rows: <name><TAB>v0<TAB>v1...` and `# cols: <name><TAB>...` axis
//!   descriptors, followed by `R` lines of `C` tab-separated values.
//! * **manifest**: `key = value` lines without a leading `#`.
//!
//! Every number is written with 17 significant digits.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn header_text(header: &[(String, String)]) -> String {
    let mut s = String::new();
    for (k, v) in header {
        let _ = writeln!(s, "# {k} = {v}");
    }
    s
}

fn join_row(row: &[f64]) -> String {
    row.iter().map(|&x| fmt_num(x)).collect::<Vec<_>>().join("\t")
}

pub fn write_series(path: &Path, header: &[(String, String)], columns: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut s = header_text(header);
    let _ = writeln!(s, "# columns: {}", columns.join("\t"));
    for (i, r) in rows.iter().enumerate() {
        if r.len() != columns.len() {
            return Err(Error::Dimension(format!("row {i} has {} values, expected {}", r.len(), columns.len())));
        }
        s.push_str(&join_row(r));
        s.push('\n');
    }
    fs::write(path, s)?;
    Ok(())
}

/// Axis descriptor of a matrix file.
pub struct Axis<'a> {
    pub name: &'a str,
    pub values: &'a [f64],
}

/// Writes a row-major `rows.values.len() x cols.values.len()` matrix.
pub fn write_matrix(path: &Path, header: &[(String, String)], rows: Axis<'_>, cols: Axis<'_>, values: &[f64]) -> Result<()> {
    let (nr, nc) = (rows.values.len(), cols.values.len());
    if values.len() != nr * nc {
        return Err(Error::Dimension(format!("{} values for a {nr} x {nc} matrix", values.len())));
    }
    let mut s = header_text(header);
    let _ = writeln!(s, "# matrix: {nr} x {nc}");
    let _ = writeln!(s, "# rows: {}\t{}", rows.name, join_row(rows.values));
    let _ = writeln!(s, "# cols: {}\t{}", cols.name, join_row(cols.values));
    for r in values.chunks(nc.max(1)).take(nr) {
        s.push_str(&join_row(r));
        s.push('\n');
    }
    fs::write(path, s)?;
    Ok(())
}

pub fn write_manifest(path: &Path, entries: &[(String, String)]) -> Result<()> {
    let mut s = String::new();
    for (k, v) in entries {
        let _ = writeln!(s, "{k} = {v}");
    }
    fs::write(path, s)?;
    Ok(())
}

/// Parsed series file.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub header: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Series {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

fn parse_header_line(line: &str) -> Option<(String, String)> {
    let (k, v) = line.split_once(" = ")?;
    Some((k.trim().to_string(), v.trim().to_string()))
}

fn parse_row(line: &str, path: &Path) -> Result<Vec<f64>> {
    line.split('\t').map(|t| t.parse::<f64>().map_err(|e| Error::Config(format!("{}: bad number {t:?}: {e}", path.display())))).collect()
}

pub fn read_series(path: &Path) -> Result<Series> {
    let text = fs::read_to_string(path)?;
    let mut out = Series { header: vec![], columns: vec![], rows: vec![] };
    for line in text.lines() {
        if let Some(meta) = line.strip_prefix("# ") {
            if let Some(c) = meta.strip_prefix("columns: ") {
                out.columns = c.split('\t').map(str::to_string).collect();
            } else if let Some(kv) = parse_header_line(meta) {
                out.header.push(kv);
            }
        } else if !line.is_empty() {
            out.rows.push(parse_row(line, path)?);
        }
    }
    Ok(out)
}

/// Parsed matrix file.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    pub header: Vec<(String, String)>,
    pub row_axis: (String, Vec<f64>),
    pub col_axis: (String, Vec<f64>),
    pub values: Vec<f64>,
}

pub fn read_matrix(path: &Path) -> Result<Matrix> {
    let text = fs::read_to_string(path)?;
    let mut out = Matrix { header: vec![], row_axis: (String::new(), vec![]), col_axis: (String::new(), vec![]), values: vec![] };
    let axis = |s: &str| -> Result<(String, Vec<f64>)> {
        let (name, rest) = s.split_once('\t').unwrap_or((s, ""));
        let vals = if rest.is_empty() { vec![] } else { parse_row(rest, path)? };
        Ok((name.to_string(), vals))
    };
    for line in text.lines() {
        if let Some(meta) = line.strip_prefix("# ") {
            if let Some(r) = meta.strip_prefix("rows: ") {
                out.row_axis = axis(r)?;
            } else if let Some(c) = meta.strip_prefix("cols: ") {
                out.col_axis = axis(c)?;
            } else if meta.starts_with("matrix: ") {
            } else if let Some(kv) = parse_header_line(meta) {
                out.header.push(kv);
            }
        } else if !line.is_empty() {
            out.values.extend(parse_row(line, path)?);
        }
    }
    if out.values.len() != out.row_axis.1.len() * out.col_axis.1.len() {
        return Err(Error::Config(format!("{}: matrix size does not match its axes", path.display())));
    }
    Ok(out)
}

pub fn read_manifest(path: &Path) -> Result<Vec<(String, String)>> {
    Ok(fs::read_to_string(path)?.lines().filter_map(parse_header_line).collect())
}

/// Collects the files written by one run. All writes go through one
/// `Output`, so each file is written exactly once.
pub struct Output {
    dir: PathBuf,
    header: Vec<(String, String)>,
    files: Vec<String>,
}

impl Output {
    pub fn new(dir: &Path, header: Vec<(String, String)>) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf(), header, files: vec![] })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn files(&self) -> &[String] {
        &self.files
    }

    /// Header lines for one file: the run header plus file-specific extras.
    fn header_with(&self, extra: &[(&str, String)]) -> Vec<(String, String)> {
        let mut h = self.header.clone();
        h.extend(extra.iter().map(|(k, v)| (k.to_string(), v.clone())));
        h
    }

    pub fn series(&mut self, name: &str, extra: &[(&str, String)], columns: &[&str], rows: &[Vec<f64>]) -> Result<()> {
        write_series(&self.dir.join(name), &self.header_with(extra), columns, rows)?;
        self.files.push(name.to_string());
        Ok(())
    }

    pub fn matrix(&mut self, name: &str, extra: &[(&str, String)], rows: Axis<'_>, cols: Axis<'_>, values: &[f64]) -> Result<()> {
        write_matrix(&self.dir.join(name), &self.header_with(extra), rows, cols, values)?;
        self.files.push(name.to_string());
        Ok(())
    }
}
