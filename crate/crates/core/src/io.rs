//! Text point-cloud formats: whitespace-separated XYZ (3 or 6 columns) and
//! ASCII PLY.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use log::warn;

use crate::error::{Error, Result};
use crate::geometry::{Point, PointCloud, Vector};

/// Normals off unit length by more than this are reported on load.
const NORMAL_WARN_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CloudFormat {
    Xyz,
    PlyAscii,
}

impl CloudFormat {
    /// `.ply` means ASCII PLY; anything else is XYZ.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("ply") => CloudFormat::PlyAscii,
            _ => CloudFormat::Xyz,
        }
    }
}

impl FromStr for CloudFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "xyz" => Ok(CloudFormat::Xyz),
            "ply" | "ply_ascii" => Ok(CloudFormat::PlyAscii),
            _ => Err(Error::param(format!("unknown format '{s}'"))),
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn load_cloud(path: &Path, format: Option<CloudFormat>) -> Result<PointCloud> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    match format.unwrap_or_else(|| CloudFormat::from_path(path)) {
        CloudFormat::Xyz => parse_xyz(&text, path),
        CloudFormat::PlyAscii => parse_ply(&text, path),
    }
}

pub fn save_cloud(cloud: &PointCloud, path: &Path, format: Option<CloudFormat>) -> Result<()> {
    let text = match format.unwrap_or_else(|| CloudFormat::from_path(path)) {
        CloudFormat::Xyz => format_xyz(cloud),
        CloudFormat::PlyAscii => format_ply(cloud),
    };
    fs::write(path, text).map_err(io_err(path))
}

struct Rows {
    points: Vec<Point>,
    normals: Vec<Vector>,
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: PathBuf::from(path),
        line,
        message: message.into(),
    }
}

fn parse_floats(fields: &[&str], path: &Path, line: usize) -> Result<Vec<f64>> {
    fields
        .iter()
        .map(|f| {
            f.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_error(path, line, format!("'{f}' is not a finite number")))
        })
        .collect()
}

fn push_normal(rows: &mut Rows, n: Vector, path: &Path, line: usize) -> Result<()> {
    let norm = n.norm();
    if norm.is_nan() || norm <= 0.0 {
        return Err(parse_error(path, line, "zero-length normal"));
    }
    if (norm - 1.0).abs() > NORMAL_WARN_TOLERANCE {
        warn!("{}:{line}: normal has norm {norm}, renormalizing", path.display());
    }
    rows.normals.push(n / norm);
    Ok(())
}

fn finish(rows: Rows, with_normals: bool, path: &Path) -> Result<PointCloud> {
    if rows.points.is_empty() {
        return Err(parse_error(path, 0, "no points"));
    }
    if with_normals {
        PointCloud::with_normals(rows.points, rows.normals)
    } else {
        PointCloud::new(rows.points)
    }
}

fn parse_xyz(text: &str, path: &Path) -> Result<PointCloud> {
    let mut rows = Rows {
        points: Vec::new(),
        normals: Vec::new(),
    };
    let mut columns: Option<usize> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 3 && fields.len() != 6 {
            return Err(parse_error(
                path,
                line,
                format!("expected 3 or 6 columns, found {}", fields.len()),
            ));
        }
        match columns {
            None => columns = Some(fields.len()),
            Some(c) if c != fields.len() => {
                return Err(parse_error(
                    path,
                    line,
                    format!("row has {} columns but earlier rows have {c}", fields.len()),
                ))
            }
            _ => {}
        }
        let v = parse_floats(&fields, path, line)?;
        rows.points.push(Point::new(v[0], v[1], v[2]));
        if v.len() == 6 {
            push_normal(&mut rows, Vector::new(v[3], v[4], v[5]), path, line)?;
        }
    }
    finish(rows, columns == Some(6), path)
}

struct PlyElement {
    name: String,
    count: usize,
    properties: Vec<(String, bool)>,
}

fn parse_ply(text: &str, path: &Path) -> Result<PointCloud> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    match lines.next() {
        Some((_, "ply")) => {}
        _ => return Err(parse_error(path, 1, "missing 'ply' magic")),
    }
    let mut elements: Vec<PlyElement> = Vec::new();
    let mut saw_format = false;
    loop {
        let (line, content) = lines
            .next()
            .ok_or_else(|| parse_error(path, 0, "header has no end_header"))?;
        let fields: Vec<&str> = content.split_whitespace().collect();
        match fields.as_slice() {
            ["end_header"] => break,
            ["format", "ascii", _] => saw_format = true,
            ["format", other, ..] => {
                return Err(parse_error(path, line, format!("unsupported PLY format '{other}'")))
            }
            ["comment", ..] | ["obj_info", ..] | [] => {}
            ["element", name, count] => {
                let count = count
                    .parse()
                    .map_err(|_| parse_error(path, line, format!("bad element count '{count}'")))?;
                elements.push(PlyElement {
                    name: name.to_string(),
                    count,
                    properties: Vec::new(),
                });
            }
            ["property", "list", _, _, name] => elements
                .last_mut()
                .ok_or_else(|| parse_error(path, line, "property before element"))?
                .properties
                .push((name.to_string(), true)),
            ["property", _, name] => elements
                .last_mut()
                .ok_or_else(|| parse_error(path, line, "property before element"))?
                .properties
                .push((name.to_string(), false)),
            _ => return Err(parse_error(path, line, format!("unrecognized header line '{content}'"))),
        }
    }
    if !saw_format {
        return Err(parse_error(path, 1, "missing format line"));
    }

    let mut body = lines.filter(|(_, l)| !l.is_empty());
    let mut rows = Rows {
        points: Vec::new(),
        normals: Vec::new(),
    };
    let mut with_normals = false;
    let mut found_vertex = false;
    for element in &elements {
        if element.name != "vertex" {
            for _ in 0..element.count {
                body.next()
                    .ok_or_else(|| parse_error(path, 0, format!("truncated '{}' element", element.name)))?;
            }
            continue;
        }
        found_vertex = true;
        if element.properties.iter().any(|(_, list)| *list) {
            return Err(parse_error(path, 0, "list properties on vertices are not supported"));
        }
        let col = |name: &str| element.properties.iter().position(|(n, _)| n == name);
        let xyz = match (col("x"), col("y"), col("z")) {
            (Some(x), Some(y), Some(z)) => [x, y, z],
            _ => return Err(parse_error(path, 0, "vertex element lacks x, y, z")),
        };
        let nxyz = match (col("nx"), col("ny"), col("nz")) {
            (Some(x), Some(y), Some(z)) => Some([x, y, z]),
            _ => None,
        };
        with_normals = nxyz.is_some();
        for _ in 0..element.count {
            let (line, content) = body
                .next()
                .ok_or_else(|| parse_error(path, 0, "fewer vertex rows than declared"))?;
            let fields: Vec<&str> = content.split_whitespace().collect();
            if fields.len() != element.properties.len() {
                return Err(parse_error(
                    path,
                    line,
                    format!("expected {} values, found {}", element.properties.len(), fields.len()),
                ));
            }
            let v = parse_floats(&fields, path, line)?;
            rows.points.push(Point::new(v[xyz[0]], v[xyz[1]], v[xyz[2]]));
            if let Some(nc) = nxyz {
                push_normal(&mut rows, Vector::new(v[nc[0]], v[nc[1]], v[nc[2]]), path, line)?;
            }
        }
    }
    if !found_vertex {
        return Err(parse_error(path, 0, "no vertex element"));
    }
    finish(rows, with_normals, path)
}

/// Formats with 9 significant digits, trimming trailing zeros.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        let mut s = format!("{x:.decimals$}");
        if s.contains('.') {
            while s.ends_with('0') {
                s.pop();
            }
            if s.ends_with('.') {
                s.pop();
            }
        }
        if s == "-0" {
            s = "0".to_string();
        }
        s
    } else {
        format!("{x:.8e}")
    }
}

fn write_row(out: &mut String, p: &Point, n: Option<&Vector>) {
    let _ = write!(out, "{} {} {}", format_float(p.x), format_float(p.y), format_float(p.z));
    if let Some(n) = n {
        let _ = write!(out, " {} {} {}", format_float(n.x), format_float(n.y), format_float(n.z));
    }
    out.push('\n');
}

fn format_xyz(cloud: &PointCloud) -> String {
    let mut out = String::with_capacity(cloud.len() * 40);
    for (i, p) in cloud.points().iter().enumerate() {
        write_row(&mut out, p, cloud.normals().map(|n| &n[i]));
    }
    out
}

fn format_ply(cloud: &PointCloud) -> String {
    let mut out = String::with_capacity(cloud.len() * 40 + 200);
    out.push_str("ply\nformat ascii 1.0\n");
    let _ = writeln!(out, "element vertex {}", cloud.len());
    out.push_str("property double x\nproperty double y\nproperty double z\n");
    if cloud.has_normals() {
        out.push_str("property double nx\nproperty double ny\nproperty double nz\n");
    }
    out.push_str("end_header\n");
    out.push_str(&format_xyz(cloud));
    out
}

/// One value per line.
pub fn write_column<T: ToString>(path: &Path, values: impl IntoIterator<Item = T>) -> Result<()> {
    let mut out = String::new();
    for v in values {
        out.push_str(&v.to_string());
        out.push('\n');
    }
    fs::write(path, out).map_err(io_err(path))
}

pub fn write_floats(path: &Path, values: &[f64]) -> Result<()> {
    write_column(path, values.iter().map(|&v| format_float(v)))
}

/// Reads one nonnegative integer per line (blank lines and `#` comments
/// skipped).
pub fn read_indices(path: &Path) -> Result<Vec<usize>> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        out.push(
            t.parse()
                .map_err(|_| parse_error(path, i + 1, format!("'{t}' is not an index")))?,
        );
    }
    Ok(out)
}
