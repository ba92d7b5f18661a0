//! Curve files: CSV with full float precision, and SVG projections.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use elastica_core::frames::{Frame, FramedCurve, Vec3};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const CSV_HEADER: [&str; 15] = [
    "s", "x", "y", "z", "tx", "ty", "tz", "nx", "ny", "nz", "bx", "by", "bz", "kappa", "tau",
];

/// Seventeen significant digits: enough to read every `f64` back exactly.
pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(|e| CliError::io(&dir, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.as_file()
        .sync_all()
        .map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

pub fn curve_csv(curve: &FramedCurve) -> CliResult<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    let (kappa, tau) = (curve.profile.kappa(), curve.profile.tau());
    for i in 0..curve.nodes() {
        let (r, f) = (&curve.positions[i], &curve.frames[i]);
        let row = [
            curve.profile.arclength(i),
            r.x,
            r.y,
            r.z,
            f.t.x,
            f.t.y,
            f.t.z,
            f.n.x,
            f.n.y,
            f.n.z,
            f.b.x,
            f.b.y,
            f.b.z,
            kappa[i],
            tau[i],
        ];
        w.write_record(row.iter().map(|v| format_number(*v)))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Format(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Format(e.to_string()))
}

/// One parsed CSV row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRow {
    pub s: f64,
    pub position: Vec3,
    pub frame: Frame,
    pub kappa: f64,
    pub tau: f64,
}

pub fn read_curve_csv(path: &Path) -> CliResult<Vec<CurveRow>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_curve_csv(&text)
}

pub fn parse_curve_csv(text: &str) -> CliResult<Vec<CurveRow>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(CliError::Format(format!(
            "unexpected curve header {header:?}"
        )));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let v: Vec<f64> = record
            .iter()
            .map(|field| {
                field
                    .parse::<f64>()
                    .map_err(|_| CliError::Format(format!("bad number {field:?}")))
            })
            .collect::<CliResult<_>>()?;
        rows.push(CurveRow {
            s: v[0],
            position: Vec3::new(v[1], v[2], v[3]),
            frame: Frame {
                t: Vec3::new(v[4], v[5], v[6]),
                n: Vec3::new(v[7], v[8], v[9]),
                b: Vec3::new(v[10], v[11], v[12]),
            },
            kappa: v[13],
            tau: v[14],
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Plane {
    #[default]
    Xy,
    Xz,
    Yz,
}

impl Plane {
    pub fn project(self, r: &Vec3) -> (f64, f64) {
        match self {
            Plane::Xy => (r.x, r.y),
            Plane::Xz => (r.x, r.z),
            Plane::Yz => (r.y, r.z),
        }
    }
}

impl FromStr for Plane {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "xy" => Ok(Plane::Xy),
            "xz" => Ok(Plane::Xz),
            "yz" => Ok(Plane::Yz),
            other => Err(format!("unknown plane {other:?} (expected xy, xz or yz)")),
        }
    }
}

/// Single-polyline SVG of the curve projected onto `plane`.
pub fn curve_svg(curve: &FramedCurve, plane: Plane) -> String {
    let points: Vec<(f64, f64)> = curve.positions.iter().map(|r| plane.project(r)).collect();
    let (mut x0, mut y0) = (f64::INFINITY, f64::INFINITY);
    let (mut x1, mut y1) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &points {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let side = (x1 - x0).max(y1 - y0).max(f64::MIN_POSITIVE);
    let (w, h) = ((x1 - x0).max(side * 1e-3), (y1 - y0).max(side * 1e-3));
    let (mx, my) = (0.05 * w, 0.05 * h);
    let stroke = 0.005 * (w + 2.0 * mx).max(h + 2.0 * my);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        x0 - mx,
        y0 - my,
        w + 2.0 * mx,
        h + 2.0 * my
    );
    let mut coords = String::new();
    for (i, (x, y)) in points.iter().enumerate() {
        if i > 0 {
            coords.push(' ');
        }
        let _ = write!(coords, "{x},{y}");
    }
    let _ = writeln!(
        svg,
        r#"<polyline fill="none" stroke="black" stroke-width="{stroke}" points="{coords}"/>"#
    );
    svg.push_str("</svg>\n");
    svg
}

/// Writes the CSV and, when `svg` is set, a sibling `.svg`. Returns the
/// written paths.
pub fn export_curve(
    curve: &FramedCurve,
    path: &Path,
    svg: Option<Plane>,
) -> CliResult<Vec<PathBuf>> {
    let mut written = vec![path.to_path_buf()];
    write_atomic(path, curve_csv(curve)?.as_bytes())?;
    if let Some(plane) = svg {
        let svg_path = path.with_extension("svg");
        write_atomic(&svg_path, curve_svg(curve, plane).as_bytes())?;
        written.push(svg_path);
    }
    Ok(written)
}
