//! File formats: cue and truth tables (CSV), point clouds (ASCII PLY) and JSON.
//!
//! Floats are written with 17 significant digits so that every value round-trips,
//! and negative zero is written as zero.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use owl_core::geom::SphericalBearing;
use owl_core::sim::TruthSample;
use owl_core::{CueSample, Vec3};

use crate::error::CliError;

pub const CUES_HEADER: [&str; 12] = [
    "frame", "time", "point_id", "theta", "phi", "L", "wx", "wy", "wz", "erx", "ery", "erz",
];
pub const TRUTH_HEADER: [&str; 9] = ["frame", "time", "point_id", "rx", "ry", "rz", "tx", "ty", "tz"];

pub fn fmt_f64(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

fn push_row(out: &mut String, fields: &[String]) {
    out.push_str(&fields.join(","));
    out.push('\n');
}

fn vec_fields(v: Vec3) -> [String; 3] {
    [fmt_f64(v.x), fmt_f64(v.y), fmt_f64(v.z)]
}

pub fn cues_csv(rows: &[CueSample]) -> String {
    let mut out = String::new();
    push_row(&mut out, &CUES_HEADER.map(String::from));
    for c in rows {
        let mut f = vec![
            c.frame.to_string(),
            fmt_f64(c.time),
            c.point_id.to_string(),
            fmt_f64(c.bearing.theta),
            fmt_f64(c.bearing.phi),
            fmt_f64(c.looming),
        ];
        f.extend(vec_fields(c.omega));
        f.extend(vec_fields(c.e_r));
        push_row(&mut out, &f);
    }
    out
}

pub fn truth_csv(rows: &[TruthSample]) -> String {
    let mut out = String::new();
    push_row(&mut out, &TRUTH_HEADER.map(String::from));
    for s in rows {
        let mut f = vec![s.frame.to_string(), fmt_f64(s.time), s.point_id.to_string()];
        f.extend(vec_fields(s.r));
        f.extend(vec_fields(s.t));
        push_row(&mut out, &f);
    }
    out
}

/// Reads a CSV file with the exact `header`, returning the numeric fields of each
/// row. Errors name the file line.
fn read_table(path: &Path, header: &[&str]) -> Result<Vec<Vec<String>>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let found = reader
        .headers()
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?
        .clone();
    if found.iter().ne(header.iter().copied()) {
        return Err(CliError::Data(format!(
            "{}: expected header `{}`, found `{}`",
            path.display(),
            header.join(","),
            found.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| CliError::Data(format!("{}: row {line}: {e}", path.display())))?;
        rows.push(rec.iter().map(str::to_owned).collect());
    }
    Ok(rows)
}

struct RowParser<'a> {
    path: &'a Path,
    line: usize,
    fields: &'a [String],
    header: &'a [&'a str],
}

impl RowParser<'_> {
    fn float(&self, i: usize) -> Result<f64, CliError> {
        self.fields[i]
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| self.bad(i))
    }

    fn int<T: std::str::FromStr>(&self, i: usize) -> Result<T, CliError> {
        self.fields[i].trim().parse::<T>().map_err(|_| self.bad(i))
    }

    fn vec3(&self, i: usize) -> Result<Vec3, CliError> {
        Ok(Vec3::new(self.float(i)?, self.float(i + 1)?, self.float(i + 2)?))
    }

    fn bad(&self, i: usize) -> CliError {
        CliError::Data(format!(
            "{}: row {}: invalid value `{}` in column `{}`",
            self.path.display(),
            self.line,
            self.fields[i],
            self.header[i]
        ))
    }
}

pub fn read_cues(path: &Path) -> Result<Vec<CueSample>, CliError> {
    let rows = read_table(path, &CUES_HEADER)?;
    rows.iter()
        .enumerate()
        .map(|(i, fields)| {
            let p = RowParser {
                path,
                line: i + 2,
                fields,
                header: &CUES_HEADER,
            };
            Ok(CueSample {
                frame: p.int(0)?,
                time: p.float(1)?,
                point_id: p.int(2)?,
                bearing: SphericalBearing::new(p.float(3)?, p.float(4)?),
                looming: p.float(5)?,
                omega: p.vec3(6)?,
                e_r: p.vec3(9)?,
            })
        })
        .collect()
}

pub fn read_truth(path: &Path) -> Result<Vec<TruthSample>, CliError> {
    let rows = read_table(path, &TRUTH_HEADER)?;
    rows.iter()
        .enumerate()
        .map(|(i, fields)| {
            let p = RowParser {
                path,
                line: i + 2,
                fields,
                header: &TRUTH_HEADER,
            };
            Ok(TruthSample {
                frame: p.int(0)?,
                time: p.float(1)?,
                point_id: p.int(2)?,
                r: p.vec3(3)?,
                t: p.vec3(6)?,
            })
        })
        .collect()
}

/// Groups rows by frame, keeping row order within a frame.
pub fn by_frame<T: Clone>(rows: &[T], frame_of: impl Fn(&T) -> usize) -> BTreeMap<usize, Vec<T>> {
    let mut map: BTreeMap<usize, Vec<T>> = BTreeMap::new();
    for r in rows {
        map.entry(frame_of(r)).or_default().push(r.clone());
    }
    map
}

pub fn ply(points: &[Vec3], comment: &str) -> String {
    let mut out = String::new();
    out.push_str("ply\nformat ascii 1.0\n");
    let _ = writeln!(out, "comment {comment}");
    let _ = writeln!(out, "element vertex {}", points.len());
    out.push_str("property double x\nproperty double y\nproperty double z\nend_header\n");
    for p in points {
        let _ = writeln!(out, "{} {} {}", fmt_f64(p.x), fmt_f64(p.y), fmt_f64(p.z));
    }
    out
}

/// Vertices of an ASCII PLY file written by [`ply`].
pub fn read_ply(path: &Path) -> Result<Vec<Vec3>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let bad = |msg: &str| CliError::Data(format!("{}: {msg}", path.display()));
    let (head, body) = text
        .split_once("end_header\n")
        .ok_or_else(|| bad("missing end_header"))?;
    let count: usize = head
        .lines()
        .find_map(|l| l.strip_prefix("element vertex "))
        .and_then(|n| n.trim().parse().ok())
        .ok_or_else(|| bad("missing vertex count"))?;
    let points = body
        .lines()
        .map(|l| {
            let v: Vec<f64> = l.split_whitespace().filter_map(|x| x.parse().ok()).collect();
            match v[..] {
                [x, y, z] => Ok(Vec3::new(x, y, z)),
                _ => Err(bad(&format!("malformed vertex `{l}`"))),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    if points.len() != count {
        return Err(bad("vertex count does not match header"));
    }
    Ok(points)
}

pub fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

pub fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    text.push('\n');
    write(path, &text)
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<(T, serde_json::Value), CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let parsed = serde_json::from_value(value.clone())
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    Ok((parsed, value))
}
