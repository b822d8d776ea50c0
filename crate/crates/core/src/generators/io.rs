use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, PointCloud, Result, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointFormat {
    Csv,
    Whitespace,
    OffVertices,
}

impl PointFormat {
    /// Guess from the extension: `.off` and `.csv`, anything else is
    /// whitespace-separated.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase) {
            Some(e) if e == "off" => PointFormat::OffVertices,
            Some(e) if e == "csv" => PointFormat::Csv,
            _ => PointFormat::Whitespace,
        }
    }
}

pub fn load_points(path: impl AsRef<Path>, format: PointFormat, intrinsic_dim: usize) -> Result<PointCloud<f64>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_points(&text, format, intrinsic_dim)
}

fn parse_row(line: &str, lineno: usize, sep: Option<char>) -> Result<Vec<f64>> {
    let fields: Vec<&str> = match sep {
        Some(c) => line.split(c).map(str::trim).collect(),
        None => line.split_whitespace().collect(),
    };
    fields
        .iter()
        .map(|f| {
            f.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::parse(lineno, format!("`{f}` is not a finite number")))
        })
        .collect()
}

/// Blank lines and `#` comments are skipped; a CSV may start with a
/// non-numeric header row.
pub fn parse_points(text: &str, format: PointFormat, intrinsic_dim: usize) -> Result<PointCloud<f64>> {
    let mut rows: Vec<(usize, Vec<f64>)> = Vec::new();
    let body: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    match format {
        PointFormat::Csv | PointFormat::Whitespace => {
            let sep = (format == PointFormat::Csv).then_some(',');
            for (idx, &(lineno, line)) in body.iter().enumerate() {
                match parse_row(line, lineno, sep) {
                    Ok(r) => rows.push((lineno, r)),
                    // header row
                    Err(_) if idx == 0 && format == PointFormat::Csv => {}
                    Err(e) => return Err(e),
                }
            }
        }
        PointFormat::OffVertices => {
            let mut it = body.iter();
            let &(hl, header) = it.next().ok_or_else(|| Error::parse(1, "empty OFF file"))?;
            if !header.starts_with("OFF") {
                return Err(Error::parse(hl, "missing OFF header"));
            }
            let rest = header[3..].trim();
            let (cl, counts) = if rest.is_empty() {
                let &(cl, c) = it.next().ok_or_else(|| Error::parse(hl + 1, "missing OFF counts"))?;
                (cl, c)
            } else {
                (hl, rest)
            };
            let counts = parse_row(counts, cl, None)?;
            let nv = match counts.first() {
                Some(&v) if v >= 0.0 && v.fract() == 0.0 => v as usize,
                _ => return Err(Error::parse(cl, "bad vertex count")),
            };
            for _ in 0..nv {
                let &(lineno, line) = it
                    .next()
                    .ok_or_else(|| Error::parse(cl, format!("file ends before {nv} vertices")))?;
                let row = parse_row(line, lineno, None)?;
                if row.len() != 3 {
                    return Err(Error::parse(lineno, format!("vertex has {} coordinates", row.len())));
                }
                rows.push((lineno, row));
            }
        }
    }
    let first = rows.first().ok_or_else(|| Error::parse(1, "no points found"))?;
    let dim = first.1.len();
    if let Some((lineno, r)) = rows.iter().find(|(_, r)| r.len() != dim) {
        return Err(Error::parse(*lineno, format!("expected {dim} coordinates, got {}", r.len())));
    }
    let coords: Vec<f64> = rows.into_iter().flat_map(|(_, r)| r).collect();
    PointCloud::new(dim, intrinsic_dim.min(dim), coords)
}

/// One point per line, comma-separated, 17 significant digits.
pub fn points_to_csv<T: Scalar>(cloud: &PointCloud<T>) -> String {
    let mut out = String::with_capacity(cloud.coords().len() * 24);
    for p in cloud.points() {
        let line: Vec<String> = p.iter().map(|x| format!("{:.16e}", x.as_f64())).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn save_points_csv<T: Scalar>(path: impl AsRef<Path>, cloud: &PointCloud<T>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, points_to_csv(cloud)).map_err(|e| Error::io(path, e))
}

/// Path of the JSON-lines metadata file accompanying `output`.
pub fn sidecar_path(output: &Path) -> std::path::PathBuf {
    let mut name = output.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(".meta.jsonl");
    output.with_file_name(name)
}

/// Write one JSON object per record.
pub fn write_sidecar(output: &Path, records: &[serde_json::Value]) -> Result<()> {
    let path = sidecar_path(output);
    let mut buf = Vec::new();
    for r in records {
        serde_json::to_writer(&mut buf, r).map_err(|e| Error::Data(e.to_string()))?;
        buf.push(b'\n');
    }
    let mut f = std::fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
    f.write_all(&buf).map_err(|e| Error::io(&path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_three_points() {
        let c = parse_points("x,y\n1,2\n3,4\n5,6\n", PointFormat::Csv, 1).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.point(2), &[5.0, 6.0]);
        let c = parse_points("1,2\n3,4\n5,6", PointFormat::Csv, 1).unwrap();
        assert_eq!(c.len(), 3);
    }

    #[test]
    fn off_cube_vertices() {
        let mut text = String::from("OFF\n8 6 0\n");
        for k in 0..8 {
            text.push_str(&format!("{} {} {}\n", k & 1, (k >> 1) & 1, (k >> 2) & 1));
        }
        text.push_str("4 0 1 3 2\n");
        let c = parse_points(&text, PointFormat::OffVertices, 2).unwrap();
        assert_eq!(c.len(), 8);
        assert_eq!(c.point(7), &[1.0, 1.0, 1.0]);
        // counts glued to the header
        let c = parse_points("OFF2 0 0\n0 0 0\n1 1 1\n", PointFormat::OffVertices, 2).unwrap();
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_points("", PointFormat::Csv, 1), Err(Error::Parse { .. })));
        match parse_points("1 2\n3 x\n", PointFormat::Whitespace, 1) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        match parse_points("1 2\n3 4 5\n", PointFormat::Whitespace, 1) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn csv_round_trip() {
        let c = PointCloud::new(2, 1, vec![0.1, -2.5e-7, 1.0 / 3.0, 4.0]).unwrap();
        let back = parse_points(&points_to_csv(&c), PointFormat::Csv, 1).unwrap();
        assert_eq!(back, c);
    }
}
