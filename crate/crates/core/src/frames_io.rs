//! Text format for frame fields.
//!
//! ```text
//! n D d oriented provenance
//! <D lines of d values>   (frame 0)
//!
//! <D lines of d values>   (frame 1)
//! ...
//! ```
//!
//! `oriented` is `0` or `1`, `provenance` is `estimated` or `analytic`.
//! Values are written with 17 significant digits so `f64` round-trips
//! exactly.

use std::fmt::Write as _;
use std::path::Path;

use crate::grassmann::Frame;
use crate::linalg::Matrix;
use crate::tangent::{FrameField, Provenance};
use crate::{Error, Result};

pub fn frames_to_text(field: &FrameField<f64>) -> String {
    let (dim, d) = field.shape().unwrap_or((0, 0));
    let provenance = match field.provenance() {
        Provenance::Estimated => "estimated",
        Provenance::Analytic => "analytic",
    };
    let mut out = format!(
        "{} {dim} {d} {} {provenance}\n",
        field.len(),
        u8::from(field.is_oriented())
    );
    for (k, f) in field.frames().iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        let m = f.columns();
        for i in 0..dim {
            let row: Vec<String> = m.row(i).iter().map(|x| format!("{x:.16e}")).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
    }
    out
}

pub fn save_frames(path: impl AsRef<Path>, field: &FrameField<f64>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, frames_to_text(field)).map_err(|e| Error::io(path, e))
}

pub fn load_frames(path: impl AsRef<Path>) -> Result<FrameField<f64>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_frames(&text)
}

fn parse_count(field: &str, line: usize, what: &str) -> Result<usize> {
    field
        .parse()
        .map_err(|_| Error::parse(line, format!("{what} must be a nonnegative integer, got `{field}`")))
}

pub fn parse_frames(text: &str) -> Result<FrameField<f64>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty frame file"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if !(4..=5).contains(&fields.len()) {
        return Err(Error::parse(hl, "header must read `n D d oriented [provenance]`"));
    }
    let n = parse_count(fields[0], hl, "n")?;
    let dim = parse_count(fields[1], hl, "D")?;
    let d = parse_count(fields[2], hl, "d")?;
    let oriented = match fields[3] {
        "0" | "false" => false,
        "1" | "true" => true,
        other => return Err(Error::parse(hl, format!("oriented flag must be 0 or 1, got `{other}`"))),
    };
    let provenance = match fields.get(4).copied().unwrap_or("estimated") {
        "estimated" => Provenance::Estimated,
        "analytic" => Provenance::Analytic,
        other => return Err(Error::parse(hl, format!("unknown provenance `{other}`"))),
    };
    if n > 0 && (d == 0 || d > dim) {
        return Err(Error::parse(hl, format!("need 1 ≤ d ≤ D, got D = {dim}, d = {d}")));
    }

    let mut frames = Vec::with_capacity(n);
    for k in 0..n {
        let mut data = Vec::with_capacity(dim * d);
        let mut first_line = hl;
        for i in 0..dim {
            let (ln, line) = lines
                .next()
                .ok_or_else(|| Error::parse(hl, format!("file ends inside frame {k}")))?;
            if i == 0 {
                first_line = ln;
            }
            let row = line
                .split_whitespace()
                .map(|x| {
                    x.parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .ok_or_else(|| Error::parse(ln, format!("`{x}` is not a finite number")))
                })
                .collect::<Result<Vec<f64>>>()?;
            if row.len() != d {
                return Err(Error::parse(ln, format!("expected {d} values, got {}", row.len())));
            }
            data.extend(row);
        }
        let frame = Frame::new(Matrix::from_row_major(dim, d, data))
            .map_err(|e| Error::parse(first_line, format!("frame {k}: {e}")))?;
        frames.push(frame);
    }
    if let Some((ln, _)) = lines.next() {
        return Err(Error::parse(ln, format!("trailing data after {n} frames")));
    }
    FrameField::new(frames, oriented, provenance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{torus_sample, TorusSampling};

    #[test]
    fn round_trip_is_exact() {
        let s = torus_sample(1.0, 0.3, 25, 3, TorusSampling::UniformRandom).unwrap();
        let text = frames_to_text(&s.frames);
        let back = parse_frames(&text).unwrap();
        assert_eq!(back, s.frames);
        assert_eq!(frames_to_text(&back), text);
    }

    #[test]
    fn rejects_malformed_files() {
        assert!(matches!(parse_frames(""), Err(Error::Parse { line: 1, .. })));
        match parse_frames("1 2 1 0\n1.0\n0.5\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        match parse_frames("1 2 1 0\n1.0\n") {
            Err(Error::Parse { .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(parse_frames("1 2 1 0\n1 0\n0\n").is_err());
        assert!(parse_frames("1 2 1 0\n1\n0\n0\n").is_err());
        let ok = parse_frames("1 2 1 1 analytic\n0\n-1\n").unwrap();
        assert!(ok.is_oriented());
        assert_eq!(ok.provenance(), Provenance::Analytic);
    }
}
