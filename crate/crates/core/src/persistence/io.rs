use std::fmt::Write as _;
use std::path::Path;

use super::{PersistenceDiagram, PersistencePair};
use crate::metric::MetricTag;
use crate::{Error, Result};

pub const CSV_HEADER: &str = "degree,birth,death";

/// `degree,birth,death` rows; values use the shortest representation that
/// parses back to the same `f64`, infinite deaths print as `inf`.
pub fn diagrams_to_csv(diagrams: &[PersistenceDiagram]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for d in diagrams {
        for p in &d.pairs {
            let _ = writeln!(out, "{},{},{}", d.degree, p.birth, p.death);
        }
    }
    out
}

/// Inverse of [`diagrams_to_csv`]. Degrees up to the largest one present
/// (or `min_degrees − 1`) get a diagram, possibly empty.
pub fn parse_diagrams_csv(text: &str, min_degrees: usize) -> Result<Vec<PersistenceDiagram>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == CSV_HEADER => {}
        _ => return Err(Error::parse(1, format!("expected header `{CSV_HEADER}`"))),
    }
    let mut rows: Vec<(usize, PersistencePair)> = Vec::new();
    for (k, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(Error::parse(k + 1, format!("expected 3 fields, got {}", fields.len())));
        }
        let degree: usize = fields[0]
            .parse()
            .map_err(|_| Error::parse(k + 1, format!("bad degree `{}`", fields[0])))?;
        let num = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .ok()
                .filter(|x| !x.is_nan())
                .ok_or_else(|| Error::parse(k + 1, format!("bad number `{s}`")))
        };
        let (birth, death) = (num(fields[1])?, num(fields[2])?);
        if !birth.is_finite() || death < birth {
            return Err(Error::parse(k + 1, format!("invalid bar ({birth}, {death})")));
        }
        rows.push((degree, PersistencePair::new(birth, death)));
    }
    let count = rows
        .iter()
        .map(|(d, _)| d + 1)
        .max()
        .unwrap_or(0)
        .max(min_degrees);
    let mut per: Vec<Vec<PersistencePair>> = vec![Vec::new(); count];
    for (d, p) in rows {
        per[d].push(p);
    }
    // keep file order so CSV -> parse -> CSV is the identity
    Ok(per
        .into_iter()
        .enumerate()
        .map(|(degree, pairs)| PersistenceDiagram { degree, pairs })
        .collect())
}

pub fn save_diagrams_csv(path: impl AsRef<Path>, diagrams: &[PersistenceDiagram]) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, diagrams_to_csv(diagrams)).map_err(|e| Error::io(path, e))
}

const SIZE: f64 = 480.0;
const MARGIN: f64 = 56.0;
const COLORS: [&str; 3] = ["#1f77b4", "#d62728", "#2ca02c"];

fn marker(out: &mut String, degree: usize, x: f64, y: f64, hollow: bool) {
    let color = COLORS[degree % COLORS.len()];
    let fill = if hollow { "none" } else { color };
    let _ = match degree % 3 {
        0 => writeln!(
            out,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="3.5" fill="{fill}" stroke="{color}"/>"#
        ),
        1 => writeln!(
            out,
            r#"<rect x="{:.2}" y="{:.2}" width="7" height="7" fill="{fill}" stroke="{color}"/>"#,
            x - 3.5,
            y - 3.5
        ),
        _ => writeln!(
            out,
            r#"<polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="{fill}" stroke="{color}"/>"#,
            x,
            y - 4.0,
            x - 4.0,
            y + 3.5,
            x + 4.0,
            y + 3.5
        ),
    };
}

/// Birth–death scatter plot. Infinite bars sit on a dashed line at 1.05× the
/// largest finite value and are drawn hollow.
pub fn diagram_svg(diagrams: &[PersistenceDiagram], tag: MetricTag, c: f64) -> String {
    let finite_max = diagrams
        .iter()
        .flat_map(|d| d.pairs.iter())
        .flat_map(|p| [p.birth, p.death])
        .filter(|x| x.is_finite())
        .fold(0.0, f64::max);
    let top = if finite_max > 0.0 { finite_max } else { 1.0 };
    let inf_level = 1.05 * top;
    let extent = 1.1 * top;
    let plot = SIZE - 2.0 * MARGIN;
    let sx = |v: f64| MARGIN + v / extent * plot;
    let sy = |v: f64| SIZE - MARGIN - v / extent * plot;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{plot}" height="{plot}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        out,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="gray"/>"#,
        sx(0.0),
        sy(0.0),
        sx(extent),
        sy(extent)
    );
    let _ = writeln!(
        out,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="gray" stroke-dasharray="4 3"/>"#,
        sx(0.0),
        sy(inf_level),
        sx(extent),
        sy(inf_level)
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="10" font-family="sans-serif">inf</text>"#,
        MARGIN - 22.0,
        sy(inf_level) + 3.0
    );
    for k in 0..=4 {
        let v = top * k as f64 / 4.0;
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="10" font-family="sans-serif" text-anchor="middle">{v:.3}</text>"#,
            sx(v),
            SIZE - MARGIN + 14.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="10" font-family="sans-serif" text-anchor="end">{v:.3}</text>"#,
            MARGIN - 4.0,
            sy(v) + 3.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="12" font-family="sans-serif" text-anchor="middle">birth ({})</text>"#,
        SIZE / 2.0,
        SIZE - 16.0,
        tag.name()
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{:.2}" font-size="12" font-family="sans-serif" text-anchor="middle" transform="rotate(-90 16 {:.2})">death (c = {c})</text>"#,
        SIZE / 2.0,
        SIZE / 2.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="24" font-size="13" font-family="sans-serif" text-anchor="middle">metric {} / c = {c}</text>"#,
        SIZE / 2.0,
        tag.name()
    );
    for d in diagrams {
        for p in &d.pairs {
            let y = if p.is_infinite() { inf_level } else { p.death };
            marker(&mut out, d.degree, sx(p.birth), sy(y), p.is_infinite());
        }
    }
    for (k, d) in diagrams.iter().enumerate() {
        let y = MARGIN + 14.0 + 16.0 * k as f64;
        marker(&mut out, d.degree, SIZE - MARGIN - 48.0, y - 4.0, false);
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{y:.2}" font-size="11" font-family="sans-serif">H{}</text>"#,
            SIZE - MARGIN - 38.0,
            d.degree
        );
    }
    out.push_str("</svg>\n");
    out
}

pub fn save_diagram_svg(
    path: impl AsRef<Path>,
    diagrams: &[PersistenceDiagram],
    tag: MetricTag,
    c: f64,
) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, diagram_svg(diagrams, tag, c)).map_err(|e| Error::io(path, e))
}
