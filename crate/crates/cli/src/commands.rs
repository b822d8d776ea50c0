use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use gph_core::checks::{run_suite, summary_table};
use gph_core::frames_io::{load_frames, save_frames};
use gph_core::generators::{
    delay_embed, delay_steps, double_gyre_trajectory, ellipse_sample, load_points, mobius_sample,
    save_points_csv, torus_sample, write_sidecar, PointFormat, TorusSampling, TrajectoryConfig,
};
use gph_core::orientation::{long_edges, orientation_safety_radius, InconsistencyReport};
use gph_core::persistence::{
    bottleneck_per_degree, parse_diagrams_csv, save_diagram_svg, save_diagrams_csv,
};
use gph_core::pipeline::{estimate_oriented_frames, subsample_indices, OrientedFrames};
use gph_core::{
    choose_scale, default_k, distance_matrix, estimate_frame_field, euclidean_matrix, knn,
    propagate_orientation, vr_persistence, DistanceMatrix, Error, FrameField, PointCloud,
    Propagation, ScaleParams,
};
use serde_json::json;

use crate::{
    ChecksArgs, Command, CompareArgs, DelayArgs, DistmatArgs, FramesArgs, FramesOn, Generator,
    Metric, Observable, OrientArgs, PhArgs, PointsArgs, Sampling,
};

pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NUMERICS: u8 = 3;
pub const EXIT_INCONSISTENT: u8 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Numerics(_)
            | Error::DegenerateNeighborhood { .. }
            | Error::DegenerateCloud(_)
            | Error::InsufficientPoints(_) => EXIT_NUMERICS,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<(), Failure>;

pub fn run(command: Command) -> Outcome {
    match command {
        Command::Gen(g) => generate(g),
        Command::Frames(a) => frames(a),
        Command::Orient(a) => orient(a),
        Command::Distmat(a) => distmat(a),
        Command::Ph(a) => ph(a),
        Command::Compare(a) => compare(a),
        Command::Checks(a) => checks(a),
    }
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn write_text(path: &Path, text: &str) -> Outcome {
    std::fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_cloud(args: &PointsArgs) -> Result<PointCloud<f64>, Failure> {
    Ok(load_points(&args.points, PointFormat::from_path(&args.points), args.dim)?)
}

fn generate(g: Generator) -> Outcome {
    match g {
        Generator::Torus(a) => {
            let mode = match a.sampling {
                Sampling::Uniform => TorusSampling::UniformRandom,
                Sampling::Grid => TorusSampling::Grid,
            };
            let s = torus_sample(a.big_r, a.small_r, a.n, a.seed, mode)?;
            let frames_out = a.frames_out.unwrap_or_else(|| a.out.with_extension("frames"));
            save_points_csv(&a.out, &s.cloud)?;
            save_frames(&frames_out, &s.frames)?;
            write_sidecar(
                &a.out,
                &[json!({
                    "generator": "torus", "R": a.big_r, "r": a.small_r, "n": a.n,
                    "seed": a.seed, "sampling": mode, "frames": file_name(&frames_out),
                })],
            )?;
        }
        Generator::Ellipse(a) => {
            let (cloud, frames) = ellipse_sample(a.a, a.b, a.n)?;
            let frames_out = a.frames_out.unwrap_or_else(|| a.out.with_extension("frames"));
            save_points_csv(&a.out, &cloud)?;
            save_frames(&frames_out, &frames)?;
            write_sidecar(
                &a.out,
                &[json!({
                    "generator": "ellipse", "a": a.a, "b": a.b, "n": a.n,
                    "frames": file_name(&frames_out),
                })],
            )?;
        }
        Generator::Mobius(a) => {
            let cloud = mobius_sample(a.big_r, a.w, a.n, a.seed)?;
            save_points_csv(&a.out, &cloud)?;
            write_sidecar(
                &a.out,
                &[json!({"generator": "mobius", "R": a.big_r, "w": a.w, "n": a.n, "seed": a.seed})],
            )?;
        }
        Generator::Doublegyre(a) => {
            let cfg = TrajectoryConfig {
                c: a.c,
                eta: a.eta,
                omega: a.omega.unwrap_or(std::f64::consts::PI / 5.0),
                x0: a.x0,
                y0: a.y0,
                t_end: a.t_end,
                n: a.n,
                h: a.h,
            };
            let tr = double_gyre_trajectory(&cfg)?;
            let mut text = String::from("t,x,y\n");
            for i in 0..tr.t.len() {
                let _ = writeln!(text, "{:.16e},{:.16e},{:.16e}", tr.t[i], tr.x[i], tr.y[i]);
            }
            write_text(&a.out, &text)?;
            if let Some(w) = &tr.warning {
                eprintln!(
                    "gph: warning: trajectory left the box by {:.3e} at t = {}; reduce --h",
                    w.excess, w.t
                );
            }
            write_sidecar(
                &a.out,
                &[json!({"generator": "doublegyre", "config": cfg, "warning": tr.warning})],
            )?;
        }
        Generator::Delay(a) => delay(a)?,
    }
    Ok(())
}

fn delay(a: DelayArgs) -> Outcome {
    let table = load_points(&a.input, PointFormat::Csv, 1)?;
    if table.ambient_dim() != 3 || table.len() < 2 {
        return Err(Failure::usage(format!(
            "{}: expected `t,x,y` rows (at least two), got {} columns and {} rows",
            a.input.display(),
            table.ambient_dim(),
            table.len()
        )));
    }
    let col = match a.column {
        Observable::X => 1,
        Observable::Y => 2,
    };
    let series: Vec<f64> = table.points().map(|p| p[col]).collect();
    let spacing = table.point(1)[0] - table.point(0)[0];
    let steps = delay_steps(a.tau, spacing)?;
    let cloud = delay_embed(&series, steps, a.m, a.dim)?;
    save_points_csv(&a.out, &cloud)?;
    write_sidecar(
        &a.out,
        &[json!({
            "generator": "delay", "input": file_name(&a.input),
            "column": if col == 1 { "x" } else { "y" },
            "tau": a.tau, "sample_spacing": spacing, "tau_steps": steps, "m": a.m, "dim": a.dim,
        })],
    )?;
    Ok(())
}

fn resolve_k(k: Option<usize>, cloud: &PointCloud<f64>) -> Result<usize, Failure> {
    Ok(match k {
        Some(k) => k,
        None => default_k(cloud.len(), cloud.intrinsic_dim())?,
    })
}

fn frames(a: FramesArgs) -> Outcome {
    let cloud = load_cloud(&a.input)?;
    let k = resolve_k(a.k, &cloud)?;
    let field = estimate_frame_field(&cloud, &knn(&cloud, k)?)?;
    save_frames(&a.out, &field)?;
    write_sidecar(
        &a.out,
        &[json!({"stage": "frames", "points": file_name(&a.input.points), "k": k, "dim": a.input.dim})],
    )?;
    Ok(())
}

fn inconsistency(report: &InconsistencyReport, path: &Path) -> Failure {
    Failure {
        code: EXIT_INCONSISTENT,
        message: format!(
            "no consistent orientation: {} violating edges (report: {})",
            report.violating.len(),
            path.display()
        ),
    }
}

fn report_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(".report.txt");
    out.with_file_name(name)
}

fn orient(a: OrientArgs) -> Outcome {
    let cloud = load_cloud(&a.input)?;
    let field = load_frames(&a.frames)?;
    if field.len() != cloud.len() {
        return Err(Failure::usage(format!(
            "{} frames for {} points",
            field.len(),
            cloud.len()
        )));
    }
    let k = resolve_k(a.k, &cloud)?;
    let edges = knn(&cloud, k)?.symmetrize();
    if let Some(tau) = a.reach {
        let radius = orientation_safety_radius(tau)?;
        let long = long_edges(&cloud, &edges, radius);
        if !long.is_empty() {
            eprintln!(
                "gph: warning: {} of {} edges are longer than half the reach ({radius})",
                long.len(),
                edges.len()
            );
        }
    }
    let report_out = a.report.unwrap_or_else(|| report_path(&a.out));
    match propagate_orientation(&field, &edges)? {
        Propagation::Consistent {
            field,
            flips,
            components,
            indeterminate,
        } => {
            let report = InconsistencyReport {
                violating: vec![],
                indeterminate,
                components,
                flips,
            };
            write_text(&report_out, &report.to_text())?;
            save_frames(&a.out, &field)?;
            Ok(())
        }
        Propagation::Inconsistent(report) => {
            write_text(&report_out, &report.to_text())?;
            Err(inconsistency(&report, &report_out))
        }
    }
}

fn parse_scale(raw: &str, cloud: &PointCloud<f64>) -> Result<ScaleParams, Failure> {
    if raw == "auto" {
        return Ok(choose_scale(cloud)?);
    }
    let c: f64 = raw
        .parse()
        .map_err(|_| Failure::usage(format!("--c must be `auto` or a number, got `{raw}`")))?;
    Ok(ScaleParams::manual(c)?)
}

fn distmat(a: DistmatArgs) -> Outcome {
    let cloud = load_cloud(&a.input)?;
    let indices = match a.subsample {
        Some(m) if m < 2 => return Err(Failure::usage("--subsample must be at least 2")),
        Some(m) => subsample_indices(cloud.len(), m, a.seed),
        None => (0..cloud.len()).collect(),
    };
    let sub = cloud.select(&indices);
    let (matrix, mut record): (DistanceMatrix<f64>, _) = match a.metric {
        Metric::Euclidean => (euclidean_matrix(&sub), json!({"metric": "euclidean"})),
        Metric::Dc => {
            let field: FrameField<f64> = match a.frames_on {
                FramesOn::Full => {
                    let path = a
                        .frames
                        .as_ref()
                        .ok_or_else(|| Failure::usage("--metric dc with --frames-on full needs --frames"))?;
                    let field = load_frames(path)?;
                    if field.len() != cloud.len() {
                        return Err(Failure::usage(format!(
                            "{} frames for {} points",
                            field.len(),
                            cloud.len()
                        )));
                    }
                    field.select(&indices)
                }
                FramesOn::Subsample => match estimate_oriented_frames(&sub, a.k)? {
                    OrientedFrames::Oriented { field, .. } => field,
                    OrientedFrames::Inconsistent { report, .. } => {
                        let path = report_path(&a.out);
                        write_text(&path, &report.to_text())?;
                        return Err(inconsistency(&report, &path));
                    }
                },
            };
            let scale = parse_scale(&a.c, &sub)?;
            (
                distance_matrix(&sub, &field, &scale)?,
                json!({"metric": "dc", "c": scale.c, "c_mode": scale.mode, "frames_on": format!("{:?}", a.frames_on).to_lowercase()}),
            )
        }
    };
    matrix.save_gpdm(&a.out)?;
    let extra = json!({
        "points": file_name(&a.input.points),
        "n_points": cloud.len(),
        "n": indices.len(),
        "seed": a.seed,
        "diameter": sub.diameter(),
        "indices": indices,
    });
    if let (Some(r), Some(e)) = (record.as_object_mut(), extra.as_object()) {
        r.extend(e.clone());
    }
    write_sidecar(&a.out, &[record])?;
    Ok(())
}

fn ph(a: PhArgs) -> Outcome {
    let matrix = DistanceMatrix::load_gpdm(&a.input)?;
    let diagrams = vr_persistence(&matrix, a.maxdim, a.threshold)?;
    save_diagrams_csv(&a.out, &diagrams)?;
    let svg = a.svg.unwrap_or_else(|| a.out.with_extension("svg"));
    save_diagram_svg(&svg, &diagrams, matrix.tag(), matrix.c())?;
    for d in &diagrams {
        println!(
            "H{}: {} bars ({} infinite)",
            d.degree,
            d.len(),
            d.infinite_count()
        );
    }
    Ok(())
}

fn read_diagrams(path: &Path) -> Result<Vec<gph_core::PersistenceDiagram>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    Ok(parse_diagrams_csv(&text, 0)?)
}

fn compare(a: CompareArgs) -> Outcome {
    let mut x = read_diagrams(&a.a)?;
    let mut y = read_diagrams(&a.b)?;
    let degrees = x.len().max(y.len());
    for dg in [&mut x, &mut y] {
        while dg.len() < degrees {
            dg.push(gph_core::PersistenceDiagram::new(dg.len(), vec![]));
        }
    }
    let mut text = String::from("degree,bottleneck\n");
    for (k, b) in bottleneck_per_degree(&x, &y).iter().enumerate() {
        let _ = writeln!(text, "{k},{b}");
    }
    print!("{text}");
    if let Some(out) = &a.out {
        write_text(out, &text)?;
    }
    Ok(())
}

fn checks(a: ChecksArgs) -> Outcome {
    let verdicts = run_suite(a.filter.as_deref())?;
    if verdicts.is_empty() {
        return Err(Failure::usage(format!(
            "no check matches `{}`",
            a.filter.unwrap_or_default()
        )));
    }
    let mut lines = String::new();
    for v in &verdicts {
        let line = serde_json::to_string(v).map_err(|e| Failure::usage(e.to_string()))?;
        lines.push_str(&line);
        lines.push('\n');
    }
    let table = summary_table(&verdicts);
    match &a.out {
        Some(path) => {
            write_text(path, &lines)?;
            print!("{table}");
        }
        None => {
            print!("{lines}");
            eprint!("{table}");
        }
    }
    let failed = verdicts.iter().filter(|v| v.failed()).count();
    if failed > 0 {
        return Err(Failure {
            code: EXIT_CHECK_FAILED,
            message: format!("{failed} of {} checks failed", verdicts.len()),
        });
    }
    Ok(())
}
