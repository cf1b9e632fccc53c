//! File outputs of a run: records.csv, 4D mesh frames, optional OBJ of
//! the stereographically projected unit-sphere mesh, and report.json.
//! All writers format deterministically.

use crate::config::RunConfig;
use crate::flow::{self, rescale_a, Evolution, FlowRecord, SingularityKind};
use crate::geom::Point4;
use crate::hopf::{fiber_seed, HopfTorusMesh};
use crate::{Error, Result};
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};

/// records.csv column layout. 17 significant digits per value.
pub const CSV_HEADER: &str =
    "t,tbar,R,length,area,area_predicted,max_kappa,sup_sigma_sq,typeI";

pub fn write_records_csv(path: &Path, records: &[FlowRecord]) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        writeln!(
            w,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.t, r.tbar, r.r, r.length, r.area, r.area_predicted, r.max_kappa, r.sup_sigma_sq, r.typei
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Quad faces of the torus grid, with the v-seam stitched by the row
/// shift closest to the seam phase so the surface closes as a torus.
fn faces(mesh: &HopfTorusMesh) -> Vec<[usize; 4]> {
    let (nb, nv) = (mesh.n_beta, mesh.n_v);
    let dbeta = 2.0 * std::f64::consts::PI / nb as f64;
    let shift = (mesh.seam_phase / dbeta).round() as usize % nb;
    let id = |i: usize, j: usize| i * nv + j;
    let mut out = Vec::with_capacity(nb * nv);
    for i in 0..nb {
        let ip = (i + 1) % nb;
        for j in 0..nv {
            if j + 1 < nv {
                out.push([id(i, j), id(ip, j), id(ip, j + 1), id(i, j + 1)]);
            } else {
                // crossing the seam lands on the phase-shifted start column
                let is = (i + shift) % nb;
                let ips = (ip + shift) % nb;
                out.push([id(i, j), id(ip, j), id(ips, 0), id(is, 0)]);
            }
        }
    }
    out
}

/// Text format: one "a b c d" vertex line per grid point (row-major over
/// beta then v), then a "faces" line, then one quad per line.
pub fn write_frame_v4(path: &Path, mesh: &HopfTorusMesh) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(
        w,
        "# hopf torus frame: n_beta={} n_v={} r={:.16e} t={:.16e} seam_phase={:.16e}",
        mesh.n_beta, mesh.n_v, mesh.r, mesh.t_stamp, mesh.seam_phase
    )?;
    for p in mesh.vertices() {
        writeln!(w, "{:.16e} {:.16e} {:.16e} {:.16e}", p.a, p.b, p.c, p.d)?;
    }
    writeln!(w, "faces")?;
    for f in faces(mesh) {
        writeln!(w, "{} {} {} {}", f[0], f[1], f[2], f[3])?;
    }
    w.flush()?;
    Ok(())
}

/// Stereographic projection of the unit-sphere mesh from `pole` into the
/// 3-space orthogonal to it, written as an OBJ with quad faces.
pub fn write_frame_obj(path: &Path, mesh: &HopfTorusMesh, pole: Point4) -> Result<()> {
    let pole = pole.scaled_to(1.0)?;
    // Orthonormal basis of pole^perp: J(pole) plus a horizontal-like pair.
    let jp = pole.j_mul();
    let mut basis = vec![jp];
    let candidates = [
        Point4::new(1.0, 0.0, 0.0, 0.0),
        Point4::new(0.0, 1.0, 0.0, 0.0),
        Point4::new(0.0, 0.0, 1.0, 0.0),
        Point4::new(0.0, 0.0, 0.0, 1.0),
    ];
    for cand in candidates {
        if basis.len() == 3 {
            break;
        }
        let mut v = cand - pole * cand.dot(pole);
        for b in &basis {
            v = v - *b * v.dot(*b);
        }
        let n = v.norm();
        if n > 0.3 {
            basis.push(v * (1.0 / n));
        }
    }

    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "# stereographic projection of a torus on the unit 3-sphere")?;
    for p in mesh.vertices() {
        let u = p.scaled_to(1.0)?;
        let denom = (1.0 - u.dot(pole)).max(1e-9);
        let y = (u - pole * u.dot(pole)) * (1.0 / denom);
        writeln!(
            w,
            "v {:.9} {:.9} {:.9}",
            y.dot(basis[0]),
            y.dot(basis[1]),
            y.dot(basis[2])
        )?;
    }
    for f in faces(mesh) {
        writeln!(w, "f {} {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1, f[3] + 1)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct FrameReport {
    index: usize,
    t: f64,
    tbar: f64,
    r: f64,
    path: String,
}

#[derive(Serialize)]
struct TypeIJson {
    sup: f64,
    c_est: f64,
    bounded: bool,
    g_strictly_increasing: Option<bool>,
    g_negative: Option<bool>,
}

#[derive(Serialize)]
struct ExtinctionJson {
    tbar: f64,
    t: f64,
    centroid: [f64; 3],
}

#[derive(Serialize)]
struct MeasuredVsPredicted {
    t_extinction_measured: f64,
    t_extinction_predicted: f64,
    relative_error: f64,
}

/// Machine-readable summary written next to the records.
#[derive(Serialize)]
pub struct RunReport {
    kind: SingularityKind,
    r0: f64,
    a0_measured: f64,
    initial_length: f64,
    t_singular_predicted: f64,
    /// None encodes an infinite extinction time (equal-area case).
    tau_predicted: Option<f64>,
    limit_radius_predicted: f64,
    extinction: Option<ExtinctionJson>,
    measured_vs_predicted: Option<MeasuredVsPredicted>,
    typei: TypeIJson,
    limit_fit_residual: Option<f64>,
    step_limited: bool,
    n_records: usize,
    frames: Vec<FrameReport>,
}

/// Artifact paths produced by [`run_to_disk`].
pub struct RunArtifacts {
    pub out_dir: PathBuf,
    pub records_csv: Option<PathBuf>,
    pub report_json: PathBuf,
    pub frame_files: Vec<PathBuf>,
    pub evolution: Evolution,
}

fn worker_cap() -> usize {
    std::env::var("HOPFMCF_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}

/// Execute a run config end to end and write every requested artifact.
pub fn run_to_disk(cfg: &RunConfig) -> Result<RunArtifacts> {
    let evo_cfg = cfg.prepare()?;
    let ev = flow::evolve(&evo_cfg)?;
    std::fs::create_dir_all(&cfg.out_dir)?;

    let records_csv = if cfg.export.csv {
        let p = cfg.out_dir.join("records.csv");
        write_records_csv(&p, &ev.records)?;
        Some(p)
    } else {
        None
    };

    // Frame exports are independent files; write them in parallel,
    // capped by HOPFMCF_THREADS.
    let mut frame_files = Vec::new();
    let mut frame_reports = Vec::new();
    if cfg.export.mesh4d || cfg.export.obj3d {
        let pole = match cfg.export.obj_pole {
            Some(a) => Point4::new(a[0], a[1], a[2], a[3]),
            None => -fiber_seed(match &ev.extinction {
                Some(e) => e.centroid,
                None => match &evo_cfg.initial {
                    flow::InitialCurve::Curve(c) => c.point(0),
                    flow::InitialCurve::Family(_) => unreachable!("prepare() resolves families"),
                },
            })?,
        };
        let jobs: Vec<(usize, &HopfTorusMesh)> = ev.frames.iter().enumerate().collect();
        let cap = worker_cap().max(1);
        let results: Vec<Result<Vec<PathBuf>>> = std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for chunk in jobs.chunks(jobs.len().div_ceil(cap).max(1)) {
                let out_dir = cfg.out_dir.clone();
                let export = cfg.export.clone();
                handles.push(scope.spawn(move || -> Result<Vec<PathBuf>> {
                    let mut written = Vec::new();
                    for (idx, mesh) in chunk {
                        if export.mesh4d {
                            let p = out_dir.join(format!("frame_{idx:04}.v4"));
                            write_frame_v4(&p, mesh)?;
                            written.push(p);
                        }
                        if export.obj3d {
                            let p = out_dir.join(format!("frame_{idx:04}.obj"));
                            write_frame_obj(&p, &rescale_a(mesh)?, pole)?;
                            written.push(p);
                        }
                    }
                    Ok(written)
                }));
            }
            handles.into_iter().map(|h| h.join().expect("export worker panicked")).collect()
        });
        for r in results {
            frame_files.extend(r?);
        }
        frame_files.sort();
        for (idx, mesh) in ev.frames.iter().enumerate() {
            frame_reports.push(FrameReport {
                index: idx,
                t: mesh.t_stamp,
                tbar: flow::tbar_of_t(mesh.t_stamp, ev.r0).unwrap_or(f64::NAN),
                r: mesh.r,
                path: format!("frame_{idx:04}.v4"),
            });
        }
    }

    let tau = crate::csf::extinction_tbar(ev.a0)?;
    let monitor = flow::typei_monitor(&ev.records, ev.report.t_singular, ev.r0);
    let report = RunReport {
        kind: ev.report.kind,
        r0: ev.r0,
        a0_measured: ev.a0,
        initial_length: ev.initial_length,
        t_singular_predicted: ev.report.t_singular,
        tau_predicted: tau.is_finite().then_some(tau),
        limit_radius_predicted: ev.report.limit_radius,
        extinction: ev.extinction.as_ref().map(|e| ExtinctionJson {
            tbar: e.tbar,
            t: e.t,
            centroid: [e.centroid.x, e.centroid.y, e.centroid.z],
        }),
        measured_vs_predicted: ev.extinction.as_ref().map(|e| MeasuredVsPredicted {
            t_extinction_measured: e.t,
            t_extinction_predicted: ev.report.t_singular,
            relative_error: (e.t - ev.report.t_singular).abs() / ev.report.t_singular,
        }),
        typei: TypeIJson {
            sup: monitor.sup_typei,
            c_est: monitor.c_est,
            bounded: monitor.bounded,
            g_strictly_increasing: monitor.g_strictly_increasing,
            g_negative: monitor.g_negative,
        },
        limit_fit_residual: ev.report.limit_fit_residual,
        step_limited: ev.step_limited,
        n_records: ev.records.len(),
        frames: frame_reports,
    };
    let report_json = cfg.out_dir.join("report.json");
    let mut w = std::io::BufWriter::new(std::fs::File::create(&report_json)?);
    serde_json::to_writer_pretty(&mut w, &report).map_err(Error::from)?;
    w.flush()?;

    Ok(RunArtifacts {
        out_dir: cfg.out_dir.clone(),
        records_csv,
        report_json,
        frame_files,
        evolution: ev,
    })
}
