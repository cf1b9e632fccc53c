use clap::{Parser, Subcommand};
use hopfmcf::config::RunConfig;
use hopfmcf::csf::extinction_tbar;
use hopfmcf::curve::{make_family, CurveFamily, CurveFamilySpec};
use hopfmcf::export::{run_to_disk, write_frame_obj, write_frame_v4};
use hopfmcf::flow::{predict, SingularityKind};
use hopfmcf::geom::Point3;
use hopfmcf::hopf::{build_torus, check_lagrangian, fiber_seed, horizontal_lift};
use hopfmcf::{Error, Result};
use std::f64::consts::PI;
use std::path::PathBuf;

/// Mean curvature flow of Hopf tori in C^2, driven by curve shortening
/// flow on the 2-sphere composed with exact radius and time-change laws.
#[derive(Parser)]
#[command(name = "hopfmcf", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Predict extinction behavior from the enclosed area and radius.
    Predict {
        /// Enclosed area of the base curve on S^2(1/2), in (0, pi/2].
        #[arg(long, conflicts_with = "theta0")]
        a0: Option<f64>,
        /// Polar angle of a latitude-circle initial curve; implies
        /// a0 = (pi/2)(1 - cos theta0).
        #[arg(long)]
        theta0: Option<f64>,
        /// Initial hypersphere radius R0.
        #[arg(long, default_value_t = 1.0)]
        r0: f64,
    },
    /// Execute a simulation run described by a JSON config file.
    Run {
        /// Path to the run configuration (see schema/runconfig.schema.json).
        config: PathBuf,
    },
    /// Lift a curve horizontally to S^3 and export its Hopf torus at R = 1.
    Lift {
        /// Plain-text curve file, one "x y z" per line.
        #[arg(long, conflicts_with = "family")]
        file: Option<PathBuf>,
        /// Curve family: latitude | great-circle | perturbed-great-circle.
        #[arg(long)]
        family: Option<String>,
        /// Polar angle for the latitude family.
        #[arg(long)]
        theta0: Option<f64>,
        /// Perturbation mode for the perturbed family.
        #[arg(long, default_value_t = 3)]
        mode: u32,
        /// Perturbation amplitude for the perturbed family.
        #[arg(long, default_value_t = 0.05)]
        amplitude: f64,
        /// Curve resolution.
        #[arg(long, default_value_t = 512)]
        n: usize,
        /// Fiber resolution of the exported mesh.
        #[arg(long, default_value_t = 128)]
        n_beta: usize,
        /// Output path of the 4D mesh.
        #[arg(long, default_value = "torus.v4")]
        out: PathBuf,
        /// Also write a stereographic OBJ projection here.
        #[arg(long)]
        obj: Option<PathBuf>,
    },
    /// Run the acceptance criteria and print a pass/fail table.
    Verify {
        /// Only run criteria whose name contains this substring.
        #[arg(long)]
        filter: Option<String>,
        /// Override the integrator cfl (the default is the validated one;
        /// anything unstable makes the area-law criterion fail, which is
        /// itself exercised by the negative controls).
        #[arg(long, default_value_t = 0.25)]
        cfl: f64,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::Predict { a0, theta0, r0 } => cmd_predict(a0, theta0, r0),
        Cmd::Run { config } => cmd_run(&config),
        Cmd::Lift {
            file,
            family,
            theta0,
            mode,
            amplitude,
            n,
            n_beta,
            out,
            obj,
        } => cmd_lift(file, family, theta0, mode, amplitude, n, n_beta, &out, obj),
        Cmd::Verify { filter, cfl } => cmd_verify(filter.as_deref(), cfl),
    }
}

fn cmd_predict(a0: Option<f64>, theta0: Option<f64>, r0: f64) -> Result<i32> {
    let a0 = match (a0, theta0) {
        (Some(a), None) => a,
        (None, Some(th)) => {
            if !(th > 0.0 && th <= PI / 2.0) {
                return Err(Error::InvalidParameter(format!(
                    "theta0 must lie in (0, pi/2], got {th}"
                )));
            }
            (PI / 2.0) * (1.0 - th.cos())
        }
        _ => {
            return Err(Error::InvalidParameter(
                "give exactly one of --a0 or --theta0".into(),
            ))
        }
    };
    let report = predict(a0, r0)?;
    let tau = extinction_tbar(a0)?;
    println!("a0           = {a0:.12}");
    println!("r0           = {r0:.12}");
    match report.kind {
        SingularityKind::PointClifford => {
            println!("kind         = point_clifford");
            println!("T            = {:.12}", report.t_singular);
            println!("tau          = inf");
            println!("limit radius = 0");
            println!("limit        = a point at the center; rescaling by 1/R(t) converges to the Clifford torus in the unit 3-sphere");
        }
        SingularityKind::CircleCylinder => {
            println!("kind         = circle_cylinder");
            println!("T            = {:.12}", report.t_singular);
            println!("tau          = {tau:.12}");
            println!("limit radius = {:.12}", report.limit_radius);
            println!("limit        = a circle of that radius; the area-preserving blow-up converges to a round cylinder");
        }
    }
    let json = serde_json::json!({
        "a0": a0,
        "r0": r0,
        "kind": report.kind,
        "t_singular": report.t_singular,
        "tau": if tau.is_finite() { Some(tau) } else { None },
        "limit_radius": report.limit_radius,
    });
    println!("{json}");
    Ok(0)
}

fn cmd_run(config: &PathBuf) -> Result<i32> {
    let cfg = RunConfig::from_file(config)?;
    let art = run_to_disk(&cfg)?;
    let ev = &art.evolution;
    println!("run complete: {}", art.out_dir.display());
    println!("  a0 measured    = {:.12}", ev.a0);
    println!(
        "  kind           = {}",
        match ev.report.kind {
            SingularityKind::PointClifford => "point_clifford",
            SingularityKind::CircleCylinder => "circle_cylinder",
        }
    );
    println!("  T predicted    = {:.12}", ev.report.t_singular);
    if let Some(ext) = &ev.extinction {
        println!("  T measured     = {:.12} (tbar {:.6})", ext.t, ext.tbar);
        let rel = (ext.t - ev.report.t_singular).abs() / ev.report.t_singular;
        println!("  relative error = {rel:.3e}");
    } else {
        println!("  no extinction within the integrated window");
    }
    if ev.step_limited {
        println!("  note: step cap reached before the target");
    }
    println!("  records        = {}", ev.records.len());
    println!("  frames         = {}", ev.frames.len());
    println!("  report         = {}", art.report_json.display());
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_lift(
    file: Option<PathBuf>,
    family: Option<String>,
    theta0: Option<f64>,
    mode: u32,
    amplitude: f64,
    n: usize,
    n_beta: usize,
    out: &PathBuf,
    obj: Option<PathBuf>,
) -> Result<i32> {
    let spec = match (file, family.as_deref()) {
        (Some(path), None) => CurveFamilySpec {
            family: CurveFamily::PointList { path },
            resolution: n.max(hopfmcf::curve::MIN_POINTS),
        },
        (None, Some("latitude")) => CurveFamilySpec {
            family: CurveFamily::Latitude {
                theta0: theta0.ok_or_else(|| {
                    Error::InvalidParameter("latitude family needs --theta0".into())
                })?,
            },
            resolution: n,
        },
        (None, Some("great-circle")) => CurveFamilySpec {
            family: CurveFamily::GreatCircle {
                axis: Point3::new(0.0, 0.0, 1.0),
            },
            resolution: n,
        },
        (None, Some("perturbed-great-circle")) => CurveFamilySpec {
            family: CurveFamily::PerturbedGreatCircle { mode, amplitude },
            resolution: n,
        },
        (None, Some(other)) => {
            return Err(Error::InvalidParameter(format!(
                "unknown family '{other}' (latitude | great-circle | perturbed-great-circle)"
            )))
        }
        _ => {
            return Err(Error::InvalidParameter(
                "give exactly one of --file or --family".into(),
            ))
        }
    };
    let curve = make_family(&spec)?;
    let seed = fiber_seed(curve.point(0))?;
    let lift = horizontal_lift(&curve, seed)?;
    let mesh = build_torus(&lift, n_beta, 1.0)?;
    let residual = check_lagrangian(&mesh);
    println!("holonomy phase      = {:.12}", lift.holonomy_phase());
    println!("enclosed area       = {:.12}", curve.enclosed_area());
    println!(
        "2A mod 2pi          = {:.12}",
        (2.0 * curve.enclosed_area()).rem_euclid(2.0 * PI)
    );
    println!("lagrangian residual = {residual:.3e}");
    write_frame_v4(out, &mesh)?;
    println!("mesh                = {}", out.display());
    if let Some(obj_path) = obj {
        write_frame_obj(&obj_path, &mesh, -seed)?;
        println!("obj                 = {}", obj_path.display());
    }
    Ok(0)
}

fn cmd_verify(filter: Option<&str>, cfl: f64) -> Result<i32> {
    let results = hopfmcf::verify::run_all(filter, cfl);
    if results.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "no criterion matches filter {filter:?}"
        )));
    }
    let mut all_pass = true;
    for r in &results {
        print!("{r}");
        all_pass &= r.pass;
    }
    println!(
        "{}/{} criteria passed",
        results.iter().filter(|r| r.pass).count(),
        results.len()
    );
    Ok(if all_pass { 0 } else { 1 })
}
