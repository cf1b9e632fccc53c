//! The verification suite: canonical runs plus one function per
//! acceptance criterion, shared by the `verify` subcommand and the
//! `acceptance` integration test target. Expensive runs are computed
//! once per process and reused across criteria.

use crate::csf::{extinction_tbar, predicted_area, CsfParams};
use crate::curve::{make_family, CurveFamily, CurveFamilySpec, SphereCurve};
use crate::flow::{
    clifford_distance, cylinder_fit, evolve, g_gap, rescale_a, rescale_b, t_of_tbar, tbar_of_t,
    typei_monitor, Evolution, EvolutionConfig, InitialCurve,
};
use crate::geom::{Point3, BASE_RADIUS};
use crate::hopf::{
    build_torus, check_lagrangian, fiber_seed, horizontal_lift, shear_off_fibers, HorizontalLift,
};
use std::f64::consts::PI;
use std::fmt;
use std::sync::OnceLock;
use std::time::Instant;

/// Resolution used by the canonical runs.
const N: usize = 512;

/// One acceptance criterion's outcome.
#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    /// One line per individual check: what was measured against what.
    pub lines: Vec<String>,
    /// Wall time attributable to this criterion's underlying runs.
    pub runtime_s: f64,
}

impl CriterionResult {
    fn check(&mut self, ok: bool, line: String) {
        self.pass &= ok;
        self.lines
            .push(format!("[{}] {line}", if ok { "ok" } else { "FAIL" }));
    }
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "criterion {:2} {:<24} {} ({:.1}s)",
            self.id,
            self.name,
            if self.pass { "PASS" } else { "FAIL" },
            self.runtime_s
        )?;
        for l in &self.lines {
            writeln!(f, "    {l}")?;
        }
        Ok(())
    }
}

pub const CRITERIA: [(usize, &str); 10] = [
    (1, "area-law"),
    (2, "latitude-exact-solution"),
    (3, "extinction-dichotomy"),
    (4, "limit-radius"),
    (5, "clifford-limit"),
    (6, "cylinder-limit"),
    (7, "type-i-bound"),
    (8, "hopf-layer"),
    (9, "structural-identities"),
    (10, "negative-controls"),
];

struct TimedRun {
    ev: Evolution,
    wall_s: f64,
}

fn run_latitude(theta0: f64, cfl: f64, with_frames: bool) -> (crate::Result<Evolution>, f64) {
    let start = Instant::now();
    let curve = make_family(&CurveFamilySpec {
        family: CurveFamily::Latitude { theta0 },
        resolution: N,
    })
    .expect("latitude family is valid");
    let a0 = curve.enclosed_area();
    let r0 = 2.0;
    let t_pred = a0 * r0 * r0 / (2.0 * PI);
    let frame_times = if with_frames {
        let mut f = vec![0.0];
        for frac in [0.16, 0.08, 0.04, 0.02, 0.01] {
            f.push(t_pred * (1.0 - frac));
        }
        f
    } else {
        Vec::new()
    };
    let ev = evolve(&EvolutionConfig {
        r0,
        initial: InitialCurve::Curve(curve),
        csf: CsfParams {
            cfl,
            max_steps: 2_000_000,
            ..CsfParams::default()
        },
        frame_times,
        n_beta: 128,
        record_stride: None,
    });
    (ev, start.elapsed().as_secs_f64())
}

fn lat_runs() -> &'static Vec<(f64, TimedRun)> {
    static RUNS: OnceLock<Vec<(f64, TimedRun)>> = OnceLock::new();
    RUNS.get_or_init(|| {
        [PI / 6.0, PI / 4.0, PI / 3.0]
            .into_iter()
            .map(|theta0| {
                let (ev, wall_s) = run_latitude(theta0, 0.25, theta0 == PI / 3.0);
                (
                    theta0,
                    TimedRun {
                        ev: ev.expect("canonical latitude run must complete"),
                        wall_s,
                    },
                )
            })
            .collect()
    })
}

fn gc_run() -> &'static TimedRun {
    static RUN: OnceLock<TimedRun> = OnceLock::new();
    RUN.get_or_init(|| {
        let start = Instant::now();
        let r0 = 1.0;
        let frame_times = [0.5, 1.0, 1.5]
            .map(|tb| t_of_tbar(tb, r0))
            .to_vec();
        let ev = evolve(&EvolutionConfig {
            r0,
            initial: InitialCurve::Family(CurveFamilySpec {
                family: CurveFamily::GreatCircle {
                    axis: Point3::new(0.0, 0.0, 1.0),
                },
                resolution: N,
            }),
            csf: CsfParams::default(),
            frame_times,
            n_beta: 128,
            record_stride: None,
        })
        .expect("great-circle run must complete");
        TimedRun {
            ev,
            wall_s: start.elapsed().as_secs_f64(),
        }
    })
}

fn pgc_run() -> &'static TimedRun {
    static RUN: OnceLock<TimedRun> = OnceLock::new();
    RUN.get_or_init(|| {
        let start = Instant::now();
        let r0 = 1.0;
        let frame_times = [0.5, 1.0, 1.5]
            .map(|tb| t_of_tbar(tb, r0))
            .to_vec();
        let ev = evolve(&EvolutionConfig {
            r0,
            initial: InitialCurve::Family(CurveFamilySpec {
                family: CurveFamily::PerturbedGreatCircle {
                    mode: 3,
                    amplitude: 0.05,
                },
                resolution: N,
            }),
            csf: CsfParams::default(),
            frame_times,
            n_beta: 128,
            record_stride: None,
        })
        .expect("perturbed great-circle run must complete");
        TimedRun {
            ev,
            wall_s: start.elapsed().as_secs_f64(),
        }
    })
}

/// The ten curves exercising the Hopf layer and structural identities.
fn test_curves() -> Vec<(String, SphereCurve)> {
    let mut out = Vec::new();
    for theta0 in [0.05, 0.3, 0.6, PI / 4.0, 1.0, PI / 3.0, 1.2, 1.4] {
        out.push((
            format!("latitude({theta0:.3})"),
            make_family(&CurveFamilySpec {
                family: CurveFamily::Latitude { theta0 },
                resolution: N,
            })
            .unwrap(),
        ));
    }
    out.push((
        "great-circle".into(),
        make_family(&CurveFamilySpec {
            family: CurveFamily::GreatCircle {
                axis: Point3::new(0.0, 0.0, 1.0),
            },
            resolution: N,
        })
        .unwrap(),
    ));
    out.push((
        "perturbed-gc(3, 0.05)".into(),
        make_family(&CurveFamilySpec {
            family: CurveFamily::PerturbedGreatCircle {
                mode: 3,
                amplitude: 0.05,
            },
            resolution: N,
        })
        .unwrap(),
    ));
    out
}

fn lift_of(c: &SphereCurve) -> HorizontalLift {
    horizontal_lift(c, fiber_seed(c.point(0)).unwrap()).unwrap()
}

/// Latitude circle sampled with a smoothly modulated density, so the
/// built mesh carries a genuine discretization signal in the Lagrangian
/// residual (uniform meshes sit at rounding level).
fn modulated_latitude(theta0: f64, n: usize) -> SphereCurve {
    let (st, ct) = theta0.sin_cos();
    let pts: Vec<Point3> = (0..n)
        .map(|i| {
            let u = 2.0 * PI * i as f64 / n as f64;
            let phi = u + 0.5 * u.sin();
            Point3::new(
                BASE_RADIUS * st * phi.cos(),
                BASE_RADIUS * st * phi.sin(),
                BASE_RADIUS * ct,
            )
        })
        .collect();
    SphereCurve::new(pts).unwrap()
}

/// Two overlapping small circles joined into one polygon; crosses itself.
fn figure_eight(n_half: usize) -> Vec<Point3> {
    let r = 0.5f64;
    let rad = 0.52f64;
    let junction = Point3::new(0.0, 0.0, 1.0);
    let mut pts = Vec::new();
    for (sign, reverse) in [(1.0f64, false), (-1.0f64, true)] {
        let center = Point3::new(sign * r.sin(), 0.0, r.cos());
        let e1 = Point3::new(center.z, 0.0, -center.x);
        let e2 = center.cross(e1);
        let v = junction - center * junction.dot(center);
        let phase = v.dot(e2).atan2(v.dot(e1));
        for k in 0..n_half {
            let t = 2.0 * PI * k as f64 / n_half as f64;
            let psi = if reverse { phase - t } else { phase + t };
            let p = center * rad.cos() + (e1 * psi.cos() + e2 * psi.sin()) * rad.sin();
            pts.push(p * BASE_RADIUS);
        }
    }
    pts
}

fn new_result(id: usize) -> CriterionResult {
    CriterionResult {
        id,
        name: CRITERIA[id - 1].1,
        pass: true,
        lines: Vec::new(),
        runtime_s: 0.0,
    }
}

/// Criterion 1: sup over tbar in [0, 0.9 tau] of the gap between the
/// measured enclosed area and the closed-form law, for the three
/// canonical latitude runs. `cfl` other than the default forces fresh
/// runs (the cfl = 2.0 instability is criterion 10's negative control).
pub fn criterion_1_area_law(cfl: f64) -> CriterionResult {
    let mut res = new_result(1);
    let tol = 1e-3 * PI / 2.0;
    fn eval(theta0: f64, ev: &Evolution, wall_s: f64, tol: f64, res: &mut CriterionResult) {
        let a0 = ev.a0;
        let tau = extinction_tbar(a0).unwrap();
        let mut sup = 0.0f64;
        for rec in &ev.records {
            if rec.tbar <= 0.9 * tau {
                sup = sup.max((rec.area - predicted_area(a0, rec.tbar).unwrap()).abs());
            }
        }
        res.check(
            sup <= tol,
            format!("theta0={theta0:.4}: sup|A - law| = {sup:.3e} <= {tol:.3e}"),
        );
        res.check(
            wall_s <= 30.0,
            format!("theta0={theta0:.4}: runtime {wall_s:.1}s <= 30s"),
        );
        res.runtime_s += wall_s;
    }
    if (cfl - 0.25).abs() < 1e-15 {
        for (theta0, run) in lat_runs() {
            eval(*theta0, &run.ev, run.wall_s, tol, &mut res);
        }
    } else {
        for theta0 in [PI / 6.0, PI / 4.0, PI / 3.0] {
            let (ev, wall_s) = run_latitude(theta0, cfl, false);
            match ev {
                Ok(ev) => eval(theta0, &ev, wall_s, tol, &mut res),
                Err(err) => {
                    res.check(false, format!("run theta0={theta0:.4} failed: {err}"))
                }
            }
        }
    }
    res
}

/// Criterion 2: the shrinking latitude circle obeys
/// cos(theta(tbar)) = cos(theta_0) e^{4 tbar}, with theta measured from
/// the recorded length (independent of the area law).
pub fn criterion_2_latitude_oracle() -> CriterionResult {
    let mut res = new_result(2);
    for (theta0, run) in lat_runs() {
        let tau = extinction_tbar(run.ev.a0).unwrap();
        let cos_from_length = |length: f64| -> f64 {
            let s = (length / PI).min(1.0);
            (1.0 - s * s).max(0.0).sqrt()
        };
        let c0 = cos_from_length(run.ev.records[0].length);
        let mut worst = 0.0f64;
        for rec in &run.ev.records {
            if rec.tbar <= 0.9 * tau && rec.tbar > 0.0 {
                let expected = c0 * (4.0 * rec.tbar).exp();
                worst = worst.max((cos_from_length(rec.length) - expected).abs() / expected);
            }
        }
        res.check(
            worst <= 1e-3,
            format!("theta0={theta0:.4}: sup rel defect of cos(theta) = {worst:.3e} <= 1e-3"),
        );
    }
    res
}

/// Criterion 3: measured extinction time against T = a0 r0^2 / (2 pi)
/// for r0 in {1, 2}; the great circle survives to tbar = 1.5 with half
/// area throughout.
pub fn criterion_3_dichotomy() -> CriterionResult {
    let mut res = new_result(3);
    for (theta0, run) in lat_runs() {
        let ext = match &run.ev.extinction {
            Some(e) => e,
            None => {
                res.check(false, format!("theta0={theta0:.4}: no extinction recorded"));
                continue;
            }
        };
        for r0 in [1.0, 2.0] {
            let t_meas = t_of_tbar(ext.tbar, r0);
            let t_pred = run.ev.a0 * r0 * r0 / (2.0 * PI);
            let rel = (t_meas - t_pred).abs() / t_pred;
            res.check(
                rel <= 0.02,
                format!(
                    "theta0={theta0:.4}, r0={r0}: T measured {t_meas:.6} vs {t_pred:.6} (rel {rel:.3e} <= 2e-2)"
                ),
            );
        }
    }
    let gc = gc_run();
    res.check(
        gc.ev.extinction.is_none(),
        "great circle: no extinction by tbar = 1.5".into(),
    );
    let last_tbar = gc.ev.records.last().map(|r| r.tbar).unwrap_or(0.0);
    res.check(
        last_tbar >= 1.5 - 1e-9,
        format!("great circle: reached tbar = {last_tbar:.3} >= 1.5"),
    );
    let max_dev = gc
        .ev
        .records
        .iter()
        .map(|r| (r.area - PI / 2.0).abs())
        .fold(0.0, f64::max);
    res.check(
        max_dev <= 1e-3,
        format!("great circle: sup|A - pi/2| = {max_dev:.3e} <= 1e-3"),
    );
    res.runtime_s = gc.wall_s;
    res
}

/// Criterion 4: mean vertex norm of the final frame of the cap run
/// against the predicted limit-circle radius sqrt(2).
pub fn criterion_4_limit_radius() -> CriterionResult {
    let mut res = new_result(4);
    let run = &lat_runs()[2].1; // theta0 = pi/3, r0 = 2
    let mesh = match run.ev.frames.last() {
        Some(m) => m,
        None => {
            res.check(false, "no frames on the cap run".into());
            return res;
        }
    };
    let mean_norm = mesh.vertices().iter().map(|p| p.norm()).sum::<f64>()
        / mesh.vertices().len() as f64;
    let expected = 2f64.sqrt();
    let rel = (mean_norm - expected).abs() / expected;
    res.check(
        rel <= 0.02,
        format!("final-frame mean vertex norm {mean_norm:.6} vs sqrt(2) = {expected:.6} (rel {rel:.3e} <= 2e-2)"),
    );
    res
}

/// Criterion 5: the rescaled perturbed-great-circle frames approach the
/// Clifford torus: distances decreasing over tbar in {0.5, 1.0, 1.5} and
/// at most 1e-2 at the last frame.
///
/// The perturbation decays like e^{-32 tbar}, so past tbar ~ 1 the
/// distance sits at the double-precision floor and consecutive frames can
/// tie there; monotonicity is therefore checked non-strictly pairwise,
/// with a strict overall drop.
pub fn criterion_5_clifford_limit() -> CriterionResult {
    let mut res = new_result(5);
    let run = pgc_run();
    if run.ev.frames.len() != 3 {
        res.check(false, format!("expected 3 frames, got {}", run.ev.frames.len()));
        return res;
    }
    let dists: Vec<f64> = run
        .ev
        .frames
        .iter()
        .map(|m| clifford_distance(&rescale_a(m).unwrap()))
        .collect();
    res.check(
        dists[2] <= 1e-2,
        format!("distance at tbar=1.5: {:.3e} <= 1e-2", dists[2]),
    );
    res.check(
        dists[0] >= dists[1] && dists[1] >= dists[2] && dists[2] < dists[0],
        format!(
            "distances decreasing: {:.3e} >= {:.3e} >= {:.3e} with strict overall drop",
            dists[0], dists[1], dists[2]
        ),
    );
    res.check(
        run.wall_s <= 60.0,
        format!("runtime {:.1}s <= 60s", run.wall_s),
    );
    res.runtime_s = run.wall_s;
    res
}

/// Criterion 6: cylinder blow-up of the cap run: fit residuals of the
/// rescaled last five frames decrease and end at most 2e-2, against the
/// predicted radius R_T sqrt(a0/pi) = 1/sqrt(2).
pub fn criterion_6_cylinder_limit() -> CriterionResult {
    let mut res = new_result(6);
    let run = &lat_runs()[2].1; // theta0 = pi/3, r0 = 2
    let ext = match &run.ev.extinction {
        Some(e) => e,
        None => {
            res.check(false, "cap run did not reach extinction".into());
            return res;
        }
    };
    if run.ev.frames.len() < 6 {
        res.check(false, format!("expected 6 frames, got {}", run.ev.frames.len()));
        return res;
    }
    let a0 = run.ev.a0;
    let r0 = run.ev.r0;
    let t_pred = run.ev.report.t_singular;
    let r_t = (r0 * r0 - 4.0 * t_pred).sqrt();
    let q = fiber_seed(ext.centroid).unwrap();
    let radius_oracle = r_t * (a0 / PI).sqrt();
    res.check(
        (radius_oracle - 1.0 / 2f64.sqrt()).abs() <= 0.02,
        format!("cylinder radius oracle {radius_oracle:.6} matches 1/sqrt(2)"),
    );
    let residuals: Vec<f64> = run.ev.frames[1..]
        .iter()
        .map(|m| {
            let cloud = rescale_b(m, a0, r0, q).unwrap();
            cylinder_fit(&cloud, q, r_t, a0).unwrap()
        })
        .collect();
    let decreasing = residuals.windows(2).all(|w| w[0] > w[1]);
    res.check(
        decreasing,
        format!(
            "residuals decreasing over the last 5 frames: {:?}",
            residuals
                .iter()
                .map(|r| format!("{r:.3e}"))
                .collect::<Vec<_>>()
        ),
    );
    let last = *residuals.last().unwrap();
    res.check(last <= 2e-2, format!("final residual {last:.3e} <= 2e-2"));
    res
}

/// Criterion 7: the Type I quantity is bounded by 1 + C on every run,
/// sits at exactly 1 on the great-circle run, and the gap function G is
/// strictly increasing and negative on a 100-point grid.
pub fn criterion_7_typei() -> CriterionResult {
    let mut res = new_result(7);
    let gc = gc_run();
    let worst = gc
        .ev
        .records
        .iter()
        .map(|r| (r.typei - 1.0).abs())
        .fold(0.0, f64::max);
    res.check(
        worst <= 1e-9,
        format!("great circle: sup|typeI - 1| = {worst:.3e} <= 1e-9"),
    );

    let mut all: Vec<(&str, &Evolution)> = vec![("great-circle", &gc.ev), ("perturbed-gc", &pgc_run().ev)];
    let named: Vec<(String, &Evolution)> = lat_runs()
        .iter()
        .map(|(th, run)| (format!("latitude({th:.3})"), &run.ev))
        .collect();
    for (name, ev) in &named {
        all.push((name.as_str(), ev));
    }
    for (name, ev) in all {
        let rep = typei_monitor(&ev.records, ev.report.t_singular, ev.r0);
        res.check(
            rep.bounded,
            format!(
                "{name}: sup typeI {:.6} <= 1 + C_est = {:.6}",
                rep.sup_typei,
                1.0 + rep.c_est
            ),
        );
    }

    let tau = extinction_tbar(lat_runs()[2].1.ev.a0).unwrap();
    let mut inc = true;
    let mut neg = true;
    let mut prev = f64::NEG_INFINITY;
    for i in 0..100 {
        let tbar = tau * i as f64 / 100.0;
        let g = g_gap(tbar, tau);
        neg &= g < 0.0;
        inc &= g > prev;
        prev = g;
    }
    res.check(inc && neg, "G strictly increasing and negative on a 100-point grid".into());
    res
}

/// Criterion 8: the Hopf layer. Horizontality at rounding level,
/// holonomy = twice the enclosed area, small Lagrangian residuals that
/// shrink under refinement, and the Clifford mesh on its level set.
pub fn criterion_8_hopf_layer() -> CriterionResult {
    let mut res = new_result(8);
    let curves = test_curves();
    let mut worst_horiz = 0.0f64;
    let mut worst_hol = 0.0f64;
    for (_, c) in &curves {
        let lift = lift_of(c);
        for i in 0..lift.len() {
            let p = lift.point(i);
            let q = if i + 1 < lift.len() {
                lift.point(i + 1)
            } else {
                lift.closure_point()
            };
            let dp = q - p;
            let mid = (p + q) * 0.5;
            worst_horiz = worst_horiz.max(dp.dot(mid.j_mul()).abs() / dp.norm());
        }
        let expected = (2.0 * c.enclosed_area()).rem_euclid(2.0 * PI);
        let d = (lift.holonomy_phase() - expected).abs();
        worst_hol = worst_hol.max(d.min(2.0 * PI - d));
    }
    res.check(
        worst_horiz <= 1e-8,
        format!("horizontality residual {worst_horiz:.3e} <= 1e-8 per segment ({} curves)", curves.len()),
    );
    res.check(
        worst_hol <= 1e-4,
        format!("holonomy vs 2A defect {worst_hol:.3e} <= 1e-4 ({} curves)", curves.len()),
    );

    let uniform = make_family(&CurveFamilySpec {
        family: CurveFamily::Latitude { theta0: PI / 4.0 },
        resolution: 128,
    })
    .unwrap();
    let mesh = build_torus(&lift_of(&uniform), 128, 1.0).unwrap();
    let r_uniform = check_lagrangian(&mesh);
    res.check(
        r_uniform <= 1e-3,
        format!("Lagrangian residual {r_uniform:.3e} <= 1e-3 at 128x128"),
    );

    let coarse = build_torus(&lift_of(&modulated_latitude(PI / 4.0, 128)), 128, 1.0).unwrap();
    let fine = build_torus(&lift_of(&modulated_latitude(PI / 4.0, 256)), 256, 1.0).unwrap();
    let (rc, rf) = (check_lagrangian(&coarse), check_lagrangian(&fine));
    res.check(
        rc <= 1e-3 && rf <= 0.6 * rc,
        format!("refinement: residual {rc:.3e} -> {rf:.3e} (at least halving)"),
    );

    let equator = make_family(&CurveFamilySpec {
        family: CurveFamily::GreatCircle {
            axis: Point3::new(0.0, 0.0, 1.0),
        },
        resolution: 128,
    })
    .unwrap();
    let clifford = build_torus(&lift_of(&equator), 128, 1.0).unwrap();
    let worst_level = clifford
        .vertices()
        .iter()
        .map(|p| (p.a * p.a + p.b * p.b - 0.5).abs())
        .fold(0.0, f64::max);
    res.check(
        worst_level <= 1e-7,
        format!("Clifford mesh: sup||z|^2 - 1/2| = {worst_level:.3e} <= 1e-7"),
    );
    res
}

/// Criterion 9: structural identities at full precision: the radius law
/// in every record, the time-change round trip, and area complementarity.
pub fn criterion_9_structural() -> CriterionResult {
    let mut res = new_result(9);
    let mut worst_radius = 0.0f64;
    let mut checked = 0usize;
    let mut all: Vec<&Evolution> = vec![&gc_run().ev, &pgc_run().ev];
    for (_, run) in lat_runs() {
        all.push(&run.ev);
    }
    for ev in all {
        for rec in &ev.records {
            worst_radius = worst_radius.max((rec.r * rec.r + 4.0 * rec.t - ev.r0 * ev.r0).abs());
            checked += 1;
        }
    }
    res.check(
        worst_radius <= 1e-12,
        format!("radius law: sup|R^2 + 4t - r0^2| = {worst_radius:.3e} <= 1e-12 over {checked} records"),
    );

    // Deterministic pseudo-random (t, r0) grid, no RNG dependency here.
    let mut worst_rt = 0.0f64;
    let mut x = 0.5f64;
    for _ in 0..1000 {
        x = (x * 997.0 + PI).fract();
        let r0 = 0.5 + 2.5 * x;
        let y = (x * 613.0).fract();
        let t = 0.999 * y * r0 * r0 / 4.0;
        let rt = t_of_tbar(tbar_of_t(t, r0).unwrap(), r0);
        worst_rt = worst_rt.max((rt - t).abs());
    }
    res.check(
        worst_rt <= 1e-12,
        format!("time-change round trip defect {worst_rt:.3e} <= 1e-12 (1000 samples)"),
    );

    let mut worst_comp = 0.0f64;
    for (_, c) in test_curves() {
        worst_comp = worst_comp
            .max((c.enclosed_area() + c.reversed().enclosed_area() - PI).abs());
    }
    res.check(
        worst_comp <= 1e-8,
        format!("area complement defect {worst_comp:.3e} <= 1e-8"),
    );
    res
}

/// Criterion 10: negative controls must fail loudly: an off-fiber shear
/// breaks the Lagrangian check, an oversized cfl breaks the area law,
/// and a self-crossing input is rejected.
pub fn criterion_10_negative_controls() -> CriterionResult {
    let mut res = new_result(10);

    let uniform = make_family(&CurveFamilySpec {
        family: CurveFamily::Latitude { theta0: PI / 4.0 },
        resolution: 128,
    })
    .unwrap();
    let mesh = build_torus(&lift_of(&uniform), 128, 1.0).unwrap();
    let sheared = shear_off_fibers(&mesh, 0.3);
    let resid = check_lagrangian(&sheared);
    res.check(
        resid > 1e-2,
        format!("sheared mesh fails Lagrangian check: residual {resid:.3e} > 1e-2"),
    );

    let unstable = criterion_1_area_law(2.0);
    res.check(
        !unstable.pass,
        format!("cfl = 2.0 breaks the area-law criterion (pass = {})", unstable.pass),
    );

    let eight = figure_eight(64);
    let rejected = matches!(SphereCurve::new(eight), Err(crate::Error::NotSimple));
    res.check(rejected, "figure-eight input rejected as non-simple".into());
    res
}

/// Run one criterion by id.
pub fn run_criterion(id: usize, cfl: f64) -> CriterionResult {
    match id {
        1 => criterion_1_area_law(cfl),
        2 => criterion_2_latitude_oracle(),
        3 => criterion_3_dichotomy(),
        4 => criterion_4_limit_radius(),
        5 => criterion_5_clifford_limit(),
        6 => criterion_6_cylinder_limit(),
        7 => criterion_7_typei(),
        8 => criterion_8_hopf_layer(),
        9 => criterion_9_structural(),
        10 => criterion_10_negative_controls(),
        _ => unreachable!("criterion ids run 1..=10"),
    }
}

/// Run all criteria whose name contains `filter` (all when None).
pub fn run_all(filter: Option<&str>, cfl: f64) -> Vec<CriterionResult> {
    CRITERIA
        .iter()
        .filter(|(_, name)| filter.map_or(true, |f| name.contains(f)))
        .map(|(id, _)| run_criterion(*id, cfl))
        .collect()
}
