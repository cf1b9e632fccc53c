//! Composition of the spherical curve flow with the radius law and time
//! reparametrization, the extinction dichotomy, the two singularity
//! rescalings, and the Type I monitor.
//!
//! Every torus contained in a hypersphere evolves as
//! F(t) = sqrt(r0^2 - 4t) * (unit-sphere flow at tbar(t)), with
//! tbar = (1/4) ln(r0^2 / (r0^2 - 4t)). Measured initial area decides the
//! outcome: half the sphere area means shrinking to a point with Clifford
//! rescaled limit, anything less means a finite-time circle limit with a
//! cylinder blow-up.

use crate::csf::{self, extinction_tbar, predicted_area, CsfParams, CsfState, Observation};
use crate::curve::{make_family, CurveFamilySpec, SphereCurve};
use crate::geom::{Point3, Point4};
use crate::hopf::{build_torus, fiber_seed, horizontal_lift, HopfTorusMesh};
use crate::{Error, Result};
use std::f64::consts::PI;

/// Measured initial areas within this distance of pi/2 classify as the
/// equal-area (point/Clifford) case. Discrete great circles measure
/// exactly pi/2; genuinely shrinking caps sit far outside this band.
pub const DICHOTOMY_AREA_TOL: f64 = 1e-4;

/// tbar(t) = -(1/4) ln((r0^2 - 4t)/r0^2), defined for 0 <= t < r0^2/4.
pub fn tbar_of_t(t: f64, r0: f64) -> Result<f64> {
    if !(r0 > 0.0) {
        return Err(Error::InvalidParameter("r0 must be positive".into()));
    }
    if !(t >= 0.0 && t < r0 * r0 / 4.0) {
        return Err(Error::InvalidParameter(format!(
            "t = {t} outside [0, r0^2/4) for r0 = {r0}"
        )));
    }
    Ok(-0.25 * (-4.0 * t / (r0 * r0)).ln_1p())
}

/// t(tbar) = (r0^2/4)(1 - e^{-4 tbar}); inverse of [`tbar_of_t`].
pub fn t_of_tbar(tbar: f64, r0: f64) -> f64 {
    -(r0 * r0 / 4.0) * (-4.0 * tbar).exp_m1()
}

/// Hypersphere radius R(t(tbar)) = r0 e^{-2 tbar}.
pub fn radius_at_tbar(tbar: f64, r0: f64) -> f64 {
    r0 * (-2.0 * tbar).exp()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SingularityKind {
    /// Equal-area case: extinction at r0^2/4 to a point; rescaled limit
    /// is the Clifford torus.
    PointClifford,
    /// Unequal-area case: extinction at a0 r0^2 / (2 pi) to a circle;
    /// blow-up limit is a round cylinder.
    CircleCylinder,
}

/// Prediction and, after a run, measured diagnostics of the singularity.
#[derive(Clone, Debug, serde::Serialize)]
pub struct SingularityReport {
    pub kind: SingularityKind,
    /// Singular time T in the t clock (predicted from the measured a0).
    pub t_singular: f64,
    /// Radius of the limit circle (0 in the equal-area case).
    pub limit_radius: f64,
    /// sup over records of (T - t) sup|sigma|^2; None before a run.
    pub typei_sup: Option<f64>,
    /// Final-frame residual against the predicted limit shape: cylinder
    /// fit residual, or distance to the Clifford torus in the equal-area
    /// case. None when no frames were produced.
    pub limit_fit_residual: Option<f64>,
}

/// Closed-form dichotomy from the enclosed area a0 of the base curve and
/// the initial hypersphere radius r0.
pub fn predict(a0: f64, r0: f64) -> Result<SingularityReport> {
    if !(r0 > 0.0) {
        return Err(Error::InvalidParameter("r0 must be positive".into()));
    }
    if !(a0 > 0.0 && a0 <= PI / 2.0 + 1e-12) {
        return Err(Error::InvalidParameter(format!(
            "a0 must lie in (0, pi/2], got {a0}"
        )));
    }
    if (a0 - PI / 2.0).abs() <= DICHOTOMY_AREA_TOL {
        Ok(SingularityReport {
            kind: SingularityKind::PointClifford,
            t_singular: r0 * r0 / 4.0,
            limit_radius: 0.0,
            typei_sup: None,
            limit_fit_residual: None,
        })
    } else {
        let t_singular = a0 * r0 * r0 / (2.0 * PI);
        Ok(SingularityReport {
            kind: SingularityKind::CircleCylinder,
            t_singular,
            limit_radius: r0 * (1.0 - 2.0 * a0 / PI).sqrt(),
            typei_sup: None,
            limit_fit_residual: None,
        })
    }
}

/// One time-series row of a composed run.
#[derive(Clone, Copy, Debug)]
pub struct FlowRecord {
    pub t: f64,
    pub tbar: f64,
    pub r: f64,
    pub length: f64,
    pub area: f64,
    pub area_predicted: f64,
    pub max_kappa: f64,
    pub sup_sigma_sq: f64,
    pub typei: f64,
}

fn make_record(obs: &Observation, a0: f64, r0: f64, tau: f64) -> FlowRecord {
    let tbar = obs.tbar;
    let r2 = r0 * r0 * (-4.0 * tbar).exp();
    let kap2 = obs.max_kappa * obs.max_kappa;
    let sup_sigma_sq = (4.0 + kap2) / r2;
    // (T - t) sup|sigma|^2 in the cancellation-free form
    // (1 - e^{4(tbar - tau)}) (4 + kappa^2) / 4, which degenerates to
    // (4 + kappa^2)/4 as tau -> inf.
    let typei = if tau.is_finite() {
        (-(4.0 * (tbar - tau)).exp_m1()).max(0.0) * (4.0 + kap2) / 4.0
    } else {
        (4.0 + kap2) / 4.0
    };
    FlowRecord {
        t: t_of_tbar(tbar, r0),
        tbar,
        r: radius_at_tbar(tbar, r0),
        length: obs.length,
        area: obs.area,
        area_predicted: predicted_area(a0, tbar).unwrap_or(f64::NAN),
        max_kappa: obs.max_kappa,
        sup_sigma_sq,
        typei,
    }
}

/// Initial data for [`evolve`].
#[derive(Clone, Debug)]
pub enum InitialCurve {
    Family(CurveFamilySpec),
    Curve(SphereCurve),
}

/// Full configuration of a composed run.
#[derive(Clone, Debug)]
pub struct EvolutionConfig {
    pub r0: f64,
    pub initial: InitialCurve,
    pub csf: CsfParams,
    /// Snapshot times in the t clock; must precede the predicted T.
    pub frame_times: Vec<f64>,
    /// Fiber resolution of snapshot meshes.
    pub n_beta: usize,
    /// Observation grid spacing in tbar; None picks ~1200 records.
    pub record_stride: Option<f64>,
}

/// Extinction data of a run that reached the length threshold.
#[derive(Clone, Copy, Debug)]
pub struct Extinction {
    pub tbar: f64,
    pub t: f64,
    /// Normalized centroid of the final polygon: the extinction point.
    pub centroid: Point3,
}

/// Everything a composed run produces.
#[derive(Debug)]
pub struct Evolution {
    pub a0: f64,
    pub r0: f64,
    pub initial_length: f64,
    pub records: Vec<FlowRecord>,
    pub frames: Vec<HopfTorusMesh>,
    pub report: SingularityReport,
    pub extinction: Option<Extinction>,
    /// True when the step cap ended the run early.
    pub step_limited: bool,
}

/// Run the composed flow: integrate the base curve in tbar, map records
/// back to the t clock, snapshot Hopf-torus meshes at the requested frame
/// times with radius R(t), and detect extinction.
pub fn evolve(config: &EvolutionConfig) -> Result<Evolution> {
    config.csf.validate()?;
    if !(config.r0 > 0.0) {
        return Err(Error::InvalidParameter("r0 must be positive".into()));
    }
    let r0 = config.r0;

    let curve = match &config.initial {
        InitialCurve::Family(spec) => make_family(spec)?,
        InitialCurve::Curve(c) => c.clone().canonicalized(),
    };
    let a0 = curve.enclosed_area();
    let initial_length = curve.length();
    let mut report = predict(a0, r0)?;
    let tau = extinction_tbar(a0)?;

    let mut frame_times = config.frame_times.clone();
    frame_times.sort_by(f64::total_cmp);
    for &t in &frame_times {
        if !(t >= 0.0 && t < report.t_singular) {
            return Err(Error::InvalidParameter(format!(
                "frame time {t} outside [0, T = {})",
                report.t_singular
            )));
        }
    }
    let frame_tbars: Vec<f64> = frame_times
        .iter()
        .map(|&t| tbar_of_t(t, r0))
        .collect::<Result<_>>()?;

    let horizon = if tau.is_finite() {
        tau
    } else {
        frame_tbars.last().copied().unwrap_or(0.0)
    };
    let stride = config
        .record_stride
        .unwrap_or_else(|| (horizon / 1200.0).max(1e-6));

    let mut records = Vec::new();
    let mut frames = Vec::new();
    let mut state = CsfState::new(curve);
    let mut extinct = false;
    let mut step_limited = false;

    // Initial record, then run segment-wise so every frame time is hit
    // exactly.
    records.push(make_record(
        &Observation {
            tbar: 0.0,
            length: state.curve.length(),
            area: a0,
            max_kappa: state.curve.max_curvature()?,
        },
        a0,
        r0,
        tau,
    ));

    let snapshot = |state: &CsfState, t: f64, r: f64| -> Result<HopfTorusMesh> {
        let seed = fiber_seed(state.curve.point(0))?;
        let lift = horizontal_lift(&state.curve, seed)?;
        let mut mesh = build_torus(&lift, config.n_beta, r)?;
        mesh.t_stamp = t;
        Ok(mesh)
    };

    for (k, &ft) in frame_tbars.iter().enumerate() {
        if extinct || step_limited {
            break;
        }
        if ft <= state.tbar + 1e-15 && !(k == 0 && state.tbar == 0.0) {
            continue;
        }
        let out = csf::run_until(state, ft, &config.csf, Some(stride), |_, obs| {
            if obs.tbar > 0.0 {
                records.push(make_record(obs, a0, r0, tau));
            }
        })?;
        state = out.state;
        extinct = out.extinct;
        step_limited = out.step_limited;
        if !extinct && !step_limited {
            frames.push(snapshot(&state, frame_times[k], radius_at_tbar(ft, r0))?);
        }
    }

    // Extinction runs continue past the last frame to the length floor.
    if tau.is_finite() && !extinct && !step_limited {
        let out = csf::run_until(state, f64::INFINITY, &config.csf, Some(stride), |_, obs| {
            if obs.tbar > 0.0 {
                records.push(make_record(obs, a0, r0, tau));
            }
        })?;
        state = out.state;
        extinct = out.extinct;
        step_limited = out.step_limited;
    }

    let extinction = if extinct {
        Some(Extinction {
            tbar: state.tbar,
            t: t_of_tbar(state.tbar, r0),
            centroid: state.curve.centroid_on_sphere()?,
        })
    } else {
        None
    };

    let monitor = typei_monitor(&records, report.t_singular, r0);
    report.typei_sup = Some(monitor.sup_typei);
    report.limit_fit_residual = match (report.kind, frames.last()) {
        (SingularityKind::PointClifford, Some(mesh)) => {
            Some(clifford_distance(&rescale_a(mesh)?))
        }
        (SingularityKind::CircleCylinder, Some(mesh)) => {
            let x = match &extinction {
                Some(e) => e.centroid,
                // best effort: the predicted extinction point is unknown
                // without a completed run
                None => state.curve.centroid_on_sphere()?,
            };
            let q = fiber_seed(x)?;
            let cloud = rescale_b(mesh, a0, r0, q)?;
            let r_t = (r0 * r0 - 4.0 * report.t_singular).max(0.0).sqrt();
            Some(cylinder_fit(&cloud, q, r_t, a0)?)
        }
        _ => None,
    };

    Ok(Evolution {
        a0,
        r0,
        initial_length,
        records,
        frames,
        report,
        extinction,
        step_limited,
    })
}

/// Type-(a) rescaling: divide all vertices by R(t); the result lies on
/// the unit hypersphere.
pub fn rescale_a(mesh: &HopfTorusMesh) -> Result<HopfTorusMesh> {
    if !(mesh.r > 0.0) {
        return Err(Error::InvalidParameter("mesh radius must be positive".into()));
    }
    let inv = 1.0 / mesh.r;
    let mut out = mesh.map_vertices(|_, _, p| p * inv);
    out.r = 1.0;
    Ok(out)
}

/// Type-(b) rescaling about the limit-fiber point q: keeps the enclosed
/// base area constant, blowing the shrinking torus up into a cylinder.
/// Returns the rescaled vertices as a plain point cloud in R^4.
pub fn rescale_b(mesh: &HopfTorusMesh, a0: f64, r0: f64, q: Point4) -> Result<Vec<Point4>> {
    if (q.norm() - 1.0).abs() > 1e-6 {
        return Err(Error::OffSphere {
            norm: q.norm(),
            expected: 1.0,
        });
    }
    let tbar = tbar_of_t(mesh.t_stamp, r0)?;
    let a_now = predicted_area(a0, tbar)?;
    if !(a_now > 0.0) {
        return Err(Error::InvalidParameter(
            "rescaling undefined at or beyond the singular time".into(),
        ));
    }
    let lambda = (a0 / a_now).sqrt();
    let center = q * mesh.r;
    Ok(mesh
        .vertices()
        .iter()
        .map(|&p| center + (p - center) * lambda)
        .collect())
}

/// Relative cylinder-fit residual of a rescaled cloud: distance to the
/// axis line R_T q + s Jq, measured in the horizontal plane at q, against
/// the predicted radius R_T sqrt(a0/pi).
pub fn cylinder_fit(cloud: &[Point4], q: Point4, r_t: f64, a0: f64) -> Result<f64> {
    if cloud.is_empty() {
        return Err(Error::InvalidParameter("empty point cloud".into()));
    }
    if (q.norm() - 1.0).abs() > 1e-6 {
        return Err(Error::OffSphere {
            norm: q.norm(),
            expected: 1.0,
        });
    }
    let radius = r_t * (a0 / PI).sqrt();
    if !(radius > 0.0) {
        return Err(Error::InvalidParameter("cylinder radius must be positive".into()));
    }
    let jq = q.j_mul();
    let center = q * r_t;
    let mut worst = 0.0f64;
    for &p in cloud {
        let w = p - center;
        let w_h = w - q * w.dot(q) - jq * w.dot(jq);
        worst = worst.max((w_h.norm() - radius).abs() / radius);
    }
    Ok(worst)
}

/// Exact geodesic distance on the unit 3-sphere from each vertex to the
/// Clifford torus |z| = |w| = 1/sqrt(2), maximized over the mesh. The
/// torus is the level set alpha = pi/4 of alpha = atan2(|w|, |z|).
pub fn clifford_distance(mesh: &HopfTorusMesh) -> f64 {
    let mut worst = 0.0f64;
    for p in mesh.vertices() {
        let u = p.scaled_to(1.0).unwrap_or(*p);
        let zn = (u.a * u.a + u.b * u.b).sqrt();
        let wn = (u.c * u.c + u.d * u.d).sqrt();
        worst = worst.max((wn.atan2(zn) - PI / 4.0).abs());
    }
    worst
}

/// The gap function G(tbar) = (1 - e^{4(tbar - tau)})/4 - (tau - tbar).
/// Strictly increasing and negative on [0, tau); its sign drives the
/// Type I bound in the unequal-area case.
pub fn g_gap(tbar: f64, tau: f64) -> f64 {
    (-(4.0 * (tbar - tau)).exp_m1()) / 4.0 - (tau - tbar)
}

/// Outcome of the Type I monitor.
#[derive(Clone, Copy, Debug)]
pub struct TypeIReport {
    pub sup_typei: f64,
    /// sup of (tau - tbar) max kappa^2 (finite tau), or sup kappa^2 / 4.
    pub c_est: f64,
    /// sup typei <= 1 + c_est.
    pub bounded: bool,
    /// G strictly increasing over record times; None when tau is infinite.
    pub g_strictly_increasing: Option<bool>,
    /// G negative at all record times; None when tau is infinite.
    pub g_negative: Option<bool>,
}

/// Scan records for the Type I quantity (T - t) sup|sigma|^2, estimate
/// the bounding constant, and evaluate the gap function at record times.
pub fn typei_monitor(records: &[FlowRecord], t_singular: f64, r0: f64) -> TypeIReport {
    let tau = if t_singular >= r0 * r0 / 4.0 * (1.0 - 1e-12) {
        f64::INFINITY
    } else {
        tbar_of_t(t_singular, r0).unwrap_or(f64::INFINITY)
    };
    let mut sup_typei = 0.0f64;
    let mut c_est = 0.0f64;
    for rec in records {
        sup_typei = sup_typei.max(rec.typei);
        let k2 = rec.max_kappa * rec.max_kappa;
        if tau.is_finite() {
            c_est = c_est.max((tau - rec.tbar).max(0.0) * k2);
        } else {
            c_est = c_est.max(k2 / 4.0);
        }
    }
    let (g_inc, g_neg) = if tau.is_finite() {
        let mut inc = true;
        let mut neg = true;
        let mut prev = f64::NEG_INFINITY;
        for rec in records {
            if rec.tbar >= tau {
                continue;
            }
            let g = g_gap(rec.tbar, tau);
            if g >= 0.0 {
                neg = false;
            }
            if g <= prev {
                inc = false;
            }
            prev = g;
        }
        (Some(inc), Some(neg))
    } else {
        (None, None)
    };
    TypeIReport {
        sup_typei,
        c_est,
        bounded: sup_typei <= 1.0 + c_est + 1e-12,
        g_strictly_increasing: g_inc,
        g_negative: g_neg,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::CurveFamily;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn time_change_reference_values() {
        assert_eq!(tbar_of_t(0.0, 1.0).unwrap(), 0.0);
        let tb = tbar_of_t(0.75, 2.0).unwrap();
        assert!((tb - 0.25 * 4f64.ln()).abs() <= 1e-15);
        assert!(tbar_of_t(0.9999 * 0.25, 1.0).unwrap() > 2.0);
        assert!(tbar_of_t(0.25, 1.0).is_err());
        assert!(tbar_of_t(-0.1, 1.0).is_err());

        assert_eq!(t_of_tbar(0.0, 2.0), 0.0);
        assert!((t_of_tbar(0.25 * 2f64.ln(), 2.0) - 0.5).abs() <= 1e-15);
        assert!((t_of_tbar(100.0, 2.0) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn time_change_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let r0 = rng.gen_range(0.5..3.0);
            let t = rng.gen_range(0.0..0.999 * r0 * r0 / 4.0);
            let rt = t_of_tbar(tbar_of_t(t, r0).unwrap(), r0);
            assert!((rt - t).abs() <= 1e-12);
            // radius law
            let tb = tbar_of_t(t, r0).unwrap();
            let r = radius_at_tbar(tb, r0);
            assert!((r * r + 4.0 * t - r0 * r0).abs() <= 1e-12);
        }
    }

    #[test]
    fn predict_reference_cases() {
        let rep = predict(PI / 2.0, 1.0).unwrap();
        assert_eq!(rep.kind, SingularityKind::PointClifford);
        assert!((rep.t_singular - 0.25).abs() <= 1e-15);
        assert_eq!(rep.limit_radius, 0.0);

        let rep = predict(PI / 4.0, 2.0).unwrap();
        assert_eq!(rep.kind, SingularityKind::CircleCylinder);
        assert!((rep.t_singular - 0.5).abs() <= 1e-15);
        assert!((rep.limit_radius - 2f64.sqrt()).abs() <= 1e-12);

        let rep = predict(1e-9, 3.0).unwrap();
        assert!(rep.t_singular <= 1e-8);
        assert!((rep.limit_radius - 3.0).abs() <= 1e-6);

        assert!(predict(0.0, 1.0).is_err());
        assert!(predict(2.0, 1.0).is_err());
        assert!(predict(1.0, -1.0).is_err());
    }

    fn small_run(theta0: f64, r0: f64, n: usize, frames: Vec<f64>) -> Evolution {
        evolve(&EvolutionConfig {
            r0,
            initial: InitialCurve::Family(CurveFamilySpec {
                family: CurveFamily::Latitude { theta0 },
                resolution: n,
            }),
            csf: CsfParams::default(),
            frame_times: frames,
            n_beta: 16,
            record_stride: None,
        })
        .unwrap()
    }

    #[test]
    fn evolve_matches_extinction_prediction() {
        let ev = small_run(PI / 3.0, 2.0, 128, vec![0.0, 0.3]);
        let ext = ev.extinction.expect("run goes extinct");
        let rel = (ext.t - ev.report.t_singular).abs() / ev.report.t_singular;
        assert!(rel <= 0.02, "extinction time off by {rel:.3}");
        // centroid near the north pole
        assert!((ext.centroid - Point3::new(0.0, 0.0, 0.5)).norm() <= 1e-2);
        // records satisfy the radius identity structurally
        for rec in &ev.records {
            assert!((rec.r * rec.r + 4.0 * rec.t - 4.0).abs() <= 1e-12);
        }
        assert!(ev.report.typei_sup.is_some());
        assert!(ev.report.limit_fit_residual.is_some());
    }

    #[test]
    fn frame_at_time_zero_is_initial_torus() {
        let ev = small_run(PI / 3.0, 2.0, 96, vec![0.0]);
        let mesh = &ev.frames[0];
        assert_eq!(mesh.t_stamp, 0.0);
        assert!((mesh.r - 2.0).abs() <= 1e-15);
        // rebuild independently from the same initial data
        let c = make_family(&CurveFamilySpec {
            family: CurveFamily::Latitude { theta0: PI / 3.0 },
            resolution: 96,
        })
        .unwrap();
        let lift = horizontal_lift(&c, fiber_seed(c.point(0)).unwrap()).unwrap();
        let reference = build_torus(&lift, 16, 2.0).unwrap();
        for (a, b) in mesh.vertices().iter().zip(reference.vertices()) {
            assert!((*a - *b).norm() == 0.0);
        }
    }

    #[test]
    fn rescale_a_lands_on_unit_sphere() {
        let ev = small_run(PI / 3.0, 2.0, 96, vec![0.0, 0.2]);
        for mesh in &ev.frames {
            let resc = rescale_a(mesh).unwrap();
            for p in resc.vertices() {
                assert!((p.norm() - 1.0).abs() <= 1e-10);
            }
        }
        // at t = 0 with r0 = 1 the rescaling is the identity
        let ev1 = small_run(PI / 3.0, 1.0, 96, vec![0.0]);
        let resc = rescale_a(&ev1.frames[0]).unwrap();
        for (p, q) in resc.vertices().iter().zip(ev1.frames[0].vertices()) {
            assert!((*p - *q).norm() <= 1e-15);
        }
    }

    #[test]
    fn rescale_b_is_identity_at_start() {
        let ev = small_run(PI / 3.0, 2.0, 96, vec![0.0]);
        let q = fiber_seed(Point3::new(0.0, 0.0, 0.5)).unwrap();
        let cloud = rescale_b(&ev.frames[0], ev.a0, 2.0, q).unwrap();
        for (p, v) in cloud.iter().zip(ev.frames[0].vertices()) {
            assert!((*p - *v).norm() <= 1e-9, "lambda(0) should be 1");
        }
    }

    #[test]
    fn cylinder_fit_oracle_cases() {
        let q = Point4::new(1.0, 0.0, 0.0, 0.0);
        let jq = q.j_mul();
        let e1 = Point4::new(0.0, 0.0, 1.0, 0.0);
        let e2 = Point4::new(0.0, 0.0, 0.0, 1.0);
        let r_t = 2f64.sqrt();
        let a0 = PI / 4.0;
        let rc = r_t * (a0 / PI).sqrt();

        // Exact synthetic cylinder.
        let mut cloud = Vec::new();
        for i in 0..40 {
            for j in 0..40 {
                let s = -1.0 + 2.0 * i as f64 / 39.0;
                let phi = 2.0 * PI * j as f64 / 40.0;
                cloud.push(q * r_t + jq * s + (e1 * phi.cos() + e2 * phi.sin()) * rc);
            }
        }
        assert!(cylinder_fit(&cloud, q, r_t, a0).unwrap() <= 1e-12);

        // Radial perturbation of relative size 0.01 sin(0.7 k): the
        // residual equals the largest applied bump exactly.
        let bumped: Vec<Point4> = cloud
            .iter()
            .enumerate()
            .map(|(k, &p)| {
                let w = p - q * r_t;
                let radial = w - q * w.dot(q) - jq * w.dot(jq);
                p + radial * (0.01 * (0.7 * (k % 40) as f64).sin())
            })
            .collect();
        let res = cylinder_fit(&bumped, q, r_t, a0).unwrap();
        let max_bump = (0..40)
            .map(|k| (0.7 * k as f64).sin().abs())
            .fold(0.0, f64::max);
        assert!((res - 0.01 * max_bump).abs() <= 1e-6, "residual {res}");
        assert!(res > 5e-3 && res < 2e-2);

        // Degenerate input.
        assert!(cylinder_fit(&[], q, r_t, a0).is_err());
    }

    #[test]
    fn typei_closed_forms() {
        // Equal-area records: kappa = 0 gives exactly 1.
        let recs: Vec<FlowRecord> = (0..50)
            .map(|i| {
                let tbar = i as f64 * 0.03;
                make_record(
                    &Observation {
                        tbar,
                        length: PI,
                        area: PI / 2.0,
                        max_kappa: 0.0,
                    },
                    PI / 2.0,
                    1.0,
                    f64::INFINITY,
                )
            })
            .collect();
        let rep = typei_monitor(&recs, 0.25, 1.0);
        assert!((rep.sup_typei - 1.0).abs() <= 1e-12);
        assert!(rep.bounded);
        assert!(rep.g_strictly_increasing.is_none());

        // G is strictly increasing and negative on a uniform grid.
        let tau = 0.25 * 2f64.ln();
        let mut prev = f64::NEG_INFINITY;
        for i in 0..100 {
            let tbar = tau * i as f64 / 100.0;
            let g = g_gap(tbar, tau);
            assert!(g < 0.0, "G({tbar}) = {g} not negative");
            assert!(g > prev);
            prev = g;
        }
        assert!(g_gap(tau, tau).abs() <= 1e-15);
    }

    #[test]
    fn rejects_frames_beyond_singular_time() {
        let bad = EvolutionConfig {
            r0: 2.0,
            initial: InitialCurve::Family(CurveFamilySpec {
                family: CurveFamily::Latitude { theta0: PI / 3.0 },
                resolution: 64,
            }),
            csf: CsfParams::default(),
            frame_times: vec![0.6], // beyond T = 0.5
            n_beta: 16,
            record_stride: None,
        };
        assert!(evolve(&bad).is_err());
    }
}
