//! Horizontal lifts of spherical curves to S^3(1), holonomy, Hopf-torus
//! meshes, the discrete Lagrangian check, and the mean-curvature formula
//! H = kappa*/R - (2/R) F.
//!
//! The discrete lift advances one base segment at a time: pick any fiber
//! point over the next base vertex from a chart section, then rotate its
//! phase so the step satisfies <p_{i+1}, J p_i> = 0 exactly. That is the
//! horizontal transport along the connecting geodesic, so the per-segment
//! horizontality residual sits at rounding level and the accumulated
//! phase gap around a closed curve equals twice the enclosed area.

use crate::curve::SphereCurve;
use crate::geom::{hopf_differential, hopf_project, Point3, Point4, BASE_RADIUS};
use crate::{Error, Result};
use std::f64::consts::PI;

/// Horizontal lift of a closed curve on S^2(1/2) into S^3(1).
#[derive(Clone, Debug)]
pub struct HorizontalLift {
    points: Vec<Point4>,
    holonomy_phase: f64,
    closure: Point4,
    base: SphereCurve,
}

impl HorizontalLift {
    pub fn points(&self) -> &[Point4] {
        &self.points
    }

    pub fn point(&self, i: usize) -> Point4 {
        self.points[i]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Phase gap between the transported endpoint and the start, in [0, 2 pi).
    pub fn holonomy_phase(&self) -> f64 {
        self.holonomy_phase
    }

    /// The lift's endpoint: the start point transported once around the
    /// whole curve. Equals e^{i holonomy} * start.
    pub fn closure_point(&self) -> Point4 {
        self.closure
    }

    pub fn base_curve(&self) -> &SphereCurve {
        &self.base
    }
}

/// Any point of the fiber over x, from the chart that is well conditioned
/// for the sign of the vertical coordinate.
fn fiber_section(x: Point3) -> Result<Point4> {
    let x = x.scaled_to(BASE_RADIUS)?;
    if x.z >= 0.0 {
        let zr = (0.5 + x.z).sqrt();
        Ok(Point4::new(zr, 0.0, x.x / zr, -x.y / zr))
    } else {
        let wr = (0.5 - x.z).sqrt();
        Ok(Point4::new(x.x / wr, x.y / wr, wr, 0.0))
    }
}

/// Deterministic gauge: the fiber point over x with maximal first
/// coordinate (z rotated real nonnegative; w real nonnegative when z
/// vanishes). Lifts and rescalings use this seed so outputs are
/// reproducible.
pub fn fiber_seed(x: Point3) -> Result<Point4> {
    let p = fiber_section(x)?;
    let zn = (p.a * p.a + p.b * p.b).sqrt();
    let beta = if zn > 1e-9 {
        -p.b.atan2(p.a)
    } else {
        -p.d.atan2(p.c)
    };
    Ok(p.phase_mul(beta))
}

/// Horizontal transport of the fiber point `p` to the fiber over `to`:
/// the unique point q over `to` with <q, J p> = 0 and <q, p> > 0.
fn transport(p: Point4, to: Point3) -> Result<Point4> {
    let zeta = fiber_section(to)?;
    let (re, im) = zeta.hermitian(p);
    let mag = (re * re + im * im).sqrt();
    if mag < 1e-6 {
        return Err(Error::InvalidParameter(
            "cannot transport across a near-antipodal segment".into(),
        ));
    }
    Ok(zeta.phase_mul(-im.atan2(re)))
}

/// Build the horizontal lift of `c` starting at `seed`, which must lie on
/// the fiber over the first curve point.
pub fn horizontal_lift(c: &SphereCurve, seed: Point4) -> Result<HorizontalLift> {
    let seed = seed.scaled_to(1.0)?;
    let projected = hopf_project(seed, 1.0)?;
    if (projected - c.point(0)).norm() > 1e-8 {
        return Err(Error::SeedOffFiber);
    }
    let mut points = Vec::with_capacity(c.len());
    points.push(seed);
    for i in 1..c.len() {
        let q = transport(points[i - 1], c.point(i))?;
        points.push(q);
    }
    let closure = transport(points[c.len() - 1], c.point(0))?;
    let (re, im) = closure.hermitian(seed);
    let mut holonomy = im.atan2(re);
    if holonomy < 0.0 {
        holonomy += 2.0 * PI;
    }
    if holonomy >= 2.0 * PI {
        holonomy -= 2.0 * PI;
    }
    Ok(HorizontalLift {
        points,
        holonomy_phase: holonomy,
        closure,
        base: c.clone(),
    })
}

/// Hopf torus mesh: grid(i, j) = R e^{i beta_i} lift(v_j), beta_i = 2 pi i / n_beta.
/// Stored row-major over (beta, v).
#[derive(Clone, Debug)]
pub struct HopfTorusMesh {
    grid: Vec<Point4>,
    pub n_beta: usize,
    pub n_v: usize,
    /// Sphere radius the vertices lie on.
    pub r: f64,
    /// Phase identifying the v-seam: (beta, v_end) ~ (beta + seam, v_start).
    pub seam_phase: f64,
    /// Flow time this mesh is a snapshot of.
    pub t_stamp: f64,
}

impl HopfTorusMesh {
    pub fn vertex(&self, i_beta: usize, j_v: usize) -> Point4 {
        self.grid[i_beta * self.n_v + j_v]
    }

    pub fn vertices(&self) -> &[Point4] {
        &self.grid
    }

    /// Replace every vertex through `f`, keeping the grid shape.
    pub(crate) fn map_vertices(&self, f: impl Fn(usize, usize, Point4) -> Point4) -> HopfTorusMesh {
        let mut grid = Vec::with_capacity(self.grid.len());
        for i in 0..self.n_beta {
            for j in 0..self.n_v {
                grid.push(f(i, j, self.vertex(i, j)));
            }
        }
        HopfTorusMesh { grid, ..self.clone() }
    }
}

/// Assemble the Hopf torus over a lifted curve at hypersphere radius `r`.
pub fn build_torus(lift: &HorizontalLift, n_beta: usize, r: f64) -> Result<HopfTorusMesh> {
    if n_beta < 8 {
        return Err(Error::TooFewPoints { min: 8, got: n_beta });
    }
    if !(r > 0.0) {
        return Err(Error::InvalidParameter("torus radius must be positive".into()));
    }
    let n_v = lift.len();
    let mut grid = Vec::with_capacity(n_beta * n_v);
    for i in 0..n_beta {
        let beta = 2.0 * PI * i as f64 / n_beta as f64;
        let (s, c) = beta.sin_cos();
        for j in 0..n_v {
            let p = lift.point(j);
            // phase_mul with precomputed sin/cos
            grid.push(
                Point4::new(
                    c * p.a - s * p.b,
                    s * p.a + c * p.b,
                    c * p.c - s * p.d,
                    s * p.c + c * p.d,
                ) * r,
            );
        }
    }
    Ok(HopfTorusMesh {
        grid,
        n_beta,
        n_v,
        r,
        seam_phase: lift.holonomy_phase(),
        t_stamp: 0.0,
    })
}

/// Max over interior stencils of |omega(D_beta F, D_v F)| normalized by
/// the factor norms, with central differences. omega(X, Y) = <JX, Y>.
pub fn check_lagrangian(mesh: &HopfTorusMesh) -> f64 {
    let (nb, nv) = (mesh.n_beta, mesh.n_v);
    let mut worst = 0.0f64;
    for i in 0..nb {
        let ip = (i + 1) % nb;
        let im = (i + nb - 1) % nb;
        for j in 1..nv.saturating_sub(1) {
            let d_beta = (mesh.vertex(ip, j) - mesh.vertex(im, j)) * 0.5;
            let d_v = (mesh.vertex(i, j + 1) - mesh.vertex(i, j - 1)) * 0.5;
            let denom = d_beta.norm() * d_v.norm();
            if denom > 1e-300 {
                worst = worst.max((d_beta.j_mul().dot(d_v) / denom).abs());
            }
        }
    }
    worst
}

/// Horizontal lift of a tangent vector w of S^2(R/2) at the fiber point
/// p: the unique horizontal vector at p that the fibration differential
/// maps to w. Norms are preserved (Riemannian submersion).
pub fn lift_vector(w: Point3, p: Point4) -> Result<Point4> {
    let r = p.norm();
    if r < 1e-300 {
        return Err(Error::DegeneratePoint);
    }
    let x = hopf_project(p, r)?;
    let w = x.tangent_project(w);
    if w.norm() == 0.0 {
        return Ok(Point4::ZERO);
    }
    let p = p.scaled_to(r)?;
    let jp = p.j_mul();

    // Orthonormal basis of the horizontal plane at p.
    let mut basis: Vec<Point4> = Vec::with_capacity(2);
    let candidates = [
        Point4::new(1.0, 0.0, 0.0, 0.0),
        Point4::new(0.0, 1.0, 0.0, 0.0),
        Point4::new(0.0, 0.0, 1.0, 0.0),
        Point4::new(0.0, 0.0, 0.0, 1.0),
    ];
    for cand in candidates {
        let mut v = cand - p * (cand.dot(p) / (r * r)) - jp * (cand.dot(jp) / (r * r));
        for b in &basis {
            v = v - *b * v.dot(*b);
        }
        let n = v.norm();
        if n > 0.3 {
            basis.push(v * (1.0 / n));
            if basis.len() == 2 {
                break;
            }
        }
    }
    debug_assert_eq!(basis.len(), 2);

    let g1 = hopf_differential(p, basis[0], r);
    let g2 = hopf_differential(p, basis[1], r);
    let (a11, a12, a22) = (g1.dot(g1), g1.dot(g2), g2.dot(g2));
    let det = a11 * a22 - a12 * a12;
    let (b1, b2) = (w.dot(g1), w.dot(g2));
    let c1 = (b1 * a22 - b2 * a12) / det;
    let c2 = (b2 * a11 - b1 * a12) / det;
    Ok(basis[0] * c1 + basis[1] * c2)
}

/// Mean curvature of the torus in C^2 at every vertex:
/// H = (1/R) kappa* - (2/R) F, with F the unit-sphere position and kappa
/// the curvature vector of the base curve measured on S^2(1/2). The
/// squared norm satisfies |H|^2 = (kappa^2 + 4) / R^2.
pub fn mean_curvature(mesh: &HopfTorusMesh, kappa_vectors: &[Point3]) -> Result<Vec<Point4>> {
    if kappa_vectors.len() != mesh.n_v {
        return Err(Error::InvalidParameter(format!(
            "expected {} curvature vectors, got {}",
            mesh.n_v,
            kappa_vectors.len()
        )));
    }
    let r = mesh.r;
    let mut out = Vec::with_capacity(mesh.n_beta * mesh.n_v);
    for i in 0..mesh.n_beta {
        for j in 0..mesh.n_v {
            let f_unit = mesh.vertex(i, j) * (1.0 / r);
            let lifted = lift_vector(kappa_vectors[j], f_unit)?;
            out.push(lifted * (1.0 / r) - f_unit * (2.0 / r));
        }
    }
    Ok(out)
}

/// Push every vertex off the fiber-aligned surface: displace along the
/// J-image of the local v-tangent with a beta-dependent amplitude, then
/// reproject to the sphere. The result is no longer the preimage of a
/// single curve, so the Kaehler form no longer vanishes on the grid.
/// Negative control for [`check_lagrangian`].
pub fn shear_off_fibers(mesh: &HopfTorusMesh, amplitude: f64) -> HopfTorusMesh {
    mesh.map_vertices(|i, j, p| {
        let jn = (j + 1) % mesh.n_v;
        let jp = (j + mesh.n_v - 1) % mesh.n_v;
        let t_v = mesh.vertex(i, jn) - mesh.vertex(i, jp);
        let n = t_v.norm();
        if n < 1e-300 {
            return p;
        }
        let beta = 2.0 * PI * i as f64 / mesh.n_beta as f64;
        let moved = p + t_v.j_mul() * (amplitude * mesh.r * beta.sin() / n);
        moved.scaled_to(mesh.r).unwrap_or(p)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{make_family, CurveFamily, CurveFamilySpec};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn great_circle(n: usize) -> SphereCurve {
        make_family(&CurveFamilySpec {
            family: CurveFamily::GreatCircle {
                axis: Point3::new(0.0, 0.0, 1.0),
            },
            resolution: n,
        })
        .unwrap()
    }

    fn latitude(theta0: f64, n: usize) -> SphereCurve {
        make_family(&CurveFamilySpec {
            family: CurveFamily::Latitude { theta0 },
            resolution: n,
        })
        .unwrap()
    }

    fn lift_of(c: &SphereCurve) -> HorizontalLift {
        let seed = fiber_seed(c.point(0)).unwrap();
        horizontal_lift(c, seed).unwrap()
    }

    /// Per-segment horizontality residual |<dp, J p_mid>| / |dp|.
    fn horizontality_residual(lift: &HorizontalLift) -> f64 {
        let n = lift.len();
        let mut worst = 0.0f64;
        for i in 0..n - 1 {
            let p = lift.point(i);
            let q = lift.point(i + 1);
            let dp = q - p;
            let mid = (p + q) * 0.5;
            worst = worst.max(dp.dot(mid.j_mul()).abs() / dp.norm());
        }
        worst
    }

    #[test]
    fn lift_of_polar_great_circle_is_real_arc() {
        // Great circle through the poles in the x-z plane; its horizontal
        // lift from (1,0,0,0) is the real arc y -> (cos y, 0, sin y, 0)
        // closing after a half turn.
        let n = 256;
        let pts: Vec<Point3> = (0..n)
            .map(|j| {
                let y = PI * j as f64 / n as f64;
                Point3::new(
                    0.5 * (2.0 * y).sin(),
                    0.0,
                    0.5 * (2.0 * y).cos(),
                )
            })
            .collect();
        let c = SphereCurve::new(pts).unwrap();
        let lift = horizontal_lift(&c, Point4::new(1.0, 0.0, 0.0, 0.0)).unwrap();
        for j in 0..n {
            let y = PI * j as f64 / n as f64;
            let expected = Point4::new(y.cos(), 0.0, y.sin(), 0.0);
            assert!(
                (lift.point(j) - expected).norm() <= 1e-9,
                "vertex {j} off by {:.3e}",
                (lift.point(j) - expected).norm()
            );
        }
        assert!((lift.holonomy_phase() - PI).abs() <= 1e-9);
        // closure = e^{i pi} seed = -seed
        assert!((lift.closure_point() + Point4::new(1.0, 0.0, 0.0, 0.0)).norm() <= 1e-9);
    }

    #[test]
    fn lift_projects_back_and_is_horizontal() {
        for c in [latitude(PI / 4.0, 257), great_circle(200), latitude(1.2, 128)] {
            let lift = lift_of(&c);
            for j in 0..c.len() {
                let x = hopf_project(lift.point(j), 1.0).unwrap();
                assert!((x - c.point(j)).norm() <= 1e-8);
                assert!((lift.point(j).norm() - 1.0).abs() <= 1e-12);
            }
            assert!(horizontality_residual(&lift) <= 1e-8);
            // endpoint closes up to the holonomy phase
            let expected = lift.point(0).phase_mul(lift.holonomy_phase());
            assert!((lift.closure_point() - expected).norm() <= 1e-7);
        }
    }

    #[test]
    fn holonomy_equals_twice_enclosed_area() {
        // Anchored by the explicit great-circle lift (phase pi, area pi/2);
        // checked across caps and at a chart-crossing curve.
        for c in [
            latitude(0.05, 512),
            latitude(PI / 4.0, 512),
            latitude(PI / 3.0, 256),
            latitude(1.4, 512),
        ] {
            let lift = lift_of(&c);
            let expected = (2.0 * c.enclosed_area()).rem_euclid(2.0 * PI);
            let got = lift.holonomy_phase();
            let d = (got - expected).abs();
            let diff = d.min(2.0 * PI - d);
            assert!(
                diff <= 1e-9,
                "holonomy {got} vs 2A {expected} for area {}",
                c.enclosed_area()
            );
        }
    }

    #[test]
    fn seed_off_fiber_is_rejected() {
        let c = latitude(PI / 4.0, 64);
        let wrong = fiber_seed(c.point(10)).unwrap();
        assert!(matches!(
            horizontal_lift(&c, wrong),
            Err(Error::SeedOffFiber)
        ));
    }

    #[test]
    fn clifford_torus_from_equator() {
        let lift = lift_of(&great_circle(256));
        let mesh = build_torus(&lift, 64, 1.0).unwrap();
        let inv = 1.0 / 2f64.sqrt();
        for p in mesh.vertices() {
            let zn = (p.a * p.a + p.b * p.b).sqrt();
            let wn = (p.c * p.c + p.d * p.d).sqrt();
            assert!((zn - inv).abs() <= 1e-7 && (wn - inv).abs() <= 1e-7);
        }
        assert!(check_lagrangian(&mesh) <= 1e-6);
    }

    #[test]
    fn tiny_cap_torus_degenerates_to_fiber_circle() {
        let lift = lift_of(&latitude(0.02, 128));
        let mesh = build_torus(&lift, 32, 1.0).unwrap();
        let q = fiber_seed(Point3::new(0.0, 0.0, 0.5)).unwrap();
        for p in mesh.vertices() {
            assert!((p.norm() - 1.0).abs() <= 1e-12);
            // distance to the fiber through q: sqrt(2 - 2 |(p, q)|)
            let (re, im) = p.hermitian(q);
            let mag = (re * re + im * im).sqrt();
            assert!(
                (2.0 - 2.0 * mag).max(0.0).sqrt() <= 0.02,
                "vertex strays from the limit fiber"
            );
        }
    }

    #[test]
    fn torus_scales_with_radius() {
        let lift = lift_of(&latitude(PI / 4.0, 96));
        let mesh = build_torus(&lift, 48, 2.0).unwrap();
        for p in mesh.vertices() {
            assert!((p.norm() - 2.0).abs() <= 1e-8 * 2.0);
        }
        // projecting any beta-row through the scaled fibration recovers
        // the base curve scaled by R
        for j in 0..mesh.n_v {
            let x = hopf_project(mesh.vertex(17, j), 2.0).unwrap();
            let base = lift.base_curve().point(j) * 2.0;
            assert!((x - base).norm() <= 1e-8);
        }
        assert!(check_lagrangian(&mesh) <= 1e-3);
    }

    #[test]
    fn fiber_rows_trace_full_circles() {
        let lift = lift_of(&latitude(PI / 3.0, 64));
        let mesh = build_torus(&lift, 128, 1.0).unwrap();
        let j = 20;
        for i in 0..mesh.n_beta {
            let beta = 2.0 * PI * i as f64 / mesh.n_beta as f64;
            let expected = lift.point(j).phase_mul(beta);
            assert!((mesh.vertex(i, j) - expected).norm() <= 1e-12);
        }
        assert!((mesh.seam_phase - lift.holonomy_phase()).abs() <= 1e-15);
    }

    #[test]
    fn lagrangian_residual_of_built_meshes_is_small() {
        let lift = lift_of(&latitude(PI / 4.0, 128));
        let mesh = build_torus(&lift, 128, 1.0).unwrap();
        assert!(check_lagrangian(&mesh) <= 1e-3);
    }

    #[test]
    fn off_fiber_shear_fails_the_lagrangian_check() {
        let lift = lift_of(&latitude(PI / 4.0, 128));
        let mesh = build_torus(&lift, 128, 1.0).unwrap();
        let bad = shear_off_fibers(&mesh, 0.3);
        assert!(
            check_lagrangian(&bad) > 1e-2,
            "negative control residual {:.3e}",
            check_lagrangian(&bad)
        );
    }

    #[test]
    fn lift_vector_reference_cases() {
        // w = 0 lifts to 0.
        let p = Point4::new(1.0, 0.0, 0.0, 0.0);
        assert_eq!(lift_vector(Point3::ZERO, p).unwrap(), Point4::ZERO);

        // At p = (1,0,0,0) over x = (0,0,1/2) the horizontal space is
        // span{(0,0,1,0), (0,0,0,1)}; the image of (0,0,1,0) lifts back.
        let h = Point4::new(0.0, 0.0, 1.0, 0.0);
        let w = hopf_differential(p, h, 1.0);
        assert!((w - Point3::new(1.0, 0.0, 0.0)).norm() <= 1e-15);
        let lifted = lift_vector(w, p).unwrap();
        assert!((lifted - h).norm() <= 1e-12);
    }

    #[test]
    fn lift_vector_preserves_norms() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..1000 {
            let p = loop {
                let p = Point4::new(
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                );
                if p.norm() > 0.1 {
                    break p.scaled_to(1.0).unwrap();
                }
            };
            let x = hopf_project(p, 1.0).unwrap();
            let raw = Point3::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            let w = x.tangent_project(raw);
            let lifted = lift_vector(w, p).unwrap();
            assert!((lifted.norm() - w.norm()).abs() <= 1e-10);
            // horizontal: orthogonal to p and Jp
            assert!(lifted.dot(p).abs() <= 1e-10);
            assert!(lifted.dot(p.j_mul()).abs() <= 1e-10);
            // and it actually maps back to w
            let back = hopf_differential(p, lifted, 1.0);
            assert!((back - w).norm() <= 1e-9);
        }
    }

    #[test]
    fn mean_curvature_identities() {
        // Clifford torus: kappa = 0, H = -2F, |H| = 2.
        let gc = great_circle(256);
        let lift = lift_of(&gc);
        let mesh = build_torus(&lift, 32, 1.0).unwrap();
        let kappa = gc.curvature_vectors().unwrap();
        let h = mean_curvature(&mesh, &kappa).unwrap();
        for (idx, hv) in h.iter().enumerate() {
            let f = mesh.vertices()[idx];
            assert!((*hv + f * 2.0).norm() <= 1e-3);
            assert!((hv.norm() - 2.0).abs() <= 1e-3);
        }

        // Latitude pi/4: kappa = 2 cot(pi/4) = 2, |H|^2 = 8 within 2%.
        let lat = latitude(PI / 4.0, 512);
        let lift = lift_of(&lat);
        let mesh = build_torus(&lift, 16, 1.0).unwrap();
        let kappa = lat.curvature_vectors().unwrap();
        let h = mean_curvature(&mesh, &kappa).unwrap();
        for hv in &h {
            assert!((hv.norm_sq() - 8.0).abs() <= 0.02 * 8.0);
        }

        // Mismatched lengths are rejected.
        assert!(mean_curvature(&mesh, &kappa[..10]).is_err());
    }
}
