//! Primitives for the round spheres S^2(rho) and S^3(R), the complex
//! structure on R^4 = C^2, and the Hopf projection.
//!
//! Coordinates follow the identification (z, w) = (a + ib, c + id); the
//! projection lands in R^3 with component order (Re 2zw*, Im 2zw*, |z|^2 - |w|^2).

use crate::{Error, Result};

/// Radius of the base sphere the curves live on. The Hopf fibration maps
/// the unit 3-sphere onto the 2-sphere of radius 1/2.
pub const BASE_RADIUS: f64 = 0.5;

/// Relative tolerance for "on sphere" predicates; inputs inside it are
/// re-projected rather than rejected.
pub const ON_SPHERE_REL: f64 = 1e-9;

/// Inputs whose norm deviates beyond this are rejected — such drift
/// signals a bug in the caller, not rounding.
pub const OFF_SPHERE_REJECT_REL: f64 = 1e-6;

/// Point (or vector) in R^3.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Point (or vector) in R^4, read as the complex pair (a + ib, c + id).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point4 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Point3 {
    pub const ZERO: Point3 = Point3 { x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    pub fn dot(self, o: Point3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Standard right-handed cross product.
    pub fn cross(self, o: Point3) -> Point3 {
        Point3 {
            x: self.y * o.z - self.z * o.y,
            y: self.z * o.x - self.x * o.z,
            z: self.x * o.y - self.y * o.x,
        }
    }

    /// Rescale to the given norm. Errors on (near-)zero input.
    pub fn scaled_to(self, radius: f64) -> Result<Point3> {
        let n = self.norm();
        if n < 1e-300 {
            return Err(Error::DegeneratePoint);
        }
        Ok(self * (radius / n))
    }

    /// Orthogonal projection of `v` onto the tangent plane at `self`
    /// (self taken as a point on a sphere centered at the origin).
    pub fn tangent_project(self, v: Point3) -> Point3 {
        let n2 = self.norm_sq();
        v - self * (v.dot(self) / n2)
    }

    /// Angle between `self` and `o` seen as directions from the origin.
    pub fn angle_to(self, o: Point3) -> f64 {
        let c = self.cross(o).norm();
        let d = self.dot(o);
        c.atan2(d)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Point4 {
    pub const ZERO: Point4 = Point4 { a: 0.0, b: 0.0, c: 0.0, d: 0.0 };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Point4 { a, b, c, d }
    }

    pub fn dot(self, o: Point4) -> f64 {
        self.a * o.a + self.b * o.b + self.c * o.c + self.d * o.d
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Multiplication by i on each complex coordinate:
    /// (a, b, c, d) -> (-b, a, -d, c). Satisfies J(Jp) = -p.
    pub fn j_mul(self) -> Point4 {
        Point4 {
            a: -self.b,
            b: self.a,
            c: -self.d,
            d: self.c,
        }
    }

    /// Multiplication by e^{i beta} on both complex coordinates.
    pub fn phase_mul(self, beta: f64) -> Point4 {
        let (s, c) = beta.sin_cos();
        Point4 {
            a: c * self.a - s * self.b,
            b: s * self.a + c * self.b,
            c: c * self.c - s * self.d,
            d: s * self.c + c * self.d,
        }
    }

    /// Hermitian product (u, v) = z_u conj(z_v) + w_u conj(w_v) as
    /// (re, im). Note re = <u, v> and im = <u, Jv>.
    pub fn hermitian(self, o: Point4) -> (f64, f64) {
        (self.dot(o), self.dot(o.j_mul()))
    }

    pub fn scaled_to(self, radius: f64) -> Result<Point4> {
        let n = self.norm();
        if n < 1e-300 {
            return Err(Error::DegeneratePoint);
        }
        Ok(self * (radius / n))
    }

    pub fn tangent_project(self, v: Point4) -> Point4 {
        let n2 = self.norm_sq();
        v - self * (v.dot(self) / n2)
    }

    pub fn is_finite(self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite() && self.d.is_finite()
    }
}

macro_rules! impl_vec_ops {
    ($t:ty { $($f:ident),+ }) => {
        impl std::ops::Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                <$t>::new($(self.$f + o.$f),+)
            }
        }
        impl std::ops::Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                <$t>::new($(self.$f - o.$f),+)
            }
        }
        impl std::ops::Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                <$t>::new($(-self.$f),+)
            }
        }
        impl std::ops::Mul<f64> for $t {
            type Output = $t;
            fn mul(self, s: f64) -> $t {
                <$t>::new($(self.$f * s),+)
            }
        }
    };
}

impl_vec_ops!(Point3 { x, y, z });
impl_vec_ops!(Point4 { a, b, c, d });

/// Hopf projection S^3(R) -> S^2(R/2),
/// (z, w) -> (2 z conj(w), |z|^2 - |w|^2) / (2R).
///
/// The input is re-projected onto S^3(R) when within [`ON_SPHERE_REL`];
/// larger deviations are rejected as caller drift.
pub fn hopf_project(p: Point4, r: f64) -> Result<Point3> {
    debug_assert!(r > 0.0);
    let n = p.norm();
    if (n - r).abs() > OFF_SPHERE_REJECT_REL * r {
        return Err(Error::OffSphere { norm: n, expected: r });
    }
    let p = p * (r / n);
    let (a, b, c, d) = (p.a, p.b, p.c, p.d);
    // 2 z conj(w) = (2(ac + bd), 2(bc - ad))
    Ok(Point3 {
        x: (a * c + b * d) / r,
        y: (b * c - a * d) / r,
        z: (a * a + b * b - c * c - d * d) / (2.0 * r),
    })
}

/// Differential of [`hopf_project`] at `p` applied to `v` (no projection
/// of `v`; the caller supplies a tangent vector of S^3(R)).
pub fn hopf_differential(p: Point4, v: Point4, r: f64) -> Point3 {
    let (a, b, c, d) = (p.a, p.b, p.c, p.d);
    Point3 {
        x: (a * v.c + c * v.a + b * v.d + d * v.b) / r,
        y: (b * v.c + c * v.b - a * v.d - d * v.a) / r,
        z: (a * v.a + b * v.b - c * v.c - d * v.d) / r,
    }
}

/// Exponential map of the round sphere the base point lies on:
/// cos(|v|/rho) base + rho sin(|v|/rho) v/|v|. The radius is read off the
/// base point; `v` must be tangent at `base`.
pub fn exp_sphere(base: Point3, v: Point3) -> Result<Point3> {
    let rho = base.norm();
    if rho < 1e-300 {
        return Err(Error::DegeneratePoint);
    }
    let vn = v.norm();
    if vn == 0.0 {
        return Ok(base);
    }
    if v.dot(base).abs() > 1e-9 * rho * vn {
        return Err(Error::NotTangent {
            dot: v.dot(base),
        });
    }
    let t = vn / rho;
    Ok(base * t.cos() + v * (rho * t.sin() / vn))
}
