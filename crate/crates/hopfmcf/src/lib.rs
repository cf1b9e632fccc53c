//! Mean curvature flow of tori in C^2 that are preimages of spherical
//! curves under the Hopf fibration.
//!
//! The surface flow reduces to curve shortening flow on S^2(1/2) composed
//! with an exact radius law R(t) = sqrt(R0^2 - 4t) and the time change
//! tbar = (1/4) ln(R0^2 / (R0^2 - 4t)). This crate integrates the curve
//! flow, lifts curves horizontally to S^3, assembles the torus meshes,
//! applies the two singularity rescalings, and checks the predicted
//! extinction behavior against closed-form laws.

pub mod config;
pub mod csf;
pub mod curve;
pub mod export;
pub mod flow;
pub mod geom;
pub mod hopf;
pub mod verify;

pub use geom::{Point3, Point4, BASE_RADIUS};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("point has norm {norm:.12e}, expected {expected:.12e} (beyond reject band)")]
    OffSphere { norm: f64, expected: f64 },
    #[error("zero or non-finite point where a direction is required")]
    DegeneratePoint,
    #[error("vector is not tangent at the base point (<v, p> = {dot:.3e})")]
    NotTangent { dot: f64 },
    #[error("degenerate segment {index} (length {length:.3e})")]
    DegenerateSegment { index: usize, length: f64 },
    #[error("curve needs at least {min} points, got {got}")]
    TooFewPoints { min: usize, got: usize },
    #[error("curve is not simple")]
    NotSimple,
    #[error("enclosed area {area:.6} outside (0, pi); curve may wind multiply")]
    AreaOutOfRange { area: f64 },
    #[error("seed does not lie on the fiber over the curve start")]
    SeedOffFiber,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("numerical instability at tbar = {tbar:.6e}: non-finite update")]
    Instability { tbar: f64 },
    #[error("curve lost embeddedness at tbar = {tbar:.6e}")]
    EmbeddednessLost { tbar: f64 },
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// CLI exit code: 1 for validation errors, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Instability { .. } | Error::EmbeddednessLost { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
