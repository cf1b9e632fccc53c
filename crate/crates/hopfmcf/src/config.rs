//! Run configuration files: strict JSON, unknown keys rejected.

use crate::csf::CsfParams;
use crate::curve::{make_family, CurveFamily, CurveFamilySpec};
use crate::flow::{predict, t_of_tbar, EvolutionConfig, InitialCurve, SingularityKind};
use crate::geom::Point3;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

fn default_cfl() -> f64 {
    0.25
}
fn default_resample_every() -> usize {
    10
}
fn default_length_epsilon() -> f64 {
    1e-3
}
fn default_max_steps() -> u64 {
    5_000_000
}
fn default_records() -> usize {
    1200
}
fn default_n_beta() -> usize {
    128
}
fn default_true() -> bool {
    true
}

/// Initial curve selection inside a run config.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, tag = "family", rename_all = "snake_case")]
pub enum CurveConfig {
    Latitude {
        theta0: f64,
        n: usize,
    },
    GreatCircle {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        axis: Option<[f64; 3]>,
    },
    PerturbedGreatCircle {
        mode: u32,
        amplitude: f64,
        n: usize,
    },
    PointList {
        path: PathBuf,
    },
}

impl CurveConfig {
    pub fn to_family(&self) -> CurveFamilySpec {
        match self {
            CurveConfig::Latitude { theta0, n } => CurveFamilySpec {
                family: CurveFamily::Latitude { theta0: *theta0 },
                resolution: *n,
            },
            CurveConfig::GreatCircle { n, axis } => CurveFamilySpec {
                family: CurveFamily::GreatCircle {
                    axis: axis
                        .map(|a| Point3::new(a[0], a[1], a[2]))
                        .unwrap_or(Point3::new(0.0, 0.0, 1.0)),
                },
                resolution: *n,
            },
            CurveConfig::PerturbedGreatCircle { mode, amplitude, n } => CurveFamilySpec {
                family: CurveFamily::PerturbedGreatCircle {
                    mode: *mode,
                    amplitude: *amplitude,
                },
                resolution: *n,
            },
            CurveConfig::PointList { path } => CurveFamilySpec {
                family: CurveFamily::PointList { path: path.clone() },
                resolution: crate::curve::MIN_POINTS,
            },
        }
    }
}

/// Frame placement: an explicit list of t values, or a count filled in
/// automatically (geometric approach to the singular time for shrinking
/// runs, uniform in tbar otherwise).
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub times: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
}

/// Output toggles.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExportConfig {
    #[serde(default = "default_true")]
    pub csv: bool,
    #[serde(default = "default_true")]
    pub mesh4d: bool,
    #[serde(default)]
    pub obj3d: bool,
    /// Stereographic projection point for OBJ export; defaults to the
    /// antipode of the deterministic fiber seed over the first curve point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obj_pole: Option<[f64; 4]>,
}

impl Default for ExportConfig {
    fn default() -> Self {
        ExportConfig {
            csv: true,
            mesh4d: true,
            obj3d: false,
            obj_pole: None,
        }
    }
}

/// One simulation run, as read from a JSON file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub r0: f64,
    pub curve: CurveConfig,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default = "default_resample_every")]
    pub resample_every: usize,
    #[serde(default = "default_length_epsilon")]
    pub length_epsilon: f64,
    #[serde(default = "default_max_steps")]
    pub max_steps: u64,
    #[serde(default)]
    pub frames: FrameSpec,
    #[serde(default = "default_records")]
    pub records: usize,
    pub out_dir: PathBuf,
    #[serde(default)]
    pub export: ExportConfig,
    #[serde(default = "default_n_beta")]
    pub n_beta: usize,
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Build the curve, place frames, and assemble the evolution config.
    pub fn prepare(&self) -> Result<EvolutionConfig> {
        let csf = CsfParams {
            cfl: self.cfl,
            resample_every: self.resample_every,
            length_epsilon: self.length_epsilon,
            max_steps: self.max_steps,
        };
        csf.validate()?;
        if self.records == 0 {
            return Err(Error::Config("records must be >= 1".into()));
        }
        let curve = make_family(&self.curve.to_family())?;
        let a0 = curve.enclosed_area();
        let report = predict(a0, self.r0)?;
        let tau = crate::csf::extinction_tbar(a0)?;

        let frame_times: Vec<f64> = match (&self.frames.times, self.frames.count) {
            (Some(times), None) => times.clone(),
            (None, Some(k)) => auto_frames(report.kind, report.t_singular, self.r0, k),
            (None, None) => auto_frames(report.kind, report.t_singular, self.r0, 6),
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "frames: give either times or count, not both".into(),
                ))
            }
        };

        let horizon = if tau.is_finite() {
            tau
        } else {
            frame_times
                .iter()
                .map(|&t| crate::flow::tbar_of_t(t, self.r0).unwrap_or(0.0))
                .fold(0.0, f64::max)
        };
        let record_stride = if horizon > 0.0 {
            Some(horizon / self.records as f64)
        } else {
            None
        };

        Ok(EvolutionConfig {
            r0: self.r0,
            initial: InitialCurve::Curve(curve),
            csf,
            frame_times,
            n_beta: self.n_beta,
            record_stride,
        })
    }
}

/// Automatic frame times: t = 0 plus a geometric approach to T for
/// shrinking runs (T - t halving per frame down to 1% of T), or uniform
/// tbar spacing up to tbar = 1.5 for equal-area runs.
fn auto_frames(kind: SingularityKind, t_singular: f64, r0: f64, count: usize) -> Vec<f64> {
    if count == 0 {
        return Vec::new();
    }
    match kind {
        SingularityKind::CircleCylinder => {
            let mut times = vec![0.0];
            for k in 1..count {
                let frac = 0.01 * (2f64).powi((count - 1 - k) as i32);
                times.push(t_singular * (1.0 - frac));
            }
            times
        }
        SingularityKind::PointClifford => (1..=count)
            .map(|k| t_of_tbar(1.5 * k as f64 / count as f64, r0))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_rejects_unknown_keys() {
        let good = r#"{
            "r0": 2.0,
            "curve": {"family": "latitude", "theta0": 1.0471975511965976, "n": 512},
            "out_dir": "out/run"
        }"#;
        let cfg: RunConfig = serde_json::from_str(good).unwrap();
        assert_eq!(cfg.cfl, 0.25);
        assert_eq!(cfg.n_beta, 128);

        let bad = r#"{
            "r0": 2.0,
            "curve": {"family": "latitude", "theta0": 1.0, "n": 512},
            "out_dir": "out/run",
            "cfl_typo": 0.5
        }"#;
        assert!(serde_json::from_str::<RunConfig>(bad).is_err());

        let bad_nested = r#"{
            "r0": 2.0,
            "curve": {"family": "latitude", "theta0": 1.0, "n": 512, "extra": 1},
            "out_dir": "out/run"
        }"#;
        assert!(serde_json::from_str::<RunConfig>(bad_nested).is_err());
    }

    #[test]
    fn tiny_resolution_rejected_before_running() {
        let cfg = RunConfig {
            r0: 1.0,
            curve: CurveConfig::Latitude { theta0: 1.0, n: 4 },
            cfl: 0.25,
            resample_every: 10,
            length_epsilon: 1e-3,
            max_steps: 1000,
            frames: FrameSpec::default(),
            records: 100,
            out_dir: "out".into(),
            export: ExportConfig::default(),
            n_beta: 16,
        };
        assert!(matches!(cfg.prepare(), Err(Error::TooFewPoints { .. })));
    }

    #[test]
    fn auto_frames_shapes() {
        let times = auto_frames(SingularityKind::CircleCylinder, 0.5, 2.0, 6);
        assert_eq!(times.len(), 6);
        assert_eq!(times[0], 0.0);
        assert!(times.windows(2).all(|w| w[0] < w[1]));
        assert!((times[5] - 0.5 * 0.99).abs() <= 1e-12);

        let times = auto_frames(SingularityKind::PointClifford, 0.25, 1.0, 3);
        assert_eq!(times.len(), 3);
        assert!(times.windows(2).all(|w| w[0] < w[1]));
        assert!(times[2] < 0.25);
    }
}
