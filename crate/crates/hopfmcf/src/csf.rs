//! Curve shortening flow on S^2(1/2) in the reparametrized time tbar:
//! forward Euler with projection back onto the sphere, periodic
//! resampling to uniform arclength, and extinction detection.
//!
//! The enclosed area of any solution obeys the linear law
//! A(tbar) = pi/2 - (pi/2 - A0) e^{4 tbar}, which gives the closed-form
//! extinction time used as the main diagnostic oracle.

use crate::curve::SphereCurve;
use crate::geom::BASE_RADIUS;
use crate::{Error, Result};
use std::f64::consts::PI;

/// Integrator parameters.
#[derive(Clone, Debug)]
pub struct CsfParams {
    /// Time step safety factor: dtbar = cfl * h_min^2. Stable in (0, 0.5].
    pub cfl: f64,
    /// Resample to uniform arclength (and re-check simplicity) every this
    /// many accepted steps.
    pub resample_every: usize,
    /// Extinction is declared when the total length drops below this.
    pub length_epsilon: f64,
    /// Hard cap on accepted steps per `run_until` call.
    pub max_steps: u64,
}

impl Default for CsfParams {
    fn default() -> Self {
        CsfParams {
            cfl: 0.25,
            resample_every: 10,
            length_epsilon: 1e-3,
            max_steps: 5_000_000,
        }
    }
}

impl CsfParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= 0.5) {
            return Err(Error::InvalidParameter(format!(
                "cfl must lie in (0, 0.5], got {}",
                self.cfl
            )));
        }
        if self.resample_every == 0 {
            return Err(Error::InvalidParameter("resample_every must be >= 1".into()));
        }
        if !(self.length_epsilon > 0.0) {
            return Err(Error::InvalidParameter("length_epsilon must be positive".into()));
        }
        Ok(())
    }
}

/// Integration state: the current curve and the accumulated tbar.
#[derive(Clone, Debug)]
pub struct CsfState {
    pub curve: SphereCurve,
    pub tbar: f64,
    pub step_count: u64,
}

impl CsfState {
    pub fn new(curve: SphereCurve) -> Self {
        CsfState {
            curve,
            tbar: 0.0,
            step_count: 0,
        }
    }
}

/// One observation emitted to the `run_until` observer.
#[derive(Clone, Copy, Debug)]
pub struct Observation {
    pub tbar: f64,
    pub length: f64,
    pub area: f64,
    pub max_kappa: f64,
}

/// Result of a `run_until` call.
#[derive(Debug)]
pub struct RunOutcome {
    pub state: CsfState,
    /// Length dropped below `length_epsilon` before the target was reached.
    pub extinct: bool,
    /// The step cap fired before target or extinction.
    pub step_limited: bool,
}

/// One forward Euler step: p_i <- project(p_i + dtbar * kappa_i) with
/// dtbar = cfl * h_min^2, optionally clamped to `dt_cap`. Resampling and
/// the simplicity tripwire run on their configured cadence.
pub fn step(state: &CsfState, params: &CsfParams) -> Result<CsfState> {
    step_clamped(state, params, f64::INFINITY)
}

fn step_clamped(state: &CsfState, params: &CsfParams, dt_cap: f64) -> Result<CsfState> {
    let curve = &state.curve;
    let n = curve.len();
    let h_min = curve.min_seg_length();
    let dt = (params.cfl * h_min * h_min).min(dt_cap);

    let mut new_points = Vec::with_capacity(n);
    for i in 0..n {
        let kappa = curve.curvature_vector(i)?;
        let moved = curve.point(i) + kappa * dt;
        if !moved.is_finite() {
            return Err(Error::Instability { tbar: state.tbar });
        }
        new_points.push(moved.scaled_to(BASE_RADIUS)?);
    }

    let mut new_curve = SphereCurve::from_points_unchecked(new_points)?;
    let step_count = state.step_count + 1;
    if step_count % params.resample_every as u64 == 0 {
        new_curve = new_curve.resample(n)?;
        if !new_curve.is_simple() {
            return Err(Error::EmbeddednessLost {
                tbar: state.tbar + dt,
            });
        }
    }
    Ok(CsfState {
        curve: new_curve,
        tbar: state.tbar + dt,
        step_count,
    })
}

/// Integrate until `tbar_target` or extinction, whichever comes first.
///
/// Steps are shortened to land exactly on the observation grid
/// (multiples of `stride`, when given) and on the target, so emitted
/// observation times are reproducible. With `stride = None` the observer
/// fires after every accepted step.
pub fn run_until(
    state: CsfState,
    tbar_target: f64,
    params: &CsfParams,
    stride: Option<f64>,
    mut observer: impl FnMut(&CsfState, &Observation),
) -> Result<RunOutcome> {
    params.validate()?;
    if let Some(s) = stride {
        if !(s > 0.0) {
            return Err(Error::InvalidParameter("observation stride must be positive".into()));
        }
    }
    let mut state = state;
    let mut steps_taken = 0u64;

    let emit = |state: &CsfState, observer: &mut dyn FnMut(&CsfState, &Observation)| {
        let obs = Observation {
            tbar: state.tbar,
            length: state.curve.length(),
            area: state.curve.enclosed_area(),
            max_kappa: state.curve.max_curvature().unwrap_or(f64::NAN),
        };
        observer(state, &obs);
    };

    loop {
        if state.curve.length() <= params.length_epsilon {
            emit(&state, &mut observer);
            return Ok(RunOutcome {
                state,
                extinct: true,
                step_limited: false,
            });
        }
        if state.tbar >= tbar_target - 1e-15 * tbar_target.max(1.0) {
            return Ok(RunOutcome {
                state,
                extinct: false,
                step_limited: false,
            });
        }
        if steps_taken >= params.max_steps {
            return Ok(RunOutcome {
                state,
                extinct: false,
                step_limited: true,
            });
        }

        // Clamp the step so it lands on the next stride tick or target.
        let next_tick = stride.map(|s| {
            let k = (state.tbar / s + 1e-9).floor() + 1.0;
            k * s
        });
        let stop = next_tick.unwrap_or(f64::INFINITY).min(tbar_target);
        let dt_cap = stop - state.tbar;

        state = step_clamped(&state, params, dt_cap)?;
        steps_taken += 1;

        let on_tick = match (stride, next_tick) {
            (Some(_), Some(t)) => (state.tbar - t).abs() <= 1e-13 * t.max(1.0),
            _ => true,
        };
        let at_target =
            tbar_target.is_finite() && (state.tbar - tbar_target).abs() <= 1e-13 * tbar_target.max(1.0);
        if on_tick || at_target {
            emit(&state, &mut observer);
        }
    }
}

/// Closed-form area law A(tbar) = pi/2 - (pi/2 - a0) e^{4 tbar}.
/// Negative values indicate tbar beyond extinction.
pub fn predicted_area(a0: f64, tbar: f64) -> Result<f64> {
    check_a0(a0)?;
    Ok(PI / 2.0 - (PI / 2.0 - a0) * (4.0 * tbar).exp())
}

/// Extinction time tau = (1/4) ln(pi / (pi - 2 a0)); infinite at the
/// half-area boundary a0 = pi/2.
pub fn extinction_tbar(a0: f64) -> Result<f64> {
    check_a0(a0)?;
    let gap = PI - 2.0 * a0;
    if gap <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(0.25 * (PI / gap).ln())
}

fn check_a0(a0: f64) -> Result<()> {
    if !(a0 > 0.0 && a0 <= PI / 2.0 + 1e-12) {
        return Err(Error::InvalidParameter(format!(
            "initial area must lie in (0, pi/2], got {a0}"
        )));
    }
    Ok(())
}
