//! Electronic dynamics under a prescribed pseudorotation θ(t), at the frozen
//! radius `r_ref`: Schrödinger and Heisenberg propagation, autocorrelation
//! observables, adiabatic averages and the trajectory geometric phase.

mod autocorrelation;
mod heisenberg;
mod schedule;
mod tdse;

pub use autocorrelation::{
    adiabatic_average, autocorrelation_from_rotation, averaged_closed_form, integrate_model_ode,
    relative_angle, AngleSeries, AutocorrelationTrace, WindowAlignment, MIN_SAMPLES_PER_PERIOD,
};
pub use heisenberg::{propagate_heisenberg, propagate_heisenberg_with, RotationTrajectory};
pub use schedule::{PseudorotationSchedule, ScheduleForm};
pub use tdse::{
    geometric_phase_from_tdse, propagate_tdse, propagate_tdse_with, Frame, SpinTrajectory,
};

use crate::error::{invalid, require_finite, MabError, Result};
use crate::params::ModelParams;

/// Gauss-Legendre nodes of the fourth-order Magnus step.
pub(crate) const GAUSS_C1: f64 = 0.5 - 0.288_675_134_594_812_9;
pub(crate) const GAUSS_C2: f64 = 0.5 + 0.288_675_134_594_812_9;
/// √3/12.
pub(crate) const MAGNUS_COMMUTATOR: f64 = 0.144_337_567_297_406_43;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PropagationOptions {
    /// Store every n-th step (the initial sample is always stored).
    pub record_every: usize,
    /// Renormalize / re-orthonormalize every n steps; 0 disables.
    pub renormalize_every: usize,
}

impl Default for PropagationOptions {
    fn default() -> Self {
        PropagationOptions {
            record_every: 1,
            renormalize_every: 1000,
        }
    }
}

/// Validates the step against the fast scale and returns the step count.
pub(crate) fn step_count(
    params: &ModelParams,
    schedule: &PseudorotationSchedule,
    dt: f64,
) -> Result<usize> {
    require_finite("dt", dt)?;
    if dt <= 0.0 {
        return Err(invalid("dt", format!("must be > 0, got {dt}")));
    }
    let max = params.max_step();
    if dt > max * (1.0 + 1e-12) {
        return Err(MabError::StepTooLarge { dt, max });
    }
    Ok((schedule.duration() / dt + 1e-9).floor() as usize)
}

pub(crate) fn validate_options(opts: &PropagationOptions) -> Result<()> {
    if opts.record_every == 0 {
        return Err(invalid("record_every", "must be ≥ 1"));
    }
    Ok(())
}
