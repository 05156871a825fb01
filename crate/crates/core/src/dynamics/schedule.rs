use crate::error::{invalid, require_finite, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScheduleForm {
    /// θ(t) = θ0 + ω·t.
    Uniform { omega: f64 },
    /// θ̇ rises from 0 to `omega_max` along a smoothstep over `ramp_time`,
    /// then stays constant.
    SmoothRamp { omega_max: f64, ramp_time: f64 },
}

/// Prescribed nuclear pseudorotation θ(t) on [0, duration].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PseudorotationSchedule {
    theta0: f64,
    form: ScheduleForm,
    duration: f64,
}

impl PseudorotationSchedule {
    pub fn new(theta0: f64, form: ScheduleForm, duration: f64) -> Result<Self> {
        require_finite("theta0", theta0)?;
        require_finite("duration", duration)?;
        if duration <= 0.0 {
            return Err(invalid("duration", format!("must be > 0, got {duration}")));
        }
        match form {
            ScheduleForm::Uniform { omega } => {
                require_finite("omega", omega)?;
            }
            ScheduleForm::SmoothRamp {
                omega_max,
                ramp_time,
            } => {
                require_finite("omega_max", omega_max)?;
                require_finite("ramp_time", ramp_time)?;
                if ramp_time <= 0.0 {
                    return Err(invalid(
                        "ramp_time",
                        format!("must be > 0, got {ramp_time}"),
                    ));
                }
            }
        }
        Ok(PseudorotationSchedule {
            theta0,
            form,
            duration,
        })
    }

    pub fn uniform(theta0: f64, omega: f64, duration: f64) -> Result<Self> {
        Self::new(theta0, ScheduleForm::Uniform { omega }, duration)
    }

    pub fn stationary(theta0: f64, duration: f64) -> Result<Self> {
        Self::uniform(theta0, 0.0, duration)
    }

    /// Uniform rotation sweeping Δθ = `sweep` at rate ω (sign taken from ω).
    pub fn uniform_sweep(theta0: f64, omega: f64, sweep: f64) -> Result<Self> {
        require_finite("omega", omega)?;
        if omega == 0.0 {
            return Err(invalid("omega", "a sweep needs ω ≠ 0"));
        }
        Self::uniform(theta0, omega, (sweep / omega).abs())
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    pub fn form(&self) -> ScheduleForm {
        self.form
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn theta(&self, t: f64) -> f64 {
        match self.form {
            ScheduleForm::Uniform { omega } => self.theta0 + omega * t,
            ScheduleForm::SmoothRamp {
                omega_max,
                ramp_time,
            } => {
                if t < ramp_time {
                    let x = t / ramp_time;
                    // ∫ (3x² − 2x³) = x³ − x⁴/2
                    self.theta0 + omega_max * ramp_time * (x * x * x - 0.5 * x * x * x * x)
                } else {
                    self.theta0 + omega_max * (0.5 * ramp_time + (t - ramp_time))
                }
            }
        }
    }

    pub fn theta_dot(&self, t: f64) -> f64 {
        match self.form {
            ScheduleForm::Uniform { omega } => omega,
            ScheduleForm::SmoothRamp {
                omega_max,
                ramp_time,
            } => {
                if t < ramp_time {
                    let x = (t / ramp_time).max(0.0);
                    omega_max * x * x * (3.0 - 2.0 * x)
                } else {
                    omega_max
                }
            }
        }
    }

    /// Largest |θ̇| over the schedule.
    pub fn peak_rate(&self) -> f64 {
        match self.form {
            ScheduleForm::Uniform { omega } => omega.abs(),
            ScheduleForm::SmoothRamp { ramp_time, .. } => {
                self.theta_dot(self.duration.min(ramp_time)).abs()
            }
        }
    }
}
