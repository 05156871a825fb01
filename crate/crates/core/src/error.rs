use thiserror::Error;

/// Errors raised by the model, dynamics, phase and spectrum routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MabError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{what} is singular at the conical intersection (r = 0)")]
    Singularity { what: &'static str },

    #[error("time step {dt} exceeds the fast-scale bound {max} (π/(25·ω_fast))")]
    StepTooLarge { dt: f64, max: f64 },

    #[error(
        "insufficient sampling: {per_period:.2} samples per fast period, need at least {required}"
    )]
    InsufficientSampling { per_period: f64, required: usize },

    #[error("states are orthogonal to within tolerance (|overlap| = {overlap:e})")]
    OrthogonalStates { overlap: f64 },

    #[error("geometric phase undefined at Δθ = {delta_theta} (π-jump locus)")]
    UndefinedPhase { delta_theta: f64 },

    #[error("path segment {segment} subtends {angle:.4} rad about the origin; resample the path")]
    PathTooCoarse { segment: usize, angle: f64 },

    #[error("{0}")]
    Mismatch(String),
}

pub type Result<T> = std::result::Result<T, MabError>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> MabError {
    MabError::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

pub(crate) fn require_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(invalid(name, format!("must be finite, got {value}")))
    }
}
