use nalgebra::{Matrix3, Vector3};

use super::{step_count, validate_options, PropagationOptions, PseudorotationSchedule};
use super::{GAUSS_C1, GAUSS_C2, MAGNUS_COMMUTATOR};
use crate::error::Result;
use crate::params::ModelParams;

/// Heisenberg transfer matrices, σ_i(t) = Σ_j R_ij(t) σ_j(0).
#[derive(Debug, Clone)]
pub struct RotationTrajectory {
    pub times: Vec<f64>,
    pub rotations: Vec<Matrix3<f64>>,
    /// Largest ‖RᵀR − I‖_max seen before any re-orthonormalization.
    pub max_orthogonality_drift: f64,
}

/// Precession vector Ω(t) = (2k·r_ref^(2|ξ|), 0, −2ξθ̇(t)); σ̇ = Ω × σ.
fn precession(params: &ModelParams, schedule: &PseudorotationSchedule, t: f64) -> Vector3<f64> {
    Vector3::new(
        params.fast_frequency(),
        0.0,
        -2.0 * params.xi().value() * schedule.theta_dot(t),
    )
}

/// exp([w]×) by Rodrigues' formula.
fn rotation_exp(w: Vector3<f64>) -> Matrix3<f64> {
    let angle = w.norm();
    if angle == 0.0 {
        return Matrix3::identity();
    }
    let k = w.cross_matrix() / angle;
    Matrix3::identity() + k * angle.sin() + k * k * (1.0 - angle.cos())
}

fn orthogonality_error(r: &Matrix3<f64>) -> f64 {
    (r.transpose() * r - Matrix3::identity()).amax()
}

/// Nearest orthogonal matrix (polar factor) by Newton-Schulz iteration;
/// assumes `r` is already close to orthogonal.
fn project_orthogonal(r: &Matrix3<f64>) -> Matrix3<f64> {
    let mut q = *r;
    for _ in 0..3 {
        q = q * (Matrix3::identity() * 3.0 - q.transpose() * q) * 0.5;
    }
    q
}

pub fn propagate_heisenberg(
    params: &ModelParams,
    schedule: &PseudorotationSchedule,
    dt: f64,
) -> Result<RotationTrajectory> {
    propagate_heisenberg_with(params, schedule, dt, &PropagationOptions::default())
}

/// Integrates Ṙ = [Ω(t)]× R with a fourth-order Magnus step, R(0) = I.
pub fn propagate_heisenberg_with(
    params: &ModelParams,
    schedule: &PseudorotationSchedule,
    dt: f64,
    opts: &PropagationOptions,
) -> Result<RotationTrajectory> {
    validate_options(opts)?;
    let steps = step_count(params, schedule, dt)?;
    let capacity = steps / opts.record_every + 1;
    let mut times = Vec::with_capacity(capacity);
    let mut rotations = Vec::with_capacity(capacity);
    let mut r = Matrix3::identity();
    times.push(0.0);
    rotations.push(r);

    let mut max_drift = 0.0_f64;
    for step in 1..=steps {
        let t = (step - 1) as f64 * dt;
        let w1 = precession(params, schedule, t + GAUSS_C1 * dt);
        let w2 = precession(params, schedule, t + GAUSS_C2 * dt);
        let w = (w1 + w2) * (0.5 * dt) + w2.cross(&w1) * (MAGNUS_COMMUTATOR * dt * dt);
        r = rotation_exp(w) * r;

        let project = opts.renormalize_every > 0 && step % opts.renormalize_every == 0;
        if project || step == steps || step % opts.record_every == 0 {
            max_drift = max_drift.max(orthogonality_error(&r));
            if project {
                r = project_orthogonal(&r);
            }
        }
        if step % opts.record_every == 0 {
            times.push(step as f64 * dt);
            rotations.push(r);
        }
    }
    Ok(RotationTrajectory {
        times,
        rotations,
        max_orthogonality_drift: max_drift,
    })
}
