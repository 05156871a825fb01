use nalgebra::Vector3;

use super::{step_count, validate_options, PropagationOptions, PseudorotationSchedule};
use super::{GAUSS_C1, GAUSS_C2, MAGNUS_COMMUTATOR};
use crate::error::{invalid, Result};
use crate::gauge::GaugeSpec;
use crate::model::{frame_rotation, lower_state};
use crate::params::ModelParams;
use crate::spin::{inner, su2_exp, SpinOperator, SpinState};

/// Below this overlap modulus the total phase is not defined.
const OVERLAP_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    /// Diabatic frame, H_e(r_ref, θ(t)).
    Lab,
    /// Co-rotating frame, k·r_ref^(2|ξ|)·σx − ξθ̇(t)·σz.
    Rotating,
}

#[derive(Debug, Clone)]
pub struct SpinTrajectory {
    pub frame: Frame,
    pub times: Vec<f64>,
    pub states: Vec<SpinState>,
    /// ⟨ψ(t)|H(t)|ψ(t)⟩ at each stored sample.
    pub energies: Vec<f64>,
    /// Largest |‖ψ‖ − 1| seen, measured before any renormalization.
    pub max_norm_drift: f64,
}

/// Bloch vector a(t) of the Hamiltonian H(t) = a(t)·σ.
fn hamiltonian_vector(
    params: &ModelParams,
    schedule: &PseudorotationSchedule,
    frame: Frame,
    t: f64,
) -> Vector3<f64> {
    let g = params.coupling(params.r_ref());
    let xi = params.xi().value();
    match frame {
        Frame::Lab => {
            let (s, c) = (2.0 * xi * schedule.theta(t)).sin_cos();
            Vector3::new(g * c, g * s, 0.0)
        }
        Frame::Rotating => Vector3::new(g, 0.0, -xi * schedule.theta_dot(t)),
    }
}

/// Default initial state: the lower adiabatic state at θ0 (α = 0), expressed
/// in the requested frame.
fn initial_state(
    params: &ModelParams,
    schedule: &PseudorotationSchedule,
    frame: Frame,
) -> SpinState {
    let xi = params.xi();
    let lab = lower_state(schedule.theta0(), xi, &GaugeSpec::Zero);
    match frame {
        Frame::Lab => lab,
        Frame::Rotating => frame_rotation(schedule.theta0(), xi).adjoint() * lab,
    }
}

/// Propagates the lower adiabatic state with default options.
pub fn propagate_tdse(
    params: &ModelParams,
    schedule: &PseudorotationSchedule,
    dt: f64,
    frame: Frame,
) -> Result<SpinTrajectory> {
    propagate_tdse_with(
        params,
        schedule,
        dt,
        frame,
        None,
        &PropagationOptions::default(),
    )
}

/// Fourth-order Magnus integration with closed-form SU(2) exponentials, so
/// each step is unitary to rounding.
pub fn propagate_tdse_with(
    params: &ModelParams,
    schedule: &PseudorotationSchedule,
    dt: f64,
    frame: Frame,
    initial: Option<SpinState>,
    opts: &PropagationOptions,
) -> Result<SpinTrajectory> {
    validate_options(opts)?;
    let steps = step_count(params, schedule, dt)?;
    let mut psi = match initial {
        Some(s) => {
            let n = s.norm();
            if !n.is_finite() || n == 0.0 {
                return Err(invalid("initial", "state must be finite and nonzero"));
            }
            s.normalize()
        }
        None => initial_state(params, schedule, frame),
    };

    let energy = |t: f64, psi: &SpinState| {
        SpinOperator::from_bloch(0.0, hamiltonian_vector(params, schedule, frame, t))
            .expectation(psi)
    };

    let capacity = steps / opts.record_every + 1;
    let mut times = Vec::with_capacity(capacity);
    let mut states = Vec::with_capacity(capacity);
    let mut energies = Vec::with_capacity(capacity);
    times.push(0.0);
    states.push(psi);
    energies.push(energy(0.0, &psi));

    let mut max_norm_drift = 0.0_f64;
    for step in 1..=steps {
        let t = (step - 1) as f64 * dt;
        let a1 = hamiltonian_vector(params, schedule, frame, t + GAUSS_C1 * dt);
        let a2 = hamiltonian_vector(params, schedule, frame, t + GAUSS_C2 * dt);
        let w = (a1 + a2) * (0.5 * dt) + a2.cross(&a1) * (2.0 * MAGNUS_COMMUTATOR * dt * dt);
        psi = su2_exp(w) * psi;

        let t_new = step as f64 * dt;
        let renorm = opts.renormalize_every > 0 && step % opts.renormalize_every == 0;
        if renorm || step == steps || step % opts.record_every == 0 {
            let n = psi.norm();
            max_norm_drift = max_norm_drift.max((n - 1.0).abs());
            if renorm {
                psi.normalize_mut();
            }
        }
        if step % opts.record_every == 0 {
            times.push(t_new);
            states.push(psi);
            energies.push(energy(t_new, &psi));
        }
    }

    Ok(SpinTrajectory {
        frame,
        times,
        states,
        energies,
        max_norm_drift,
    })
}

/// Total phase minus dynamical phase, γ(t) = arg⟨ψ(0)|ψ(t)⟩ + ∫⟨ψ|H|ψ⟩dt,
/// on (−π, π]. `None` where |⟨ψ(0)|ψ(t)⟩| < 1e-6.
pub fn geometric_phase_from_tdse(traj: &SpinTrajectory) -> Result<Vec<Option<f64>>> {
    if traj.frame != Frame::Lab {
        return Err(invalid(
            "frame",
            "geometric phase needs a lab-frame trajectory",
        ));
    }
    if traj.states.is_empty() || traj.energies.len() != traj.states.len() {
        return Err(invalid(
            "trajectory",
            "states and energies must be non-empty and aligned",
        ));
    }
    let psi0 = traj.states[0];
    let mut dynamical = 0.0;
    let mut out = Vec::with_capacity(traj.states.len());
    for i in 0..traj.states.len() {
        if i > 0 {
            let h = traj.times[i] - traj.times[i - 1];
            dynamical += 0.5 * h * (traj.energies[i] + traj.energies[i - 1]);
        }
        let overlap = inner(&psi0, &traj.states[i]);
        if overlap.norm() < OVERLAP_FLOOR {
            out.push(None);
        } else {
            out.push(Some(crate::geometric::wrap_phase(
                overlap.arg() + dynamical,
            )));
        }
    }
    Ok(out)
}
