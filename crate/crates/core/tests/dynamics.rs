use std::f64::consts::{FRAC_PI_2, PI};

use mab_core::dynamics::{
    adiabatic_average, autocorrelation_from_rotation, averaged_closed_form,
    geometric_phase_from_tdse, integrate_model_ode, propagate_heisenberg,
    propagate_heisenberg_with, propagate_tdse, propagate_tdse_with, relative_angle, Frame,
    PropagationOptions, PseudorotationSchedule, RotationTrajectory, ScheduleForm,
};
use mab_core::model::{adiabaticity_margin, lower_state};
use mab_core::spin::{bloch_vector, inner};
use mab_core::{EffectOrder, GaugeSpec, MabError, ModelParams, SpinState, C64};
use nalgebra::{Matrix2, Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn linear(k: f64) -> ModelParams {
    ModelParams::new(k, EffectOrder::LINEAR).unwrap()
}

fn random_state(rng: &mut ChaCha8Rng) -> SpinState {
    let v = SpinState::new(
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
    );
    v / C64::new(v.norm(), 0.0)
}

// plain RK4 on iψ̇ = H(t)ψ in the lab frame, written out independently
fn rk4_lab(
    params: &ModelParams,
    sched: &PseudorotationSchedule,
    dt: f64,
    psi0: SpinState,
) -> SpinState {
    let g = params.coupling(params.r_ref());
    let xi = params.xi().value();
    let h = |t: f64| {
        let a = 2.0 * xi * sched.theta(t);
        let off = C64::new(g * a.cos(), -g * a.sin());
        Matrix2::new(C64::new(0.0, 0.0), off, off.conj(), C64::new(0.0, 0.0))
    };
    let f = |t: f64, psi: &SpinState| -> SpinState { (h(t) * psi) * C64::new(0.0, -1.0) };
    let steps = (sched.duration() / dt).round() as usize;
    let dt = sched.duration() / steps as f64;
    let mut psi = psi0;
    for i in 0..steps {
        let t = i as f64 * dt;
        let k1 = f(t, &psi);
        let k2 = f(t + 0.5 * dt, &(psi + k1 * C64::new(0.5 * dt, 0.0)));
        let k3 = f(t + 0.5 * dt, &(psi + k2 * C64::new(0.5 * dt, 0.0)));
        let k4 = f(t + dt, &(psi + k3 * C64::new(dt, 0.0)));
        psi +=
            (k1 + k2 * C64::new(2.0, 0.0) + k3 * C64::new(2.0, 0.0) + k4) * C64::new(dt / 6.0, 0.0);
    }
    psi
}

#[test]
fn tdse_matches_independent_fine_step_solution() {
    let p = linear(1.0);
    let sched = PseudorotationSchedule::uniform_sweep(0.3, 0.02, FRAC_PI_2).unwrap();
    let dt = p.fast_period() / 64.0;
    let traj = propagate_tdse(&p, &sched, dt, Frame::Lab).unwrap();
    let reference = rk4_lab(&p, &sched, dt / 40.0, traj.states[0]);
    let last = traj.states.last().unwrap();
    assert!(
        (last - reference).norm() < 1e-6,
        "{}",
        (last - reference).norm()
    );
}

#[test]
fn adiabatic_following_fidelity() {
    let p = ModelParams::new(3.0, EffectOrder::LINEAR).unwrap();
    let omega = 2e-3;
    let sched = PseudorotationSchedule::uniform_sweep(0.0, omega, FRAC_PI_2).unwrap();
    let opts = PropagationOptions {
        record_every: 50,
        renormalize_every: 1000,
    };
    let traj =
        propagate_tdse_with(&p, &sched, p.fast_period() / 64.0, Frame::Lab, None, &opts).unwrap();
    let margin = adiabaticity_margin(&p, omega);
    for (t, psi) in traj.times.iter().zip(&traj.states) {
        let lower = lower_state(sched.theta(*t), p.xi(), &GaugeSpec::Zero);
        let fidelity = inner(&lower, psi).norm_sqr();
        assert!(
            fidelity >= 1.0 - 10.0 * margin * margin,
            "t = {t}, fidelity {fidelity}"
        );
    }
    assert!(traj.max_norm_drift <= 1e-9);
}

#[test]
fn tdse_phase_tracks_closed_form() {
    let p = ModelParams::new(3.0, EffectOrder::LINEAR).unwrap();
    let sched = PseudorotationSchedule::uniform_sweep(0.0, 5e-3, 0.6 * PI).unwrap();
    let opts = PropagationOptions {
        record_every: 64,
        renormalize_every: 1000,
    };
    let traj =
        propagate_tdse_with(&p, &sched, p.fast_period() / 64.0, Frame::Lab, None, &opts).unwrap();
    let phases = geometric_phase_from_tdse(&traj).unwrap();
    for (t, g) in traj.times.iter().zip(&phases) {
        let g = g.expect("overlap stays finite below Δθ = π");
        assert!(g.abs() < 1e-2, "t = {t}, γ = {g}");
    }
}

#[test]
fn static_precession_closed_form() {
    let p = linear(2.0);
    let sched = PseudorotationSchedule::stationary(0.4, 30.0).unwrap();
    let rot = propagate_heisenberg(&p, &sched, p.fast_period() / 64.0).unwrap();
    let trace = autocorrelation_from_rotation(&rot);
    let wf = p.fast_frequency();
    for i in 0..trace.len() {
        let t = trace.times[i];
        assert!((trace.c[i] - 0.5 * (1.0 + (wf * t).cos())).abs() < 1e-6);
        assert!(trace.s[i].abs() < 1e-6);
    }
}

#[test]
fn autocorrelation_of_pure_z_rotation() {
    // Ω = (0, 0, −φ̇) generates R = R_z(−φ)
    let angles: Vec<f64> = (0..50).map(|i| -3.0 + 0.13 * i as f64).collect();
    let rotations = angles
        .iter()
        .map(|&phi| {
            let (s, c) = (-phi).sin_cos();
            Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
        })
        .collect();
    let traj = RotationTrajectory {
        times: angles.clone(),
        rotations,
        max_orthogonality_drift: 0.0,
    };
    let trace = autocorrelation_from_rotation(&traj);
    for (i, phi) in angles.iter().enumerate() {
        assert!((trace.c[i] - phi.cos()).abs() < 1e-15);
        assert!((trace.s[i] + phi.sin()).abs() < 1e-15);
    }
}

#[test]
fn heisenberg_and_schrodinger_pictures_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for xi in [EffectOrder::LINEAR, EffectOrder::QUADRATIC] {
        let p = ModelParams::new(1.5, xi).unwrap();
        let form = ScheduleForm::SmoothRamp {
            omega_max: 0.05,
            ramp_time: 15.0,
        };
        let sched = PseudorotationSchedule::new(0.2, form, 40.0).unwrap();
        let dt = p.fast_period() / 64.0;
        let rot = propagate_heisenberg(&p, &sched, dt).unwrap();
        for _ in 0..4 {
            let psi0 = random_state(&mut rng);
            let traj = propagate_tdse_with(
                &p,
                &sched,
                dt,
                Frame::Rotating,
                Some(psi0),
                &PropagationOptions::default(),
            )
            .unwrap();
            let n0 = bloch_vector(&psi0);
            for (r, psi) in rot.rotations.iter().zip(&traj.states) {
                let diff: Vector3<f64> = r * n0 - bloch_vector(psi);
                assert!(diff.amax() < 1e-6);
            }
        }
    }
}

#[test]
fn rotation_autocorrelations_are_bounded() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let k = rng.gen_range(0.5..3.0);
        let omega = rng.gen_range(-0.2..0.2);
        let p = linear(k);
        let sched = PseudorotationSchedule::uniform(rng.gen_range(-PI..PI), omega, 30.0).unwrap();
        let rot = propagate_heisenberg(&p, &sched, p.fast_period() / 64.0).unwrap();
        let trace = autocorrelation_from_rotation(&rot);
        for (c, s) in trace.c.iter().zip(&trace.s) {
            assert!(c * c + s * s <= 1.0 + 1e-8);
        }
    }
}

#[test]
fn model_ode_is_fourth_order() {
    let p = linear(1.0);
    let sched = PseudorotationSchedule::uniform(0.0, 0.05, 20.0).unwrap();
    let end = |dt: f64| {
        let tr = integrate_model_ode(&p, &sched, dt).unwrap();
        (*tr.c.last().unwrap(), *tr.s.last().unwrap())
    };
    let reference = end(0.0025);
    let err = |dt: f64| {
        let (c, s) = end(dt);
        (c - reference.0).hypot(s - reference.1)
    };
    let ratio = err(0.04) / err(0.02);
    assert!((12.0..20.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn closed_form_solves_averaged_system() {
    let h = 1e-3;
    for xi in [EffectOrder::LINEAR, EffectOrder::QUADRATIC] {
        let p = ModelParams::new(1.0, xi).unwrap();
        let x = xi.value();
        for i in 0..40 {
            let d = -4.0 + 0.2 * i as f64;
            let at = |o: f64| averaged_closed_form(&p, d + o * h);
            let deriv = |f: &dyn Fn(f64) -> f64| {
                (f(-2.0) - 8.0 * f(-1.0) + 8.0 * f(1.0) - f(2.0)) / (12.0 * h)
            };
            let dc = deriv(&|o| at(o).0);
            let ds = deriv(&|o| at(o).1);
            let (c, s) = at(0.0);
            assert!((dc - 2.0 * x * s).abs() < 1e-10);
            assert!((ds - (-2.0 * x * c + x)).abs() < 1e-10);
        }
    }
}

#[test]
fn averaged_model_follows_closed_form() {
    let p = linear(2.0);
    let sched = PseudorotationSchedule::uniform_sweep(0.0, 0.02, PI).unwrap();
    let trace = integrate_model_ode(&p, &sched, p.fast_period() / 64.0).unwrap();
    let avg = adiabatic_average(&trace, &p).unwrap();
    let (cb, sb) = (avg.c_bar.as_ref().unwrap(), avg.s_bar.as_ref().unwrap());
    for i in 0..avg.len() {
        let (c, s) = averaged_closed_form(&p, sched.theta(avg.times[i]) - sched.theta0());
        assert!((cb[i] - c).abs() < 2e-2 && (sb[i] - s).abs() < 2e-2);
    }
    let angle = relative_angle(&avg).unwrap();
    assert!(angle.phi.iter().all(Option::is_some));
}

#[test]
fn coarse_inputs_are_refused() {
    let p = linear(2.0);
    let sched = PseudorotationSchedule::uniform(0.0, 0.01, 10.0).unwrap();
    let err = propagate_heisenberg(&p, &sched, 2.0 * p.max_step()).unwrap_err();
    assert!(matches!(err, MabError::StepTooLarge { .. }));

    let opts = PropagationOptions {
        record_every: 8,
        renormalize_every: 1000,
    };
    let rot = propagate_heisenberg_with(&p, &sched, p.fast_period() / 64.0, &opts).unwrap();
    let err = adiabatic_average(&autocorrelation_from_rotation(&rot), &p).unwrap_err();
    assert!(matches!(err, MabError::InsufficientSampling { .. }));
}
