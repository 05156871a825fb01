use std::f64::consts::PI;

use super::{step_count, PseudorotationSchedule, RotationTrajectory};
use crate::error::{invalid, MabError, Result};
use crate::params::ModelParams;

/// Minimum samples per fast period for [`adiabatic_average`].
pub const MIN_SAMPLES_PER_PERIOD: usize = 20;

/// Below this length of (2C̄ − 1, −2S̄) the relative angle is undefined.
const ANGLE_RADIUS_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowAlignment {
    Centered,
}

/// C(t), S(t) and, once averaged, their one-fast-period sliding means.
#[derive(Debug, Clone)]
pub struct AutocorrelationTrace {
    pub times: Vec<f64>,
    pub c: Vec<f64>,
    pub s: Vec<f64>,
    pub c_bar: Option<Vec<f64>>,
    pub s_bar: Option<Vec<f64>>,
    /// Averaging window length (one fast period), when averaged.
    pub window: Option<f64>,
    pub alignment: WindowAlignment,
    /// Samples whose window had to be shifted to one side of the endpoint.
    pub one_sided: Vec<bool>,
}

impl AutocorrelationTrace {
    fn raw(times: Vec<f64>, c: Vec<f64>, s: Vec<f64>) -> Self {
        let n = times.len();
        AutocorrelationTrace {
            times,
            c,
            s,
            c_bar: None,
            s_bar: None,
            window: None,
            alignment: WindowAlignment::Centered,
            one_sided: vec![false; n],
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// C = ½(R_xx + R_yy), S = ½(R_yx − R_xy).
pub fn autocorrelation_from_rotation(traj: &RotationTrajectory) -> AutocorrelationTrace {
    let (c, s) = traj
        .rotations
        .iter()
        .map(|r| (0.5 * (r[(0, 0)] + r[(1, 1)]), 0.5 * (r[(1, 0)] - r[(0, 1)])))
        .unzip();
    AutocorrelationTrace::raw(traj.times.clone(), c, s)
}

/// Classical RK4 on the two-time-scale system
///
///   Ċ =  2ξθ̇ S − ξθ̇ sin(ω_f t)
///   Ṡ = −2ξθ̇ C + ξθ̇ (1 − cos(ω_f t))
///
/// with ω_f the fast precession frequency, C(0) = 1, S(0) = 0.
pub fn integrate_model_ode(
    params: &ModelParams,
    schedule: &PseudorotationSchedule,
    dt: f64,
) -> Result<AutocorrelationTrace> {
    let steps = step_count(params, schedule, dt)?;
    let xi = params.xi().value();
    let wf = params.fast_frequency();
    let rhs = |t: f64, c: f64, s: f64| {
        let e = xi * schedule.theta_dot(t);
        let (sn, cs) = (wf * t).sin_cos();
        (2.0 * e * s - e * sn, -2.0 * e * c + e * (1.0 - cs))
    };

    let mut times = Vec::with_capacity(steps + 1);
    let mut cv = Vec::with_capacity(steps + 1);
    let mut sv = Vec::with_capacity(steps + 1);
    let (mut c, mut s) = (1.0, 0.0);
    times.push(0.0);
    cv.push(c);
    sv.push(s);
    for step in 0..steps {
        let t = step as f64 * dt;
        let h = 0.5 * dt;
        let k1 = rhs(t, c, s);
        let k2 = rhs(t + h, c + h * k1.0, s + h * k1.1);
        let k3 = rhs(t + h, c + h * k2.0, s + h * k2.1);
        let k4 = rhs(t + dt, c + dt * k3.0, s + dt * k3.1);
        c += dt / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        s += dt / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        times.push((step + 1) as f64 * dt);
        cv.push(c);
        sv.push(s);
    }
    Ok(AutocorrelationTrace::raw(times, cv, sv))
}

/// ∫ of the piecewise-linear interpolant of `f` between fractional indices.
fn linear_integral(f: &[f64], lo: f64, hi: f64) -> f64 {
    let interp = |x: f64| {
        let i = (x.floor() as usize).min(f.len() - 2);
        let frac = x - i as f64;
        f[i] + frac * (f[i + 1] - f[i])
    };
    let first = lo.ceil() as usize;
    let last = hi.floor() as usize;
    if first > last {
        return 0.5 * (interp(lo) + interp(hi)) * (hi - lo);
    }
    let mut acc = 0.5 * (interp(lo) + f[first]) * (first as f64 - lo);
    for j in first..last {
        acc += 0.5 * (f[j] + f[j + 1]);
    }
    acc + 0.5 * (f[last] + interp(hi)) * (hi - last as f64)
}

/// Sliding mean over exactly one fast period T_f, centered on each sample;
/// near the ends the window is shifted inward and the sample is flagged.
///
/// When T_f is an integer number of steps the windows are node-aligned
/// (odd lengths average the two half-step-shifted windows), so the
/// trapezoid sum annihilates harmonics of the fast frequency exactly.
pub fn adiabatic_average(
    trace: &AutocorrelationTrace,
    params: &ModelParams,
) -> Result<AutocorrelationTrace> {
    let n = trace.len();
    if n < 2 {
        return Err(MabError::InsufficientSampling {
            per_period: 0.0,
            required: MIN_SAMPLES_PER_PERIOD,
        });
    }
    let dt = trace.times[1] - trace.times[0];
    let span = trace.times[n - 1] - trace.times[0];
    if dt <= 0.0 || ((span / dt) - (n - 1) as f64).abs() > 1e-6 * n as f64 {
        return Err(invalid("trace", "averaging needs a uniform time grid"));
    }
    let period = params.fast_period();
    let w = period / dt;
    if w < MIN_SAMPLES_PER_PERIOD as f64 {
        return Err(MabError::InsufficientSampling {
            per_period: w,
            required: MIN_SAMPLES_PER_PERIOD,
        });
    }
    if w > (n - 1) as f64 * (1.0 + 1e-12) {
        return Err(invalid("trace", "trace is shorter than one fast period"));
    }
    let w = w.min((n - 1) as f64);
    let aligned = (w - w.round()).abs() < 1e-6 * w;
    let last = (n - 1) as f64;

    let len = if aligned { w.round() } else { w };
    let (h_lo, h_hi) = if aligned {
        let wi = len as usize;
        ((wi / 2) as f64, (wi - wi / 2) as f64)
    } else {
        (0.5 * w, 0.5 * w)
    };
    // One or two [lo, hi] windows per sample, in index units.
    let windows = |i: usize| -> ([(f64, f64); 2], usize, bool) {
        let x = i as f64;
        if x - h_hi < 0.0 {
            ([(0.0, len); 2], 1, true)
        } else if x + h_hi > last {
            ([(last - len, last); 2], 1, true)
        } else if h_lo != h_hi {
            ([(x - h_lo, x + h_hi), (x - h_hi, x + h_lo)], 2, false)
        } else {
            ([(x - h_lo, x + h_hi); 2], 1, false)
        }
    };

    let mut c_bar = Vec::with_capacity(n);
    let mut s_bar = Vec::with_capacity(n);
    let mut one_sided = Vec::with_capacity(n);
    for i in 0..n {
        let (ws, count, flagged) = windows(i);
        let mean = |f: &[f64]| {
            ws[..count]
                .iter()
                .map(|&(lo, hi)| linear_integral(f, lo, hi) / (hi - lo))
                .sum::<f64>()
                / count as f64
        };
        c_bar.push(mean(&trace.c));
        s_bar.push(mean(&trace.s));
        one_sided.push(flagged);
    }

    Ok(AutocorrelationTrace {
        times: trace.times.clone(),
        c: trace.c.clone(),
        s: trace.s.clone(),
        c_bar: Some(c_bar),
        s_bar: Some(s_bar),
        window: Some(period),
        alignment: WindowAlignment::Centered,
        one_sided,
    })
}

/// C̄ = ½(1 + cos 2ξΔθ), S̄ = −½ sin 2ξΔθ.
pub fn averaged_closed_form(params: &ModelParams, delta_theta: f64) -> (f64, f64) {
    let phi = 2.0 * params.xi().value() * delta_theta;
    let (s, c) = phi.sin_cos();
    (0.5 * (1.0 + c), -0.5 * s)
}

/// φ(t) series with `None` marking samples where it is undefined.
#[derive(Debug, Clone)]
pub struct AngleSeries {
    pub times: Vec<f64>,
    pub phi: Vec<Option<f64>>,
}

/// φ = atan2(−2S̄, 2C̄ − 1), continuously unwrapped (jump threshold π).
pub fn relative_angle(trace: &AutocorrelationTrace) -> Result<AngleSeries> {
    let (Some(c_bar), Some(s_bar)) = (&trace.c_bar, &trace.s_bar) else {
        return Err(invalid("trace", "relative angle needs averaged C̄ and S̄"));
    };
    let mut prev: Option<f64> = None;
    let phi = c_bar
        .iter()
        .zip(s_bar)
        .map(|(&cb, &sb)| {
            let (x, y) = (2.0 * cb - 1.0, -2.0 * sb);
            if x.hypot(y) < ANGLE_RADIUS_FLOOR {
                return None;
            }
            let raw = y.atan2(x);
            let value = match prev {
                None => raw,
                Some(p) => raw + 2.0 * PI * ((p - raw) / (2.0 * PI)).round(),
            };
            prev = Some(value);
            Some(value)
        })
        .collect();
    Ok(AngleSeries {
        times: trace.times.clone(),
        phi,
    })
}
