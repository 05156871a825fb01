use std::f64::consts::{PI, TAU};

use anyhow::{bail, Result};
use clap::Args;
use mab_core::dynamics::{
    adiabatic_average, autocorrelation_from_rotation, averaged_closed_form, integrate_model_ode,
    propagate_heisenberg, relative_angle, AutocorrelationTrace, PseudorotationSchedule,
    ScheduleForm,
};
use mab_core::geometric::wrap_phase;
use mab_core::model::adiabaticity_margin;
use serde_json::json;

use super::{model, params_json, xi_or_default, Xi};
use crate::output::{require_positive, Cell, OutputArgs, RegimeViolation, Table};

/// Largest adiabaticity margin accepted under `--strict`.
pub const ADIABATIC_LIMIT: f64 = 0.01;

/// φ samples this close to π are left out of the φ deviation.
const PHI_EXCLUSION: f64 = 0.1;

#[derive(Debug, Args)]
pub struct DynamicsArgs {
    #[arg(long, allow_negative_numbers = true)]
    k: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    xi: Option<Xi>,
    /// Pseudorotation rate θ̇ (peak rate with --ramp)
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    theta0: Option<f64>,
    /// Full loops of θ; sets the duration for uniform schedules
    #[arg(long)]
    loops: Option<f64>,
    /// Run time; required when omega = 0 or with --ramp
    #[arg(long)]
    duration: Option<f64>,
    /// Smoothstep ramp-up time to omega
    #[arg(long)]
    ramp: Option<f64>,
    /// Time step (default: one 64th of the fast period)
    #[arg(long)]
    dt: Option<f64>,
    /// Write every n-th sample
    #[arg(long)]
    stride: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

struct Averaged {
    c_bar: Vec<f64>,
    s_bar: Vec<f64>,
    phi: Vec<f64>,
    one_sided: Vec<bool>,
    window: f64,
}

fn averaged(trace: &AutocorrelationTrace, p: &mab_core::ModelParams) -> Result<Averaged> {
    let avg = adiabatic_average(trace, p)?;
    let phi = relative_angle(&avg)?
        .phi
        .into_iter()
        .map(|v| v.unwrap_or(f64::NAN))
        .collect();
    Ok(Averaged {
        window: avg.window.unwrap_or(f64::NAN),
        one_sided: avg.one_sided,
        c_bar: avg.c_bar.unwrap_or_default(),
        s_bar: avg.s_bar.unwrap_or_default(),
        phi,
    })
}

#[derive(Default)]
struct Deviation {
    c_bar: f64,
    s_bar: f64,
    phi: f64,
}

impl Deviation {
    fn update(&mut self, got: (f64, f64, f64), want: (f64, f64, f64)) {
        self.c_bar = self.c_bar.max((got.0 - want.0).abs());
        self.s_bar = self.s_bar.max((got.1 - want.1).abs());
        if wrap_phase(want.2 - PI).abs() > PHI_EXCLUSION && got.2.is_finite() {
            self.phi = self.phi.max((got.2 - want.2).abs());
        }
    }

    fn json(&self) -> serde_json::Value {
        json!({ "c_bar": self.c_bar, "s_bar": self.s_bar, "phi": self.phi })
    }
}

pub fn run(args: &DynamicsArgs) -> Result<()> {
    let (run, mut cfg) = args.output.resolve()?;
    let k = cfg.take("k", args.k)?.unwrap_or(2.0);
    let xi = xi_or_default(cfg.take("xi", args.xi)?);
    let omega = cfg.take("omega", args.omega)?.unwrap_or(0.01);
    let theta0 = cfg.take("theta0", args.theta0)?.unwrap_or(0.0);
    let loops = cfg.take("loops", args.loops)?;
    let duration = cfg.take("duration", args.duration)?;
    let ramp = cfg.take("ramp", args.ramp)?;
    let dt = cfg.take("dt", args.dt)?;
    let stride = cfg.take("stride", args.stride)?.unwrap_or(1);
    cfg.finish()?;

    let p = model(k, xi, false)?;
    if !omega.is_finite() {
        bail!("`omega` must be finite");
    }
    if stride == 0 {
        bail!("`stride` must be positive");
    }
    let duration = match (duration, loops, ramp) {
        (Some(d), _, _) => require_positive("duration", d)?,
        (None, _, Some(_)) => bail!("--ramp needs an explicit --duration"),
        (None, _, None) if omega == 0.0 => bail!("omega = 0 needs an explicit --duration"),
        (None, l, None) => require_positive("loops", l.unwrap_or(1.0))? * TAU / omega.abs(),
    };
    let form = match ramp {
        Some(t) => ScheduleForm::SmoothRamp {
            omega_max: omega,
            ramp_time: require_positive("ramp", t)?,
        },
        None => ScheduleForm::Uniform { omega },
    };
    let sched = PseudorotationSchedule::new(theta0, form, duration)?;
    let margin = adiabaticity_margin(&p, sched.peak_rate());
    if run.strict && margin > ADIABATIC_LIMIT {
        return Err(RegimeViolation(format!(
            "adiabaticity margin {margin:.3e} exceeds {ADIABATIC_LIMIT}"
        ))
        .into());
    }
    let dt = match dt {
        Some(dt) => require_positive("dt", dt)?,
        None => p.fast_period() / 64.0,
    };

    let rot = propagate_heisenberg(&p, &sched, dt)?;
    let exact = autocorrelation_from_rotation(&rot);
    let exact_avg = averaged(&exact, &p)?;
    let modeled = integrate_model_ode(&p, &sched, dt)?;
    let model_avg = averaged(&modeled, &p)?;

    let mut table = Table::new(vec![
        "t",
        "theta",
        "r_xx",
        "r_xy",
        "r_xz",
        "r_yx",
        "r_yy",
        "r_yz",
        "r_zx",
        "r_zy",
        "r_zz",
        "c_exact",
        "s_exact",
        "c_bar_exact",
        "s_bar_exact",
        "phi_exact",
        "c_model",
        "s_model",
        "c_bar_model",
        "s_bar_model",
        "phi_model",
        "c_bar_closed",
        "s_bar_closed",
        "phi_closed",
        "one_sided",
    ]);
    let xi_v = xi.value();
    let (mut dev_model, mut dev_exact) = (Deviation::default(), Deviation::default());
    for i in 0..exact.len() {
        let t = exact.times[i];
        let delta = sched.theta(t) - theta0;
        let (cc, sc) = averaged_closed_form(&p, delta);
        let closed = (cc, sc, 2.0 * xi_v * delta);
        dev_model.update(
            (model_avg.c_bar[i], model_avg.s_bar[i], model_avg.phi[i]),
            closed,
        );
        dev_exact.update(
            (exact_avg.c_bar[i], exact_avg.s_bar[i], exact_avg.phi[i]),
            closed,
        );
        if i % stride != 0 {
            continue;
        }
        let r = &rot.rotations[i];
        let mut row: Vec<Cell> = vec![t.into(), sched.theta(t).into()];
        for a in 0..3 {
            for b in 0..3 {
                row.push(r[(a, b)].into());
            }
        }
        row.extend(
            [
                exact.c[i],
                exact.s[i],
                exact_avg.c_bar[i],
                exact_avg.s_bar[i],
                exact_avg.phi[i],
                modeled.c[i],
                modeled.s[i],
                model_avg.c_bar[i],
                model_avg.s_bar[i],
                model_avg.phi[i],
                closed.0,
                closed.1,
                closed.2,
            ]
            .map(Cell::from),
        );
        row.push(Cell::Int(i64::from(exact_avg.one_sided[i])));
        table.push(row);
    }
    run.write_table(&table)?;

    let last = exact.len() - 1;
    let (form_name, ramp_time) = match ramp {
        Some(t) => ("smooth_ramp", Some(t)),
        None => ("uniform", None),
    };
    run.write_summary(
        "dynamics",
        json!({
            "model": params_json(&p),
            "schedule": { "form": form_name, "omega": omega, "theta0": theta0, "duration": duration, "ramp_time": ramp_time },
            "dt": dt,
            "stride": stride,
        }),
        json!({
            "adiabaticity": margin,
            "adiabaticity_limit": ADIABATIC_LIMIT,
            "bo_regime": mab_core::model::bo_regime_margin(&p),
        }),
        json!({
            "steps": last,
            "averaging_window": { "length": exact_avg.window, "alignment": "centered",
                "one_sided_samples": exact_avg.one_sided.iter().filter(|&&f| f).count() },
            "max_deviation_model_vs_closed_form": dev_model.json(),
            "max_deviation_exact_vs_closed_form": dev_exact.json(),
            "phi_exclusion_near_pi": PHI_EXCLUSION,
            "final_phi": { "model": model_avg.phi[last], "exact": exact_avg.phi[last], "closed_form": 2.0 * xi_v * (sched.theta(exact.times[last]) - theta0) },
            "max_orthogonality_drift": rot.max_orthogonality_drift,
        }),
    )
}
