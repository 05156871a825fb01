use std::f64::consts::TAU;
use std::str::FromStr;

use anyhow::{bail, Result};
use clap::Args;
use mab_core::geometric::{
    bo_state, closed_form_phase, detect_phase_jumps, noncyclic_berry_phase, wrap_phase,
};
use mab_core::spin::inner;
use mab_core::{GaugeSpec, MabError};
use serde_json::json;

use super::{xi_or_default, Gauge, Xi};
use crate::output::{OutputArgs, Table};

/// `start:end:step` over Δθ, end inclusive.
#[derive(Debug, Clone, Copy)]
pub struct Sweep {
    start: f64,
    end: f64,
    step: f64,
}

impl Sweep {
    fn values(&self) -> impl Iterator<Item = f64> + '_ {
        let n = ((self.end - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(move |i| self.start + i as f64 * self.step)
    }
}

impl FromStr for Sweep {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let parts: Vec<f64> = s
            .split(':')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("bad sweep `{s}`"))
            })
            .collect::<std::result::Result<_, _>>()?;
        let [start, end, step] = parts[..] else {
            return Err(format!("sweep `{s}` must be start:end:step"));
        };
        if !(start.is_finite() && end.is_finite() && step.is_finite()) || step <= 0.0 || end < start
        {
            return Err(format!("sweep `{s}` needs finite start ≤ end and step > 0"));
        }
        Ok(Sweep { start, end, step })
    }
}

#[derive(Debug, Args)]
pub struct BerryArgs {
    #[arg(long, allow_negative_numbers = true)]
    xi: Option<Xi>,
    #[arg(long, allow_negative_numbers = true)]
    theta0: Option<f64>,
    /// Δθ range start:end:step (default 0:2π:0.01)
    #[arg(long, allow_hyphen_values = true)]
    sweep: Option<Sweep>,
    /// zero, single, or fourier:a0=..,lin=..,a1=..,b1=..
    #[arg(long)]
    gauge: Option<Gauge>,
    /// Intervals for the connection integral
    #[arg(long)]
    grid_n: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

pub fn run(args: &BerryArgs) -> Result<()> {
    let (run, mut cfg) = args.output.resolve()?;
    let xi = xi_or_default(cfg.take("xi", args.xi)?);
    let theta0 = cfg.take("theta0", args.theta0)?.unwrap_or(0.0);
    let sweep = cfg.take("sweep", args.sweep)?.unwrap_or(Sweep {
        start: 0.0,
        end: TAU,
        step: 0.01,
    });
    let gauge = cfg
        .take("gauge", args.gauge.clone())?
        .map_or(GaugeSpec::Zero, |g| g.0);
    let grid_n = cfg.take("grid_n", args.grid_n)?.unwrap_or(10_000);
    cfg.finish()?;
    if !theta0.is_finite() {
        bail!("`theta0` must be finite");
    }

    let s0 = bo_state(theta0, xi, &gauge);
    let mut table = Table::new(vec![
        "delta_theta",
        "overlap_modulus",
        "gamma_numeric",
        "gamma_closed_form",
    ]);
    let mut worst = 0.0_f64;
    let mut undefined = 0usize;
    for delta in sweep.values() {
        let closed = closed_form_phase(xi, delta).unwrap_or(f64::NAN);
        let (overlap, gamma) =
            match noncyclic_berry_phase(xi, theta0, theta0 + delta, &gauge, grid_n) {
                Ok(r) => {
                    worst = worst.max(wrap_phase(r.gamma_g - closed).abs());
                    (r.overlap_modulus, r.gamma_g)
                }
                Err(MabError::UndefinedPhase { .. } | MabError::OrthogonalStates { .. }) => {
                    undefined += 1;
                    (
                        inner(&s0, &bo_state(theta0 + delta, xi, &gauge)).norm(),
                        f64::NAN,
                    )
                }
                Err(e) => return Err(e.into()),
            };
        table.push(vec![
            delta.into(),
            overlap.into(),
            gamma.into(),
            closed.into(),
        ]);
    }
    run.write_table(&table)?;

    let jumps = detect_phase_jumps(xi, 0.0, (sweep.start, sweep.end + sweep.step * 1e-9))?;
    run.write_summary(
        "berry",
        json!({
            "xi": xi.value(),
            "theta0": theta0,
            "sweep": { "start": sweep.start, "end": sweep.end, "step": sweep.step },
            "gauge": format!("{gauge:?}"),
            "grid_n": grid_n,
        }),
        json!({ "bo_regime": null, "adiabaticity": null }),
        json!({
            "jumps": jumps,
            "max_deviation_from_closed_form": worst,
            "undefined_samples": undefined,
        }),
    )
}
