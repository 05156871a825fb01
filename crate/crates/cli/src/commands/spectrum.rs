use anyhow::{bail, Result};
use clap::Args;
use mab_core::model::bo_regime_margin;
use mab_core::spectrum::{
    bo_angular_multiset, bo_spectrum, compare_spectra, default_j_list, exact_spectrum, BoLevels,
    RadialGrid,
};
use mab_core::HalfInteger;
use serde_json::json;

use super::{model, params_json, xi_or_default, Xi};
use crate::output::{Cell, OutputArgs, RegimeViolation, Table};

/// 2k² below this is reported as outside the Born-Oppenheimer regime.
pub const BO_REGIME_THRESHOLD: f64 = 10.0;

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// Vibronic coupling; 0 gives the uncoupled oscillator
    #[arg(long, allow_negative_numbers = true)]
    k: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    xi: Option<Xi>,
    #[arg(long)]
    r_max: Option<f64>,
    /// Radial grid points
    #[arg(long)]
    n: Option<usize>,
    /// Levels per block
    #[arg(long)]
    n_eigs: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

fn push_bo(table: &mut Table, bo: &BoLevels, source: &str) {
    let (xi, k) = (bo.params.xi().value(), bo.params.k());
    for level in &bo.levels {
        for (idx, &e) in level.eigenvalues.iter().enumerate() {
            table.push(vec![
                xi.into(),
                k.into(),
                Cell::Text(level.j_eff.to_string()),
                Cell::Int(idx as i64),
                e.into(),
                Cell::Text(source.into()),
            ]);
        }
    }
}

pub fn run(args: &SpectrumArgs) -> Result<()> {
    let (run, mut cfg) = args.output.resolve()?;
    let k = cfg.take("k", args.k)?.unwrap_or(4.0);
    let xi = xi_or_default(cfg.take("xi", args.xi)?);
    let r_max = cfg.take("r_max", args.r_max)?;
    let n = cfg.take("n", args.n)?;
    let n_eigs = cfg.take("n_eigs", args.n_eigs)?.unwrap_or(4);
    cfg.finish()?;

    let p = model(k, xi, true)?;
    let margin = bo_regime_margin(&p);
    if run.strict && margin < BO_REGIME_THRESHOLD {
        return Err(RegimeViolation(format!(
            "2k² = {margin} is below the Born-Oppenheimer threshold {BO_REGIME_THRESHOLD}"
        ))
        .into());
    }
    let default = RadialGrid::default_for(&p);
    let grid = RadialGrid::new(r_max.unwrap_or(default.r_max()), n.unwrap_or(default.n()))?;
    if n_eigs == 0 {
        bail!("`n_eigs` must be positive");
    }

    let js = default_j_list(xi);
    let exact = exact_spectrum(&p, &js, &grid, n_eigs)?;
    let xh = xi.half_integer();
    let ms: Vec<i32> = js
        .iter()
        .map(|&j| (j - xh).as_integer().expect("j − ξ is an integer"))
        .collect();
    let bo_bh = bo_spectrum(&p, &ms, &grid, true, n_eigs)?;
    let bo_plain = bo_spectrum(&p, &ms, &grid, false, n_eigs)?;

    let mut table = Table::new(vec!["xi", "k", "j", "level_index", "energy", "source"]);
    for b in &exact.blocks {
        for (idx, &e) in b.levels.iter().enumerate() {
            table.push(vec![
                xi.value().into(),
                p.k().into(),
                Cell::Text(b.j.to_string()),
                Cell::Int(idx as i64),
                e.into(),
                Cell::Text("exact".into()),
            ]);
        }
    }
    push_bo(&mut table, &bo_bh, "bo_with_bh");
    push_bo(&mut table, &bo_plain, "bo_without_bh");
    run.write_table(&table)?;

    let cmp_bh = compare_spectra(&exact, &bo_bh)?;
    let cmp_plain = compare_spectra(&exact, &bo_plain)?;
    let (e0, ground) = exact.ground(1e-8).expect("at least one block");
    let cutoff = js
        .iter()
        .map(|j| HalfInteger::from_twice(j.twice().abs()))
        .max()
        .expect("nonempty j list");
    // ½r² − k·r^(2|ξ|) is bounded below for 2|ξ| < 2, or 2|ξ| = 2 with k < ½
    let bounded = match xi.radial_power() {
        0 | 1 => true,
        2 => p.k() < 0.5,
        _ => p.k() == 0.0,
    };
    let unshifted =
        bo_angular_multiset(xh, cutoff) == bo_angular_multiset(HalfInteger::from_int(0), cutoff);
    run.write_summary(
        "spectrum",
        json!({
            "model": params_json(&p),
            "grid": { "r_max": grid.r_max(), "n": grid.n() },
            "n_eigs": n_eigs,
            "j_list": js.iter().map(|j| j.to_string()).collect::<Vec<_>>(),
        }),
        json!({ "bo_regime": margin, "bo_regime_threshold": BO_REGIME_THRESHOLD }),
        json!({
            "ground": { "energy": e0, "j": ground.iter().map(|j| j.to_string()).collect::<Vec<_>>() },
            "lower_surface_bounded_below": bounded,
            "max_reflection_asymmetry": exact.max_reflection_asymmetry(),
            "bo_comparison": {
                "band_reference_j": cmp_bh.band_reference.map(|j| j.to_string()),
                "max_band_relative_error_with_bh": cmp_bh.max_band_relative_error,
                "max_band_relative_error_without_bh": cmp_plain.max_band_relative_error,
            },
            "bo_multiset_matches_unshifted": unshifted,
            "bo_multiset_cutoff": cutoff.to_string(),
        }),
    )
}
