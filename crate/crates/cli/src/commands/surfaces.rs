use anyhow::{bail, Result};
use clap::Args;
use mab_core::model::potential_surfaces;
use serde_json::json;

use super::{bo_margin_json, model, params_json, xi_or_default, Xi};
use crate::output::{require_positive, Cell, OutputArgs, Table};

#[derive(Debug, Args)]
pub struct SurfacesArgs {
    #[arg(long, allow_negative_numbers = true)]
    k: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    xi: Option<Xi>,
    #[arg(long)]
    r_max: Option<f64>,
    /// Number of rows; r = r_max·i/n, i = 1..n
    #[arg(long)]
    n: Option<usize>,
    /// Drop the 1/(8r²) Born-Huang term
    #[arg(long)]
    no_born_huang: bool,
    #[command(flatten)]
    output: OutputArgs,
}

pub fn run(args: &SurfacesArgs) -> Result<()> {
    let (run, mut cfg) = args.output.resolve()?;
    let k = cfg.take("k", args.k)?.unwrap_or(1.0);
    let xi = xi_or_default(cfg.take("xi", args.xi)?);
    let p = model(k, xi, true)?;
    let r_max = require_positive(
        "r_max",
        cfg.take("r_max", args.r_max)?.unwrap_or(p.r_ref() + 4.0),
    )?;
    let n = cfg.take("n", args.n)?.unwrap_or(600);
    let bh = !args.no_born_huang && !cfg.take::<bool>("no_born_huang", None)?.unwrap_or(false);
    cfg.finish()?;
    if n == 0 {
        bail!("`n` must be positive");
    }

    let mut table = Table::new(vec!["r", "E_minus", "E_plus", "born_huang"]);
    let mut min = (f64::INFINITY, 0.0);
    for i in 1..=n {
        let r = r_max * i as f64 / n as f64;
        let s = potential_surfaces(&p, r, bh)?;
        if s.e_minus < min.0 {
            min = (s.e_minus, r);
        }
        table.push(vec![
            s.r.into(),
            s.e_minus.into(),
            s.e_plus.into(),
            Cell::Int(i64::from(bh)),
        ]);
    }
    run.write_table(&table)?;
    run.write_summary(
        "surfaces",
        json!({ "model": params_json(&p), "r_max": r_max, "n": n, "born_huang": bh }),
        bo_margin_json(&p),
        json!({ "rows": n, "lower_surface_min": { "r": min.1, "E_minus": min.0 } }),
    )
}
