use std::path::PathBuf;

use anyhow::{anyhow, Context, Result};
use clap::Args;
use mab_core::holonomy::{holonomy_line_integral, PlanarPath};
use serde_json::json;

use super::{xi_or_default, Xi};
use crate::output::{Cell, Format, OutputArgs, Table};

#[derive(Debug, Args)]
pub struct HolonomyArgs {
    #[arg(long, allow_negative_numbers = true)]
    xi: Option<Xi>,
    /// CSV with x,y columns; closed when the last row repeats the first
    #[arg(long)]
    path: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

fn read_path(file: &PathBuf) -> Result<Vec<(f64, f64)>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(file)
        .with_context(|| format!("opening path {}", file.display()))?;
    let headers = reader.headers()?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| anyhow!("path file needs an `{name}` column"))
    };
    let (ix, iy) = (column("x")?, column("y")?);
    let mut samples = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        let get = |i: usize| -> Result<f64> {
            record
                .get(i)
                .unwrap_or("")
                .parse()
                .with_context(|| format!("path row {}: bad number", row + 1))
        };
        samples.push((get(ix)?, get(iy)?));
    }
    Ok(samples)
}

pub fn run(args: &HolonomyArgs) -> Result<()> {
    let (run, mut cfg) = args.output.resolve()?;
    let xi = xi_or_default(cfg.take("xi", args.xi)?);
    let file = cfg
        .take("path", args.path.clone())?
        .ok_or_else(|| anyhow!("--path is required"))?;
    cfg.finish()?;

    let path = PlanarPath::from_samples(read_path(&file)?)?;
    let h = holonomy_line_integral(xi, &path)?;
    let result = json!({
        "line_integral": h.line_integral,
        "winding": h.winding,
        "phase_factor": { "re": h.phase_factor.re, "im": h.phase_factor.im },
        "closed": path.is_closed(),
        "samples": path.samples().len(),
    });
    match run.format {
        Format::Json => run.write_value(&result)?,
        Format::Csv => {
            let mut table = Table::new(vec!["line_integral", "winding", "phase_re", "phase_im"]);
            let winding = h.winding.map_or(Cell::Text(String::new()), Cell::Int);
            table.push(vec![
                h.line_integral.into(),
                winding,
                h.phase_factor.re.into(),
                h.phase_factor.im.into(),
            ]);
            run.write_table(&table)?;
        }
    }
    run.write_summary(
        "holonomy",
        json!({ "xi": xi.value(), "path": file.display().to_string() }),
        json!({ "bo_regime": null, "adiabaticity": null }),
        result,
    )
}
