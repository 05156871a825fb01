use super::eigen::{lowest_eigenvalues, SymTridiagonal};
use super::grid::RadialGrid;
use crate::error::{invalid, Result};
use crate::model::born_huang;
use crate::params::{HalfInteger, ModelParams};

/// Lowest levels of −½(1/r)(r u′)′ + L²/(2r²) + V(r) on the grid.
pub fn radial_spectrum(
    grid: &RadialGrid,
    angular: f64,
    potential: impl Fn(f64) -> f64,
    n_eigs: usize,
) -> Result<Vec<f64>> {
    if n_eigs > grid.n() {
        return Err(invalid(
            "n_eigs",
            format!("{n_eigs} exceeds grid size {}", grid.n()),
        ));
    }
    let (kin, off) = grid.kinetic();
    let diag = grid
        .points()
        .map(|r| kin + angular * angular / (2.0 * r * r) + potential(r))
        .collect();
    Ok(lowest_eigenvalues(&SymTridiagonal { diag, off }, n_eigs))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoLevel {
    pub m: i32,
    /// m + ξ, aligned with the exact block label j.
    pub j_eff: HalfInteger,
    pub eigenvalues: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoLevels {
    pub params: ModelParams,
    pub grid: RadialGrid,
    pub include_bh: bool,
    pub levels: Vec<BoLevel>,
}

/// Nuclear levels on the lower surface with the induced vector potential:
/// angular term (m + ξ)²/(2r²), potential ½r² − k·r^(2|ξ|) [+ 1/(8r²)].
pub fn bo_spectrum(
    params: &ModelParams,
    m_list: &[i32],
    grid: &RadialGrid,
    include_bh: bool,
    n_eigs: usize,
) -> Result<BoLevels> {
    grid.check_covers(params)?;
    let xi = params.xi().half_integer();
    let potential =
        |r: f64| 0.5 * r * r - params.coupling(r) + if include_bh { born_huang(r) } else { 0.0 };
    let levels = m_list
        .iter()
        .map(|&m| {
            let j_eff = HalfInteger::from_int(m) + xi;
            Ok(BoLevel {
                m,
                j_eff,
                eigenvalues: radial_spectrum(grid, j_eff.value(), potential, n_eigs)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BoLevels {
        params: *params,
        grid: *grid,
        include_bh,
        levels,
    })
}

/// Sorted |m + shift| over all integers m with |m + shift| ≤ cutoff: the
/// multiset of BO angular terms (m + ξ)² below a cutoff, as half-integers.
pub fn bo_angular_multiset(shift: HalfInteger, cutoff: HalfInteger) -> Vec<HalfInteger> {
    let c = cutoff.twice().abs();
    let s = shift.twice();
    // 2(m + ξ) = 2m + s, need |2m + s| ≤ c
    let lo = (-c - s).div_euclid(2) - 1;
    let hi = (c - s).div_euclid(2) + 1;
    let mut out: Vec<HalfInteger> = (lo..=hi)
        .map(|m| 2 * m + s)
        .filter(|t| t.abs() <= c)
        .map(|t| HalfInteger::from_twice(t.abs()))
        .collect();
    out.sort();
    out
}
