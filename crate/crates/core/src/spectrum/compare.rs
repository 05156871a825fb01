use super::blocks::SpectrumResult;
use super::bo::BoLevels;
use super::grid::RadialGrid;
use crate::error::{MabError, Result};
use crate::params::{HalfInteger, ModelParams};

/// Anything that carries levels labelled by j.
pub trait LevelSet {
    fn params(&self) -> &ModelParams;
    fn grid(&self) -> &RadialGrid;
    fn labelled_levels(&self) -> Vec<(HalfInteger, &[f64])>;
}

impl LevelSet for SpectrumResult {
    fn params(&self) -> &ModelParams {
        &self.params
    }
    fn grid(&self) -> &RadialGrid {
        &self.grid
    }
    fn labelled_levels(&self) -> Vec<(HalfInteger, &[f64])> {
        self.blocks
            .iter()
            .map(|b| (b.j, b.levels.as_slice()))
            .collect()
    }
}

impl LevelSet for BoLevels {
    fn params(&self) -> &ModelParams {
        &self.params
    }
    fn grid(&self) -> &RadialGrid {
        &self.grid
    }
    fn labelled_levels(&self) -> Vec<(HalfInteger, &[f64])> {
        self.levels
            .iter()
            .map(|l| (l.j_eff, l.eigenvalues.as_slice()))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelComparison {
    pub j: HalfInteger,
    pub level_index: usize,
    pub reference: f64,
    pub candidate: f64,
    pub difference: f64,
    pub relative_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumComparison {
    pub rows: Vec<LevelComparison>,
    /// Block whose lowest level anchors the band splittings.
    pub band_reference: Option<HalfInteger>,
    /// Largest relative error of E₀(j) − E₀(j_ref) over the lowest band,
    /// skipping blocks degenerate with the reference.
    pub max_band_relative_error: f64,
}

/// Splittings below this are treated as exact degeneracies.
const DEGENERATE: f64 = 1e-8;

/// Levelwise comparison of `candidate` against `reference` over the j
/// labels both contain.
pub fn compare_spectra<A: LevelSet, B: LevelSet>(
    reference: &A,
    candidate: &B,
) -> Result<SpectrumComparison> {
    let (pa, pb) = (reference.params(), candidate.params());
    if pa != pb {
        return Err(MabError::Mismatch(format!(
            "parameter mismatch: k = {}, ξ = {} vs k = {}, ξ = {}",
            pa.k(),
            pa.xi(),
            pb.k(),
            pb.xi()
        )));
    }
    if reference.grid() != candidate.grid() {
        return Err(MabError::Mismatch(
            "spectra were computed on different grids".into(),
        ));
    }

    let cand = candidate.labelled_levels();
    let mut rows = Vec::new();
    let mut band: Vec<(HalfInteger, f64, f64)> = Vec::new();
    for (j, levels) in reference.labelled_levels() {
        let Some((_, other)) = cand.iter().find(|(jj, _)| *jj == j) else {
            continue;
        };
        for (idx, (&e, &o)) in levels.iter().zip(other.iter()).enumerate() {
            rows.push(LevelComparison {
                j,
                level_index: idx,
                reference: e,
                candidate: o,
                difference: o - e,
                relative_error: if e != 0.0 {
                    ((o - e) / e).abs()
                } else {
                    (o - e).abs()
                },
            });
        }
        if let (Some(&e0), Some(&o0)) = (levels.first(), other.first()) {
            band.push((j, e0, o0));
        }
    }

    let anchor = band.iter().min_by(|a, b| a.1.total_cmp(&b.1)).copied();
    let mut max_band = 0.0_f64;
    if let Some((_, e_ref, o_ref)) = anchor {
        for &(_, e, o) in &band {
            let split = e - e_ref;
            if split.abs() > DEGENERATE {
                max_band = max_band.max(((o - o_ref) - split).abs() / split.abs());
            }
        }
    }
    Ok(SpectrumComparison {
        rows,
        band_reference: anchor.map(|a| a.0),
        max_band_relative_error: max_band,
    })
}
