use nalgebra::DMatrix;
use rayon::prelude::*;

use super::eigen::{lowest_eigenvalues, BlockTridiagonal2, SturmCount};
use super::grid::RadialGrid;
use crate::error::{invalid, Result};
use crate::params::{EffectOrder, HalfInteger, ModelParams};

/// The invariant subspace of fixed J = p_θ + ξσz. Channel 0 carries
/// e^{i m0 θ}|0⟩ with m0 = j − ξ, channel 1 carries e^{i m1 θ}|1⟩ with
/// m1 = j + ξ; the two are coupled by k·r^(2|ξ|).
#[derive(Debug, Clone, PartialEq)]
pub struct JBlock {
    pub j: HalfInteger,
    pub m0: i32,
    pub m1: i32,
    pub grid: RadialGrid,
    /// Interleaved (channel 0, channel 1) per radial node.
    pub matrix: BlockTridiagonal2,
}

impl JBlock {
    /// Dense 2n×2n form, channel-major (all channel-0 nodes first).
    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.grid.n();
        let m = &self.matrix;
        DMatrix::from_fn(2 * n, 2 * n, |r, s| {
            let (cr, i) = (r / n, r % n);
            let (cs, j) = (s / n, s % n);
            if i == j {
                match (cr, cs) {
                    (0, 0) => m.a[i],
                    (1, 1) => m.b[i],
                    _ => m.c[i],
                }
            } else if cr == cs && i.abs_diff(j) == 1 {
                m.e[i.min(j)]
            } else {
                0.0
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

/// Admissible j values must satisfy j − ξ ∈ ℤ.
pub fn build_j_block(params: &ModelParams, j: HalfInteger, grid: &RadialGrid) -> Result<JBlock> {
    grid.check_covers(params)?;
    let xi = params.xi().half_integer();
    let (Some(m0), Some(m1)) = ((j - xi).as_integer(), (j + xi).as_integer()) else {
        return Err(invalid(
            "j",
            format!("j = {j} is not admissible for ξ = {xi}"),
        ));
    };
    let (kin_diag, e) = grid.kinetic();
    let centrifugal = |m: i32, r: f64| (m as f64 * m as f64) / (2.0 * r * r);
    let mut a = Vec::with_capacity(grid.n());
    let mut b = Vec::with_capacity(grid.n());
    let mut c = Vec::with_capacity(grid.n());
    for r in grid.points() {
        let trap = 0.5 * r * r;
        a.push(kin_diag + centrifugal(m0, r) + trap);
        b.push(kin_diag + centrifugal(m1, r) + trap);
        c.push(params.coupling(r));
    }
    Ok(JBlock {
        j,
        m0,
        m1,
        grid: *grid,
        matrix: BlockTridiagonal2 { a, b, c, e },
    })
}

/// Lowest `n_eigs` eigenvalues of the block, ascending.
pub fn solve_block(block: &JBlock, n_eigs: usize) -> Result<Vec<f64>> {
    if n_eigs > block.dim() {
        return Err(invalid(
            "n_eigs",
            format!("{n_eigs} exceeds block dimension {}", block.dim()),
        ));
    }
    Ok(lowest_eigenvalues(&block.matrix, n_eigs))
}

/// ξ = ½: ±½, ±3/2, ±5/2. ξ = −1 (and other integers): 0, ±1, ±2.
pub fn default_j_list(xi: EffectOrder) -> Vec<HalfInteger> {
    let base: &[i32] = if xi.half_integer().is_integer() {
        &[0, 2, -2, 4, -4]
    } else {
        &[1, -1, 3, -3, 5, -5]
    };
    base.iter().map(|&t| HalfInteger::from_twice(t)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockLevels {
    pub j: HalfInteger,
    pub levels: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub params: ModelParams,
    pub grid: RadialGrid,
    /// In the order of the requested j list.
    pub blocks: Vec<BlockLevels>,
}

impl SpectrumResult {
    pub fn levels(&self, j: HalfInteger) -> Option<&[f64]> {
        self.blocks
            .iter()
            .find(|b| b.j == j)
            .map(|b| b.levels.as_slice())
    }

    /// Lowest level overall and every block attaining it within `tol`.
    pub fn ground(&self, tol: f64) -> Option<(f64, Vec<HalfInteger>)> {
        let e0 = self
            .blocks
            .iter()
            .filter_map(|b| b.levels.first().copied())
            .fold(f64::INFINITY, f64::min);
        if !e0.is_finite() {
            return None;
        }
        let js = self
            .blocks
            .iter()
            .filter(|b| b.levels.first().is_some_and(|&e| (e - e0).abs() <= tol))
            .map(|b| b.j)
            .collect();
        Some((e0, js))
    }

    /// Largest levelwise |E(j) − E(−j)| over blocks present with both signs.
    pub fn max_reflection_asymmetry(&self) -> f64 {
        let mut worst = 0.0_f64;
        for b in &self.blocks {
            if let Some(other) = self.levels(-b.j) {
                for (x, y) in b.levels.iter().zip(other) {
                    worst = worst.max((x - y).abs());
                }
            }
        }
        worst
    }
}

/// Diagonalizes every requested block (in parallel); output keeps the
/// order of `j_list`.
pub fn exact_spectrum(
    params: &ModelParams,
    j_list: &[HalfInteger],
    grid: &RadialGrid,
    n_eigs: usize,
) -> Result<SpectrumResult> {
    let blocks = j_list
        .par_iter()
        .map(|&j| {
            let block = build_j_block(params, j, grid)?;
            Ok(BlockLevels {
                j,
                levels: solve_block(&block, n_eigs)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumResult {
        params: *params,
        grid: *grid,
        blocks,
    })
}
