//! Low-lying vibronic spectrum: exact J-block diagonalization of the full
//! two-channel radial problem, the Born-Oppenheimer effective spectrum, and
//! their comparison.

mod blocks;
mod bo;
mod compare;
pub mod eigen;
mod grid;

pub use blocks::{
    build_j_block, default_j_list, exact_spectrum, solve_block, BlockLevels, JBlock, SpectrumResult,
};
pub use bo::{bo_angular_multiset, bo_spectrum, radial_spectrum, BoLevel, BoLevels};
pub use compare::{compare_spectra, LevelComparison, LevelSet, SpectrumComparison};
pub use grid::RadialGrid;
