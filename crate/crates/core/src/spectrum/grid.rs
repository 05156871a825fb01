use crate::error::{invalid, require_finite, Result};
use crate::params::ModelParams;

pub const MIN_POINTS: usize = 400;
pub const DEFAULT_POINTS: usize = 1200;
/// Required extent of the grid beyond `r_ref`.
pub const TAIL: f64 = 8.0;

/// Cell-centred radial grid r_i = (i − ½)h, i = 1..n, with h = r_max/(n + ½)
/// so that the Dirichlet node sits exactly at r_max.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    r_max: f64,
    n: usize,
}

impl RadialGrid {
    pub fn new(r_max: f64, n: usize) -> Result<Self> {
        if n < MIN_POINTS {
            return Err(invalid(
                "n",
                format!("need at least {MIN_POINTS} points, got {n}"),
            ));
        }
        Self::new_unchecked(r_max, n)
    }

    /// Skips the resolution floor; for convergence studies on coarse grids.
    pub fn new_unchecked(r_max: f64, n: usize) -> Result<Self> {
        require_finite("r_max", r_max)?;
        if r_max <= 0.0 {
            return Err(invalid("r_max", format!("must be > 0, got {r_max}")));
        }
        if n < 2 {
            return Err(invalid("n", "need at least two points"));
        }
        Ok(RadialGrid { r_max, n })
    }

    /// r_max = r_ref + 8, n = 1200.
    pub fn default_for(params: &ModelParams) -> Self {
        RadialGrid {
            r_max: params.r_ref() + TAIL,
            n: DEFAULT_POINTS,
        }
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        self.r_max / (self.n as f64 + 0.5)
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        let h = self.spacing();
        (1..=self.n).map(move |i| (i as f64 - 0.5) * h)
    }

    pub(crate) fn check_covers(&self, params: &ModelParams) -> Result<()> {
        if self.r_max < params.r_ref() + TAIL {
            return Err(invalid(
                "r_max",
                format!("must be ≥ r_ref + {TAIL} = {}", params.r_ref() + TAIL),
            ));
        }
        Ok(())
    }

    /// Flux-form discretization of −½(1/r)d/dr(r d/dr) acting on u = √r·R:
    /// diagonal 1/h², off-diagonal −i/(2h²√(i² − ¼)). Second order for every
    /// angular momentum, including the m = 0 channel where u ~ √r.
    pub(crate) fn kinetic(&self) -> (f64, Vec<f64>) {
        let h2 = self.spacing() * self.spacing();
        let off = (1..self.n)
            .map(|i| {
                let i = i as f64;
                -i / (2.0 * h2 * (i * i - 0.25).sqrt())
            })
            .collect();
        (1.0 / h2, off)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::EffectOrder;

    #[test]
    fn layout() {
        let g = RadialGrid::new(12.0, 1200).unwrap();
        let pts: Vec<f64> = g.points().collect();
        assert_eq!(pts.len(), 1200);
        assert!((pts[0] - 0.5 * g.spacing()).abs() < 1e-15);
        assert!((pts[1199] + g.spacing() - 12.0).abs() < 1e-12);
        assert!(RadialGrid::new(12.0, 399).is_err());
        assert!(RadialGrid::new_unchecked(12.0, 40).is_ok());
        assert!(RadialGrid::new(-1.0, 500).is_err());
    }

    #[test]
    fn coverage() {
        let p = ModelParams::new(4.0, EffectOrder::LINEAR).unwrap();
        assert!(RadialGrid::new(12.0, 500).unwrap().check_covers(&p).is_ok());
        assert!(RadialGrid::new(11.9, 500)
            .unwrap()
            .check_covers(&p)
            .is_err());
        assert_eq!(RadialGrid::default_for(&p).r_max(), 12.0);
    }
}
