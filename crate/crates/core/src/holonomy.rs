//! Line integrals of the vector potential (ξ/r)·e_θ along planar paths.

use std::f64::consts::{FRAC_PI_2, TAU};

use crate::error::{invalid, require_finite, MabError, Result};
use crate::params::EffectOrder;
use crate::spin::C64;

/// Minimum allowed distance of a sample from the intersection.
pub const ORIGIN_CLEARANCE: f64 = 1e-9;
const CLOSURE_TOL: f64 = 1e-12;

/// An ordered polygonal chain in the nuclear (x, y) plane.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarPath {
    samples: Vec<(f64, f64)>,
    closed: bool,
}

impl PlanarPath {
    pub fn new(samples: Vec<(f64, f64)>, closed: bool) -> Result<Self> {
        if samples.len() < 2 {
            return Err(invalid("path", "need at least two samples"));
        }
        for &(x, y) in &samples {
            require_finite("path x", x)?;
            require_finite("path y", y)?;
            if x.hypot(y) <= ORIGIN_CLEARANCE {
                return Err(MabError::Singularity {
                    what: "the vector potential",
                });
            }
        }
        if closed {
            let (a, b) = (samples[0], samples[samples.len() - 1]);
            if (a.0 - b.0).abs() > CLOSURE_TOL || (a.1 - b.1).abs() > CLOSURE_TOL {
                return Err(invalid("path", "closed path must end at its first sample"));
            }
        }
        Ok(PlanarPath { samples, closed })
    }

    /// Closed if the last sample repeats the first.
    pub fn from_samples(samples: Vec<(f64, f64)>) -> Result<Self> {
        let closed = samples.len() > 2 && {
            let (a, b) = (samples[0], samples[samples.len() - 1]);
            (a.0 - b.0).abs() <= CLOSURE_TOL && (a.1 - b.1).abs() <= CLOSURE_TOL
        };
        Self::new(samples, closed)
    }

    /// Circle traversed `turns` times counter-clockwise (negative: clockwise),
    /// `per_turn` segments per turn, starting and ending at angle 0.
    pub fn circle(center: (f64, f64), radius: f64, per_turn: usize, turns: i32) -> Result<Self> {
        Self::ellipse(center, radius, radius, per_turn, turns)
    }

    pub fn ellipse(
        center: (f64, f64),
        a: f64,
        b: f64,
        per_turn: usize,
        turns: i32,
    ) -> Result<Self> {
        if per_turn < 3 || turns == 0 {
            return Err(invalid(
                "path",
                "need ≥ 3 segments per turn and nonzero turns",
            ));
        }
        let n = per_turn * turns.unsigned_abs() as usize;
        let sign = turns.signum() as f64;
        let mut samples: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let t = sign * TAU * i as f64 / per_turn as f64;
                (center.0 + a * t.cos(), center.1 + b * t.sin())
            })
            .collect();
        samples.push(samples[0]);
        Self::new(samples, true)
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolonomyResult {
    /// ∫ (ξ/r) e_θ · dr along the path.
    pub line_integral: f64,
    /// Net turns around the origin (closed paths only).
    pub winding: Option<i64>,
    /// exp(i · line_integral).
    pub phase_factor: C64,
}

/// ξ times the accumulated polar angle, from the signed angle between
/// consecutive position vectors (exact for polygonal chains).
pub fn holonomy_line_integral(xi: EffectOrder, path: &PlanarPath) -> Result<HolonomyResult> {
    let mut total = 0.0;
    for (i, w) in path.samples.windows(2).enumerate() {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        let angle = (x0 * y1 - y0 * x1).atan2(x0 * x1 + y0 * y1);
        if angle.abs() >= FRAC_PI_2 {
            return Err(MabError::PathTooCoarse { segment: i, angle });
        }
        total += angle;
    }
    let line_integral = xi.value() * total;
    Ok(HolonomyResult {
        line_integral,
        winding: path.closed.then(|| (total / TAU).round() as i64),
        phase_factor: C64::from_polar(1.0, line_integral),
    })
}
