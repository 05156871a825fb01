//! Born-Oppenheimer electronic states, Pancharatnam overlaps and the
//! noncyclic geometric phase with its π-jump structure.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use crate::error::{invalid, require_finite, MabError, Result};
use crate::gauge::GaugeSpec;
use crate::params::EffectOrder;
use crate::spin::{c, inner, SpinState, C64};

/// Default tolerance below which two states count as orthogonal.
pub const ORTHOGONALITY_TOL: f64 = 1e-9;
/// Exclusion radius around a π-jump in which γ_g is reported undefined.
pub const JUMP_EXCLUSION: f64 = 1e-6;
pub const MIN_GRID: usize = 100;

/// Maps an angle onto (−π, π].
pub fn wrap_phase(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

/// e^{iα(θ)}/√2 · (e^{−iξθ}, e^{iξθ}).
///
/// This is the gauge-covariant electronic state transported around the
/// intersection. It differs from [`crate::model::lower_state`] only by the
/// sign of the |1⟩ component (i.e. by σz), which leaves every overlap
/// ⟨ψ(θ0)|ψ(θ)⟩ and the Berry connection unchanged.
pub fn bo_state(theta: f64, xi: EffectOrder, gauge: &GaugeSpec) -> SpinState {
    let phase = C64::from_polar(1.0, gauge.alpha(theta, xi));
    let half = xi.value() * theta;
    SpinState::new(
        C64::from_polar(FRAC_1_SQRT_2, -half) * phase,
        C64::from_polar(FRAC_1_SQRT_2, half) * phase,
    )
}

/// ∂/∂θ of [`bo_state`], analytic.
fn bo_state_derivative(theta: f64, xi: EffectOrder, gauge: &GaugeSpec) -> SpinState {
    let s = bo_state(theta, xi, gauge);
    let da = gauge.alpha_prime(theta, xi);
    let x = xi.value();
    SpinState::new(s[0] * c(0.0, da - x), s[1] * c(0.0, da + x))
}

/// arg⟨a|b⟩ on (−π, π]; fails when |⟨a|b⟩| < `tol`.
pub fn pancharatnam_phase_with_tol(a: &SpinState, b: &SpinState, tol: f64) -> Result<f64> {
    let overlap = inner(a, b);
    if overlap.norm() < tol {
        return Err(MabError::OrthogonalStates {
            overlap: overlap.norm(),
        });
    }
    Ok(wrap_phase(overlap.arg()))
}

pub fn pancharatnam_phase(a: &SpinState, b: &SpinState) -> Result<f64> {
    pancharatnam_phase_with_tol(a, b, ORTHOGONALITY_TOL)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BerryPhaseResult {
    pub theta0: f64,
    pub theta: f64,
    /// Noncyclic phase on (−π, π].
    pub gamma_g: f64,
    /// |⟨−(θ0)|−(θ)⟩|.
    pub overlap_modulus: f64,
    /// Total-phase term arg⟨−(θ0)|−(θ)⟩ (gauge dependent).
    pub pancharatnam_term: f64,
    /// Connection term ∫ i⟨−|∂θ−⟩ dθ (gauge dependent).
    pub connection_term: f64,
    /// Δθ values between 0 and θ − θ0 where the phase jumps by π.
    pub jumps: Vec<f64>,
    pub gauge_used: GaugeSpec,
}

/// Berry connection i⟨ψ|∂θψ⟩ (real for normalized ψ).
fn connection(theta: f64, xi: EffectOrder, gauge: &GaugeSpec) -> f64 {
    let s = bo_state(theta, xi, gauge);
    let ds = bo_state_derivative(theta, xi, gauge);
    (c(0.0, 1.0) * inner(&s, &ds)).re
}

/// γ_g = arg⟨−(θ0)|−(θ)⟩ + ∫_{θ0}^{θ} i⟨−|∂θ'−⟩ dθ'.
///
/// The connection integral uses composite Simpson on `grid_n` intervals
/// (rounded up to even).
pub fn noncyclic_berry_phase(
    xi: EffectOrder,
    theta0: f64,
    theta: f64,
    gauge: &GaugeSpec,
    grid_n: usize,
) -> Result<BerryPhaseResult> {
    require_finite("theta0", theta0)?;
    require_finite("theta", theta)?;
    if grid_n < MIN_GRID {
        return Err(invalid(
            "grid_n",
            format!("need at least {MIN_GRID}, got {grid_n}"),
        ));
    }
    let delta = theta - theta0;
    let jumps = jumps_between(xi, 0.0_f64.min(delta), 0.0_f64.max(delta));
    if jumps.iter().any(|j| (j - delta).abs() < JUMP_EXCLUSION) {
        return Err(MabError::UndefinedPhase { delta_theta: delta });
    }

    let s0 = bo_state(theta0, xi, gauge);
    let s1 = bo_state(theta, xi, gauge);
    let pancharatnam_term = pancharatnam_phase(&s0, &s1)?;
    let overlap_modulus = inner(&s0, &s1).norm();

    let n = grid_n + grid_n % 2;
    let h = delta / n as f64;
    let mut acc = connection(theta0, xi, gauge) + connection(theta, xi, gauge);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * connection(theta0 + i as f64 * h, xi, gauge);
    }
    let connection_term = acc * h / 3.0;

    Ok(BerryPhaseResult {
        theta0,
        theta,
        gamma_g: wrap_phase(pancharatnam_term + connection_term),
        overlap_modulus,
        pancharatnam_term,
        connection_term,
        jumps,
        gauge_used: gauge.clone(),
    })
}

/// arg cos(ξΔθ): 0 where the cosine is positive, π where negative.
pub fn closed_form_phase(xi: EffectOrder, delta_theta: f64) -> Option<f64> {
    let v = (xi.value() * delta_theta).cos();
    if v > 0.0 {
        Some(0.0)
    } else if v < 0.0 {
        Some(PI)
    } else {
        None
    }
}

/// Jump locations Δθₙ = (2n+1)π/(2|ξ|) lying in the closed interval [lo, hi].
fn jumps_between(xi: EffectOrder, lo: f64, hi: f64) -> Vec<f64> {
    let twice = xi.half_integer().twice().unsigned_abs() as f64;
    let at = |n: i64| (2 * n + 1) as f64 * PI / twice;
    let mut n = ((lo * twice / PI - 1.0) / 2.0).floor() as i64;
    while at(n) < lo {
        n += 1;
    }
    let mut out = Vec::new();
    while at(n) <= hi {
        out.push(at(n));
        n += 1;
    }
    out
}

/// π-jump positions of γ_g, as Δθ = θ − θ0, for θ in the half-open
/// interval [range.0, range.1). Roots of cos(ξΔθ), computed analytically.
pub fn detect_phase_jumps(xi: EffectOrder, theta0: f64, range: (f64, f64)) -> Result<Vec<f64>> {
    require_finite("theta0", theta0)?;
    require_finite("range start", range.0)?;
    require_finite("range end", range.1)?;
    if range.1 <= range.0 {
        return Err(invalid("range", "interval must be nonempty"));
    }
    let (lo, hi) = (range.0 - theta0, range.1 - theta0);
    let mut jumps = jumps_between(xi, lo, hi);
    jumps.retain(|&j| j < hi);
    Ok(jumps)
}

/// e^{2πiξ}, the factor picked up by one loop around the intersection.
/// Exact, since 2ξ is an integer.
pub fn mab_phase_factor(xi: EffectOrder) -> C64 {
    if xi.half_integer().twice() % 2 == 0 {
        c(1.0, 0.0)
    } else {
        c(-1.0, 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauge::FourierGauge;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    const LIN: EffectOrder = EffectOrder::LINEAR;
    const QUAD: EffectOrder = EffectOrder::QUADRATIC;

    #[test]
    fn wrap() {
        assert_eq!(wrap_phase(PI), PI);
        assert_eq!(wrap_phase(-PI), PI);
        assert!((wrap_phase(3.0 * PI + 0.1) - (-PI + 0.1)).abs() < 1e-12);
        assert_eq!(wrap_phase(0.0), 0.0);
    }

    #[test]
    fn bo_state_examples() {
        let s = bo_state(0.0, QUAD, &GaugeSpec::Zero);
        assert!((s[0] - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((s[1] - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        let s = bo_state(PI, LIN, &GaugeSpec::Zero);
        assert!((s[0] - c(0.0, -FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((s[1] - c(0.0, FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let g =
            GaugeSpec::Fourier(FourierGauge::new(0.2, 0.4, vec![(1.0, -0.5), (0.3, 0.7)]).unwrap());
        for &t in &[0.1, 1.7, -2.4] {
            let h = 1e-6;
            let fd = (bo_state(t + h, LIN, &g) - bo_state(t - h, LIN, &g)) / c(2.0 * h, 0.0);
            assert!((fd - bo_state_derivative(t, LIN, &g)).norm() < 1e-8);
        }
    }

    #[test]
    fn pancharatnam_examples() {
        let a = bo_state(0.3, LIN, &GaugeSpec::Zero);
        assert_eq!(pancharatnam_phase(&a, &a).unwrap(), 0.0);
        let b = a * C64::from_polar(1.0, 2.5);
        assert!((pancharatnam_phase(&a, &b).unwrap() - 2.5).abs() < 1e-14);
        let b = a * C64::from_polar(1.0, -4.0);
        assert!((pancharatnam_phase(&a, &b).unwrap() - wrap_phase(-4.0)).abs() < 1e-14);
        let orth = bo_state(0.3 + PI, LIN, &GaugeSpec::Zero);
        assert!(matches!(
            pancharatnam_phase(&a, &orth),
            Err(MabError::OrthogonalStates { .. })
        ));
    }

    #[test]
    fn berry_phase_examples() {
        let g = GaugeSpec::Fourier(FourierGauge::new(1.0, -0.3, vec![(0.5, 0.5)]).unwrap());
        for gauge in [GaugeSpec::Zero, GaugeSpec::SingleValued, g] {
            let r = noncyclic_berry_phase(LIN, 0.2, 0.2 + FRAC_PI_2, &gauge, 10_000).unwrap();
            assert!(r.gamma_g.abs() < 1e-9, "{:?}", r.gamma_g);
            let r = noncyclic_berry_phase(LIN, 0.2, 0.2 + 1.5 * PI, &gauge, 10_000).unwrap();
            assert!((wrap_phase(r.gamma_g - PI)).abs() < 1e-9);
            assert_eq!(r.jumps, vec![PI]);
        }
        let r = noncyclic_berry_phase(QUAD, 0.0, FRAC_PI_4, &GaugeSpec::Zero, 1000).unwrap();
        assert!(r.gamma_g.abs() < 1e-12);
        assert!((r.overlap_modulus - 0.5_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn berry_phase_errors() {
        assert!(matches!(
            noncyclic_berry_phase(LIN, 0.0, PI, &GaugeSpec::Zero, 1000),
            Err(MabError::UndefinedPhase { .. })
        ));
        assert!(noncyclic_berry_phase(LIN, 0.0, 1.0, &GaugeSpec::Zero, 99).is_err());
    }

    #[test]
    fn jump_sets() {
        assert_eq!(detect_phase_jumps(LIN, 0.0, (0.0, TAU)).unwrap(), vec![PI]);
        assert_eq!(
            detect_phase_jumps(QUAD, 0.0, (0.0, TAU)).unwrap(),
            vec![FRAC_PI_2, 3.0 * PI / 2.0]
        );
        assert!(detect_phase_jumps(LIN, 0.0, (0.0, FRAC_PI_2))
            .unwrap()
            .is_empty());
        // shifted origin: jumps reported relative to θ0
        assert_eq!(
            detect_phase_jumps(LIN, 1.0, (1.0, 1.0 + TAU)).unwrap(),
            vec![PI]
        );
        // negative side
        assert_eq!(
            detect_phase_jumps(LIN, 0.0, (-TAU, 0.0)).unwrap(),
            vec![-PI]
        );
        assert!(detect_phase_jumps(LIN, 0.0, (1.0, 1.0)).is_err());
    }

    #[test]
    fn phase_factors() {
        assert_eq!(mab_phase_factor(LIN), c(-1.0, 0.0));
        assert_eq!(mab_phase_factor(QUAD), c(1.0, 0.0));
        assert_eq!(
            mab_phase_factor(EffectOrder::new(-1.5).unwrap()),
            c(-1.0, 0.0)
        );
    }

    #[test]
    fn closed_form() {
        assert_eq!(closed_form_phase(LIN, 1.0), Some(0.0));
        assert_eq!(closed_form_phase(LIN, 4.0), Some(PI));
    }
}
