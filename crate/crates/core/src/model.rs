//! Electronic Hamiltonian, adiabatic surfaces and states, regime margins
//! and the rotating-frame effective fields.

use nalgebra::{Matrix2, Vector3};

use crate::error::{invalid, require_finite, MabError, Result};
use crate::gauge::GaugeSpec;
use crate::params::{EffectOrder, ModelParams};
use crate::spin::{c, SpinOperator, SpinState, C64};

/// Diabatic Born-Huang correction 1/(8r²). Kept in this form for every ξ.
pub fn born_huang(r: f64) -> f64 {
    1.0 / (8.0 * r * r)
}

/// H_e(r, θ) = k·r^(2|ξ|)·[cos(2ξθ)σx + sin(2ξθ)σy].
pub fn electronic_hamiltonian(params: &ModelParams, r: f64, theta: f64) -> Result<SpinOperator> {
    require_finite("r", r)?;
    require_finite("theta", theta)?;
    if r < 0.0 {
        return Err(invalid("r", format!("radius must be ≥ 0, got {r}")));
    }
    let g = params.coupling(r);
    let (s, co) = (2.0 * params.xi().value() * theta).sin_cos();
    Ok(SpinOperator::from_bloch(
        0.0,
        Vector3::new(g * co, g * s, 0.0),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdiabaticEigensystem {
    pub e_minus: f64,
    pub e_plus: f64,
    pub state_minus: SpinState,
    pub state_plus: SpinState,
}

/// Instantaneous eigenpairs of [`electronic_hamiltonian`].
///
/// Phase convention: in the single-valued gauge the first component is real
/// and positive, `state_minus = (1, −e^{2iξθ})/√2`; any other gauge multiplies
/// by e^{i(α(θ) − ξθ)}. With α = 0 this is `(e^{−iξθ}, −e^{iξθ})/√2`, which
/// shares the phase structure of the upper state `(e^{−iξθ}, e^{iξθ})/√2`.
pub fn adiabatic_eigensystem(
    params: &ModelParams,
    r: f64,
    theta: f64,
    gauge: &GaugeSpec,
) -> Result<AdiabaticEigensystem> {
    require_finite("r", r)?;
    if r <= 0.0 {
        return Err(invalid("r", format!("radius must be > 0, got {r}")));
    }
    require_finite("theta", theta)?;
    let g = params.coupling(r);
    let xi = params.xi();
    let state_minus = lower_state(theta, xi, gauge);
    let phase = C64::from_polar(1.0, gauge.alpha(theta, xi));
    let half = xi.value() * theta;
    let norm = std::f64::consts::FRAC_1_SQRT_2;
    let state_plus = SpinState::new(
        C64::from_polar(norm, -half) * phase,
        C64::from_polar(norm, half) * phase,
    );
    Ok(AdiabaticEigensystem {
        e_minus: -g,
        e_plus: g,
        state_minus,
        state_plus,
    })
}

/// Lower adiabatic state e^{iα(θ)}(e^{−iξθ}, −e^{iξθ})/√2 (radius independent).
pub fn lower_state(theta: f64, xi: EffectOrder, gauge: &GaugeSpec) -> SpinState {
    let phase = C64::from_polar(1.0, gauge.alpha(theta, xi));
    let half = xi.value() * theta;
    let norm = std::f64::consts::FRAC_1_SQRT_2;
    SpinState::new(
        C64::from_polar(norm, -half) * phase,
        -C64::from_polar(norm, half) * phase,
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceSample {
    pub r: f64,
    pub e_minus: f64,
    pub e_plus: f64,
    pub include_born_huang: bool,
}

impl SurfaceSample {
    pub fn gap(&self) -> f64 {
        self.e_plus - self.e_minus
    }
}

/// E±(r) = ½r² ± k·r^(2|ξ|) [+ 1/(8r²)].
pub fn potential_surfaces(params: &ModelParams, r: f64, include_bh: bool) -> Result<SurfaceSample> {
    require_finite("r", r)?;
    if r < 0.0 {
        return Err(invalid("r", format!("radius must be ≥ 0, got {r}")));
    }
    if include_bh && r == 0.0 {
        return Err(MabError::Singularity {
            what: "the Born-Huang term",
        });
    }
    let base = 0.5 * r * r + if include_bh { born_huang(r) } else { 0.0 };
    let g = params.coupling(r);
    Ok(SurfaceSample {
        r,
        e_minus: base - g,
        e_plus: base + g,
        include_born_huang: include_bh,
    })
}

/// 2k²; the Born-Oppenheimer regime needs this ≫ 1.
pub fn bo_regime_margin(params: &ModelParams) -> f64 {
    2.0 * params.k() * params.k()
}

/// |ξ|·|θ̇| / (2k²); adiabatic electrons need this ≪ 1.
pub fn adiabaticity_margin(params: &ModelParams, theta_dot: f64) -> f64 {
    params.xi().value().abs() * theta_dot.abs() / bo_regime_margin(params)
}

/// Effective fields acting on the pseudospin in the co-rotating frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveFields {
    /// Magnetic field (angular-frequency units); H′_spin = ½ B·σ.
    pub b: Vector3<f64>,
    /// Radial electric field coefficient ξ/r of a line charge at r = 0.
    pub e_radial: f64,
}

/// B = (2k·r_ref^(2|ξ|), 0, −2ξθ̇), E = (ξ/r) e_r.
pub fn effective_fields(params: &ModelParams, theta_dot: f64, r: f64) -> Result<EffectiveFields> {
    require_finite("theta_dot", theta_dot)?;
    require_finite("r", r)?;
    if r == 0.0 {
        return Err(MabError::Singularity {
            what: "the effective electric field",
        });
    }
    if r < 0.0 {
        return Err(invalid("r", format!("radius must be > 0, got {r}")));
    }
    let xi = params.xi().value();
    Ok(EffectiveFields {
        b: Vector3::new(params.fast_frequency(), 0.0, -2.0 * xi * theta_dot),
        e_radial: xi / r,
    })
}

/// (σx(θ), σy(θ), σz) for the frame rotated by 2ξθ about z.
pub fn rotated_pauli_frame(
    theta: f64,
    xi: EffectOrder,
) -> (SpinOperator, SpinOperator, SpinOperator) {
    let (s, co) = (2.0 * xi.value() * theta).sin_cos();
    (
        SpinOperator::from_bloch(0.0, Vector3::new(co, s, 0.0)),
        SpinOperator::from_bloch(0.0, Vector3::new(-s, co, 0.0)),
        SpinOperator::sigma_z(),
    )
}

/// U(θ) = exp(−iξθσz), the transformation to the co-rotating frame.
pub fn frame_rotation(theta: f64, xi: EffectOrder) -> Matrix2<C64> {
    let a = xi.value() * theta;
    Matrix2::new(
        C64::from_polar(1.0, -a),
        c(0.0, 0.0),
        c(0.0, 0.0),
        C64::from_polar(1.0, a),
    )
}

/// ‖U†H_e(r_ref, θ)U − k·r_ref^(2|ξ|)·σx‖_F.
pub fn rotating_frame_residual(params: &ModelParams, theta: f64) -> Result<f64> {
    let h = electronic_hamiltonian(params, params.r_ref(), theta)?;
    let u = frame_rotation(theta, params.xi());
    let rotated = u.adjoint() * h.matrix() * u;
    let target = SpinOperator::sigma_x().matrix() * c(params.coupling(params.r_ref()), 0.0);
    Ok((rotated - target).norm())
}
