use std::fmt;

use crate::error::{invalid, require_finite, Result};

/// A number of the form n/2, stored as its doubled integer value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInteger(i32);

impl HalfInteger {
    pub const fn from_twice(twice: i32) -> Self {
        HalfInteger(twice)
    }

    pub const fn from_int(n: i32) -> Self {
        HalfInteger(2 * n)
    }

    /// Accepts any finite value whose double is an integer (within 1e-9).
    pub fn from_f64(value: f64) -> Option<Self> {
        if !value.is_finite() {
            return None;
        }
        let twice = (2.0 * value).round();
        if (2.0 * value - twice).abs() > 1e-9 || twice.abs() > i32::MAX as f64 {
            return None;
        }
        Some(HalfInteger(twice as i32))
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// Integer value, if this is one.
    pub const fn as_integer(self) -> Option<i32> {
        if self.is_integer() {
            Some(self.0 / 2)
        } else {
            None
        }
    }
}

impl std::ops::Neg for HalfInteger {
    type Output = HalfInteger;
    fn neg(self) -> HalfInteger {
        HalfInteger(-self.0)
    }
}

impl std::ops::Add for HalfInteger {
    type Output = HalfInteger;
    fn add(self, rhs: HalfInteger) -> HalfInteger {
        HalfInteger(self.0 + rhs.0)
    }
}

impl std::ops::Sub for HalfInteger {
    type Output = HalfInteger;
    fn sub(self, rhs: HalfInteger) -> HalfInteger {
        HalfInteger(self.0 - rhs.0)
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Order ξ of the Jahn-Teller effect: ½ for the linear model, −1 for the
/// quadratic one. Any nonzero half-integer is accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EffectOrder(HalfInteger);

impl EffectOrder {
    pub const LINEAR: EffectOrder = EffectOrder(HalfInteger::from_twice(1));
    pub const QUADRATIC: EffectOrder = EffectOrder(HalfInteger::from_twice(-2));

    pub fn new(xi: f64) -> Result<Self> {
        require_finite("xi", xi)?;
        let h = HalfInteger::from_f64(xi)
            .ok_or_else(|| invalid("xi", format!("2ξ must be an integer, got ξ = {xi}")))?;
        Self::from_half_integer(h)
    }

    pub fn from_half_integer(h: HalfInteger) -> Result<Self> {
        if h.twice() == 0 {
            return Err(invalid("xi", "ξ must be nonzero"));
        }
        Ok(EffectOrder(h))
    }

    pub fn value(self) -> f64 {
        self.0.value()
    }

    pub fn half_integer(self) -> HalfInteger {
        self.0
    }

    /// Exponent 2|ξ| of the radial coupling k·r^(2|ξ|).
    pub fn radial_power(self) -> i32 {
        self.0.twice().abs()
    }

    pub fn is_canonical(self) -> bool {
        self == Self::LINEAR || self == Self::QUADRATIC
    }
}

impl fmt::Display for EffectOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The two dials of the model: vibronic coupling `k` and effect order `ξ`,
/// plus the frozen radius used by the rotating-frame analyses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    k: f64,
    xi: EffectOrder,
    r_ref: f64,
}

impl ModelParams {
    /// `r_ref` defaults to `k`, the minimum of the lower surface.
    pub fn new(k: f64, xi: EffectOrder) -> Result<Self> {
        Self::with_reference_radius(k, xi, k)
    }

    pub fn with_reference_radius(k: f64, xi: EffectOrder, r_ref: f64) -> Result<Self> {
        require_finite("k", k)?;
        require_finite("r_ref", r_ref)?;
        if k <= 0.0 {
            return Err(invalid("k", format!("must be > 0, got {k}")));
        }
        if r_ref <= 0.0 {
            return Err(invalid("r_ref", format!("must be > 0, got {r_ref}")));
        }
        Ok(ModelParams { k, xi, r_ref })
    }

    /// Zero-coupling reference model (isotropic 2D oscillator), with
    /// `r_ref = 1`. Only meaningful for spectra.
    pub fn uncoupled(xi: EffectOrder) -> Self {
        ModelParams {
            k: 0.0,
            xi,
            r_ref: 1.0,
        }
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn xi(&self) -> EffectOrder {
        self.xi
    }

    pub fn r_ref(&self) -> f64 {
        self.r_ref
    }

    pub fn is_canonical(&self) -> bool {
        self.xi.is_canonical()
    }

    /// k·r^(2|ξ|), the half-gap between the adiabatic surfaces at radius r.
    pub fn coupling(&self, r: f64) -> f64 {
        self.k * r.powi(self.xi.radial_power())
    }

    /// Electronic precession frequency at the reference radius,
    /// 2k·r_ref^(2|ξ|) (= 2k² for ξ = ½, r_ref = k).
    pub fn fast_frequency(&self) -> f64 {
        2.0 * self.coupling(self.r_ref)
    }

    /// One period of the fast electronic motion.
    pub fn fast_period(&self) -> f64 {
        std::f64::consts::TAU / self.fast_frequency()
    }

    /// Largest admissible propagation step, π/(25·ω_fast) (= π/(50k²)
    /// in the canonical linear case).
    pub fn max_step(&self) -> f64 {
        std::f64::consts::PI / (25.0 * self.fast_frequency())
    }
}
