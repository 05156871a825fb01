use crate::error::{invalid, require_finite, Result};
use crate::params::EffectOrder;

/// Upper bound on the number of Fourier harmonics in a gauge.
pub const MAX_HARMONICS: usize = 64;

/// A gauge function α(θ) multiplying the adiabatic state by e^{iα(θ)}.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum GaugeSpec {
    /// α = 0. The lower state is double-valued for half-integer ξ.
    #[default]
    Zero,
    /// α = ξθ. The lower state is single-valued around the intersection.
    SingleValued,
    /// α(θ) = a0 + c·θ + Σ aₙ cos(nθ) + bₙ sin(nθ).
    Fourier(FourierGauge),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FourierGauge {
    a0: f64,
    linear: f64,
    harmonics: Vec<(f64, f64)>,
}

impl FourierGauge {
    /// `harmonics[n-1] = (aₙ, bₙ)`.
    pub fn new(a0: f64, linear: f64, harmonics: Vec<(f64, f64)>) -> Result<Self> {
        require_finite("a0", a0)?;
        require_finite("linear", linear)?;
        if harmonics.len() > MAX_HARMONICS {
            return Err(invalid(
                "gauge",
                format!("at most {MAX_HARMONICS} harmonics, got {}", harmonics.len()),
            ));
        }
        for &(a, b) in &harmonics {
            require_finite("gauge coefficient", a)?;
            require_finite("gauge coefficient", b)?;
        }
        Ok(FourierGauge {
            a0,
            linear,
            harmonics,
        })
    }

    pub fn linear_only(c: f64) -> Result<Self> {
        Self::new(0.0, c, Vec::new())
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    pub fn linear(&self) -> f64 {
        self.linear
    }

    pub fn harmonics(&self) -> &[(f64, f64)] {
        &self.harmonics
    }

    fn value(&self, theta: f64) -> f64 {
        let series: f64 = self
            .harmonics
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| {
                let (s, c) = ((i + 1) as f64 * theta).sin_cos();
                a * c + b * s
            })
            .sum();
        self.a0 + self.linear * theta + series
    }

    fn derivative(&self, theta: f64) -> f64 {
        let series: f64 = self
            .harmonics
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| {
                let n = (i + 1) as f64;
                let (s, c) = (n * theta).sin_cos();
                n * (b * c - a * s)
            })
            .sum();
        self.linear + series
    }
}

impl GaugeSpec {
    pub fn alpha(&self, theta: f64, xi: EffectOrder) -> f64 {
        match self {
            GaugeSpec::Zero => 0.0,
            GaugeSpec::SingleValued => xi.value() * theta,
            GaugeSpec::Fourier(g) => g.value(theta),
        }
    }

    /// dα/dθ, exact for every variant.
    pub fn alpha_prime(&self, theta: f64, xi: EffectOrder) -> f64 {
        match self {
            GaugeSpec::Zero => 0.0,
            GaugeSpec::SingleValued => xi.value(),
            GaugeSpec::Fourier(g) => g.derivative(theta),
        }
    }
}
