//! Numerical laboratory for the E⊗ε Jahn-Teller model and the molecular
//! Aharonov-Bohm effect.
//!
//! Units are ħ = m = ω = 1 throughout. The model is
//!
//! ```text
//! H = ½p_r² + p_θ²/(2r²) + ½r² + k·r^(2|ξ|)·[cos(2ξθ)σx + sin(2ξθ)σy]
//! ```
//!
//! with ξ = ½ (linear) or ξ = −1 (quadratic coupling).
//!
//! * [`model`]: Hamiltonian pieces, adiabatic surfaces and states, regime
//!   margins and rotating-frame effective fields.
//! * [`dynamics`]: electronic propagation under prescribed pseudorotation,
//!   autocorrelations and their adiabatic averages.
//! * [`geometric`] / [`holonomy`]: noncyclic geometric phase, π-jumps and
//!   line integrals of the induced vector potential.
//! * [`spectrum`]: exact and Born-Oppenheimer vibronic spectra.

pub mod dynamics;
pub mod error;
pub mod gauge;
pub mod geometric;
pub mod holonomy;
pub mod model;
pub mod params;
pub mod spectrum;
pub mod spin;

pub use error::{MabError, Result};
pub use gauge::{FourierGauge, GaugeSpec};
pub use params::{EffectOrder, HalfInteger, ModelParams};
pub use spin::{SpinOperator, SpinState, C64};
