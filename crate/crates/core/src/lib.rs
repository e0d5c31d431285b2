//! Phase-dependent spectra of a driven two-level atom.
//!
//! A two-level atom at resonance is driven by a strong coherent field (Rabi
//! frequency `Omega`) plus a weak, wide-bandwidth field whose amplitude
//! `x(t)` is a stationary Ornstein-Uhlenbeck process with autocovariance
//! `D kappa e^{-kappa |t - t'|}`. Once the fast noise is adiabatically
//! eliminated the atom sees a phase-dependent reservoir: the two dipole
//! quadratures decay at different, phase-controlled rates, and the
//! fluorescence triplet and weak-probe absorption inherit that phase
//! dependence (including gain at line centre without population inversion).
//!
//! The crate provides
//! - [`generators`]: affine Bloch-space generators for the effective
//!   stochastic-field model and for classically / ideally squeezed
//!   reservoir comparators, plus the closed-form quadrature and
//!   dressed-state rates;
//! - [`spectra`]: steady state, regression-theorem correlators in resolvent
//!   form, fluorescence and probe-absorption spectra (numeric and the
//!   three-Lorentzian closed form);
//! - [`peaks`]: peak positions, heights and half-widths;
//! - [`ou`] and [`ensemble`]: brute-force validation of the effective
//!   description by integrating the full time-dependent model over noise
//!   ensembles.
//!
//! All rates are measured in units of the atomic decay constant `gamma`,
//! and everything is generic over the floating-point [`scalar::Scalar`];
//! `*64` aliases at the crate root pin the common `f64` instantiations.

pub mod bloch;
pub mod ensemble;
pub mod error;
pub mod generators;
pub mod linalg;
pub mod ou;
pub mod params;
pub mod peaks;
pub mod scalar;
pub mod spectra;

pub use bloch::{to_dressed, AffineBlochGenerator, BlochState, DressedState};
pub use ensemble::{
    batched_decay_rate, ensemble_average, fit_quadrature_decay, integrate_trajectory,
    EnsembleResult, FittedRate, Quadrature, ELIMINATION_SZ_TOL,
};
pub use error::{Error, Result};
pub use generators::{
    build_csf_generator, build_isv_generator, build_stochastic_generator,
    build_stochastic_generator_with, compute_coefficients, dressed_rates, quadrature_rates,
    DressedRates, GeneratorCoefficients, QuadratureRates, RabiConvention,
};
pub use ou::{generate_ou, generate_ou_indexed, OUConfig, OUTrajectory};
pub use params::{CorrelationClass, ModelParams, SqueezedParams, DEFAULT_REGIME_RATIO};
pub use peaks::{peak_metrics, peak_nearest, Peak};
pub use scalar::Scalar;
pub use spectra::{
    absorption_spectrum, fluorescence_analytic, fluorescence_analytic_with, fluorescence_numeric,
    steady_state, Correlator, FrequencyGrid, SpectrumKind, SpectrumSeries,
};

/// `f64` instantiations of the core types.
pub type ModelParams64 = params::ModelParams<f64>;
pub type SqueezedParams64 = params::SqueezedParams<f64>;
pub type BlochState64 = bloch::BlochState<f64>;
pub type Generator64 = bloch::AffineBlochGenerator<f64>;
pub type FrequencyGrid64 = spectra::FrequencyGrid<f64>;
pub type SpectrumSeries64 = spectra::SpectrumSeries<f64>;
pub type OUConfig64 = ou::OUConfig<f64>;
pub type EnsembleResult64 = ensemble::EnsembleResult<f64>;
