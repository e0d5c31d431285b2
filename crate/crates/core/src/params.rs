//! Physical parameter sets and their admissibility rules.
//!
//! All rates are expressed in units of the atomic decay constant gamma, all
//! angles in radians. Parameters are validated once at construction and the
//! types are immutable afterwards.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default ratio used by the driving-regime predicate: the model is
/// considered safely inside its validity regime when
/// `omega >= R * sqrt(D * kappa)` and `kappa >= R * gamma`.
pub const DEFAULT_REGIME_RATIO: f64 = 5.0;

/// Parameters of the coherently driven atom with an amplitude-fluctuating
/// stochastic field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams<T> {
    /// Rabi frequency of the coherent field.
    pub omega: T,
    /// Atomic decay constant (the unit rate; > 0).
    pub gamma: T,
    /// Bandwidth of the stochastic field.
    pub kappa: T,
    /// Correlation strength D of the stochastic field.
    pub d_strength: T,
    /// Relative phase between coherent and stochastic fields.
    pub phi: T,
}

impl<T: Scalar> ModelParams<T> {
    pub fn new(omega: T, gamma: T, kappa: T, d_strength: T, phi: T) -> Result<Self> {
        fn bad<T: Scalar>(name: &'static str, v: T, reason: &'static str) -> Error {
            Error::InvalidParameter {
                name,
                value: v.to_f64().unwrap_or(f64::NAN),
                reason,
            }
        }
        if !(gamma > T::zero()) || !gamma.is_finite() {
            return Err(bad("gamma", gamma, "must be finite and > 0"));
        }
        if !(omega >= T::zero()) || !omega.is_finite() {
            return Err(bad("omega", omega, "must be finite and >= 0"));
        }
        if !(kappa >= T::zero()) || !kappa.is_finite() {
            return Err(bad("kappa", kappa, "must be finite and >= 0"));
        }
        if !(d_strength >= T::zero()) || !d_strength.is_finite() {
            return Err(bad("d_strength", d_strength, "must be finite and >= 0"));
        }
        if !phi.is_finite() {
            return Err(bad("phi", phi, "must be finite"));
        }
        Ok(Self {
            omega,
            gamma,
            kappa,
            d_strength,
            phi,
        })
    }

    /// Convenience constructor with `gamma = 1` (the unit system used by all
    /// figure parameter sets).
    pub fn unit_gamma(omega: T, kappa: T, d_strength: T, phi: T) -> Result<Self> {
        Self::new(omega, T::one(), kappa, d_strength, phi)
    }

    /// `(omega / sqrt(D kappa), kappa / gamma)`; both must exceed the regime
    /// ratio for the effective description to be trustworthy. The first
    /// margin is infinite when D or kappa vanishes.
    pub fn regime_margins(&self) -> (T, T) {
        let dk = self.d_strength * self.kappa;
        let first = if dk > T::zero() {
            self.omega / dk.sqrt()
        } else {
            T::infinity()
        };
        (first, self.kappa / self.gamma)
    }

    /// Regime predicate at a configurable ratio. Violation is a warning
    /// condition, never an error: the generators stay well defined.
    pub fn regime_ok_with(&self, ratio: T) -> bool {
        if self.d_strength == T::zero() {
            return true;
        }
        let (a, b) = self.regime_margins();
        a >= ratio && b >= ratio
    }

    pub fn regime_ok(&self) -> bool {
        self.regime_ok_with(T::lit(DEFAULT_REGIME_RATIO))
    }
}

/// Which correlation class a squeezed-reservoir parameter set falls in.
///
/// `Classical` means |M| <= N (attainable by a classically squeezed field);
/// `Nonclassical` means N < |M| <= sqrt(N(N+1)), attainable only by a
/// quantum squeezed vacuum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrelationClass {
    Classical,
    Nonclassical,
}

/// Slack on the ideal-squeezing bound |M| <= sqrt(N(N+1)).
pub const ISV_BOUND_TOL: f64 = 1e-9;

/// Squeezed-reservoir parameters (photon number N, correlation magnitude
/// |M|, squeezing phase Phi).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezedParams<T> {
    n_photon: T,
    m_mag: T,
    big_phi: T,
    class: CorrelationClass,
}

impl<T: Scalar> SqueezedParams<T> {
    pub fn new(n_photon: T, m_mag: T, big_phi: T) -> Result<Self> {
        fn bad<T: Scalar>(name: &'static str, v: T, reason: &'static str) -> Error {
            Error::InvalidParameter {
                name,
                value: v.to_f64().unwrap_or(f64::NAN),
                reason,
            }
        }
        if !(n_photon >= T::zero()) || !n_photon.is_finite() {
            return Err(bad("n_photon", n_photon, "must be finite and >= 0"));
        }
        if !(m_mag >= T::zero()) || !m_mag.is_finite() {
            return Err(bad("m_mag", m_mag, "must be finite and >= 0"));
        }
        if !big_phi.is_finite() {
            return Err(bad("big_phi", big_phi, "must be finite"));
        }
        let ideal = (n_photon * (n_photon + T::one())).sqrt();
        if m_mag > ideal + T::lit(ISV_BOUND_TOL) {
            return Err(bad(
                "m_mag",
                m_mag,
                "exceeds the ideal-squeezing bound sqrt(N(N+1))",
            ));
        }
        let class = if m_mag <= n_photon {
            CorrelationClass::Classical
        } else {
            CorrelationClass::Nonclassical
        };
        Ok(Self {
            n_photon,
            m_mag,
            big_phi,
            class,
        })
    }

    /// Ideal squeezed vacuum: |M| pinned to sqrt(N(N+1)).
    pub fn ideal(n_photon: T, big_phi: T) -> Result<Self> {
        let m = (n_photon * (n_photon + T::one())).sqrt();
        Self::new(n_photon, m, big_phi)
    }

    pub fn n_photon(&self) -> T {
        self.n_photon
    }

    pub fn m_mag(&self) -> T {
        self.m_mag
    }

    pub fn big_phi(&self) -> T {
        self.big_phi
    }

    pub fn class(&self) -> CorrelationClass {
        self.class
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonpositive_gamma() {
        assert!(ModelParams::new(1.0, 0.0, 1.0, 1.0, 0.0).is_err());
        assert!(ModelParams::new(1.0, -1.0, 1.0, 1.0, 0.0).is_err());
        assert!(ModelParams::new(1.0, f64::NAN, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn rejects_negative_rates() {
        assert!(ModelParams::unit_gamma(-1.0, 1.0, 1.0, 0.0).is_err());
        assert!(ModelParams::unit_gamma(1.0, -1.0, 1.0, 0.0).is_err());
        assert!(ModelParams::unit_gamma(1.0, 1.0, -1.0, 0.0).is_err());
    }

    #[test]
    fn figure_parameters_pass_the_regime_predicate() {
        // Omega/sqrt(D kappa) ~ 6.3 and kappa/gamma = 100 here, so the
        // default ratio of 5 admits them.
        let p = ModelParams::unit_gamma(200.0, 100.0, 10.0, 0.0).unwrap();
        assert!(p.regime_ok());
        let (a, b) = p.regime_margins();
        assert!((a - 200.0 / (1000.0f64).sqrt()).abs() < 1e-12);
        assert_eq!(b, 100.0);
    }

    #[test]
    fn regime_violation_is_reported_not_fatal() {
        let p = ModelParams::unit_gamma(10.0, 2.0, 10.0, 0.0).unwrap();
        assert!(!p.regime_ok());
    }

    #[test]
    fn vacuum_is_always_in_regime() {
        let p = ModelParams::unit_gamma(0.0, 0.0, 0.0, 0.0).unwrap();
        assert!(p.regime_ok());
    }

    #[test]
    fn squeezed_classes() {
        let c = SqueezedParams::new(0.25, 0.25, 0.0).unwrap();
        assert_eq!(c.class(), CorrelationClass::Classical);
        let q = SqueezedParams::ideal(0.25, std::f64::consts::PI).unwrap();
        assert_eq!(q.class(), CorrelationClass::Nonclassical);
        assert!((q.m_mag() - (0.25f64 * 1.25).sqrt()).abs() < 1e-15);
        // just beyond the ideal bound
        assert!(SqueezedParams::new(0.25, (0.25f64 * 1.25).sqrt() + 1e-6, 0.0).is_err());
    }
}
