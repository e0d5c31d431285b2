//! Bloch-space generators for the three reservoir models and the closed-form
//! rate formulas.
//!
//! The stochastic-field builder expands the effective master equation
//!
//! ```text
//! rho' = -i[(Omega/2)(s+ + s-), rho]
//!        + gamma (2 s- rho s+ - s+ s- rho - rho s+ s-)
//!        + [(sz rho sz - rho), (a0 s+ - a0* s-)]
//!        + [(e^{-i phi} s- + e^{i phi} s+), [rho, (a e^{-i phi} s- + a* e^{i phi} s+)]]
//! ```
//!
//! over the Pauli basis. The expansion below was derived by hand and is
//! locked elementwise against a brute-force 2x2 superoperator oracle in the
//! integration tests; the printed formulas in the doc comments are the
//! closed forms it produces.

use num_complex::Complex;

use crate::bloch::AffineBlochGenerator;
use crate::error::{Error, Result};
use crate::params::{ModelParams, SqueezedParams};
use crate::scalar::Scalar;

/// Complex rates weighting the stochastic-field terms of the effective
/// master equation:
///
/// ```text
/// a0 = -i D Omega kappa (1 - e^{2 i phi}) / (8 (kappa^2 + Omega^2))
/// a  = (D/8) [ 1 + e^{2 i phi} + kappa^2/(kappa^2+Omega^2) (1 - e^{2 i phi}) ]
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorCoefficients<T> {
    pub alpha0: Complex<T>,
    pub alpha: Complex<T>,
}

/// Fraction kappa^2 / (kappa^2 + Omega^2), continued as 1 when both rates
/// vanish (the kappa-dominated limit).
fn bandwidth_fraction<T: Scalar>(p: &ModelParams<T>) -> T {
    let denom = p.kappa * p.kappa + p.omega * p.omega;
    if denom > T::zero() {
        p.kappa * p.kappa / denom
    } else {
        T::one()
    }
}

pub fn compute_coefficients<T: Scalar>(p: &ModelParams<T>) -> GeneratorCoefficients<T> {
    let two_phi = p.phi + p.phi;
    // 1 - e^{2 i phi} and 1 + e^{2 i phi}
    let e2 = Complex::new(two_phi.cos(), two_phi.sin());
    let one = Complex::new(T::one(), T::zero());
    let minus = one - e2;
    let plus = one + e2;

    let denom = p.kappa * p.kappa + p.omega * p.omega;
    let alpha0 = if denom > T::zero() {
        let pref = p.d_strength * p.omega * p.kappa / (T::lit(8.0) * denom);
        Complex::new(T::zero(), -pref) * minus
    } else {
        Complex::new(T::zero(), T::zero())
    };

    let r = bandwidth_fraction(p);
    let alpha = (plus + minus * r) * (p.d_strength / T::lit(8.0));
    GeneratorCoefficients { alpha0, alpha }
}

/// Whether a builder keeps the dynamical Rabi-frequency shift produced by
/// the alpha0 term, or drops it (the approximation that sets the shifted
/// Rabi frequency back to the bare Omega, under which the stochastic model
/// coincides exactly with a classically squeezed field at phi = 0, pi/2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RabiConvention {
    #[default]
    Shifted,
    Bare,
}

/// Bloch generator of the full effective master equation.
///
/// Closed form (s = sin phi, c = cos phi, r = kappa^2/(kappa^2+Omega^2)):
///
/// ```text
///         | -(g + D r s^2)      -D s c           0  |        |  0       |
/// drift = | -D r s c            -(g + D c^2)    -Om |, pump = |  0       |
///         | 4 Re a0          Om - 4 Im a0       -gz |        | -2 gamma |
/// ```
///
/// with gz = gamma_x + gamma_y. The (z, x) and (z, y) contributions of a0
/// carry the dynamical frequency shift.
pub fn build_stochastic_generator<T: Scalar>(p: &ModelParams<T>) -> AffineBlochGenerator<T> {
    build_stochastic_generator_with(p, RabiConvention::Shifted)
}

pub fn build_stochastic_generator_with<T: Scalar>(
    p: &ModelParams<T>,
    convention: RabiConvention,
) -> AffineBlochGenerator<T> {
    let rates = quadrature_rates(p);
    let r = bandwidth_fraction(p);
    let (s, c) = p.phi.sin_cos();
    let d = p.d_strength;
    let two = T::lit(2.0);
    let four = T::lit(4.0);

    let (zx, zy) = match convention {
        RabiConvention::Shifted => {
            let a0 = compute_coefficients(p).alpha0;
            (four * a0.re, p.omega - four * a0.im)
        }
        RabiConvention::Bare => (T::zero(), p.omega),
    };

    AffineBlochGenerator {
        drift: [
            [-rates.gamma_x, -d * s * c, T::zero()],
            [-d * r * s * c, -rates.gamma_y, -p.omega],
            [zx, zy, -rates.gamma_z],
        ],
        pump: [T::zero(), T::zero(), -two * p.gamma],
    }
}

/// Shared Bloch expansion of the squeezed-reservoir master equation with a
/// possibly complex pair-correlation coefficient `m`:
///
/// ```text
/// rho' = -i[(Omega/2)(s+ + s-), rho]
///        + gamma (n+1) (2 s- rho s+ - s+ s- rho - rho s+ s-)
///        + gamma  n    (2 s+ rho s- - s- s+ rho - rho s- s+)
///        + 2 gamma (m s+ rho s+ + m* s- rho s-)
/// ```
///
/// Quadrature decay rates come out as gamma(1 + 2n - 2 Re m) for sigma_x and
/// gamma(1 + 2n + 2 Re m) for sigma_y: positive real m *suppresses* the
/// x-quadrature decay.
fn pair_correlated_generator<T: Scalar>(
    gamma: T,
    omega: T,
    n: T,
    m: Complex<T>,
) -> AffineBlochGenerator<T> {
    let two = T::lit(2.0);
    let base = gamma * (T::one() + two * n);
    let gm_re = two * gamma * m.re;
    let gm_im = two * gamma * m.im;
    AffineBlochGenerator {
        drift: [
            [-base + gm_re, -gm_im, T::zero()],
            [-gm_im, -base - gm_re, -omega],
            [T::zero(), omega, -two * base],
        ],
        pump: [T::zero(), T::zero(), -two * gamma],
    }
}

/// Classically squeezed field: real signed `m` with |m| <= n.
///
/// The sign of `m` stands in for the squeezing phase: m > 0 matches the
/// phi = 0 stochastic model (Phi = pi), m < 0 the phi = pi/2 one (Phi = 0).
pub fn build_csf_generator<T: Scalar>(
    gamma: T,
    omega: T,
    n: T,
    m: T,
) -> Result<AffineBlochGenerator<T>> {
    if !(n >= T::zero()) || !n.is_finite() {
        return Err(Error::InvalidParameter {
            name: "n",
            value: n.to_f64().unwrap_or(f64::NAN),
            reason: "must be finite and >= 0",
        });
    }
    if !(gamma > T::zero()) {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma.to_f64().unwrap_or(f64::NAN),
            reason: "must be > 0",
        });
    }
    let slack = T::lit(1e-12) * (T::one() + n);
    if m.abs() > n + slack {
        return Err(Error::InvalidParameter {
            name: "m",
            value: m.to_f64().unwrap_or(f64::NAN),
            reason: "classical correlation requires |m| <= n",
        });
    }
    Ok(pair_correlated_generator(
        gamma,
        omega,
        n,
        Complex::new(m, T::zero()),
    ))
}

/// Ideal squeezed vacuum comparator.
///
/// Convention frozen here: the squeezing phase enters through the effective
/// pair coefficient m = -|M| e^{i Phi}, so Phi = pi reduces to the real-m
/// shape with m = +|M| and Phi = 0 to m = -|M|, matching the stated
/// correspondence with the stochastic model at phi = 0 and pi/2.
pub fn build_isv_generator<T: Scalar>(
    gamma: T,
    omega: T,
    s: &SqueezedParams<T>,
) -> Result<AffineBlochGenerator<T>> {
    if !(gamma > T::zero()) {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma.to_f64().unwrap_or(f64::NAN),
            reason: "must be > 0",
        });
    }
    let phase = Complex::new(s.big_phi().cos(), s.big_phi().sin());
    let m = -phase * s.m_mag();
    Ok(pair_correlated_generator(gamma, omega, s.n_photon(), m))
}

/// Decay rates of the two dipole quadratures and of the inversion:
///
/// ```text
/// gamma_x = gamma + D kappa^2 sin^2(phi) / (kappa^2 + Omega^2)
/// gamma_y = gamma + D cos^2(phi)
/// gamma_z = gamma_x + gamma_y
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureRates<T> {
    pub gamma_x: T,
    pub gamma_y: T,
    pub gamma_z: T,
}

pub fn quadrature_rates<T: Scalar>(p: &ModelParams<T>) -> QuadratureRates<T> {
    let r = bandwidth_fraction(p);
    let (s, c) = p.phi.sin_cos();
    let gamma_x = p.gamma + p.d_strength * r * s * s;
    let gamma_y = p.gamma + p.d_strength * c * c;
    QuadratureRates {
        gamma_x,
        gamma_y,
        gamma_z: gamma_x + gamma_y,
    }
}

/// Dressed-state decay rates and the shifted Rabi frequency:
///
/// ```text
/// Gamma_par  = gamma_x
/// Gamma_perp = (gamma_y + gamma_z) / 2
/// Omega'     = Omega [1 + D kappa sin^2(phi) / (2 (kappa^2 + Omega^2))]
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedRates<T> {
    pub gamma_par: T,
    pub gamma_perp: T,
    pub omega_prime: T,
}

pub fn dressed_rates<T: Scalar>(p: &ModelParams<T>) -> DressedRates<T> {
    let q = quadrature_rates(p);
    let denom = p.kappa * p.kappa + p.omega * p.omega;
    let s = p.phi.sin();
    let shift = if denom > T::zero() {
        p.d_strength * p.kappa * s * s / (T::lit(2.0) * denom)
    } else {
        T::zero()
    };
    DressedRates {
        gamma_par: q.gamma_x,
        gamma_perp: (q.gamma_y + q.gamma_z) / T::lit(2.0),
        omega_prime: p.omega * (T::one() + shift),
    }
}
