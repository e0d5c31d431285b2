//! Bloch-vector state, the affine generator acting on it, and the
//! dressed-basis view.
//!
//! Conventions (fixed here once, verified by the 2x2 oracle tests):
//! the excited state is the first basis vector, sigma_z is the population
//! inversion (ground state = (0, 0, -1)), sigma_x = sigma_- + sigma_+ and
//! sigma_y = i(sigma_- - sigma_+).

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{mat_vec, Mat3, Vec3};
use crate::scalar::Scalar;

/// Numerical slack allowed on the unit-ball constraint |s| <= 1.
pub const BLOCH_NORM_TOL: f64 = 1e-6;

/// Expectation values of the three Pauli operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochState<T> {
    pub sx: T,
    pub sy: T,
    pub sz: T,
}

impl<T: Scalar> BlochState<T> {
    pub fn new(sx: T, sy: T, sz: T) -> Result<Self> {
        let norm2 = sx * sx + sy * sy + sz * sz;
        let lim = T::one() + T::lit(BLOCH_NORM_TOL);
        if !norm2.is_finite() || norm2.sqrt() > lim {
            return Err(Error::InvalidParameter {
                name: "bloch norm",
                value: norm2.sqrt().to_f64().unwrap_or(f64::NAN),
                reason: "Bloch vector must lie in the closed unit ball",
            });
        }
        Ok(Self { sx, sy, sz })
    }

    pub fn ground() -> Self {
        Self {
            sx: T::zero(),
            sy: T::zero(),
            sz: -T::one(),
        }
    }

    pub fn norm(&self) -> T {
        (self.sx * self.sx + self.sy * self.sy + self.sz * self.sz).sqrt()
    }

    pub fn as_array(&self) -> Vec3<T> {
        [self.sx, self.sy, self.sz]
    }

    pub fn from_array(v: Vec3<T>) -> Result<Self> {
        Self::new(v[0], v[1], v[2])
    }

    /// Steady-state excited population <sigma_+ sigma_-> = (1 + sz)/2.
    pub fn excited_population(&self) -> T {
        (T::one() + self.sz) / T::lit(2.0)
    }

    /// <sigma_-> = (sx - i sy)/2.
    pub fn sigma_minus(&self) -> Complex<T> {
        Complex::new(self.sx / T::lit(2.0), -self.sy / T::lit(2.0))
    }
}

/// Affine generator of Bloch dynamics: d/dt s = drift * s + pump.
///
/// Trace preservation is built into the representation; complete positivity
/// is a property of the builders that produce these, not of the type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineBlochGenerator<T> {
    pub drift: Mat3<T>,
    pub pump: Vec3<T>,
}

impl<T: Scalar> AffineBlochGenerator<T> {
    pub fn apply(&self, s: &Vec3<T>) -> Vec3<T> {
        let ax = mat_vec(&self.drift, s);
        [ax[0] + self.pump[0], ax[1] + self.pump[1], ax[2] + self.pump[2]]
    }

    /// Fixed-step RK4 propagation of the affine flow for `t_total`, split
    /// into `n_steps` equal steps. Deterministic and allocation-free.
    pub fn evolve_rk4(&self, s0: Vec3<T>, t_total: T, n_steps: usize) -> Vec3<T> {
        let h = t_total / T::of_usize(n_steps.max(1));
        let two = T::lit(2.0);
        let sixth = h / T::lit(6.0);
        let mut s = s0;
        for _ in 0..n_steps {
            let k1 = self.apply(&s);
            let k2 = self.apply(&add_scaled(&s, &k1, h / two));
            let k3 = self.apply(&add_scaled(&s, &k2, h / two));
            let k4 = self.apply(&add_scaled(&s, &k3, h));
            for i in 0..3 {
                s[i] = s[i] + sixth * (k1[i] + two * (k2[i] + k3[i]) + k4[i]);
            }
        }
        s
    }

    /// Largest real part among the drift eigenvalues (< 0 for gamma > 0).
    pub fn max_drift_eigenvalue_real(&self) -> T {
        crate::linalg::max_eig_real_part(&self.drift)
    }
}

pub(crate) fn add_scaled<T: Scalar>(s: &Vec3<T>, k: &Vec3<T>, h: T) -> Vec3<T> {
    [s[0] + h * k[0], s[1] + h * k[1], s[2] + h * k[2]]
}

/// State in the semiclassical dressed basis |+-> = (|e> +- |g>)/sqrt(2).
///
/// With that basis choice (excited state first) the dressed inversion
/// rho_++ - rho_-- equals <sigma_x> and the dressed coherence <+|rho|->
/// equals (<sigma_z> + i <sigma_y>)/2; the 2x2 basis-change oracle in the
/// test suite pins these signs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedState<T> {
    pub inversion: T,
    pub coherence: Complex<T>,
}

pub fn to_dressed<T: Scalar>(b: &BlochState<T>) -> DressedState<T> {
    DressedState {
        inversion: b.sx,
        coherence: Complex::new(b.sz / T::lit(2.0), b.sy / T::lit(2.0)),
    }
}
