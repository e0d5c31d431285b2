//! Ornstein-Uhlenbeck noise paths and their statistics.
//!
//! The update is the exact discretization of the stationary OU process with
//! autocovariance `D kappa e^{-kappa |t-t'|}`:
//!
//! ```text
//! x[n+1] = x[n] e^{-kappa dt} + sqrt(D kappa (1 - e^{-2 kappa dt})) xi[n]
//! ```
//!
//! so the sampled path has the correct covariance at any step size; the
//! step-size bound exists only for the atom integrator riding on top.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::scalar::Scalar;

/// Discretization and ensemble bookkeeping for stochastic runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OUConfig<T> {
    /// Integrator step, units of 1/gamma.
    pub dt: T,
    /// Number of steps per trajectory (the path has `n_steps + 1` samples).
    pub n_steps: usize,
    /// Base seed; trajectory `i` draws from an independent stream `(seed, i)`.
    pub seed: u64,
    /// Ensemble size.
    pub n_traj: usize,
}

impl<T: Scalar> OUConfig<T> {
    pub fn new(dt: T, n_steps: usize, seed: u64, n_traj: usize) -> Result<Self> {
        if !(dt > T::zero()) || !dt.is_finite() {
            return Err(Error::InvalidParameter {
                name: "dt",
                value: dt.to_f64().unwrap_or(f64::NAN),
                reason: "must be finite and > 0",
            });
        }
        if n_traj < 1 {
            return Err(Error::InvalidParameter {
                name: "n_traj",
                value: 0.0,
                reason: "need at least one trajectory",
            });
        }
        if n_steps < 1 {
            return Err(Error::InvalidParameter {
                name: "n_steps",
                value: 0.0,
                reason: "need at least one step",
            });
        }
        Ok(Self {
            dt,
            n_steps,
            seed,
            n_traj,
        })
    }

    /// Largest admissible step for the given model: `0.1 / max(kappa, Omega,
    /// gamma)`, resolving both the noise correlation time and the Rabi
    /// period. Violations are hard errors; there is no silent sub-stepping.
    pub fn check_step_bound(&self, p: &ModelParams<T>) -> Result<()> {
        let fastest = p.kappa.max(p.omega).max(p.gamma);
        let bound = T::lit(0.1) / fastest;
        if self.dt > bound * (T::one() + T::lit(1e-12)) {
            return Err(Error::StepSizeViolation {
                dt: self.dt.to_f64().unwrap_or(f64::NAN),
                bound: bound.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(())
    }
}

/// One sampled noise path, with its sampling step.
#[derive(Debug, Clone, PartialEq)]
pub struct OUTrajectory<T> {
    pub samples: Vec<T>,
    pub dt: T,
}

/// RNG stream for trajectory `index` under the base seed: a splittable
/// counter construction, so ensembles are reproducible regardless of
/// evaluation order.
pub(crate) fn stream_rng(seed: u64, index: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Generate the trajectory with stream index 0.
pub fn generate_ou<T: Scalar>(cfg: &OUConfig<T>, d_strength: T, kappa: T) -> Result<OUTrajectory<T>>
where
    StandardNormal: Distribution<T>,
{
    generate_ou_indexed(cfg, d_strength, kappa, 0)
}

/// Generate the noise path for one trajectory index.
///
/// The initial sample is drawn from the stationary law `Normal(0, D kappa)`.
/// `D = 0` yields the identically zero path; `kappa = 0` with `D > 0` is
/// rejected (infinitely correlated field).
pub fn generate_ou_indexed<T: Scalar>(
    cfg: &OUConfig<T>,
    d_strength: T,
    kappa: T,
    index: u64,
) -> Result<OUTrajectory<T>>
where
    StandardNormal: Distribution<T>,
{
    if d_strength < T::zero() {
        return Err(Error::InvalidParameter {
            name: "d_strength",
            value: d_strength.to_f64().unwrap_or(f64::NAN),
            reason: "must be >= 0",
        });
    }
    let n = cfg.n_steps + 1;
    if d_strength == T::zero() {
        return Ok(OUTrajectory {
            samples: vec![T::zero(); n],
            dt: cfg.dt,
        });
    }
    if !(kappa > T::zero()) {
        return Err(Error::InfiniteCorrelationTime);
    }

    let mut rng = stream_rng(cfg.seed, index);
    let stationary_sd = (d_strength * kappa).sqrt();
    let decay = (-kappa * cfg.dt).exp();
    let kick = (d_strength * kappa * (T::one() - decay * decay)).sqrt();

    let mut samples = Vec::with_capacity(n);
    let mut x = stationary_sd * rng.sample::<T, _>(StandardNormal);
    samples.push(x);
    for _ in 0..cfg.n_steps {
        x = x * decay + kick * rng.sample::<T, _>(StandardNormal);
        samples.push(x);
    }
    Ok(OUTrajectory {
        samples,
        dt: cfg.dt,
    })
}

/// Sample variance (mean-subtracted, denominator n-1).
pub fn sample_variance<T: Scalar>(xs: &[T]) -> T {
    let n = T::of_usize(xs.len());
    let mean = xs.iter().copied().sum::<T>() / n;
    let ss = xs.iter().map(|&x| (x - mean) * (x - mean)).sum::<T>();
    ss / (n - T::one())
}

/// Sample autocovariance at integer lag (mean-subtracted, denominator n-lag).
pub fn autocovariance<T: Scalar>(xs: &[T], lag: usize) -> T {
    let n = xs.len();
    assert!(lag < n, "lag beyond series length");
    let mean = xs.iter().copied().sum::<T>() / T::of_usize(n);
    let mut acc = T::zero();
    for i in 0..n - lag {
        acc += (xs[i] - mean) * (xs[i + lag] - mean);
    }
    acc / T::of_usize(n - lag)
}

/// Analytic (Bartlett) standard error of the lag-`lag` autocovariance
/// estimator for a stationary OU series of length `n` with step `dt`:
///
/// ```text
/// Var c(l) ~ (D k)^2/n [ (1+q^2)/(1-q^2) + 2 q^{2l}/(1-q^2) + (2l-1) q^{2l} ],
/// q = e^{-kappa dt}
/// ```
///
/// (lag 0 reduces to the variance-of-variance formula for a correlated
/// Gaussian series).
pub fn autocov_standard_error<T: Scalar>(
    d_strength: T,
    kappa: T,
    dt: T,
    n: usize,
    lag: usize,
) -> T {
    let q = (-kappa * dt).exp();
    let q2 = q * q;
    let one = T::one();
    let q2l = q2.powi(lag as i32);
    let two = T::lit(2.0);
    // (2l - 1) evaluates to -1 at l = 0, which reproduces the plain
    // variance-of-variance formula 2(1+q^2)/(1-q^2) for that case.
    let term = (one + q2) / (one - q2) + two * q2l / (one - q2)
        + (two * T::of_usize(lag) - one) * q2l;
    let var = d_strength * kappa;
    var * (term / T::of_usize(n)).sqrt()
}

/// Skewness and excess kurtosis of a thinned stationary sample, with the
/// i.i.d. standard errors sqrt(6/n) and sqrt(24/n).
///
/// `stride` should span several correlation times so the retained samples
/// are effectively independent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentCheck<T> {
    pub skewness: T,
    pub excess_kurtosis: T,
    pub se_skewness: T,
    pub se_kurtosis: T,
    pub n_used: usize,
}

impl<T: Scalar> MomentCheck<T> {
    pub fn gaussian_within(&self, n_se: T) -> bool {
        self.skewness.abs() <= n_se * self.se_skewness
            && self.excess_kurtosis.abs() <= n_se * self.se_kurtosis
    }
}

pub fn moment_normality_check<T: Scalar>(xs: &[T], stride: usize) -> MomentCheck<T> {
    let thin: Vec<T> = xs.iter().copied().step_by(stride.max(1)).collect();
    let n = T::of_usize(thin.len());
    let mean = thin.iter().copied().sum::<T>() / n;
    let m2 = thin.iter().map(|&x| (x - mean).powi(2)).sum::<T>() / n;
    let m3 = thin.iter().map(|&x| (x - mean).powi(3)).sum::<T>() / n;
    let m4 = thin.iter().map(|&x| (x - mean).powi(4)).sum::<T>() / n;
    MomentCheck {
        skewness: m3 / m2.powf(T::lit(1.5)),
        excess_kurtosis: m4 / (m2 * m2) - T::lit(3.0),
        se_skewness: (T::lit(6.0) / n).sqrt(),
        se_kurtosis: (T::lit(24.0) / n).sqrt(),
        n_used: thin.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n_steps: usize) -> OUConfig<f64> {
        OUConfig::new(0.005, n_steps, 42, 1).unwrap()
    }

    #[test]
    fn zero_strength_is_the_zero_path() {
        let t = generate_ou(&cfg(100), 0.0, 20.0).unwrap();
        assert!(t.samples.iter().all(|&x| x == 0.0));
        assert_eq!(t.samples.len(), 101);
    }

    #[test]
    fn zero_bandwidth_with_noise_rejected() {
        assert!(matches!(
            generate_ou(&cfg(10), 1.0, 0.0),
            Err(Error::InfiniteCorrelationTime)
        ));
    }

    #[test]
    fn reproducible_per_seed_and_stream() {
        let a = generate_ou_indexed(&cfg(50), 2.0, 20.0, 3).unwrap();
        let b = generate_ou_indexed(&cfg(50), 2.0, 20.0, 3).unwrap();
        assert_eq!(a, b);
        let c = generate_ou_indexed(&cfg(50), 2.0, 20.0, 4).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn stationary_variance_and_autocovariance() {
        // 10^6 steps: variance within 3 SE of D kappa, lag-(1/kappa)
        // autocovariance within 3 SE of D kappa / e
        let (d, k) = (2.0, 20.0);
        let c = cfg(1_000_000);
        let t = generate_ou(&c, d, k).unwrap();
        let target = d * k;
        let v = sample_variance(&t.samples);
        let se0 = autocov_standard_error(d, k, c.dt, t.samples.len(), 0);
        assert!(
            (v - target).abs() < 3.0 * se0,
            "variance {v} vs {target} (3 SE = {})",
            3.0 * se0
        );

        let lag = (1.0 / (k * c.dt)).round() as usize;
        let tau = lag as f64 * c.dt;
        let expect = target * (-k * tau).exp();
        let cv = autocovariance(&t.samples, lag);
        let se = autocov_standard_error(d, k, c.dt, t.samples.len(), lag);
        assert!(
            (cv - expect).abs() < 3.0 * se,
            "autocov {cv} vs {expect} (3 SE = {})",
            3.0 * se
        );
    }

    #[test]
    fn moments_are_gaussian() {
        let (d, k) = (2.0, 20.0);
        let c = cfg(1_000_000);
        let t = generate_ou(&c, d, k).unwrap();
        let stride = (5.0 / (k * c.dt)).ceil() as usize;
        let m = moment_normality_check(&t.samples, stride);
        assert!(m.gaussian_within(3.0), "{m:?}");
    }

    #[test]
    fn step_bound_enforced() {
        let p = ModelParams::unit_gamma(40.0, 20.0, 2.0, 0.0).unwrap();
        assert!(OUConfig::new(0.0025, 10, 1, 1).unwrap().check_step_bound(&p).is_ok());
        assert!(matches!(
            OUConfig::new(0.01, 10, 1, 1).unwrap().check_step_bound(&p),
            Err(Error::StepSizeViolation { .. })
        ));
    }
}
