//! Steady state, two-time correlations via the regression theorem, and the
//! fluorescence / probe-absorption spectra.
//!
//! Spectra are computed from the resolvent of the affine generator (a
//! closed-form 3x3 complex solve per frequency), which is exact for these
//! dynamics; the time-domain route survives only as a test oracle.

use num_complex::Complex;

use crate::bloch::BlochState;
use crate::error::{Error, Result};
use crate::generators::{dressed_rates, RabiConvention};
use crate::linalg::{solve3, solve3_complex, CVec3};
use crate::params::ModelParams;
use crate::scalar::Scalar;
use crate::AffineBlochGenerator;

/// Strictly increasing frequency axis, in units of gamma.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid<T> {
    points: Vec<T>,
    symmetric: bool,
}

impl<T: Scalar> FrequencyGrid<T> {
    /// Build from raw points; detects (exact) mirror symmetry.
    pub fn from_points(points: Vec<T>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyGrid);
        }
        for i in 1..points.len() {
            if !(points[i] > points[i - 1]) {
                return Err(Error::GridNotIncreasing { index: i });
            }
        }
        let n = points.len();
        let symmetric = (0..n).all(|i| points[i] == -points[n - 1 - i]);
        Ok(Self { points, symmetric })
    }

    pub fn linspace(min: T, max: T, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::InvalidParameter {
                name: "grid count",
                value: count as f64,
                reason: "need at least 2 points",
            });
        }
        if !(min < max) {
            return Err(Error::InvalidParameter {
                name: "grid min",
                value: min.to_f64().unwrap_or(f64::NAN),
                reason: "min must be < max",
            });
        }
        let step = (max - min) / T::of_usize(count - 1);
        let pts = (0..count)
            .map(|i| {
                if i == count - 1 {
                    max
                } else {
                    min + step * T::of_usize(i)
                }
            })
            .collect();
        Self::from_points(pts)
    }

    /// Symmetric grid on [-half_span, half_span] built by mirroring, so the
    /// reversal symmetry holds exactly in floating point.
    pub fn symmetric_span(half_span: T, count: usize) -> Result<Self> {
        if count < 3 {
            return Err(Error::InvalidParameter {
                name: "grid count",
                value: count as f64,
                reason: "symmetric grid needs at least 3 points",
            });
        }
        let half_count = count / 2;
        let step = half_span / T::of_usize(half_count);
        let positive: Vec<T> = (1..=half_count)
            .map(|i| {
                if i == half_count {
                    half_span
                } else {
                    step * T::of_usize(i)
                }
            })
            .collect();
        Ok(Self::mirror(positive))
    }

    /// Symmetric grid with an additional dense symmetric refinement around
    /// zero; duplicates and near-duplicates are merged on the positive half
    /// before mirroring.
    pub fn symmetric_refined(
        half_span: T,
        count: usize,
        center_half_span: T,
        center_count: usize,
    ) -> Result<Self> {
        let coarse = Self::symmetric_span(half_span, count)?;
        let fine = Self::symmetric_span(center_half_span.min(half_span), center_count)?;
        let mut pos: Vec<T> = coarse
            .points
            .iter()
            .chain(fine.points.iter())
            .copied()
            .filter(|&w| w > T::zero())
            .collect();
        pos.sort_by(|a, b| a.partial_cmp(b).expect("finite grid points"));
        let merge_tol = half_span * T::lit(1e-12);
        pos.dedup_by(|a, b| (*a - *b).abs() <= merge_tol);
        Ok(Self::mirror(pos))
    }

    /// Figure-style grid: +-1.6 Omega' coverage with a dense window of
    /// +-8 Gamma_par around line centre to resolve sharp central features.
    pub fn figure_default(omega_prime: T, gamma_par: T) -> Self {
        let span = (T::lit(1.6) * omega_prime).max(T::lit(20.0) * gamma_par);
        Self::symmetric_refined(span, 4001, T::lit(8.0) * gamma_par, 801)
            .expect("figure grid construction cannot fail")
    }

    fn mirror(positive: Vec<T>) -> Self {
        let mut points = Vec::with_capacity(2 * positive.len() + 1);
        points.extend(positive.iter().rev().map(|&w| -w));
        points.push(T::zero());
        points.extend(positive.iter().copied());
        Self {
            points,
            symmetric: true,
        }
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumKind {
    Fluorescence,
    Absorption,
}

/// Sampled spectrum over a frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSeries<T> {
    pub grid: FrequencyGrid<T>,
    pub values: Vec<T>,
    pub kind: SpectrumKind,
}

impl<T: Scalar> SpectrumSeries<T> {
    pub fn new(grid: FrequencyGrid<T>, values: Vec<T>, kind: SpectrumKind) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::LengthMismatch {
                grid: grid.len(),
                values: values.len(),
            });
        }
        Ok(Self { grid, values, kind })
    }

    pub fn max_value(&self) -> T {
        self.values.iter().fold(T::neg_infinity(), |a, &b| a.max(b))
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |a, &b| a.max(b.abs()))
    }

    /// Trapezoid integral over the grid.
    pub fn integral(&self) -> T {
        let w = self.grid.points();
        let mut acc = T::zero();
        for i in 1..w.len() {
            acc += (self.values[i] + self.values[i - 1]) * (w[i] - w[i - 1]);
        }
        acc / T::lit(2.0)
    }

    /// max |S(w) - S(-w)| over a symmetric grid; None if the grid is not
    /// symmetric.
    pub fn symmetry_defect(&self) -> Option<T> {
        if !self.grid.is_symmetric() {
            return None;
        }
        let n = self.values.len();
        let mut worst = T::zero();
        for i in 0..n / 2 {
            worst = worst.max((self.values[i] - self.values[n - 1 - i]).abs());
        }
        Some(worst)
    }

    /// Value at the grid point closest to zero.
    pub fn at_line_centre(&self) -> T {
        let w = self.grid.points();
        let mut best = 0;
        for i in 1..w.len() {
            if w[i].abs() < w[best].abs() {
                best = i;
            }
        }
        self.values[best]
    }
}

/// Steady state of an affine generator: the solution of `drift s = -pump`.
///
/// The 3x3 solve is direct, so the residual is at machine level; a singular
/// drift (gamma = 0) surfaces as `DegenerateGenerator`.
pub fn steady_state<T: Scalar>(g: &AffineBlochGenerator<T>) -> Result<BlochState<T>> {
    let rhs = [-g.pump[0], -g.pump[1], -g.pump[2]];
    let s = solve3(&g.drift, &rhs)?;
    BlochState::from_array(s)
}

/// Two-time correlation function in resolvent form.
///
/// The regression theorem propagates the conditioned operator with the same
/// affine generator as one-time averages, so
/// `g(tau) = asymptote + weight . exp(drift tau) transient` and its
/// one-sided Fourier transforms reduce to 3x3 complex solves.
#[derive(Debug, Clone)]
pub struct Correlator<T> {
    drift: [[T; 3]; 3],
    weight: CVec3<T>,
    transient: CVec3<T>,
    asymptote: Complex<T>,
}

impl<T: Scalar> Correlator<T> {
    /// Emission correlation `<sigma_+(tau) sigma_-(0)>` with the reference
    /// state `state` (the steady state for spectra; any Bloch state is
    /// accepted, which the free-decay tests use).
    pub fn emission(g: &AffineBlochGenerator<T>, state: &BlochState<T>) -> Result<Self> {
        let half = T::lit(0.5);
        let zero = T::zero();
        let s_fix = steady_state(g)?.as_array();
        let excited = state.excited_population();
        let sm = state.sigma_minus();
        // conditioned initial components Tr(sigma_i sigma_- rho)
        let v0 = [
            Complex::new(excited, zero),
            Complex::new(zero, -excited),
            -sm,
        ];
        let mut transient = [Complex::new(zero, zero); 3];
        for i in 0..3 {
            transient[i] = v0[i] - Complex::new(s_fix[i], zero) * sm;
        }
        let splus = sm.conj();
        Ok(Self {
            drift: g.drift,
            weight: [
                Complex::new(half, zero),
                Complex::new(zero, half),
                Complex::new(zero, zero),
            ],
            transient,
            asymptote: splus * sm,
        })
    }

    /// Probe-response commutator correlation `<[sigma_-(tau), sigma_+(0)]>`.
    /// Traceless initial condition, so there is no asymptote.
    pub fn probe_response(g: &AffineBlochGenerator<T>, state: &BlochState<T>) -> Result<Self> {
        let half = T::lit(0.5);
        let zero = T::zero();
        // components Tr(sigma_i [sigma_+, rho]) = <[sigma_i, sigma_+]>
        let transient = [
            Complex::new(-state.sz, zero),
            Complex::new(zero, -state.sz),
            Complex::new(state.sx, state.sy),
        ];
        Ok(Self {
            drift: g.drift,
            weight: [
                Complex::new(half, zero),
                Complex::new(zero, -half),
                Complex::new(zero, zero),
            ],
            transient,
            asymptote: Complex::new(zero, zero),
        })
    }

    /// Correlation value at zero delay.
    pub fn value_at_zero(&self) -> Complex<T> {
        let mut acc = self.asymptote;
        for i in 0..3 {
            acc = acc + self.weight[i] * self.transient[i];
        }
        acc
    }

    /// Factorized long-delay limit.
    pub fn long_time_limit(&self) -> Complex<T> {
        self.asymptote
    }

    /// `weight . (z I - drift)^{-1} transient`: the one-sided Laplace/Fourier
    /// transform of the transient part of the correlation, evaluated at the
    /// complex frequency `z`.
    pub fn resolvent(&self, z: Complex<T>) -> Result<Complex<T>> {
        let zero = T::zero();
        let mut m = [[Complex::new(zero, zero); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = -Complex::new(self.drift[i][j], zero);
            }
            m[i][i] = m[i][i] + z;
        }
        let x = solve3_complex(&m, &self.transient)?;
        let mut acc = Complex::new(zero, zero);
        for i in 0..3 {
            acc = acc + self.weight[i] * x[i];
        }
        Ok(acc)
    }

    /// `Re Int_0^inf gbar(tau) e^{-i w tau} dtau` (emission kernel).
    pub fn spectrum_minus(&self, omega: T) -> Result<T> {
        Ok(self.resolvent(Complex::new(T::zero(), omega))?.re)
    }

    /// `Re Int_0^inf gbar(tau) e^{+i w tau} dtau` (probe kernel).
    pub fn spectrum_plus(&self, omega: T) -> Result<T> {
        Ok(self.resolvent(Complex::new(T::zero(), -omega))?.re)
    }
}

/// Incoherent resonance-fluorescence spectrum from the resolvent:
/// `F(w) = Re Int_0^inf [<s+(tau) s-(0)> - |<s->|^2] e^{-i w tau} dtau`.
pub fn fluorescence_numeric<T: Scalar>(
    g: &AffineBlochGenerator<T>,
    grid: &FrequencyGrid<T>,
) -> Result<SpectrumSeries<T>> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let ss = steady_state(g)?;
    let corr = Correlator::emission(g, &ss)?;
    let values = grid
        .points()
        .iter()
        .map(|&w| corr.spectrum_minus(w))
        .collect::<Result<Vec<_>>>()?;
    SpectrumSeries::new(grid.clone(), values, SpectrumKind::Fluorescence)
}

/// Three-Lorentzian secular spectrum
///
/// ```text
/// F(w) = (G_perp/8)/(G_perp^2 + (w + W')^2)
///      + (G_par/4)/(G_par^2 + w^2)
///      + (G_perp/8)/(G_perp^2 + (w - W')^2)
/// ```
///
/// with the dressed rates of [`dressed_rates`]; `convention` selects the
/// shifted Rabi frequency W' (default) or the bare Omega.
pub fn fluorescence_analytic<T: Scalar>(
    p: &ModelParams<T>,
    grid: &FrequencyGrid<T>,
) -> Result<SpectrumSeries<T>> {
    fluorescence_analytic_with(p, grid, RabiConvention::Shifted)
}

pub fn fluorescence_analytic_with<T: Scalar>(
    p: &ModelParams<T>,
    grid: &FrequencyGrid<T>,
    convention: RabiConvention,
) -> Result<SpectrumSeries<T>> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let d = dressed_rates(p);
    let omega_line = match convention {
        RabiConvention::Shifted => d.omega_prime,
        RabiConvention::Bare => p.omega,
    };
    let four = T::lit(4.0);
    let eight = T::lit(8.0);
    let values = grid
        .points()
        .iter()
        .map(|&w| {
            // evaluated on |w| so evenness holds bitwise on symmetric grids
            let wa = w.abs();
            let side = |centre: T| {
                d.gamma_perp / eight / (d.gamma_perp * d.gamma_perp + (wa - centre) * (wa - centre))
            };
            side(-omega_line)
                + d.gamma_par / four / (d.gamma_par * d.gamma_par + wa * wa)
                + side(omega_line)
        })
        .collect();
    SpectrumSeries::new(grid.clone(), values, SpectrumKind::Fluorescence)
}

/// Weak-probe absorption spectrum
/// `A(w) = Re Int_0^inf <[s-(tau), s+(0)]> e^{+i w tau} dtau`;
/// positive values mean absorption, negative gain.
pub fn absorption_spectrum<T: Scalar>(
    g: &AffineBlochGenerator<T>,
    grid: &FrequencyGrid<T>,
) -> Result<SpectrumSeries<T>> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let ss = steady_state(g)?;
    let corr = Correlator::probe_response(g, &ss)?;
    let values = grid
        .points()
        .iter()
        .map(|&w| corr.spectrum_plus(w))
        .collect::<Result<Vec<_>>>()?;
    SpectrumSeries::new(grid.clone(), values, SpectrumKind::Absorption)
}
