//! Peak extraction: positions, heights and half-widths of spectral lines.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spectra::SpectrumSeries;

/// Minimum number of samples above half maximum for a peak to count as
/// resolved.
pub const MIN_POINTS_ABOVE_HALF: usize = 7;

/// Relative prominence floor: strict local maxima less prominent than this
/// fraction of the global maximum are treated as noise plateaus.
pub const PROMINENCE_FLOOR_REL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak<T> {
    pub position: T,
    pub height: T,
    pub hwhm: T,
}

/// Locate strict local maxima, refine position and height with a three-point
/// parabola, and measure the HWHM by linear interpolation of the half-height
/// crossings on each side.
///
/// A flat series yields an empty list; an under-resolved peak (fewer than
/// [`MIN_POINTS_ABOVE_HALF`] samples above half maximum, or a half-height
/// crossing that runs off the grid) is an error naming the peak.
pub fn peak_metrics<T: Scalar>(s: &SpectrumSeries<T>) -> Result<Vec<Peak<T>>> {
    let w = s.grid.points();
    let y = &s.values;
    let n = y.len();
    if n < 3 {
        return Ok(Vec::new());
    }
    let global_max = s.max_value();
    if !(global_max > T::zero()) {
        return Ok(Vec::new());
    }
    let floor = global_max * T::lit(PROMINENCE_FLOOR_REL);

    let mut peaks = Vec::new();
    for i in 1..n - 1 {
        if !(y[i] > y[i - 1] && y[i] > y[i + 1]) {
            continue;
        }
        if prominence(y, i) < floor {
            continue;
        }

        // parabolic vertex through (i-1, i, i+1); grids may be non-uniform
        let (pos, height) = parabola_vertex(w[i - 1], y[i - 1], w[i], y[i], w[i + 1], y[i + 1]);
        let half = height / T::lit(2.0);

        // sample count above the half level around the peak
        let mut above = 1usize;
        let mut l = i;
        while l > 0 && y[l - 1] > half {
            l -= 1;
            above += 1;
        }
        let mut r = i;
        while r + 1 < n && y[r + 1] > half {
            r += 1;
            above += 1;
        }
        let position_f64 = pos.to_f64().unwrap_or(f64::NAN);
        if above < MIN_POINTS_ABOVE_HALF {
            return Err(Error::PeakUnderResolved {
                position: position_f64,
                points: above,
                need: MIN_POINTS_ABOVE_HALF,
            });
        }
        if l == 0 || r + 1 >= n {
            return Err(Error::PeakCrossingOutOfRange {
                position: position_f64,
            });
        }

        let left = cross(w[l - 1], y[l - 1], w[l], y[l], half);
        let right = cross(w[r], y[r], w[r + 1], y[r + 1], half);
        peaks.push(Peak {
            position: pos,
            height,
            hwhm: (right - left) / T::lit(2.0),
        });
    }
    Ok(peaks)
}

/// Peak closest to the requested position, if any.
pub fn peak_nearest<T: Scalar>(peaks: &[Peak<T>], position: T) -> Option<Peak<T>> {
    peaks
        .iter()
        .copied()
        .min_by(|a, b| {
            (a.position - position)
                .abs()
                .partial_cmp(&(b.position - position).abs())
                .expect("finite peak positions")
        })
}

/// Topographic prominence: height above the higher of the two valley floors
/// separating this maximum from taller terrain (or the record edge).
fn prominence<T: Scalar>(y: &[T], i: usize) -> T {
    let h = y[i];
    let mut left_floor = h;
    for j in (0..i).rev() {
        left_floor = left_floor.min(y[j]);
        if y[j] > h {
            break;
        }
    }
    let mut right_floor = h;
    for &v in &y[i + 1..] {
        right_floor = right_floor.min(v);
        if v > h {
            break;
        }
    }
    h - left_floor.max(right_floor)
}

fn parabola_vertex<T: Scalar>(x0: T, y0: T, x1: T, y1: T, x2: T, y2: T) -> (T, T) {
    // Lagrange fit; falls back to the raw sample on a degenerate triple
    let d0 = (x1 - x0) * (x2 - x0);
    let d1 = (x1 - x0) * (x2 - x1);
    let d2 = (x2 - x0) * (x2 - x1);
    let a = y0 / d0 - y1 / d1 + y2 / d2;
    if !(a < T::zero()) {
        return (x1, y1);
    }
    let b = -y0 * (x1 + x2) / d0 + y1 * (x0 + x2) / d1 - y2 * (x0 + x1) / d2;
    let vx = -b / (T::lit(2.0) * a);
    let c = y0 * x1 * x2 / d0 - y1 * x0 * x2 / d1 + y2 * x0 * x1 / d2;
    let vy = c - b * b / (T::lit(4.0) * a);
    (vx, vy)
}

fn cross<T: Scalar>(x0: T, y0: T, x1: T, y1: T, level: T) -> T {
    x0 + (level - y0) * (x1 - x0) / (y1 - y0)
}
