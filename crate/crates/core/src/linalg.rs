//! Minimal fixed-size linear algebra for the 3-dimensional Bloch space.
//!
//! Everything here is a direct method: 3x3 solves by partially pivoted
//! elimination, eigenvalues by the closed-form cubic with a Newton polish.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type Vec3<T> = [T; 3];
pub type Mat3<T> = [[T; 3]; 3];
pub type CVec3<T> = [Complex<T>; 3];
pub type CMat3<T> = [[Complex<T>; 3]; 3];

pub fn mat_vec<T: Scalar>(a: &Mat3<T>, x: &Vec3<T>) -> Vec3<T> {
    [
        a[0][0] * x[0] + a[0][1] * x[1] + a[0][2] * x[2],
        a[1][0] * x[0] + a[1][1] * x[1] + a[1][2] * x[2],
        a[2][0] * x[0] + a[2][1] * x[1] + a[2][2] * x[2],
    ]
}

/// Elementwise infinity norm of the difference of two generators' matrices.
pub fn mat_diff_inf<T: Scalar>(a: &Mat3<T>, b: &Mat3<T>) -> T {
    let mut worst = T::zero();
    for i in 0..3 {
        for j in 0..3 {
            worst = worst.max((a[i][j] - b[i][j]).abs());
        }
    }
    worst
}

pub fn vec_diff_inf<T: Scalar>(a: &Vec3<T>, b: &Vec3<T>) -> T {
    let mut worst = T::zero();
    for i in 0..3 {
        worst = worst.max((a[i] - b[i]).abs());
    }
    worst
}

/// Field of scalars a 3x3 solve can run over (real or complex).
trait Elem<T: Scalar>:
    Copy
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
{
    fn modulus(self) -> T;
    fn nil() -> Self;
}

impl<T: Scalar> Elem<T> for T {
    fn modulus(self) -> T {
        self.abs()
    }
    fn nil() -> Self {
        T::zero()
    }
}

impl<T: Scalar> Elem<T> for Complex<T> {
    fn modulus(self) -> T {
        self.norm()
    }
    fn nil() -> Self {
        Complex::new(T::zero(), T::zero())
    }
}

fn solve3_generic<T: Scalar, E: Elem<T>>(a: &[[E; 3]; 3], b: &[E; 3]) -> Result<[E; 3]> {
    let mut m = *a;
    let mut rhs = *b;

    let mut scale = T::zero();
    for row in &m {
        for e in row {
            scale = scale.max(e.modulus());
        }
    }
    let tiny = scale * T::epsilon() * T::lit(8.0);

    for col in 0..3 {
        let mut piv = col;
        for row in col + 1..3 {
            if m[row][col].modulus() > m[piv][col].modulus() {
                piv = row;
            }
        }
        if m[piv][col].modulus() <= tiny {
            return Err(Error::DegenerateGenerator);
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..3 {
                m[row][k] = m[row][k] - f * m[col][k];
            }
            rhs[row] = rhs[row] - f * rhs[col];
        }
    }

    let mut x = [E::nil(); 3];
    for row in (0..3).rev() {
        let mut acc = rhs[row];
        for k in row + 1..3 {
            acc = acc - m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    Ok(x)
}

/// Solve `a x = b` for a real 3x3 system.
pub fn solve3<T: Scalar>(a: &Mat3<T>, b: &Vec3<T>) -> Result<Vec3<T>> {
    solve3_generic(a, b)
}

/// Solve `a x = b` for a complex 3x3 system.
pub fn solve3_complex<T: Scalar>(a: &CMat3<T>, b: &CVec3<T>) -> Result<CVec3<T>> {
    solve3_generic(a, b)
}

/// Eigenvalues of a real 3x3 matrix via the characteristic cubic.
///
/// Cardano in complex arithmetic, then one round of Newton polishing; good to
/// a few ulp for the well-conditioned drift matrices this crate produces.
pub fn eig3<T: Scalar>(a: &Mat3<T>) -> [Complex<T>; 3] {
    let tr = a[0][0] + a[1][1] + a[2][2];
    let minors = a[0][0] * a[1][1] - a[0][1] * a[1][0]
        + a[0][0] * a[2][2]
        - a[0][2] * a[2][0]
        + a[1][1] * a[2][2]
        - a[1][2] * a[2][1];
    let det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);

    // lambda^3 + c2 lambda^2 + c1 lambda + c0 = 0
    let c2 = -tr;
    let c1 = minors;
    let c0 = -det;

    let third = T::one() / T::lit(3.0);
    let p = c1 - c2 * c2 * third;
    let q = c2 * c2 * c2 * T::lit(2.0 / 27.0) - c2 * c1 * third + c0;

    let half_q = Complex::new(q / T::lit(2.0), T::zero());
    let p3 = Complex::new(p * third, T::zero());
    let disc = (half_q * half_q + p3 * p3 * p3).sqrt();

    // branch with least cancellation
    let u3 = if (-half_q + disc).norm() >= (-half_q - disc).norm() {
        -half_q + disc
    } else {
        -half_q - disc
    };
    let u = u3.cbrt();

    let omega = Complex::new(T::lit(-0.5), T::lit(3.0).sqrt() / T::lit(2.0));
    let shift = Complex::new(c2 * third, T::zero());

    let mut roots = [Complex::new(T::zero(), T::zero()); 3];
    for (k, root) in roots.iter_mut().enumerate() {
        let mut w = u;
        for _ in 0..k {
            w = w * omega;
        }
        let t = if w.norm() > T::epsilon() {
            w - p3 / w
        } else {
            w
        };
        *root = t - shift;
    }

    // Newton polish on the monic cubic
    let cc2 = Complex::new(c2, T::zero());
    let cc1 = Complex::new(c1, T::zero());
    let cc0 = Complex::new(c0, T::zero());
    for root in roots.iter_mut() {
        for _ in 0..2 {
            let x = *root;
            let f = ((x + cc2) * x + cc1) * x + cc0;
            let fp = (Complex::new(T::lit(3.0), T::zero()) * x + cc2 * T::lit(2.0)) * x + cc1;
            if fp.norm() > T::epsilon() {
                *root = x - f / fp;
            }
        }
    }
    roots
}

/// Largest real part among the eigenvalues of `a`.
pub fn max_eig_real_part<T: Scalar>(a: &Mat3<T>) -> T {
    let ev = eig3(a);
    ev[0].re.max(ev[1].re).max(ev[2].re)
}
