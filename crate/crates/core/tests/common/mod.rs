//! Shared brute-force oracles for the integration suites.
//!
//! Everything here works directly on 2x2 complex matrices and deliberately
//! re-derives the dynamics from the printed operator form of the master
//! equations, independent of the closed-form Pauli expansions in the crate.

#![allow(dead_code)]

use num_complex::Complex64 as C64;

pub type M2 = [[C64; 2]; 2];

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Excited state first: sigma_+ = |e><g|, sigma_- = |g><e|.
pub fn sigma_p() -> M2 {
    [[ZERO, ONE], [ZERO, ZERO]]
}

pub fn sigma_m() -> M2 {
    [[ZERO, ZERO], [ONE, ZERO]]
}

pub fn sigma_x() -> M2 {
    [[ZERO, ONE], [ONE, ZERO]]
}

pub fn sigma_y() -> M2 {
    [[ZERO, -I], [I, ZERO]]
}

pub fn sigma_z() -> M2 {
    [[ONE, ZERO], [ZERO, -ONE]]
}

pub fn identity() -> M2 {
    [[ONE, ZERO], [ZERO, ONE]]
}

pub fn mul(a: &M2, b: &M2) -> M2 {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn add(a: &M2, b: &M2) -> M2 {
    let mut out = *a;
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] += b[i][j];
        }
    }
    out
}

pub fn sub(a: &M2, b: &M2) -> M2 {
    let mut out = *a;
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] -= b[i][j];
        }
    }
    out
}

pub fn scale(c: C64, a: &M2) -> M2 {
    let mut out = *a;
    for row in out.iter_mut() {
        for e in row.iter_mut() {
            *e *= c;
        }
    }
    out
}

pub fn comm(a: &M2, b: &M2) -> M2 {
    sub(&mul(a, b), &mul(b, a))
}

pub fn trace(a: &M2) -> C64 {
    a[0][0] + a[1][1]
}

pub fn dagger(a: &M2) -> M2 {
    [
        [a[0][0].conj(), a[1][0].conj()],
        [a[0][1].conj(), a[1][1].conj()],
    ]
}

/// `gamma (2 L rho L^dag - L^dag L rho - rho L^dag L)`.
pub fn dissipator(gamma: f64, l: &M2, rho: &M2) -> M2 {
    let ld = dagger(l);
    let ldl = mul(&ld, l);
    let sand = scale(C64::new(2.0 * gamma, 0.0), &mul(&mul(l, rho), &ld));
    let anti = add(&mul(&ldl, rho), &mul(rho, &ldl));
    sub(&sand, &scale(C64::new(gamma, 0.0), &anti))
}

/// Right-hand side of the effective stochastic-field master equation,
/// applied term by term exactly as printed.
pub fn rhs_stochastic(rho: &M2, omega: f64, gamma: f64, kappa: f64, d: f64, phi: f64) -> M2 {
    let sp = sigma_p();
    let sm = sigma_m();
    let sz = sigma_z();

    // -i [ (Omega/2)(s+ + s-), rho ]
    let h = scale(C64::new(omega / 2.0, 0.0), &add(&sp, &sm));
    let mut out = scale(-I, &comm(&h, rho));

    // vacuum damping
    out = add(&out, &dissipator(gamma, &sm, rho));

    let denom = kappa * kappa + omega * omega;
    let e2 = C64::new(0.0, 2.0 * phi).exp();
    let a0 = -I * C64::new(d * omega * kappa / (8.0 * denom), 0.0) * (ONE - e2);
    let r = C64::new(kappa * kappa / denom, 0.0);
    let alpha = C64::new(d / 8.0, 0.0) * (ONE + e2 + r * (ONE - e2));

    // [ (sz rho sz - rho), (a0 s+ - a0* s-) ]
    let g_op = sub(&scale(a0, &sp), &scale(a0.conj(), &sm));
    let zrz = sub(&mul(&mul(&sz, rho), &sz), rho);
    out = add(&out, &comm(&zrz, &g_op));

    // [ (e^{-i phi} s- + e^{i phi} s+), [rho, (alpha e^{-i phi} s- + alpha* e^{i phi} s+)] ]
    let em = C64::new(0.0, -phi).exp();
    let ep = C64::new(0.0, phi).exp();
    let s_op = add(&scale(em, &sm), &scale(ep, &sp));
    let b_op = add(&scale(alpha * em, &sm), &scale(alpha.conj() * ep, &sp));
    out = add(&out, &comm(&s_op, &comm(rho, &b_op)));
    out
}

/// Right-hand side of the squeezed-reservoir master equation with pair
/// coefficient `m` (complex in general):
/// `gamma(n+1) D[s-] + gamma n D[s+] + 2 gamma (m s+ rho s+ + m* s- rho s-)`.
pub fn rhs_pair_correlated(rho: &M2, omega: f64, gamma: f64, n: f64, m: C64) -> M2 {
    let sp = sigma_p();
    let sm = sigma_m();

    let h = scale(C64::new(omega / 2.0, 0.0), &add(&sp, &sm));
    let mut out = scale(-I, &comm(&h, rho));
    out = add(&out, &dissipator(gamma * (n + 1.0), &sm, rho));
    out = add(&out, &dissipator(gamma * n, &sp, rho));

    let two_g = C64::new(2.0 * gamma, 0.0);
    let up = scale(two_g * m, &mul(&mul(&sp, rho), &sp));
    let down = scale(two_g * m.conj(), &mul(&mul(&sm, rho), &sm));
    out = add(&out, &add(&up, &down));
    out
}

/// Read the affine Bloch form (drift, pump) off a superoperator by applying
/// it to the identity and the three Pauli matrices.
pub fn bloch_affine(rhs: impl Fn(&M2) -> M2) -> ([[f64; 3]; 3], [f64; 3]) {
    let paulis = [sigma_x(), sigma_y(), sigma_z()];
    let mut drift = [[0.0; 3]; 3];
    let mut pump = [0.0; 3];
    for i in 0..3 {
        let v = trace(&mul(&paulis[i], &rhs(&identity())));
        assert!(v.im.abs() < 1e-12, "pump row {i} not real: {v}");
        pump[i] = v.re / 2.0;
        for j in 0..3 {
            let v = trace(&mul(&paulis[i], &rhs(&paulis[j])));
            assert!(v.im.abs() < 1e-12, "drift ({i},{j}) not real: {v}");
            drift[i][j] = v.re / 2.0;
        }
    }
    (drift, pump)
}

/// Density matrix of a Bloch vector: rho = (I + s . sigma)/2.
pub fn density(s: [f64; 3]) -> M2 {
    let mut rho = identity();
    let terms = [
        scale(C64::new(s[0], 0.0), &sigma_x()),
        scale(C64::new(s[1], 0.0), &sigma_y()),
        scale(C64::new(s[2], 0.0), &sigma_z()),
    ];
    for t in &terms {
        rho = add(&rho, t);
    }
    scale(C64::new(0.5, 0.0), &rho)
}

/// Exact steady state of the *full* time-dependent model (atom + OU noise)
/// via the joint moment hierarchy: variables v_n = <x^n s>, closed by the
/// Gaussian moments of the stationary noise. Machine-precision for modest
/// truncation orders; `n_levels = 60` is plenty for every parameter set in
/// the suites.
pub fn exact_full_model_steady(
    omega: f64,
    gamma: f64,
    kappa: f64,
    d: f64,
    phi: f64,
    n_levels: usize,
) -> [f64; 3] {
    use nalgebra::{DMatrix, DVector};

    let (s, c) = phi.sin_cos();
    let a0 = [
        [-gamma, 0.0, 0.0],
        [0.0, -gamma, -omega],
        [0.0, omega, -2.0 * gamma],
    ];
    // noise precession about the axis (cos phi, -sin phi, 0)
    let a1 = [[0.0, 0.0, -s], [0.0, 0.0, -c], [s, c, 0.0]];
    let pump = [0.0, 0.0, -2.0 * gamma];

    // stationary Gaussian moments <x^n>, variance D kappa
    let var = d * kappa;
    let mut mom = vec![0.0; n_levels + 1];
    mom[0] = 1.0;
    for n in (2..=n_levels).step_by(2) {
        mom[n] = (n - 1) as f64 * mom[n - 2] * var;
    }

    let dim = 3 * (n_levels + 1);
    let mut m = DMatrix::<f64>::zeros(dim, dim);
    let mut rhs = DVector::<f64>::zeros(dim);
    for n in 0..=n_levels {
        for i in 0..3 {
            for j in 0..3 {
                m[(3 * n + i, 3 * n + j)] += a0[i][j];
                if n + 1 <= n_levels {
                    m[(3 * n + i, 3 * (n + 1) + j)] += a1[i][j];
                }
            }
            m[(3 * n + i, 3 * n + i)] -= n as f64 * kappa;
            if n >= 2 {
                m[(3 * n + i, 3 * (n - 2) + i)] += (n * (n - 1)) as f64 * d * kappa * kappa;
            }
            rhs[3 * n + i] = -pump[i] * mom[n];
        }
    }
    let sol = m.lu().solve(&rhs).expect("hierarchy solve");
    [sol[0], sol[1], sol[2]]
}
