//! Independent numerical oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::Matrix2;
use num_complex::Complex64;

/// `exp(m)` by scaling and squaring of a truncated Taylor series.
pub fn expm2(m: Matrix2<Complex64>) -> Matrix2<Complex64> {
    let norm: f64 = m.iter().map(|c| c.norm()).sum();
    let mut s = 0;
    while norm / f64::from(1u32 << s.min(30)) > 0.25 && s < 60 {
        s += 1;
    }
    let scaled = m / Complex64::from(2f64.powi(s));
    let mut term = Matrix2::identity();
    let mut sum = Matrix2::identity();
    for k in 1..=24 {
        term = term * scaled / Complex64::from(k as f64);
        sum += term;
    }
    for _ in 0..s {
        sum = sum * sum;
    }
    sum
}

/// Roots of `z^2 - tr z + det` for a 2x2 matrix.
pub fn eigenvalues2(m: &Matrix2<Complex64>) -> (Complex64, Complex64) {
    let tr = m[(0, 0)] + m[(1, 1)];
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let disc = (tr * tr - det * 4.0).sqrt();
    ((tr + disc) / 2.0, (tr - disc) / 2.0)
}

fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson quadrature, started from 64 equal panels so that
/// symmetric integrands cannot fool the first error estimate.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let panels = 64;
    let w = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            let (lo, hi) = (a + i as f64 * w, a + (i + 1) as f64 * w);
            let (fa, fb, fm) = (f(lo), f(hi), f(0.5 * (lo + hi)));
            let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
            simpson_step(&f, lo, hi, fa, fm, fb, whole, tol / panels as f64, 40)
        })
        .sum()
}

/// `u = y / sqrt(1 - y^2)`, mapping `(-1, 1)` onto the real line.
pub fn to_u(y: f64) -> f64 {
    if y <= -1.0 {
        f64::NEG_INFINITY
    } else if y >= 1.0 {
        f64::INFINITY
    } else {
        y / ((1.0 - y) * (1.0 + y)).sqrt()
    }
}

/// The limit density written as a Gaussian in `u` times the Jacobian `du/dy`.
pub fn density_via_u(y: f64, nu: f64) -> f64 {
    let u = to_u(y);
    let jac = (1.0 + u * u).powf(1.5);
    (-(u / nu).powi(2)).exp() / (nu * PI.sqrt()) * jac
}

/// `P(y1 <= Y <= y2)` as a Gaussian integral in `u`.
pub fn probability_via_u(y1: f64, y2: f64, nu: f64) -> f64 {
    let cap = 40.0 * nu;
    let (a, b) = (to_u(y1).max(-cap), to_u(y2).min(cap));
    if b <= a {
        return 0.0;
    }
    simpson(|u| (-(u / nu).powi(2)).exp() / (nu * PI.sqrt()), a, b, 1e-14)
}

/// `E[Y^k]` as a Gaussian integral in `u`.
pub fn moment_via_u(k: i32, nu: f64) -> f64 {
    let cap = 40.0 * nu;
    simpson(
        |u| (u / (1.0 + u * u).sqrt()).powi(k) * (-(u / nu).powi(2)).exp() / (nu * PI.sqrt()),
        -cap,
        cap,
        1e-14,
    )
}

/// Positive root of `F'` by bisection on the sign of a centred difference.
pub fn horn_by_bisection(nu: f64) -> f64 {
    let slope = |y: f64| {
        let h = 1e-7;
        density_via_u(y + h, nu) - density_via_u(y - h, nu)
    };
    let mut lo = 0.01;
    let mut hi = (1..=8)
        .rev()
        .map(|k| 1.0 - 10f64.powi(-k))
        .find(|&y| slope(y) < 0.0)
        .expect("F decreases somewhere near y = 1");
    assert!(slope(lo) > 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if slope(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Maximizer of `F` on `(0, 1)` by golden-section search.
pub fn horn_by_golden_section(nu: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (0.0, 1.0 - 1e-12);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    for _ in 0..200 {
        if density_via_u(c, nu) > density_via_u(d, nu) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    0.5 * (a + b)
}
