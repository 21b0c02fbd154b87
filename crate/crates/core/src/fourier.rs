//! Centered discrete Fourier transforms on top of `rustfft`.
//!
//! The momentum index `k` runs over `0..n` with `p_k = (k - n/2) dp`, so the
//! grid is symmetric up to the single point `-n/2 dp`. `n` is always even.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Smallest even `2^a 3^b 5^c` that is at least `min`.
pub(crate) fn fast_len(min: usize) -> usize {
    let target = min.max(2);
    let mut best = usize::MAX;
    let mut p2 = 2usize;
    while p2 < best {
        let mut p3 = p2;
        while p3 < best {
            let mut p5 = p3;
            while p5 < target {
                p5 *= 5;
            }
            best = best.min(p5);
            p3 *= 3;
        }
        p2 *= 2;
    }
    best
}

fn alternate(data: &mut [Complex64]) {
    for v in data.iter_mut().skip(1).step_by(2) {
        *v = -*v;
    }
}

/// `out_j = sum_k data_k exp(+2 pi i (k - n/2) j / n)`, unnormalized.
pub(crate) fn centered_inverse(mut data: Vec<Complex64>) -> Vec<Complex64> {
    debug_assert!(data.len().is_multiple_of(2));
    let fft = FftPlanner::new().plan_fft_inverse(data.len());
    fft.process(&mut data);
    alternate(&mut data);
    data
}

/// `out_k = sum_j data_j exp(-2 pi i (k - n/2) j / n)`, unnormalized.
pub(crate) fn centered_forward(mut data: Vec<Complex64>) -> Vec<Complex64> {
    debug_assert!(data.len().is_multiple_of(2));
    alternate(&mut data);
    let fft = FftPlanner::new().plan_fft_forward(data.len());
    fft.process(&mut data);
    data
}

/// `out_j = sum_k data_k exp(+2 pi i k j / n)`, unnormalized.
pub(crate) fn dft_inverse(mut data: Vec<Complex64>) -> Vec<Complex64> {
    let fft = FftPlanner::new().plan_fft_inverse(data.len());
    fft.process(&mut data);
    data
}

/// `exp(i p_k x)` for a lattice offset `x = (site + frac) dx` with `dp dx n = 2 pi`,
/// reducing the integer part of the phase exactly.
pub(crate) fn lattice_phase(k: usize, n: usize, site: i64, frac: f64) -> Complex64 {
    let shifted = k as i64 - (n / 2) as i64;
    let n_i = n as i64;
    let turns = ((shifted % n_i) * (site % n_i)).rem_euclid(n_i);
    let theta = 2.0 * PI * (turns as f64 + shifted as f64 * frac) / n as f64;
    Complex64::from_polar(1.0, theta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct_inverse(data: &[Complex64]) -> Vec<Complex64> {
        let n = data.len();
        (0..n)
            .map(|j| {
                data.iter()
                    .enumerate()
                    .map(|(k, &v)| {
                        let s = k as f64 - (n / 2) as f64;
                        v * Complex64::from_polar(1.0, 2.0 * PI * s * j as f64 / n as f64)
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn fast_len_is_smooth_and_even() {
        for min in [1, 2, 7, 97, 1000, 25_133] {
            let n = fast_len(min);
            assert!(n >= min && n.is_multiple_of(2));
            let mut m = n;
            for f in [2, 3, 5] {
                while m.is_multiple_of(f) {
                    m /= f;
                }
            }
            assert_eq!(m, 1);
        }
        assert_eq!(fast_len(97), 100);
    }

    #[test]
    fn matches_direct_sum() {
        let data: Vec<Complex64> = (0..12)
            .map(|k| Complex64::new((k as f64).sin(), (k as f64 * 0.3).cos()))
            .collect();
        let fast = centered_inverse(data.clone());
        let slow = direct_inverse(&data);
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).norm() < 1e-12);
        }
        let back = centered_forward(fast);
        for (a, b) in back.iter().zip(&data) {
            assert!((a / 12.0 - b).norm() < 1e-14);
        }
    }

    #[test]
    fn lattice_phase_reduction() {
        let n = 40;
        let dx = 0.01;
        let dp = 2.0 * PI / (n as f64 * dx);
        for k in [0, 3, 20, 39] {
            for site in [-1234i64, 0, 17] {
                let p = (k as f64 - 20.0) * dp;
                let x = (site as f64 + 0.25) * dx;
                let expect = Complex64::from_polar(1.0, p * x);
                assert!((lattice_phase(k, n, site, 0.25) - expect).norm() < 1e-10);
            }
        }
    }
}
