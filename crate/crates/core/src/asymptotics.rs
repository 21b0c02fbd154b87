//! Long-time behaviour of the walk.
//!
//! Translation invariance diagonalizes the shifts: in the quasi-momentum
//! `phi` the one-step operator is the 2x2 unitary
//! `(e^{i phi} P+ + e^{-i phi} P-) U` with eigenvalues
//! `cos(phi) cos(dt) +- i sqrt(1 - cos^2 phi cos^2 dt)`. Each eigenmode moves
//! ballistically with velocity `+-h(phi)` (in units of `c`), so the scaled
//! position `X_n / (n dt)` converges in law to the velocity distribution
//! weighted by the squared eigen-coefficients `|g+-(phi)|^2`.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;

use crate::config::Tolerances;
use crate::error::{finite, positive, DiracError, Result};
use crate::fourier::{dft_inverse, fast_len};
use crate::quad;
use crate::spinor::{Complex2, Helicity};
use crate::walk::{CoinMatrix, LatticeState};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// The one-step operator at quasi-momentum `phi` on the plus branch.
pub fn symbol_matrix(phi: f64, dt: f64) -> Matrix2<Complex64> {
    let shift = Matrix2::new(
        Complex64::from_polar(1.0, phi),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::from_polar(1.0, -phi),
    );
    shift * CoinMatrix::new(dt).matrix()
}

/// Eigen-decomposition of [`symbol_matrix`].
#[derive(Debug, Clone, PartialEq)]
pub struct WalkSymbol {
    pub phi: f64,
    pub dt: f64,
    pub lambda_plus: Complex64,
    pub lambda_minus: Complex64,
    /// Components `(f++, f+-)`.
    pub v_plus: Complex2,
    /// Components `(f-+, f--)`.
    pub v_minus: Complex2,
}

/// `sqrt(1 - cos^2 phi cos^2 dt)`, written to stay accurate near `phi = 0`.
fn gap(phi: f64, dt: f64) -> f64 {
    let (sd, cd) = dt.sin_cos();
    let sp = phi.sin();
    (sd * sd + cd * cd * sp * sp).sqrt()
}

fn unit_phase(mut v: Complex2) -> Complex2 {
    let norm = v.norm();
    v /= Complex64::from(norm);
    let pivot = if v[0].norm() > 1e-14 { v[0] } else { v[1] };
    v * (pivot.conj() / pivot.norm())
}

fn eigenvector(m: &Matrix2<Complex64>, lambda: Complex64) -> Option<Complex2> {
    let from_top = Vector2::new(-m[(0, 1)], m[(0, 0)] - lambda);
    let from_bottom = Vector2::new(m[(1, 1)] - lambda, -m[(1, 0)]);
    let v = if from_top.norm() >= from_bottom.norm() {
        from_top
    } else {
        from_bottom
    };
    (v.norm() > 1e-300).then(|| unit_phase(v))
}

/// Eigenvalues and unit eigenvectors of the walk symbol. Each eigenvector's
/// first non-negligible component is made real and positive.
pub fn walk_symbol(phi: f64, dt: f64) -> Result<WalkSymbol> {
    finite(phi, "phi")?;
    positive(dt, "dt")?;
    let m = symbol_matrix(phi, dt);
    let re = phi.cos() * dt.cos();
    let im = gap(phi, dt);
    let lambda_plus = Complex64::new(re, im);
    let lambda_minus = Complex64::new(re, -im);
    let (v_plus, v_minus) = if im == 0.0 {
        // Only possible for sin(dt) = 0 and sin(phi) = 0, where the symbol is
        // diagonal; keep the spin basis, which is the continuous extension.
        let one = Complex64::from(1.0);
        let zero = Complex64::from(0.0);
        (Vector2::new(one, zero), Vector2::new(zero, one))
    } else {
        let vp = eigenvector(&m, lambda_plus).ok_or(DiracError::DegenerateSymbol { phi })?;
        let vm = eigenvector(&m, lambda_minus).ok_or(DiracError::DegenerateSymbol { phi })?;
        (vp, vm)
    };
    Ok(WalkSymbol {
        phi,
        dt,
        lambda_plus,
        lambda_minus,
        v_plus,
        v_minus,
    })
}

/// `h(phi) = sin(phi) cos(dt) / sqrt(1 - cos^2 dt cos^2 phi)`, the velocity of
/// the `lambda+` mode; the `lambda-` mode moves at `-h(phi)`.
pub fn group_velocity(phi: f64, dt: f64) -> Result<f64> {
    finite(phi, "phi")?;
    finite(dt, "dt")?;
    let g = gap(phi, dt);
    if g == 0.0 {
        return Err(DiracError::DegenerateSymbol { phi });
    }
    Ok(phi.sin() * dt.cos() / g)
}

fn velocity_or_limit(phi: f64, dt: f64) -> f64 {
    group_velocity(phi, dt).unwrap_or(0.0)
}

/// Coefficients `g+-(phi)` of a lattice state in the walk eigenbasis, on the
/// grid `phi_j = -pi + 2 pi j / n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCoefficients {
    pub dt: f64,
    pub helicity: Helicity,
    pub g_plus: Vec<Complex64>,
    pub g_minus: Vec<Complex64>,
}

impl SpectralCoefficients {
    pub fn len(&self) -> usize {
        self.g_plus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.g_plus.is_empty()
    }

    pub fn dphi(&self) -> f64 {
        2.0 * PI / self.len() as f64
    }

    pub fn phi(&self, j: usize) -> f64 {
        -PI + j as f64 * self.dphi()
    }

    /// `sum (|g+|^2 + |g-|^2) dt dphi / 2 pi`, equal to the state's norm.
    pub fn completeness(&self) -> f64 {
        let w = self.dt * self.dphi() / (2.0 * PI);
        self.g_plus
            .iter()
            .zip(&self.g_minus)
            .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
            .sum::<f64>()
            * w
    }
}

/// [`spectral_coefficients_on`] with the default oversampling of the support.
pub fn spectral_coefficients(state: &LatticeState, helicity: Helicity) -> Result<SpectralCoefficients> {
    let n = fast_len(Tolerances::DEFAULT.phi_oversampling * state.len());
    spectral_coefficients_on(state, helicity, n)
}

/// `g+-(phi) = sum_m <v+-(phi)| c(m dt)> e^{i m phi}` with `c = a / sqrt(dt)`,
/// evaluated on `n_phi` uniform points by one FFT per spin component.
pub fn spectral_coefficients_on(
    state: &LatticeState,
    helicity: Helicity,
    n_phi: usize,
) -> Result<SpectralCoefficients> {
    if n_phi < state.len() {
        return Err(DiracError::CoarsePhiGrid {
            points: n_phi,
            width: state.len(),
        });
    }
    let dt = state.dt();
    let first = state.first_site();
    let inv_sqrt_dt = 1.0 / dt.sqrt();
    let n_i = n_phi as i64;
    let sum = |amps: &[Complex64]| -> Vec<Complex64> {
        let mut data = vec![Complex64::new(0.0, 0.0); n_phi];
        for (i, a) in amps.iter().enumerate() {
            data[i] = if i % 2 == 0 { *a } else { -*a };
        }
        let mut out = dft_inverse(data);
        let base_sign = if first.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        for (j, v) in out.iter_mut().enumerate() {
            let turns = (first.rem_euclid(n_i) * j as i64).rem_euclid(n_i);
            let phase =
                Complex64::from_polar(base_sign * inv_sqrt_dt, 2.0 * PI * turns as f64 / n_phi as f64);
            *v *= phase;
        }
        out
    };
    let up = sum(state.plus());
    let down = sum(state.minus());

    let mut g_plus = Vec::with_capacity(n_phi);
    let mut g_minus = Vec::with_capacity(n_phi);
    for j in 0..n_phi {
        let phi = -PI + 2.0 * PI * j as f64 / n_phi as f64;
        let sym = walk_symbol(helicity.sign() * phi, dt)?;
        g_plus.push(sym.v_plus[0].conj() * up[j] + sym.v_plus[1].conj() * down[j]);
        g_minus.push(sym.v_minus[0].conj() * up[j] + sym.v_minus[1].conj() * down[j]);
    }
    Ok(SpectralCoefficients {
        dt,
        helicity,
        g_plus,
        g_minus,
    })
}

fn overlap_fraction(a: f64, b: f64, y1: f64, y2: f64) -> f64 {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
        let mid = 0.5 * (lo + hi);
        return if y1 <= mid && mid <= y2 { 1.0 } else { 0.0 };
    }
    ((hi.min(y2) - lo.max(y1)).max(0.0)) / (hi - lo)
}

/// Limit probability `P(y1 <= X_n / (n dt) <= y2)`: the mass of `|g+|^2` over
/// `{h(phi) in [y1, y2]}` plus that of `|g-|^2` over `{-h(phi) in [y1, y2]}`.
///
/// Each phi cell contributes the fraction of its velocity range, linearized
/// between the cell edges, that falls inside the interval.
pub fn limit_cdf(y1: f64, y2: f64, coefficients: &SpectralCoefficients) -> Result<f64> {
    finite(y1, "y1")?;
    finite(y2, "y2")?;
    if !(-1.0 <= y1 && y1 <= y2 && y2 <= 1.0) {
        return Err(DiracError::InvalidParameter(format!(
            "need -1 <= y1 <= y2 <= 1, got [{y1}, {y2}]"
        )));
    }
    if y1 == y2 {
        return Ok(0.0);
    }
    let dt = coefficients.dt;
    let dphi = coefficients.dphi();
    let weight = dt * dphi / (2.0 * PI);
    let mut total = 0.0;
    for j in 0..coefficients.len() {
        let phi = coefficients.phi(j);
        let left = velocity_or_limit(phi - 0.5 * dphi, dt);
        let right = velocity_or_limit(phi + 0.5 * dphi, dt);
        let mass_plus = coefficients.g_plus[j].norm_sqr();
        let mass_minus = coefficients.g_minus[j].norm_sqr();
        total += mass_plus * overlap_fraction(left, right, y1, y2);
        total += mass_minus * overlap_fraction(-left, -right, y1, y2);
    }
    Ok(total * weight)
}

/// Large-`nu`, small-`nu dt` approximation of `(g+(phi), g-(phi))` for the
/// Gaussian state on the plus branch.
///
/// For `phi > 0` the state sits in the spin-down component (momentum
/// `p = -phi/dt < 0`), for `phi < 0` in spin-up.
pub fn gaussian_g_approx(phi: f64, nu: f64, dt: f64) -> Result<(Complex64, Complex64)> {
    positive(nu, "nu")?;
    let sym = walk_symbol(phi, dt)?;
    let amp = (2.0 * PI.sqrt() / (nu * dt * dt)).sqrt() * (-0.5 * (phi / (nu * dt)).powi(2)).exp();
    Ok(if phi > 0.0 {
        (I * amp * sym.v_plus[1].conj(), I * amp * sym.v_minus[1].conj())
    } else {
        (amp * sym.v_plus[0].conj(), amp * sym.v_minus[0].conj())
    })
}

fn density_unchecked(y: f64, nu: f64) -> f64 {
    if y.abs() >= 1.0 {
        return 0.0;
    }
    let s = (1.0 - y) * (1.0 + y);
    let e = (-y * y / (nu * nu * s)).exp();
    if e == 0.0 {
        return 0.0;
    }
    e / (nu * PI.sqrt() * s * s.sqrt())
}

/// `F(y) = (nu sqrt(pi))^-1 (1 - y^2)^-3/2 exp(-y^2 / (nu^2 (1 - y^2)))` on `(-1, 1)`.
pub fn limit_density(y: f64, nu: f64) -> Result<f64> {
    finite(y, "y")?;
    positive(nu, "nu")?;
    if y.abs() >= 1.0 {
        return Err(DiracError::OutsideSupport(y));
    }
    Ok(density_unchecked(y, nu))
}

/// Positive maximizer of `F`, from `d ln F / dy = 0`, i.e. `1 - y^2 = 2 / (3 nu^2)`.
pub fn horn_location(nu: f64) -> Result<f64> {
    positive(nu, "nu")?;
    let nu2 = nu * nu;
    if nu2 <= 2.0 / 3.0 {
        return Err(DiracError::Unimodal(nu2));
    }
    Ok((1.0 - 2.0 / (3.0 * nu2)).sqrt())
}

/// `int_{-1}^{1} y^k F(y) dy` by adaptive quadrature.
pub fn limit_moment(k: u32, nu: f64) -> Result<f64> {
    LimitDensity::new(nu)?.moment(k)
}

/// The two-horned limit density for a Gaussian initial state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitDensity {
    pub nu: f64,
}

impl LimitDensity {
    pub fn new(nu: f64) -> Result<Self> {
        positive(nu, "nu")?;
        Ok(LimitDensity { nu })
    }

    pub fn density(&self, y: f64) -> Result<f64> {
        limit_density(y, self.nu)
    }

    pub fn horn(&self) -> Result<f64> {
        horn_location(self.nu)
    }

    fn breakpoints(&self, y1: f64, y2: f64) -> Vec<f64> {
        let mut pts = vec![y1, y2, 0.0];
        if let Ok(h) = self.horn() {
            pts.extend([-h, h]);
        }
        pts.retain(|p| *p >= y1 && *p <= y2);
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// `P(y1 <= Y <= y2)`.
    pub fn probability(&self, y1: f64, y2: f64) -> Result<f64> {
        if !(-1.0 <= y1 && y1 <= y2 && y2 <= 1.0) {
            return Err(DiracError::InvalidParameter(format!(
                "need -1 <= y1 <= y2 <= 1, got [{y1}, {y2}]"
            )));
        }
        let tol = Tolerances::DEFAULT;
        let nu = self.nu;
        Ok(quad::integrate_pieces(
            |y| density_unchecked(y, nu),
            &self.breakpoints(y1, y2),
            tol.quad_abs,
            tol.quad_rel,
        )?
        .value)
    }

    pub fn moment(&self, k: u32) -> Result<f64> {
        let tol = Tolerances::DEFAULT;
        let nu = self.nu;
        Ok(quad::integrate_pieces(
            |y| y.powi(k as i32) * density_unchecked(y, nu),
            &self.breakpoints(-1.0, 1.0),
            tol.quad_abs,
            tol.quad_rel,
        )?
        .value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn symbol_at_zero_phi() {
        let dt: f64 = 0.3;
        let s = walk_symbol(0.0, dt).unwrap();
        assert!((s.lambda_plus - Complex64::from_polar(1.0, dt)).norm() < 1e-15);
        assert!((s.lambda_minus - Complex64::from_polar(1.0, -dt)).norm() < 1e-15);
    }

    #[test]
    fn symbol_at_quarter_phi() {
        let s = walk_symbol(FRAC_PI_2, 0.2).unwrap();
        assert!((s.lambda_plus - I).norm() < 1e-15);
        assert!((s.lambda_minus + I).norm() < 1e-15);
    }

    #[test]
    fn eigenpairs_and_orthogonality() {
        for &(phi, dt) in &[(0.0, 0.01), (1e-9, 1e-3), (-2.0, 0.4), (3.0, 1.2), (-PI, 0.05)] {
            let s = walk_symbol(phi, dt).unwrap();
            let m = symbol_matrix(phi, dt);
            for (l, v) in [(s.lambda_plus, s.v_plus), (s.lambda_minus, s.v_minus)] {
                assert!((m * v - v * l).norm() < 1e-12, "phi {phi} dt {dt}");
                assert_abs_diff_eq!(v.norm(), 1.0, epsilon = 1e-14);
                assert!((l.norm() - 1.0).abs() < 1e-13);
            }
            assert!(s.v_plus.dotc(&s.v_minus).norm() < 1e-12);
        }
    }

    #[test]
    fn degenerate_symbol_is_extended() {
        // sin(dt)^2 underflows, so the gap is exactly zero.
        let s = walk_symbol(0.0, 1e-200).unwrap();
        assert_eq!(s.lambda_plus, s.lambda_minus);
        assert_eq!(s.v_plus[0], Complex64::from(1.0));
        assert_eq!(s.v_minus[1], Complex64::from(1.0));
        assert!(matches!(
            group_velocity(0.0, 1e-200),
            Err(DiracError::DegenerateSymbol { .. })
        ));
        assert_eq!(group_velocity(0.0, PI).unwrap(), 0.0);
    }

    #[test]
    fn velocity_values() {
        assert_eq!(group_velocity(0.0, 0.1).unwrap(), 0.0);
        assert_abs_diff_eq!(
            group_velocity(FRAC_PI_2, 0.1).unwrap(),
            0.1f64.cos(),
            epsilon = 1e-15
        );
        assert_eq!(
            group_velocity(-0.7, 0.1).unwrap(),
            -group_velocity(0.7, 0.1).unwrap()
        );
    }

    #[test]
    fn density_values_and_domain() {
        assert_abs_diff_eq!(
            limit_density(0.0, 2.5).unwrap(),
            1.0 / (2.5 * PI.sqrt()),
            epsilon = 1e-16
        );
        assert!(limit_density(1.0 - 1e-9, 2.5).unwrap() < 1e-100);
        assert_eq!(
            limit_density(0.3, 1.9).unwrap(),
            limit_density(-0.3, 1.9).unwrap()
        );
        assert!(matches!(
            limit_density(1.0, 2.5),
            Err(DiracError::OutsideSupport(_))
        ));
        assert!(limit_density(-1.5, 2.5).is_err());
        assert!(limit_density(0.2, 0.0).is_err());
    }

    #[test]
    fn horn_bounds() {
        assert!(matches!(horn_location(0.8), Err(DiracError::Unimodal(_))));
        assert_abs_diff_eq!(horn_location(2.5).unwrap(), 0.9451631252505215, epsilon = 1e-12);
        assert!(horn_location(1e6).unwrap() > 1.0 - 1e-12);
        assert!(horn_location(2.9).unwrap() > horn_location(1.9).unwrap());
    }

    #[test]
    fn moments_low_order() {
        assert_abs_diff_eq!(limit_moment(0, 2.0).unwrap(), 1.0, epsilon = 1e-10);
        assert!(limit_moment(1, 2.0).unwrap().abs() < 1e-10);
        assert!(limit_moment(3, 2.9).unwrap().abs() < 1e-10);
    }

    #[test]
    fn cdf_edge_cases() {
        let one = Complex64::from(1.0);
        let zero = Complex64::from(0.0);
        let s = LatticeState::single_site(0.05, 0, one, zero).unwrap();
        let g = spectral_coefficients(&s, Helicity::Plus).unwrap();
        assert_abs_diff_eq!(limit_cdf(-1.0, 1.0, &g).unwrap(), 1.0, epsilon = 1e-12);
        assert_eq!(limit_cdf(0.3, 0.3, &g).unwrap(), 0.0);
        assert!(limit_cdf(0.5, 0.1, &g).is_err());
        assert!(limit_cdf(-1.1, 0.1, &g).is_err());
    }

    #[test]
    fn coarse_phi_grid_rejected() {
        let one = Complex64::from(1.0);
        let s = LatticeState::new(0.1, 0.0, 0, vec![one; 10], vec![one; 10]).unwrap();
        assert!(matches!(
            spectral_coefficients_on(&s, Helicity::Plus, 8),
            Err(DiracError::CoarsePhiGrid { .. })
        ));
    }

    #[test]
    fn approx_sum_identity_at_origin() {
        let (nu, dt) = (3.0, 0.01);
        let (gp, gm) = gaussian_g_approx(0.0, nu, dt).unwrap();
        let expect = 2.0 * PI.sqrt() / (nu * dt * dt);
        assert!(((gp.norm_sqr() + gm.norm_sqr()) - expect).abs() < 1e-10 * expect);
    }
}
