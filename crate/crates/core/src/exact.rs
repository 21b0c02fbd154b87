//! Exact evolution `exp(-i H(p) t)` in momentum space.
//!
//! The momentum grid is the discrete Fourier dual of a window of walk sites:
//! `n` sites of spacing `dx` pair with `n` momenta of spacing
//! `dp = 2 pi / (n dx)` covering `[-pi/dx, pi/dx)`. Amplitudes follow
//! `psi(x) = (2 pi)^-1/2 int e^{ipx} psi~(p) dp`, discretized so that
//! `sum |psi~|^2 dp = sum |a|^2`.

use std::f64::consts::PI;

use nalgebra::Matrix2;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::config::Tolerances;
use crate::error::{finite, positive, DiracError, Result};
use crate::fourier::{centered_forward, centered_inverse, fast_len, lattice_phase};
use crate::initial::MomentumProfile;
use crate::spinor::{effective_spinor, Helicity};
use crate::walk::LatticeState;

/// `n` momenta dual to the sites `first_site .. first_site + n` of the fiber `x0 + m dx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumGrid {
    pub dx: f64,
    pub x0: f64,
    pub first_site: i64,
    pub n: usize,
}

impl MomentumGrid {
    pub fn new(dx: f64, x0: f64, first_site: i64, n: usize) -> Result<Self> {
        positive(dx, "dx")?;
        finite(x0, "x0")?;
        if n == 0 || !n.is_multiple_of(2) {
            return Err(DiracError::InvalidParameter(format!(
                "momentum grid size must be even and positive, got {n}"
            )));
        }
        Ok(MomentumGrid {
            dx,
            x0,
            first_site,
            n,
        })
    }

    /// The smallest fast grid holding the sites `first..=last` of `state`'s fiber.
    pub fn spanning(state: &LatticeState, first: i64, last: i64) -> Result<Self> {
        if last < first {
            return Err(DiracError::InvalidParameter("empty site range".into()));
        }
        let len = (last - first + 1) as usize;
        MomentumGrid::new(state.dt(), state.x0(), first, fast_len(len))
    }

    pub fn dp(&self) -> f64 {
        2.0 * PI / (self.n as f64 * self.dx)
    }

    pub fn p(&self, k: usize) -> f64 {
        (k as f64 - (self.n / 2) as f64) * self.dp()
    }

    pub fn last_site(&self) -> i64 {
        self.first_site + self.n as i64 - 1
    }

    fn phase(&self, k: usize) -> Complex64 {
        lattice_phase(k, self.n, self.first_site, self.x0 / self.dx)
    }

    fn same_fiber(&self, state: &LatticeState) -> bool {
        (state.dt() - self.dx).abs() <= 1e-12 * self.dx && (state.x0() - self.x0).abs() <= 1e-12 * self.dx
    }
}

/// Two-component momentum amplitudes on a [`MomentumGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralState {
    pub grid: MomentumGrid,
    pub helicity: Helicity,
    pub plus: Vec<Complex64>,
    pub minus: Vec<Complex64>,
}

impl SpectralState {
    /// Transforms a lattice state; its window must lie inside the grid.
    pub fn from_lattice(state: &LatticeState, grid: MomentumGrid, helicity: Helicity) -> Result<Self> {
        if !grid.same_fiber(state) {
            return Err(DiracError::IncompatibleGrids(
                "lattice step or fiber offset differs".into(),
            ));
        }
        if state.first_site() < grid.first_site || state.last_site() > grid.last_site() {
            return Err(DiracError::IncompatibleGrids(format!(
                "sites {}..={} do not fit the grid {}..={}",
                state.first_site(),
                state.last_site(),
                grid.first_site,
                grid.last_site()
            )));
        }
        let offset = (state.first_site() - grid.first_site) as usize;
        let scale = (grid.dx / (2.0 * PI)).sqrt();
        let transform = |amps: &[Complex64]| -> Vec<Complex64> {
            let mut padded = vec![Complex64::new(0.0, 0.0); grid.n];
            padded[offset..offset + amps.len()].copy_from_slice(amps);
            let mut out = centered_forward(padded);
            for (k, v) in out.iter_mut().enumerate() {
                *v *= grid.phase(k).conj() * scale;
            }
            out
        };
        Ok(SpectralState {
            grid,
            helicity,
            plus: transform(state.plus()),
            minus: transform(state.minus()),
        })
    }

    /// Samples `f(p) u(p)` on the grid and normalizes.
    pub fn from_profile(profile: &MomentumProfile, grid: MomentumGrid, helicity: Helicity) -> Result<Self> {
        let zone = PI / grid.dx;
        if zone < profile.p_max() {
            return Err(DiracError::Aliasing {
                spacing: grid.dx,
                limit: PI / profile.p_max(),
            });
        }
        let (plus, minus): (Vec<_>, Vec<_>) = (0..grid.n)
            .map(|k| {
                let p = grid.p(k);
                let u = effective_spinor(p, helicity);
                let f = profile.eval(p);
                (f * u[0], f * u[1])
            })
            .unzip();
        let mut state = SpectralState {
            grid,
            helicity,
            plus,
            minus,
        };
        let norm = state.norm_sqr().sqrt();
        if !(norm > 0.0) {
            return Err(DiracError::EmptyWindow);
        }
        state
            .plus
            .iter_mut()
            .chain(state.minus.iter_mut())
            .for_each(|c| *c /= norm);
        Ok(state)
    }

    /// `sum (|psi+|^2 + |psi-|^2) dp`.
    pub fn norm_sqr(&self) -> f64 {
        self.plus
            .iter()
            .zip(&self.minus)
            .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
            .sum::<f64>()
            * self.grid.dp()
    }

    /// Inverse transform onto the grid's window of sites.
    pub fn to_lattice(&self) -> Result<LatticeState> {
        let g = self.grid;
        let scale = (g.dx / (2.0 * PI)).sqrt() * g.dp();
        let transform = |amps: &[Complex64]| -> Vec<Complex64> {
            let shifted: Vec<Complex64> = amps.iter().enumerate().map(|(k, v)| v * g.phase(k)).collect();
            let mut out = centered_inverse(shifted);
            out.iter_mut().for_each(|c| *c *= scale);
            out
        };
        LatticeState::new(
            g.dx,
            g.x0,
            g.first_site,
            transform(&self.plus),
            transform(&self.minus),
        )
    }

    /// Fraction of the norm outside the positive-energy branch.
    pub fn leakage(&self) -> f64 {
        let total = self.norm_sqr();
        let kept: f64 = (0..self.grid.n)
            .map(|k| {
                let u = effective_spinor(self.grid.p(k), self.helicity);
                (u[0].conj() * self.plus[k] + u[1].conj() * self.minus[k]).norm_sqr()
            })
            .sum::<f64>()
            * self.grid.dp();
        1.0 - kept / total
    }

    /// Norm fraction in the outer tenth of the zone on either side.
    pub fn zone_edge_mass(&self) -> f64 {
        let edge = 0.9 * PI / self.grid.dx;
        let total = self.norm_sqr() / self.grid.dp();
        let outer: f64 = (0..self.grid.n)
            .filter(|&k| self.grid.p(k).abs() > edge)
            .map(|k| self.plus[k].norm_sqr() + self.minus[k].norm_sqr())
            .sum();
        outer / total
    }
}

/// `exp(-i H(p) t) = cos(E t) - i sin(E t) H(p) / E`.
pub fn propagator_matrix(p: f64, t: f64) -> Result<Matrix2<Complex64>> {
    finite(p, "momentum")?;
    finite(t, "time")?;
    let (a, b, c, d) = propagator_entries(p, t);
    Ok(Matrix2::new(a, b, c, d))
}

#[inline]
fn propagator_entries(p: f64, t: f64) -> (Complex64, Complex64, Complex64, Complex64) {
    let e = p.hypot(1.0);
    let (sin, cos) = (e * t).sin_cos();
    let s = sin / e;
    (
        Complex64::new(cos, -s * p),
        Complex64::from(-s),
        Complex64::from(s),
        Complex64::new(cos, s * p),
    )
}

/// Applies the exact propagator mode by mode.
pub fn evolve_exact(state: &SpectralState, t: f64) -> Result<SpectralState> {
    finite(t, "time")?;
    let sign = state.helicity.sign();
    let grid = state.grid;
    let (plus, minus): (Vec<_>, Vec<_>) = state
        .plus
        .par_iter()
        .zip(&state.minus)
        .enumerate()
        .map(|(k, (&up, &down))| {
            let (a, b, c, d) = propagator_entries(sign * grid.p(k), t);
            (a * up + b * down, c * up + d * down)
        })
        .unzip();
    Ok(SpectralState {
        grid,
        helicity: state.helicity,
        plus,
        minus,
    })
}

/// Rank-one projector onto the effective positive-energy spinor.
pub fn positive_energy_projector(p: f64) -> Result<Matrix2<Complex64>> {
    positive_energy_projector_for(p, Helicity::Plus)
}

pub fn positive_energy_projector_for(p: f64, helicity: Helicity) -> Result<Matrix2<Complex64>> {
    finite(p, "momentum")?;
    let u = effective_spinor(p, helicity);
    Ok(u * u.adjoint())
}

/// Norm fraction of a lattice state outside the positive-energy branch.
pub fn energy_leakage(state: &LatticeState, helicity: Helicity) -> Result<f64> {
    let grid = MomentumGrid::spanning(state, state.first_site(), state.last_site())?;
    let spectral = SpectralState::from_lattice(state, grid, helicity)?;
    let edge_mass = spectral.zone_edge_mass();
    if edge_mass > Tolerances::DEFAULT.zone_edge_mass {
        return Err(DiracError::ZoneEdge { edge_mass });
    }
    Ok(spectral.leakage())
}

/// Exact evolution of `profile` to time `t`, sampled on the sites `first..=last`
/// of the fiber `x0 + m dt`.
pub fn exact_lattice_state(
    profile: &MomentumProfile,
    dt: f64,
    x0: f64,
    sites: (i64, i64),
    t: f64,
    helicity: Helicity,
) -> Result<LatticeState> {
    let (first, last) = sites;
    if last < first {
        return Err(DiracError::InvalidParameter("empty site range".into()));
    }
    let len = (last - first + 1) as usize;
    let pad = (len / 10).max(16) as i64;
    let grid = MomentumGrid::new(dt, x0, first - pad, fast_len(len + 2 * pad as usize))?;
    let initial = SpectralState::from_profile(profile, grid, helicity)?;
    let lattice = evolve_exact(&initial, t)?.to_lattice()?;
    let lo = (first - grid.first_site) as usize;
    LatticeState::new(
        dt,
        x0,
        first,
        lattice.plus()[lo..lo + len].to_vec(),
        lattice.minus()[lo..lo + len].to_vec(),
    )
}

/// Distances between two position distributions on the same fiber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonReport {
    pub l1: f64,
    pub l2: f64,
    pub sup: f64,
    pub method: &'static str,
}

/// Compares the normalized site distributions of two lattice states over the
/// union of their windows.
pub fn compare_densities(a: &LatticeState, b: &LatticeState) -> Result<ComparisonReport> {
    if (a.dt() - b.dt()).abs() > 1e-12 * a.dt() || (a.x0() - b.x0()).abs() > 1e-12 * a.dt() {
        return Err(DiracError::IncompatibleGrids(format!(
            "lattices differ: dt {} vs {}, x0 {} vs {}",
            a.dt(),
            b.dt(),
            a.x0(),
            b.x0()
        )));
    }
    let (na, nb) = (a.norm_sqr(), b.norm_sqr());
    if !(na > 0.0 && nb > 0.0) {
        return Err(DiracError::EmptyWindow);
    }
    let first = a.first_site().min(b.first_site());
    let last = a.last_site().max(b.last_site());
    let prob = |s: &LatticeState, m: i64, norm: f64| {
        let (u, d) = s.amplitude(m);
        (u.norm_sqr() + d.norm_sqr()) / norm
    };
    let (mut l1, mut l2, mut sup) = (0.0f64, 0.0f64, 0.0f64);
    for m in first..=last {
        let diff = (prob(a, m, na) - prob(b, m, nb)).abs();
        l1 += diff;
        l2 += diff * diff;
        sup = sup.max(diff);
    }
    Ok(ComparisonReport {
        l1,
        l2: l2.sqrt(),
        sup,
        method: "lattice-sampling",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spinor::{hamiltonian_matrix, pauli_2};
    use approx::assert_abs_diff_eq;

    fn max_abs(m: &Matrix2<Complex64>) -> f64 {
        m.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn propagator_at_zero_time_is_identity() {
        let m = propagator_matrix(2.3, 0.0).unwrap();
        assert_eq!(max_abs(&(m - Matrix2::identity())), 0.0);
    }

    #[test]
    fn propagator_at_rest_is_rotation() {
        let t: f64 = 0.9;
        let m = propagator_matrix(0.0, t).unwrap();
        let expect =
            Matrix2::identity() * Complex64::from(t.cos()) - pauli_2() * Complex64::new(0.0, t.sin());
        assert!(max_abs(&(m - expect)) < 1e-16);
        assert!(m.iter().all(|c| c.im == 0.0));
    }

    #[test]
    fn propagator_unitary_and_group_law() {
        for &(p, t1, t2) in &[(1.3, 0.7, 0.2), (-6.0, 3.1, 1.7), (0.01, 4.9, 0.05)] {
            let u1 = propagator_matrix(p, t1).unwrap();
            let u2 = propagator_matrix(p, t2).unwrap();
            let u12 = propagator_matrix(p, t1 + t2).unwrap();
            assert!(max_abs(&(u1.adjoint() * u1 - Matrix2::identity())) < 1e-13);
            assert!(max_abs(&(u2 * u1 - u12)) < 1e-12);
        }
    }

    #[test]
    fn projector_properties() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let rest = positive_energy_projector(0.0).unwrap();
        let v = nalgebra::Vector2::new(Complex64::from(r), Complex64::new(0.0, r));
        assert!(max_abs(&(rest - v * v.adjoint())) < 1e-15);
        for &p in &[-5.0, -0.3, 0.0, 2.0, 8.0] {
            let proj = positive_energy_projector(p).unwrap();
            assert!(max_abs(&(proj * proj - proj)) < 1e-13);
            assert!(max_abs(&(proj - proj.adjoint())) < 1e-15);
            assert_abs_diff_eq!(proj.trace().re, 1.0, epsilon = 1e-14);
            let u = propagator_matrix(p, 1.7).unwrap();
            assert!(max_abs(&(proj * u - u * proj)) < 1e-12);
            // H commutes too: the projector is a spectral projector of H.
            let h = hamiltonian_matrix(p).unwrap();
            assert!(max_abs(&(proj * h - h * proj)) < 1e-13);
        }
    }

    #[test]
    fn identical_states_compare_to_zero() {
        let s = LatticeState::single_site(0.1, 0, Complex64::from(1.0), Complex64::from(0.0)).unwrap();
        let r = compare_densities(&s, &s).unwrap();
        assert_eq!((r.l1, r.l2, r.sup), (0.0, 0.0, 0.0));
    }

    #[test]
    fn disjoint_point_masses_compare_to_two() {
        let one = Complex64::from(1.0);
        let zero = Complex64::from(0.0);
        let a = LatticeState::single_site(0.1, -3, one, zero).unwrap();
        let b = LatticeState::single_site(0.1, 5, zero, one).unwrap();
        let r = compare_densities(&a, &b).unwrap();
        assert_eq!(r.l1, 2.0);
        assert_eq!(r.sup, 1.0);
    }

    #[test]
    fn mismatched_lattices_rejected() {
        let one = Complex64::from(1.0);
        let a = LatticeState::single_site(0.1, 0, one, one).unwrap();
        let b = LatticeState::single_site(0.2, 0, one, one).unwrap();
        assert!(matches!(
            compare_densities(&a, &b),
            Err(DiracError::IncompatibleGrids(_))
        ));
    }

    #[test]
    fn odd_grid_rejected() {
        assert!(MomentumGrid::new(0.1, 0.0, 0, 7).is_err());
    }
}
