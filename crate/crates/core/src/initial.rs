//! Positive-energy, definite-helicity initial wavepackets.
//!
//! A momentum profile `f(p)` defines the state `(2 pi)^-1/2 int e^{ipx} f(p) u(p) dp`.
//! Its two effective spinor components in position space are the coefficients
//! `c+(x)`, `c-(x)`, which are sampled on the walk lattice to give the walker
//! and coin amplitudes.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::config::Tolerances;
use crate::error::{finite, positive, DiracError, Result};
use crate::fourier::{centered_inverse, fast_len};
use crate::quad;
use crate::spinor::{spinor_weights, Helicity};
use crate::walk::LatticeState;

type ProfileFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

#[derive(Clone)]
enum Shape {
    Gaussian { nu: f64 },
    Custom(ProfileFn),
}

/// A normalized momentum-space profile `f(p)` with a declared support cutoff.
#[derive(Clone)]
pub struct MomentumProfile {
    shape: Shape,
    p_max: f64,
    scale: f64,
    width: f64,
}

impl fmt::Debug for MomentumProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = f.debug_struct("MomentumProfile");
        match &self.shape {
            Shape::Gaussian { nu } => s.field("gaussian_nu", nu),
            Shape::Custom(_) => s.field("custom", &true),
        };
        s.field("p_max", &self.p_max).field("width", &self.width).finish()
    }
}

fn gaussian_cutoff(nu: f64, tail: f64) -> f64 {
    nu * (2.0 * (1.0 / tail).ln()).sqrt()
}

impl MomentumProfile {
    /// `f(p) = exp(-p^2 / 2 nu^2) / sqrt(nu sqrt(pi))`.
    pub fn gaussian(nu: f64) -> Result<Self> {
        positive(nu, "nu")?;
        Ok(MomentumProfile {
            shape: Shape::Gaussian { nu },
            p_max: gaussian_cutoff(nu, Tolerances::DEFAULT.profile_tail),
            scale: 1.0 / (nu * PI.sqrt()).sqrt(),
            width: nu,
        })
    }

    /// An arbitrary profile, supported on `[-p_max, p_max]` and normalized here
    /// by quadrature. `width` is the momentum scale on which `f` varies.
    pub fn from_fn<F>(f: F, p_max: f64, width: f64) -> Result<Self>
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        positive(p_max, "p_max")?;
        positive(width, "width")?;
        let f: ProfileFn = Arc::new(f);
        let g = f.clone();
        let tol = Tolerances::DEFAULT;
        let norm = quad::integrate(|p| g(p).norm_sqr(), -p_max, p_max, tol.quad_abs, tol.quad_rel)?.value;
        if !(norm > 0.0) {
            return Err(DiracError::InvalidParameter("profile has zero norm".into()));
        }
        Ok(MomentumProfile {
            shape: Shape::Custom(f),
            p_max,
            scale: 1.0 / norm.sqrt(),
            width,
        })
    }

    /// Evaluates `f(p)`. Custom profiles vanish beyond their cutoff; the
    /// Gaussian is left untruncated since it is already below the tail level there.
    pub fn eval(&self, p: f64) -> Complex64 {
        match &self.shape {
            Shape::Gaussian { nu } => Complex64::from(self.scale * (-0.5 * (p / nu).powi(2)).exp()),
            Shape::Custom(_) if p.abs() > self.p_max => Complex64::new(0.0, 0.0),
            Shape::Custom(f) => f(p) * self.scale,
        }
    }

    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    /// Momentum scale of the profile (`nu` for a Gaussian).
    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn nu(&self) -> Option<f64> {
        match self.shape {
            Shape::Gaussian { nu } => Some(nu),
            Shape::Custom(_) => None,
        }
    }

    /// `int |f|^2 dp` over the declared support.
    pub fn norm_squared(&self) -> Result<f64> {
        let tol = Tolerances::DEFAULT;
        let pieces = [-self.p_max, -self.width, 0.0, self.width, self.p_max];
        Ok(quad::integrate_pieces(|p| self.eval(p).norm_sqr(), &pieces, tol.quad_abs, tol.quad_rel)?.value)
    }
}

/// The Gaussian profile of localization parameter `nu`.
pub fn gaussian_profile(nu: f64) -> Result<MomentumProfile> {
    MomentumProfile::gaussian(nu)
}

/// Mean energy `int E(p) |f(p)|^2 dp`.
pub fn mean_energy(profile: &MomentumProfile) -> Result<f64> {
    let tol = Tolerances::DEFAULT;
    let w = profile.width();
    let pieces = [-profile.p_max(), -w, 0.0, w, profile.p_max()];
    let r = quad::integrate_pieces(
        |p| p.hypot(1.0) * profile.eval(p).norm_sqr(),
        &pieces,
        tol.quad_abs,
        tol.quad_rel,
    )?;
    if !r.value.is_finite() || r.error > 1e-8 * r.value.abs().max(1.0) {
        return Err(DiracError::Quadrature(format!(
            "mean energy did not converge (value {:e}, error {:e})",
            r.value, r.error
        )));
    }
    Ok(r.value)
}

/// A uniform grid `start + i * spacing`, `i = 0..len`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    pub start: f64,
    pub spacing: f64,
    pub len: usize,
}

impl UniformGrid {
    pub fn new(start: f64, spacing: f64, len: usize) -> Result<Self> {
        finite(start, "grid start")?;
        positive(spacing, "grid spacing")?;
        if len == 0 {
            return Err(DiracError::InvalidParameter(
                "grid must have at least one point".into(),
            ));
        }
        Ok(UniformGrid { start, spacing, len })
    }

    /// The grid `{-half_extent, ..., half_extent}` through the origin.
    pub fn symmetric(half_extent: f64, spacing: f64) -> Result<Self> {
        positive(spacing, "grid spacing")?;
        let m = (half_extent / spacing).ceil() as usize;
        UniformGrid::new(-(m as f64) * spacing, spacing, 2 * m + 1)
    }

    pub fn x(&self, i: usize) -> f64 {
        self.start + i as f64 * self.spacing
    }

    pub fn end(&self) -> f64 {
        self.x(self.len - 1)
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(|i| self.x(i))
    }
}

/// The position-space spinor coefficients `c+(x)`, `c-(x)` on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionAmplitudes {
    pub grid: UniformGrid,
    pub c_plus: Vec<Complex64>,
    pub c_minus: Vec<Complex64>,
}

impl PositionAmplitudes {
    /// Riemann sum `sum (|c+|^2 + |c-|^2) h`.
    pub fn norm(&self) -> f64 {
        self.plus_weight() + self.minus_weight()
    }

    pub fn plus_weight(&self) -> f64 {
        self.c_plus.iter().map(|c| c.norm_sqr()).sum::<f64>() * self.grid.spacing
    }

    pub fn minus_weight(&self) -> f64 {
        self.c_minus.iter().map(|c| c.norm_sqr()).sum::<f64>() * self.grid.spacing
    }

    fn magnitude(&self, i: usize) -> f64 {
        self.c_plus[i].norm().hypot(self.c_minus[i].norm())
    }

    pub fn peak(&self) -> f64 {
        (0..self.grid.len).map(|i| self.magnitude(i)).fold(0.0, f64::max)
    }
}

/// Computes `c+(x)`, `c-(x)` on `grid` by trapezoidal quadrature of the
/// Fourier integrals, evaluated with one FFT.
///
/// The momentum step is at most `min(pi / max|x|, width / 50)`, which keeps
/// the periodic images of the trapezoid sum off the grid.
pub fn position_coefficients(
    profile: &MomentumProfile,
    grid: &UniformGrid,
    helicity: Helicity,
) -> Result<PositionAmplitudes> {
    let h = grid.spacing;
    let limit = PI / profile.p_max();
    if h > limit {
        return Err(DiracError::Aliasing { spacing: h, limit });
    }
    let extent = grid.start.abs().max(grid.end().abs()).max(h);
    let dp_max = (PI / extent).min(profile.width() / 50.0);
    let n = fast_len(grid.len.max((2.0 * PI / (h * dp_max)).ceil() as usize));
    let dp = 2.0 * PI / (n as f64 * h);

    let mut plus = Vec::with_capacity(n);
    let mut minus = Vec::with_capacity(n);
    let i = Complex64::new(0.0, 1.0);
    for k in 0..n {
        let p = (k as f64 - (n / 2) as f64) * dp;
        let f = profile.eval(p);
        if f == Complex64::new(0.0, 0.0) {
            plus.push(f);
            minus.push(f);
            continue;
        }
        let (wp, wm) = spinor_weights(p);
        let (w_up, w_down) = match helicity {
            Helicity::Plus => (wp, wm),
            Helicity::Minus => (wm, wp),
        };
        let shift = Complex64::from_polar(1.0, p * grid.start);
        plus.push(f * shift * w_up);
        minus.push(f * shift * i * w_down);
    }

    let scale = dp / (2.0 * PI).sqrt();
    let finish = |v: Vec<Complex64>| -> Vec<Complex64> {
        let mut out = centered_inverse(v);
        out.truncate(grid.len);
        out.iter_mut().for_each(|c| *c *= scale);
        out
    };
    Ok(PositionAmplitudes {
        grid: *grid,
        c_plus: finish(plus),
        c_minus: finish(minus),
    })
}

/// Parameters of a walk initial state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkInitConfig {
    pub nu: f64,
    pub dt: f64,
    /// Fiber offset in `(-dt/2, dt/2]`.
    pub x0: f64,
    pub helicity: Helicity,
}

impl WalkInitConfig {
    pub fn new(nu: f64, dt: f64, helicity: Helicity) -> Result<Self> {
        let cfg = WalkInitConfig {
            nu,
            dt,
            x0: 0.0,
            helicity,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_offset(mut self, x0: f64) -> Result<Self> {
        self.x0 = x0;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        positive(self.nu, "nu")?;
        positive(self.dt, "dt")?;
        finite(self.x0, "x0")?;
        if !(self.x0 > -0.5 * self.dt && self.x0 <= 0.5 * self.dt) {
            return Err(DiracError::InvalidParameter(format!(
                "fiber offset {} outside (-dt/2, dt/2]",
                self.x0
            )));
        }
        Ok(())
    }

    /// `dt * E0`, which should be small for the walk to track the Dirac flow.
    pub fn stiffness(&self, profile: &MomentumProfile) -> Result<f64> {
        Ok(self.dt * mean_energy(profile)?)
    }
}

/// Samples `c+-` at the lattice sites, multiplies by `sqrt(dt)`, trims
/// negligible edges and renormalizes to unit norm.
///
/// The grid must be the lattice itself: spacing `dt` and points on `x0 + m dt`.
pub fn discretize_to_lattice(coeffs: &PositionAmplitudes, config: &WalkInitConfig) -> Result<LatticeState> {
    config.validate()?;
    let dt = config.dt;
    let g = coeffs.grid;
    if ((g.spacing - dt) / dt).abs() > 1e-12 {
        return Err(DiracError::IncompatibleGrids(format!(
            "coefficient spacing {} differs from lattice step {dt}",
            g.spacing
        )));
    }
    let first = (g.start - config.x0) / dt;
    let first_site = first.round();
    if (first - first_site).abs() > 1e-8 {
        return Err(DiracError::IncompatibleGrids(format!(
            "grid start {} is not on the fiber x0 + m dt",
            g.start
        )));
    }

    let peak = coeffs.peak();
    if !(peak > 0.0) {
        return Err(DiracError::EmptyWindow);
    }
    let cutoff = Tolerances::DEFAULT.window_cutoff * peak;
    let keep = |i: &usize| coeffs.magnitude(*i) > cutoff;
    let lo = (0..g.len).find(keep).ok_or(DiracError::EmptyWindow)?;
    let hi = (0..g.len).rev().find(keep).ok_or(DiracError::EmptyWindow)?;

    let sqrt_dt = dt.sqrt();
    let plus: Vec<Complex64> = coeffs.c_plus[lo..=hi].iter().map(|c| c * sqrt_dt).collect();
    let minus: Vec<Complex64> = coeffs.c_minus[lo..=hi].iter().map(|c| c * sqrt_dt).collect();
    let mut state = LatticeState::new(dt, config.x0, first_site as i64 + lo as i64, plus, minus)?;
    state.normalize()?;
    Ok(state)
}

/// Builds the lattice state of a profile on the fiber of `config`, widening
/// the sampling window until the boundary amplitude is negligible.
pub fn initial_lattice_state(profile: &MomentumProfile, config: &WalkInitConfig) -> Result<LatticeState> {
    config.validate()?;
    let dt = config.dt;
    let cutoff = Tolerances::DEFAULT.window_cutoff;
    let mut half = (10.0 / profile.width()).max(20.0 * dt);
    loop {
        let m = (half / dt).ceil() as i64;
        let grid = UniformGrid::new(config.x0 - m as f64 * dt, dt, (2 * m + 1) as usize)?;
        let coeffs = position_coefficients(profile, &grid, config.helicity)?;
        let peak = coeffs.peak();
        let edge = coeffs.magnitude(0).max(coeffs.magnitude(grid.len - 1));
        if edge <= cutoff * peak {
            return discretize_to_lattice(&coeffs, config);
        }
        half *= 2.0;
        if half > 1e4 {
            return Err(DiracError::InvalidParameter(
                "coefficients do not decay within |x| < 1e4".into(),
            ));
        }
    }
}
