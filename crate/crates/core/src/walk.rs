//! The discrete-time walk: coin rotation `U = exp(-i dt s2)` followed by the
//! spin-conditioned shift `V`.
//!
//! On the plus branch the shift moves spin-up amplitude one site toward `+x`
//! and spin-down amplitude one site toward `-x`; the minus branch reverses
//! both directions. Arrays grow by exactly one site per side per step, so
//! every stored site is inside the light cone of the initial support.

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::config::Tolerances;
use crate::error::{finite, positive, DiracError, Result};
use crate::spinor::Helicity;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Walker and coin amplitudes on the fiber `{x0 + m dt}`.
///
/// Array index `i` holds site `m = first_site + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeState {
    dt: f64,
    x0: f64,
    first_site: i64,
    plus: Vec<Complex64>,
    minus: Vec<Complex64>,
}

impl LatticeState {
    pub fn new(
        dt: f64,
        x0: f64,
        first_site: i64,
        plus: Vec<Complex64>,
        minus: Vec<Complex64>,
    ) -> Result<Self> {
        positive(dt, "dt")?;
        finite(x0, "x0")?;
        if plus.len() != minus.len() {
            return Err(DiracError::InvalidParameter(format!(
                "spin arrays differ in length ({} vs {})",
                plus.len(),
                minus.len()
            )));
        }
        if plus.is_empty() {
            return Err(DiracError::EmptyWindow);
        }
        if plus
            .iter()
            .chain(&minus)
            .any(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(DiracError::NonFinite("lattice amplitude"));
        }
        Ok(LatticeState {
            dt,
            x0,
            first_site,
            plus,
            minus,
        })
    }

    /// A single site `m` holding the coin state `(up, down)`.
    pub fn single_site(dt: f64, site: i64, up: Complex64, down: Complex64) -> Result<Self> {
        LatticeState::new(dt, 0.0, site, vec![up], vec![down])
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn first_site(&self) -> i64 {
        self.first_site
    }

    pub fn last_site(&self) -> i64 {
        self.first_site + self.len() as i64 - 1
    }

    /// Array index of site 0 (may lie outside the array).
    pub fn origin_index(&self) -> i64 {
        -self.first_site
    }

    pub fn len(&self) -> usize {
        self.plus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plus.is_empty()
    }

    pub fn plus(&self) -> &[Complex64] {
        &self.plus
    }

    pub fn minus(&self) -> &[Complex64] {
        &self.minus
    }

    pub fn sites(&self) -> impl Iterator<Item = i64> + '_ {
        self.first_site..=self.last_site()
    }

    pub fn position(&self, site: i64) -> f64 {
        self.x0 + site as f64 * self.dt
    }

    /// `(up, down)` amplitudes at `site`, zero outside the stored window.
    pub fn amplitude(&self, site: i64) -> (Complex64, Complex64) {
        let i = site - self.first_site;
        if i < 0 || i >= self.len() as i64 {
            (ZERO, ZERO)
        } else {
            (self.plus[i as usize], self.minus[i as usize])
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.plus
            .iter()
            .zip(&self.minus)
            .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
            .sum()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let norm = self.norm_sqr().sqrt();
        if !(norm > 0.0) {
            return Err(DiracError::EmptyWindow);
        }
        let inv = 1.0 / norm;
        self.plus
            .iter_mut()
            .chain(self.minus.iter_mut())
            .for_each(|c| *c *= inv);
        Ok(())
    }

    /// The same state with `k` explicit zero sites added on each side.
    pub fn padded(&self, k: usize) -> LatticeState {
        let pad = |v: &[Complex64]| {
            let mut out = vec![ZERO; v.len() + 2 * k];
            out[k..k + v.len()].copy_from_slice(v);
            out
        };
        LatticeState {
            dt: self.dt,
            x0: self.x0,
            first_site: self.first_site - k as i64,
            plus: pad(&self.plus),
            minus: pad(&self.minus),
        }
    }

    /// Mirror image `m -> -m` (on the `x0 = 0` fiber).
    pub fn reflected(&self) -> LatticeState {
        let mut plus = self.plus.clone();
        let mut minus = self.minus.clone();
        plus.reverse();
        minus.reverse();
        LatticeState {
            dt: self.dt,
            x0: -self.x0,
            first_site: -self.last_site(),
            plus,
            minus,
        }
    }

    /// Applies the rotation `(up, down) -> (down, -up)` at every site.
    ///
    /// This swap commutes with the coin and exchanges the two shift branches.
    pub fn spin_swapped(&self) -> LatticeState {
        LatticeState {
            dt: self.dt,
            x0: self.x0,
            first_site: self.first_site,
            plus: self.minus.clone(),
            minus: self.plus.iter().map(|c| -c).collect(),
        }
    }
}

/// The coin `exp(-i dt s2) = [[cos dt, -sin dt], [sin dt, cos dt]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinMatrix {
    pub cos: f64,
    pub sin: f64,
}

impl CoinMatrix {
    pub fn new(dt: f64) -> Self {
        let (sin, cos) = dt.sin_cos();
        CoinMatrix { cos, sin }
    }

    pub fn adjoint(self) -> Self {
        CoinMatrix {
            cos: self.cos,
            sin: -self.sin,
        }
    }

    pub fn matrix(&self) -> Matrix2<Complex64> {
        Matrix2::new(
            self.cos.into(),
            (-self.sin).into(),
            self.sin.into(),
            self.cos.into(),
        )
    }

    fn apply(&self, plus: &mut [Complex64], minus: &mut [Complex64]) {
        let (c, s) = (self.cos, self.sin);
        for (a, b) in plus.iter_mut().zip(minus.iter_mut()) {
            let (up, down) = (*a, *b);
            *a = up * c - down * s;
            *b = up * s + down * c;
        }
    }
}

fn grow_front(v: &mut Vec<Complex64>) {
    v.splice(0..0, [ZERO, ZERO]);
}

fn grow_back(v: &mut Vec<Complex64>) {
    v.extend_from_slice(&[ZERO, ZERO]);
}

/// Applies the coin at every site.
pub fn coin_step(state: &mut LatticeState) {
    CoinMatrix::new(state.dt).apply(&mut state.plus, &mut state.minus);
}

/// Spin-conditioned shift; the window grows by one site on each side.
pub fn shift_step(state: &mut LatticeState, helicity: Helicity) {
    // Shifting a component by +1 site means two fresh zeros in front of it
    // once the window origin moves one site left.
    let (right, left) = match helicity {
        Helicity::Plus => (&mut state.plus, &mut state.minus),
        Helicity::Minus => (&mut state.minus, &mut state.plus),
    };
    grow_front(right);
    grow_back(left);
    state.first_site -= 1;
}

/// One walk step: coin, then shift.
pub fn step(state: &mut LatticeState, helicity: Helicity) {
    coin_step(state);
    shift_step(state, helicity);
}

/// The adjoint of [`step`]: inverse shift, then inverse coin.
pub fn step_adjoint(state: &mut LatticeState, helicity: Helicity) {
    shift_step(state, helicity.flipped());
    CoinMatrix::new(state.dt)
        .adjoint()
        .apply(&mut state.plus, &mut state.minus);
}

/// Parameters of an n-step evolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkConfig {
    pub n_steps: usize,
    pub helicity: Helicity,
    /// Largest tolerated `|norm^2 - initial norm^2|`.
    pub drift_limit: f64,
}

impl WalkConfig {
    pub fn new(n_steps: usize, helicity: Helicity) -> Self {
        WalkConfig {
            n_steps,
            helicity,
            drift_limit: Tolerances::DEFAULT.norm_drift,
        }
    }
}

/// Norm bookkeeping of an evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkReport {
    pub steps: usize,
    pub initial_norm: f64,
    pub final_norm: f64,
    pub max_drift: f64,
    /// `norm^2 - initial norm^2` after each step.
    pub drift: Vec<f64>,
}

/// Applies `n_steps` walk steps, checking the total probability after each.
pub fn evolve(state: &mut LatticeState, config: &WalkConfig) -> Result<WalkReport> {
    let initial = state.norm_sqr();
    let mut drift = Vec::with_capacity(config.n_steps);
    let mut max_drift = 0.0f64;
    for n in 1..=config.n_steps {
        step(state, config.helicity);
        let d = state.norm_sqr() - initial;
        max_drift = max_drift.max(d.abs());
        drift.push(d);
        if d.abs() > config.drift_limit || !d.is_finite() {
            return Err(DiracError::NormDrift {
                step: n,
                drift: d,
                limit: config.drift_limit,
            });
        }
    }
    Ok(WalkReport {
        steps: config.n_steps,
        initial_norm: initial,
        final_norm: state.norm_sqr(),
        max_drift,
        drift,
    })
}

/// `P[m] = |a+[m]|^2 + |a-[m]|^2` over the stored window.
pub fn position_distribution(state: &LatticeState) -> Vec<f64> {
    state
        .plus
        .iter()
        .zip(&state.minus)
        .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
        .collect()
}

/// `sum_m x_m^k P[m]` with `x_m = x0 + m dt`.
pub fn empirical_moment(state: &LatticeState, k: u32) -> f64 {
    position_distribution(state)
        .iter()
        .zip(state.sites())
        .map(|(p, m)| p * state.position(m).powi(k as i32))
        .sum()
}
