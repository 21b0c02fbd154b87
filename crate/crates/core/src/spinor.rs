//! Dirac matrices, energies and positive-energy spinors for motion along x.
//!
//! Four-spinors live in the tensor product of a "first factor" (the effective
//! two-component space) and a "second factor" carrying the helicity label
//! `e+ = (1, 0)`, `e- = (0, 1)`. Components are ordered
//! `index = 2 * first + second`.

use nalgebra::{Matrix2, Matrix4, Vector2, Vector4};
use num_complex::Complex64;

use crate::config::Tolerances;
use crate::error::{finite, DiracError, Result};

pub type Complex2 = Vector2<Complex64>;
pub type Complex4 = Vector4<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Helicity branch of a positive-energy state, `+1/2` or `-1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Helicity {
    #[default]
    Plus,
    Minus,
}

impl Helicity {
    pub fn sign(self) -> f64 {
        match self {
            Helicity::Plus => 1.0,
            Helicity::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Helicity {
        match self {
            Helicity::Plus => Helicity::Minus,
            Helicity::Minus => Helicity::Plus,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Helicity::Plus => "plus",
            Helicity::Minus => "minus",
        }
    }
}

impl std::str::FromStr for Helicity {
    type Err = DiracError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(Helicity::Plus),
            "minus" | "-" => Ok(Helicity::Minus),
            other => Err(DiracError::InvalidParameter(format!(
                "unknown helicity branch '{other}' (expected plus or minus)"
            ))),
        }
    }
}

impl std::fmt::Display for Helicity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

pub fn pauli_1() -> Matrix2<Complex64> {
    Matrix2::new(ZERO, ONE, ONE, ZERO)
}

pub fn pauli_2() -> Matrix2<Complex64> {
    Matrix2::new(ZERO, -I, I, ZERO)
}

pub fn pauli_3() -> Matrix2<Complex64> {
    Matrix2::new(ONE, ZERO, ZERO, -ONE)
}

/// The Dirac matrices `alpha = s3 (x) s3`, `beta = s2 (x) 1` and the spin
/// operator along x, `(1 (x) s3) / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiracRep {
    pub alpha: Matrix4<Complex64>,
    pub beta: Matrix4<Complex64>,
    pub helicity: Matrix4<Complex64>,
}

impl DiracRep {
    pub fn new() -> Self {
        let s2 = pauli_2();
        let s3 = pauli_3();
        let id = Matrix2::<Complex64>::identity();
        DiracRep {
            alpha: s3.kronecker(&s3),
            beta: s2.kronecker(&id),
            helicity: id.kronecker(&s3) * Complex64::from(0.5),
        }
    }

    /// Full 4x4 Hamiltonian `alpha p + beta`.
    pub fn hamiltonian(&self, p: f64) -> Result<Matrix4<Complex64>> {
        finite(p, "momentum")?;
        Ok(self.alpha * Complex64::from(p) + self.beta)
    }
}

impl Default for DiracRep {
    fn default() -> Self {
        DiracRep::new()
    }
}

/// Relativistic energy `sqrt(p^2 + 1)` in natural units.
pub fn energy(p: f64) -> Result<f64> {
    finite(p, "momentum")?;
    Ok(p.hypot(1.0))
}

/// Effective two-component Hamiltonian `s3 p + s2`.
pub fn hamiltonian_matrix(p: f64) -> Result<Matrix2<Complex64>> {
    finite(p, "momentum")?;
    let p = Complex64::from(p);
    Ok(Matrix2::new(p, -I, I, -p))
}

/// Effective Hamiltonian on a helicity branch; the minus branch sees `-p`.
pub fn effective_hamiltonian(p: f64, helicity: Helicity) -> Result<Matrix2<Complex64>> {
    hamiltonian_matrix(helicity.sign() * p)
}

/// The two real weights `(1 + E + p, 1 + E - p) / (2 sqrt(E (E + 1)))`.
///
/// `E + p` is evaluated as `1 / (E - p)` for negative `p` to avoid cancellation.
pub(crate) fn spinor_weights(p: f64) -> (f64, f64) {
    let e = p.hypot(1.0);
    let (e_plus_p, e_minus_p) = if p >= 0.0 {
        (e + p, 1.0 / (e + p))
    } else {
        (1.0 / (e - p), e - p)
    };
    let denom = 2.0 * (e * (e + 1.0)).sqrt();
    ((1.0 + e_plus_p) / denom, (1.0 + e_minus_p) / denom)
}

/// Effective positive-energy spinor of the given helicity branch.
pub(crate) fn effective_spinor(p: f64, helicity: Helicity) -> Complex2 {
    let (wp, wm) = spinor_weights(p);
    match helicity {
        Helicity::Plus => Vector2::new(Complex64::from(wp), I * wm),
        Helicity::Minus => Vector2::new(Complex64::from(wm), I * wp),
    }
}

/// A positive-energy spinor with its momentum and energy.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergySpinor {
    pub p: f64,
    pub energy: f64,
    pub helicity: Helicity,
    pub u4: Complex4,
    pub u2: Complex2,
}

fn energy_spinor(p: f64, helicity: Helicity) -> Result<EnergySpinor> {
    let energy = energy(p)?;
    let u2 = effective_spinor(p, helicity);
    let second = match helicity {
        Helicity::Plus => Vector2::new(ONE, ZERO),
        Helicity::Minus => Vector2::new(ZERO, ONE),
    };
    let u4 = u2.kronecker(&second);
    Ok(EnergySpinor {
        p,
        energy,
        helicity,
        u4: Vector4::from_column_slice(u4.as_slice()),
        u2,
    })
}

/// Positive-energy spinor with helicity `+1/2`.
pub fn u_plus4(p: f64) -> Result<EnergySpinor> {
    energy_spinor(p, Helicity::Plus)
}

/// Positive-energy spinor with helicity `-1/2`.
pub fn u_minus4(p: f64) -> Result<EnergySpinor> {
    energy_spinor(p, Helicity::Minus)
}

/// Drops the constant second tensor factor of a product 4-spinor.
///
/// Returns the first-factor spinor together with the helicity branch selected
/// by the second factor.
pub fn reduce_effective(u4: &Complex4) -> Result<(Complex2, Helicity)> {
    if u4.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(DiracError::NonFinite("4-spinor"));
    }
    let up = Vector2::new(u4[0], u4[2]);
    let down = Vector2::new(u4[1], u4[3]);
    let (n_up, n_down) = (up.norm(), down.norm());
    let total = n_up.hypot(n_down);
    if total == 0.0 {
        return Err(DiracError::InvalidParameter("zero 4-spinor".into()));
    }
    let mixing = n_up.min(n_down) / total;
    if mixing > Tolerances::DEFAULT.product_form {
        return Err(DiracError::NotProductForm { mixing });
    }
    if n_up >= n_down {
        Ok((up, Helicity::Plus))
    } else {
        Ok((down, Helicity::Minus))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn max_abs4(m: &Matrix4<Complex64>) -> f64 {
        m.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn energy_values() {
        assert_eq!(energy(0.0).unwrap(), 1.0);
        assert_abs_diff_eq!(energy(3f64.sqrt()).unwrap(), 2.0, epsilon = 1e-15);
        assert_eq!(energy(0.75).unwrap(), 1.25);
        assert!(matches!(energy(f64::NAN), Err(DiracError::NonFinite(_))));
        assert!(energy(f64::INFINITY).is_err());
    }

    #[test]
    fn hamiltonian_at_rest_is_sigma2() {
        assert_eq!(hamiltonian_matrix(0.0).unwrap(), pauli_2());
    }

    #[test]
    fn hamiltonian_squares_to_energy() {
        for &p in &[-7.3, -1.0, 0.0, 0.2, 1.0, 9.9] {
            let h = hamiltonian_matrix(p).unwrap();
            let diff = h * h - Matrix2::identity() * Complex64::from(p * p + 1.0);
            assert!(diff.iter().all(|c| c.norm() < 1e-14), "p = {p}");
            assert_eq!(h, h.adjoint());
        }
    }

    #[test]
    fn dirac_rep_algebra() {
        let rep = DiracRep::new();
        let id = Matrix4::<Complex64>::identity();
        assert_eq!(max_abs4(&(rep.alpha * rep.alpha - id)), 0.0);
        assert_eq!(max_abs4(&(rep.beta * rep.beta - id)), 0.0);
        assert_eq!(max_abs4(&(rep.alpha * rep.beta + rep.beta * rep.alpha)), 0.0);
        assert_eq!(rep.alpha, rep.alpha.adjoint());
        assert_eq!(rep.beta, rep.beta.adjoint());
        assert_eq!(rep.helicity, rep.helicity.adjoint());
    }

    #[test]
    fn rest_spinor_effective_form() {
        let u = u_plus4(0.0).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(u.u2[0].re, s, epsilon = 1e-15);
        assert_abs_diff_eq!(u.u2[1].im, s, epsilon = 1e-15);
        assert_eq!(u.u2[0].im, 0.0);
        assert_eq!(u.u2[1].re, 0.0);
    }

    #[test]
    fn eigen_equation_at_p3() {
        let rep = DiracRep::new();
        let u = u_plus4(3.0).unwrap();
        let hu = rep.hamiltonian(3.0).unwrap() * u.u4;
        for k in 0..4 {
            assert!((hu[k] - u.u4[k] * 10f64.sqrt()).norm() < 1e-14);
        }
    }

    #[test]
    fn reduce_recovers_effective_form() {
        let a = Complex64::new(0.3, -0.2);
        let b = Complex64::new(-0.1, 0.9);
        let (u2, hel) = reduce_effective(&Vector4::new(a, ZERO, b, ZERO)).unwrap();
        assert_eq!(u2, Vector2::new(a, b));
        assert_eq!(hel, Helicity::Plus);

        for &p in &[-4.0, 0.0, 2.5] {
            let u = u_minus4(p).unwrap();
            let (u2, hel) = reduce_effective(&u.u4).unwrap();
            assert_eq!(hel, Helicity::Minus);
            assert_eq!(u2, u.u2);
        }
    }

    #[test]
    fn reduce_rejects_mixed_second_factor() {
        let v = Vector4::new(ONE, Complex64::from(1e-6), ZERO, ZERO);
        assert!(matches!(
            reduce_effective(&v),
            Err(DiracError::NotProductForm { .. })
        ));
    }

    #[test]
    fn weights_are_cancellation_free() {
        // w+(p)^2 = 1/2 + p / (2E); for p = -1e4 that is ~ 2.5e-9.
        let p = -1e4;
        let (wp, wm) = spinor_weights(p);
        let e = p.hypot(1.0);
        let expected = 0.5 + p / (2.0 * e);
        assert!((wp * wp - expected).abs() / expected < 1e-6);
        assert_abs_diff_eq!(wp * wp + wm * wm, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn helicity_parse() {
        assert_eq!("plus".parse::<Helicity>().unwrap(), Helicity::Plus);
        assert_eq!("minus".parse::<Helicity>().unwrap(), Helicity::Minus);
        assert!("up".parse::<Helicity>().is_err());
    }
}
