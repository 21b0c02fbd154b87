use thiserror::Error;

/// Errors raised by the spinor, lattice, spectral and asymptotic layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiracError {
    #[error("non-finite value for {0}")]
    NonFinite(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("spinor is not of tensor-product form (second-factor mixing {mixing:.3e})")]
    NotProductForm { mixing: f64 },

    #[error("grid aliasing: spacing {spacing:.6e} exceeds pi/p_max = {limit:.6e}")]
    Aliasing { spacing: f64, limit: f64 },

    #[error("momentum content at the zone edge ({edge_mass:.3e}) makes the lattice transform unreliable")]
    ZoneEdge { edge_mass: f64 },

    #[error("lattice window is empty: all coefficients vanish")]
    EmptyWindow,

    #[error("norm drift {drift:.3e} after {step} steps exceeds {limit:.1e}")]
    NormDrift { step: usize, drift: f64, limit: f64 },

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("incompatible grids: {0}")]
    IncompatibleGrids(String),

    #[error("degenerate walk symbol at phi = {phi}")]
    DegenerateSymbol { phi: f64 },

    #[error("phi grid of {points} points is too coarse for a support of {width} sites")]
    CoarsePhiGrid { points: usize, width: usize },

    #[error("limit density is defined on the open interval (-1, 1), got y = {0}")]
    OutsideSupport(f64),

    #[error("limit density is unimodal for nu^2 = {0} <= 2/3")]
    Unimodal(f64),
}

impl DiracError {
    /// Numerical-health failures, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            DiracError::NormDrift { .. }
                | DiracError::Aliasing { .. }
                | DiracError::ZoneEdge { .. }
                | DiracError::Quadrature(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, DiracError>;

pub(crate) fn finite(value: f64, what: &'static str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(DiracError::NonFinite(what))
    }
}

pub(crate) fn positive(value: f64, what: &'static str) -> Result<f64> {
    finite(value, what)?;
    if value > 0.0 {
        Ok(value)
    } else {
        Err(DiracError::InvalidParameter(format!(
            "{what} must be positive, got {value}"
        )))
    }
}
