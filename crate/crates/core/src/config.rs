//! Numerical tolerances shared by every module.

/// All thresholds used by the library, in one place.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Allowed second-factor mixing when reducing a 4-spinor to its effective form.
    pub product_form: f64,
    /// Amplitude level of the momentum profile at its declared cutoff.
    pub profile_tail: f64,
    /// Sites whose amplitude falls below this fraction of the peak are trimmed.
    pub window_cutoff: f64,
    /// Maximum total-probability drift tolerated during a walk.
    pub norm_drift: f64,
    /// Absolute and relative targets for adaptive quadrature.
    pub quad_abs: f64,
    pub quad_rel: f64,
    /// Quasi-momentum samples per lattice site of support.
    pub phi_oversampling: usize,
    /// Zone-edge mass above which a lattice-to-momentum transform is flagged.
    pub zone_edge_mass: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        product_form: 1e-12,
        profile_tail: 1e-12,
        window_cutoff: 1e-14,
        norm_drift: 1e-9,
        quad_abs: 1e-14,
        quad_rel: 1e-12,
        phi_oversampling: 8,
        zone_edge_mass: 1e-8,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances::DEFAULT
    }
}
