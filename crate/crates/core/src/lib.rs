//! Free one-dimensional Dirac evolution emulated by a discrete-time quantum walk.
//!
//! The electron's spin plays the coin and its position on a lattice of spacing
//! `dt` (with `c = 1`) plays the walker. The crate provides
//!
//! * [`spinor`]: Dirac matrices, energies and positive-energy spinors,
//! * [`initial`]: Gaussian momentum profiles and their lattice discretization,
//! * [`walk`]: the coin/shift walk and its observables,
//! * [`exact`]: the exact momentum-space propagator and comparison metrics,
//! * [`asymptotics`]: the walk symbol, group velocity and the limit density,
//! * [`cli`]: the command implementations behind the `dirac-qrw` binary.

pub mod asymptotics;
pub mod cli;
pub mod config;
pub mod error;
pub mod exact;
mod fourier;
pub mod initial;
pub mod quad;
pub mod spinor;
pub mod walk;

pub use asymptotics::{
    gaussian_g_approx, group_velocity, horn_location, limit_cdf, limit_density, limit_moment,
    spectral_coefficients, walk_symbol, LimitDensity, SpectralCoefficients, WalkSymbol,
};
pub use config::Tolerances;
pub use error::{DiracError, Result};
pub use exact::{
    compare_densities, energy_leakage, evolve_exact, positive_energy_projector, propagator_matrix,
    ComparisonReport, MomentumGrid, SpectralState,
};
pub use initial::{
    discretize_to_lattice, gaussian_profile, initial_lattice_state, mean_energy, position_coefficients,
    MomentumProfile, PositionAmplitudes, UniformGrid, WalkInitConfig,
};
pub use spinor::{
    energy, hamiltonian_matrix, reduce_effective, u_minus4, u_plus4, DiracRep, EnergySpinor, Helicity,
};
pub use walk::{
    coin_step, empirical_moment, evolve, position_distribution, shift_step, step, CoinMatrix, LatticeState,
    WalkConfig, WalkReport,
};

pub use num_complex::Complex64;
