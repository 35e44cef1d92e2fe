//! Equilibrium widths and sound velocities of harmonically confined
//! polytropic superfluids (cigar- and disk-shaped traps) across the BCS-BEC
//! crossover, with a 1D dispersive-hydrodynamics simulator to check the
//! analytic results in the time domain.
//!
//! All quantities are in trap units: `hbar = m = 1`, tight-trap frequency 1.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod hydrosim;
pub mod polytrope;
pub mod roots;
pub mod sound;
pub mod widths;

pub use error::{Error, Result};
pub use polytrope::{
    chemical_potential_cigar, chemical_potential_disk, energy_per_particle, fermi_scales,
    feshbach_scattering_length, regime_params, GeometryKind, PolytropeParams, Regime, TrapGeometry,
};
pub use sound::{
    default_density_grid, dispersion_omega, log_grid, sound_cigar, sound_disk, sound_from_width,
    sound_reduced, sound_uniform_3d, sweep_sound_curve, DispersionBranch, DispersionPoint,
    SweepRow,
};
pub use widths::{
    asymptotic_width_3d, cigar_width_residual, disk_width_residual, profile_moment_ratio,
    solve_cigar_width, solve_disk_width, solve_width, variational_width, Branch, DensityProfile,
    WidthSolution,
};
