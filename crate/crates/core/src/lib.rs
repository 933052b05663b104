//! Parafermionic Jaynes-Cummings model: `k` Fock parafermions of nilpotency
//! order `F` coupled linearly to a single, possibly deformed, bosonic mode.
//!
//! The total excitation number `N_tot = a†a + Σ N_i` is conserved, so the
//! Hamiltonian splits into finite blocks `H_n`. This crate builds those
//! blocks, diagonalizes them with a self-contained Hermitian eigensolver,
//! and derives thermal observables. Closed-form spectra and semiclassical
//! partition functions are provided as independent oracles.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod basis;
pub mod deformation;
pub mod eigen;
mod error;
pub mod exact;
pub mod hamiltonian;
pub mod matrix;
pub mod thermo;

pub use algebra::{
    build_mode_matrix, clifford_mode, destruction_phase, number_operator_matrix, CliffordTriple, Phase, PhaseRoot,
};
pub use basis::{block_dimension, enumerate_block_basis, OccupationConfig};
pub use deformation::Deformation;
pub use eigen::{eigendecompose, Spectrum};
pub use error::{Error, Result};
pub use exact::{LabeledSpectrum, Level};
pub use hamiltonian::{
    add_mu_number_term, build_block, build_full_truncated, build_higher_spin_block, BlockHamiltonian, ModelParams,
    TruncatedHamiltonian,
};
pub use matrix::CMatrix;
pub use num_complex::Complex64;
pub use thermo::{
    detect_plateaus, omega_scan, thermo_from_spectrum, PlateauObservable, PlateauReport, ThermoObservables,
};
