//! Two-electron configuration interaction in LS coupling.

mod config;
mod coulomb;
mod slater;
mod solve;

pub use config::{Configuration, ConfigurationBasis, OrbitalLabel, Parity, Symmetry};
pub use coulomb::{coulomb_element, coulomb_nonantisym, multipole_coefficients, product_expansion, AngularTable};
pub use slater::{OrbitalIndex, SlaterCache};
pub use solve::{
    assemble_and_diagonalize, assemble_hamiltonian, feshbach_spectrum, fix_sign, second_threshold, CIState,
    FeshbachSpectrum, Spectrum,
};
