//! Weighted distance matrices of Erdős–Rényi graphs: spectra, energy
//! functionals, and the asymptotic predictions they are compared against.

pub mod energies;
pub mod experiments;
pub mod graph;
pub mod matrices;
pub mod predict;
pub mod spectral;
pub mod verify;
pub mod weights;
