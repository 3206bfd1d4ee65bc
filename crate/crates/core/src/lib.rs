//! Reconstruction of hopping-Hamiltonian couplings from spectral data, and
//! tools for measuring how unknown longer-range couplings bias the
//! nearest-neighbour estimate.

pub mod analysis;
pub mod cli;
pub mod ensemble;
mod error;
pub mod estimation;
pub mod graph;
pub mod model;
pub mod output;
pub mod spectral;

pub use error::{Error, Result};
