//! Entanglement of indistinguishable particles in the occupation-number
//! representation.
//!
//! States live in a [`fock::FockSpace`] of labelled modes. Entanglement
//! between sites (or arms) is the von Neumann entropy of the reduced density
//! matrix obtained by a fermionic partial trace, split into particle-number
//! sectors by [`entropy::occupancy_sector_decompose`]. The remaining modules
//! build on that: the Schliemann and Wootters measures, response to small
//! dynamical perturbations, Bell states with overlapping orbitals, the
//! two-pair beam-splitter experiment and two-qubit teleportation.

pub mod cli;
pub mod dynamics;
pub mod entropy;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod measures;
pub mod omar;
pub mod overlap;
pub mod teleport;

pub use entropy::{occupancy_sector_decompose, partial_trace, von_neumann_entropy, DensityMatrix, EntanglementReport};
pub use error::{Error, Result};
pub use fock::{FockOp, FockSpace, ModeLabel, OccupationPattern, QuantumState, Spin, StateFile, Statistics, C64};
