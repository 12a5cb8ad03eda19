//! Density-matrix simulation and training of adaptive Hamiltonian learning
//! (AHL) circuits and their baseline quantum neural networks.
//!
//! The crate is layered bottom-up:
//!
//! * [`linalg`], [`pauli`], [`state`]: dense complex matrices, Pauli strings,
//!   state vectors and density matrices.
//! * [`gates`], [`noise`]: half-angle rotations, CNOT, and Kraus channels.
//! * [`hamiltonian`]: lattice Hamiltonians, exponentials, ground energies.
//! * [`ansatz`], [`circuit`]: parameterized circuits and their simulation.
//! * [`training`]: losses, finite-difference gradients, gradient descent.
//! * [`experiments`]: datasets, presets, and CSV/SVG artifacts.
//!
//! Qubit 0 is always the leftmost (most significant) tensor factor.

pub mod ansatz;
pub mod circuit;
pub mod eigen;
pub mod error;
pub mod exec;
pub mod experiments;
pub mod expm;
pub mod gates;
pub mod hamiltonian;
pub mod linalg;
pub mod noise;
pub mod pauli;
pub mod state;
pub mod training;

pub use error::{Error, Result};

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 8;
