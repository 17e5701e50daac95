//! Construction of rational maps on the Riemann sphere with prescribed branch data.
//!
//! The pipeline searches for candidate maps over a small prime field, lifts
//! them p-adically with quadratically growing precision, reconstructs exact
//! algebraic coefficients by lattice reduction, enumerates the Galois
//! conjugate complex solutions, and certifies each candidate by numerically
//! computing its monodromy and comparing against the target permutation
//! tuple.

pub mod algebra;
pub mod lift;
pub mod monodromy;
pub mod pipeline;
pub mod recon;
pub mod search;
