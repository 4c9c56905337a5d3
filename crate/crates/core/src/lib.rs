//! Entanglement detection with symmetric witness operators.
//!
//! A symmetric operator `O = [A - Aᵀ] ⊗ [B - Bᵀ]` (or its single-cut
//! multipartite analogue) satisfies `ψᵀ O ψ = 0` on every product state. For a
//! mixed state `ρ`, the singular values `λ₁ ≥ λ₂ ≥ …` of
//! `S = (√ρ)ᵀ O √ρ` must obey `λ₁ ≤ Σ_{i≥2} λᵢ` whenever `ρ` is separable, so
//! any violation certifies entanglement. The crate provides the operators, the
//! pure-state concurrences built from them, the mixed-state test with seeded
//! random sampling, hollow-decomposition certificates and independent oracles
//! (PPT, two-qubit spin-flip concurrence).

pub mod cli;
pub mod concurrence;
pub mod error;
pub mod linalg;
pub mod separability;
pub mod states;
pub mod witness;

pub use error::{Error, Result};
pub use num_complex;
