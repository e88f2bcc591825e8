//! Exact two-qubit simulator and single-observable witnesses for initial
//! system–environment correlations.
//!
//! A qubit `S` couples to a qubit environment `E` through isotropic
//! Heisenberg exchange. Every product preparation `ρ_S ⊗ ρ_E` with a fixed,
//! calibrated `ρ_S` keeps `z(t) = ⟨σ_z⟩(t)` inside a closed-form interval
//! (the factorized envelope). An observed value outside that interval
//! certifies that the initial joint state was correlated. The same logic is
//! carried over to the pure-dephasing model, where the bound is on the
//! transverse coherence `x(t) = ⟨σ_x⟩(t)`.
//!
//! Module map:
//!
//! * [`linalg`]: dense 2×2 / 4×4 complex matrices, Bloch vectors, the
//!   correlation-tensor decomposition of two-qubit states.
//! * [`exchange`]: the exchange unitary, full-state evolution, the
//!   partial-swap Bloch law and the signal `z(t)`.
//! * [`witness`]: the factorized envelope and the one-sided witness.
//! * [`dephasing`]: decoherence functions, the dephased reduced state and
//!   the coherence envelope.
//! * [`states`]: the three canonical correlated preparations and their
//!   closed-form trajectories.
//! * [`oracle`]: brute-force checks that share no code path with the closed
//!   forms.
//!
//! Basis ordering is `|00⟩, |01⟩, |10⟩, |11⟩` with the system as the first
//! tensor factor.

pub mod dephasing;
pub mod error;
pub mod exchange;
pub mod linalg;
pub mod oracle;
pub mod states;
pub mod witness;

pub use error::{Error, Result};
pub use exchange::ExchangeParams;
pub use linalg::{BlochVector, ComplexMatrix, CorrelationTensor, JointState};
pub use witness::{Envelope, WitnessReport};

/// Norm slack allowed on Bloch vectors extracted from floating-point states.
pub const BLOCH_NORM_TOL: f64 = 1e-12;

/// Default eigenvalue tolerance for positive-semidefiniteness checks.
pub const DEFAULT_PSD_TOL: f64 = 1e-10;

/// Default witness tolerance for analytic (noise-free) trajectories.
pub const DEFAULT_WITNESS_TOL: f64 = 1e-9;
