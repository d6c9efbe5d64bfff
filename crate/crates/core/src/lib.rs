//! Fermionic-linear-optics simulation with quasiprobability decompositions
//! of non-Gaussian channels.
//!
//! The crate is organised around three layers:
//!
//! * exact algebra — Pauli strings, Majorana monomials and the Jordan–Wigner
//!   correspondence between them ([`pauli`]), plus a Pfaffian routine
//!   ([`pfaffian`]) used for Wick expectation values;
//! * simulation backends — a covariance-matrix Gaussian engine
//!   ([`gaussian`]) and a small dense density-matrix oracle ([`oracle`])
//!   used to cross-check it;
//! * decomposition and sampling — Pauli-transfer-matrix channel models
//!   ([`channels`]), L1-minimising quasiprobability decompositions
//!   ([`nonlinearity`]), a Monte-Carlo estimator over decomposed circuits
//!   ([`sampler`]) and a fermionic-ansatz front end ([`uccsd`]).
//!
//! [`validate`] wires the layers together into a self-test suite.

pub mod channels;
pub mod error;
pub mod gaussian;
mod lp;
pub mod nonlinearity;
pub mod oracle;
pub mod pauli;
pub mod pfaffian;
pub mod sampler;
pub mod uccsd;
pub mod validate;

pub use channels::{BasisChannelSet, ChannelPTM, ChannelStep, ExecChannel};
pub use error::{Error, Result};
pub use gaussian::{GaussianState, OrthogonalRotation};
pub use nonlinearity::{
    circuit_cost, hoeffding_samples, nonlinearity, solve_l1, CostReport, DecompositionCache,
    GateCost, QuasiDecomposition,
};
pub use pauli::{jw_majorana, jw_monomial, majorana_from_pauli, pauli_multiply};
pub use pauli::{MajoranaMonomial, PauliString, Phase};
pub use pfaffian::pfaffian;
pub use sampler::{CircuitIR, EstimateResult, Gate, Observable, SampleBudget};
pub use uccsd::{AmplitudeSet, BudgetedCostReport, ExtrapolationReport, N4Formula};
