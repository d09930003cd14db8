//! Entanglement dynamics of two masses coupled by gravity under dephasing.
//!
//! The pair is modelled as two qubits (left/right branch of each particle)
//! with an Ising coupling `ω = ΔT/ħ` and independent exponential dephasing.
//! Every closed-form result has a numeric counterpart computed from the
//! state itself, so the two routes can be checked against each other.

pub mod chsh;
pub mod density;
pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod fluctuations;
pub mod linalg;
pub mod model;
pub mod pauli;
pub mod roots;

pub use chsh::{
    chsh_threshold, correlation_matrix, horodecki_M, CorrelationMatrix, HorodeckiReport,
};
pub use density::DensityMatrix;
pub use dynamics::{decohere_pair, decohere_single, evolve_closed, evolve_numeric, DecayModel};
pub use entanglement::{
    entanglement_window, lambda_closed, lambda_numeric, optimal_time, EntanglementReport,
};
pub use error::{Error, Result};
pub use fluctuations::{
    averaged_state, lambda_bar, max_time_jitter, monte_carlo_average, AveragedState,
    FluctuationSpec, MonteCarloEstimate,
};
pub use linalg::{kron, partial_transpose, ComplexMatrix, Matrix2, Matrix3, Matrix4, Subsystem};
pub use model::{hamiltonian, unitary, PhysicalParams, SimPoint};
